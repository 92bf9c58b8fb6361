use std::collections::BTreeMap;
use std::fs;
use std::panic;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use gradlca::algebra::{audit_jacobi, audit_skew, parse_param_value, AlgebraSpec, Bracket, Status};
use gradlca::catalog::{build_family, family_spec, Family, Params};
use gradlca::classify::{
    audit_additivity, audit_degree_bound, classify_v, extend_v_seed, Certificate, ExtendOutcome, Tag, VSeed,
};
use gradlca::derived::{
    annihilation_truncation, basic_lie_algebra, ecl_ideals, is_ideal, verify_morphism, MorphismWitness,
    SubmoduleSpec,
};
use gradlca::lie::{sl2_data, Combination};
use gradlca::poly::{parse, Mono, ParamSet, Poly, Scalar, Var};

type Outcome = Result<String, String>;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn params(kv: &[(&str, &str)]) -> Params {
    kv.iter()
        .map(|(k, v)| (k.to_string(), parse_param_value(v).unwrap()))
        .collect()
}

fn pp(t: &str) -> Poly {
    parse(t, &ParamSet::new(["s", "b", "c1", "c2"])).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn window_for(f: Family, lo: i64, hi: i64) -> (i64, i64) {
    (f.min_degree().map_or(lo, |m| m.max(lo)), hi)
}

fn family_soundness() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(Family, Params)> = Family::ALL
        .iter()
        .filter(|f| **f != Family::SCL2)
        .map(|f| (*f, Params::new()))
        .collect();
    for b in ["0", "1/2", "-1"] {
        cases.push((Family::SCL2, params(&[("b", b)])));
    }
    for (f, ps) in &cases {
        let (lo, hi) = window_for(*f, -6, 6);
        let a = build_family(*f, ps, (lo, hi)).map_err(err)?;
        let skew = audit_skew(&a);
        ensure(skew.passed(), || format!("{} skew:\n{skew}", a.name()))?;
        let jac = audit_jacobi(&a, lo, hi);
        ensure(jac.passed(), || format!("{} jacobi:\n{jac}", a.name()))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{} algebras in {t:.1?}", cases.len()))
}

fn mutation_sensitivity() -> Outcome {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixture("mutations"))
        .map_err(err)?
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    ensure(paths.len() == 10, || format!("{} fixtures", paths.len()))?;
    for p in &paths {
        let name = p.file_name().unwrap().to_string_lossy().to_string();
        let a = AlgebraSpec::from_json(&fs::read_to_string(p).map_err(err)?).map_err(|e| format!("{name}: {e}"))?;
        ensure(audit_skew(&a).passed(), || format!("{name} is not skew-consistent"))?;
        let rep = audit_jacobi(&a, -3, 3);
        ensure(rep.failures().any(|e| e.check == "jacobi"), || format!("{name} passes jacobi"))?;
    }
    Ok("10 mutants caught".into())
}

fn ecl_ideal_structure() -> Outcome {
    let (lo, hi) = (-5, 5);
    let ecl = family_spec(Family::ECL, &Params::new(), (lo, hi)).map_err(err)?;
    let b0 = params(&[("b", "0")]);
    let targets = [
        family_spec(Family::CL2, &b0, (lo, hi)).map_err(err)?,
        family_spec(Family::CL3, &Params::new(), (lo, hi)).map_err(err)?,
        family_spec(Family::SCL2, &b0, (lo, hi)).map_err(err)?,
    ];
    let found = ecl_ideals(&ecl, targets.clone(), lo, hi).map_err(err)?;
    ensure(found.len() == 3, || format!("{} ideals", found.len()))?;
    let seeds = ["d + s", "d + 2*s", "(d + s)*(d + 2*s)"];
    let files = ["ecl_to_cl2.json", "ecl_to_cl3.json", "ecl_to_scl2.json"];
    for (k, e) in found.iter().enumerate() {
        let ideal = &e.closure.ideal;
        ensure(e.seed == pp(seeds[k]), || format!("seed {} != {}", e.seed, seeds[k]))?;
        ensure(ideal.is_proper_in(&ecl, lo, hi), || format!("({})L_0 is not proper", e.seed))?;
        let rep = is_ideal(&ecl, ideal, lo, hi).map_err(err)?;
        ensure(rep.passed(), || format!("({})L_0:\n{rep}", e.seed))?;
        for other in &found[k + 1..] {
            ensure(ideal != &other.closure.ideal, || "two closures coincide".into())?;
        }
        let source = ideal.as_algebra(&ecl, lo, hi).map_err(err)?;
        let text = fs::read_to_string(fixture(&format!("witnesses/{}", files[k]))).map_err(err)?;
        let w = MorphismWitness::from_json(&text, source, targets[k].clone()).map_err(err)?;
        let rep = verify_morphism(&w, lo, hi);
        ensure(rep.passed(), || format!("{}:\n{rep}", files[k]))?;
    }
    Ok("three proper ideals, three witnesses verified".into())
}

fn scl2_ideal() -> Outcome {
    let (lo, hi) = (-5, 5);
    for (b, n0) in [("0", 0), ("1/2", -1), ("-1", 2)] {
        let cl2 = family_spec(Family::CL2, &params(&[("b", b)]), (lo, hi)).map_err(err)?;
        let mut parts: BTreeMap<i64, Poly> = (lo..=hi).map(|i| (i, Poly::one())).collect();
        parts.insert(n0, pp("d + 2*s"));
        let sub = SubmoduleSpec::new(parts).map_err(err)?;
        ensure(sub.is_proper_in(&cl2, lo, hi), || format!("b={b}: not proper"))?;
        let rep = is_ideal(&cl2, &sub, lo, hi).map_err(err)?;
        ensure(rep.passed(), || format!("b={b}:\n{rep}"))?;
    }
    Ok("b in {0, 1/2, -1}".into())
}

fn classification_round_trip() -> Outcome {
    let seed = |f: Family, kv: &[(&str, &str)]| {
        let (lo, hi) = window_for(f, -3, 3);
        VSeed::from_spec(&family_spec(f, &params(kv), (lo, hi)).map_err(err)?).map_err(err)
    };
    let check = |seed: VSeed, tag: Tag, s: Option<&str>| -> Result<(), String> {
        let st = classify_v(&seed, 4).map_err(err)?;
        ensure(st.tag == tag, || format!("expected {tag}, got {}", st.tag))?;
        let want = s.map(|s| pp(s).as_scalar().unwrap());
        ensure(st.s == want, || format!("{tag}: s = {:?}, expected {s:?}", st.s))?;
        let w = st.witness.as_ref().ok_or_else(|| format!("{tag}: no witness"))?;
        let rep = verify_morphism(w, -4, 4);
        ensure(rep.passed(), || format!("{tag} witness:\n{rep}"))
    };
    let mut n = 0;
    check(seed(Family::CurSl2, &[])?, Tag::CurSl2, None)?;
    check(seed(Family::M1, &[])?, Tag::M1, None)?;
    check(seed(Family::M2, &[])?, Tag::M2, None)?;
    n += 3;
    for s in ["0", "1", "-2", "3/5", "s"] {
        let mut kv = vec![];
        if s != "s" {
            kv.push(("s", s));
        }
        let mut b0 = kv.clone();
        b0.push(("b", "0"));
        check(seed(Family::CL2, &b0)?, Tag::CL2Zero, Some(s))?;
        // CL3(0) and CL2(0,0) coincide
        let cl3 = if s == "0" { Tag::CL2Zero } else { Tag::CL3 };
        check(seed(Family::CL3, &kv)?, cl3, Some(s))?;
        check(seed(Family::ECL, &kv)?, Tag::ECL, Some(s))?;
        check(seed(Family::SCL2, &b0)?, Tag::SCL2Zero, Some(s))?;
        n += 4;
    }
    Ok(format!("{n} seeds"))
}

fn impossibility() -> Outcome {
    let start = Instant::now();
    let patterns = [
        ("(1,0)", VSeed::new(pp("c2"), pp("c1*d"), pp("d + 2*x"), pp("d + 2*x"), pp("-c2"))),
        ("(0,1)", VSeed::new(pp("c2*x"), pp("c1"), pp("d + 2*x"), pp("d + 2*x"), pp("c2*x"))),
    ];
    for (name, seed) in patterns {
        let seed = seed.map_err(err)?;
        match extend_v_seed(&seed, 4).map_err(err)? {
            ExtendOutcome::Impossible(c @ Certificate::LinearSystem { .. }) => {
                ensure(c.check(), || format!("{name}: certificate does not check\n{c}"))?;
            }
            ExtendOutcome::Impossible(c) => return Err(format!("{name}: not a linear system\n{c}")),
            ExtendOutcome::Table(_) => return Err(format!("{name}: extended to a table")),
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("both patterns in {t:.1?}"))
}

fn derived_structures() -> Outcome {
    let vir = build_family(Family::Vir, &Params::new(), (0, 0)).map_err(err)?;
    let g = basic_lie_algebra(&vir, 0, 0).map_err(err)?;
    ensure(g.dim() == 1, || format!("Vir basic dim {}", g.dim()))?;

    let cur = build_family(Family::CurSl2, &Params::new(), (-1, 1)).map_err(err)?;
    ensure(basic_lie_algebra(&cur, -1, 1).map_err(err)? == sl2_data(), || "Cur sl2 basic != sl2".into())?;

    let v = family_spec(Family::V, &params(&[("s", "1")]), (-5, 5)).map_err(err)?;
    let g = basic_lie_algebra(&v, -5, 5).map_err(err)?;
    for i in -5..=5i64 {
        for j in -5..=5i64 {
            let (li, lj) = (format!("L_{i}"), format!("L_{j}"));
            if !(-5..=5).contains(&(i + j)) {
                if i == j {
                    continue;
                }
                ensure(g.is_truncated(&li, &lj), || format!("[{li}, {lj}] not truncated"))?;
                continue;
            }
            let want: Combination = if i == j {
                Combination::new()
            } else {
                Combination::from([(format!("L_{}", i + j), Scalar::from_int(i - j))])
            };
            ensure(g.bracket(&li, &lj) == want, || format!("[{li}, {lj}] = {:?}", g.bracket(&li, &lj)))?;
        }
    }

    let a = annihilation_truncation(&vir, 10, 0, 0).map_err(err)?;
    ensure(a.dim() == 11, || format!("annihilation dim {}", a.dim()))?;
    for m in 0..=10i64 {
        for n in 0..=10i64 {
            let (lm, ln) = (format!("L[{m}]"), format!("L[{n}]"));
            let k = m + n - 1;
            if k > 10 {
                continue;
            }
            let want: Combination = if m == n {
                Combination::new()
            } else {
                Combination::from([(format!("L[{k}]"), Scalar::from_int(m - n))])
            };
            ensure(a.bracket(&lm, &ln) == want, || format!("[{lm}, {ln}] = {:?}", a.bracket(&lm, &ln)))?;
        }
    }
    Ok("Vir, Cur sl2, V(1), annihilation(Vir, 10)".into())
}

fn small_poly() -> impl Strategy<Value = Poly> {
    let term = (0u32..=2, 0u32..=2, 0u32..=1, -4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(a, b, c, n, d, k)| {
        let coeff = Scalar::ratio(n, d).add(&Scalar::param("s").mul(&Scalar::from_int(k)));
        Poly::term(Mono([a, b, c, 0, 0, 0]), coeff)
    });
    prop::collection::vec(term, 0..5).prop_map(|ts| ts.iter().fold(Poly::zero(), |p, t| p.add(t)))
}

fn monic_d() -> impl Strategy<Value = Poly> {
    (prop::collection::vec(-3i64..=3, 0..3), 1u32..=3).prop_map(|(cs, e)| {
        cs.iter().enumerate().fold(Poly::d().pow(e + cs.len() as u32), |p, (k, c)| {
            p.add(&Poly::term(Mono::var(Var::D, k as u32), Scalar::from_int(*c)))
        })
    })
}

fn kernel_algebra() -> Outcome {
    let mut runner = TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(250)
    });
    let three = (small_poly(), small_poly(), small_poly());
    runner
        .run(&three, |(p, q, r)| {
            prop_assert_eq!(p.add(&q), q.add(&p));
            prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
            prop_assert!(p.sub(&p).is_zero());
            Ok(())
        })
        .map_err(|e| format!("ring laws: {e}"))?;
    let four = (small_poly(), small_poly(), small_poly(), small_poly());
    runner
        .run(&four, |(p, q, a, b)| {
            let bind = BTreeMap::from([(Var::D, a), (Var::X, b)]);
            prop_assert_eq!(p.mul(&q).substitute(&bind), p.substitute(&bind).mul(&q.substitute(&bind)));
            prop_assert_eq!(p.add(&q).substitute(&bind), p.substitute(&bind).add(&q.substitute(&bind)));
            Ok(())
        })
        .map_err(|e| format!("substitution: {e}"))?;
    runner
        .run(&(small_poly(), monic_d()), |(p, q)| {
            let (quo, rem) = p.divide_in_var(&q, Var::D).unwrap();
            prop_assert_eq!(q.mul(&quo).add(&rem), p.clone());
            prop_assert!(rem.degree_in(Var::D).unwrap_or(0) < q.degree_in(Var::D).unwrap());
            prop_assert_eq!(p.mul(&q).div_exact_in(&q, Var::D), Some(p));
            Ok(())
        })
        .map_err(|e| format!("division: {e}"))?;
    runner
        .run(&(monic_d(), monic_d(), monic_d()), |(a, b, r)| {
            let (ar, br) = (a.mul(&r), b.mul(&r));
            let g = ar.gcd_in_var(&br, Var::D).unwrap();
            prop_assert!(ar.div_exact_in(&g, Var::D).is_some());
            prop_assert!(br.div_exact_in(&g, Var::D).is_some());
            prop_assert!(g.div_exact_in(&r, Var::D).is_some());
            Ok(())
        })
        .map_err(|e| format!("gcd: {e}"))?;

    let names = ParamSet::new(["s", "b"]);
    let mut seen = 0;
    for f in Family::ALL {
        let (lo, hi) = window_for(f, -4, 4);
        let ps = if f == Family::SCL2 { params(&[("b", "0")]) } else { Params::new() };
        let a = family_spec(f, &ps, (lo, hi)).map_err(err)?;
        let polys: Vec<Poly> = match a.bracket() {
            Bracket::Table(t) => t.values().cloned().collect(),
            Bracket::Rule(r) => r.branches().iter().map(|b| b.poly.clone()).collect(),
        };
        for p in polys {
            let back = parse(&p.to_string(), &names).map_err(err)?;
            ensure(back == p, || format!("{f}: {p} reparsed as {back}"))?;
            seen += 1;
        }
    }
    Ok(format!("1000 random cases, {seen} catalog polynomials"))
}

fn structural_audits() -> Outcome {
    let mut n = 0;
    let b0 = params(&[("b", "0")]);
    let cases = [
        (Family::CurSl2, Params::new()),
        (Family::CL2, b0.clone()),
        (Family::SCL2, b0),
        (Family::CL3, Params::new()),
        (Family::ECL, Params::new()),
        (Family::M1, Params::new()),
        (Family::M2, Params::new()),
    ];
    for (f, ps) in &cases {
        let (lo, hi) = window_for(*f, -6, 6);
        let a = family_spec(*f, ps, (lo, hi)).map_err(err)?;
        let add = audit_additivity(&a, lo, hi).map_err(err)?;
        ensure(add.passed() && !add.entries().iter().any(|e| e.status == Status::NotApplicable), || {
            format!("{} additivity:\n{add}", a.name())
        })?;
        let deg = audit_degree_bound(&a, lo, hi).map_err(err)?;
        ensure(deg.passed(), || format!("{} degree bound:\n{deg}", a.name()))?;
        n += 1;
    }
    let v = family_spec(Family::V, &Params::new(), (-6, 6)).map_err(err)?;
    let rep = audit_additivity(&v, -6, 6).map_err(err)?;
    ensure(rep.entries().iter().any(|e| e.status == Status::NotApplicable), || format!("V(s):\n{rep}"))?;
    Ok(format!("{n} algebras, V(s) not applicable"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("family soundness", family_soundness),
        ("mutation sensitivity", mutation_sensitivity),
        ("ECL ideal structure", ecl_ideal_structure),
        ("SCL2 ideal", scl2_ideal),
        ("classification round-trip", classification_round_trip),
        ("impossibility certificate", impossibility),
        ("derived structures", derived_structures),
        ("kernel algebra", kernel_algebra),
        ("structural audits", structural_audits),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match out {
            Ok(note) => println!("PASS {} {name}: {note}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
