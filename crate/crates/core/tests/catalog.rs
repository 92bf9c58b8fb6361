use std::collections::BTreeMap;

use gradlca::algebra::{
    audit_jacobi, audit_module, audit_skew, parse_param_value, AlgebraSpec, Bracket, ParamValue,
};
use gradlca::catalog::{build_family, build_module, family_spec, Family, ModuleKind, Params};
use gradlca::lie::sl2_data;
use gradlca::poly::{parse, ParamSet, Poly};
use gradlca::Error;

fn pp(t: &str) -> Poly {
    parse(t, &ParamSet::new(["s", "b"])).unwrap()
}

fn params(kv: &[(&str, &str)]) -> Params {
    kv.iter()
        .map(|(k, v)| (k.to_string(), parse_param_value(v).unwrap()))
        .collect()
}

fn window(f: Family) -> (i64, i64) {
    if f.min_degree().is_some() {
        (-1, 6)
    } else {
        (-6, 6)
    }
}

#[test]
fn every_family_builds_and_audits() {
    for f in Family::ALL {
        let ps = if f == Family::SCL2 { params(&[("b", "1/2")]) } else { Params::new() };
        let a = build_family(f, &ps, window(f)).unwrap_or_else(|e| panic!("{f}: {e}"));
        assert!(audit_skew(&a).passed(), "{f}");
    }
}

#[test]
fn family_values() {
    let vir = build_family(Family::Vir, &Params::new(), (-6, 6)).unwrap();
    assert_eq!(vir.p(0, 0), pp("d+2*x"));
    assert_eq!(vir.label(0), "L");
    let ecl = build_family(Family::ECL, &Params::new(), (-3, 3)).unwrap();
    assert_eq!(ecl.p(1, -1), pp("(d+s)*(d+2*s)"));
    assert_eq!(ecl.p(0, 2), pp("-2"));
    let scl = build_family(Family::SCL2, &params(&[("b", "0")]), (-3, 3)).unwrap();
    assert_eq!(scl.p(2, -2), pp("2"));
    assert_eq!(scl.p(0, 3), pp("3*(-x+2*s)*(x-s)"));
    assert_eq!(scl.label(0), "M_0");
    let cur = build_family(Family::CurSl2, &Params::new(), (-1, 1)).unwrap();
    assert_eq!(cur.p(0, 1), pp("2"));
    assert_eq!(cur.p(1, -1), pp("1"));
    assert_eq!(cur.label(-1), "f");
    let cl3 = family_spec(Family::CL3, &Params::new(), (-3, 3)).unwrap();
    assert_eq!(cl3.p(2, 0), pp("2*(d+x+2*s)"));
    let m2 = family_spec(Family::M2, &Params::new(), (-3, 3)).unwrap();
    assert_eq!(m2.p(-1, 3), pp("2"));
    assert_eq!(m2.p(3, -1), pp("-2"));
    assert_eq!(m2.p(1, -3), pp("2"));
    assert_eq!(m2.p(-1, 1), pp("-1"));
    assert_eq!(m2.p(2, 3), pp("0"));
}

#[test]
fn m1_is_the_upper_half_of_m2() {
    let m1 = family_spec(Family::M1, &Params::new(), (-1, 6)).unwrap();
    let m2 = family_spec(Family::M2, &Params::new(), (-6, 6)).unwrap();
    for i in -1..=6 {
        for j in -1..=6 {
            if i + j >= -1 {
                assert_eq!(m1.p(i, j), m2.p(i, j), "({i},{j})");
            }
        }
    }
}

#[test]
fn ecl_degenerates_at_zero() {
    let ecl = build_family(Family::ECL, &params(&[("s", "0")]), (-6, 6)).unwrap();
    assert_eq!(ecl.p(2, -2), pp("2*d^2"));
}

#[test]
fn scl2_divisibility_and_domains() {
    for b in ["0", "1/2", "-1"] {
        let a = build_family(Family::SCL2, &params(&[("b", b)]), (-6, 6)).unwrap();
        assert!(audit_jacobi(&a, -6, 6).passed(), "b={b}");
    }
    let e = family_spec(Family::SCL2, &params(&[("b", "1/3")]), (-3, 3));
    assert!(matches!(e, Err(Error::ParamDomain(_))));
    let e = family_spec(Family::SCL2, &Params::new(), (-3, 3));
    assert!(matches!(e, Err(Error::ParamDomain(_))));
    let e = family_spec(Family::CL1, &Params::new(), (-3, 3));
    assert!(matches!(e, Err(Error::WindowDomain(_))));
    let e = family_spec(Family::V, &params(&[("q", "1")]), (-3, 3));
    assert!(matches!(e, Err(Error::Malformed(_))));
}

#[test]
fn modules() {
    let vir = build_family(Family::Vir, &Params::new(), (0, 0)).unwrap();
    let m = build_module(ModuleKind::Mab, &Params::new(), &vir).unwrap();
    assert_eq!(m.q(0, 0), parse("d+a*x+b", &ParamSet::new(["a", "b"])).unwrap());
    assert!(audit_module(&m, 0, 0).passed());
    let m0 = build_module(ModuleKind::Mab, &params(&[("a", "0"), ("b", "0")]), &vir).unwrap();
    assert_eq!(m0.q(0, 0), pp("d"));
    let cur = build_family(Family::CurSl2, &Params::new(), (-1, 1)).unwrap();
    let mu = build_module(ModuleKind::MU, &Params::new(), &cur).unwrap();
    assert!(audit_module(&mu, -1, 1).passed());
    assert!(mu.q(1, 0).is_zero());
    assert!(matches!(
        build_module(ModuleKind::Mab, &Params::new(), &cur),
        Err(Error::BaseMismatch(_))
    ));
    assert!(matches!(
        build_module(ModuleKind::MU, &Params::new(), &vir),
        Err(Error::BaseMismatch(_))
    ));
}

#[test]
fn sl2_data_shape() {
    let g = sl2_data();
    assert_eq!(g.dim(), 3);
    assert!(g.jacobi_failures().is_empty());
}

#[test]
fn perturbed_loop_virasoro_fails() {
    let v = family_spec(Family::V, &params(&[("s", "1")]), (-3, 3)).unwrap();
    let mut t = match v.to_table(-3, 3).unwrap().bracket() {
        Bracket::Table(t) => t.clone(),
        _ => unreachable!(),
    };
    let bump = pp("x^2");
    let p11 = t[&(1, 1)].add(&bump);
    t.insert((1, 1), p11);
    let a = AlgebraSpec::new(
        "perturbed",
        BTreeMap::<_, ParamValue>::new(),
        v.to_table(-3, 3).unwrap().support(),
        Bracket::Table(t),
    )
    .unwrap()
    .with_truncation(true);
    assert!(!audit_skew(&a).passed() || !audit_jacobi(&a, -3, 3).passed());
}
