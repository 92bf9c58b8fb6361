use std::collections::BTreeMap;

use gradlca::algebra::{parse_param_value, skew_image, AlgebraSpec, Bracket, Status, Support};
use gradlca::catalog::{family_spec, Family, Params};
use gradlca::classify::{
    audit_additivity, audit_degree_bound, classify_v, ecl_reduction, extend_v_seed, normal_form,
    scl2_reduction, Certificate, ExtendOutcome, Tag, VSeed,
};
use gradlca::derived::verify_morphism;
use gradlca::poly::{parse, ParamSet, Poly, Scalar};
use gradlca::Error;

fn params(kv: &[(&str, &str)]) -> Params {
    kv.iter()
        .map(|(k, v)| (k.to_string(), parse_param_value(v).unwrap()))
        .collect()
}

fn seed_of(f: Family, kv: &[(&str, &str)]) -> VSeed {
    let lo = f.min_degree().unwrap_or(-3).max(-3);
    VSeed::from_spec(&family_spec(f, &params(kv), (lo, 3)).unwrap()).unwrap()
}

fn pp(t: &str) -> Poly {
    parse(t, &ParamSet::new(["s", "c1", "c2"])).unwrap()
}

fn scalar(t: &str) -> Scalar {
    pp(t).as_scalar().unwrap()
}

fn seed(p01: &str, pm11: &str, p11: &str, pm1m1: &str, p0m1: &str) -> VSeed {
    VSeed::new(pp(p01), pp(pm11), pp(p11), pp(pm1m1), pp(p0m1)).unwrap()
}

fn with_s(s: &str, extra: &[(&'static str, &'static str)]) -> Vec<(&'static str, String)> {
    let mut kv: Vec<(&'static str, String)> = extra.iter().map(|(k, v)| (*k, v.to_string())).collect();
    if s != "s" {
        kv.push(("s", s.to_string()));
    }
    kv
}

fn seed_with(f: Family, kv: &[(&'static str, String)]) -> VSeed {
    let kv: Vec<(&str, &str)> = kv.iter().map(|(k, v)| (*k, v.as_str())).collect();
    seed_of(f, &kv)
}

fn assert_classified(seed: &VSeed, tag: Tag, s: Option<&str>) -> gradlca::classify::NormalFormState {
    let st = classify_v(seed, 4).unwrap();
    assert_eq!(st.tag, tag, "{seed:?}");
    assert_eq!(st.s, s.map(scalar));
    let w = st.witness.as_ref().expect("witness");
    let rep = verify_morphism(w, -4, 4);
    assert!(rep.passed(), "{rep}");
    st
}

#[test]
fn type_two_round_trips() {
    for s in ["0", "1", "-2", "3/5", "s"] {
        let cl2 = with_s(s, &[("b", "0")]);
        let plain = with_s(s, &[]);
        assert_classified(&seed_with(Family::CL2, &cl2), Tag::CL2Zero, Some(s));
        let cl3_tag = if s == "0" { Tag::CL2Zero } else { Tag::CL3 };
        assert_classified(&seed_with(Family::CL3, &plain), cl3_tag, Some(s));
        assert_classified(&seed_with(Family::ECL, &plain), Tag::ECL, Some(s));
        assert_classified(&seed_with(Family::SCL2, &cl2), Tag::SCL2Zero, Some(s));
    }
}

#[test]
fn rescaled_seed_gets_a_nontrivial_witness() {
    let base = seed_of(Family::CL2, &[("b", "0"), ("s", "1")]);
    let st = assert_classified(&base.rescaled(&scalar("3"), &scalar("2/5")).unwrap(), Tag::CL2Zero, Some("1"));
    let w = st.witness.unwrap();
    assert_eq!(w.multipliers[&0], pp("5/2"));
    assert_eq!(w.multipliers[&-1], pp("1/3"));
    assert_eq!(st.scalings[&0], scalar("5/2"));
}

#[test]
fn type_one_round_trips() {
    assert_classified(&seed_of(Family::CurSl2, &[]), Tag::CurSl2, None);
    assert_classified(&seed_of(Family::M1, &[]), Tag::M1, None);
    assert_classified(&seed_of(Family::M2, &[]), Tag::M2, None);

    let m1 = seed_of(Family::M1, &[]);
    let mirrored = VSeed::new(
        m1.p0_neg1.clone(),
        skew_image(&m1.p_neg1_1).neg(),
        m1.p_neg1_neg1.clone(),
        m1.p11.clone(),
        m1.p01.clone(),
    )
    .unwrap();
    let st = assert_classified(&mirrored, Tag::M1, None);
    assert_eq!(st.witness.unwrap().sigma_sign, -1);
}

#[test]
fn type_one_multipliers() {
    // L_{-1} -> 2 L_{-1}, L_0 -> 3 L_0
    let m2 = seed_of(Family::M2, &[]).rescaled(&scalar("2"), &scalar("3")).unwrap();
    let st = assert_classified(&m2, Tag::M2, None);
    let q = &st.witness.unwrap().multipliers;
    // q_0 = -1/P(0,1), q_{-1} = 1/(P(-1,1) P(0,1))
    assert_eq!(q[&0], pp("1/3"));
    assert_eq!(q[&-1], pp("1/2"));
    assert_eq!(q[&1], pp("1"));
    assert_eq!(q[&2], pp("1"));
}

#[test]
fn degree_sum_one_is_impossible() {
    for s in [
        seed("c2", "c1*d", "d + 2*x", "d + 2*x", "-c2"),
        seed("c2*x", "c1", "d + 2*x", "d + 2*x", "c2*x"),
        seed("c2*x", "c1", "0", "0", "c2*x"),
    ] {
        let st = classify_v(&s, 4).unwrap();
        assert_eq!(st.tag, Tag::Impossible);
        let cert = st.certificate.unwrap();
        assert!(cert.check(), "{cert}");
        let Certificate::LinearSystem { residual, .. } = &cert else {
            panic!("expected a linear system, got {cert}")
        };
        let c1c2 = scalar("c1*c2");
        assert!(residual.div(&c1c2).unwrap().as_rational().is_some(), "{residual}");
    }
}

#[test]
fn tampered_certificate_fails_its_check() {
    let st = classify_v(&seed("c2", "c1*d", "d + 2*x", "d + 2*x", "-c2"), 4).unwrap();
    let Some(Certificate::LinearSystem { step, system, combination, residual, hypotheses }) = st.certificate else {
        panic!()
    };
    let bad = Certificate::LinearSystem {
        step,
        system,
        combination: combination.iter().map(|_| Scalar::one()).collect(),
        residual,
        hypotheses,
    };
    assert!(!bad.check());
}

#[test]
fn cur_sl2_seed_stays_finite() {
    let ExtendOutcome::Table(ext) = extend_v_seed(&seed_of(Family::CurSl2, &[]), 6).unwrap() else {
        panic!("extension failed")
    };
    assert_eq!(ext.spec.support(), Support::Window(-1, 1));
}

#[test]
fn cl2_extension_matches_catalog() {
    let cl2 = family_spec(Family::CL2, &params(&[("b", "0"), ("s", "1")]), (-4, 4)).unwrap();
    let ext = extend_v_seed(&VSeed::from_spec(&cl2).unwrap(), 4).unwrap().table().unwrap();
    assert_eq!(ext.spec.support(), Support::Window(-4, 4));
    for i in -4..=4i64 {
        for j in -4..=4i64 {
            if (-4..=4).contains(&(i + j)) {
                assert_eq!(ext.spec.p(i, j), cl2.p(i, j), "({i},{j})");
            }
        }
    }
}

#[test]
fn reductions_agree_on_s() {
    for s in ["1", "-2", "s"] {
        let scl2 = seed_with(Family::SCL2, &with_s(s, &[("b", "0")]));
        let first = classify_v(&scl2_reduction(&scl2, 0).unwrap(), 4).unwrap();
        let second = classify_v(&scl2_reduction(&scl2, 1).unwrap(), 4).unwrap();
        let mut tags = [first.tag, second.tag];
        tags.sort();
        assert_eq!(tags, [Tag::CL2Zero, Tag::CL3]);
        assert_eq!(first.s, Some(scalar(s)));
        assert_eq!(second.s, Some(scalar(s)));

        let ecl = seed_with(Family::ECL, &with_s(s, &[]));
        let a = classify_v(&ecl_reduction(&ecl, 0).unwrap(), 4).unwrap();
        let b = classify_v(&ecl_reduction(&ecl, 1).unwrap(), 4).unwrap();
        let mut tags = [a.tag, b.tag];
        tags.sort();
        assert_eq!(tags, [Tag::CL2Zero, Tag::CL3]);
        assert_eq!(a.s, Some(scalar(s)));
        assert_eq!(b.s, Some(scalar(s)));
    }
}

#[test]
fn bad_shapes_are_errors() {
    let too_big = seed("x", "d^2", "0", "0", "x");
    assert!(matches!(classify_v(&too_big, 4), Err(Error::Shape(_))));
    let irreducible = seed("1", "d^2 + 1", "0", "0", "-1");
    assert!(matches!(classify_v(&irreducible, 4), Err(Error::Factorization(_))));
    let mixed = VSeed::new(pp("x"), pp("d + x"), pp("0"), pp("0"), pp("x"));
    assert!(matches!(mixed.unwrap().degree_pattern(), Err(Error::Precondition(_))));
    assert!(VSeed::new(pp("x"), pp("d"), pp("d"), pp("0"), pp("x")).is_err());
}

#[test]
fn normal_form_rejects_bad_tables() {
    let v = family_spec(Family::V, &params(&[("s", "1")]), (-2, 2)).unwrap();
    assert!(matches!(normal_form(&v.to_table(-2, 2).unwrap(), -2, 2), Err(Error::Shape(_))));

    let cl2 = family_spec(Family::CL2, &params(&[("b", "0"), ("s", "1")]), (-2, 2)).unwrap();
    let Bracket::Table(mut t) = cl2.to_table(-2, 2).unwrap().bracket().clone() else {
        unreachable!()
    };
    t.insert((0, 2), pp("2*x - 5"));
    t.insert((2, 0), skew_image(&pp("2*x - 5")).neg());
    let bent = AlgebraSpec::new("bent", BTreeMap::new(), Support::Window(-2, 2), Bracket::Table(t)).unwrap();
    assert!(matches!(normal_form(&bent, -2, 2), Err(Error::Inconsistent(_))));
}

#[test]
fn seed_json_round_trip() {
    let s = seed_of(Family::ECL, &[]);
    let back = VSeed::from_json(&s.to_json().to_string()).unwrap();
    assert_eq!(back, s);
    assert!(VSeed::from_json(r#"{"p01": "x"}"#).is_err());
}

#[test]
fn audits() {
    let v = family_spec(Family::V, &Params::new(), (-3, 3)).unwrap();
    let rep = audit_additivity(&v, -3, 3).unwrap();
    assert_eq!(rep.count(Status::NotApplicable), 1);
    assert_eq!(audit_degree_bound(&v, -3, 3).unwrap().count(Status::NotApplicable), 1);

    for (f, kv) in [(Family::ECL, vec![]), (Family::CurSl2, vec![]), (Family::SCL2, vec![("b", "0")])] {
        let a = family_spec(f, &params(&kv), (-3, 3)).unwrap();
        let (lo, hi) = if f == Family::CurSl2 { (-1, 1) } else { (-3, 3) };
        assert!(audit_additivity(&a, lo, hi).unwrap().passed(), "{f}");
        assert!(audit_degree_bound(&a, lo, hi).unwrap().passed(), "{f}");
    }

    let bad = seed("x", "d^2", "0", "0", "x").to_spec().unwrap();
    let rep = audit_degree_bound(&bad, -1, 1).unwrap();
    let fail = rep.failures().next().expect("failure");
    assert!(fail.note.contains("= 3"), "{}", fail.note);
}
