use std::collections::BTreeMap;

use gradlca::algebra::{
    audit_jacobi, audit_module, audit_skew, lambda_bracket, n_products, AlgebraSpec, Bracket,
    Element, Locus, ModuleSpec, ParamValue, Status, Support,
};
use gradlca::poly::{parse, ParamSet, Poly, Sym};

fn pp(t: &str) -> Poly {
    parse(t, &ParamSet::new(["s", "a", "b"])).unwrap()
}

fn vir() -> AlgebraSpec {
    AlgebraSpec::from_json(
        r#"{"name":"Vir","support":{"window":[0,0]},"brackets":[{"i":0,"j":0,"poly":"d+2*x"}]}"#,
    )
    .unwrap()
}

fn loop_vir(poly: &str) -> AlgebraSpec {
    AlgebraSpec::from_json(&format!(
        r#"{{"name":"V","params":{{"s":"free"}},"support":{{"rule":true}},"brackets":[{{"poly":"{poly}"}}]}}"#
    ))
    .unwrap()
}

#[test]
fn vir_bracket_and_products() {
    let a = vir();
    let l = Element::generator(0);
    let br = lambda_bracket(&a, &l, &l).unwrap();
    assert_eq!(br[&0], pp("d+2*x"));
    let dl = Element::single(0, pp("d"));
    let br = lambda_bracket(&a, &dl, &l).unwrap();
    assert_eq!(br[&0], pp("-x*(d+2*x)"));
    let np = n_products(&a, &l, &l).unwrap();
    assert_eq!(np.len(), 2);
    assert_eq!(np[&0].parts()[&0], pp("d"));
    assert_eq!(np[&1].parts()[&0], pp("2"));
    assert!(n_products(&a, &Element::zero(), &l).unwrap().is_empty());
    assert!(lambda_bracket(&a, &Element::generator(1), &l).is_err());
}

#[test]
fn loop_virasoro_bracket() {
    let a = loop_vir("d+2*x+s*(i-j)");
    let br = lambda_bracket(&a, &Element::generator(2), &Element::generator(-1)).unwrap();
    assert_eq!(br[&1], pp("d+2*x+3*s"));
}

#[test]
fn skew_audits() {
    assert!(audit_skew(&vir()).passed());
    let bad = AlgebraSpec::from_json(
        r#"{"name":"B","support":{"window":[0,0]},"brackets":[{"i":0,"j":0,"poly":"d+3*x"}]}"#,
    )
    .unwrap();
    let rep = audit_skew(&bad);
    let f = rep.failures().find(|e| e.check == "skew").unwrap();
    assert_eq!(f.residual, pp("-d"));
    let zero = AlgebraSpec::from_json(
        r#"{"name":"Z","support":{"window":[-2,2]},"brackets":[]}"#,
    )
    .unwrap();
    assert!(audit_skew(&zero).passed());
    assert!(audit_jacobi(&zero, -2, 2).passed());
}

#[test]
fn symbolic_jacobi_and_mutation() {
    let v = loop_vir("d+2*x+s*(i-j)");
    let rep = audit_jacobi(&v, -3, 3);
    assert!(rep.passed());
    assert_eq!(rep.entries()[0].locus, Locus::Symbolic("i,j,k".into()));
    let m = loop_vir("d+2*x+s*(i+j)");
    let rep = audit_jacobi(&m, -3, 3);
    assert!(!rep.passed());
    assert!(rep
        .failures()
        .any(|e| e.locus == Locus::Triple(1, 1, -1)));
}

#[test]
fn mab_module() {
    let base = vir();
    let mk = |poly: &str| {
        let params: BTreeMap<Sym, ParamValue> = [("a", ParamValue::Free), ("b", ParamValue::Free)]
            .into_iter()
            .map(|(k, v)| (Sym::from(k), v))
            .collect();
        ModuleSpec::new(
            "M",
            base.clone(),
            params,
            Support::Window(0, 0),
            Bracket::Table(BTreeMap::from([((0, 0), pp(poly))])),
        )
        .unwrap()
    };
    assert!(audit_module(&mk("d+a*x+b"), 0, 0).passed());
    assert!(!audit_module(&mk("d+a*x^2+b"), 0, 0).passed());
}

#[test]
fn json_round_trip() {
    let v = loop_vir("d+2*x+s*(i-j)");
    let back = AlgebraSpec::from_json(&v.to_json().to_string()).unwrap();
    assert_eq!(back, v);
    let piece = AlgebraSpec::from_json(
        r#"{"name":"P","support":{"rule":true,"min":-1},"brackets":[
            {"guard":"i == 0","poly":"-j"},{"guard":"j == 0","poly":"i"},{"poly":"0"}]}"#,
    )
    .unwrap();
    let back = AlgebraSpec::from_json(&piece.to_json().to_string()).unwrap();
    assert_eq!(back, piece);
}

#[test]
fn constructor_rejections() {
    let e = AlgebraSpec::from_json(
        r#"{"name":"T","support":{"window":[0,1]},"brackets":[{"i":0,"j":1,"poly":"x"}]}"#,
    );
    assert!(e.is_err());
    let e = AlgebraSpec::from_json(
        r#"{"name":"R","support":{"rule":true},"brackets":[{"poly":"d"},{"guard":"i == 0","poly":"x"}]}"#,
    );
    assert!(e.is_err());
    let e = AlgebraSpec::from_json(
        r#"{"name":"R","support":{"rule":true},"brackets":[{"guard":"i >= 0","poly":"d"},{"guard":"i <= 0","poly":"x"}]}"#,
    );
    assert!(e.is_err());
    let e = AlgebraSpec::from_json(
        r#"{"name":"R","support":{"rule":true},"brackets":[{"poly":"d*y"}]}"#,
    );
    assert!(e.is_err());
    let e = AlgebraSpec::from_json(
        r#"{"name":"R","support":{"rule":true},"brackets":[{"poly":"t*d"}]}"#,
    );
    assert!(e.is_err());
}

#[test]
fn skipped_triples_are_listed() {
    let v = loop_vir("d+2*x+s*(i-j)").to_table(-2, 2).unwrap();
    let rep = audit_jacobi(&v, -2, 2);
    assert!(rep.passed());
    assert!(rep.count(Status::Skipped) > 0);
    let s = rep.skipped().next().unwrap();
    assert!(s.note.contains("outside"));
}
