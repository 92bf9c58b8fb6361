//! The named families, their modules, and current algebras over graded Lie algebras.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::algebra::{
    audit_jacobi, audit_skew, skew_image, AlgebraSpec, Branch, Bracket, Guard, ModuleSpec,
    ParamValue, PiecewiseRule, Support,
};
use crate::lie::{sl2_data, LieAlgebraData};
use crate::poly::{parse, ParamSet, Poly, Sym, Var};
use crate::{Error, Result};

/// `Some(2b)` when 2b is an integer.
fn is_half_integer(b: &BigRational) -> Option<i64> {
    let two_b = b * BigRational::from_integer(2.into());
    if two_b.is_integer() {
        two_b.to_integer().to_i64()
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Vir,
    CurSl2,
    V,
    CL1,
    CL2,
    SCL2,
    CL3,
    ECL,
    M1,
    M2,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Vir,
        Family::CurSl2,
        Family::V,
        Family::CL1,
        Family::CL2,
        Family::SCL2,
        Family::CL3,
        Family::ECL,
        Family::M1,
        Family::M2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Vir => "vir",
            Family::CurSl2 => "cur-sl2",
            Family::V => "v",
            Family::CL1 => "cl1",
            Family::CL2 => "cl2",
            Family::SCL2 => "scl2",
            Family::CL3 => "cl3",
            Family::ECL => "ecl",
            Family::M1 => "m1",
            Family::M2 => "m2",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::V | Family::CL1 | Family::CL3 | Family::ECL => &["s"],
            Family::CL2 | Family::SCL2 => &["b", "s"],
            _ => &[],
        }
    }

    /// Lowest degree of the support, when bounded below.
    pub fn min_degree(self) -> Option<i64> {
        match self {
            Family::CL1 | Family::M1 => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown family `{s}`")))
    }
}

pub type Params = BTreeMap<String, ParamValue>;

fn resolve_params(f: Family, given: &Params) -> Result<BTreeMap<Sym, ParamValue>> {
    for k in given.keys() {
        if !f.param_names().contains(&k.as_str()) {
            return Err(Error::Malformed(format!("family {f} has no parameter `{k}`")));
        }
    }
    Ok(f.param_names()
        .iter()
        .map(|n| {
            (
                Sym::from(*n),
                given.get(*n).cloned().unwrap_or(ParamValue::Free),
            )
        })
        .collect())
}

fn pp(text: &str) -> Poly {
    parse(text, &ParamSet::new(["s", "b"])).expect("catalog polynomial")
}

fn branch(guard: &str, poly: &str) -> Branch {
    Branch {
        guard: Guard::parse(guard).expect("catalog guard"),
        poly: pp(poly),
    }
}

/// Appends the skew partners of `raw` and a zero catch-all.
fn with_skew_partners(raw: Vec<Branch>) -> Vec<Branch> {
    let swap = BTreeMap::from([(Var::I, Poly::var(Var::J)), (Var::J, Poly::var(Var::I))]);
    let partners: Vec<Branch> = raw
        .iter()
        .map(|b| Branch {
            guard: b.guard.swapped(),
            poly: skew_image(&b.poly.substitute(&swap)).neg(),
        })
        .collect();
    let mut out = raw;
    out.extend(partners);
    out.push(Branch {
        guard: Guard::always(),
        poly: Poly::zero(),
    });
    out
}

fn rule(branches: Vec<Branch>) -> Bracket {
    Bracket::Rule(PiecewiseRule::new(branches).expect("catalog rule"))
}

fn uniform(poly: &str) -> Bracket {
    Bracket::Rule(PiecewiseRule::uniform(pp(poly)))
}

/// The current algebra over rank-one graded Lie algebra data.
pub fn current_algebra(name: &str, g: &LieAlgebraData) -> Result<AlgebraSpec> {
    let degrees: Vec<i64> = g.basis().iter().map(|(_, d)| *d).collect();
    let mut uniq = degrees.clone();
    uniq.sort();
    uniq.dedup();
    if uniq.len() != degrees.len() {
        return Err(Error::Shape("each degree must carry at most one basis label".into()));
    }
    let (lo, hi) = match (uniq.first(), uniq.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::Shape("empty basis".into())),
    };
    if (lo..=hi).any(|d| !uniq.contains(&d)) {
        return Err(Error::Shape("degrees must form an interval".into()));
    }
    let mut t = BTreeMap::new();
    for (a, i) in g.basis() {
        for (b, j) in g.basis() {
            for (l, c) in g.bracket(a, b) {
                if g.degree_of(&l) != Some(i + j) {
                    return Err(Error::Shape(format!("[{a},{b}] is not homogeneous")));
                }
                t.insert((*i, *j), Poly::constant(c));
            }
        }
    }
    let labels = g.basis().iter().map(|(l, d)| (*d, l.clone())).collect();
    Ok(AlgebraSpec::new(name, BTreeMap::new(), Support::Window(lo, hi), Bracket::Table(t))?
        .with_labels(labels))
}

fn family_bracket(f: Family) -> (Support, Bracket) {
    match f {
        Family::V => (Support::All, uniform("d + 2*x + s*(i - j)")),
        Family::CL1 => (
            Support::AtLeast(-1),
            uniform("(i + 1)*d + (i + j + 2)*x + s*(i - j)"),
        ),
        Family::CL2 => (
            Support::All,
            uniform("(i + b)*d + (i + j + 2*b)*x + s*(i - j)"),
        ),
        Family::CL3 => (
            Support::All,
            rule(vec![
                branch("i + j == 0", "i*(d + s)"),
                branch("i == 0", "-j*(-x + 2*s)"),
                branch("j == 0", "i*(d + x + 2*s)"),
                branch("", "i*d + (i + j)*x + s*(i - j)"),
            ]),
        ),
        Family::ECL => (
            Support::All,
            rule(vec![
                branch("i + j == 0", "i*(d + s)*(d + 2*s)"),
                branch("i == 0", "-j"),
                branch("j == 0", "i"),
                branch("", "i*d + (i + j)*x + s*(i - j)"),
            ]),
        ),
        Family::M1 => (
            Support::AtLeast(-1),
            rule(with_skew_partners(vec![
                branch("i == 1 && j == 1", "d + 2*x"),
                branch("i == -1 && j >= 1", "(j + 1)*(j - 2)/2"),
                branch("i == 0", "-j"),
                branch("i == 1 && j >= 2", "1"),
            ])),
        ),
        Family::M2 => (
            Support::All,
            rule(with_skew_partners(vec![
                branch("i == -1 && j == -1", "d + 2*x"),
                branch("i == -1 && j <= -2", "1"),
                branch("i == -1 && j >= 1", "(j + 1)*(j - 2)/2"),
                branch("i == 0", "-j"),
                branch("i == 1 && j == 1", "d + 2*x"),
                branch("i == 1 && j <= -2", "(j - 1)*(j + 2)/2"),
                branch("i == 1 && j >= 2", "1"),
                branch("|i| >= 2 && |j| >= 2", "0"),
            ])),
        ),
        Family::Vir | Family::CurSl2 | Family::SCL2 => unreachable!("table families"),
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Vir => "Vir",
        Family::CurSl2 => "Cur sl2",
        Family::V => "V(s)",
        Family::CL1 => "CL1(s)",
        Family::CL2 => "CL2(b,s)",
        Family::SCL2 => "SCL2(b,s)",
        Family::CL3 => "CL3(s)",
        Family::ECL => "ECL(s)",
        Family::M1 => "M(1)",
        Family::M2 => "M(2)",
    }
}

/// Builds a family without auditing it.
pub fn family_spec(f: Family, params: &Params, window: (i64, i64)) -> Result<AlgebraSpec> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::WindowDomain(format!("empty window [{lo},{hi}]")));
    }
    if let Some(m) = f.min_degree() {
        if lo < m {
            return Err(Error::WindowDomain(format!(
                "{} lives in degrees >= {m}; window starts at {lo}",
                family_name(f)
            )));
        }
    }
    let ps = resolve_params(f, params)?;
    match f {
        Family::Vir => {
            let t = BTreeMap::from([((0, 0), pp("d + 2*x"))]);
            Ok(
                AlgebraSpec::new("Vir", ps, Support::Window(0, 0), Bracket::Table(t))?
                    .with_labels(BTreeMap::from([(0, "L".to_string())])),
            )
        }
        Family::CurSl2 => current_algebra("Cur sl2", &sl2_data()),
        Family::SCL2 => {
            let b = match &ps[&Sym::from("b")] {
                ParamValue::Fixed(b) => b.clone(),
                ParamValue::Free => {
                    return Err(Error::ParamDomain("SCL2 needs a fixed b with 2b an integer".into()))
                }
            };
            let Some(two_b) = is_half_integer(&b) else {
                return Err(Error::ParamDomain(format!("2b must be an integer, got b = {b}")));
            };
            let n0 = -two_b;
            let cl2 = AlgebraSpec::new(
                family_name(Family::CL2),
                ps,
                Support::All,
                uniform("(i + b)*d + (i + j + 2*b)*x + s*(i - j)"),
            )?;
            let mult = BTreeMap::from([(n0, pp("d + 2*s"))]);
            let mut labels: BTreeMap<i64, String> =
                (lo..=hi).map(|i| (i, format!("L_{i}"))).collect();
            labels.insert(n0, format!("M_{n0}"));
            Ok(cl2
                .rebased(&mult, lo, hi)?
                .with_name(family_name(Family::SCL2))
                .with_labels(labels))
        }
        _ => {
            let (support, bracket) = family_bracket(f);
            AlgebraSpec::new(family_name(f), ps, support, bracket)
        }
    }
}

/// Builds a family and audits it on `window`.
pub fn build_family(f: Family, params: &Params, window: (i64, i64)) -> Result<AlgebraSpec> {
    let a = family_spec(f, params, window)?;
    let mut rep = audit_skew(&a);
    rep.merge(audit_jacobi(&a, window.0, window.1));
    if let Some(e) = rep.failures().next() {
        return Err(Error::Inconsistent(format!(
            "{} fails {} at {}: {}",
            a.name(),
            e.check,
            e.locus,
            e.residual
        )));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Mab,
    MU,
}

impl FromStr for ModuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModuleKind> {
        match s {
            "mab" => Ok(ModuleKind::Mab),
            "mu" => Ok(ModuleKind::MU),
            _ => Err(Error::Malformed(format!("unknown module `{s}`"))),
        }
    }
}

/// M_{a,b} over Vir, or the trivial one-dimensional M_U over a current algebra.
pub fn build_module(kind: ModuleKind, params: &Params, base: &AlgebraSpec) -> Result<ModuleSpec> {
    match kind {
        ModuleKind::Mab => {
            let vir = family_spec(Family::Vir, &Params::new(), (0, 0))?;
            if base.bracket() != vir.bracket() || base.support() != vir.support() {
                return Err(Error::BaseMismatch("M_{a,b} is defined over Vir".into()));
            }
            let mut ps = BTreeMap::new();
            for k in params.keys() {
                if k != "a" && k != "b" {
                    return Err(Error::Malformed(format!("M_{{a,b}} has no parameter `{k}`")));
                }
            }
            for n in ["a", "b"] {
                ps.insert(Sym::from(n), params.get(n).cloned().unwrap_or(ParamValue::Free));
            }
            let q = parse("d + a*x + b", &ParamSet::new(["a", "b"]))?;
            Ok(ModuleSpec::new(
                "M(a,b)",
                base.clone(),
                ps,
                Support::Window(0, 0),
                Bracket::Table(BTreeMap::from([((0, 0), q)])),
            )?
            .with_labels(BTreeMap::from([(0, "v".to_string())])))
        }
        ModuleKind::MU => {
            if !base.name().starts_with("Cur") {
                return Err(Error::BaseMismatch("M_U is defined over a current algebra".into()));
            }
            if !params.is_empty() {
                return Err(Error::Malformed("M_U takes no parameters".into()));
            }
            Ok(ModuleSpec::new(
                "M_U",
                base.clone(),
                BTreeMap::new(),
                Support::Window(0, 0),
                Bracket::Table(BTreeMap::new()),
            )?
            .with_labels(BTreeMap::from([(0, "u".to_string())])))
        }
    }
}
