use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{skew_image, AlgebraSpec, Bracket, ParamValue, Support};
use crate::poly::{parameter_names, parse, ParamSet, Poly, Scalar, Sym, Var};
use crate::{Error, Result};

/// Brackets among L_{-1}, L_0, L_1 with [L_0 λ L_0] = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VSeed {
    pub p01: Poly,
    pub p_neg1_1: Poly,
    pub p11: Poly,
    pub p_neg1_neg1: Poly,
    pub p0_neg1: Poly,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedDoc {
    p01: String,
    p_neg1_1: String,
    p11: String,
    p_neg1_neg1: String,
    p0_neg1: String,
}

pub(crate) fn diagonal_ok(p: &Poly) -> bool {
    p.is_zero()
        || p
            .divide_in_var(&Poly::d().add(&Poly::int(2).mul(&Poly::x())), Var::X)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
}

/// p_{j,i} from p_{i,j} by skew-symmetry.
pub(crate) fn partner(p: &Poly) -> Poly {
    skew_image(p).neg()
}

impl VSeed {
    pub fn new(p01: Poly, p_neg1_1: Poly, p11: Poly, p_neg1_neg1: Poly, p0_neg1: Poly) -> Result<Self> {
        for (name, p, allowed) in [
            ("p01", &p01, &[Var::X][..]),
            ("p0_neg1", &p0_neg1, &[Var::X][..]),
            ("p_neg1_1", &p_neg1_1, &[Var::D, Var::X][..]),
            ("p11", &p11, &[Var::D, Var::X][..]),
            ("p_neg1_neg1", &p_neg1_neg1, &[Var::D, Var::X][..]),
        ] {
            if !p.uses_only(allowed) {
                let allowed: Vec<&str> = allowed.iter().map(|v| v.name()).collect();
                return Err(Error::BadVariables {
                    poly: format!("{name} = {p}"),
                    allowed: allowed.join(", "),
                });
            }
        }
        for (name, p) in [("p11", &p11), ("p_neg1_neg1", &p_neg1_neg1)] {
            if !diagonal_ok(p) {
                return Err(Error::Precondition(format!("{name} = {p} is not a multiple of d + 2*x")));
            }
        }
        Ok(VSeed { p01, p_neg1_1, p11, p_neg1_neg1, p0_neg1 })
    }

    /// Reads the seed off degrees -1, 0, 1 of `a`.
    pub fn from_spec(a: &AlgebraSpec) -> Result<Self> {
        for i in [-1, 0, 1] {
            if !a.has(i) {
                return Err(Error::Precondition(format!("degree {i} is not in the support")));
            }
        }
        if !a.p(0, 0).is_zero() {
            return Err(Error::Precondition(format!("[L_0 λ L_0] = {} is not zero", a.p(0, 0))));
        }
        VSeed::new(a.p(0, 1), a.p(-1, 1), a.p(1, 1), a.p(-1, -1), a.p(0, -1))
    }

    pub fn polys(&self) -> [(&'static str, &Poly); 5] {
        [
            ("p01", &self.p01),
            ("p_neg1_1", &self.p_neg1_1),
            ("p11", &self.p11),
            ("p_neg1_neg1", &self.p_neg1_neg1),
            ("p0_neg1", &self.p0_neg1),
        ]
    }

    pub fn param_set(&self) -> ParamSet {
        let mut out = ParamSet::default();
        for (_, p) in self.polys() {
            for s in p.symbols() {
                out.insert(&s);
            }
        }
        out
    }

    pub(crate) fn params(&self) -> BTreeMap<Sym, ParamValue> {
        self.param_set().iter().map(|s| (s.clone(), ParamValue::Free)).collect()
    }

    /// (deg_∂ p_{-1,1}, deg_λ p_{0,1}); both must be nonzero and single-variable.
    pub fn degree_pattern(&self) -> Result<(u32, u32)> {
        if self.p_neg1_1.is_zero() || self.p01.is_zero() {
            return Err(Error::Precondition("p_neg1_1 and p01 must be nonzero".into()));
        }
        if !self.p_neg1_1.uses_only(&[Var::D]) {
            return Err(Error::Precondition(format!(
                "p_neg1_1 = {} depends on x",
                self.p_neg1_1
            )));
        }
        Ok((
            self.p_neg1_1.degree_in(Var::D).unwrap_or(0),
            self.p01.degree_in(Var::X).unwrap_or(0),
        ))
    }

    /// Seed for L'_{-1} = a·L_{-1}, L'_0 = c·L_0, L'_1 = L_1.
    pub fn rescaled(&self, a: &Scalar, c: &Scalar) -> Result<VSeed> {
        Ok(VSeed {
            p01: self.p01.scale(c),
            p0_neg1: self.p0_neg1.scale(c),
            p_neg1_1: self.p_neg1_1.scale(&a.div(c)?),
            p11: self.p11.clone(),
            p_neg1_neg1: self.p_neg1_neg1.scale(&a.mul(a)),
        })
    }

    /// The degree -1..1 table, truncated.
    pub fn to_spec(&self) -> Result<AlgebraSpec> {
        let mut t = BTreeMap::new();
        let mut put = |i: i64, j: i64, p: &Poly| {
            if !p.is_zero() {
                t.insert((i, j), p.clone());
                t.insert((j, i), partner(p));
            }
        };
        put(0, 1, &self.p01);
        put(0, -1, &self.p0_neg1);
        put(-1, 1, &self.p_neg1_1);
        AlgebraSpec::new("seed", self.params(), Support::Window(-1, 1), Bracket::Table(t))
            .map(|a| a.with_truncation(true))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeedDoc {
            p01: self.p01.to_string(),
            p_neg1_1: self.p_neg1_1.to_string(),
            p11: self.p11.to_string(),
            p_neg1_neg1: self.p_neg1_neg1.to_string(),
            p0_neg1: self.p0_neg1.to_string(),
        })
        .expect("serializable")
    }

    /// Parameters are whatever identifiers are not variable names.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeedDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let fields = [&doc.p01, &doc.p_neg1_1, &doc.p11, &doc.p_neg1_neg1, &doc.p0_neg1];
        let mut names = ParamSet::default();
        for f in fields {
            for s in parameter_names(f)?.iter() {
                names.insert(s);
            }
        }
        let p = |t: &str| parse(t, &names);
        VSeed::new(p(&doc.p01)?, p(&doc.p_neg1_1)?, p(&doc.p11)?, p(&doc.p_neg1_neg1)?, p(&doc.p0_neg1)?)
    }
}
