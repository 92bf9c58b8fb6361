use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::extend::Certificate;
use crate::algebra::{AlgebraSpec, ParamValue};
use crate::catalog::{family_spec, Family, Params};
use crate::derived::MorphismWitness;
use crate::poly::{Poly, Scalar, Var};
use crate::{Error, Result};

#[allow(clippy::upper_case_acronyms)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    CurSl2,
    M1,
    M2,
    ECL,
    SCL2Zero,
    CL2Zero,
    CL3,
    Impossible,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::CurSl2 => "CurSl2",
            Tag::M1 => "M1",
            Tag::M2 => "M2",
            Tag::ECL => "ECL",
            Tag::SCL2Zero => "SCL2_0",
            Tag::CL2Zero => "CL2_0",
            Tag::CL3 => "CL3",
            Tag::Impossible => "Impossible",
        }
    }

    /// The catalog family carrying this tag.
    pub fn family(self) -> Option<Family> {
        Some(match self {
            Tag::CurSl2 => Family::CurSl2,
            Tag::M1 => Family::M1,
            Tag::M2 => Family::M2,
            Tag::ECL => Family::ECL,
            Tag::SCL2Zero => Family::SCL2,
            Tag::CL2Zero => Family::CL2,
            Tag::CL3 => Family::CL3,
            Tag::Impossible => return None,
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of classifying a class-V seed.
#[derive(Clone, Debug)]
pub struct NormalFormState {
    pub tag: Tag,
    pub s: Option<Scalar>,
    /// Constant terms d_{m,n} of the normalized structure polynomials.
    pub d: BTreeMap<(i64, i64), Scalar>,
    /// Generator rescalings used to reach the normal form, by degree.
    pub scalings: BTreeMap<i64, Scalar>,
    pub witness: Option<MorphismWitness>,
    pub certificate: Option<Certificate>,
}

impl NormalFormState {
    pub(crate) fn impossible(c: Certificate) -> Self {
        NormalFormState {
            tag: Tag::Impossible,
            s: None,
            d: BTreeMap::new(),
            scalings: BTreeMap::new(),
            witness: None,
            certificate: Some(c),
        }
    }

    pub fn to_json(&self) -> Value {
        let d: serde_json::Map<String, Value> = self
            .d
            .iter()
            .map(|((m, n), c)| (format!("{m},{n}"), Value::String(c.to_string())))
            .collect();
        let scalings: serde_json::Map<String, Value> = self
            .scalings
            .iter()
            .map(|(k, c)| (k.to_string(), Value::String(c.to_string())))
            .collect();
        json!({
            "tag": self.tag.as_str(),
            "s": self.s.as_ref().map(|s| s.to_string()),
            "d": d,
            "scalings": scalings,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "certificate": self.certificate.as_ref().map(|c| c.to_json()),
        })
    }
}

impl fmt::Display for NormalFormState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tag: {}", self.tag)?;
        if let Some(s) = &self.s {
            writeln!(f, "s: {s}")?;
        }
        if let Some(w) = &self.witness {
            let q: Vec<String> = w.multipliers.iter().map(|(i, q)| format!("{i}: {q}")).collect();
            writeln!(
                f,
                "witness: {} -> {}, i -> {}i{:+}, multipliers {{{}}}",
                w.source.name(),
                w.target.name(),
                w.sigma_sign,
                w.sigma_shift,
                q.join(", ")
            )?;
        }
        if let Some(c) = &self.certificate {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn sc(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Reads d_{m,n} off a table whose linear parts are m∂ + (m+n)λ, checks the
/// recursions they satisfy and decides between CL2(0,s) and CL3(s).
pub fn normal_form(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<NormalFormState> {
    let degs = a.support().clip(lo, hi);
    for i in [-1, 0, 1] {
        if !degs.contains(&i) {
            return Err(Error::Precondition(format!("degree {i} missing from the window")));
        }
    }
    let mut d = BTreeMap::new();
    for &m in &degs {
        for &n in &degs {
            if !degs.contains(&(m + n)) {
                continue;
            }
            let lin = Poly::d().scale(&sc(m)).add(&Poly::x().scale(&sc(m + n)));
            let rest = a.p(m, n).sub(&lin);
            if !rest.vars().is_empty() {
                return Err(Error::Shape(format!(
                    "p_{{{m},{n}}} = {} does not have linear part {lin}",
                    a.p(m, n)
                )));
            }
            d.insert((m, n), rest.constant_term());
        }
    }
    let get = |m: i64, n: i64| d.get(&(m, n)).cloned();
    let d01 = get(0, 1).expect("window holds 0, 1");
    let dm11 = get(-1, 1).expect("window holds -1, 1");
    let sum = d01.add(&dm11);
    let third = |k: i64| sum.mul(&Scalar::ratio(k, 3));
    let check = |what: &str, lhs: Scalar, rhs: Scalar| -> Result<()> {
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("{what}: {lhs} != {rhs}")))
        }
    };
    for &n in &degs {
        if let Some(v) = get(0, n) {
            check(&format!("d_{{0,{n}}} = {n}*d_{{0,1}}"), v, d01.mul(&sc(n)))?;
        }
        if let (Some(a1), Some(a0), Some(b1), Some(b0)) =
            (get(-1, n + 1), get(-1, n), get(1, n), get(1, n - 1))
        {
            check(&format!("difference relation at n = {n}"), a1.sub(&a0), b1.sub(&b0))?;
        }
        if n > 1 || n <= -1 {
            if let Some(v) = get(-1, n) {
                check(&format!("d_{{-1,{n}}}"), v, third(n + 1))?;
            }
        }
        if n >= 1 || n < -1 {
            if let Some(v) = get(1, n) {
                check(&format!("d_{{1,{n}}}"), v, third(n - 1))?;
            }
        }
    }
    let d1m1 = get(1, -1).expect("window holds 1, -1");
    for (&(m, n), v) in &d {
        if m + n != 0 && m * n != 0 {
            check(&format!("d_{{{m},{n}}}"), v.clone(), third(n - m))?;
        }
        if m + n == 0 {
            check(&format!("d_{{{m},{n}}}"), v.clone(), d1m1.mul(&sc(m)))?;
        }
    }
    let two = sc(2);
    let cl2 = dm11 == d01.mul(&two);
    let cl3 = d01 == dm11.mul(&two);
    let (tag, s) = if cl2 {
        if cl3 {
            zero_coincidence(lo, hi)?;
        }
        (Tag::CL2Zero, d01.neg())
    } else if cl3 {
        (Tag::CL3, dm11.neg())
    } else {
        return Err(Error::Inconsistent(format!(
            "neither d_{{-1,1}} = 2 d_{{0,1}} nor d_{{0,1}} = 2 d_{{-1,1}} (d_{{0,1}} = {d01}, d_{{-1,1}} = {dm11})"
        )));
    };
    for (&(m, n), v) in &d {
        let want = match tag {
            Tag::CL2Zero => s.mul(&sc(m - n)),
            _ if m + n == 0 => s.mul(&sc(m)),
            _ if m == 0 => s.mul(&sc(-2 * n)),
            _ if n == 0 => s.mul(&sc(2 * m)),
            _ => s.mul(&sc(m - n)),
        };
        check(&format!("{tag} table at d_{{{m},{n}}}"), v.clone(), want)?;
    }
    Ok(NormalFormState {
        tag,
        s: Some(s),
        d,
        scalings: BTreeMap::new(),
        witness: None,
        certificate: None,
    })
}

/// CL3(0) and CL2(0,0) have the same table.
fn zero_coincidence(lo: i64, hi: i64) -> Result<()> {
    let zero = |f: Family, ps: &[(&str, i64)]| {
        let params: Params = ps
            .iter()
            .map(|(k, v)| (k.to_string(), ParamValue::Fixed(BigRational::from_integer((*v).into()))))
            .collect();
        family_spec(f, &params, (lo, hi))
    };
    let cl3 = zero(Family::CL3, &[("s", 0)])?;
    let cl2 = zero(Family::CL2, &[("b", 0), ("s", 0)])?;
    for i in lo..=hi {
        for j in lo..=hi {
            if cl3.p(i, j) != cl2.p(i, j) {
                return Err(Error::Inconsistent(format!(
                    "CL3(0) and CL2(0,0) differ at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// The ∂-coefficient of a polynomial at most linear in ∂.
pub(crate) fn d_coeff(p: &Poly) -> Scalar {
    p.coeff_in(Var::D, 1).constant_term()
}
