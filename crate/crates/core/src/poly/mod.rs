//! Exact polynomials in ∂, λ, μ, i, j, k over the rational function field in
//! named parameters.

mod param;
mod parse;
mod scalar;
mod uni;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use param::{PMono, ParamPoly, Sym};
pub use parse::{parameter_names, parse, parse_scalar, ParamSet};
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared identifier `{name}` at position {pos}")]
    Undeclared { name: String, pos: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameter constraint violated: `{vanishing}` vanishes")]
    ParameterConstraint { vanishing: String },
    #[error("divisor `{0}` is not a parameter expression")]
    NonScalarDivisor(String),
    #[error("result is not polynomial in the remaining variables: {0}")]
    NotPolynomial(String),
}

/// The distinguished variables; `X` is λ and `Y` is μ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    D,
    X,
    Y,
    I,
    J,
    K,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::D, Var::X, Var::Y, Var::I, Var::J, Var::K];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["d", "x", "y", "i", "j", "k"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u32; 6]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; 6])
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = [0; 6];
        m[v.index()] = e;
        Mono(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 6]
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(o.0.iter()) {
            *a += b;
        }
        Mono(m)
    }

    fn with_exp(&self, v: Var, e: u32) -> Mono {
        let mut m = self.0;
        m[v.index()] = e;
        Mono(m)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial, terms keyed in graded-lex order with d > x > y > i > j > k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Mono::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Mono::var(v, 1), Scalar::one())
    }

    pub fn term(m: Mono, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn d() -> Self {
        Poly::var(Var::D)
    }

    pub fn x() -> Self {
        Poly::var(Var::X)
    }

    pub fn y() -> Self {
        Poly::var(Var::Y)
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when the polynomial has no distinguished variables.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for v in Var::ALL {
                if m.exp(v) > 0 {
                    out.insert(v);
                }
            }
        }
        out
    }

    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.vars().iter().all(|v| allowed.contains(v))
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for c in self.terms.values() {
            out.extend(c.symbols());
        }
        out
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Coefficient of `v^e`, as a polynomial in the other variables.
    pub fn coeff_in(&self, v: Var, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == e {
                out.add_term(m.with_exp(v, 0), c.clone());
            }
        }
        out
    }

    /// Coefficients in powers of `v`, index = exponent.
    pub fn to_uni(&self, v: Var) -> Vec<Poly> {
        let deg = match self.degree_in(v) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_uni(v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                out.add_term(m.with_exp(v, m.exp(v) + e as u32), x.clone());
            }
        }
        out
    }

    /// Simultaneous substitution of distinguished variables.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut keep = Mono::one();
            let mut acc = Poly::constant(c.clone());
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                match bindings.get(&v) {
                    None => keep = keep.with_exp(v, e),
                    Some(b) => {
                        let pw = cache.entry((v, e)).or_insert_with(|| b.pow(e)).clone();
                        acc = acc.mul(&pw);
                    }
                }
            }
            if !keep.is_one() {
                acc = acc.mul(&Poly::term(keep, Scalar::one()));
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn subs(&self, pairs: &[(Var, Poly)]) -> Poly {
        self.substitute(&pairs.iter().cloned().collect())
    }

    /// Substitutes integer values for the grading indices.
    pub fn at_indices(&self, i: i64, j: i64, k: i64) -> Poly {
        let mut b = BTreeMap::new();
        for (v, n) in [(Var::I, i), (Var::J, j), (Var::K, k)] {
            if self.degree_in(v).unwrap_or(0) > 0 {
                b.insert(v, Poly::int(n));
            }
        }
        self.substitute(&b)
    }

    /// Substitutes parameter values in every coefficient.
    pub fn specialize(&self, bindings: &BTreeMap<Sym, Scalar>) -> Result<Poly, PolyError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.specialize(bindings)?);
        }
        Ok(out)
    }

    /// Value at d = x = y = 0 (indices left alone).
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Mono::one())
    }

    /// The homogeneous part of total degree `n` in d, x, y.
    pub fn homogeneous_part(&self, n: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(Var::D) + m.exp(Var::X) + m.exp(Var::Y) == n {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn divide_in_var(&self, q: &Poly, v: Var) -> Result<(Poly, Poly), PolyError> {
        uni::divide_in_var(self, q, v)
    }

    pub fn gcd_in_var(&self, q: &Poly, v: Var) -> Result<Poly, PolyError> {
        uni::gcd_in_var(self, q, v)
    }

    /// Exact quotient when `q` divides `self` in `v`.
    pub fn div_exact_in(&self, q: &Poly, v: Var) -> Option<Poly> {
        let (quo, rem) = self.divide_in_var(q, v).ok()?;
        rem.is_zero().then_some(quo)
    }

    /// Monic normalization with respect to `v`.
    pub fn monic_in(&self, v: Var) -> Result<Poly, PolyError> {
        uni::monic_in(self, v)
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                Poly::$m(self, o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                Poly::$m(self, &o)
            }
        }
    };
}

poly_binop!(Add, add);
poly_binop!(Sub, sub);
poly_binop!(Mul, mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl From<Scalar> for Poly {
    fn from(c: Scalar) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if m.is_one() {
                let s = c.to_string();
                if first {
                    f.write_str(&s)?;
                } else if c.is_polynomial() {
                    for (pm, pc) in c.numer().terms().rev() {
                        let t = ParamPoly::monomial(pm.clone(), pc.clone()).to_string();
                        match t.strip_prefix('-') {
                            Some(rest) => write!(f, " - {rest}")?,
                            None => write!(f, " + {t}")?,
                        }
                    }
                } else {
                    match s.strip_prefix('-') {
                        Some(rest) => write!(f, " - {rest}")?,
                        None => write!(f, " + {s}")?,
                    }
                }
                first = false;
                continue;
            }
            let (neg, body) = if c.is_one() {
                (false, String::new())
            } else if c.neg().is_one() {
                (true, String::new())
            } else if c.is_monomial() {
                let neg = c.leading_negative();
                let a = if neg { c.neg() } else { c.clone() };
                (neg, format!("{a}*"))
            } else {
                (false, format!("({c})*"))
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            write!(f, "{body}{m}")?;
            first = false;
        }
        Ok(())
    }
}
