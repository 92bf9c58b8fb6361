use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Sym = Arc<str>;

/// Monomial in parameter symbols, sorted by name, exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PMono(Vec<(Sym, u32)>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        PMono(vec![(s, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn exp(&self, s: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| &**n == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &PMono) -> PMono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PMono(out)
    }

    pub fn div(&self, other: &PMono) -> Option<PMono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (name, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *name {
                let f = other.0[j].1;
                if f > *e {
                    return None;
                }
                if f < *e {
                    out.push((name.clone(), e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *name {
                return None;
            } else {
                out.push((name.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(PMono(out))
    }

    /// Splits off the exponent of `s`.
    pub fn split(&self, s: &str) -> (u32, PMono) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(n, k)| {
                if &**n == s {
                    e = *k;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, PMono(rest))
    }

    pub fn with(&self, s: &Sym, e: u32) -> PMono {
        if e == 0 {
            return self.clone();
        }
        self.mul(&PMono(vec![(s.clone(), e)]))
    }

    fn lex_cmp(&self, other: &PMono) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if x.1 != y.1 {
                            return x.1.cmp(&y.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl Ord for PMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial over Q in named parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<PMono, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(PMono::one(), q);
        }
        ParamPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(name: Sym) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PMono::var(name), BigRational::one());
        ParamPoly { terms }
    }

    pub fn monomial(m: PMono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The rational value if the polynomial has no parameters.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&PMono, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&PMono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (n, _) in m.factors() {
                out.insert(n.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, s: &str) -> u32 {
        self.terms.keys().map(|m| m.exp(s)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: PMono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> ParamPoly {
        if q.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() || other.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> ParamPoly {
        let mut base = self.clone();
        let mut acc = ParamPoly::one();
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

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &ParamPoly) -> Option<ParamPoly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = ParamPoly::zero();
        while let Some((lm, lc)) = rem.leading() {
            let m = lm.div(&dm)?;
            let c = lc / &dc;
            let t = ParamPoly::monomial(m.clone(), c.clone());
            rem = rem.sub(&t.mul(d));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> ParamPoly {
        match self.leading() {
            None => ParamPoly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficients in powers of `s`, index = exponent.
    pub fn to_uni(&self, s: &str) -> Vec<ParamPoly> {
        let deg = self.degree_in(s) as usize;
        let mut out = vec![ParamPoly::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(s);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_uni(s: &Sym, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, q) in &c.terms {
                out.add_term(m.with(s, e as u32), q.clone());
            }
        }
        out
    }

    /// Monic gcd over Q; gcd(0,0) = 0.
    pub fn gcd(&self, other: &ParamPoly) -> ParamPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || other.as_constant().is_some() {
            return ParamPoly::one();
        }
        if self == other {
            return self.monic();
        }
        let mut syms = self.symbols();
        syms.extend(other.symbols());
        let v = syms.into_iter().next().unwrap();
        let ua = self.to_uni(&v);
        let ub = other.to_uni(&v);
        let ca = content(&ua);
        let cb = content(&ub);
        let c = ca.gcd(&cb);
        let pa: Vec<ParamPoly> = ua.iter().map(|x| x.div_exact(&ca).unwrap()).collect();
        let pb: Vec<ParamPoly> = ub.iter().map(|x| x.div_exact(&cb).unwrap()).collect();
        let g = primitive_prs(pa, pb);
        ParamPoly::from_uni(&v, &g).mul(&c).monic()
    }

    pub fn eval_rational(&self, bindings: &BTreeMap<Sym, BigRational>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = PMono::one();
            for (n, e) in m.factors() {
                match bindings.get(n) {
                    Some(v) => coef *= pow_q(v, *e),
                    None => rest = rest.with(n, *e),
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    /// Exact square root when one exists.
    pub fn sqrt(&self) -> Option<ParamPoly> {
        if self.is_zero() {
            return Some(ParamPoly::zero());
        }
        let (lm, lc) = self.leading()?;
        let mut half = Vec::new();
        for (n, e) in lm.factors() {
            if e % 2 != 0 {
                return None;
            }
            half.push((n.clone(), e / 2));
        }
        let lead_m = PMono(half);
        let lead_c = sqrt_q(lc)?;
        let mut root = ParamPoly::monomial(lead_m.clone(), lead_c.clone());
        let two_lead = lead_c * BigRational::from_integer(BigInt::from(2));
        let limit = self.len() * 4 + 8;
        for _ in 0..limit {
            let rem = self.sub(&root.mul(&root));
            let (rm, rc) = match rem.leading() {
                None => return Some(root),
                Some(t) => t,
            };
            let m = rm.div(&lead_m)?;
            if m >= lead_m {
                return None;
            }
            let c = rc / &two_lead;
            root = root.add(&ParamPoly::monomial(m, c));
        }
        None
    }
}

fn pow_q(q: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

pub(crate) fn sqrt_q(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn content(coeffs: &[ParamPoly]) -> ParamPoly {
    let mut g = ParamPoly::zero();
    for c in coeffs {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        ParamPoly::one()
    } else {
        g
    }
}

fn trim(p: &mut Vec<ParamPoly>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn primitive_part(mut p: Vec<ParamPoly>) -> Vec<ParamPoly> {
    trim(&mut p);
    if p.is_empty() {
        return p;
    }
    let c = content(&p);
    p.iter().map(|x| x.div_exact(&c).unwrap()).collect()
}

fn prem(a: &[ParamPoly], b: &[ParamPoly]) -> Vec<ParamPoly> {
    let mut r: Vec<ParamPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&lr));
        }
        trim(&mut r);
    }
    r
}

fn primitive_prs(a: Vec<ParamPoly>, b: Vec<ParamPoly>) -> Vec<ParamPoly> {
    let (mut a, mut b) = (primitive_part(a), primitive_part(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![ParamPoly::one()];
        }
        let r = primitive_part(prem(&a, &b));
        a = b;
        b = r;
    }
    a
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}
