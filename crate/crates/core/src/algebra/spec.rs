use std::collections::BTreeMap;

use num_rational::BigRational;

use super::guard::Guard;
use crate::poly::{ParamSet, Poly, Scalar, Sym, Var};
use crate::{Error, Result};

/// Degrees carrying a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    Window(i64, i64),
    All,
    AtLeast(i64),
}

impl Support {
    pub fn contains(&self, i: i64) -> bool {
        match *self {
            Support::Window(lo, hi) => lo <= i && i <= hi,
            Support::All => true,
            Support::AtLeast(lo) => i >= lo,
        }
    }

    /// Support degrees inside `[lo, hi]`.
    pub fn clip(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|i| self.contains(*i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Support::Window(..))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Free,
    Fixed(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub guard: Guard,
    pub poly: Poly,
}

/// Ordered guarded polynomials in (∂, λ, i, j); the first matching guard wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseRule {
    branches: Vec<Branch>,
}

pub(crate) const OVERLAP_BOX: i64 = 10;

impl PiecewiseRule {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        if let Some(k) = branches.iter().position(|b| b.guard.is_always()) {
            if k + 1 != branches.len() {
                return Err(Error::CatchAllNotLast);
            }
        }
        Ok(PiecewiseRule { branches })
    }

    pub fn uniform(poly: Poly) -> Self {
        PiecewiseRule {
            branches: vec![Branch {
                guard: Guard::always(),
                poly,
            }],
        }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_uniform(&self) -> bool {
        self.branches.len() == 1 && self.branches[0].guard.is_always()
    }

    pub fn select(&self, i: i64, j: i64) -> Option<usize> {
        self.branches.iter().position(|b| b.guard.holds(i, j))
    }

    pub fn eval(&self, i: i64, j: i64) -> Poly {
        match self.select(i, j) {
            Some(k) => self.branches[k].poly.at_indices(i, j, 0),
            None => Poly::zero(),
        }
    }

    fn check_overlaps(&self, support: &Support) -> Result<()> {
        for i in -OVERLAP_BOX..=OVERLAP_BOX {
            for j in -OVERLAP_BOX..=OVERLAP_BOX {
                if !(support.contains(i) && support.contains(j)) {
                    continue;
                }
                let hits: Vec<usize> = (0..self.branches.len())
                    .filter(|k| !self.branches[*k].guard.is_always())
                    .filter(|k| self.branches[*k].guard.holds(i, j))
                    .collect();
                if hits.len() < 2 {
                    continue;
                }
                let first = self.branches[hits[0]].poly.at_indices(i, j, 0);
                for k in &hits[1..] {
                    if self.branches[*k].poly.at_indices(i, j, 0) != first {
                        return Err(Error::Overlap {
                            a: hits[0],
                            b: *k,
                            i,
                            j,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn map_polys(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Self> {
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch {
                    guard: b.guard.clone(),
                    poly: f(&b.poly)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseRule { branches })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracket {
    Table(BTreeMap<(i64, i64), Poly>),
    Rule(PiecewiseRule),
}

impl Bracket {
    pub fn value(&self, i: i64, j: i64) -> Poly {
        match self {
            Bracket::Table(t) => t.get(&(i, j)).cloned().unwrap_or_default(),
            Bracket::Rule(r) => r.eval(i, j),
        }
    }

    fn polys(&self) -> Vec<&Poly> {
        match self {
            Bracket::Table(t) => t.values().collect(),
            Bracket::Rule(r) => r.branches.iter().map(|b| &b.poly).collect(),
        }
    }

    fn map_polys(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Self> {
        Ok(match self {
            Bracket::Table(t) => Bracket::Table(
                t.iter()
                    .map(|(k, p)| Ok((*k, f(p)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?
                    .into_iter()
                    .filter(|(_, p)| !p.is_zero())
                    .collect(),
            ),
            Bracket::Rule(r) => Bracket::Rule(r.map_polys(f)?),
        })
    }
}

fn fixed_bindings(params: &BTreeMap<Sym, ParamValue>) -> BTreeMap<Sym, Scalar> {
    params
        .iter()
        .filter_map(|(k, v)| match v {
            ParamValue::Fixed(q) => Some((k.clone(), Scalar::from_rational(q.clone()))),
            ParamValue::Free => None,
        })
        .collect()
}

fn check_polys(bracket: &Bracket, params: &BTreeMap<Sym, ParamValue>) -> Result<()> {
    let allowed: &[Var] = match bracket {
        Bracket::Table(_) => &[Var::D, Var::X],
        Bracket::Rule(_) => &[Var::D, Var::X, Var::I, Var::J],
    };
    for p in bracket.polys() {
        if !p.uses_only(allowed) {
            return Err(Error::BadVariables {
                poly: p.to_string(),
                allowed: allowed.iter().map(|v| v.name()).collect::<Vec<_>>().join(","),
            });
        }
        for s in p.symbols() {
            if !params.contains_key(&s) {
                return Err(Error::Malformed(format!("undeclared parameter `{s}`")));
            }
        }
    }
    Ok(())
}

/// A Z-graded Lie conformal algebra with rank-one components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    name: String,
    params: BTreeMap<Sym, ParamValue>,
    support: Support,
    labels: BTreeMap<i64, String>,
    bracket: Bracket,
    truncated: bool,
}

impl AlgebraSpec {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<Sym, ParamValue>,
        support: Support,
        bracket: Bracket,
    ) -> Result<Self> {
        check_polys(&bracket, &params)?;
        let fixed = fixed_bindings(&params);
        let bracket = bracket.map_polys(|p| Ok(p.specialize(&fixed)?))?;
        match &bracket {
            Bracket::Table(t) => {
                if !support.is_finite() {
                    return Err(Error::Malformed(
                        "explicit tables need a finite window support".into(),
                    ));
                }
                for (i, j) in t.keys() {
                    if !(support.contains(*i) && support.contains(*j) && support.contains(i + j)) {
                        return Err(Error::OutOfSupport(if support.contains(*i) { *j } else { *i }));
                    }
                    if !t.contains_key(&(*j, *i)) {
                        return Err(Error::MissingSkewPartner(*i, *j));
                    }
                }
            }
            Bracket::Rule(r) => r.check_overlaps(&support)?,
        }
        Ok(AlgebraSpec {
            name: name.into(),
            params,
            support,
            labels: BTreeMap::new(),
            bracket,
            truncated: false,
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<i64, String>) -> Self {
        self.labels = labels;
        self
    }

    /// Marks a finite table as a window onto a larger algebra.
    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<Sym, ParamValue> {
        &self.params
    }

    pub fn param_set(&self) -> ParamSet {
        ParamSet::new(self.params.keys().map(|s| &**s))
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn bracket(&self) -> &Bracket {
        &self.bracket
    }

    pub fn labels(&self) -> &BTreeMap<i64, String> {
        &self.labels
    }

    pub fn label(&self, i: i64) -> String {
        self.labels
            .get(&i)
            .cloned()
            .unwrap_or_else(|| format!("L_{i}"))
    }

    pub fn has(&self, i: i64) -> bool {
        self.support.contains(i)
    }

    /// The structure polynomial p_{i,j}(∂,λ); zero off the support.
    pub fn p(&self, i: i64, j: i64) -> Poly {
        if !(self.has(i) && self.has(j) && self.has(i + j)) {
            return Poly::zero();
        }
        self.bracket.value(i, j)
    }

    /// Materializes the bracket as an explicit table on `[lo, hi]`.
    pub fn to_table(&self, lo: i64, hi: i64) -> Result<AlgebraSpec> {
        let degrees = self.support.clip(lo, hi);
        if degrees.is_empty() {
            return Err(Error::WindowDomain(format!("no support in [{lo},{hi}]")));
        }
        let mut t = BTreeMap::new();
        for &i in &degrees {
            for &j in &degrees {
                if i + j < lo || i + j > hi {
                    continue;
                }
                let p = self.p(i, j);
                if !p.is_zero() {
                    t.insert((i, j), p);
                }
            }
        }
        let (a, b) = (degrees[0], *degrees.last().unwrap());
        // entries whose partner fell outside the window are dropped symmetrically
        let keys: Vec<_> = t.keys().copied().collect();
        for (i, j) in keys {
            if !t.contains_key(&(j, i)) {
                t.remove(&(i, j));
            }
        }
        let labels = degrees.iter().map(|i| (*i, self.label(*i))).collect();
        Ok(AlgebraSpec {
            name: self.name.clone(),
            params: self.params.clone(),
            support: Support::Window(a, b),
            labels,
            bracket: Bracket::Table(t),
            truncated: true,
        })
    }
}

impl AlgebraSpec {
    /// Table on `[lo, hi]` for the subalgebra generated by q_i(∂)L_i, each
    /// taken as a fresh generator. Missing multipliers are 1.
    pub fn rebased(&self, mult: &BTreeMap<i64, Poly>, lo: i64, hi: i64) -> Result<AlgebraSpec> {
        let fixed = fixed_bindings(&self.params);
        let mult = mult
            .iter()
            .map(|(i, q)| Ok((*i, q.specialize(&fixed)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let one = Poly::one();
        let q = |i: i64| mult.get(&i).unwrap_or(&one);
        let neg_x = Poly::x().neg();
        let d_plus_x = Poly::d().add(&Poly::x());
        let mut t = BTreeMap::new();
        let degrees = self.support.clip(lo, hi);
        for &i in &degrees {
            for &j in &degrees {
                if !(lo..=hi).contains(&(i + j)) {
                    continue;
                }
                let p = self.p(i, j);
                if p.is_zero() {
                    continue;
                }
                let num = q(i)
                    .subs(&[(Var::D, neg_x.clone())])
                    .mul(&q(j).subs(&[(Var::D, d_plus_x.clone())]))
                    .mul(&p);
                let den = q(i + j);
                let val = if den.is_one() {
                    num
                } else {
                    let (quo, rem) = num.divide_in_var(den, Var::D)?;
                    if !rem.is_zero() {
                        return Err(Error::Precondition(format!(
                            "bracket ({i},{j}) is not divisible by {den}"
                        )));
                    }
                    quo
                };
                if !val.is_zero() {
                    t.insert((i, j), val);
                }
            }
        }
        let (a, b) = match (degrees.first(), degrees.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(Error::WindowDomain(format!("no support in [{lo},{hi}]"))),
        };
        let labels = degrees.iter().map(|i| (*i, self.label(*i))).collect();
        Ok(AlgebraSpec {
            name: self.name.clone(),
            params: self.params.clone(),
            support: Support::Window(a, b),
            labels,
            bracket: Bracket::Table(t),
            truncated: true,
        })
    }
}

/// A finite C[∂]-combination of generators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    parts: BTreeMap<i64, Poly>,
}

impl Element {
    pub fn new(parts: BTreeMap<i64, Poly>) -> Result<Self> {
        for p in parts.values() {
            if !p.uses_only(&[Var::D]) {
                return Err(Error::BadVariables {
                    poly: p.to_string(),
                    allowed: "d".into(),
                });
            }
        }
        Ok(Element {
            parts: parts.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        })
    }

    pub fn zero() -> Self {
        Element::default()
    }

    pub fn generator(i: i64) -> Self {
        Element::single(i, Poly::one())
    }

    /// `f(∂)·L_i`; `f` must be a polynomial in ∂.
    pub fn single(i: i64, f: Poly) -> Self {
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(i, f);
        }
        Element { parts }
    }

    pub fn parts(&self) -> &BTreeMap<i64, Poly> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, o: &Element) -> Element {
        let mut parts = self.parts.clone();
        for (i, p) in &o.parts {
            let s = parts.get(i).map(|q| q.add(p)).unwrap_or_else(|| p.clone());
            parts.insert(*i, s);
        }
        Element {
            parts: parts.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    /// Applies ∂.
    pub fn derive(&self) -> Element {
        Element {
            parts: self
                .parts
                .iter()
                .map(|(i, p)| (*i, p.mul(&Poly::d())))
                .collect(),
        }
    }
}

fn check_degrees(a: &AlgebraSpec, e: &Element) -> Result<()> {
    for i in e.parts.keys() {
        if !a.has(*i) {
            return Err(Error::OutOfSupport(*i));
        }
    }
    Ok(())
}

/// [u λ v] as a map degree → coefficient in (∂, λ).
pub fn lambda_bracket(a: &AlgebraSpec, u: &Element, v: &Element) -> Result<BTreeMap<i64, Poly>> {
    check_degrees(a, u)?;
    check_degrees(a, v)?;
    let neg_x = Poly::x().neg();
    let d_plus_x = Poly::d().add(&Poly::x());
    let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
    for (i, f) in &u.parts {
        let f_neg = f.subs(&[(Var::D, neg_x.clone())]);
        for (j, g) in &v.parts {
            let p = a.p(*i, *j);
            if p.is_zero() {
                continue;
            }
            let g_shift = g.subs(&[(Var::D, d_plus_x.clone())]);
            let term = f_neg.mul(&g_shift).mul(&p);
            let e = out.entry(i + j).or_default();
            *e = e.add(&term);
        }
    }
    Ok(out.into_iter().filter(|(_, p)| !p.is_zero()).collect())
}

/// The n-th products u_(n) v, read off the λ-bracket.
pub fn n_products(a: &AlgebraSpec, u: &Element, v: &Element) -> Result<BTreeMap<u32, Element>> {
    let br = lambda_bracket(a, u, v)?;
    let mut out: BTreeMap<u32, BTreeMap<i64, Poly>> = BTreeMap::new();
    for (deg, p) in br {
        let mut fact = Scalar::one();
        for (n, c) in p.to_uni(Var::X).into_iter().enumerate() {
            if n > 0 {
                fact = fact.mul(&Scalar::from_int(n as i64));
            }
            if !c.is_zero() {
                out.entry(n as u32).or_default().insert(deg, c.scale(&fact));
            }
        }
    }
    out.into_iter()
        .map(|(n, parts)| Ok((n, Element::new(parts)?)))
        .collect()
}

/// A module over an algebra, rank at most one per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    name: String,
    base: AlgebraSpec,
    params: BTreeMap<Sym, ParamValue>,
    support: Support,
    labels: BTreeMap<i64, String>,
    action: Bracket,
}

impl ModuleSpec {
    pub fn new(
        name: impl Into<String>,
        base: AlgebraSpec,
        params: BTreeMap<Sym, ParamValue>,
        support: Support,
        action: Bracket,
    ) -> Result<Self> {
        let mut all = base.params().clone();
        all.extend(params.clone());
        check_polys(&action, &all)?;
        let fixed = fixed_bindings(&params);
        let action = action.map_polys(|p| Ok(p.specialize(&fixed)?))?;
        if let Bracket::Table(t) = &action {
            for (i, m) in t.keys() {
                if !(base.has(*i) && support.contains(*m) && support.contains(i + m)) {
                    return Err(Error::OutOfSupport(*m));
                }
            }
        }
        Ok(ModuleSpec {
            name: name.into(),
            base,
            params,
            support,
            labels: BTreeMap::new(),
            action,
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<i64, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &AlgebraSpec {
        &self.base
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn action(&self) -> &Bracket {
        &self.action
    }

    pub fn params(&self) -> &BTreeMap<Sym, ParamValue> {
        &self.params
    }

    /// The action polynomial q_{i,m}(∂,λ) of L_i on v_m.
    pub fn q(&self, i: i64, m: i64) -> Poly {
        if !(self.base.has(i) && self.support.contains(m) && self.support.contains(i + m)) {
            return Poly::zero();
        }
        self.action.value(i, m)
    }
}
