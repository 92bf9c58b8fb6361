use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::linear::LinearSystem;
use super::seed::{partner, VSeed};
use crate::algebra::{audit_jacobi, audit_skew, AlgebraSpec, Bracket, Support};
use crate::poly::{Poly, Scalar, Var};
use crate::{Error, Result};

/// Why a seed cannot be extended to a Lie conformal algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Σ combination[e]·equation[e] reads 0 = residual with residual ≠ 0.
    LinearSystem {
        step: String,
        system: LinearSystem,
        combination: Vec<Scalar>,
        residual: Scalar,
        hypotheses: Vec<Scalar>,
    },
    /// A Jacobi identity that no choice satisfies.
    Obstruction { step: String, residual: Poly, note: String },
}

impl Certificate {
    /// Recomputes the combination; true when it really gives 0 = r ≠ 0.
    pub fn check(&self) -> bool {
        match self {
            Certificate::LinearSystem { system, combination, residual, .. } => {
                if combination.len() != system.equations.len() || residual.is_zero() {
                    return false;
                }
                let (coeffs, rhs) = system.combine(combination);
                coeffs.iter().all(|c| c.is_zero()) && &rhs == residual
            }
            Certificate::Obstruction { residual, .. } => !residual.is_zero(),
        }
    }

    pub fn step(&self) -> &str {
        match self {
            Certificate::LinearSystem { step, .. } | Certificate::Obstruction { step, .. } => step,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Certificate::LinearSystem { step, system, combination, residual, hypotheses } => json!({
                "kind": "linear-system",
                "step": step,
                "system": system.to_json(),
                "combination": combination.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "residual": residual.to_string(),
                "hypotheses": hypotheses.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "valid": self.check(),
            }),
            Certificate::Obstruction { step, residual, note } => json!({
                "kind": "obstruction",
                "step": step,
                "residual": residual.to_string(),
                "note": note,
                "valid": self.check(),
            }),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::LinearSystem { step, system, combination, residual, hypotheses } => {
                writeln!(f, "inconsistent linear system at {step}")?;
                writeln!(f, "unknowns: {}", system.unknowns.join(", "))?;
                write!(f, "{system}")?;
                let w: Vec<String> = combination.iter().map(|c| c.to_string()).collect();
                writeln!(f, "combination: [{}]", w.join(", "))?;
                writeln!(f, "combination gives 0 = {residual}")?;
                if !hypotheses.is_empty() {
                    let h: Vec<String> = hypotheses.iter().map(|c| c.to_string()).collect();
                    writeln!(f, "assuming nonzero: {}", h.join(", "))?;
                }
                Ok(())
            }
            Certificate::Obstruction { step, residual, note } => {
                writeln!(f, "obstruction at {step}: {note}")?;
                writeln!(f, "residual: {residual}")
            }
        }
    }
}

/// A seed grown to a table on [lo, hi].
#[derive(Clone, Debug)]
pub struct Extension {
    pub spec: AlgebraSpec,
    /// c_{±1,±k}: the factor divided out of p_{±1,±k} to normalize it.
    pub scalings: BTreeMap<i64, Scalar>,
}

#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Table(Extension),
    Impossible(Certificate),
}

impl ExtendOutcome {
    pub fn table(self) -> Option<Extension> {
        match self {
            ExtendOutcome::Table(e) => Some(e),
            ExtendOutcome::Impossible(_) => None,
        }
    }
}

fn at(p: &Poly, d: Poly, x: Poly) -> Poly {
    p.substitute(&BTreeMap::from([(Var::D, d), (Var::X, x)]))
}

fn d() -> Poly {
    Poly::d()
}

fn x() -> Poly {
    Poly::x()
}

fn y() -> Poly {
    Poly::y()
}

/// Exact quotient in the polynomial ring, if there is one.
pub(crate) fn exact_div(num: &Poly, den: &Poly) -> Option<Poly> {
    if den.is_zero() {
        return None;
    }
    if let Some(c) = den.as_scalar() {
        return Some(num.scale(&c.inv().ok()?));
    }
    let v = [Var::Y, Var::X, Var::D]
        .into_iter()
        .find(|v| den.degree_in(*v).unwrap_or(0) > 0)?;
    num.div_exact_in(den, v)
}

/// Scales so the ∂-coefficient is `sign`, else the constant term is 1.
fn normalize(p: &Poly, sign: i64) -> (Poly, Scalar) {
    let lin = p.coeff_in(Var::D, 1).constant_term();
    let c = if !lin.is_zero() {
        lin.mul(&Scalar::from_int(sign))
    } else {
        let k = p.constant_term();
        if k.is_zero() {
            Scalar::one()
        } else {
            k
        }
    };
    let inv = c.inv().expect("nonzero");
    (p.scale(&inv), c)
}

struct Engine {
    t: BTreeMap<(i64, i64), Poly>,
    hypotheses: Vec<Scalar>,
    scalings: BTreeMap<i64, Scalar>,
}

enum Step {
    Grew,
    Stopped,
}

impl Engine {
    fn get(&self, i: i64, j: i64) -> Poly {
        self.t.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn put(&mut self, i: i64, j: i64, p: Poly) {
        if p.is_zero() {
            self.t.remove(&(i, j));
            self.t.remove(&(j, i));
        } else {
            self.t.insert((j, i), partner(&p));
            self.t.insert((i, j), p);
        }
    }

    fn refute(&self, step: String, system: LinearSystem) -> std::result::Result<Vec<Scalar>, Certificate> {
        system.solve().map_err(|r| {
            let mut hypotheses = self.hypotheses.clone();
            hypotheses.extend(r.divisors.iter().filter(|c| c.as_rational().is_none()).cloned());
            let mut seen = Vec::new();
            hypotheses.retain(|h| {
                let key = h.numer().monic();
                let fresh = !seen.contains(&key);
                seen.push(key);
                fresh
            });
            Certificate::LinearSystem {
                step,
                system,
                combination: r.combination,
                residual: r.residual,
                hypotheses,
            }
        })
    }

    /// p_{a,b+c} from the Jacobi identity of L_a, L_b, L_c.
    fn middle(&self, a: i64, b: i64, c: i64) -> std::result::Result<Poly, Certificate> {
        let rhs = at(&self.get(a, c), d().add(&y()), x())
            .mul(&at(&self.get(b, a + c), d(), y()))
            .add(&at(&self.get(a, b), x().add(&y()).neg(), x()).mul(&at(&self.get(a + b, c), d(), x().add(&y()))));
        let den = at(&self.get(b, c), d().add(&x()), y());
        let step = format!("p_{{{a},{}}}", b + c);
        match exact_div(&rhs, &den) {
            Some(q) if q.degree_in(Var::Y).unwrap_or(0) == 0 => Ok(q),
            _ => Err(Certificate::Obstruction {
                step,
                residual: rhs,
                note: format!("Jacobi identity of L_{a}, L_{b}, L_{c} has no solution"),
            }),
        }
    }

    /// p_{a+b,c} from the Jacobi identity of L_a, L_b, L_c.
    fn outer(&self, a: i64, b: i64, c: i64) -> std::result::Result<Poly, Certificate> {
        let rhs = at(&self.get(b, c), d().add(&x()), y())
            .mul(&at(&self.get(a, b + c), d(), x()))
            .sub(&at(&self.get(a, c), d().add(&y()), x()).mul(&at(&self.get(b, a + c), d(), y())));
        let den = at(&self.get(a, b), x().add(&y()).neg(), x());
        let fail = |rhs: Poly| Certificate::Obstruction {
            step: format!("p_{{{},{c}}}", a + b),
            residual: rhs,
            note: format!("Jacobi identity of L_{a}, L_{b}, L_{c} has no solution"),
        };
        let q = exact_div(&rhs, &den).ok_or_else(|| fail(rhs.clone()))?;
        // q(∂, λ, μ) must be a function of λ + μ
        let p = q.subs(&[(Var::Y, Poly::zero())]);
        if at(&p, d(), x().add(&y())) != q {
            return Err(fail(rhs));
        }
        Ok(p)
    }

    /// Grows L_{σ(k+1)} out of [L_σ λ L_{σk}], fixing p_{σ,σk} and p_{-σ,σ(k+1)}.
    fn step(&mut self, s: i64, k: i64) -> std::result::Result<Step, Certificate> {
        let rhs = at(&self.get(-s, s * k), d().add(&y()), x())
            .mul(&at(&self.get(s, s * (k - 1)), d(), y()))
            .add(&at(&self.get(-s, s), x().add(&y()).neg(), x()).mul(&at(&self.get(0, s * k), d(), x().add(&y()))));
        let tag = format!("k = {} (L_{}, L_{}, L_{})", s * k, -s, s, s * k);
        let (a, b, c) = if k == 1 {
            let raw = self.get(s, s);
            if raw.is_zero() {
                let sys = LinearSystem::from_identity(&[], &[], &rhs);
                self.refute(tag, sys)?;
                return Ok(Step::Stopped);
            }
            let (a, c) = normalize(&raw, s);
            let a_shift = at(&a, d().add(&x()), y());
            let terms = [a_shift.clone(), a_shift.mul(&d()), a_shift.mul(&x())];
            let sys = LinearSystem::from_identity(&["b0", "b_d", "b_x"], &terms, &rhs);
            let sol = self.refute(tag, sys)?;
            let b = Poly::constant(sol[0].clone())
                .add(&d().scale(&sol[1]))
                .add(&x().scale(&sol[2]));
            (a, b, c)
        } else {
            if rhs.is_zero() {
                return Ok(Step::Stopped);
            }
            let r1 = rhs.coeff_in(Var::Y, 1);
            if !r1.is_zero() {
                // A(∂+λ, μ) = α(∂+λ) + μ + γ against B = R1
                let rest = rhs.sub(&r1.mul(&y()));
                let terms = [d().add(&x()).mul(&r1), r1.clone()];
                let sys = LinearSystem::from_identity(&["alpha", "gamma"], &terms, &rest);
                let sol = self.refute(tag, sys)?;
                let a = d().scale(&sol[0]).add(&x()).add(&Poly::constant(sol[1].clone()));
                let (a, c) = normalize(&a, s);
                (a, r1.scale(&c), c)
            } else if rhs.degree_in(Var::Y).unwrap_or(0) > 0 {
                return Err(Certificate::Obstruction {
                    step: tag,
                    residual: rhs,
                    note: "the right-hand side is not of the form A(∂+λ,μ)B(∂,λ) with deg A ≤ 1".into(),
                });
            } else if rhs.total_degree().unwrap_or(0) <= 1 {
                (Poly::one(), rhs, Scalar::one())
            } else {
                let u = rhs.subs(&[(Var::D, d().sub(&x()))]);
                let mut g: Option<Poly> = None;
                for c in u.to_uni(Var::X) {
                    if c.is_zero() {
                        continue;
                    }
                    g = Some(match g {
                        None => c.monic_in(Var::D).map_err(|_| self.bad_shape(&tag, &rhs))?,
                        Some(g) => g.gcd_in_var(&c, Var::D).map_err(|_| self.bad_shape(&tag, &rhs))?,
                    });
                }
                let g = g.unwrap_or_else(Poly::one);
                if g.degree_in(Var::D) != Some(1) {
                    return Err(self.bad_shape(&tag, &rhs));
                }
                let a = g.subs(&[(Var::D, d().add(&x()))]);
                let b = exact_div(&rhs, &a).ok_or_else(|| self.bad_shape(&tag, &rhs))?;
                if b.total_degree().unwrap_or(0) > 1 {
                    return Err(self.bad_shape(&tag, &rhs));
                }
                (g, b, Scalar::one())
            }
        };
        self.scalings.insert(s * (k + 1), c);
        self.put(s, s * k, a);
        self.put(-s, s * (k + 1), b);
        let p0 = self.middle(0, s, s * k)?;
        self.put(0, s * (k + 1), p0);
        Ok(Step::Grew)
    }

    fn bad_shape(&self, tag: &str, rhs: &Poly) -> Certificate {
        Certificate::Obstruction {
            step: tag.to_string(),
            residual: rhs.clone(),
            note: "no factorization with both factors of degree at most 1".into(),
        }
    }
}

/// Grows the algebra generated by L_{-1}, L_0, L_1 out to degrees ±n.
pub fn extend_v_seed(seed: &VSeed, n: u32) -> Result<ExtendOutcome> {
    if n < 2 {
        return Err(Error::Precondition("extension needs n >= 2".into()));
    }
    let n = n as i64;
    let mut e = Engine {
        t: BTreeMap::new(),
        hypotheses: Vec::new(),
        scalings: BTreeMap::new(),
    };
    for (_, p) in seed.polys() {
        let lead = p.leading().map(|(_, c)| c.clone());
        if let Some(c) = lead {
            if c.as_rational().is_none() {
                e.hypotheses.push(c);
            }
        }
    }
    e.put(0, 1, seed.p01.clone());
    e.put(0, -1, seed.p0_neg1.clone());
    e.put(-1, 1, seed.p_neg1_1.clone());
    e.t.insert((1, 1), seed.p11.clone());
    e.t.insert((-1, -1), seed.p_neg1_neg1.clone());
    let mut bounds = [1i64, -1];
    for (slot, s) in [(0usize, 1i64), (1, -1)] {
        for k in 1..n {
            match e.step(s, k) {
                Ok(Step::Grew) => bounds[slot] = s * (k + 1),
                Ok(Step::Stopped) => break,
                Err(c) => return Ok(ExtendOutcome::Impossible(c)),
            }
        }
        if bounds[slot] == s {
            e.t.remove(&(s, s));
        }
    }
    let (lo, hi) = (bounds[1], bounds[0]);
    e.t.retain(|(i, j), _| (lo..=hi).contains(i) && (lo..=hi).contains(j) && (lo..=hi).contains(&(i + j)));
    // rows m >= 2 through L_1, rows m <= -2 through L_{-1}
    let rows: Vec<(i64, i64)> = (2..=hi).map(|m| (m, 1)).chain((lo..=-2).rev().map(|m| (m, -1))).collect();
    for (m, s) in rows {
        for c in lo..=hi {
            if !(lo..=hi).contains(&(m + c)) || e.t.contains_key(&(m, c)) {
                continue;
            }
            match e.outer(s, m - s, c) {
                Ok(p) => e.put(m, c, p),
                Err(cert) => return Ok(ExtendOutcome::Impossible(cert)),
            }
        }
    }
    let spec = AlgebraSpec::new(
        "extension",
        seed.params(),
        Support::Window(lo, hi),
        Bracket::Table(e.t.clone()),
    )?
    .with_truncation(true);
    let mut report = audit_skew(&spec);
    report.merge(audit_jacobi(&spec, lo, hi));
    if let Some(f) = report.failures().next() {
        return Ok(ExtendOutcome::Impossible(Certificate::Obstruction {
            step: format!("{} at {}", f.check, f.locus),
            residual: f.residual.clone(),
            note: "the generated table violates the axioms".into(),
        }));
    }
    Ok(ExtendOutcome::Table(Extension { spec, scalings: e.scalings }))
}
