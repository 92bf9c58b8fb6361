use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::poly::{Mono, Poly, Scalar, Var};

/// One row Σ coeffs[u]·x_u = rhs, read off at a monomial of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEq {
    pub monomial: String,
    pub coeffs: Vec<Scalar>,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<LinEq>,
}

fn mono_name(m: &Mono) -> String {
    let parts: Vec<String> = Var::ALL
        .iter()
        .filter(|v| m.exp(**v) > 0)
        .map(|v| match m.exp(*v) {
            1 => v.name().to_string(),
            e => format!("{}^{e}", v.name()),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl LinearSystem {
    /// Equations for Σ x_u·terms[u] = target, one per monomial.
    pub fn from_identity(unknowns: &[&str], terms: &[Poly], target: &Poly) -> Self {
        let mut monos = BTreeSet::new();
        for p in terms.iter().chain(std::iter::once(target)) {
            monos.extend(p.terms().map(|(m, _)| m.clone()));
        }
        let equations = monos
            .iter()
            .rev()
            .map(|m| LinEq {
                monomial: mono_name(m),
                coeffs: terms.iter().map(|t| t.coeff(m)).collect(),
                rhs: target.coeff(m),
            })
            .collect();
        LinearSystem {
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            equations,
        }
    }

    /// Gaussian elimination. Free unknowns are set to zero. On failure the
    /// row combination exhibiting 0 = r with r ≠ 0 is returned.
    pub fn solve(&self) -> Result<Vec<Scalar>, Refutation> {
        let n = self.unknowns.len();
        let m = self.equations.len();
        let mut rows: Vec<(Vec<Scalar>, Scalar, Vec<Scalar>)> = self
            .equations
            .iter()
            .enumerate()
            .map(|(e, eq)| {
                let mut w = vec![Scalar::zero(); m];
                w[e] = Scalar::one();
                (eq.coeffs.clone(), eq.rhs.clone(), w)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut divisors = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(r) = (rank..m).find(|r| !rows[*r].0[col].is_zero()) else {
                continue;
            };
            rows.swap(rank, r);
            let p = rows[rank].0[col].clone();
            let inv = p.inv().expect("nonzero pivot");
            divisors.push(p);
            let row = &mut rows[rank];
            row.0.iter_mut().for_each(|c| *c = c.mul(&inv));
            row.1 = row.1.mul(&inv);
            row.2.iter_mut().for_each(|c| *c = c.mul(&inv));
            let pivot = rows[rank].clone();
            for (k, other) in rows.iter_mut().enumerate() {
                if k == rank || other.0[col].is_zero() {
                    continue;
                }
                let f = other.0[col].clone();
                for (c, pc) in other.0.iter_mut().zip(&pivot.0) {
                    *c = c.sub(&pc.mul(&f));
                }
                other.1 = other.1.sub(&pivot.1.mul(&f));
                for (c, pc) in other.2.iter_mut().zip(&pivot.2) {
                    *c = c.sub(&pc.mul(&f));
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if let Some(bad) = rows[rank..].iter().find(|r| !r.1.is_zero()) {
            return Err(Refutation {
                combination: bad.2.clone(),
                residual: bad.1.clone(),
                divisors,
            });
        }
        let mut sol = vec![Scalar::zero(); n];
        for (k, col) in pivots.into_iter().enumerate() {
            sol[col] = rows[k].1.clone();
        }
        Ok(sol)
    }

    /// Σ w_e·(row e): the coefficient vector and the right-hand side.
    pub fn combine(&self, weights: &[Scalar]) -> (Vec<Scalar>, Scalar) {
        let mut coeffs = vec![Scalar::zero(); self.unknowns.len()];
        let mut rhs = Scalar::zero();
        for (w, eq) in weights.iter().zip(&self.equations) {
            for (c, ec) in coeffs.iter_mut().zip(&eq.coeffs) {
                *c = c.add(&w.mul(ec));
            }
            rhs = rhs.add(&w.mul(&eq.rhs));
        }
        (coeffs, rhs)
    }

    pub fn to_json(&self) -> Value {
        let eqs: Vec<Value> = self
            .equations
            .iter()
            .map(|e| {
                json!({
                    "monomial": e.monomial,
                    "coeffs": e.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "rhs": e.rhs.to_string(),
                })
            })
            .collect();
        json!({ "unknowns": self.unknowns, "equations": eqs })
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            let lhs: Vec<String> = e
                .coeffs
                .iter()
                .zip(&self.unknowns)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, u)| format!("({c})*{u}"))
                .collect();
            let lhs = if lhs.is_empty() { "0".to_string() } else { lhs.join(" + ") };
            writeln!(f, "  [{}] {lhs} = {}", e.monomial, e.rhs)?;
        }
        Ok(())
    }
}

/// Weights showing that a linear system is inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub combination: Vec<Scalar>,
    pub residual: Scalar,
    /// Pivots divided by during elimination, assumed nonzero.
    pub divisors: Vec<Scalar>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, ParamSet};

    #[test]
    fn solves_and_refutes() {
        let ps = ParamSet::new(["c"]);
        let p = |t: &str| parse(t, &ps).unwrap();
        // a*(d + x) + b = 2*d + 2*x + c
        let sys = LinearSystem::from_identity(&["a", "b"], &[p("d + x"), p("1")], &p("2*d + 2*x + c"));
        let sol = sys.solve().unwrap();
        assert_eq!(sol[0], Scalar::from_int(2));
        assert_eq!(sol[1], Scalar::param("c"));
        // a*(d + x) = c*d + 2*c*x
        let sys = LinearSystem::from_identity(&["a"], &[p("d + x")], &p("c*d + 2*c*x"));
        let refute = sys.solve().unwrap_err();
        let (coeffs, rhs) = sys.combine(&refute.combination);
        assert!(coeffs.iter().all(|c| c.is_zero()));
        assert_eq!(rhs, refute.residual);
        assert!(!rhs.is_zero());
    }
}
