//! Finite-dimensional Lie algebras given by structure constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::poly::Scalar;
use crate::{Error, Result};

pub type Combination = BTreeMap<String, Scalar>;

fn add_into(acc: &mut Combination, label: &str, c: &Scalar) {
    let v = acc.get(label).map(|x| x.add(c)).unwrap_or_else(|| c.clone());
    if v.is_zero() {
        acc.remove(label);
    } else {
        acc.insert(label.to_string(), v);
    }
}

/// Basis labels with degrees and the bracket on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    basis: Vec<(String, i64)>,
    constants: BTreeMap<(String, String), Combination>,
    truncated: BTreeSet<(String, String)>,
}

impl LieAlgebraData {
    /// `constants` may list each unordered pair once; the other order is
    /// filled in by antisymmetry, and a conflicting entry is an error.
    pub fn new(
        mut basis: Vec<(String, i64)>,
        constants: BTreeMap<(String, String), Combination>,
        truncated: BTreeSet<(String, String)>,
    ) -> Result<Self> {
        basis.sort_by_key(|b| b.1);
        let labels: BTreeSet<&str> = basis.iter().map(|(l, _)| l.as_str()).collect();
        if labels.len() != basis.len() {
            return Err(Error::Malformed("duplicate basis label".into()));
        }
        let mut full: BTreeMap<(String, String), Combination> = BTreeMap::new();
        for ((a, b), comb) in &constants {
            for l in [a, b].into_iter().chain(comb.keys()) {
                if !labels.contains(l.as_str()) {
                    return Err(Error::Malformed(format!("unknown basis label `{l}`")));
                }
            }
            let comb: Combination = comb
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect();
            if a == b && !comb.is_empty() {
                return Err(Error::Inconsistent(format!("[{a},{a}] is not zero")));
            }
            let neg: Combination = comb.iter().map(|(k, c)| (k.clone(), c.neg())).collect();
            if let Some(prev) = constants.get(&(b.clone(), a.clone())) {
                let prev: Combination = prev.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), c.clone())).collect();
                if prev != neg {
                    return Err(Error::Inconsistent(format!("[{a},{b}] is not antisymmetric")));
                }
            }
            if !comb.is_empty() {
                full.insert((a.clone(), b.clone()), comb);
                full.insert((b.clone(), a.clone()), neg);
            }
        }
        let mut trunc = BTreeSet::new();
        for (a, b) in truncated {
            trunc.insert((b.clone(), a.clone()));
            trunc.insert((a, b));
        }
        let data = LieAlgebraData {
            basis,
            constants: full,
            truncated: trunc,
        };
        if let Some((a, b, c)) = data.jacobi_failures().into_iter().next() {
            return Err(Error::Inconsistent(format!(
                "Jacobi identity fails on ({a},{b},{c})"
            )));
        }
        Ok(data)
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_of(&self, label: &str) -> Option<i64> {
        self.basis.iter().find(|(l, _)| l == label).map(|(_, d)| *d)
    }

    pub fn label_at(&self, degree: i64) -> Option<&str> {
        self.basis
            .iter()
            .find(|(_, d)| *d == degree)
            .map(|(l, _)| l.as_str())
    }

    pub fn bracket(&self, a: &str, b: &str) -> Combination {
        self.constants
            .get(&(a.to_string(), b.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_truncated(&self, a: &str, b: &str) -> bool {
        self.truncated.contains(&(a.to_string(), b.to_string()))
    }

    pub fn truncated_pairs(&self) -> impl Iterator<Item = &(String, String)> {
        self.truncated.iter().filter(|(a, b)| a <= b)
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Antisymmetry holds by construction; re-checked for callers.
    pub fn antisymmetry_failures(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for ((a, b), comb) in &self.constants {
            let back = self.bracket(b, a);
            let neg: Combination = comb.iter().map(|(k, c)| (k.clone(), c.neg())).collect();
            if back != neg {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    /// [a,[b,c]] + [b,[c,a]] + [c,[a,b]] for one triple, or `None` when a
    /// bracket involved is truncated.
    pub fn jacobi_residual(&self, a: &str, b: &str, c: &str) -> Option<Combination> {
        let mut acc = Combination::new();
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            if self.is_truncated(y, z) {
                return None;
            }
            for (w, k) in self.bracket(y, z) {
                if self.is_truncated(x, &w) {
                    return None;
                }
                for (v, k2) in self.bracket(x, &w) {
                    add_into(&mut acc, &v, &k.mul(&k2));
                }
            }
        }
        Some(acc)
    }

    pub fn jacobi_failures(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        let n = self.basis.len();
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let (a, b, c) = (&self.basis[x].0, &self.basis[y].0, &self.basis[z].0);
                    if let Some(r) = self.jacobi_residual(a, b, c) {
                        if !r.is_empty() {
                            out.push((a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .basis
            .iter()
            .map(|(l, d)| json!({"label": l, "degree": d}))
            .collect();
        let index: BTreeMap<&str, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, (l, _))| (l.as_str(), k))
            .collect();
        let mut pairs: Vec<(&(String, String), &Combination)> = self
            .constants
            .iter()
            .filter(|((a, b), _)| index[a.as_str()] < index[b.as_str()])
            .collect();
        pairs.sort_by_key(|((a, b), _)| (index[a.as_str()], index[b.as_str()]));
        let constants: Vec<Value> = pairs
            .into_iter()
            .map(|((a, b), comb)| {
                let value: serde_json::Map<String, Value> = comb
                    .iter()
                    .map(|(k, c)| (k.clone(), Value::String(c.to_string())))
                    .collect();
                json!({"lhs": a, "rhs": b, "value": value})
            })
            .collect();
        let truncated: Vec<Value> = self
            .truncated_pairs()
            .map(|(a, b)| json!([a, b]))
            .collect();
        json!({
            "dim": self.dim(),
            "basis": basis,
            "constants": constants,
            "truncated": truncated,
        })
    }
}

fn fmt_comb(f: &mut fmt::Formatter<'_>, comb: &Combination) -> fmt::Result {
    let mut first = true;
    for (l, c) in comb {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        if c.is_one() {
            write!(f, "{l}")?;
        } else {
            write!(f, "({c})*{l}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LieAlgebraData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension {}", self.dim())?;
        for (x, (a, _)) in self.basis.iter().enumerate() {
            for (b, _) in &self.basis[x + 1..] {
                let comb = self.bracket(a, b);
                if comb.is_empty() {
                    continue;
                }
                write!(f, "[{a}, {b}] = ")?;
                fmt_comb(f, &comb)?;
                writeln!(f)?;
            }
        }
        let t = self.truncated_pairs().count();
        if t > 0 {
            writeln!(f, "{t} brackets truncated")?;
        }
        Ok(())
    }
}

/// sl(2) with e, h, f in degrees 1, 0, -1.
pub fn sl2_data() -> LieAlgebraData {
    let basis = vec![("e".to_string(), 1), ("h".to_string(), 0), ("f".to_string(), -1)];
    let one = |l: &str, c: i64| Combination::from([(l.to_string(), Scalar::from_int(c))]);
    let constants = BTreeMap::from([
        (("h".to_string(), "e".to_string()), one("e", 2)),
        (("h".to_string(), "f".to_string()), one("f", -2)),
        (("e".to_string(), "f".to_string()), one("h", 1)),
    ]);
    LieAlgebraData::new(basis, constants, BTreeSet::new()).expect("sl2 is a Lie algebra")
}
