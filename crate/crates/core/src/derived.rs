//! Basic Lie algebra, annihilation truncation, ideals and graded morphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, CheckEntry, Element, Locus, Report};
use crate::lie::{Combination, LieAlgebraData};
use crate::poly::{parse, ParamSet, Poly, Scalar, Var};
use crate::{Error, Result};

fn window_degrees(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<Vec<i64>> {
    let degs = a.support().clip(lo, hi);
    if degs.is_empty() {
        return Err(Error::WindowDomain(format!("no support in [{lo},{hi}]")));
    }
    Ok(degs)
}

/// The quotient by ∂ with the 0-th product.
pub fn basic_lie_algebra(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<LieAlgebraData> {
    let degs = window_degrees(a, lo, hi)?;
    let origin = BTreeMap::from([(Var::D, Poly::zero()), (Var::X, Poly::zero())]);
    let mut constants = BTreeMap::new();
    let mut truncated = BTreeSet::new();
    for &i in &degs {
        for &j in &degs {
            let c = a.p(i, j).substitute(&origin).constant_term();
            if c.is_zero() {
                continue;
            }
            if !degs.contains(&(i + j)) {
                truncated.insert((a.label(i), a.label(j)));
                continue;
            }
            constants.insert(
                (a.label(i), a.label(j)),
                Combination::from([(a.label(i + j), c)]),
            );
        }
    }
    let basis = degs.iter().map(|i| (a.label(*i), *i)).collect();
    LieAlgebraData::new(basis, constants, truncated)
}

fn falling(t: i64, r: usize) -> i64 {
    (0..r as i64).map(|k| t - k).product()
}

fn binomial(m: i64, j: i64) -> i64 {
    if j < 0 || j > m {
        return 0;
    }
    (0..j).fold(1, |acc, k| acc * (m - k) / (k + 1))
}

fn mode_label(a: &AlgebraSpec, i: i64, n: i64) -> String {
    format!("{}[{n}]", a.label(i))
}

/// Modes a_n, 0 ≤ n ≤ max_index, with [a_m, b_n] = Σ_j C(m,j)(a_(j)b)_{m+n-j}.
pub fn annihilation_truncation(
    a: &AlgebraSpec,
    max_index: u32,
    lo: i64,
    hi: i64,
) -> Result<LieAlgebraData> {
    let degs = window_degrees(a, lo, hi)?;
    let top = max_index as i64;
    let mut constants = BTreeMap::new();
    let mut truncated = BTreeSet::new();
    for &i in &degs {
        for &j in &degs {
            let products = crate::algebra::n_products(
                a,
                &Element::generator(i),
                &Element::generator(j),
            )?;
            for m in 0..=top {
                for n in 0..=top {
                    let mut comb = Combination::new();
                    let mut cut = false;
                    for (&jj, elem) in &products {
                        let jj = jj as i64;
                        let c_mj = binomial(m, jj);
                        if c_mj == 0 {
                            continue;
                        }
                        let t = m + n - jj;
                        for (&deg, f) in elem.parts() {
                            // (∂^r u)_t = (-1)^r t(t-1)...(t-r+1) u_{t-r}
                            for (r, c) in f.to_uni(Var::D).into_iter().enumerate() {
                                let c = c.constant_term();
                                let k = if r % 2 == 0 { 1 } else { -1 } * falling(t, r) * c_mj;
                                if c.is_zero() || k == 0 {
                                    continue;
                                }
                                let idx = t - r as i64;
                                if idx > top || !degs.contains(&deg) {
                                    cut = true;
                                    continue;
                                }
                                let label = mode_label(a, deg, idx);
                                let v = comb
                                    .get(&label)
                                    .cloned()
                                    .unwrap_or_default()
                                    .add(&c.mul(&Scalar::from_int(k)));
                                comb.insert(label, v);
                            }
                        }
                    }
                    comb.retain(|_, c| !c.is_zero());
                    let key = (mode_label(a, i, m), mode_label(a, j, n));
                    if cut {
                        truncated.insert(key);
                    } else if !comb.is_empty() {
                        constants.insert(key, comb);
                    }
                }
            }
        }
    }
    let basis = degs
        .iter()
        .flat_map(|&i| (0..=top).map(move |n| (i, n)))
        .map(|(i, n)| (mode_label(a, i, n), i))
        .collect();
    LieAlgebraData::new(basis, constants, truncated)
}

/// Per-degree generators m_j(∂) of a graded C[∂]-submodule; monic in ∂.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubmoduleSpec {
    parts: BTreeMap<i64, Poly>,
}

impl SubmoduleSpec {
    pub fn new(parts: BTreeMap<i64, Poly>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (i, p) in parts {
            if p.is_zero() {
                continue;
            }
            if !p.uses_only(&[Var::D]) {
                return Err(Error::BadVariables {
                    poly: p.to_string(),
                    allowed: "d".into(),
                });
            }
            out.insert(i, p.monic_in(Var::D)?);
        }
        Ok(SubmoduleSpec { parts: out })
    }

    /// Every window degree of `a` at full rank.
    pub fn full(a: &AlgebraSpec, lo: i64, hi: i64) -> Self {
        SubmoduleSpec {
            parts: a.support().clip(lo, hi).into_iter().map(|i| (i, Poly::one())).collect(),
        }
    }

    pub fn parts(&self) -> &BTreeMap<i64, Poly> {
        &self.parts
    }

    pub fn part(&self, i: i64) -> Option<&Poly> {
        self.parts.get(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Proper inside the window of `a`: some degree is missing or cut down.
    pub fn is_proper_in(&self, a: &AlgebraSpec, lo: i64, hi: i64) -> bool {
        !self.is_empty()
            && a
                .support()
                .clip(lo, hi)
                .into_iter()
                .any(|i| self.parts.get(&i).is_none_or(|p| !p.is_one()))
    }

    /// The submodule as an algebra on fresh generators m_i(∂)L_i.
    pub fn as_algebra(&self, a: &AlgebraSpec, lo: i64, hi: i64) -> Result<AlgebraSpec> {
        for i in a.support().clip(lo, hi) {
            if !self.parts.contains_key(&i) {
                return Err(Error::Shape(format!("degree {i} is missing from the submodule")));
            }
        }
        let mut labels = BTreeMap::new();
        for (i, m) in &self.parts {
            let l = if m.is_one() { a.label(*i) } else { format!("M_{i}") };
            labels.insert(*i, l);
        }
        Ok(a.rebased(&self.parts, lo, hi)?.with_labels(labels))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let parts: BTreeMap<String, String> = self
            .parts
            .iter()
            .map(|(i, p)| (i.to_string(), p.to_string()))
            .collect();
        serde_json::json!({ "parts": parts })
    }

    pub fn from_json(text: &str, params: &ParamSet) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            parts: BTreeMap<i64, String>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let parts = doc
            .parts
            .into_iter()
            .map(|(i, t)| Ok((i, parse(&t, params)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        SubmoduleSpec::new(parts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub ideal: SubmoduleSpec,
    /// (generator degree, part degree) whose bracket left the window.
    pub skipped: Vec<(i64, i64)>,
}

fn gcd_d(a: Option<&Poly>, b: &Poly) -> Result<Poly> {
    let g = match a {
        Some(a) => a.gcd_in_var(b, Var::D)?,
        None => b.monic_in(Var::D)?,
    };
    Ok(g)
}

/// Brackets [L_i λ m(∂)L_j] as the λ-coefficients of m(∂+λ)p_{i,j}(∂,λ).
fn bracket_coefficients(a: &AlgebraSpec, i: i64, j: i64, m: &Poly) -> Vec<Poly> {
    let shifted = m.subs(&[(Var::D, Poly::d().add(&Poly::x()))]);
    shifted
        .mul(&a.p(i, j))
        .to_uni(Var::X)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect()
}

/// The graded ideal generated by the homogeneous components of `seed`,
/// computed inside `[lo, hi]`.
pub fn ideal_closure(a: &AlgebraSpec, seed: &Element, lo: i64, hi: i64) -> Result<Closure> {
    let degs = window_degrees(a, lo, hi)?;
    let mut parts: BTreeMap<i64, Poly> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (j, f) in seed.parts() {
        if !degs.contains(j) {
            return Err(Error::OutOfSupport(*j));
        }
        let g = gcd_d(parts.get(j), f)?;
        parts.insert(*j, g);
        queue.push_back(*j);
    }
    let mut skipped = BTreeSet::new();
    while let Some(j) = queue.pop_front() {
        let m = parts[&j].clone();
        for &i in &degs {
            let coeffs = bracket_coefficients(a, i, j, &m);
            if coeffs.is_empty() {
                continue;
            }
            let t = i + j;
            if !degs.contains(&t) {
                skipped.insert((i, j));
                continue;
            }
            let mut g = parts.get(&t).cloned();
            for c in &coeffs {
                g = Some(gcd_d(g.as_ref(), c)?);
            }
            let g = g.expect("nonempty");
            if parts.get(&t) != Some(&g) {
                parts.insert(t, g);
                if !queue.contains(&t) {
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(Closure {
        ideal: SubmoduleSpec { parts },
        skipped: skipped.into_iter().collect(),
    })
}

/// Checks that every bracket of a window generator with a part of `s` lands in `s`.
pub fn is_ideal(a: &AlgebraSpec, s: &SubmoduleSpec, lo: i64, hi: i64) -> Result<Report> {
    let degs = window_degrees(a, lo, hi)?;
    let mut rep = Report::new();
    let mut passed = 0usize;
    for (&j, m) in s.parts() {
        for &i in &degs {
            let coeff = m
                .subs(&[(Var::D, Poly::d().add(&Poly::x()))])
                .mul(&a.p(i, j));
            if coeff.is_zero() {
                passed += 1;
                continue;
            }
            let t = i + j;
            if !degs.contains(&t) {
                rep.push(CheckEntry::skipped(
                    "ideal",
                    Locus::Pair(i, j),
                    format!("degree {t} outside the window"),
                ));
                continue;
            }
            let residual = match s.part(t) {
                Some(target) => coeff.divide_in_var(target, Var::D)?.1,
                None => coeff,
            };
            if residual.is_zero() {
                passed += 1;
            } else {
                rep.push(
                    CheckEntry::new("ideal", Locus::Pair(i, j), "[L_i λ m_j L_j]", residual)
                        .with_note(format!("lands at degree {t}")),
                );
            }
        }
    }
    rep.push(
        CheckEntry::new("ideal", Locus::Window(lo, hi), "", Poly::zero())
            .with_note(format!("{passed} brackets contained")),
    );
    Ok(rep)
}

/// φ(f(∂)L_i) = f(∂)q_i(∂)L'_{sign·i + shift}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismWitness {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    pub sigma_shift: i64,
    pub sigma_sign: i64,
    pub multipliers: BTreeMap<i64, Poly>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDoc {
    sigma_shift: i64,
    #[serde(default = "one")]
    sigma_sign: i64,
    multipliers: BTreeMap<i64, String>,
}

fn one() -> i64 {
    1
}

impl MorphismWitness {
    pub fn identity(a: &AlgebraSpec, lo: i64, hi: i64) -> Self {
        MorphismWitness {
            source: a.clone(),
            target: a.clone(),
            sigma_shift: 0,
            sigma_sign: 1,
            multipliers: a.support().clip(lo, hi).into_iter().map(|i| (i, Poly::one())).collect(),
        }
    }

    pub fn sigma(&self, i: i64) -> i64 {
        self.sigma_sign * i + self.sigma_shift
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MorphismWitness) -> MorphismWitness {
        let multipliers = self
            .multipliers
            .iter()
            .filter_map(|(i, q)| {
                other
                    .multipliers
                    .get(&self.sigma(*i))
                    .map(|q2| (*i, q.mul(q2)))
            })
            .collect();
        MorphismWitness {
            source: self.source.clone(),
            target: other.target.clone(),
            sigma_shift: other.sigma_sign * self.sigma_shift + other.sigma_shift,
            sigma_sign: other.sigma_sign * self.sigma_sign,
            multipliers,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = WitnessDoc {
            sigma_shift: self.sigma_shift,
            sigma_sign: self.sigma_sign,
            multipliers: self
                .multipliers
                .iter()
                .map(|(i, q)| (*i, q.to_string()))
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(text: &str, source: AlgebraSpec, target: AlgebraSpec) -> Result<Self> {
        let doc: WitnessDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if doc.sigma_sign != 1 && doc.sigma_sign != -1 {
            return Err(Error::Malformed("sigma_sign must be 1 or -1".into()));
        }
        let mut names = source.param_set();
        for s in target.param_set().iter() {
            names.insert(s);
        }
        let multipliers = doc
            .multipliers
            .into_iter()
            .map(|(i, t)| Ok((i, parse(&t, &names)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(MorphismWitness {
            source,
            target,
            sigma_shift: doc.sigma_shift,
            sigma_sign: doc.sigma_sign,
            multipliers,
        })
    }
}

/// Checks φ([L_i λ L_j]) = [φL_i λ φL_j] for source degrees in `[lo, hi]`.
pub fn verify_morphism(w: &MorphismWitness, lo: i64, hi: i64) -> Report {
    let mut rep = Report::new();
    let src = &w.source;
    let degs = src.support().clip(lo, hi);
    if w.sigma_shift != 0 {
        rep.push(CheckEntry::failed(
            "morphism",
            Locus::Global,
            Poly::zero(),
            format!("degree map i -> {}i + {} is not additive", w.sigma_sign, w.sigma_shift),
        ));
        return rep;
    }
    for &i in &degs {
        match w.multipliers.get(&i) {
            None => rep.push(CheckEntry::failed(
                "multiplier",
                Locus::Degree(i),
                Poly::zero(),
                "missing multiplier",
            )),
            Some(q) if q.is_zero() || !q.uses_only(&[Var::D]) => rep.push(CheckEntry::failed(
                "multiplier",
                Locus::Degree(i),
                q.clone(),
                "multiplier must be a nonzero polynomial in d",
            )),
            _ => {}
        }
    }
    let neg_x = Poly::x().neg();
    let d_plus_x = Poly::d().add(&Poly::x());
    let mut passed = 0usize;
    for &i in &degs {
        for &j in &degs {
            let (Some(qi), Some(qj)) = (w.multipliers.get(&i), w.multipliers.get(&j)) else {
                continue;
            };
            let ps = src.p(i, j);
            let t = i + j;
            if src.is_truncated() && !src.has(t) {
                rep.push(CheckEntry::skipped(
                    "morphism",
                    Locus::Pair(i, j),
                    format!("degree {t} outside the source table"),
                ));
                continue;
            }
            let lhs = if ps.is_zero() {
                Poly::zero()
            } else {
                match w.multipliers.get(&t) {
                    Some(qt) => ps.mul(qt),
                    None => {
                        rep.push(CheckEntry::skipped(
                            "morphism",
                            Locus::Pair(i, j),
                            format!("no multiplier at degree {t}"),
                        ));
                        continue;
                    }
                }
            };
            let (si, sj) = (w.sigma(i), w.sigma(j));
            let pt = w.target.p(si, sj);
            if !pt.is_zero() && w.target.is_truncated() && !w.target.has(si + sj) {
                rep.push(CheckEntry::skipped(
                    "morphism",
                    Locus::Pair(i, j),
                    format!("degree {} outside the target table", si + sj),
                ));
                continue;
            }
            let rhs = qi
                .subs(&[(Var::D, neg_x.clone())])
                .mul(&qj.subs(&[(Var::D, d_plus_x.clone())]))
                .mul(&pt);
            let r = lhs.sub(&rhs);
            if r.is_zero() {
                passed += 1;
            } else {
                rep.push(CheckEntry::new("morphism", Locus::Pair(i, j), "φ[a λ b] - [φa λ φb]", r));
            }
        }
    }
    rep.push(
        CheckEntry::new("morphism", Locus::Window(lo, hi), "", Poly::zero())
            .with_note(format!("{passed} pairs preserved")),
    );
    rep
}

/// One of the three degree-0 ideals of ECL(s) with its isomorphism witness.
#[derive(Clone, Debug)]
pub struct EclIdeal {
    pub seed: Poly,
    pub closure: Closure,
    pub witness: MorphismWitness,
}

/// The ideals generated by (∂+s)L_0, (∂+2s)L_0 and (∂+s)(∂+2s)L_0 in `ecl`,
/// matched with CL2(0,s), CL3(s) and SCL2(0,s).
pub fn ecl_ideals(
    ecl: &AlgebraSpec,
    targets: [AlgebraSpec; 3],
    lo: i64,
    hi: i64,
) -> Result<Vec<EclIdeal>> {
    let names = ecl.param_set();
    let seeds = ["d + s", "d + 2*s", "(d + s)*(d + 2*s)"];
    let mut out = Vec::new();
    for (seed, target) in seeds.into_iter().zip(targets) {
        let f = parse(seed, &names)?;
        let closure = ideal_closure(ecl, &Element::single(0, f.clone()), lo, hi)?;
        let source = closure.ideal.as_algebra(ecl, lo, hi)?;
        let witness = MorphismWitness::identity(&source, lo, hi);
        out.push(EclIdeal {
            seed: f,
            closure,
            witness: MorphismWitness { target, ..witness },
        });
    }
    Ok(out)
}
