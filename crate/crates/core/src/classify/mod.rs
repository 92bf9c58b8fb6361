//! Classification of class-V algebras from their degree -1..1 brackets.

mod audits;
mod extend;
mod linear;
mod normal;
mod seed;

use std::collections::BTreeMap;

use crate::algebra::{AlgebraSpec, Bracket, ParamValue, Support};
use crate::catalog::{family_spec, Family, Params};
use crate::derived::{verify_morphism, MorphismWitness};
use crate::poly::{Poly, Scalar, Sym, Var};
use crate::{Error, Result};

pub use audits::{audit_additivity, audit_degree_bound};
pub use extend::{extend_v_seed, Certificate, ExtendOutcome, Extension};
pub use linear::{LinEq, LinearSystem, Refutation};
pub use normal::{normal_form, NormalFormState, Tag};
pub use seed::VSeed;

use extend::exact_div;
use normal::d_coeff;

/// Both roots of a polynomial of degree 2 in `v`.
pub fn quadratic_roots(p: &Poly, v: Var) -> Result<[Scalar; 2]> {
    if p.degree_in(v) != Some(2) || !p.uses_only(&[v]) {
        return Err(Error::Shape(format!("{p} is not a quadratic in {}", v.name())));
    }
    let c = |k| p.coeff_in(v, k).constant_term();
    let (a, b, c0) = (c(2), c(1), c(0));
    let disc = b.mul(&b).sub(&Scalar::from_int(4).mul(&a).mul(&c0));
    let root = disc.sqrt().ok_or_else(|| Error::Factorization(p.to_string()))?;
    let two_a = a.mul(&Scalar::from_int(2));
    Ok([
        b.neg().add(&root).div(&two_a)?,
        b.neg().sub(&root).div(&two_a)?,
    ])
}

fn div_or_fail(num: &Poly, den: &Poly) -> Result<Poly> {
    exact_div(num, den).ok_or_else(|| Error::Factorization(format!("{den} does not divide {num}")))
}

/// Seed of the subalgebra spanned by L_{-1}, (∂-y)L_0, L_1 where y is the
/// chosen root of p_{-1,1}.
pub fn ecl_reduction(seed: &VSeed, root: usize) -> Result<VSeed> {
    let y = quadratic_roots(&seed.p_neg1_1, Var::D)?[root.min(1)].clone();
    let lin = Poly::x().neg().sub(&Poly::constant(y.clone()));
    VSeed::new(
        lin.mul(&seed.p01),
        div_or_fail(&seed.p_neg1_1, &Poly::d().sub(&Poly::constant(y)))?,
        seed.p11.clone(),
        seed.p_neg1_neg1.clone(),
        lin.mul(&seed.p0_neg1),
    )
}

/// Seed of the algebra W with L_0 = (-∂+b)W_0, where -b is the chosen root
/// of p_{0,1}.
pub fn scl2_reduction(seed: &VSeed, root: usize) -> Result<VSeed> {
    let b = quadratic_roots(&seed.p01, Var::X)?[root.min(1)].neg();
    let x_plus_b = Poly::x().add(&Poly::constant(b.clone()));
    VSeed::new(
        div_or_fail(&seed.p01, &x_plus_b)?,
        Poly::d().neg().add(&Poly::constant(b)).mul(&seed.p_neg1_1),
        seed.p11.clone(),
        seed.p_neg1_neg1.clone(),
        div_or_fail(&seed.p0_neg1, &x_plus_b)?,
    )
}

/// A catalog member with s set to `s`, possibly a parameter expression.
pub fn instantiate(f: Family, s: Option<&Scalar>, lo: i64, hi: i64) -> Result<AlgebraSpec> {
    let mut params = Params::new();
    if matches!(f, Family::CL2 | Family::SCL2) {
        params.insert("b".into(), ParamValue::Fixed(num_traits::Zero::zero()));
    }
    let lo = f.min_degree().map_or(lo, |m| lo.max(m));
    let Some(s) = s else {
        return family_spec(f, &params, (lo, hi));
    };
    if let Some(q) = s.as_rational() {
        params.insert("s".into(), ParamValue::Fixed(q));
        return family_spec(f, &params, (lo, hi));
    }
    let base = family_spec(f, &params, (lo, hi))?.to_table(lo, hi)?;
    let Bracket::Table(t) = base.bracket() else {
        unreachable!("to_table gives a table")
    };
    let bind = BTreeMap::from([(Sym::from("s"), s.clone())]);
    let mut out = BTreeMap::new();
    for (k, p) in t {
        let p = p.specialize(&bind)?;
        if !p.is_zero() {
            out.insert(*k, p);
        }
    }
    let free = s.symbols().into_iter().map(|n| (n, ParamValue::Free)).collect();
    Ok(AlgebraSpec::new(base.name(), free, base.support(), Bracket::Table(out))?
        .with_labels(base.labels().clone())
        .with_truncation(true))
}

fn scalar_ratio(a: &Poly, b: &Poly) -> Option<Scalar> {
    let (ma, ca) = a.leading()?;
    let (mb, cb) = b.leading()?;
    if ma != mb {
        return None;
    }
    let q = ca.div(cb).ok()?;
    (b.scale(&q) == *a).then_some(q)
}

/// The rescaling L_i ↦ q_i L'_{σi} with q_1 = 1 forced by the brackets with
/// L_{±1}; stops where a ratio is not a constant.
pub fn ratio_witness(source: &AlgebraSpec, target: &AlgebraSpec, sigma: i64, lo: i64, hi: i64) -> MorphismWitness {
    let ps = |i, j| source.p(i, j);
    let pt = |i: i64, j: i64| target.p(sigma * i, sigma * j);
    let mut q: BTreeMap<i64, Scalar> = BTreeMap::new();
    q.insert(1, Scalar::one());
    let has = |i: i64| source.has(i) && target.has(sigma * i) && (lo..=hi).contains(&i);
    if has(0) {
        if let Some(r) = scalar_ratio(&ps(0, 1), &pt(0, 1)) {
            q.insert(0, r);
        }
    }
    if has(-1) {
        if let (Some(q0), Some(r)) = (q.get(&0).cloned(), scalar_ratio(&ps(-1, 1), &pt(-1, 1))) {
            q.insert(-1, r.mul(&q0));
        }
    }
    let mut k = 1;
    while has(k + 1) {
        let Some(r) = scalar_ratio(&pt(1, k), &ps(1, k)) else { break };
        let next = q[&k].mul(&r);
        q.insert(k + 1, next);
        k += 1;
    }
    let mut k = 1;
    while has(-k - 1) {
        let (Some(qm1), Some(qk)) = (q.get(&-1).cloned(), q.get(&-k).cloned()) else { break };
        let Some(r) = scalar_ratio(&pt(-1, -k), &ps(-1, -k)) else { break };
        q.insert(-k - 1, qm1.mul(&qk).mul(&r));
        k += 1;
    }
    MorphismWitness {
        source: source.clone(),
        target: target.clone(),
        sigma_shift: 0,
        sigma_sign: sigma,
        multipliers: q.into_iter().map(|(i, c)| (i, Poly::constant(c))).collect(),
    }
}

fn bounds(a: &AlgebraSpec) -> (i64, i64) {
    match a.support() {
        Support::Window(lo, hi) => (lo, hi),
        s => unreachable!("extensions are finite tables, got {s:?}"),
    }
}

/// Tries σ = 1 then σ = -1 and keeps the first witness that verifies.
fn witness_from(tag: Tag, s: Option<&Scalar>, target: &AlgebraSpec, signs: &[i64]) -> Result<MorphismWitness> {
    let (lo, hi) = bounds(target);
    let f = tag.family().expect("tag names a family");
    let mut last = None;
    for &sigma in signs {
        let (slo, shi) = if sigma == 1 { (lo, hi) } else { (-hi, -lo) };
        let source = instantiate(f, s, slo, shi)?;
        let w = ratio_witness(&source, target, sigma, slo, shi);
        let rep = verify_morphism(&w, slo, shi);
        if rep.passed() {
            return Ok(w);
        }
        last = rep.failures().next().map(|e| format!("{} at {}: {}", e.check, e.locus, e.residual));
    }
    Err(Error::Inconsistent(format!(
        "no rescaling onto {tag}: {}",
        last.unwrap_or_default()
    )))
}

/// Normalizes a seed with both degrees 1, extends and reads off s.
/// Returns the state and the extension rewritten in the original generators.
fn type_two(seed: &VSeed, n: u32) -> Result<std::result::Result<(NormalFormState, AlgebraSpec), Certificate>> {
    let c0 = d_coeff_x(&seed.p01).inv()?;
    let cm1 = c0.neg().div(&d_coeff(&seed.p_neg1_1))?;
    let norm = seed.rescaled(&cm1, &c0)?;
    let ext = match extend_v_seed(&norm, n)? {
        ExtendOutcome::Table(e) => e,
        ExtendOutcome::Impossible(c) => return Ok(Err(c)),
    };
    let (lo, hi) = bounds(&ext.spec);
    let mut state = normal_form(&ext.spec, lo, hi)?;
    state.scalings = ext.scalings.clone();
    state.scalings.insert(-1, cm1.clone());
    state.scalings.insert(0, c0.clone());
    let back = BTreeMap::from([
        (-1, Poly::constant(cm1.inv()?)),
        (0, Poly::constant(c0.inv()?)),
    ]);
    let raw = ext.spec.rebased(&back, lo, hi)?.with_name("extension");
    Ok(Ok((state, raw)))
}

fn d_coeff_x(p: &Poly) -> Scalar {
    p.coeff_in(Var::X, 1).constant_term()
}

fn raw_extension(seed: &VSeed, n: u32) -> Result<std::result::Result<AlgebraSpec, Certificate>> {
    Ok(match extend_v_seed(seed, n)? {
        ExtendOutcome::Table(e) => Ok(e.spec),
        ExtendOutcome::Impossible(c) => Err(c),
    })
}

/// Classifies the algebra generated by a class-V seed, extending it to
/// degrees ±n and attaching an isomorphism witness onto the catalog member.
pub fn classify_v(seed: &VSeed, n: u32) -> Result<NormalFormState> {
    let (dm, dl) = seed.degree_pattern()?;
    match (dm, dl) {
        (0, 0) => {
            let t = match raw_extension(seed, n)? {
                Ok(t) => t,
                Err(c) => return Ok(NormalFormState::impossible(c)),
            };
            let (tag, signs) = match (seed.p11.is_zero(), seed.p_neg1_neg1.is_zero()) {
                (true, true) => (Tag::CurSl2, &[1][..]),
                (false, false) => (Tag::M2, &[1][..]),
                (false, true) => (Tag::M1, &[1][..]),
                (true, false) => (Tag::M1, &[-1][..]),
            };
            let w = witness_from(tag, None, &t, signs)?;
            Ok(NormalFormState {
                tag,
                s: None,
                d: BTreeMap::new(),
                scalings: BTreeMap::new(),
                witness: Some(w),
                certificate: None,
            })
        }
        (1, 0) | (0, 1) => match raw_extension(seed, n)? {
            Err(c) => Ok(NormalFormState::impossible(c)),
            Ok(_) => Err(Error::Inconsistent(
                "a seed with degree sum 1 extended to a table".into(),
            )),
        },
        (1, 1) => match type_two(seed, n)? {
            Err(c) => Ok(NormalFormState::impossible(c)),
            Ok((mut state, raw)) => {
                state.witness = Some(witness_from(state.tag, state.s.as_ref(), &raw, &[1, -1])?);
                Ok(state)
            }
        },
        (2, 0) => reduced(seed, n, Tag::ECL, ecl_reduction(seed, 0)?),
        (0, 2) => reduced(seed, n, Tag::SCL2Zero, scl2_reduction(seed, 0)?),
        _ => Err(Error::Shape(format!(
            "deg p_neg1_1 + deg p01 = {} exceeds 2",
            dm + dl
        ))),
    }
}

fn reduced(seed: &VSeed, n: u32, tag: Tag, inner: VSeed) -> Result<NormalFormState> {
    let (mut state, _) = match type_two(&inner, n)? {
        Ok(x) => x,
        Err(c) => return Ok(NormalFormState::impossible(c)),
    };
    let raw = match raw_extension(seed, n)? {
        Ok(t) => t,
        Err(c) => return Ok(NormalFormState::impossible(c)),
    };
    state.tag = tag;
    state.witness = Some(witness_from(tag, state.s.as_ref(), &raw, &[1, -1])?);
    Ok(state)
}
