use crate::algebra::{AlgebraSpec, CheckEntry, Locus, Report};
use crate::poly::{Poly, Var};
use crate::{Error, Result};

fn degrees(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<Vec<i64>> {
    let degs = a.support().clip(lo, hi);
    if !degs.contains(&0) {
        return Err(Error::Precondition("degree 0 is not in the window".into()));
    }
    Ok(degs)
}

fn not_applicable(check: &str, a: &AlgebraSpec) -> Option<Report> {
    let p00 = a.p(0, 0);
    if p00.is_zero() {
        return None;
    }
    let mut rep = Report::new();
    rep.push(CheckEntry::not_applicable(check, format!("[L_0 λ L_0] = {p00} is not zero")));
    Some(rep)
}

/// With L_0 abelian, p_{0,i} depends on λ only and is additive in i along
/// nonzero brackets.
pub fn audit_additivity(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<Report> {
    let degs = degrees(a, lo, hi)?;
    if let Some(rep) = not_applicable("additivity", a) {
        return Ok(rep);
    }
    let mut rep = Report::new();
    for &i in &degs {
        let p = a.p(0, i);
        if !p.uses_only(&[Var::X]) {
            let rest = p.sub(&p.subs(&[(Var::D, Poly::zero())]));
            rep.push(CheckEntry::failed("lambda-only", Locus::Degree(i), rest, format!("p_{{0,{i}}} = {p}")));
        }
    }
    let mut checked = 0;
    for &k in &degs {
        for &s in &degs {
            if !degs.contains(&(k + s)) || a.p(k, s).is_zero() {
                continue;
            }
            let r = a.p(0, k + s).sub(&a.p(0, k)).sub(&a.p(0, s));
            if r.is_zero() {
                checked += 1;
            } else {
                rep.push(CheckEntry::failed("additivity", Locus::Pair(k, s), r, "p_{0,k+s} - p_{0,k} - p_{0,s}"));
            }
        }
    }
    rep.push(
        CheckEntry::new("additivity", Locus::Window(lo, hi), "", Poly::zero())
            .with_note(format!("{checked} pairs")),
    );
    Ok(rep)
}

/// With L_0 abelian, for k with p_{-k,k} and p_{0,k} both nonzero,
/// p_{-k,k} depends on ∂ only and deg_∂ p_{-k,k} + deg_λ p_{0,k} <= 2.
pub fn audit_degree_bound(a: &AlgebraSpec, lo: i64, hi: i64) -> Result<Report> {
    let degs = degrees(a, lo, hi)?;
    if let Some(rep) = not_applicable("degree-bound", a) {
        return Ok(rep);
    }
    let mut rep = Report::new();
    let mut checked = 0;
    for &k in &degs {
        if k == 0 || !degs.contains(&-k) {
            continue;
        }
        let (pm, p0) = (a.p(-k, k), a.p(0, k));
        if pm.is_zero() || p0.is_zero() {
            continue;
        }
        if !pm.uses_only(&[Var::D]) {
            let rest = pm.sub(&pm.subs(&[(Var::X, Poly::zero())]));
            rep.push(CheckEntry::failed("d-only", Locus::Degree(k), rest, format!("p_{{{},{k}}} = {pm}", -k)));
            continue;
        }
        let total = pm.degree_in(Var::D).unwrap_or(0) + p0.degree_in(Var::X).unwrap_or(0);
        if total > 2 {
            rep.push(CheckEntry::failed(
                "degree-bound",
                Locus::Degree(k),
                pm.mul(&p0),
                format!("deg p_{{{},{k}}} + deg p_{{0,{k}}} = {total}", -k),
            ));
        } else {
            checked += 1;
        }
    }
    rep.push(
        CheckEntry::new("degree-bound", Locus::Window(lo, hi), "", Poly::zero())
            .with_note(format!("{checked} degrees")),
    );
    Ok(rep)
}
