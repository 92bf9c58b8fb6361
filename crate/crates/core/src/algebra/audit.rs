use std::collections::{BTreeMap, HashMap};

use super::guard::Guard;
use super::report::{CheckEntry, Locus, Report};
use super::spec::{AlgebraSpec, Bracket, ModuleSpec, PiecewiseRule, OVERLAP_BOX};
use crate::poly::{Poly, Scalar, Var};

fn dx(d: Poly, x: Poly) -> BTreeMap<Var, Poly> {
    BTreeMap::from([(Var::D, d), (Var::X, x)])
}

fn p_var(v: Var) -> Poly {
    Poly::var(v)
}

/// p(∂,λ) ↦ p(∂,−∂−λ).
pub fn skew_image(p: &Poly) -> Poly {
    p.subs(&[(Var::X, Poly::d().add(&Poly::x()).neg())])
}

fn skew_residual(pij: &Poly, pji: &Poly) -> Poly {
    pij.add(&skew_image(pji))
}

fn diagonal_remainder(p: &Poly) -> Poly {
    let f = Poly::d().add(&Poly::x().scale(&Scalar::from_int(2)));
    match p.divide_in_var(&f, Var::X) {
        Ok((_, r)) => r,
        Err(_) => p.clone(),
    }
}

/// The six structure polynomials entering one Jacobi triple.
pub(crate) struct JacobiTerms {
    pub jk: Poly,
    pub i_jk: Poly,
    pub ij: Poly,
    pub ij_k: Poly,
    pub ik: Poly,
    pub j_ik: Poly,
}

/// [a_λ[b_μ c]] − [[a_λ b]_{λ+μ} c] − [b_μ[a_λ c]] in structure-polynomial form.
pub(crate) fn jacobi_residual(t: &JacobiTerms) -> Poly {
    let (d, x, y) = (Poly::d(), Poly::x(), Poly::y());
    let a = t.jk.substitute(&dx(d.add(&x), y.clone())).mul(&t.i_jk);
    let b = t
        .ij
        .substitute(&dx(x.add(&y).neg(), x.clone()))
        .mul(&t.ij_k.subs(&[(Var::X, x.add(&y))]));
    let c = t
        .ik
        .substitute(&dx(d.add(&y), x.clone()))
        .mul(&t.j_ik.subs(&[(Var::X, y.clone())]));
    a.sub(&b).sub(&c)
}

struct Cache<'a> {
    f: Box<dyn Fn(i64, i64) -> Poly + 'a>,
    memo: HashMap<(i64, i64), Poly>,
}

impl<'a> Cache<'a> {
    fn new(f: impl Fn(i64, i64) -> Poly + 'a) -> Self {
        Cache {
            f: Box::new(f),
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, i: i64, j: i64) -> Poly {
        if let Some(p) = self.memo.get(&(i, j)) {
            return p.clone();
        }
        let p = (self.f)(i, j);
        self.memo.insert((i, j), p.clone());
        p
    }
}

/// Solves the plain equalities of `g` for i or j and returns the substitution.
fn equality_substitution(g: &Guard) -> BTreeMap<Var, Poly> {
    let mut map: BTreeMap<Var, Poly> = BTreeMap::new();
    for l in g.equalities() {
        let e = Poly::int(l.i)
            .mul(&p_var(Var::I))
            .add(&Poly::int(l.j).mul(&p_var(Var::J)))
            .add(&Poly::int(l.c));
        let e = e.substitute(&map);
        if e.is_zero() {
            continue;
        }
        let var = if !e.coeff_in(Var::I, 1).is_zero() {
            Var::I
        } else if !e.coeff_in(Var::J, 1).is_zero() {
            Var::J
        } else {
            continue;
        };
        let c = match e.coeff_in(var, 1).as_scalar() {
            Some(c) => c,
            None => continue,
        };
        let rest = e.sub(&p_var(var).scale(&c));
        let sol = rest.neg().scale(&c.inv().expect("nonzero"));
        let step = BTreeMap::from([(var, sol.clone())]);
        for v in map.values_mut() {
            *v = v.substitute(&step);
        }
        map.insert(var, sol);
    }
    map
}

fn swap_ij() -> BTreeMap<Var, Poly> {
    BTreeMap::from([(Var::I, p_var(Var::J)), (Var::J, p_var(Var::I))])
}

/// Skew-symmetry and diagonal divisibility.
pub fn audit_skew(a: &AlgebraSpec) -> Report {
    let mut rep = Report::new();
    match a.bracket() {
        Bracket::Table(t) => {
            for &(i, j) in t.keys() {
                if i > j {
                    continue;
                }
                let r = skew_residual(&a.p(i, j), &a.p(j, i));
                rep.push(CheckEntry::new("skew", Locus::Pair(i, j), "λ ↦ -∂-λ", r));
                if i == j {
                    let r = diagonal_remainder(&a.p(i, i));
                    rep.push(CheckEntry::new("diagonal", Locus::Degree(i), "mod ∂+2λ", r));
                }
            }
        }
        Bracket::Rule(rule) => skew_rule(a, rule, &mut rep),
    }
    rep
}

fn skew_rule(a: &AlgebraSpec, rule: &PiecewiseRule, rep: &mut Report) {
    let s = a.support();
    let points: Vec<(i64, i64)> = (-OVERLAP_BOX..=OVERLAP_BOX)
        .flat_map(|i| (-OVERLAP_BOX..=OVERLAP_BOX).map(move |j| (i, j)))
        .filter(|(i, j)| s.contains(*i) && s.contains(*j) && s.contains(i + j))
        .collect();
    let sel: HashMap<(i64, i64), Option<usize>> =
        points.iter().map(|&(i, j)| ((i, j), rule.select(i, j))).collect();
    let br = rule.branches();
    for ai in 0..br.len() {
        for bi in ai..br.len() {
            let co: Vec<(i64, i64)> = points
                .iter()
                .copied()
                .filter(|&(i, j)| sel[&(i, j)] == Some(ai) && sel[&(j, i)] == Some(bi))
                .collect();
            if co.is_empty() {
                continue;
            }
            let pb = skew_image(&br[bi].poly.substitute(&swap_ij()));
            let r = br[ai].poly.add(&pb);
            let g = br[ai].guard.and(&br[bi].guard.swapped());
            let r = r.substitute(&equality_substitution(&g));
            if r.is_zero() {
                rep.push(CheckEntry::new(
                    "skew",
                    Locus::Branches(ai, bi),
                    "λ ↦ -∂-λ",
                    r,
                ));
                continue;
            }
            let bad = co.iter().find_map(|&(i, j)| {
                let r = skew_residual(&rule.eval(i, j), &rule.eval(j, i));
                (!r.is_zero()).then_some((i, j, r))
            });
            match bad {
                Some((i, j, r)) => rep.push(
                    CheckEntry::new("skew", Locus::Pair(i, j), "λ ↦ -∂-λ", r)
                        .with_note(format!("branches {ai}/{bi}")),
                ),
                None => rep.push(
                    CheckEntry::new("skew", Locus::Branches(ai, bi), "λ ↦ -∂-λ", Poly::zero())
                        .with_note(format!("enumerated {} pairs", co.len())),
                ),
            }
        }
    }
    for (bi, b) in br.iter().enumerate() {
        let diag: Vec<i64> = points
            .iter()
            .filter(|(i, j)| i == j && sel[&(*i, *j)] == Some(bi))
            .map(|(i, _)| *i)
            .collect();
        if diag.is_empty() {
            continue;
        }
        let sym = b.poly.subs(&[(Var::J, p_var(Var::I))]);
        let r = diagonal_remainder(&sym);
        if r.is_zero() {
            rep.push(CheckEntry::new("diagonal", Locus::Branches(bi, bi), "mod ∂+2λ", r));
            continue;
        }
        let bad = diag.iter().find_map(|&i| {
            let r = diagonal_remainder(&rule.eval(i, i));
            (!r.is_zero()).then_some((i, r))
        });
        match bad {
            Some((i, r)) => rep.push(CheckEntry::new("diagonal", Locus::Degree(i), "mod ∂+2λ", r)),
            None => rep.push(
                CheckEntry::new("diagonal", Locus::Branches(bi, bi), "mod ∂+2λ", Poly::zero())
                    .with_note(format!("enumerated {} degrees", diag.len())),
            ),
        }
    }
}

fn index_map(i: Poly, j: Poly) -> BTreeMap<Var, Poly> {
    BTreeMap::from([(Var::I, i), (Var::J, j)])
}

/// Jacobi identity: symbolically for uniform rules, enumerated on `[lo, hi]` otherwise.
pub fn audit_jacobi(a: &AlgebraSpec, lo: i64, hi: i64) -> Report {
    let mut rep = Report::new();
    let mut enumerate = true;
    if let Bracket::Rule(rule) = a.bracket() {
        if rule.is_uniform() {
            let p = &rule.branches()[0].poly;
            let (i, j, k) = (p_var(Var::I), p_var(Var::J), p_var(Var::K));
            let at = |x: &Poly, y: &Poly| p.substitute(&index_map(x.clone(), y.clone()));
            let t = JacobiTerms {
                jk: at(&j, &k),
                i_jk: at(&i, &j.add(&k)),
                ij: at(&i, &j),
                ij_k: at(&i.add(&j), &k),
                ik: at(&i, &k),
                j_ik: at(&j, &i.add(&k)),
            };
            let r = jacobi_residual(&t);
            let ok = r.is_zero();
            rep.push(CheckEntry::new(
                "jacobi",
                Locus::Symbolic("i,j,k".into()),
                "λ,μ",
                r,
            ));
            enumerate = !ok || a.support() != super::spec::Support::All;
        }
    }
    if enumerate {
        enumerate_jacobi(a, lo, hi, &mut rep);
    }
    rep
}

fn enumerate_jacobi(a: &AlgebraSpec, lo: i64, hi: i64, rep: &mut Report) {
    let degs = a.support().clip(lo, hi);
    let table = matches!(a.bracket(), Bracket::Table(_));
    let skip_outside = table && a.is_truncated();
    let mut cache = Cache::new(|i, j| a.p(i, j));
    let mut passed = 0usize;
    for &i in &degs {
        for &j in &degs {
            for &k in &degs {
                if skip_outside {
                    let off = [i + j, j + k, i + k, i + j + k]
                        .into_iter()
                        .find(|d| !a.has(*d));
                    if let Some(d) = off {
                        rep.push(CheckEntry::skipped(
                            "jacobi",
                            Locus::Triple(i, j, k),
                            format!("degree {d} outside the table"),
                        ));
                        continue;
                    }
                }
                let t = JacobiTerms {
                    jk: cache.get(j, k),
                    i_jk: cache.get(i, j + k),
                    ij: cache.get(i, j),
                    ij_k: cache.get(i + j, k),
                    ik: cache.get(i, k),
                    j_ik: cache.get(j, i + k),
                };
                let r = jacobi_residual(&t);
                if r.is_zero() {
                    passed += 1;
                } else {
                    rep.push(CheckEntry::new("jacobi", Locus::Triple(i, j, k), "λ,μ", r));
                }
            }
        }
    }
    rep.push(
        CheckEntry::new("jacobi", Locus::Window(lo, hi), "λ,μ", Poly::zero())
            .with_note(format!("{passed} triples vanish")),
    );
}

/// Module Jacobi identity over (i, j, m) on `[lo, hi]`.
pub fn audit_module(m: &ModuleSpec, lo: i64, hi: i64) -> Report {
    let mut rep = Report::new();
    let base = m.base();
    let alg = base.support().clip(lo, hi);
    let mods = m.support().clip(lo, hi);
    let mut passed = 0usize;
    for &i in &alg {
        for &j in &alg {
            for &v in &mods {
                let t = JacobiTerms {
                    jk: m.q(j, v),
                    i_jk: m.q(i, j + v),
                    ij: base.p(i, j),
                    ij_k: m.q(i + j, v),
                    ik: m.q(i, v),
                    j_ik: m.q(j, i + v),
                };
                let r = jacobi_residual(&t);
                if r.is_zero() {
                    passed += 1;
                } else {
                    rep.push(CheckEntry::new("module", Locus::Triple(i, j, v), "λ,μ", r));
                }
            }
        }
    }
    rep.push(
        CheckEntry::new("module", Locus::Window(lo, hi), "λ,μ", Poly::zero())
            .with_note(format!("{passed} triples vanish")),
    );
    rep
}
