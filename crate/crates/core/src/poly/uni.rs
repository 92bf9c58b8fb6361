use super::param::{PMono, ParamPoly, Sym};
use super::{Mono, Poly, PolyError, Scalar, Var};

fn lifted(v: Var) -> Sym {
    Sym::from(format!("%{}", v.name()))
}

fn lifted_var(name: &str) -> Option<Var> {
    name.strip_prefix('%').and_then(Var::from_name)
}

/// Views `p` as univariate in `v` over the field of everything else.
fn lift(p: &Poly, v: Var) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); p.degree_in(v).map(|d| d as usize + 1).unwrap_or(0)];
    for (m, c) in p.terms() {
        let mut pm = PMono::one();
        for w in Var::ALL {
            if w != v && m.exp(w) > 0 {
                pm = pm.with(&lifted(w), m.exp(w));
            }
        }
        let t = Scalar::from_poly(ParamPoly::monomial(pm, num_rational::BigRational::from_integer(1.into())));
        let e = m.exp(v) as usize;
        out[e] = out[e].add(&c.mul(&t));
    }
    out
}

fn lower(coeffs: &[Scalar], v: Var) -> Result<Poly, PolyError> {
    let mut out = Poly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.denom().symbols().iter().any(|s| lifted_var(s).is_some()) {
            return Err(PolyError::NotPolynomial(display_lifted(c)));
        }
        let den = Scalar::from_poly(c.denom().clone());
        for (pm, q) in c.numer().terms() {
            let mut mono = Mono::var(v, e as u32);
            let mut rest = PMono::one();
            for (name, k) in pm.factors() {
                match lifted_var(name) {
                    Some(w) => mono.0[w.index()] += k,
                    None => rest = rest.with(name, *k),
                }
            }
            let coef = Scalar::from_poly(ParamPoly::monomial(rest, q.clone())).div(&den)?;
            out = out.add(&Poly::term(mono, coef));
        }
    }
    Ok(out)
}

fn display_lifted(c: &Scalar) -> String {
    c.to_string().replace('%', "")
}

fn trim(p: &mut Vec<Scalar>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn divmod(a: &[Scalar], b: &[Scalar]) -> Result<(Vec<Scalar>, Vec<Scalar>), PolyError> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv()?;
    let mut q = vec![Scalar::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr].mul(&inv);
        let shift = dr - db;
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&c));
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    Ok((q, r))
}

pub(super) fn divide_in_var(p: &Poly, q: &Poly, v: Var) -> Result<(Poly, Poly), PolyError> {
    if q.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    let a = lift(p, v);
    let mut b = lift(q, v);
    trim(&mut b);
    let (quo, rem) = divmod(&a, &b)?;
    Ok((lower(&quo, v)?, lower(&rem, v)?))
}

pub(super) fn gcd_in_var(p: &Poly, q: &Poly, v: Var) -> Result<Poly, PolyError> {
    let mut a = lift(p, v);
    let mut b = lift(q, v);
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b)?;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return Ok(Poly::zero());
    }
    let inv = a.last().unwrap().inv()?;
    let monic: Vec<Scalar> = a.iter().map(|c| c.mul(&inv)).collect();
    lower(&monic, v)
}

pub(super) fn monic_in(p: &Poly, v: Var) -> Result<Poly, PolyError> {
    let mut a = lift(p, v);
    trim(&mut a);
    if a.is_empty() {
        return Ok(Poly::zero());
    }
    let inv = a.last().unwrap().inv()?;
    let monic: Vec<Scalar> = a.iter().map(|c| c.mul(&inv)).collect();
    lower(&monic, v)
}

#[cfg(test)]
mod tests {
    use super::super::{parse, ParamSet};
    use super::*;

    fn pp(t: &str) -> Poly {
        parse(t, &ParamSet::new(["s", "b"])).unwrap()
    }

    #[test]
    fn division_examples() {
        let (q, r) = pp("d^2+3*s*d+2*s^2").divide_in_var(&pp("d+2*s"), Var::D).unwrap();
        assert_eq!((q, r), (pp("d+s"), pp("0")));
        let (q, r) = pp("d+2*x").divide_in_var(&pp("d"), Var::D).unwrap();
        assert_eq!((q, r), (pp("1"), pp("2*x")));
        let (q, r) = pp("(i+b)*(d+2*s)").divide_in_var(&pp("d+2*s"), Var::D).unwrap();
        assert_eq!((q, r), (pp("i+b"), pp("0")));
        assert_eq!(pp("d").divide_in_var(&pp("0"), Var::D), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(pp("(d+s)*(d+2*s)").gcd_in_var(&pp("d+2*s"), Var::D).unwrap(), pp("d+2*s"));
        assert_eq!(pp("d+s").gcd_in_var(&pp("d+2*s"), Var::D).unwrap(), pp("1"));
        assert_eq!(pp("0").gcd_in_var(&pp("d+2*x"), Var::D).unwrap(), pp("d+2*x"));
        assert_eq!(pp("0").gcd_in_var(&pp("0"), Var::D).unwrap(), pp("0"));
    }

    #[test]
    fn non_polynomial_quotient() {
        assert!(matches!(
            pp("d").divide_in_var(&pp("x*d"), Var::D),
            Err(PolyError::NotPolynomial(_))
        ));
    }
}
