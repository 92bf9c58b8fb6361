use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::param::{ParamPoly, Sym};
use super::PolyError;

/// Element of Q(params): reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: ParamPoly::from_int(n),
            den: ParamPoly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            num: ParamPoly::constant(q),
            den: ParamPoly::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(name: &str) -> Self {
        Scalar::from_poly(ParamPoly::var(Sym::from(name)))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        Scalar {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: ParamPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coeff().recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar::from_poly(self.num.add(&o.num));
            }
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<Scalar, PolyError> {
        Scalar::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, PolyError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn pow_i(&self, e: i64) -> Result<Scalar, PolyError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.inv().map(|x| x.pow((-e) as u32))
        }
    }

    /// Substitutes parameter values; fails if the denominator vanishes.
    pub fn specialize(&self, bindings: &BTreeMap<Sym, Scalar>) -> Result<Scalar, PolyError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let n = eval_param_poly(&self.num, bindings);
        let d = eval_param_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(PolyError::ParameterConstraint {
                vanishing: self.den.to_string(),
            });
        }
        n.div(&d)
    }

    pub fn sqrt(&self) -> Option<Scalar> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        Some(Scalar::reduce(n, d))
    }

    /// Single-term numerator over a unit denominator, sign stripped.
    pub(crate) fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.len() == 1
    }

    pub(crate) fn leading_negative(&self) -> bool {
        use num_traits::Signed;
        self.num.leading_coeff().is_negative()
    }
}

fn eval_param_poly(p: &ParamPoly, bindings: &BTreeMap<Sym, Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_rational(c.clone());
        for (n, e) in m.factors() {
            let f = match bindings.get(n) {
                Some(v) => v.pow(*e),
                None => Scalar::from_poly(ParamPoly::var(n.clone()).pow(*e)),
            };
            t = t.mul(&f);
        }
        acc = acc.add(&t);
    }
    acc
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                Scalar::$m(self, o)
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() == 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_fraction() {
        let s = Scalar::param("s");
        let one = Scalar::one();
        let a = s.mul(&s).sub(&one).div(&s.add(&one)).unwrap();
        assert_eq!(a, s.sub(&one));
        let h = one.div(&s.scale_int(2)).unwrap();
        assert_eq!(h.denom(), &ParamPoly::var(Sym::from("s")));
    }

    #[test]
    fn specialize_vanishing_denominator() {
        let s = Scalar::param("s");
        let x = Scalar::one().div(&s.sub(&Scalar::from_int(2))).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Sym::from("s"), Scalar::from_int(2));
        assert!(matches!(x.specialize(&b), Err(PolyError::ParameterConstraint { .. })));
    }

    impl Scalar {
        fn scale_int(&self, n: i64) -> Scalar {
            self.mul(&Scalar::from_int(n))
        }
    }
}
