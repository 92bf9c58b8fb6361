use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::param::{ParamPoly, Sym};
use super::{Poly, PolyError, Scalar, Var};

/// Declared parameter symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamSet(BTreeSet<Sym>);

impl ParamSet {
    pub fn new<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        ParamSet(names.into_iter().map(Sym::from).collect())
    }

    pub fn contains(&self, s: &str) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: &str) {
        self.0.insert(Sym::from(s));
    }

    pub fn get(&self, s: &str) -> Option<Sym> {
        self.0.get(s).cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sym> {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(s.parse().unwrap())));
        } else if c.is_alphabetic() {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            k += 1;
        } else {
            return Err(PolyError::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    params: &'a ParamSet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.factor()?;
                let c = d
                    .as_scalar()
                    .ok_or_else(|| PolyError::NonScalarDivisor(d.to_string()))?;
                if c.is_zero() {
                    return Err(PolyError::Syntax {
                        pos,
                        msg: "division by zero".into(),
                    });
                }
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let b = self.base()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let e: u32 = match u32::try_from(n) {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    Ok(b.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(b)
        }
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Poly::constant(Scalar::from_rational(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(v) = Var::from_name(&name) {
                    Ok(Poly::var(v))
                } else if let Some(s) = self.params.get(&name) {
                    Ok(Poly::constant(Scalar::from_poly(ParamPoly::var(s))))
                } else {
                    Err(PolyError::Undeclared { name, pos })
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in d, x, y, i, j, k and the declared parameters.
/// Identifiers in `text` that are not distinguished variables.
pub fn parameter_names(text: &str) -> Result<ParamSet, PolyError> {
    let mut out = ParamSet::default();
    for (_, t) in lex(text)? {
        if let Tok::Ident(name) = t {
            if Var::from_name(&name).is_none() {
                out.insert(&name);
            }
        }
    }
    Ok(out)
}

pub fn parse(text: &str, params: &ParamSet) -> Result<Poly, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        params,
    };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses an expression that must not mention distinguished variables.
pub fn parse_scalar(text: &str, params: &ParamSet) -> Result<Scalar, PolyError> {
    let p = parse(text, params)?;
    p.as_scalar().ok_or_else(|| PolyError::Syntax {
        pos: 0,
        msg: format!("`{text}` is not a parameter expression"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_positions() {
        let ps = ParamSet::new(["s"]);
        assert_eq!(
            parse("d + q", &ps),
            Err(PolyError::Undeclared {
                name: "q".into(),
                pos: 4
            })
        );
        assert!(matches!(parse("d + (x", &ps), Err(PolyError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("d ^ x", &ps), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("1/d", &ps), Err(PolyError::NonScalarDivisor(_))));
    }

    #[test]
    fn zero_and_cancellation() {
        let ps = ParamSet::default();
        assert!(parse("0", &ps).unwrap().is_zero());
        assert!(parse("d*x - x*d", &ps).unwrap().is_zero());
        assert_eq!(parse("-d^2", &ps).unwrap(), parse("0 - d*d", &ps).unwrap());
        assert_eq!(parse("3/5", &ps).unwrap(), Poly::constant(Scalar::ratio(3, 5)));
    }
}
