use std::fmt;

use crate::Error;

/// Linear form a·i + b·j + c·|i| + e·|j| + k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Lin {
    pub i: i64,
    pub j: i64,
    pub abs_i: i64,
    pub abs_j: i64,
    pub c: i64,
}

impl Lin {
    pub fn eval(&self, i: i64, j: i64) -> i64 {
        self.i * i + self.j * j + self.abs_i * i.abs() + self.abs_j * j.abs() + self.c
    }

    fn sub(&self, o: &Lin) -> Lin {
        Lin {
            i: self.i - o.i,
            j: self.j - o.j,
            abs_i: self.abs_i - o.abs_i,
            abs_j: self.abs_j - o.abs_j,
            c: self.c - o.c,
        }
    }

    fn scale(&self, k: i64) -> Lin {
        Lin {
            i: self.i * k,
            j: self.j * k,
            abs_i: self.abs_i * k,
            abs_j: self.abs_j * k,
            c: self.c * k,
        }
    }

    fn add(&self, o: &Lin) -> Lin {
        self.sub(&o.scale(-1))
    }

    pub fn is_plain(&self) -> bool {
        self.abs_i == 0 && self.abs_j == 0
    }

    /// Swaps the roles of i and j.
    pub fn swapped(&self) -> Lin {
        Lin {
            i: self.j,
            j: self.i,
            abs_i: self.abs_j,
            abs_j: self.abs_i,
            c: self.c,
        }
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (self.i, "i"),
            (self.j, "j"),
            (self.abs_i, "|i|"),
            (self.abs_j, "|j|"),
        ];
        let mut first = true;
        for (k, name) in parts {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else { "+" };
            if first {
                if k < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if k.abs() != 1 {
                write!(f, "{}*", k.abs())?;
            }
            f.write_str(name)?;
            first = false;
        }
        if first {
            write!(f, "{}", self.c)
        } else if self.c != 0 {
            write!(f, " {} {}", if self.c < 0 { "-" } else { "+" }, self.c.abs())
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

impl Cmp {
    fn holds(self, v: i64) -> bool {
        match self {
            Cmp::Eq => v == 0,
            Cmp::Ne => v != 0,
            Cmp::Le => v <= 0,
            Cmp::Ge => v >= 0,
            Cmp::Lt => v < 0,
            Cmp::Gt => v > 0,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "==",
            Cmp::Ne => "!=",
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Lt => "<",
            Cmp::Gt => ">",
        }
    }
}

/// `lin op 0`, or `lin ≡ r (mod m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Rel(Lin, Cmp),
    Mod(Lin, i64, i64),
}

impl Atom {
    pub fn holds(&self, i: i64, j: i64) -> bool {
        match self {
            Atom::Rel(l, c) => c.holds(l.eval(i, j)),
            Atom::Mod(l, m, r) => l.eval(i, j).rem_euclid(*m) == r.rem_euclid(*m),
        }
    }

    fn swapped(&self) -> Atom {
        match self {
            Atom::Rel(l, c) => Atom::Rel(l.swapped(), *c),
            Atom::Mod(l, m, r) => Atom::Mod(l.swapped(), *m, *r),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel(l, c) => {
                // move the constant to the right-hand side for readability
                let mut lhs = *l;
                let rhs = -lhs.c;
                lhs.c = 0;
                if lhs == Lin::default() {
                    write!(f, "0 {} {}", c.symbol(), rhs)
                } else {
                    write!(f, "{lhs} {} {rhs}", c.symbol())
                }
            }
            Atom::Mod(l, m, r) => write!(f, "({l}) % {m} == {r}"),
        }
    }
}

/// Conjunction of atoms; the empty guard always holds.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Guard(pub Vec<Atom>);

impl Guard {
    pub fn always() -> Self {
        Guard(Vec::new())
    }

    pub fn is_always(&self) -> bool {
        self.0.is_empty()
    }

    pub fn holds(&self, i: i64, j: i64) -> bool {
        self.0.iter().all(|a| a.holds(i, j))
    }

    pub fn swapped(&self) -> Guard {
        Guard(self.0.iter().map(Atom::swapped).collect())
    }

    pub fn and(&self, o: &Guard) -> Guard {
        Guard(self.0.iter().chain(o.0.iter()).cloned().collect())
    }

    /// Plain linear equalities a·i + b·j + c = 0.
    pub fn equalities(&self) -> Vec<Lin> {
        self.0
            .iter()
            .filter_map(|a| match a {
                Atom::Rel(l, Cmp::Eq) if l.is_plain() => Some(*l),
                _ => None,
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Guard, Error> {
        let text = text.trim();
        if text.is_empty() || text == "true" || text == "otherwise" {
            return Ok(Guard::always());
        }
        let mut atoms = Vec::new();
        let mut offset = 0;
        for part in text.split("&&") {
            atoms.push(parse_atom(part, offset)?);
            offset += part.len() + 2;
        }
        Ok(Guard(atoms))
    }

    /// Builder helpers used by the catalog.
    pub fn rel(l: Lin, c: Cmp) -> Guard {
        Guard(vec![Atom::Rel(l, c)])
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" && ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

struct LinParser<'a> {
    s: &'a [u8],
    at: usize,
    base: usize,
}

impl LinParser<'_> {
    fn ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, Error> {
        Err(Error::GuardSyntax {
            pos: self.base + self.at,
            msg: msg.to_string(),
        })
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.at).copied()
    }

    fn int(&mut self) -> Option<i64> {
        self.ws();
        let start = self.at;
        while self.at < self.s.len() && self.s[self.at].is_ascii_digit() {
            self.at += 1;
        }
        if start == self.at {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.at]).ok()?.parse().ok()
    }

    fn lin(&mut self) -> Result<Lin, Error> {
        let mut acc = Lin::default();
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.at += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.at += 1;
        }
        loop {
            let t = self.lin_term()?;
            acc = acc.add(&t.scale(sign));
            match self.peek() {
                Some(b'+') => {
                    self.at += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.at += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn lin_term(&mut self) -> Result<Lin, Error> {
        let mut coef = 1;
        if let Some(n) = self.int() {
            if self.peek() == Some(b'*') {
                self.at += 1;
                coef = n;
            } else {
                return Ok(Lin {
                    c: n,
                    ..Lin::default()
                });
            }
        }
        let base = match self.peek() {
            Some(b'i') => {
                self.at += 1;
                Lin { i: 1, ..Lin::default() }
            }
            Some(b'j') => {
                self.at += 1;
                Lin { j: 1, ..Lin::default() }
            }
            Some(b'|') => {
                self.at += 1;
                let v = match self.peek() {
                    Some(b'i') => Lin { abs_i: 1, ..Lin::default() },
                    Some(b'j') => Lin { abs_j: 1, ..Lin::default() },
                    _ => return self.err("expected i or j inside |...|"),
                };
                self.at += 1;
                if self.peek() != Some(b'|') {
                    return self.err("expected closing |");
                }
                self.at += 1;
                v
            }
            Some(b'(') => {
                self.at += 1;
                let l = self.lin()?;
                if self.peek() != Some(b')') {
                    return self.err("expected )");
                }
                self.at += 1;
                l
            }
            _ => return self.err("expected i, j, |i|, |j|, an integer or a parenthesized form"),
        };
        Ok(base.scale(coef))
    }

    fn cmp(&mut self) -> Result<Cmp, Error> {
        self.ws();
        let rest = &self.s[self.at..];
        for (tok, c) in [
            ("==", Cmp::Eq),
            ("!=", Cmp::Ne),
            ("<=", Cmp::Le),
            (">=", Cmp::Ge),
            ("<", Cmp::Lt),
            (">", Cmp::Gt),
        ] {
            if rest.starts_with(tok.as_bytes()) {
                self.at += tok.len();
                return Ok(c);
            }
        }
        self.err("expected a comparison operator")
    }
}

fn parse_atom(text: &str, base: usize) -> Result<Atom, Error> {
    let mut p = LinParser {
        s: text.as_bytes(),
        at: 0,
        base,
    };
    let lhs = p.lin()?;
    if p.peek() == Some(b'%') {
        p.at += 1;
        let m = match p.int() {
            Some(m) if m > 0 => m,
            _ => return p.err("expected a positive modulus"),
        };
        if p.cmp()? != Cmp::Eq {
            return p.err("congruences must use ==");
        }
        let neg = p.peek() == Some(b'-');
        if neg {
            p.at += 1;
        }
        let r = match p.int() {
            Some(r) => r,
            None => return p.err("expected a residue"),
        };
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        return Ok(Atom::Mod(lhs, m, if neg { -r } else { r }));
    }
    let c = p.cmp()?;
    let rhs = p.lin()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(Atom::Rel(lhs.sub(&rhs), c))
}
