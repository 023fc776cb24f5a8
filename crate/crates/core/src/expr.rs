//! Polynomial expression language.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := int | 't' | 'u' nat | '(' expr ')'
//! ```
//!
//! Variable names are case-insensitive; `t` is `T` and `u3` is `U_3`.

use num_bigint::BigInt;

use crate::error::Error;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    T,
    U(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Largest `u` index used, 0 if none.
    pub fn max_u_index(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::T => 0,
            Expr::U(i) => *i,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_u_index().max(b.max_u_index()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_u_index(),
        }
    }

    pub fn to_poly(&self, nvars: usize) -> Result<Poly, Error> {
        Ok(match self {
            Expr::Int(c) => Poly::constant(nvars, c.clone()),
            Expr::T => Poly::var(nvars, 0),
            Expr::U(i) => {
                if *i >= nvars {
                    return Err(Error::Parse {
                        offset: 0,
                        message: format!("variable u{i} not available (ring has u1..u{})", nvars - 1),
                    });
                }
                Poly::var(nvars, *i)
            }
            Expr::Add(a, b) => &a.to_poly(nvars)? + &b.to_poly(nvars)?,
            Expr::Sub(a, b) => &a.to_poly(nvars)? - &b.to_poly(nvars)?,
            Expr::Neg(a) => -&a.to_poly(nvars)?,
            Expr::Mul(a, b) => &a.to_poly(nvars)? * &b.to_poly(nvars)?,
            Expr::Pow(a, k) => a.to_poly(nvars)?.power(*k),
        })
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, Error> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses into a polynomial ring with `nvars` variables (`t, u1, .., u_{nvars-1}`).
pub fn parse_poly(src: &str, nvars: usize) -> Result<Poly, Error> {
    parse_expr(src)?.to_poly(nvars)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.nat()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(atom), k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't' | b'T') => {
                self.pos += 1;
                Ok(Expr::T)
            }
            Some(b'u' | b'U') => {
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected variable index after 'u'"));
                }
                let i = self.nat()?;
                if i == 0 {
                    return Err(self.error("variable indices start at u1"));
                }
                let i = usize::try_from(i).map_err(|_| self.error("variable index too large"))?;
                Ok(Expr::U(i))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                Ok(Expr::Int(digits.parse().expect("digits parse as integer")))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn nat(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "number out of range".into(),
            })
    }
}
