//! Parser for scalar expressions such as `-3/2`, `(3*t-1)/2`, `θ^2/3`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::field::{Field, Q};
use super::scalar::Scalar;
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ExactError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Arc<Field>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse(format!("{msg} in {:?}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, ExactError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ExactError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ExactError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ExactError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            let mut acc = Scalar::one();
            for _ in 0..e {
                acc = acc * &base;
            }
            if neg {
                acc = acc.inv().ok_or_else(|| self.err("division by zero"))?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ExactError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Scalar::from_q(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "θ" || name == "theta" {
                    if self.field.degree() == 1 {
                        return Err(self.err("θ used but no minimal polynomial declared"));
                    }
                    return Ok(Scalar::theta(self.field));
                }
                match self.field.params().iter().position(|p| *p == name) {
                    Some(i) => Ok(Scalar::param(self.field, i)),
                    None => Err(self.err(&format!("unknown symbol {name:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(v)
            }
            _ => Err(self.err("unexpected end or token")),
        }
    }
}

/// Parses an expression in the given field.
pub fn parse_scalar(s: &str, field: &Arc<Field>) -> Result<Scalar, ExactError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, field, src: s };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}
