//! Text syntax for rational functions of `t`.
//!
//! ```text
//! expr   := ["+" | "-"] term { ("+" | "-") term }
//! term   := unary { ["*" | "/"] unary }      juxtaposition multiplies
//! unary  := "-" unary | power
//! power  := atom [ "^" ["-"] integer ]
//! atom   := integer | "t" | "(" expr ")"
//! ```
//!
//! `a/b` with integer literals gives a rational constant, so `(1/2)t` works.

use super::{Poly, RatFunc};
use num_bigint::BigInt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at byte {pos}")]
    DivisionByZero { pos: usize },
    #[error("expected a polynomial, got {0}")]
    NotPolynomial(String),
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(r)
}

/// Like [`parse_ratfunc`] but rejects non-polynomial results.
pub fn parse_poly(text: &str) -> Result<Poly, ExprError> {
    let r = parse_ratfunc(text)?;
    if r.is_polynomial() {
        Ok(r.numer().clone())
    } else {
        Err(ExprError::NotPolynomial(r.to_string()))
    }
}

impl FromStr for RatFunc {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfunc(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.into(),
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    acc = acc
                        .checked_div(&rhs)
                        .ok_or(ExprError::DivisionByZero { pos: at })?;
                }
                Some(b'0'..=b'9' | b't' | b'(') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ExprError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFunc, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let at = self.pos;
        let n = self.integer()?;
        let e: i32 = n.try_into().map_err(|_| ExprError::Syntax {
            pos: at,
            msg: "exponent too large".into(),
        })?;
        base.pow(if neg { -e } else { e })
            .ok_or(ExprError::DivisionByZero { pos: at })
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse as an integer"))
    }

    fn atom(&mut self) -> Result<RatFunc, ExprError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.integer()?;
                Ok(RatFunc::constant(n.into()))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RatFunc::t())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) => Err(self.syntax(format!("unexpected {:?}", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
