//! Recursive-descent parser for the scalar expression grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('/' atom)?
//! atom     := rational | 't' ('^' signed_int)? | '(' expr ')'
//! rational := signed_int ('/' int)?
//! ```
//!
//! Whitespace is ignored everywhere.

use num::{BigInt, Zero};

use super::{RatFun, Rational};
use crate::error::{Error, Result};

const MAX_EXPONENT: i64 = 4096;

pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parse an expression that must evaluate to a constant.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let v = parse_ratfun(text)?;
    v.as_constant()
        .ok_or_else(|| Error::SyntaxError { pos: 0, msg: format!("expected a rational constant, got {v}") })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::SyntaxError { pos: self.pos, msg: msg.to_string() }
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

    fn peek_after_minus_is_digit(&mut self) -> bool {
        let mut i = self.pos + 1;
        while i < self.src.len() && self.src[i].is_ascii_whitespace() {
            i += 1;
        }
        self.src.get(i).is_some_and(|c| c.is_ascii_digit())
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFun> {
        let a = self.atom()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let b = self.atom()?;
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(&a / &b);
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let k = self.signed_int()?;
                    let k: i64 = k
                        .try_into()
                        .ok()
                        .filter(|k: &i64| k.abs() <= MAX_EXPONENT)
                        .ok_or_else(|| self.err("exponent out of range"))?;
                    Ok(RatFun::t_pow(k))
                } else {
                    Ok(RatFun::t())
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || (c == b'-' && self.peek_after_minus_is_digit()) => {
                self.rational().map(RatFun::from_rational)
            }
            Some(_) => Err(self.err("expected a number, 't' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.signed_int()?;
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let den = self.unsigned_int()?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                return Ok(Rational::new(num, den));
            }
            self.pos = save;
        }
        Ok(Rational::from_integer(num))
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.unsigned_int()?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned_int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_exponent() {
        assert_eq!(parse_ratfun("t^-1").unwrap(), RatFun::t_pow(-1));
        assert_eq!(parse_ratfun("t^ - 2").unwrap(), RatFun::t_pow(-2));
    }

    #[test]
    fn monic_denominator() {
        let v = parse_ratfun("(3*t^2 - 1/2)/(1 + t)").unwrap();
        assert!(v.denom().leading() == Rational::from_integer(1.into()));
        assert_eq!(v.to_string(), "(3*t^2 - 1/2)/(1*t + 1)");
    }

    #[test]
    fn zero_and_constants() {
        assert!(parse_ratfun("0").unwrap().is_zero());
        assert_eq!(parse_ratfun("-3/6").unwrap(), RatFun::from_rational(Rational::new((-1).into(), 2.into())));
        assert_eq!(parse_ratfun("1 - -2").unwrap(), RatFun::from_int(3));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(parse_ratfun("t^^2").unwrap_err(), Error::SyntaxError { pos: 2, msg: "expected digits".into() });
        assert!(matches!(parse_ratfun("(1+t"), Err(Error::SyntaxError { pos: 4, .. })));
        assert!(matches!(parse_ratfun("1 2"), Err(Error::SyntaxError { pos: 2, .. })));
        assert!(matches!(parse_ratfun(""), Err(Error::SyntaxError { pos: 0, .. })));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(parse_ratfun("1/0"), Err(Error::DivisionByZero));
        assert_eq!(parse_ratfun("t/(t - t)"), Err(Error::DivisionByZero));
    }

    #[test]
    fn slash_binds_rational_first() {
        assert_eq!(parse_ratfun("3/2*t").unwrap(), parse_ratfun("(3/2)*t").unwrap());
        assert_eq!(parse_ratfun("3/(2*t)").unwrap(), parse_ratfun("3/2*t^-1").unwrap());
    }
}
