//! Real-number expressions accepted on the command line.
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | atom
//! atom   := number | "(" expr ")" | func "(" args ")"
//! func   := sqrt(E) | exp(E) | pow(E, p/q) | liouville(b)
//! number := digits ["." digits]
//! ```
//!
//! `liouville(b)` is `sum_k b^-k!`. Results keep their recipes, so any value
//! built here can be written into a certificate and rebuilt.

use crate::error::{Error, Result};
use crate::liouville::{series_constant, DigitRule, Schedule};
use crate::rational;
use crate::real::ExactReal;

pub fn parse_real(text: &str) -> Result<ExactReal> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        text,
    };
    p.skip_ws();
    if p.pos == p.s.len() {
        return Err(Error::Parse("empty expression".into()));
    }
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return p.fail("trailing input");
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos, self.text
        )))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<ExactReal> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExactReal> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ExactReal> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn number_literal(&mut self) -> Result<rational::Rational> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a number");
        }
        rational::parse_rational(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"))
    }

    fn atom(&mut self) -> Result<ExactReal> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || *c == b'.' => {
                Ok(ExactReal::from_rational(self.number_literal()?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.word().to_string();
                self.expect(b'(')?;
                let v = match name.as_str() {
                    "sqrt" => self.expr()?.sqrt()?,
                    "exp" => self.expr()?.exp(),
                    "pow" => {
                        let base = self.expr()?;
                        self.expect(b',')?;
                        let neg = self.eat(b'-');
                        let mut r = self.number_literal()?;
                        if self.eat(b'/') {
                            r /= self.number_literal()?;
                        }
                        base.pow_rational(&if neg { -r } else { r })?
                    }
                    "liouville" => {
                        let b = self.number_literal()?;
                        let base = if b.is_integer() {
                            b.to_integer().try_into().ok()
                        } else {
                            None
                        };
                        let base: u32 = match base {
                            Some(v) if v >= 2 => v,
                            _ => return self.fail("liouville base must be an integer >= 2"),
                        };
                        series_constant(
                            base,
                            Schedule::Factorial,
                            DigitRule::Constant { value: 1 },
                        )?
                    }
                    other => return self.fail(&format!("unknown function {other:?}")),
                };
                self.expect(b')')?;
                Ok(v)
            }
            _ => self.fail("expected a number, '(' or a function"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};
    use num_traits::Signed;

    #[test]
    fn rationals_stay_exact() {
        assert_eq!(
            parse_real("1/3 + 1/6").unwrap().as_rational(),
            Some(&rat(1, 2))
        );
        assert_eq!(
            parse_real("-0.25*4").unwrap().as_rational(),
            Some(&rat(-1, 1))
        );
        assert_eq!(
            parse_real("2 - (3 - 1)").unwrap().as_rational(),
            Some(&rat(0, 1))
        );
        assert_eq!(
            parse_real("sqrt(9/4)").unwrap().as_rational(),
            Some(&rat(3, 2))
        );
        assert_eq!(
            parse_real("pow(8, 2/3)").unwrap().as_rational(),
            Some(&rat(4, 1))
        );
        assert_eq!(
            parse_real("pow(4, -1/2)").unwrap().as_rational(),
            Some(&rat(1, 2))
        );
    }

    #[test]
    fn irrational_values() {
        let s = parse_real("sqrt(2)").unwrap();
        assert!(
            (s.refine(40).mid() - parse_rational("1.41421356237309505").unwrap()).abs()
                < rational::pow2(-39)
        );
        let l = parse_real("liouville(10) + 1/3").unwrap();
        let iv = l.refine(60);
        let approx = parse_rational("0.443334333333333333333").unwrap();
        assert!((iv.mid() - approx).abs() < rational::pow2(-50));
        assert!(l.recipe().is_some());
        assert!(parse_real("exp(1)").unwrap().recipe().is_some());
    }

    #[test]
    fn errors() {
        for bad in [
            "",
            "1 +",
            "sqrt 2",
            "foo(1)",
            "(1",
            "liouville(1)",
            "1/0",
            "2 2",
        ] {
            assert!(parse_real(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_real("sqrt(-1)").unwrap_err().token(), "DomainError");
        assert_eq!(
            parse_real("1/0").unwrap_err().token(),
            "DivisorNotSeparatedFromZero"
        );
    }
}
