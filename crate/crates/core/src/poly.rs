//! Exact univariate and bivariate polynomials over the rationals, with a
//! small text grammar shared by the CLI.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ["-"|"+"] term (("+" | "-") term)*
//! term   := power (("*" | "/") power | power)*     juxtaposition multiplies
//! power  := atom ("^" uint)?
//! atom   := number | var | "(" expr ")"
//! number := digits ["." digits]
//! ```
//!
//! Univariate polynomials use `z` (or `x`); bivariate ones use `x`/`X` and
//! `y`/`Y`. Division is only by nonzero constants.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{self, Rational};
use crate::real::ExactReal;

/// `c_0 + c_1 z + ... + c_d z^d`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        PolyQ { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> PolyQ {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn parse(text: &str) -> Result<PolyQ> {
        let p = Parser::new(text, Vars::Univariate).parse()?;
        let mut coeffs = Vec::new();
        for ((i, _), c) in p.terms {
            let i = i as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Rational::zero());
            }
            coeffs[i] = c;
        }
        Ok(PolyQ::new(coeffs))
    }

    /// As a bivariate polynomial in `X`.
    pub fn to_bivar(&self) -> BivarPolyQ {
        BivarPolyQ::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| ((i as u32, 0), c.clone())),
        )
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(i, c)| ((i as u32, 0u32), c))
            .collect();
        write_terms(f, terms.into_iter(), &["z", "y"])
    }
}

/// Sparse `sum c_ij X^i Y^j`, zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BivarPolyQ {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPolyQ {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut out = BivarPolyQ::default();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn zero() -> Self {
        BivarPolyQ::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0), Rational::one())])
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1), Rational::one())])
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn add(&self, other: &BivarPolyQ) -> BivarPolyQ {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BivarPolyQ) -> BivarPolyQ {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> BivarPolyQ {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, a * c)))
    }

    pub fn mul(&self, other: &BivarPolyQ) -> BivarPolyQ {
        let mut out = BivarPolyQ::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &other.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BivarPolyQ {
        let mut acc = BivarPolyQ::constant(Rational::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn partial_x(&self) -> BivarPolyQ {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * rational::int(*i))),
        )
    }

    pub fn partial_y(&self) -> BivarPolyQ {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * rational::int(*j))),
        )
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((i, j), c)| {
                c * rational::pow_int(x, *i as i64) * rational::pow_int(y, *j as i64)
            })
            .sum()
    }

    /// `P(x, y)` as an unreduced fraction `(num, den)` with `den > 0`, built
    /// on integers only. Cheap enough for sign tests at large precision.
    pub fn eval_scaled(&self, x: &Rational, y: &Rational) -> (BigInt, BigInt) {
        let dx = self.terms.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let dy = self.terms.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let powers = |n: &BigInt, d: &BigInt, e: usize| {
            let mut np = vec![BigInt::one()];
            let mut dp = vec![BigInt::one()];
            for k in 0..e {
                np.push(&np[k] * n);
                dp.push(&dp[k] * d);
            }
            (np, dp)
        };
        let (xn, xd) = powers(x.numer(), x.denom(), dx);
        let (yn, yd) = powers(y.numer(), y.denom(), dy);
        let l = self.terms.values().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        let mut num = BigInt::zero();
        for ((i, j), c) in &self.terms {
            let (i, j) = (*i as usize, *j as usize);
            let c = c.numer() * (&l / c.denom());
            num += c * &xn[i] * &xd[dx - i] * &yn[j] * &yd[dy - j];
        }
        (num, l * &xd[dx] * &yd[dy])
    }

    /// Interval enclosure over the box `x × y` (monomial-wise).
    pub fn eval_interval(&self, x: &Interval, y: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for ((i, j), c) in &self.terms {
            let m = x.powi(*i).mul(&y.powi(*j)).mul_scalar(c);
            acc = acc.add(&m);
        }
        acc
    }

    /// Certified `F(x, y)` for exact reals.
    pub fn eval_real(&self, x: &ExactReal, y: &ExactReal) -> ExactReal {
        let mut acc = ExactReal::from_int(0);
        for ((i, j), c) in &self.terms {
            let m = x.powi(*i).mul(&y.powi(*j)).mul_rational(c);
            acc = acc.add(&m);
        }
        acc
    }

    /// `P(F)` for univariate `P`, by Horner's scheme.
    pub fn compose_into(&self, p: &PolyQ) -> BivarPolyQ {
        p.coeffs().iter().rev().fold(BivarPolyQ::zero(), |acc, c| {
            acc.mul(self).add(&BivarPolyQ::constant(c.clone()))
        })
    }

    pub fn parse(text: &str) -> Result<BivarPolyQ> {
        Ok(Parser::new(text, Vars::Bivariate).parse()?)
    }
}

impl fmt::Display for BivarPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Highest total degree first, then by descending power of x.
        let mut terms: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        terms.sort_by(|a, b| (b.0 .0 + b.0 .1, b.0 .0).cmp(&(a.0 .0 + a.0 .1, a.0 .0)));
        write_terms(f, terms.into_iter(), &["x", "y"])
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = ((u32, u32), &'a Rational)>,
    names: &[&str; 2],
) -> fmt::Result {
    let mut first = true;
    for ((i, j), c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let mut parts = Vec::new();
        if !a.is_one() || (i == 0 && j == 0) {
            parts.push(a.to_string());
        }
        for (e, name) in [(i, names[0]), (j, names[1])] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Vars {
    Univariate,
    Bivariate,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(u8),
    Op(char),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    err: Option<Error>,
}

impl Parser {
    fn new(text: &str, vars: Vars) -> Self {
        let mut toks = Vec::new();
        let mut err = None;
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                match rational::parse_rational(&lit) {
                    Ok(v) => toks.push(Tok::Num(v)),
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            } else if "+-*/^()".contains(ch) {
                toks.push(Tok::Op(ch));
                i += 1;
            } else {
                let var = match (vars, ch) {
                    (Vars::Univariate, 'z' | 'Z' | 'x' | 'X') => Some(0),
                    (Vars::Bivariate, 'x' | 'X') => Some(0),
                    (Vars::Bivariate, 'y' | 'Y') => Some(1),
                    _ => None,
                };
                match var {
                    Some(v) => toks.push(Tok::Var(v)),
                    None => {
                        err.get_or_insert(Error::Parse(format!(
                            "unexpected character {ch:?} in polynomial {text:?}"
                        )));
                    }
                }
                i += 1;
            }
        }
        Parser { toks, pos: 0, err }
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at token {}", self.pos)))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<BivarPolyQ> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        if self.toks.is_empty() {
            return self.fail("empty polynomial");
        }
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return self.fail("trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<BivarPolyQ> {
        let mut acc = if self.eat('-') {
            self.term()?.scale(&-Rational::one())
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn term(&mut self) -> Result<BivarPolyQ> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return self.fail("division only by nonzero constants");
                }
                acc = acc.scale(&d.coeff(0, 0).recip());
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::Var(_)) | Some(Tok::Op('('))
            ) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<BivarPolyQ> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.peek() {
                Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => n.to_integer(),
                _ => return self.fail("exponent must be a nonnegative integer"),
            };
            self.pos += 1;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            if e > 4096 {
                return self.fail("exponent too large");
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BivarPolyQ> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(BivarPolyQ::constant(v))
            }
            Some(Tok::Var(0)) => {
                self.pos += 1;
                Ok(BivarPolyQ::x())
            }
            Some(Tok::Var(_)) => {
                self.pos += 1;
                Ok(BivarPolyQ::y())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail("missing ')'");
                }
                Ok(e)
            }
            _ => self.fail("expected a number, variable or '('"),
        }
    }
}

macro_rules! serde_as_text {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                let text = <String as serde::Deserialize>::deserialize(d)?;
                <$t>::parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_as_text!(PolyQ);
serde_as_text!(BivarPolyQ);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parse_univariate() {
        let p = PolyQ::parse("z^3 - 2*z + 1/2").unwrap();
        assert_eq!(p.coeffs(), &[rat(1, 2), rat(-2, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.to_string(), "z^3 - 2*z + 1/2");
        assert_eq!(
            PolyQ::parse("(z+1)^2").unwrap(),
            PolyQ::from_ints(&[1, 2, 1])
        );
        assert_eq!(PolyQ::parse("-z").unwrap(), PolyQ::from_ints(&[0, -1]));
        assert_eq!(PolyQ::parse("3z^2").unwrap(), PolyQ::from_ints(&[0, 0, 3]));
        assert_eq!(
            PolyQ::parse("0.5 z").unwrap(),
            PolyQ::new(vec![rat(0, 1), rat(1, 2)])
        );
        assert_eq!(PolyQ::parse("7").unwrap(), PolyQ::from_ints(&[7]));
        assert_eq!(PolyQ::parse("z - z").unwrap().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "z^", "z^-1", "(z", "z/z", "y", "z ++", "z $", "1/0"] {
            assert!(PolyQ::parse(bad).is_err(), "{bad}");
        }
        assert_eq!(PolyQ::parse("q").unwrap_err().token(), "ParseError");
    }

    #[test]
    fn parse_bivariate() {
        let p = BivarPolyQ::parse("x^2*y - 3").unwrap();
        assert_eq!(p.coeff(2, 1), rat(1, 1));
        assert_eq!(p.coeff(0, 0), rat(-3, 1));
        let q = BivarPolyQ::parse("X^2 + Y^2 - 1").unwrap();
        assert_eq!(q.to_string(), "x^2 + y^2 - 1");
        assert_eq!(q.eval(&rat(3, 5), &rat(4, 5)), rat(0, 1));
    }

    #[test]
    fn partials_and_intervals() {
        let p = BivarPolyQ::parse("x^2*y + 3*y^2 - x").unwrap();
        assert_eq!(p.partial_x(), BivarPolyQ::parse("2*x*y - 1").unwrap());
        assert_eq!(p.partial_y(), BivarPolyQ::parse("x^2 + 6*y").unwrap());
        let iv = p.eval_interval(&Interval::point(rat(1, 2)), &Interval::point(rat(1, 3)));
        assert_eq!(iv, Interval::point(p.eval(&rat(1, 2), &rat(1, 3))));
    }

    #[test]
    fn composition() {
        let f = BivarPolyQ::parse("x + y").unwrap();
        let p = PolyQ::parse("z^2 - 2").unwrap();
        assert_eq!(
            f.compose_into(&p),
            BivarPolyQ::parse("x^2 + 2*x*y + y^2 - 2").unwrap()
        );
    }
}
