//! Exact rationals in lowest terms with a positive denominator.
//!
//! A thin owner of a numerator/denominator pair. It exists instead of
//! `num_rational::BigRational` for two reasons that matter at the precisions
//! used here (tens of thousands of bits, mostly dyadic): ordering is by
//! cross-multiplication rather than a recursive continued-fraction walk, and
//! reduction strips powers of two before any gcd.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: BigInt,
    denom: BigInt,
}

/// `gcd(a, b)`: common twos first, then Euclid steps while the sizes are
/// lopsided, then a binary gcd. A plain binary gcd takes a step per bit when
/// one side is a power of two.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    if a.is_zero() || b.is_zero() {
        return a + b;
    }
    let ta = a.trailing_zeros().unwrap_or(0);
    let tb = b.trailing_zeros().unwrap_or(0);
    a >>= ta as usize;
    b >>= tb as usize;
    loop {
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_one() {
            break;
        }
        if a.bits() < b.bits() + 64 {
            b = a.gcd(&b);
            break;
        }
        a %= &b;
        if a.is_zero() {
            break;
        }
        a >>= a.trailing_zeros().unwrap_or(0) as usize;
    }
    b << ta.min(tb) as usize
}

impl Rational {
    /// `n / d` in lowest terms. Panics on `d = 0`.
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        let g = gcd(&numer, &denom);
        let (n, d) = if g.is_one() {
            (numer, denom)
        } else {
            (numer / &g, denom / &g)
        };
        if d.is_negative() {
            Rational {
                numer: -n,
                denom: -d,
            }
        } else {
            Rational { numer: n, denom: d }
        }
    }

    /// Trusts the caller: `denom > 0` and `gcd(numer, denom) = 1`.
    pub fn new_raw(numer: BigInt, denom: BigInt) -> Self {
        debug_assert!(denom.is_positive());
        Rational { numer, denom }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Rational {
            numer: n,
            denom: BigInt::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integer(&self) -> bool {
        self.denom.is_one()
    }

    pub fn to_integer(&self) -> BigInt {
        // truncation toward zero
        &self.numer / &self.denom
    }

    pub fn floor(&self) -> Rational {
        Rational::from_integer(self.numer.div_floor(&self.denom))
    }

    pub fn ceil(&self) -> Rational {
        Rational::from_integer(-(-&self.numer).div_floor(&self.denom))
    }

    pub fn recip(&self) -> Rational {
        assert!(!self.numer.is_zero(), "reciprocal of zero");
        if self.numer.is_negative() {
            Rational {
                numer: -&self.denom,
                denom: -&self.numer,
            }
        } else {
            Rational {
                numer: self.denom.clone(),
                denom: self.numer.clone(),
            }
        }
    }

    fn add_ref(&self, o: &Rational) -> Rational {
        if self.denom == o.denom {
            return Rational::new(&self.numer + &o.numer, self.denom.clone());
        }
        Rational::new(
            &self.numer * &o.denom + &o.numer * &self.denom,
            &self.denom * &o.denom,
        )
    }

    fn sub_ref(&self, o: &Rational) -> Rational {
        if self.denom == o.denom {
            return Rational::new(&self.numer - &o.numer, self.denom.clone());
        }
        Rational::new(
            &self.numer * &o.denom - &o.numer * &self.denom,
            &self.denom * &o.denom,
        )
    }

    fn mul_ref(&self, o: &Rational) -> Rational {
        if self.denom.is_one() && o.denom.is_one() {
            return Rational::from_integer(&self.numer * &o.numer);
        }
        // cross-cancel first so the products stay small
        let g1 = gcd(&self.numer, &o.denom);
        let g2 = gcd(&o.numer, &self.denom);
        let n = (&self.numer / &g1) * (&o.numer / &g2);
        let d = (&self.denom / &g2) * (&o.denom / &g1);
        Rational { numer: n, denom: d }
    }

    fn div_ref(&self, o: &Rational) -> Rational {
        self.mul_ref(&o.recip())
    }
}

impl Ord for Rational {
    fn cmp(&self, o: &Self) -> Ordering {
        let (s, t) = (self.numer.sign(), o.numer.sign());
        if s != t {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(s).cmp(&rank(t));
        }
        if self.denom == o.denom {
            return self.numer.cmp(&o.numer);
        }
        (&self.numer * &o.denom).cmp(&(&o.numer * &self.denom))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident, $atr:ident, $am:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                self.$f(o)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                self.$f(&o)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                self.$f(o)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                self.$f(&o)
            }
        }
        impl $atr<&Rational> for Rational {
            fn $am(&mut self, o: &Rational) {
                *self = self.$f(o);
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, o: Rational) {
                *self = self.$f(&o);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
binop!(Div, div, div_ref, DivAssign, div_assign);

impl Rem<Rational> for Rational {
    type Output = Rational;
    fn rem(self, o: Rational) -> Rational {
        let q = (&self / &o).to_integer();
        &self - &(&o * &Rational::from_integer(q))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numer: -self.numer,
            denom: self.denom,
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::from_integer(BigInt::zero())
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::from_integer(BigInt::one())
    }
    fn is_one(&self) -> bool {
        self.numer.is_one() && self.denom.is_one()
    }
}

impl Num for Rational {
    type FromStrRadixErr = num_bigint::ParseBigIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str_radix(n, radix)?;
                let d = BigInt::from_str_radix(d, radix)?;
                Ok(if d.is_zero() {
                    Rational::zero()
                } else {
                    Rational::new(n, d)
                })
            }
            None => Ok(Rational::from_integer(BigInt::from_str_radix(s, radix)?)),
        }
    }
}

impl Signed for Rational {
    fn abs(&self) -> Self {
        Rational {
            numer: self.numer.abs(),
            denom: self.denom.clone(),
        }
    }
    fn abs_sub(&self, o: &Self) -> Self {
        if self <= o {
            Rational::zero()
        } else {
            self - o
        }
    }
    fn signum(&self) -> Self {
        Rational::from_integer(self.numer.signum())
    }
    fn is_positive(&self) -> bool {
        self.numer.is_positive()
    }
    fn is_negative(&self) -> bool {
        self.numer.is_negative()
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        self.is_integer().then(|| self.numer.to_i64()).flatten()
    }
    fn to_u64(&self) -> Option<u64> {
        self.is_integer().then(|| self.numer.to_u64()).flatten()
    }
    fn to_f64(&self) -> Option<f64> {
        // keep 64 significant bits of each side before dividing
        let shift = |x: &BigInt| x.bits().saturating_sub(64);
        let (sn, sd) = (shift(&self.numer), shift(&self.denom));
        let n = (&self.numer >> sn as usize).to_f64()?;
        let d = (&self.denom >> sd as usize).to_f64()?;
        Some(n / d * 2f64.powi(sn as i32 - sd as i32))
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn big(n: i64, d: i64) -> num_rational::BigRational {
        num_rational::BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn same(a: &Rational, b: &num_rational::BigRational) -> bool {
        a.numer() == b.numer() && a.denom() == b.denom()
    }

    proptest! {
        #[test]
        fn agrees_with_num_rational(a in -10_000i64..10_000, b in 1i64..500, c in -10_000i64..10_000, d in 1i64..500) {
            let (x, y) = (r(a, b), r(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert!(same(&(&x + &y), &(&bx + &by)));
            prop_assert!(same(&(&x - &y), &(&bx - &by)));
            prop_assert!(same(&(&x * &y), &(&bx * &by)));
            if c != 0 {
                prop_assert!(same(&(&x / &y), &(&bx / &by)));
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert!(same(&x.floor(), &bx.floor()));
            prop_assert!(same(&x.ceil(), &bx.ceil()));
            prop_assert_eq!(x.to_integer(), bx.to_integer());
        }

        #[test]
        fn gcd_matches_binary_gcd(a in any::<i128>(), b in any::<i128>(), sa in 0usize..300, sb in 0usize..300) {
            let (a, b) = (BigInt::from(a) << sa, BigInt::from(b) << sb);
            prop_assert_eq!(gcd(&a, &b), a.gcd(&b));
        }
    }

    #[test]
    fn huge_dyadics_compare_without_recursion() {
        let e = 300_000usize;
        let a = Rational::new((BigInt::one() << e) / 3, BigInt::one() << e);
        let b = &a + &Rational::new(BigInt::one(), BigInt::one() << e);
        assert!(a < b);
        assert_eq!(
            gcd(&((BigInt::one() << 5000usize) + 1), &BigInt::from(2)),
            BigInt::one()
        );
    }

    #[test]
    fn display_and_float() {
        assert_eq!(r(-6, 4).to_string(), "-3/2");
        assert_eq!(r(8, 4).to_string(), "2");
        assert!((r(1, 3).to_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
}
