use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational::serde_str")]
    lo: Rational,
    #[serde(with = "rational::serde_str")]
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// Builds `[min(a,b), max(a,b)]`.
    pub fn hull_of(a: Rational, b: Rational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Open-interval containment `(lo, hi) ⊇ other`.
    pub fn interior_contains(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Rational {
        (self.lo.abs()).max(self.hi.abs())
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Rational {
        if self.lo.is_positive() {
            self.lo.clone()
        } else if self.hi.is_negative() {
            -self.hi.clone()
        } else {
            Rational::zero()
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add_scalar(&self, c: &Rational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn mul_scalar(&self, c: &Rational) -> Interval {
        Interval::hull_of(&self.lo * c, &self.hi * c)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if self.is_point() && o.is_point() {
            return Interval::point(&self.lo * &o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi }
    }

    /// `1/x`; `None` when the interval touches zero.
    pub fn recip(&self) -> Option<Interval> {
        if !self.excludes_zero() {
            return None;
        }
        Some(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        o.recip().map(|r| self.mul(&r))
    }

    /// Exact image of `x ↦ x^e` for `e >= 0`.
    pub fn powi(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(rational::int(1));
        }
        let a = rational::pow_int(&self.lo, e as i64);
        let b = rational::pow_int(&self.hi, e as i64);
        if e % 2 == 1 || self.lo.is_positive() || self.lo.is_zero() {
            Interval::hull_of(a, b)
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Interval::hull_of(a, b)
        } else {
            Interval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        }
    }

    /// Outward rounding of both endpoints to the dyadic grid `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval {
            lo: rational::round_down(&self.lo, bits),
            hi: rational::round_up(&self.hi, bits),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn rejects_reversed() {
        assert!(Interval::new(rat(1, 1), rat(0, 1)).is_err());
    }

    #[test]
    fn products_cover_sign_cases() {
        let a = iv((-1, 1), (2, 1));
        let b = iv((-3, 1), (1, 1));
        assert_eq!(a.mul(&b), iv((-6, 1), (3, 1)));
        assert_eq!(a.powi(2), iv((0, 1), (4, 1)));
        assert_eq!(iv((-3, 1), (-2, 1)).powi(2), iv((4, 1), (9, 1)));
        assert_eq!(a.powi(3), iv((-1, 1), (8, 1)));
    }

    #[test]
    fn reciprocal_needs_separation() {
        assert!(iv((-1, 1), (1, 1)).recip().is_none());
        assert_eq!(iv((2, 1), (4, 1)).recip().unwrap(), iv((1, 4), (1, 2)));
    }

    #[test]
    fn mig_and_mag() {
        let a = iv((-3, 1), (2, 1));
        assert_eq!(a.mag(), rat(3, 1));
        assert_eq!(a.mig(), rat(0, 1));
        assert_eq!(iv((-5, 1), (-2, 1)).mig(), rat(2, 1));
    }
}
