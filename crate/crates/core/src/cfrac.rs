//! Continued fractions: certified expansion, convergents, best-approximation
//! checks and the p-th power convergent test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{self, Rational};
use crate::real::{Budget, ExactReal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFrac {
    #[serde(with = "bigint_vec")]
    pub quotients: Vec<BigInt>,
    /// The expansion is the complete expansion of a rational.
    pub terminated: bool,
}

impl CFrac {
    /// Exact value of the (possibly truncated) expansion.
    pub fn evaluate(&self) -> Option<Rational> {
        let (p, q) = convergents(self).pop()?;
        Some(Rational::new(p, q))
    }
}

impl fmt::Display for CFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.quotients.iter().enumerate() {
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "; {a}")?,
                _ => write!(f, ", {a}")?,
            }
        }
        write!(f, "]")?;
        if !self.terminated {
            write!(f, " ...")?;
        }
        Ok(())
    }
}

mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Canonical expansion of a rational (Euclid), cut at `depth` quotients.
pub fn cf_expand_rational(x: &Rational, depth: usize) -> CFrac {
    let mut quotients = Vec::new();
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    while !d.is_zero() {
        if quotients.len() == depth {
            return CFrac {
                quotients,
                terminated: false,
            };
        }
        let (a, r) = n.div_mod_floor(&d);
        quotients.push(a);
        n = std::mem::replace(&mut d, r);
    }
    CFrac {
        quotients,
        terminated: true,
    }
}

/// Quotients shared by every point of `iv`.
fn interval_prefix(iv: &Interval, depth: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut l, mut h) = (iv.lo().clone(), iv.hi().clone());
    while out.len() < depth {
        let a = rational::floor(&l);
        if rational::floor(&h) != a {
            break;
        }
        let ar = rational::int(a.clone());
        out.push(a);
        if l == ar {
            break;
        }
        let nl = (&h - &ar).recip();
        let nh = (&l - &ar).recip();
        l = nl;
        h = nh;
    }
    out
}

/// First `depth` partial quotients, each certified by an interval whose
/// points all share it.
pub fn cf_expand(x: &ExactReal, depth: usize) -> Result<CFrac> {
    cf_expand_with(x, depth, Budget::default().cfrac)
}

pub fn cf_expand_with(x: &ExactReal, depth: usize, budget: u32) -> Result<CFrac> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if let Some(r) = x.as_rational() {
        return Ok(cf_expand_rational(r, depth));
    }
    let mut k = 64.min(budget);
    loop {
        let q = interval_prefix(&x.refine(k), depth);
        if q.len() >= depth {
            return Ok(CFrac {
                quotients: q,
                terminated: false,
            });
        }
        if k >= budget {
            return Err(Error::RefinementBudgetExceeded { budget });
        }
        k = (k * 2).min(budget);
    }
}

/// As many quotients (up to `depth`) as can be certified at precision `budget`.
pub fn certified_prefix(x: &ExactReal, depth: u32, budget: u32) -> CFrac {
    if let Some(r) = x.as_rational() {
        return cf_expand_rational(r, depth as usize);
    }
    CFrac {
        quotients: interval_prefix(&x.refine(budget), depth as usize),
        terminated: false,
    }
}

pub fn convergents(cf: &CFrac) -> Vec<(BigInt, BigInt)> {
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    cf.quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect()
}

/// Enclosure of `||y||` over all `y` in `iv`.
fn nearest_dist_over(iv: &Interval) -> Interval {
    let half = rational::rat(1, 2);
    let d = |y: &Rational| {
        let m = rational::floor(&(y + &half));
        (y - rational::int(m)).abs()
    };
    let (a, b) = (d(iv.lo()), d(iv.hi()));
    let has_int = rational::ceil(iv.lo()) <= rational::floor(iv.hi());
    let has_half = rational::ceil(&(iv.lo() - &half)) <= rational::floor(&(iv.hi() - &half));
    let lo = if has_int {
        Rational::zero()
    } else {
        a.clone().min(b.clone())
    };
    let hi = if has_half { half } else { a.max(b) };
    Interval::hull_of(lo, hi)
}

/// `||q' x|| > |q x - p|` for every `1 <= q' < q`.
pub fn best_approx_check(x: &ExactReal, p: &BigInt, q: &BigInt) -> Result<bool> {
    best_approx_check_with(x, p, q, Budget::default().precision)
}

pub fn best_approx_check_with(x: &ExactReal, p: &BigInt, q: &BigInt, budget: u32) -> Result<bool> {
    if q < &BigInt::from(2) {
        return Err(Error::InvalidArgument("q must be at least 2".into()));
    }
    if let Some(r) = x.as_rational() {
        return Ok(best_approx_rational(r, p, q));
    }
    let mut k = (2 * q.bits() as u32 + 32).min(budget);
    let mut start = BigInt::one();
    loop {
        let iv = x.refine(k);
        let err = iv
            .mul_scalar(&rational::int(q.clone()))
            .add_scalar(&-rational::int(p.clone()));
        let err_hi = err.mag();
        let err_lo = err.mig();
        let mut qq = start.clone();
        let mut undecided = false;
        while &qq < q {
            let d = nearest_dist_over(&iv.mul_scalar(&rational::int(qq.clone())));
            if d.lo() > &err_hi {
                qq += 1;
                continue;
            }
            if d.hi() <= &err_lo {
                return Ok(false);
            }
            undecided = true;
            break;
        }
        if !undecided {
            return Ok(true);
        }
        if k >= budget {
            return Err(Error::RefinementBudgetExceeded { budget });
        }
        start = qq;
        k = (k * 2).min(budget);
    }
}

fn best_approx_rational(x: &Rational, p: &BigInt, q: &BigInt) -> bool {
    // With x = a/b every quantity is a multiple of 1/b; compare numerators.
    let (a, b) = (x.numer(), x.denom());
    let err = (q * a - p * b).abs();
    let mut qq = BigInt::one();
    let mut r = a.mod_floor(b);
    let step = r.clone();
    while &qq < q {
        let d = (&r).min(&(b - &r)).clone();
        if d <= err {
            return false;
        }
        qq += 1;
        r += &step;
        if &r >= b {
            r -= b;
        }
    }
    true
}

/// Indices `k` among the first `depth` convergents with both `p_k` and `q_k`
/// perfect `power`-th powers. For `power >= 2` integer convergents
/// (`q_k = 1`) are skipped: `1` is a power of every order, so they would make
/// every number pass at index 0.
pub fn maillet_root_witnesses(x: &ExactReal, power: u32, depth: usize) -> Result<Vec<usize>> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let cf = cf_expand(x, depth)?;
    Ok(convergents(&cf)
        .iter()
        .enumerate()
        .filter(|(_, (_, q))| power == 1 || !q.is_one())
        .filter(|(_, (p, q))| {
            rational::is_perfect_power(p, power) && rational::is_perfect_power(q, power)
        })
        .map(|(i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::classical_constant;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn sqrt2() -> ExactReal {
        ExactReal::from_int(2).sqrt().unwrap()
    }

    #[test]
    fn rational_expansions() {
        assert_eq!(
            cf_expand_rational(&rat(1, 2), 10),
            CFrac {
                quotients: ints(&[0, 2]),
                terminated: true
            }
        );
        assert_eq!(
            cf_expand_rational(&rat(355, 113), 10).quotients,
            ints(&[3, 7, 16])
        );
        assert_eq!(
            cf_expand_rational(&rat(-7, 3), 10).quotients,
            ints(&[-3, 1, 2])
        );
        let cut = cf_expand_rational(&rat(355, 113), 2);
        assert!(!cut.terminated);
        assert_eq!(cut.to_string(), "[3; 7] ...");
    }

    #[test]
    fn sqrt2_expansion_is_certified() {
        let cf = cf_expand(&sqrt2(), 6).unwrap();
        assert_eq!(cf.quotients, ints(&[1, 2, 2, 2, 2, 2]));
        assert!(!cf.terminated);
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&CFrac {
            quotients: ints(&[0, 2]),
            terminated: true,
        });
        assert_eq!(c, vec![(0.into(), 1.into()), (1.into(), 2.into())]);
        let c = convergents(&CFrac {
            quotients: ints(&[3, 7, 16]),
            terminated: true,
        });
        assert_eq!(c[2], (355.into(), 113.into()));
        let c = convergents(&CFrac {
            quotients: ints(&[1, 2, 2, 2]),
            terminated: false,
        });
        assert_eq!(c[3], (17.into(), 12.into()));
    }

    #[test]
    fn best_approximations_of_sqrt2() {
        let s = sqrt2();
        assert!(best_approx_check(&s, &7.into(), &5.into()).unwrap());
        assert!(best_approx_check(&s, &3.into(), &2.into()).unwrap());
        assert!(!best_approx_check(&s, &14.into(), &10.into()).unwrap());
    }

    #[test]
    fn maillet_examples() {
        let s = sqrt2();
        assert_eq!(
            maillet_root_witnesses(&s, 1, 5).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        assert!(maillet_root_witnesses(&s, 2, 10).unwrap().is_empty());
        let l = classical_constant();
        let sq = l.mul(&l);
        assert!(maillet_root_witnesses(&sq, 2, 12).unwrap().is_empty());
        // Squares of the truncations 110001/10^6 and the next one appear further out.
        assert_eq!(maillet_root_witnesses(&sq, 2, 91).unwrap(), vec![20, 90]);
        let r = ExactReal::from_rational(rat(4, 9));
        assert_eq!(maillet_root_witnesses(&r, 2, 5).unwrap(), vec![2]);
    }

    #[test]
    fn secretly_rational_value_stalls() {
        let s = sqrt2();
        let two = s.mul(&s);
        assert_eq!(
            cf_expand_with(&two, 3, 128).unwrap_err().token(),
            "RefinementBudgetExceeded"
        );
    }

    proptest! {
        #[test]
        fn rational_round_trip_and_invariants(n in -100_000i64..100_000, d in 1i64..5_000) {
            let x = rat(n, d);
            let cf = cf_expand_rational(&x, 1000);
            prop_assert!(cf.terminated);
            prop_assert!(cf.quotients[1..].iter().all(|a| a >= &BigInt::one()));
            if cf.quotients.len() >= 2 {
                prop_assert!(cf.quotients.last().unwrap() >= &BigInt::from(2));
            }
            prop_assert_eq!(cf.evaluate().unwrap(), x);
            let c = convergents(&cf);
            for k in 1..c.len() {
                let det = &c[k].0 * &c[k - 1].1 - &c[k - 1].0 * &c[k].1;
                let expect = if k % 2 == 1 { 1 } else { -1 };
                prop_assert_eq!(det, BigInt::from(expect));
            }
        }
    }
}
