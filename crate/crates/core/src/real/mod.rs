//! Certified real numbers as processes producing nested rational intervals.
//!
//! A value is either an exact rational or an approximator closure `raw(k)`
//! returning *some* enclosure of width `<= 2^-(k+4)`. [`ExactReal::refine`]
//! turns those enclosures into a canonical nested sequence: the result at
//! precision `k` is the closed ball of radius `2^-(k+1)` around the raw
//! midpoint rounded to the grid `2^-(k+5)`. Two consecutive balls then always
//! nest, whatever enclosures the approximator returned.
//!
//! Values are immutable and cheap to clone (`Arc`). The per-precision memo is
//! behind a mutex, so concurrent readers are safe and see identical intervals.

mod arith;
mod elem;
pub(crate) mod kernels;
mod recipe;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use arith::{field_op, interval_image, ArithOp};
pub use elem::{elem_eval, ElemFn};
pub use recipe::{Part, Recipe};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::liouville::Witness;
use crate::rational::{self, Rational};

/// Refinement budgets shared by the operations that search by refining.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Zero-separation search for division and domain checks.
    pub separation: u32,
    /// Continued-fraction certification.
    pub cfrac: u32,
    /// Generic decision procedures (comparisons, witness checks).
    pub precision: u32,
    /// Number of convergents examined when searching for witnesses.
    pub cf_depth: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            separation: 256,
            cfrac: 512,
            precision: 1024,
            cf_depth: 64,
        }
    }
}

type RawFn = dyn Fn(u32) -> Interval + Send + Sync;

enum Kind {
    Exact(Rational),
    Approx(Box<RawFn>),
}

struct Inner {
    kind: Arc<Kind>,
    recipe: Option<Recipe>,
    witnesses: Option<Vec<Witness>>,
    cache: Arc<Mutex<HashMap<u32, Interval>>>,
}

#[derive(Clone)]
pub struct ExactReal {
    inner: Arc<Inner>,
}

impl ExactReal {
    pub fn from_rational(x: Rational) -> Self {
        Self::build(
            Kind::Exact(x.clone()),
            Some(Recipe::Rational { value: x }),
            None,
        )
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational::int(n))
    }

    /// Wraps an approximator. `raw(k)` must contain the value and have width
    /// at most `2^-(k+4)`, and must be deterministic.
    pub fn from_fn<F>(raw: F, recipe: Option<Recipe>) -> Self
    where
        F: Fn(u32) -> Interval + Send + Sync + 'static,
    {
        Self::build(Kind::Approx(Box::new(raw)), recipe, None)
    }

    fn build(kind: Kind, recipe: Option<Recipe>, witnesses: Option<Vec<Witness>>) -> Self {
        ExactReal {
            inner: Arc::new(Inner {
                kind: Arc::new(kind),
                recipe,
                witnesses,
                cache: Arc::new(Mutex::new(HashMap::new())),
            }),
        }
    }

    /// Same value and cache, different metadata.
    pub fn with_recipe(&self, recipe: Recipe) -> Self {
        self.rewrap(Some(recipe), self.inner.witnesses.clone())
    }

    /// Attaches witnesses known from the construction (read by `certify_level`).
    pub fn with_witnesses(&self, witnesses: Vec<Witness>) -> Self {
        self.rewrap(self.inner.recipe.clone(), Some(witnesses))
    }

    fn rewrap(&self, recipe: Option<Recipe>, witnesses: Option<Vec<Witness>>) -> Self {
        ExactReal {
            inner: Arc::new(Inner {
                kind: Arc::clone(&self.inner.kind),
                recipe,
                witnesses,
                cache: Arc::clone(&self.inner.cache),
            }),
        }
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        self.inner.recipe.as_ref()
    }

    pub fn known_witnesses(&self) -> Option<&[Witness]> {
        self.inner.witnesses.as_deref()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &*self.inner.kind {
            Kind::Exact(x) => Some(x),
            Kind::Approx(_) => None,
        }
    }

    /// The interval at precision `k`: nested in `refine(k-1)`, width `<= 2^-k`.
    pub fn refine(&self, k: u32) -> Interval {
        let raw = match &*self.inner.kind {
            Kind::Exact(x) => return Interval::point(x.clone()),
            Kind::Approx(f) => f,
        };
        if let Some(hit) = self.inner.cache.lock().expect("cache poisoned").get(&k) {
            return hit.clone();
        }
        let enclosure = raw(k);
        debug_assert!(enclosure.width() <= rational::pow2(-(k as i64) - 4));
        let centre = rational::round_nearest(&enclosure.mid(), k + 5);
        let radius = rational::pow2(-(k as i64) - 1);
        let ball = Interval::new(&centre - &radius, &centre + &radius).expect("ordered");
        self.inner
            .cache
            .lock()
            .expect("cache poisoned")
            .insert(k, ball.clone());
        ball
    }

    /// First precision `<= budget` at which the value is certified nonzero.
    pub fn separate_from_zero(&self, budget: u32) -> Option<(u32, Interval)> {
        if let Some(x) = self.as_rational() {
            return (!x.is_zero()).then(|| (0, Interval::point(x.clone())));
        }
        let mut k = 0;
        loop {
            let iv = self.refine(k);
            if iv.excludes_zero() {
                return Some((k, iv));
            }
            if k >= budget {
                return None;
            }
            k = if k == 0 {
                budget.min(8)
            } else {
                (k * 2).min(budget)
            };
        }
    }

    /// Certified sign, or `None` if undecided within `budget`.
    pub fn sign(&self, budget: u32) -> Option<std::cmp::Ordering> {
        if let Some(x) = self.as_rational() {
            return Some(x.cmp(&Rational::zero()));
        }
        self.separate_from_zero(budget).map(|(_, iv)| {
            if iv.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            }
        })
    }

    /// Decides `self < r` or `self > r`; `None` when undecided within `budget`.
    pub fn compare_rational(&self, r: &Rational, budget: u32) -> Option<std::cmp::Ordering> {
        if let Some(x) = self.as_rational() {
            return Some(x.cmp(r));
        }
        let mut k = 8;
        loop {
            let iv = self.refine(k);
            if iv.hi() < r {
                return Some(std::cmp::Ordering::Less);
            }
            if iv.lo() > r {
                return Some(std::cmp::Ordering::Greater);
            }
            if k >= budget {
                return None;
            }
            k = (k * 2).min(budget);
        }
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner.kind {
            Kind::Exact(x) => write!(f, "ExactReal({x})"),
            Kind::Approx(_) => write!(
                f,
                "ExactReal(~{})",
                rational::to_decimal(&self.refine(40).mid(), 10)
            ),
        }
    }
}

impl From<Rational> for ExactReal {
    fn from(x: Rational) -> Self {
        ExactReal::from_rational(x)
    }
}

/// Calls `f(j)` at increasing internal precisions until its width is at most
/// `2^-target`. `f` must return enclosures that shrink to zero width.
pub(crate) fn tighten(target: u32, start: u32, mut f: impl FnMut(u32) -> Interval) -> Interval {
    let goal = rational::pow2(-(target as i64));
    let mut j = start;
    loop {
        let iv = f(j);
        if iv.width() <= goal {
            return iv;
        }
        j += 8 + j / 4;
    }
}

/// Certified `‖qx‖`, the distance from `qx` to the nearest integer.
///
/// The returned interval lies in `[0, 1/2]` and, for irrational `x`, has
/// width at most `2^-precision`. Exact point for rational `x`.
pub fn nearest_int_dist(
    q: &BigInt,
    x: &ExactReal,
    precision: u32,
    budget: u32,
) -> Result<Interval> {
    if q < &BigInt::from(2) {
        return Err(Error::InvalidArgument("q must be at least 2".into()));
    }
    let qr = rational::int(q.clone());
    let half = rational::rat(1, 2);
    if let Some(r) = x.as_rational() {
        let y = &qr * r;
        let m = rational::floor(&(&y + &half));
        return Ok(Interval::point((y - rational::int(m)).abs()));
    }
    let mut k = precision + q.bits() as u32 + 2;
    let limit = budget.max(k);
    loop {
        let y = x.refine(k).mul_scalar(&qr);
        let next_half = rational::int(rational::ceil(&(y.lo() - &half))) + &half;
        if &next_half > y.hi() {
            let m = rational::int(rational::floor(&(y.lo() + &half)));
            let a = (y.lo() - &m).abs();
            let b = (y.hi() - &m).abs();
            let hi = (&a).max(&b).clone().min(half.clone());
            let lo = if y.contains(&m) {
                Rational::zero()
            } else {
                a.min(b)
            };
            return Interval::new(lo, hi);
        }
        if k >= limit {
            return Err(Error::AmbiguousNearestInteger { budget: limit });
        }
        k = (k * 2).min(limit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rational_refines_to_point() {
        let x = ExactReal::from_rational(rat(1, 2));
        assert_eq!(x.refine(10), Interval::point(rat(1, 2)));
    }

    #[test]
    fn balls_nest_even_for_jittery_approximators() {
        // Enclosures deliberately offset in alternating directions.
        let target = rat(1, 3);
        let t = target.clone();
        let x = ExactReal::from_fn(
            move |k| {
                let w = rational::pow2(-(k as i64) - 4);
                if k % 2 == 0 {
                    Interval::new(&t - &w, t.clone()).unwrap()
                } else {
                    Interval::new(t.clone(), &t + &w).unwrap()
                }
            },
            None,
        );
        let mut prev = x.refine(0);
        for k in 1..80 {
            let cur = x.refine(k);
            assert!(prev.contains_interval(&cur), "k={k}");
            assert!(cur.contains(&target));
            assert!(cur.width() <= rational::pow2(-(k as i64)));
            prev = cur;
        }
    }

    #[test]
    fn nearest_int_examples() {
        let b = 1024;
        let d = nearest_int_dist(
            &BigInt::from(3),
            &ExactReal::from_rational(rat(1, 2)),
            10,
            b,
        )
        .unwrap();
        assert_eq!(d, Interval::point(rat(1, 2)));
        let d = nearest_int_dist(
            &BigInt::from(2),
            &ExactReal::from_rational(rat(1, 3)),
            10,
            b,
        )
        .unwrap();
        assert_eq!(d, Interval::point(rat(1, 3)));
        let x = ExactReal::from_rational(rat(110001, 1000000));
        let d = nearest_int_dist(&BigInt::from(10), &x, 10, b).unwrap();
        assert_eq!(d, Interval::point(rat(10001, 100000)));
        assert!(nearest_int_dist(&BigInt::from(1), &x, 10, b).is_err());
    }

    #[test]
    fn nearest_int_for_irrational_shrinks_inside_half() {
        let s = elem_eval(ElemFn::Sqrt, &ExactReal::from_int(2), None).unwrap();
        let q = BigInt::from(5);
        let coarse = nearest_int_dist(&q, &s, 10, 1024).unwrap();
        let fine = nearest_int_dist(&q, &s, 40, 1024).unwrap();
        assert!(coarse.contains_interval(&fine) || fine.width() < coarse.width());
        assert!(fine.lo() >= &Rational::zero() && fine.hi() <= &rat(1, 2));
        // ‖5√2‖ = 0.0710678...
        assert!(
            fine.contains(&rational::parse_rational("0.07106781186547524").unwrap())
                || (fine.mid() - rational::parse_rational("0.0710678118654752").unwrap()).abs()
                    < rat(1, 1_000_000_000)
        );
    }

    #[test]
    fn concurrent_readers_agree() {
        let s = elem_eval(ElemFn::Exp, &ExactReal::from_int(1), None).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let s = s.clone();
                std::thread::spawn(move || (0..60).map(|k| s.refine(k)).collect::<Vec<_>>())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for r in &results[1..] {
            assert_eq!(r, &results[0]);
        }
    }

    #[test]
    fn sign_and_comparison() {
        let s = elem_eval(ElemFn::Sqrt, &ExactReal::from_int(2), None).unwrap();
        assert_eq!(s.sign(256), Some(std::cmp::Ordering::Greater));
        assert_eq!(
            s.compare_rational(&rat(141, 100), 256),
            Some(std::cmp::Ordering::Greater)
        );
        assert_eq!(
            s.compare_rational(&rat(142, 100), 256),
            Some(std::cmp::Ordering::Less)
        );
    }
}
