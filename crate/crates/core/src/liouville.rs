//! Series constants, approximation levels and Liouville certificates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{self, Rational};
use crate::real::kernels::log2_bounds;
use crate::real::{nearest_int_dist, Budget, ExactReal, Recipe};

/// A rational `p/q` claimed to satisfy `0 < |x - p/q| <= q^-n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u32,
    #[serde(with = "rational::serde_bigint")]
    pub p: BigInt,
    #[serde(with = "rational::serde_bigint")]
    pub q: BigInt,
}

impl Witness {
    pub fn new(n: u32, p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Witness {
            n,
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }

    /// `q^-n`.
    pub fn radius(&self) -> Rational {
        rational::pow_int(&rational::int(self.q.clone()), -(self.n as i64))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleCertificate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<Recipe>,
    pub witnesses: Vec<Witness>,
}

impl LiouvilleCertificate {
    /// Highest certified level, 0 when empty.
    pub fn level(&self) -> u32 {
        self.witnesses.last().map_or(0, |w| w.n)
    }

    /// Levels are exactly `1..=N` in order.
    pub fn is_contiguous(&self) -> bool {
        self.witnesses
            .iter()
            .enumerate()
            .all(|(i, w)| w.n as usize == i + 1)
    }
}

/// Exponent schedule `e_1 < e_2 < ...` of a series constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Schedule {
    /// `e_k = k!`
    Factorial,
    /// `e_k = 2^(2^k)`
    DoubleExponential,
    /// The listed exponents, continued by `e_{k+1} = (k+1) e_k`.
    List { values: Vec<u64> },
}

impl Schedule {
    /// `e_k` for `k >= 1`, saturating at `u64::MAX`.
    pub fn exponent(&self, k: u32) -> u64 {
        match self {
            Schedule::Factorial => (1..=k as u64)
                .try_fold(1u64, |a, i| a.checked_mul(i))
                .unwrap_or(u64::MAX),
            Schedule::DoubleExponential => {
                if k >= 6 {
                    u64::MAX
                } else {
                    1u64 << (1u32 << k)
                }
            }
            Schedule::List { values } => {
                let k = k as usize;
                if k <= values.len() {
                    return values[k - 1];
                }
                let mut e = *values.last().unwrap_or(&1);
                for i in values.len() + 1..=k {
                    e = e.saturating_mul(i as u64);
                }
                e
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Schedule::List { values } = self {
            if values.is_empty() || values[0] == 0 {
                return Err(Error::InvalidSchedule(
                    "exponent list must start with a positive exponent".into(),
                ));
            }
            if values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSchedule(
                    "exponents must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Digit `a_k` placed at position `e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DigitRule {
    Constant { value: u32 },
    Periodic { values: Vec<u32> },
}

impl DigitRule {
    pub fn digit(&self, k: u32) -> u32 {
        match self {
            DigitRule::Constant { value } => *value,
            DigitRule::Periodic { values } => values[(k as usize - 1) % values.len()],
        }
    }

    fn max_digit(&self) -> u32 {
        match self {
            DigitRule::Constant { value } => *value,
            DigitRule::Periodic { values } => values.iter().copied().max().unwrap_or(0),
        }
    }

    fn validate(&self, base: u32) -> Result<()> {
        let values: &[u32] = match self {
            DigitRule::Constant { value } => std::slice::from_ref(value),
            DigitRule::Periodic { values } => values,
        };
        if values.iter().any(|&d| d >= base) {
            return Err(Error::InvalidSchedule(format!(
                "digits must lie in [0, {}]",
                base - 1
            )));
        }
        if values.iter().all(|&d| d == 0) {
            return Err(Error::InvalidSchedule(
                "digit rule must be nonzero infinitely often".into(),
            ));
        }
        Ok(())
    }
}

/// Exact pieces of `sum_k a_k b^-e_k`.
#[derive(Clone, Debug)]
struct Series {
    base: u32,
    schedule: Schedule,
    digits: DigitRule,
}

impl Series {
    fn log2_base_floor(&self) -> u64 {
        31 - self.base.leading_zeros() as u64
    }

    /// `sum_{k <= K} a_k b^-e_k`, with denominator `b^(e_K)`.
    fn partial(&self, terms: u32) -> Rational {
        if terms == 0 {
            return Rational::zero();
        }
        let b = BigInt::from(self.base);
        let top = self.schedule.exponent(terms);
        let mut num = BigInt::zero();
        for k in 1..=terms {
            let shift = top - self.schedule.exponent(k);
            num += BigInt::from(self.digits.digit(k))
                * num_traits::pow::pow(b.clone(), shift as usize);
        }
        Rational::new(num, num_traits::pow::pow(b, top as usize))
    }

    /// Exact bound `max_digit * b/(b-1) * b^-(e_{K+1})` on the tail after `K` terms.
    fn tail_bound(&self, terms: u32) -> Rational {
        let e = self.schedule.exponent(terms + 1);
        let b = rational::int(self.base);
        let scale = rational::int(self.digits.max_digit()) * &b / (&b - rational::int(1));
        scale / rational::int(num_traits::pow::pow(BigInt::from(self.base), e as usize))
    }

    /// Fewest terms whose tail bound is at most `2^-bits`.
    fn terms_for(&self, bits: u64) -> u32 {
        let need = bits + 2 + 32 - self.digits.max_digit().leading_zeros() as u64;
        let lb = self.log2_base_floor();
        let mut k = 0;
        while self.schedule.exponent(k + 1).saturating_mul(lb) < need {
            k += 1;
        }
        k
    }

    fn enclosure(&self, bits: u64) -> Interval {
        let terms = self.terms_for(bits);
        let s = self.partial(terms);
        let hi = &s + rational::pow2(-(bits as i64));
        Interval::hull_of(s, hi)
    }
}

/// `sum_k a_k b^-e_k` as a certified real.
pub fn series_constant(base: u32, schedule: Schedule, digits: DigitRule) -> Result<ExactReal> {
    if base < 2 {
        return Err(Error::InvalidSchedule("base must be at least 2".into()));
    }
    schedule.validate()?;
    digits.validate(base)?;
    let recipe = Recipe::Series {
        base,
        schedule: schedule.clone(),
        digits: digits.clone(),
    };
    let s = Series {
        base,
        schedule,
        digits,
    };
    Ok(ExactReal::from_fn(
        move |k| s.enclosure(k as u64 + 4),
        Some(recipe),
    ))
}

/// `sum_k 10^-k!`.
pub fn classical_constant() -> ExactReal {
    series_constant(10, Schedule::Factorial, DigitRule::Constant { value: 1 })
        .expect("valid series")
}

/// Partial sum after `terms` terms and the matching exact tail bound.
pub fn series_truncation(
    base: u32,
    schedule: &Schedule,
    digits: &DigitRule,
    terms: u32,
) -> (Rational, Rational) {
    let s = Series {
        base,
        schedule: schedule.clone(),
        digits: digits.clone(),
    };
    (s.partial(terms), s.tail_bound(terms))
}

/// Certified `u = -log ||qx|| / log q`, outward-rounded to a `2^-16` grid.
pub fn u_level(x: &ExactReal, q: &BigInt) -> Result<Interval> {
    u_level_with(x, q, &Budget::default())
}

pub fn u_level_with(x: &ExactReal, q: &BigInt, budget: &Budget) -> Result<Interval> {
    let mut prec = 64u32;
    let d = loop {
        let d = nearest_int_dist(q, x, prec, budget.precision.max(prec))?;
        if d.is_point() && d.lo().is_zero() {
            return Err(Error::ZeroDistance);
        }
        if d.lo().is_positive() {
            break d;
        }
        if x.as_rational().is_some() || prec >= budget.precision {
            return Err(Error::RefinementBudgetExceeded {
                budget: budget.precision,
            });
        }
        prec = (prec * 2).min(budget.precision);
    };
    if d.is_point() {
        if let Some(j) = exact_log(q, d.lo()) {
            return Ok(Interval::point(rational::int(j)));
        }
    }
    let f = 32;
    let (ql, qh) = log2_bounds(&rational::int(q.clone()), f);
    let (_, dh_hi) = log2_bounds(d.hi(), f);
    let (dl_lo, _) = log2_bounds(d.lo(), f);
    let ql = ql.max(rational::rat(1, 2));
    let a_lo = -dh_hi;
    let a_hi = -dl_lo;
    let lo = if a_lo.is_negative() {
        &a_lo / &ql
    } else {
        &a_lo / &qh
    };
    let hi = &a_hi / &ql;
    Ok(Interval::hull_of(
        rational::round_down(&lo, 16),
        rational::round_up(&hi, 16),
    ))
}

/// `j` with `d = q^-j`, if any.
fn exact_log(q: &BigInt, d: &Rational) -> Option<i64> {
    if !d.numer().is_one() {
        return None;
    }
    let mut den = d.denom().clone();
    let mut j = 0;
    while den > BigInt::one() {
        if !(&den % q).is_zero() {
            return None;
        }
        den /= q;
        j += 1;
    }
    Some(j)
}

/// Outcome of comparing `|x - c|` against a radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dist {
    Zero,
    Inside,
    OnBoundary,
    Outside,
}

fn distance_class(x: &ExactReal, c: &Rational, r: &Rational, cap: u32) -> Result<Dist> {
    if let Some(v) = x.as_rational() {
        let d = (v - c).abs();
        return Ok(if d.is_zero() {
            Dist::Zero
        } else {
            match d.cmp(r) {
                Ordering::Less => Dist::Inside,
                Ordering::Equal => Dist::OnBoundary,
                Ordering::Greater => Dist::Outside,
            }
        });
    }
    let mut k = ((-rational::log2_lower(r)).max(0) as u32 + 16).min(cap);
    loop {
        let d = x.refine(k).add_scalar(&-c);
        if d.excludes_zero() {
            if d.mag() < *r {
                return Ok(Dist::Inside);
            }
            if d.mig() > *r {
                return Ok(Dist::Outside);
            }
        }
        if k >= cap {
            return Err(Error::RefinementBudgetExceeded { budget: cap });
        }
        k = (k + k / 2 + 8).min(cap);
    }
}

/// Precision cap for deciding one witness: enough for distances down to
/// `q^-(2n+4)`, and for series constants enough to see the first nonzero
/// term beyond the radius `q^-n`.
fn witness_cap(x: &ExactReal, w: &Witness, budget: &Budget) -> u32 {
    let qbits = w.q.bits();
    let mut cap = (2 * (w.n as u64 + 2) * qbits + 64).max(budget.precision as u64);
    if let Some(Recipe::Series { base, schedule, .. }) = x.recipe() {
        let lb = 32 - base.leading_zeros() as u64;
        let mut k = 1;
        while schedule
            .exponent(k)
            .saturating_mul(lb.saturating_sub(1).max(1))
            <= (w.n as u64).saturating_mul(qbits)
            && k < 64
        {
            k += 1;
        }
        cap = cap.max(schedule.exponent(k).saturating_mul(lb) + 64);
    }
    cap.min(u32::MAX as u64 / 2) as u32
}

/// `0 < |x - p/q| <= q^-n`, decided by certified refinement.
pub fn check_witness(x: &ExactReal, w: &Witness, budget: &Budget) -> Result<bool> {
    if w.q < BigInt::from(2) || w.n == 0 {
        return Ok(false);
    }
    let cap = witness_cap(x, w, budget);
    Ok(matches!(
        distance_class(x, &w.value(), &w.radius(), cap)?,
        Dist::Inside | Dist::OnBoundary
    ))
}

/// `x` lies in the punctured open ball `(p/q - q^-n, p/q + q^-n) \ {p/q}`.
pub fn un_membership(x: &ExactReal, n: u32, witness: &Witness) -> Result<bool> {
    if witness.q < BigInt::from(2) {
        return Err(Error::InvalidArgument(
            "witness denominator must be at least 2".into(),
        ));
    }
    let w = Witness {
        n,
        ..witness.clone()
    };
    let cap = witness_cap(x, &w, &Budget::default());
    Ok(distance_class(x, &w.value(), &w.radius(), cap)? == Dist::Inside)
}

pub fn verify_certificate(x: &ExactReal, cert: &LiouvilleCertificate) -> Result<bool> {
    verify_certificate_with(x, cert, &Budget::default())
}

pub fn verify_certificate_with(
    x: &ExactReal,
    cert: &LiouvilleCertificate,
    budget: &Budget,
) -> Result<bool> {
    for w in &cert.witnesses {
        if !check_witness(x, w, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn certify_level(x: &ExactReal, n: u32) -> Result<LiouvilleCertificate> {
    certify_level_with(x, n, &Budget::default())
}

/// Witnesses for levels `1..=n`. Series constants use their truncations,
/// constructed values reuse the witnesses recorded during construction, and
/// anything else falls back to a search over continued-fraction convergents.
pub fn certify_level_with(x: &ExactReal, n: u32, budget: &Budget) -> Result<LiouvilleCertificate> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let subject = x.recipe().cloned();
    let witnesses = match (&subject, x.known_witnesses()) {
        (
            Some(Recipe::Series {
                base,
                schedule,
                digits,
            }),
            _,
        ) => series_witnesses(x, *base, schedule, digits, n, budget)?,
        (_, Some(known)) if covers(known, n) => {
            let mut out = Vec::new();
            for level in 1..=n {
                let w = known
                    .iter()
                    .find(|w| w.n == level)
                    .expect("covered")
                    .clone();
                if !check_witness(x, &w, budget)? {
                    return Err(Error::InvalidWitness(format!(
                        "recorded witness for level {level} does not verify"
                    )));
                }
                out.push(w);
            }
            out
        }
        _ => convergent_witnesses(x, n, budget)?,
    };
    Ok(LiouvilleCertificate { subject, witnesses })
}

fn covers(ws: &[Witness], n: u32) -> bool {
    (1..=n).all(|l| ws.iter().any(|w| w.n == l))
}

fn series_witnesses(
    x: &ExactReal,
    base: u32,
    schedule: &Schedule,
    digits: &DigitRule,
    n: u32,
    budget: &Budget,
) -> Result<Vec<Witness>> {
    let s = Series {
        base,
        schedule: schedule.clone(),
        digits: digits.clone(),
    };
    let b = BigInt::from(base);
    let mut out = Vec::new();
    let mut terms = 1u32;
    for level in 1..=n {
        let limit = level + 16;
        loop {
            if terms > limit || schedule.exponent(terms) == u64::MAX {
                return Err(Error::WitnessSearchExhausted { level });
            }
            let q = num_traits::pow::pow(b.clone(), schedule.exponent(terms) as usize);
            let p = (s.partial(terms) * rational::int(q.clone())).to_integer();
            let w = Witness { n: level, p, q };
            if check_witness(x, &w, budget)? {
                out.push(w);
                break;
            }
            terms += 1;
        }
    }
    Ok(out)
}

fn convergent_witnesses(x: &ExactReal, n: u32, budget: &Budget) -> Result<Vec<Witness>> {
    let cf = cfrac::certified_prefix(x, budget.cf_depth, budget.cfrac);
    let convs = cfrac::convergents(&cf);
    let mut out = Vec::new();
    let mut start = 0;
    for level in 1..=n {
        let mut found = None;
        for (i, (p, q)) in convs.iter().enumerate().skip(start) {
            if q < &BigInt::from(2) {
                continue;
            }
            let w = Witness {
                n: level,
                p: p.clone(),
                q: q.clone(),
            };
            match check_witness(x, &w, budget) {
                Ok(true) => {
                    found = Some((i, w));
                    break;
                }
                Ok(false) => {}
                Err(Error::RefinementBudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        match found {
            Some((i, w)) => {
                start = i;
                out.push(w);
            }
            None => return Err(Error::WitnessSearchExhausted { level }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};

    fn liouville10() -> ExactReal {
        classical_constant()
    }

    #[test]
    fn classical_constant_digits() {
        let x = liouville10();
        let iv = x.refine(4);
        assert!(iv.width() <= rat(1, 16));
        assert!(iv.contains(&parse_rational("0.110001").unwrap()));
        // Oracle: partial sum over the first four terms plus twice the next term.
        let s4 = parse_rational("0.110001000000000000000001").unwrap();
        let hi = &s4 + rational::int(2) * rational::pow_int(&rat(1, 10), 120);
        let fine = x.refine(300);
        assert!(fine.lo() <= &hi && fine.hi() >= &s4);
    }

    #[test]
    fn binary_analogue() {
        // 1/2 + 1/4 + 1/64 + 2^-24 + ...: already past 3/4 after two terms
        let x = series_constant(2, Schedule::Factorial, DigitRule::Constant { value: 1 }).unwrap();
        let s3 = rat(49, 64);
        assert_eq!(x.compare_rational(&s3, 256), Some(Ordering::Greater));
        assert_eq!(
            x.compare_rational(&(s3 + rat(1, 1 << 23)), 256),
            Some(Ordering::Less)
        );
        assert_eq!(x.compare_rational(&rat(3, 4), 256), Some(Ordering::Greater));
    }

    #[test]
    fn rejects_bad_series() {
        let zero = series_constant(10, Schedule::Factorial, DigitRule::Constant { value: 0 });
        assert_eq!(zero.unwrap_err().token(), "InvalidSchedule");
        let bad = series_constant(
            10,
            Schedule::List {
                values: vec![1, 3, 3],
            },
            DigitRule::Constant { value: 1 },
        );
        assert_eq!(bad.unwrap_err().token(), "InvalidSchedule");
        let big = series_constant(10, Schedule::Factorial, DigitRule::Constant { value: 10 });
        assert_eq!(big.unwrap_err().token(), "InvalidSchedule");
    }

    #[test]
    fn tail_bound_is_geometric() {
        for k in 1..6 {
            let (_, t) = series_truncation(
                10,
                &Schedule::Factorial,
                &DigitRule::Constant { value: 1 },
                k,
            );
            let e = Schedule::Factorial.exponent(k + 1) as i64;
            assert!(t <= rational::int(2) * rational::pow_int(&rat(1, 10), e));
        }
    }

    #[test]
    fn schedules() {
        assert_eq!(Schedule::Factorial.exponent(5), 120);
        assert_eq!(Schedule::DoubleExponential.exponent(3), 256);
        let l = Schedule::List {
            values: vec![1, 3, 10],
        };
        assert_eq!(l.exponent(3), 10);
        assert_eq!(l.exponent(4), 40);
        assert_eq!(l.exponent(5), 200);
    }

    #[test]
    fn u_level_examples() {
        let x = liouville10();
        let u = u_level(&x, &BigInt::from(1_000_000)).unwrap();
        assert!(u.contains(&rational::int(3)));
        let r = ExactReal::from_rational(rat(1, 3) + rat(1, 7));
        // ||7 * (1/3 + 1/7)|| = 1/3, not a power of 1/7
        let v = u_level(&r, &BigInt::from(7)).unwrap();
        assert!(v.width() < rat(1, 1000));
        let y = ExactReal::from_rational(rat(1, 10) + rat(1, 100));
        // ||10 y|| = 1/10
        assert_eq!(
            u_level(&y, &BigInt::from(10)).unwrap(),
            Interval::point(rational::int(1))
        );
        let s = ExactReal::from_int(2).sqrt().unwrap();
        let u = u_level(&s, &BigInt::from(5)).unwrap();
        assert!(u.contains(&parse_rational("1.642884").unwrap()));
        let r = ExactReal::from_rational(rat(1, 2));
        assert_eq!(
            u_level(&r, &BigInt::from(4)).unwrap_err().token(),
            "ZeroDistance"
        );
    }

    #[test]
    fn classical_certificate_uses_factorial_denominators() {
        let x = liouville10();
        let cert = certify_level(&x, 4).unwrap();
        for (i, w) in cert.witnesses.iter().enumerate() {
            let k = i as u32 + 1;
            assert_eq!(w.n, k);
            assert_eq!(
                w.q,
                num_traits::pow::pow(BigInt::from(10), Schedule::Factorial.exponent(k) as usize)
            );
        }
        assert!(verify_certificate(&x, &cert).unwrap());
        let mut bad = cert.clone();
        bad.witnesses[2].q += 1;
        assert!(!verify_certificate(&x, &bad).unwrap());
        let empty = LiouvilleCertificate {
            subject: None,
            witnesses: vec![],
        };
        assert!(verify_certificate(&x, &empty).unwrap());
    }

    #[test]
    fn sqrt2_levels() {
        let s = ExactReal::from_int(2).sqrt().unwrap();
        let one = certify_level(&s, 1).unwrap();
        assert!(verify_certificate(&s, &one).unwrap());
        // 3/2 is within 1/8 of sqrt 2, so level 3 has a witness; level 4 has none
        // because every q >= 2 has q^-4 < 1/(2 q^2).
        let three = certify_level(&s, 3).unwrap();
        assert_eq!(three.witnesses[2], Witness::new(3, 3, 2));
        assert_eq!(
            certify_level(&s, 4).unwrap_err().token(),
            "WitnessSearchExhausted"
        );
    }

    #[test]
    fn membership_examples() {
        let x = liouville10();
        let p = (series_truncation(
            10,
            &Schedule::Factorial,
            &DigitRule::Constant { value: 1 },
            3,
        )
        .0 * rational::int(1_000_000))
        .to_integer();
        assert!(un_membership(&x, 3, &Witness::new(3, p, 1_000_000)).unwrap());
        let half = ExactReal::from_rational(rat(1, 2));
        assert!(!un_membership(&half, 2, &Witness::new(2, 1, 2)).unwrap());
        let third = ExactReal::from_rational(rat(1, 3));
        assert!(!un_membership(&third, 5, &Witness::new(5, 1, 2)).unwrap());
        // boundary: |1/4 - 1/2| = 1/4 = 2^-2 is closed-in, open-out
        let quarter = ExactReal::from_rational(rat(1, 4));
        assert!(check_witness(&quarter, &Witness::new(2, 1, 2), &Budget::default()).unwrap());
        assert!(!un_membership(&quarter, 2, &Witness::new(2, 1, 2)).unwrap());
    }

    #[test]
    fn witness_serializes_as_strings() {
        let w = Witness::new(2, 11, 100);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"n":2,"p":"11","q":"100"}"#);
    }
}
