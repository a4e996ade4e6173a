//! Directed-rounding fixed-point kernels evaluated at exact rational points.
//!
//! Every function returns an enclosure. Widths are only approximately
//! controlled by `prec`; callers tighten by retrying at higher precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::rational::{self, Rational};

fn scale_floor(x: &Rational, bits: u64) -> BigInt {
    (x.numer() << bits as usize).div_floor(x.denom())
}

fn scale_ceil(x: &Rational, bits: u64) -> BigInt {
    -((-(x.numer() << bits as usize)).div_floor(x.denom()))
}

fn fixed(n: BigInt, bits: u64) -> Rational {
    rational::dyadic(n, bits)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Enclosure of `e^x`, absolute width roughly `2^-prec`.
pub fn exp_bounds(x: &Rational, prec: u32) -> Interval {
    if x.is_zero() {
        return Interval::point(rational::int(1));
    }
    if x.is_negative() {
        let pos = exp_bounds(&-x, prec + 2);
        let lo = pos.hi().recip();
        let hi = pos.lo().recip();
        let bits = prec + 4;
        return Interval::hull_of(
            rational::round_down(&lo, bits),
            rational::round_up(&hi, bits),
        );
    }
    // Halve until the reduced argument is at most 2^-r, r ~ sqrt(prec)/2,
    // which balances series terms against squarings.
    let r = (prec as f64).sqrt() as u64 / 2;
    let s = (rational::log2_upper(x) + 1).max(0) as u64 + r;
    let mag = rational::ceil(x).max(BigInt::zero());
    let growth = (mag * BigInt::from(3) / BigInt::from(2)).bits();
    let w = prec as u64 + s + 2 * growth + 24;
    let y = x / rational::pow2(s as i64);
    let one = BigInt::one() << w as usize;
    let y_lo = scale_floor(&y, w);
    let y_hi = scale_ceil(&y, w);

    let mut term_lo = one.clone();
    let mut sum_lo = one.clone();
    let mut i = 1u64;
    while !term_lo.is_zero() {
        term_lo = (&term_lo * &y_lo).div_floor(&(BigInt::from(i) << w as usize));
        sum_lo += &term_lo;
        i += 1;
    }
    let mut term_hi = one.clone();
    let mut sum_hi = one.clone();
    i = 1;
    loop {
        term_hi = ceil_div(&(&term_hi * &y_hi), &(BigInt::from(i) << w as usize));
        sum_hi += &term_hi;
        i += 1;
        if term_hi <= BigInt::one() {
            // Remaining tail is bounded by the last term (ratio <= 1/2).
            sum_hi += &term_hi + BigInt::one();
            break;
        }
    }
    for _ in 0..s {
        sum_lo = (&sum_lo * &sum_lo) >> w as usize;
        sum_hi = ceil_div(&(&sum_hi * &sum_hi), &one);
    }
    Interval::hull_of(fixed(sum_lo, w), fixed(sum_hi, w))
}

/// Enclosure of `x^(1/k)` for `x >= 0`.
pub fn root_bounds(x: &Rational, k: u32, prec: u32) -> Interval {
    debug_assert!(!x.is_negative());
    if x.is_zero() {
        return Interval::point(Rational::zero());
    }
    if let Some(r) = rational::exact_rational_root(x, k) {
        return Interval::point(r);
    }
    let grow = (rational::log2_upper(x).max(0) as u64) / k as u64 + 1;
    let w = prec as u64 + grow + 8;
    let lo_arg = scale_floor(x, w * k as u64);
    let hi_arg = scale_ceil(x, w * k as u64);
    let lo = lo_arg.nth_root(k);
    let hi = hi_arg.nth_root(k) + BigInt::one();
    Interval::hull_of(fixed(lo, w), fixed(hi, w))
}

/// Rigorous bounds `(lo, hi)` on `log2(y)` for `y > 0`, computed by repeated
/// squaring of the mantissa (binary digit extraction). Width is `<= 3·2^-frac_bits`.
pub fn log2_bounds(y: &Rational, frac_bits: u32) -> (Rational, Rational) {
    debug_assert!(y.is_positive());
    let mut e = rational::log2_lower(y);
    while rational::pow2(e + 1) <= *y {
        e += 1;
    }
    while rational::pow2(e) > *y {
        e -= 1;
    }
    let m = y / rational::pow2(e);
    if m == rational::int(1) {
        let v = rational::int(e);
        return (v.clone(), v);
    }
    let f = frac_bits as u64;
    let w = f + 40;
    let one = BigInt::one() << w as usize;
    let two = &one << 1usize;

    let mut l = scale_floor(&m, w);
    let mut bits_lo = BigInt::zero();
    for _ in 0..f {
        let s = (&l * &l) >> w as usize;
        bits_lo <<= 1usize;
        if s >= two {
            bits_lo += 1;
            l = s >> 1usize;
        } else {
            l = s;
        }
    }
    let mut h = scale_ceil(&m, w);
    let mut bits_hi = BigInt::zero();
    for _ in 0..f {
        let s = ceil_div(&(&h * &h), &one);
        bits_hi <<= 1usize;
        if s >= two {
            bits_hi += 1;
            h = ceil_div(&s, &BigInt::from(2));
        } else {
            h = s;
        }
    }
    let ulp = rational::pow2(-(f as i64));
    let lo = rational::int(e) + fixed(bits_lo, f) - &ulp;
    let hi = rational::int(e) + fixed(bits_hi, f) + &ulp * rational::int(2);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Independent oracle: Taylor series summed in exact rationals with an
    /// explicit geometric tail bound.
    fn exp_oracle(x: &Rational, terms: usize) -> Interval {
        let mut sum = Rational::zero();
        let mut term = rational::int(1);
        for i in 0..terms {
            sum += &term;
            term = term * x / rational::int(i as i64 + 1);
        }
        let tail = term.abs() * rational::int(2);
        Interval::new(&sum - &tail, &sum + &tail).unwrap()
    }

    #[test]
    fn exp_matches_exact_series() {
        for (n, d) in [(1, 1), (-1, 1), (3, 7), (-9, 4), (5, 1), (1, 1000)] {
            let x = rat(n, d);
            let got = exp_bounds(&x, 80);
            let oracle = exp_oracle(&x, 120);
            assert!(got.intersect(&oracle).is_some(), "exp({x})");
            assert!(got.width() < rational::pow2(-70));
        }
    }

    #[test]
    fn exp_of_one_digits() {
        let e = exp_bounds(&rat(1, 1), 64);
        let approx = rational::parse_rational("2.718281828459045235360287").unwrap();
        assert!(e.contains(&approx) || (e.mid() - approx).abs() < rational::pow2(-60));
    }

    #[test]
    fn roots_enclose() {
        let r = root_bounds(&rat(2, 1), 2, 64);
        assert!(r.lo() * r.lo() <= rat(2, 1));
        assert!(r.hi() * r.hi() >= rat(2, 1));
        assert_eq!(root_bounds(&rat(9, 4), 2, 10), Interval::point(rat(3, 2)));
        let c = root_bounds(&rat(10, 1), 3, 50);
        assert!(rational::pow_int(c.lo(), 3) <= rat(10, 1));
        assert!(rational::pow_int(c.hi(), 3) >= rat(10, 1));
    }

    #[test]
    fn log2_brackets() {
        for (n, d) in [(3, 1), (1, 10), (1000001, 7), (5, 4)] {
            let y = rat(n, d);
            let (lo, hi) = log2_bounds(&y, 24);
            let f = rational::to_f64(&y).log2();
            assert!(rational::to_f64(&lo) <= f + 1e-12 && f - 1e-12 <= rational::to_f64(&hi));
            assert!(&hi - &lo <= rational::pow2(-22));
        }
        assert_eq!(
            log2_bounds(&rat(1, 8), 16),
            (rational::int(-3), rational::int(-3))
        );
    }
}
