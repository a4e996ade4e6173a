//! Helpers over the crate's exact rational type.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use crate::ratio::{gcd, Rational};

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        int(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// `n / 2^e` in lowest terms, without a gcd.
pub fn dyadic(n: BigInt, e: u64) -> Rational {
    if n.is_zero() {
        return Rational::zero();
    }
    let tz = n.trailing_zeros().unwrap_or(0).min(e);
    Rational::new_raw(n >> tz as usize, BigInt::one() << (e - tz) as usize)
}

/// `num / den` rounded to the nearest multiple of `2^-bits`, with `den != 0`.
pub fn round_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Rational {
    let (num, den) = if den.is_negative() {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    let scaled = ((num << (bits as usize + 1)) + &den).div_floor(&(den << 1));
    dyadic(scaled, bits as u64)
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn round_down(x: &Rational, bits: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scaled = (x.numer() << bits as usize).div_floor(x.denom());
    dyadic(scaled, bits as u64)
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn round_up(x: &Rational, bits: u32) -> Rational {
    if x.denom().is_one() {
        return x.clone();
    }
    let scaled = -((-(x.numer() << bits as usize)).div_floor(x.denom()));
    dyadic(scaled, bits as u64)
}

/// Nearest multiple of `2^-bits` (ties toward +inf).
pub fn round_nearest(x: &Rational, bits: u32) -> Rational {
    let scaled = ((x.numer() << (bits as usize + 1)) + x.denom()).div_floor(&(x.denom() << 1));
    dyadic(scaled, bits as u64)
}

/// An integer `e` with `|x| <= 2^e`. Not necessarily tight; `x = 0` gives a very small value.
pub fn log2_upper(x: &Rational) -> i64 {
    if x.is_zero() {
        return i64::MIN / 4;
    }
    x.numer().bits() as i64 - x.denom().bits() as i64 + 1
}

/// An integer `e` with `2^e <= |x|` for nonzero `x`.
pub fn log2_lower(x: &Rational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64 - 1
}

/// Exact integer `k`-th root test; `None` when `n` is not a perfect `k`-th power.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn is_perfect_power(n: &BigInt, k: u32) -> bool {
    exact_root(n, k).is_some()
}

/// Exact rational `k`-th root when numerator and denominator are both perfect powers.
pub fn exact_rational_root(x: &Rational, k: u32) -> Option<Rational> {
    let n = exact_root(x.numer(), k)?;
    let d = exact_root(x.denom(), k)?;
    Some(Rational::new(n, d))
}

pub fn pow_int(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(x.clone(), e as usize)
    } else {
        num_traits::pow::pow(x.recip(), (-e) as usize)
    }
}

/// Parse `p/q`, a plain integer, or a decimal literal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let (neg, ip) = match ip.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, ip.strip_prefix('+').unwrap_or(ip)),
        };
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if ip.is_empty() && fp.is_empty() {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow::pow(BigInt::from(10), fp.len());
        let v = Rational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(int(n))
}

/// Decimal rendering truncated toward zero after `digits` fractional digits.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let ip = floor(&a);
    let frac = a - int(ip.clone());
    let scaled = floor(&(frac * int(num_traits::pow::pow(BigInt::from(10), digits))));
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        s.push('.');
        let f = scaled.to_string();
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn sign(x: &Rational) -> Sign {
    x.numer().sign()
}

/// Serde adapters writing rationals and big integers as decimal strings.
pub mod serde_str {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_opt {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
