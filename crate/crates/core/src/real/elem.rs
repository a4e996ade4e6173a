use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::kernels::{exp_bounds, root_bounds};
use super::{tighten, Budget, ExactReal, Recipe};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElemFn {
    Exp,
    Sqrt,
    PowRational,
}

/// Certified `exp(x)`, `sqrt(x)` or `x^r` for rational `r`.
pub fn elem_eval(func: ElemFn, x: &ExactReal, param: Option<&Rational>) -> Result<ExactReal> {
    let recipe = x.recipe().map(|r| Recipe::Elementary {
        func,
        arg: Box::new(r.clone()),
        param: param.cloned(),
    });
    let out = match func {
        ElemFn::Exp => exp(x),
        ElemFn::Sqrt => pow_rational(x, &rational::rat(1, 2)),
        ElemFn::PowRational => {
            let r = param
                .ok_or_else(|| Error::InvalidArgument("pow_rational needs an exponent".into()))?;
            pow_rational(x, r)
        }
    }?;
    Ok(match recipe {
        Some(r) if out.as_rational().is_none() => out.with_recipe(r),
        _ => out,
    })
}

fn exp(x: &ExactReal) -> Result<ExactReal> {
    if let Some(r) = x.as_rational() {
        if r.is_zero() {
            return Ok(ExactReal::from_int(1));
        }
        let r = r.clone();
        return Ok(ExactReal::from_fn(
            move |k| tighten(k + 4, k + 6, |p| exp_bounds(&r, p)),
            None,
        ));
    }
    let m = x.refine(0).mag() + rational::int(1);
    let extra = (rational::ceil(&(m * rational::rat(3, 2)))
        .to_u32()
        .unwrap_or(u32::MAX / 4))
        + 2;
    let x = x.clone();
    Ok(ExactReal::from_fn(
        move |k| {
            tighten(k + 4, k + 6 + extra, |j| {
                let iv = x.refine(j);
                let lo = exp_bounds(iv.lo(), j + extra).lo().clone();
                let hi = exp_bounds(iv.hi(), j + extra).hi().clone();
                Interval::hull_of(lo, hi)
            })
        },
        None,
    ))
}

/// `t^(p/q)` over an interval of strictly positive values.
fn positive_power(iv: &Interval, p: &BigInt, q: u32, prec: u32) -> Interval {
    let e = p.abs().to_u32().expect("exponent numerator fits in u32");
    let lo = root_bounds(iv.lo(), q, prec).lo().clone();
    let hi = root_bounds(iv.hi(), q, prec).hi().clone();
    let img = Interval::hull_of(lo, hi).powi(e);
    if p.is_negative() {
        img.recip().unwrap_or(img)
    } else {
        img
    }
}

fn pow_rational(x: &ExactReal, r: &Rational) -> Result<ExactReal> {
    let budget = Budget::default().separation;
    let p = r.numer().clone();
    let q = r
        .denom()
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument("exponent denominator too large".into()))?;
    if p.abs() > BigInt::from(u32::MAX) {
        return Err(Error::InvalidArgument(
            "exponent numerator too large".into(),
        ));
    }
    if p.is_zero() {
        return Ok(ExactReal::from_int(1));
    }
    let even_root = q % 2 == 0;
    let odd_power = p.is_odd();

    if let Some(v) = x.as_rational() {
        if v.is_negative() && even_root {
            return Err(Error::DomainError(format!("even root of negative {v}")));
        }
        if v.is_zero() {
            return if p.is_negative() {
                Err(Error::NotSeparatedFromZero { budget })
            } else {
                Ok(ExactReal::from_int(0))
            };
        }
        if let Some(root) = rational::exact_rational_root(v, q) {
            let e = p.to_i64().expect("checked above");
            return Ok(ExactReal::from_rational(rational::pow_int(&root, e)));
        }
    }

    let sign = match x.sign(budget) {
        Some(s) => s,
        None if p.is_negative() => return Err(Error::NotSeparatedFromZero { budget }),
        None => return Err(Error::RefinementBudgetExceeded { budget }),
    };
    if sign == Ordering::Less && even_root {
        return Err(Error::DomainError("even root of a negative operand".into()));
    }
    let (j0, _) = x.separate_from_zero(budget).expect("sign decided");
    let negate = sign == Ordering::Less && odd_power;
    let x = x.clone();
    let m = x.refine(j0).mig();
    let extra =
        ((-rational::log2_lower(&m)).max(0) as u32) * (1 + p.abs().to_u32().unwrap_or(1)) + 4;
    Ok(ExactReal::from_fn(
        move |k| {
            tighten(k + 4, (k + 6 + extra).max(j0), |j| {
                let mut iv = x.refine(j.max(j0));
                if sign == Ordering::Less {
                    iv = iv.neg();
                }
                let img = positive_power(&iv, &p, q, j + extra);
                if negate {
                    img.neg()
                } else {
                    img
                }
            })
        },
        None,
    ))
}

impl ExactReal {
    pub fn exp(&self) -> ExactReal {
        elem_eval(ElemFn::Exp, self, None).expect("exp is total")
    }

    pub fn sqrt(&self) -> Result<ExactReal> {
        elem_eval(ElemFn::Sqrt, self, None)
    }

    pub fn pow_rational(&self, r: &Rational) -> Result<ExactReal> {
        elem_eval(ElemFn::PowRational, self, Some(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::from_rational(rat(n, d))
    }

    #[test]
    fn identity_cases_are_exact() {
        assert_eq!(q(0, 1).exp().as_rational(), Some(&rat(1, 1)));
        assert_eq!(q(4, 1).sqrt().unwrap().as_rational(), Some(&rat(2, 1)));
        assert_eq!(
            q(8, 1).pow_rational(&rat(1, 3)).unwrap().as_rational(),
            Some(&rat(2, 1))
        );
        assert_eq!(
            q(-8, 27).pow_rational(&rat(2, 3)).unwrap().as_rational(),
            Some(&rat(4, 9))
        );
        assert_eq!(
            q(4, 1).pow_rational(&rat(-3, 2)).unwrap().as_rational(),
            Some(&rat(1, 8))
        );
    }

    #[test]
    fn exp_one_at_twenty_bits() {
        let e = q(1, 1).exp().refine(20);
        assert!(e.width() <= rational::pow2(-20));
        let approx = rational::parse_rational("2.718281828459045").unwrap();
        assert!((e.mid() - approx).abs() < rational::pow2(-19));
    }

    #[test]
    fn sqrt_two_at_twenty_bits() {
        let s = q(2, 1).sqrt().unwrap().refine(20);
        assert!(s.width() <= rational::pow2(-20));
        // Certified bisection oracle on rational squares.
        let (mut lo, mut hi) = (rat(1, 1), rat(2, 1));
        for _ in 0..40 {
            let mid = (&lo + &hi) / rational::int(2);
            if &mid * &mid < rat(2, 1) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(s.lo() <= &lo && &hi <= s.hi());
    }

    #[test]
    fn domain_errors() {
        assert_eq!(q(-1, 1).sqrt().unwrap_err().token(), "DomainError");
        let neg = q(2, 1).sqrt().unwrap().neg();
        assert_eq!(neg.sqrt().unwrap_err().token(), "DomainError");
        assert_eq!(
            q(0, 1).pow_rational(&rat(-1, 2)).unwrap_err().token(),
            "NotSeparatedFromZero"
        );
    }

    #[test]
    fn odd_roots_of_negative_values() {
        let x = q(2, 1).sqrt().unwrap().neg();
        let c = x.pow_rational(&rat(1, 3)).unwrap().refine(40);
        // (-sqrt 2)^(1/3) = -2^(1/6) ≈ -1.122462048
        let approx = rational::parse_rational("-1.122462048309373").unwrap();
        assert!((c.mid() - approx).abs() < rational::pow2(-38));
    }

    #[test]
    fn exp_of_irrational_argument() {
        let s = q(2, 1).sqrt().unwrap();
        let e = s.exp().refine(50);
        // e^sqrt(2) = 4.1132503787829275
        let approx = rational::parse_rational("4.1132503787829275").unwrap();
        assert!((e.mid() - approx).abs() < rational::pow2(-45));
        assert!(e.width() <= rational::pow2(-50));
    }
}
