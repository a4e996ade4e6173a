use serde::{Deserialize, Serialize};

use super::{tighten, Budget, ExactReal, Recipe};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn derived(op: ArithOp, x: &ExactReal, y: &ExactReal) -> Option<Recipe> {
    Some(Recipe::DerivedArith {
        op,
        lhs: Box::new(x.recipe()?.clone()),
        rhs: Box::new(y.recipe()?.clone()),
    })
}

/// `x op y`. Division first searches for a precision at which `y` excludes
/// zero, up to `budget`.
pub fn field_op(op: ArithOp, x: &ExactReal, y: &ExactReal, budget: u32) -> Result<ExactReal> {
    if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
        let (an, ad, bn, bd) = (a.numer(), a.denom(), b.numer(), b.denom());
        let v = match op {
            ArithOp::Add => Rational::new(an * bd + bn * ad, ad * bd),
            ArithOp::Sub => Rational::new(an * bd - bn * ad, ad * bd),
            ArithOp::Mul => Rational::new(an * bn, ad * bd),
            ArithOp::Div => {
                if num_traits::Zero::is_zero(b) {
                    return Err(Error::DivisorNotSeparatedFromZero { budget });
                }
                Rational::new(an * bd, ad * bn)
            }
        };
        return Ok(ExactReal::from_rational(v));
    }
    let recipe = derived(op, x, y);
    let (x, y) = (x.clone(), y.clone());
    let out = match op {
        ArithOp::Add => ExactReal::from_fn(move |k| x.refine(k + 5).add(&y.refine(k + 5)), recipe),
        ArithOp::Sub => ExactReal::from_fn(move |k| x.refine(k + 5).sub(&y.refine(k + 5)), recipe),
        ArithOp::Mul => {
            let m = x.refine(0).mag() + y.refine(0).mag() + rational::int(1);
            let extra = rational::log2_upper(&m).max(0) as u32;
            ExactReal::from_fn(
                move |k| tighten(k + 4, k + 5 + extra, |j| x.refine(j).mul(&y.refine(j))),
                recipe,
            )
        }
        ArithOp::Div => {
            let (j0, iv) = y
                .separate_from_zero(budget)
                .ok_or(Error::DivisorNotSeparatedFromZero { budget })?;
            let delta = iv.mig();
            let mx = x.refine(0).mag() + rational::int(1);
            let extra = (2 * (-rational::log2_lower(&delta)).max(0)
                + rational::log2_upper(&mx).max(0)) as u32
                + 2;
            ExactReal::from_fn(
                move |k| {
                    tighten(k + 4, (k + 5 + extra).max(j0), |j| {
                        let yj = y.refine(j.max(j0));
                        x.refine(j).div(&yj).expect("divisor separated from zero")
                    })
                },
                recipe,
            )
        }
    };
    Ok(out)
}

impl ExactReal {
    pub fn add(&self, other: &ExactReal) -> ExactReal {
        field_op(ArithOp::Add, self, other, 0).expect("addition is total")
    }

    pub fn sub(&self, other: &ExactReal) -> ExactReal {
        field_op(ArithOp::Sub, self, other, 0).expect("subtraction is total")
    }

    pub fn mul(&self, other: &ExactReal) -> ExactReal {
        field_op(ArithOp::Mul, self, other, 0).expect("multiplication is total")
    }

    pub fn div(&self, other: &ExactReal) -> Result<ExactReal> {
        field_op(ArithOp::Div, self, other, Budget::default().separation)
    }

    pub fn neg(&self) -> ExactReal {
        ExactReal::from_int(0).sub(self)
    }

    pub fn add_rational(&self, c: &Rational) -> ExactReal {
        self.add(&ExactReal::from_rational(c.clone()))
    }

    pub fn mul_rational(&self, c: &Rational) -> ExactReal {
        self.mul(&ExactReal::from_rational(c.clone()))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, e: u32) -> ExactReal {
        if let Some(x) = self.as_rational() {
            return ExactReal::from_rational(rational::pow_int(x, e as i64));
        }
        let mut acc = ExactReal::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Interval-arithmetic image used by the containment property tests.
pub fn interval_image(op: ArithOp, a: &Interval, b: &Interval) -> Option<Interval> {
    match op {
        ArithOp::Add => Some(a.add(b)),
        ArithOp::Sub => Some(a.sub(b)),
        ArithOp::Mul => Some(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::real::{elem_eval, ElemFn};

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::from_rational(rat(n, d))
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let s = field_op(ArithOp::Add, &q(1, 3), &q(1, 6), 256).unwrap();
        assert_eq!(s.as_rational(), Some(&rat(1, 2)));
        for k in [0, 5, 50] {
            assert_eq!(s.refine(k), Interval::point(rat(1, 2)));
        }
        let d = field_op(ArithOp::Div, &q(1, 3), &q(-2, 5), 256).unwrap();
        assert_eq!(d.as_rational(), Some(&rat(-5, 6)));
    }

    #[test]
    fn sqrt2_squared_encloses_two() {
        let s = elem_eval(ElemFn::Sqrt, &ExactReal::from_int(2), None).unwrap();
        let p = s.mul(&s);
        for k in [0, 10, 60, 200] {
            let iv = p.refine(k);
            assert!(iv.contains(&rat(2, 1)));
            assert!(iv.width() <= rational::pow2(-(k as i64)));
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        let err = field_op(ArithOp::Div, &q(1, 1), &q(0, 1), 256).unwrap_err();
        assert_eq!(err.token(), "DivisorNotSeparatedFromZero");
        let s = elem_eval(ElemFn::Sqrt, &ExactReal::from_int(2), None).unwrap();
        let zero = s.sub(&s);
        let err = field_op(ArithOp::Div, &q(1, 1), &zero, 64).unwrap_err();
        assert_eq!(err.token(), "DivisorNotSeparatedFromZero");
    }

    #[test]
    fn results_lie_in_operand_images() {
        let x = elem_eval(ElemFn::Sqrt, &ExactReal::from_int(3), None).unwrap();
        let y = elem_eval(ElemFn::Exp, &q(-1, 2), None).unwrap();
        for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
            let z = field_op(op, &x, &y, 256).unwrap();
            for k in [4, 30, 90] {
                // The ball at precision k is within one ball radius of the
                // exact image of the operands at a finer precision.
                let img = interval_image(op, &x.refine(k + 12), &y.refine(k + 12)).unwrap();
                let zk = z.refine(k);
                assert!(zk.intersect(&img).is_some());
                let slack = rational::pow2(-(k as i64));
                let widened = Interval::new(img.lo() - &slack, img.hi() + &slack).unwrap();
                assert!(widened.contains_interval(&zk));
            }
        }
    }
}
