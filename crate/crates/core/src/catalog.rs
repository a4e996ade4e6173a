//! Strictly monotone maps with certified evaluation, used by the steering
//! engine.
//!
//! Map specs (CLI): `id`, `add:T`, `sub:T`, `scale:T`, `recip:T`,
//! `sqrtdiff:T`, `expscale:T`, `logscale:T`, `pow:P/Q`, joined with `.` for
//! composition. `a.b` applies `a` first, then `b`. `T` is a real expression
//! (see [`crate::expr`]).

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr;
use crate::interval::Interval;
use crate::poly::BivarPolyQ;
use crate::rational::{self, Rational};
use crate::real::kernels::{exp_bounds, log2_bounds};
use crate::real::{tighten, ExactReal, Recipe};

#[derive(Clone, Debug)]
pub enum CatalogMap {
    Identity,
    /// `x + t`
    AddConst(ExactReal),
    /// `t - x`
    SubFrom(ExactReal),
    /// `t x`
    Scale(ExactReal),
    /// `t / x`
    RecipScale(ExactReal),
    /// `sqrt(t - x^2)`
    SqrtDiff(ExactReal),
    /// `e^(t x)`
    ExpScale(ExactReal),
    /// `ln(x) / t`, the inverse of `ExpScale(t)`
    LogScale(ExactReal),
    /// `x^r`
    Pow(Rational),
    /// Applied left to right.
    Compose(Vec<CatalogMap>),
    /// The `y` in `y_range` with `P(x, y) = 0`; `x_range` is the intended domain.
    Implicit {
        poly: BivarPolyQ,
        x_range: Interval,
        y_range: Interval,
    },
}

/// Serializable description of a [`CatalogMap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum MapDesc {
    Identity,
    AddConst {
        t: Recipe,
    },
    SubFrom {
        t: Recipe,
    },
    Scale {
        t: Recipe,
    },
    RecipScale {
        t: Recipe,
    },
    SqrtDiff {
        t: Recipe,
    },
    ExpScale {
        t: Recipe,
    },
    LogScale {
        t: Recipe,
    },
    Pow {
        #[serde(with = "rational::serde_str")]
        r: Rational,
    },
    Compose {
        maps: Vec<MapDesc>,
    },
    Implicit {
        poly: String,
        x_range: Interval,
        y_range: Interval,
    },
}

impl MapDesc {
    pub fn build(&self) -> Result<CatalogMap> {
        Ok(match self {
            MapDesc::Identity => CatalogMap::Identity,
            MapDesc::AddConst { t } => CatalogMap::AddConst(t.realize()?),
            MapDesc::SubFrom { t } => CatalogMap::SubFrom(t.realize()?),
            MapDesc::Scale { t } => CatalogMap::Scale(t.realize()?),
            MapDesc::RecipScale { t } => CatalogMap::RecipScale(t.realize()?),
            MapDesc::SqrtDiff { t } => CatalogMap::SqrtDiff(t.realize()?),
            MapDesc::ExpScale { t } => CatalogMap::ExpScale(t.realize()?),
            MapDesc::LogScale { t } => CatalogMap::LogScale(t.realize()?),
            MapDesc::Pow { r } => CatalogMap::Pow(r.clone()),
            MapDesc::Compose { maps } => {
                CatalogMap::Compose(maps.iter().map(MapDesc::build).collect::<Result<_>>()?)
            }
            MapDesc::Implicit {
                poly,
                x_range,
                y_range,
            } => CatalogMap::Implicit {
                poly: BivarPolyQ::parse(poly)?,
                x_range: x_range.clone(),
                y_range: y_range.clone(),
            },
        })
    }
}

fn param_desc(t: &ExactReal) -> Option<Recipe> {
    t.recipe().cloned()
}

impl CatalogMap {
    /// Parses a map spec such as `sub:sqrt(2)` or `expscale:1.expscale:1`.
    pub fn parse(spec: &str) -> Result<CatalogMap> {
        let parts = split_composition(spec);
        let mut maps = parts
            .iter()
            .map(|p| parse_atom(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(if maps.len() == 1 {
            maps.pop().expect("one")
        } else {
            CatalogMap::Compose(maps)
        })
    }

    /// `None` when a parameter carries no recipe.
    pub fn desc(&self) -> Option<MapDesc> {
        Some(match self {
            CatalogMap::Identity => MapDesc::Identity,
            CatalogMap::AddConst(t) => MapDesc::AddConst { t: param_desc(t)? },
            CatalogMap::SubFrom(t) => MapDesc::SubFrom { t: param_desc(t)? },
            CatalogMap::Scale(t) => MapDesc::Scale { t: param_desc(t)? },
            CatalogMap::RecipScale(t) => MapDesc::RecipScale { t: param_desc(t)? },
            CatalogMap::SqrtDiff(t) => MapDesc::SqrtDiff { t: param_desc(t)? },
            CatalogMap::ExpScale(t) => MapDesc::ExpScale { t: param_desc(t)? },
            CatalogMap::LogScale(t) => MapDesc::LogScale { t: param_desc(t)? },
            CatalogMap::Pow(r) => MapDesc::Pow { r: r.clone() },
            CatalogMap::Compose(ms) => MapDesc::Compose {
                maps: ms.iter().map(|m| m.desc()).collect::<Option<_>>()?,
            },
            CatalogMap::Implicit {
                poly,
                x_range,
                y_range,
            } => MapDesc::Implicit {
                poly: poly.to_string(),
                x_range: x_range.clone(),
                y_range: y_range.clone(),
            },
        })
    }

    /// Closed-form inverse.
    pub fn inverse(&self) -> Result<CatalogMap> {
        Ok(match self {
            CatalogMap::Identity => CatalogMap::Identity,
            CatalogMap::AddConst(t) => CatalogMap::AddConst(t.neg()),
            CatalogMap::SubFrom(t) => CatalogMap::SubFrom(t.clone()),
            CatalogMap::Scale(t) => CatalogMap::Scale(ExactReal::from_int(1).div(t)?),
            CatalogMap::RecipScale(t) => CatalogMap::RecipScale(t.clone()),
            CatalogMap::SqrtDiff(t) => CatalogMap::SqrtDiff(t.clone()),
            CatalogMap::ExpScale(t) => CatalogMap::LogScale(t.clone()),
            CatalogMap::LogScale(t) => CatalogMap::ExpScale(t.clone()),
            CatalogMap::Pow(r) => {
                if r.is_zero() {
                    return Err(Error::DomainError("x^0 is constant".into()));
                }
                CatalogMap::Pow(r.recip())
            }
            CatalogMap::Compose(ms) => CatalogMap::Compose(
                ms.iter()
                    .rev()
                    .map(|m| m.inverse())
                    .collect::<Result<_>>()?,
            ),
            CatalogMap::Implicit {
                poly,
                x_range,
                y_range,
            } => CatalogMap::Implicit {
                poly: BivarPolyQ::from_terms(poly.terms().map(|((i, j), c)| ((*j, *i), c.clone()))),
                x_range: y_range.clone(),
                y_range: x_range.clone(),
            },
        })
    }

    /// `self` applied `k` times; negative `k` uses the inverse.
    pub fn iterate(&self, k: i64) -> Result<CatalogMap> {
        if k == 0 {
            return Ok(CatalogMap::Identity);
        }
        let base = if k > 0 { self.clone() } else { self.inverse()? };
        let n = k.unsigned_abs() as usize;
        Ok(if n == 1 {
            base
        } else {
            CatalogMap::Compose(vec![base; n])
        })
    }

    /// Certified `f(x)`.
    pub fn eval_real(&self, x: &ExactReal) -> Result<ExactReal> {
        match self {
            CatalogMap::Identity => Ok(x.clone()),
            CatalogMap::AddConst(t) => Ok(x.add(t)),
            CatalogMap::SubFrom(t) => Ok(t.sub(x)),
            CatalogMap::Scale(t) => Ok(t.mul(x)),
            CatalogMap::RecipScale(t) => t
                .div(x)
                .map_err(|_| Error::DomainError("t/x needs x away from 0".into())),
            CatalogMap::SqrtDiff(t) => t.sub(&x.mul(x)).sqrt(),
            CatalogMap::ExpScale(t) => Ok(t.mul(x).exp()),
            CatalogMap::LogScale(t) => ln_real(x)?.div(t),
            CatalogMap::Pow(r) => x.pow_rational(r),
            CatalogMap::Compose(ms) => ms.iter().try_fold(x.clone(), |acc, m| m.eval_real(&acc)),
            CatalogMap::Implicit { poly, y_range, .. } => implicit_real(poly, y_range, x),
        }
    }

    /// Enclosure of `f(x)` of width at most `2^-prec` at a rational point.
    pub fn eval_point(&self, x: &Rational, prec: u32) -> Result<Interval> {
        Ok(self
            .eval_real(&ExactReal::from_rational(x.clone()))?
            .refine(prec))
    }
}

impl fmt::Display for CatalogMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |t: &ExactReal| match t.as_rational() {
            Some(r) => r.to_string(),
            None => format!("{t:?}"),
        };
        match self {
            CatalogMap::Identity => write!(f, "id"),
            CatalogMap::AddConst(t) => write!(f, "add:{}", p(t)),
            CatalogMap::SubFrom(t) => write!(f, "sub:{}", p(t)),
            CatalogMap::Scale(t) => write!(f, "scale:{}", p(t)),
            CatalogMap::RecipScale(t) => write!(f, "recip:{}", p(t)),
            CatalogMap::SqrtDiff(t) => write!(f, "sqrtdiff:{}", p(t)),
            CatalogMap::ExpScale(t) => write!(f, "expscale:{}", p(t)),
            CatalogMap::LogScale(t) => write!(f, "logscale:{}", p(t)),
            CatalogMap::Pow(r) => write!(f, "pow:{r}"),
            CatalogMap::Compose(ms) => {
                let s: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
                write!(f, "{}", s.join("."))
            }
            CatalogMap::Implicit { poly, .. } => write!(f, "implicit[{poly}]"),
        }
    }
}

/// Splits on `.` at paren depth 0 when followed by a letter.
fn split_composition(spec: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let chars: Vec<char> = spec.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '.' if depth == 0 && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic()) => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

fn parse_atom(spec: &str) -> Result<CatalogMap> {
    let spec = spec.trim();
    if spec == "id" {
        return Ok(CatalogMap::Identity);
    }
    let (name, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("map spec {spec:?} must look like name:ARG")))?;
    let real = || expr::parse_real(arg);
    Ok(match name.trim() {
        "add" => CatalogMap::AddConst(real()?),
        "sub" => CatalogMap::SubFrom(real()?),
        "scale" => CatalogMap::Scale(real()?),
        "recip" => CatalogMap::RecipScale(real()?),
        "sqrtdiff" => CatalogMap::SqrtDiff(real()?),
        "expscale" => CatalogMap::ExpScale(real()?),
        "logscale" => CatalogMap::LogScale(real()?),
        "pow" => CatalogMap::Pow(rational::parse_rational(arg)?),
        other => return Err(Error::Parse(format!("unknown map {other:?}"))),
    })
}

/// Lifts a monotone map known at rational points to exact reals: the value
/// lies between the images of the endpoints of any enclosure of `x`.
fn monotone_lift<F>(x: &ExactReal, f: F) -> Result<ExactReal>
where
    F: Fn(&Rational, u32) -> Result<Interval> + Send + Sync + 'static,
{
    if let Some(r) = x.as_rational() {
        let r = r.clone();
        f(&r, 8)?;
        return Ok(ExactReal::from_fn(
            move |k| f(&r, k + 4).expect("checked at construction"),
            None,
        ));
    }
    // First precision at which both endpoints lie in the domain.
    let mut j0 = 8;
    loop {
        let iv = x.refine(j0);
        match f(iv.lo(), 8).and_then(|_| f(iv.hi(), 8)) {
            Ok(_) => break,
            Err(e) if j0 >= 256 => return Err(e),
            Err(_) => j0 *= 2,
        }
    }
    let x = x.clone();
    Ok(ExactReal::from_fn(
        move |k| {
            tighten(k + 4, (k + 6).max(j0), |j| {
                let iv = x.refine(j.max(j0));
                let a = f(iv.lo(), j + 2).expect("inside checked enclosure");
                let b = f(iv.hi(), j + 2).expect("inside checked enclosure");
                a.hull(&b)
            })
        },
        None,
    ))
}

/// Natural logarithm of a positive rational, width about `2^-prec`.
/// `ln y` to width `2^-prec`: Newton on a dyadic grid whose precision
/// doubles each step, accepted once `e^(l -+ 2^-(prec+1))` bracket `y`.
fn ln_point(y: &Rational, prec: u32) -> Result<Interval> {
    if !y.is_positive() {
        return Err(Error::DomainError(format!("logarithm of non-positive {y}")));
    }
    if y.is_one() {
        return Ok(Interval::point(Rational::zero()));
    }
    ln_newton(y, prec).map_or_else(|| ln_bisect(y, prec), Ok)
}

fn ln_newton(y: &Rational, prec: u32) -> Option<Interval> {
    let (l, _) = log2_bounds(y, 24);
    // ln y ~ log2(y) ln 2
    let mut z = rational::round_nearest(
        &(l * rational::rat(6931471805599453, 10_000_000_000_000_000)),
        24,
    );
    let small = (-rational::log2_lower(y)).max(0) as u32;
    let target = prec + 8;
    let mut bits = 24u32;
    let mut tries = 0;
    loop {
        bits = (bits * 2).min(target);
        let e = exp_bounds(&z, bits + small + 16).mid();
        // z + (y - e) / e, rounded to the grid
        let num = (y.numer() * e.denom() - e.numer() * y.denom()) * z.denom()
            + z.numer() * y.denom() * e.numer();
        let den = z.denom() * y.denom() * e.numer();
        z = rational::round_ratio(&num, &den, bits);
        if bits < target {
            continue;
        }
        let d = rational::pow2(-(prec as i64) - 1);
        let (a, b) = (&z - &d, &z + &d);
        let p = prec + small + 16;
        if exp_bounds(&a, p).hi() < y && exp_bounds(&b, p).lo() > y {
            return Some(Interval::hull_of(a, b));
        }
        tries += 1;
        if tries == 3 {
            return None;
        }
    }
}

fn ln_bisect(y: &Rational, prec: u32) -> Result<Interval> {
    if !y.is_positive() {
        return Err(Error::DomainError(format!("logarithm of non-positive {y}")));
    }
    if y.is_one() {
        return Ok(Interval::point(Rational::zero()));
    }
    let (l, h) = log2_bounds(y, 16);
    let (ln2_lo, ln2_hi) = (rational::rat(693, 1000), rational::rat(694, 1000));
    let cands = [&l * &ln2_lo, &l * &ln2_hi, &h * &ln2_lo, &h * &ln2_hi];
    let mut lo = cands.iter().min().expect("nonempty").clone() - rational::rat(1, 64);
    let mut hi = cands.iter().max().expect("nonempty").clone() + rational::rat(1, 64);
    let goal = rational::pow2(-(prec as i64));
    let grow = rational::log2_upper(&hi.abs().max(rational::int(1))).max(0) as u32 * 2;
    while &hi - &lo > goal {
        let m = (&lo + &hi) / rational::int(2);
        let mut p = prec + grow + 8;
        loop {
            let e = exp_bounds(&m, p);
            if e.hi() < y {
                lo = m;
                break;
            }
            if e.lo() > y {
                hi = m;
                break;
            }
            // y is not e^m for rational m != 0, so more precision decides.
            p += p / 2 + 8;
        }
    }
    Ok(Interval::hull_of(lo, hi))
}

fn ln_real(x: &ExactReal) -> Result<ExactReal> {
    let budget = crate::real::Budget::default().separation;
    if x.sign(budget) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::DomainError(
            "logarithm needs a positive argument".into(),
        ));
    }
    monotone_lift(x, ln_point)
}

/// The root in `y_range` of `P(x, y)` at rational `x`: bisection to 40
/// bits, then Newton on a dyadic grid doubling its precision each step, and
/// a final sign-change check at `y +- 2^-(prec+1)`. Falls back to plain
/// bisection when Newton leaves the bracket or the check fails.
fn implicit_point(p: &BivarPolyQ, y_range: &Interval, x: &Rational, prec: u32) -> Result<Interval> {
    let (mut lo, mut hi) = (y_range.lo().clone(), y_range.hi().clone());
    let sign = |y: &Rational| p.eval_scaled(x, y).0.sign();
    let (slo, shi) = (sign(&lo), sign(&hi));
    if slo == Sign::NoSign {
        return Ok(Interval::point(lo));
    }
    if shi == Sign::NoSign {
        return Ok(Interval::point(hi));
    }
    if slo == shi {
        return Err(Error::NoRootInJ(format!(
            "P({x}, y) has no sign change on {y_range}"
        )));
    }
    let bisect = |lo: &mut Rational, hi: &mut Rational, bits: u32| -> Option<Rational> {
        let goal = rational::pow2(-(bits as i64));
        while &*hi - &*lo > goal {
            let m = (&*lo + &*hi) / rational::int(2);
            match sign(&m) {
                Sign::NoSign => return Some(m),
                s if s == slo => *lo = m,
                _ => *hi = m,
            }
        }
        None
    };
    if let Some(root) = bisect(&mut lo, &mut hi, prec.min(40)) {
        return Ok(Interval::point(root));
    }
    if prec <= 40 {
        return Ok(Interval::hull_of(lo, hi));
    }
    if let Some(iv) = newton_bracket(p, x, &lo, &hi, slo, prec) {
        return Ok(iv);
    }
    match bisect(&mut lo, &mut hi, prec) {
        Some(root) => Ok(Interval::point(root)),
        None => Ok(Interval::hull_of(lo, hi)),
    }
}

fn newton_bracket(
    p: &BivarPolyQ,
    x: &Rational,
    lo: &Rational,
    hi: &Rational,
    slo: Sign,
    prec: u32,
) -> Option<Interval> {
    let py = p.partial_y();
    let sign = |y: &Rational| p.eval_scaled(x, y).0.sign();
    let mut y = (lo + hi) / rational::int(2);
    let mut bits = 40u32;
    let target = prec + 8;
    let mut extra = 0;
    loop {
        bits = (bits * 2).min(target);
        let (np, dp) = p.eval_scaled(x, &y);
        let (nq, dq) = py.eval_scaled(x, &y);
        if nq.is_zero() {
            return None;
        }
        // y - (np/dp) / (nq/dq), rounded to the grid 2^-bits.
        let num = (y.numer() * &dp * &nq - y.denom() * &np * &dq) << bits as usize;
        let den = y.denom() * &dp * &nq;
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num, den)
        };
        let two = BigInt::from(2);
        let rounded = num_integer::Integer::div_floor(&(num * &two + &den), &(den * &two));
        y = rational::dyadic(rounded, bits as u64);
        if &y < lo || &y > hi {
            return None;
        }
        if bits < target {
            continue;
        }
        let d = rational::pow2(-(prec as i64) - 1);
        let a = (&y - &d).max(lo.clone());
        let b = (&y + &d).min(hi.clone());
        let (sa, sb) = (sign(&a), sign(&b));
        let ok_a = sa == slo || sa == Sign::NoSign;
        let ok_b = sb != slo;
        if ok_a && ok_b {
            return Some(Interval::hull_of(a, b));
        }
        extra += 1;
        if extra > 2 {
            return None;
        }
    }
}

fn implicit_real(p: &BivarPolyQ, y_range: &Interval, x: &ExactReal) -> Result<ExactReal> {
    let (p, y_range) = (p.clone(), y_range.clone());
    monotone_lift(x, move |r, prec| implicit_point(&p, &y_range, r, prec))
}
