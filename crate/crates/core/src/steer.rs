//! Finite-stage interval nesting.
//!
//! Given monotone maps `f_1..f_m` (with the identity prepended as `f_0`),
//! [`steer`] shrinks an interval stage by stage so that for every pair
//! `(i, n)` with `n <= N`, `f_i` maps the final interval into a punctured
//! ball `(p/q - q^-n, p/q + q^-n) \ {p/q}`. Each stage's `p/q` is a level-`n`
//! witness for `f_i(point)`.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogMap, MapDesc};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::liouville::{LiouvilleCertificate, Witness};
use crate::rational::{self, Rational};
use crate::real::{ExactReal, Recipe};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    /// 0 is the implicit identity, `i >= 1` is the `i`-th user map.
    pub map: usize,
    pub level: u32,
    #[serde(with = "rational::serde_bigint")]
    pub p: BigInt,
    #[serde(with = "rational::serde_bigint")]
    pub q: BigInt,
    pub before: Interval,
    pub after: Interval,
}

impl Stage {
    pub fn witness(&self) -> Witness {
        Witness {
            n: self.level,
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub stages: Vec<Stage>,
}

impl ConstructionLog {
    /// Witnesses recorded for map `i`, by increasing level.
    pub fn witnesses_for(&self, i: usize) -> Vec<Witness> {
        let mut w: Vec<_> = self
            .stages
            .iter()
            .filter(|s| s.map == i)
            .map(Stage::witness)
            .collect();
        w.sort_by_key(|w| w.n);
        w
    }
}

#[derive(Debug)]
pub struct Steering {
    pub final_interval: Interval,
    /// `images[0]` is the point, `images[i]` is `f_i(point)`.
    pub images: Vec<ExactReal>,
    pub log: ConstructionLog,
    pub certificates: Vec<LiouvilleCertificate>,
}

impl Steering {
    pub fn point(&self) -> &ExactReal {
        &self.images[0]
    }
}

/// Bound on bisection steps per pulled-back window.
const MAX_BISECTIONS: u32 = 200_000;
/// Extra precision tried before declaring an image collapsed.
const COLLAPSE_SLACK: u32 = 512;

/// `(i, n)` pairs in diagonal order: by `i + n`, then by `i`.
pub fn dovetail(maps: usize, levels: u32) -> Vec<(usize, u32)> {
    let mut pairs: Vec<(usize, u32)> = (0..=maps)
        .flat_map(|i| (1..=levels).map(move |n| (i, n)))
        .collect();
    pairs.sort_by_key(|&(i, n)| (i as u64 + n as u64, i));
    pairs
}

fn bits_below(x: &Rational) -> u32 {
    (-rational::log2_lower(x)).max(0) as u32
}

/// Certified inner enclosure of `f(iv)` and whether `f` increases.
fn inner_image(f: &CatalogMap, iv: &Interval) -> Result<(Interval, bool)> {
    let start = bits_below(&iv.width()) + 8;
    let mut prec = start;
    loop {
        let a = f.eval_point(iv.lo(), prec)?;
        let b = f.eval_point(iv.hi(), prec)?;
        if a.hi() < b.lo() {
            return Ok((Interval::hull_of(a.hi().clone(), b.lo().clone()), true));
        }
        if b.hi() < a.lo() {
            return Ok((Interval::hull_of(b.hi().clone(), a.lo().clone()), false));
        }
        if prec >= start + COLLAPSE_SLACK {
            return Err(Error::ImageCollapse(format!("{f} on {iv}")));
        }
        prec = prec * 2 + 8;
    }
}

/// Smallest `m` with `2^(-m n) < w/4` and `2^-m <= w/4`.
fn grid_exponent(w: &Rational, n: u32) -> u32 {
    let quarter = w / rational::int(4);
    // 2^-m <= quarter already needs m >= -log2(quarter) - 1; start there.
    let mut m = (-rational::log2_upper(&quarter) - 1).max(1) as u32;
    while rational::pow2(-(m as i64) * n as i64) >= quarter || rational::pow2(-(m as i64)) > quarter
    {
        m += 1;
    }
    m
}

/// A point of `iv` whose image lies in `window`: through the inverse map
/// when it lands, else by certified bisection.
///
/// The bisection runs on a dyadic grid `2^-s` so midpoints need no reduction;
/// snapping `iv` inward by `2^-64` of its width keeps the window reachable.
fn pull_back(
    f: &CatalogMap,
    iv: &Interval,
    increasing: bool,
    window: &Interval,
    prec: u32,
) -> Result<Rational> {
    if let Some(x) = invert_into(f, iv, window, prec) {
        return Ok(x);
    }
    bisect_into(f, iv, increasing, window, prec)
}

/// The inverse map at the window centre, rounded to a dyadic and accepted
/// only once `f` of it is certified inside the window.
fn invert_into(f: &CatalogMap, iv: &Interval, window: &Interval, prec: u32) -> Option<Rational> {
    let g = f.inverse().ok()?;
    let c = window.mid();
    let mut k = prec + 16;
    for _ in 0..4 {
        if let Ok(gv) = g.eval_point(&c, k) {
            let x = rational::round_nearest(&gv.mid(), k);
            if iv.contains(&x) {
                let e = f.eval_point(&x, prec).ok()?;
                if window.contains_interval(&e) {
                    return Some(x);
                }
            }
        }
        k += k / 2 + 16;
    }
    None
}

fn bisect_into(
    f: &CatalogMap,
    iv: &Interval,
    increasing: bool,
    window: &Interval,
    prec: u32,
) -> Result<Rational> {
    let mut s = bits_below(&iv.width()) as u64 + 64;
    let scale = rational::int(BigInt::one() << s as usize);
    let mut lo = rational::ceil(&(iv.lo() * &scale));
    let mut hi = rational::floor(&(iv.hi() * &scale));
    let twice_centre = window.lo() + window.hi();
    for _ in 0..MAX_BISECTIONS {
        let m = rational::dyadic(&lo + &hi, s + 1);
        let e = f.eval_point(&m, prec)?;
        if window.contains_interval(&e) {
            return Ok(m);
        }
        let m2 = &lo + &hi;
        if ((e.lo() + e.hi()) < twice_centre) == increasing {
            lo = m2;
            hi <<= 1;
        } else {
            hi = m2;
            lo <<= 1;
        }
        s += 1;
    }
    Err(Error::BudgetExceeded(format!(
        "bisection for {f} did not reach {window}"
    )))
}

/// One stage: choose `p/q` in the middle of `f(iv)` and shrink `iv` so that
/// `f` maps it into the right half of the punctured ball around `p/q`.
fn stage(f: &CatalogMap, map: usize, level: u32, iv: &Interval) -> Result<Stage> {
    let (img, increasing) = inner_image(f, iv)?;
    let w = img.width();
    let m = grid_exponent(&w, level);
    let q = BigInt::one() << m as usize;
    let qr = rational::int(q.clone());
    let c = img.mid();
    let mut p = rational::floor(&(&c * &qr + rational::rat(1, 2)));
    let quarter = &w / rational::int(4);
    let middle = Interval::new(&c - &quarter, &c + &quarter).expect("ordered");
    let centre = |p: &BigInt| Rational::new(p.clone(), q.clone());
    if !middle.contains(&centre(&p)) {
        if centre(&p) < c {
            p += 1;
        } else {
            p -= 1;
        }
    }
    let pq = centre(&p);
    let r = rational::pow2(-(m as i64) * level as i64);
    let eighth = &r / rational::int(8);
    let window = |offset: Rational| {
        let mid = &pq + &r * offset;
        Interval::new(&mid - &eighth, &mid + &eighth).expect("ordered")
    };
    let prec = m * level + 6;
    let s = pull_back(f, iv, increasing, &window(rational::rat(1, 4)), prec)?;
    let t = pull_back(f, iv, increasing, &window(rational::rat(3, 4)), prec)?;
    Ok(Stage {
        map,
        level,
        p,
        q,
        before: iv.clone(),
        after: Interval::hull_of(s, t),
    })
}

/// `f_i(after)` lies in the punctured ball of the stage, checked by
/// evaluating `f_i` at both endpoints (the maps are monotone).
pub fn check_stage(f: &CatalogMap, st: &Stage) -> Result<bool> {
    let w = st.witness();
    let (c, r) = (w.value(), w.radius());
    let prec = bits_below(&r) + 16;
    let img = f
        .eval_point(st.after.lo(), prec)?
        .hull(&f.eval_point(st.after.hi(), prec)?);
    let ball = Interval::new(&c - &r, &c + &r).expect("ordered");
    Ok(ball.interior_contains(&img)
        && !img.contains(&c)
        && st.before.contains_interval(&st.after)
        && st.after != st.before)
}

/// Identity stages at increasing levels, run on demand to refine the point.
struct Continuation {
    intervals: Vec<Interval>,
    next_level: u32,
}

fn point_from(final_interval: Interval, first_level: u32) -> ExactReal {
    let state = Arc::new(Mutex::new(Continuation {
        intervals: vec![final_interval],
        next_level: first_level,
    }));
    ExactReal::from_fn(
        move |k| {
            let goal = rational::pow2(-(k as i64) - 4);
            let mut st = state.lock().expect("continuation poisoned");
            if let Some(iv) = st.intervals.iter().find(|iv| iv.width() <= goal) {
                return iv.clone();
            }
            loop {
                let last = st.intervals.last().expect("nonempty").clone();
                let level = st.next_level;
                let next = stage(&CatalogMap::Identity, 0, level, &last)
                    .expect("identity stages cannot fail")
                    .after;
                st.next_level += 1;
                st.intervals.push(next.clone());
                if next.width() <= goal {
                    return next;
                }
            }
        },
        None,
    )
}

/// Runs all `(i, n)` stages for `i = 0..=maps.len()` and `n = 1..=levels`.
pub fn steer(maps: &[CatalogMap], i0: &Interval, levels: u32) -> Result<Steering> {
    if levels == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    if i0.lo() >= i0.hi() {
        return Err(Error::InvalidArgument(format!(
            "interval {i0} must have lo < hi"
        )));
    }
    let mut all = vec![CatalogMap::Identity];
    all.extend(maps.iter().cloned());
    let mut log = ConstructionLog::default();
    let mut cur = i0.clone();
    for (i, n) in dovetail(maps.len(), levels) {
        let st = stage(&all[i], i, n, &cur)?;
        cur = st.after.clone();
        log.stages.push(st);
    }
    let point = point_from(cur.clone(), levels + 1);
    let descs: Option<Vec<MapDesc>> = maps.iter().map(|m| m.desc()).collect();
    let mut images = Vec::with_capacity(all.len());
    let mut certificates = Vec::with_capacity(all.len());
    for (i, f) in all.iter().enumerate() {
        let v = if i == 0 {
            point.clone()
        } else {
            f.eval_real(&point)?
        };
        let witnesses = log.witnesses_for(i);
        let recipe = descs.as_ref().map(|d| Recipe::Steered {
            maps: d.clone(),
            interval: i0.clone(),
            level: levels,
            image: i,
        });
        let v = match &recipe {
            Some(r) => v.with_recipe(r.clone()),
            None => v,
        };
        certificates.push(LiouvilleCertificate {
            subject: recipe,
            witnesses: witnesses.clone(),
        });
        images.push(v.with_witnesses(witnesses));
    }
    Ok(Steering {
        final_interval: cur,
        images,
        log,
        certificates,
    })
}
