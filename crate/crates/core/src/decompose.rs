//! Decompositions of a real into Liouville numbers: digit-block sum splits,
//! product splits, pairs on implicit curves, and certified orbits.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::catalog::CatalogMap;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::liouville::{self, certify_level, DigitRule, LiouvilleCertificate, Schedule, Witness};
use crate::poly::BivarPolyQ;
use crate::rational::{self, Rational};
use crate::real::{Budget, ExactReal, Part, Recipe};
use crate::steer::{steer, ConstructionLog, Steering};

/// Two Liouville numbers with their certificates.
#[derive(Debug)]
pub struct PairSplit {
    pub xi: ExactReal,
    pub eta: ExactReal,
    pub certs: (LiouvilleCertificate, LiouvilleCertificate),
    /// Present for steered constructions.
    pub log: Option<ConstructionLog>,
}

// ---------------------------------------------------------------- sum split

/// Bits past this position are never examined when looking for witnesses.
const BIT_CAP: u64 = 1 << 22;
/// Extra precision tried when a bit of `t` is hard to pin down.
const BIT_SLACK: u32 = 1 << 16;

/// Block cut `m_j = (j+2)!`, saturating.
pub fn block_cut(j: u32) -> u64 {
    (2..=j as u64 + 2)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .unwrap_or(u64::MAX)
}

/// Block index of bit position `pos >= 1`: 0 below `m_1`, else the `j` with
/// `m_j <= pos < m_{j+1}`. Odd blocks go to `xi`, the rest to `eta`.
pub fn block_of(pos: u64) -> u32 {
    let mut j = 0;
    while block_cut(j + 1) <= pos {
        j += 1;
    }
    j
}

fn owner(j: u32) -> Part {
    if j % 2 == 1 {
        Part::Xi
    } else {
        Part::Eta
    }
}

/// Mask over positions `1..=k` (position `i` is bit `k - i`) of one part.
fn part_mask(part: Part, k: u64) -> BigInt {
    let mut mask = BigInt::zero();
    let mut j = 0;
    loop {
        let a = if j == 0 { 1 } else { block_cut(j) };
        if a > k {
            return mask;
        }
        let b = block_cut(j + 1).min(k + 1);
        if owner(j) == part {
            let len = (b - a) as usize;
            let shift = (k + 1 - b) as usize;
            mask |= ((BigInt::one() << len) - 1) << shift;
        }
        j += 1;
    }
}

/// Memoized `floor(2^k t)` for the largest `k` requested so far.
struct BitSource {
    t: ExactReal,
    best: Mutex<Option<(u64, BigInt)>>,
}

impl BitSource {
    fn new(t: ExactReal) -> Self {
        BitSource {
            t,
            best: Mutex::new(None),
        }
    }

    fn compute(&self, k: u64, slack: u32) -> Result<BigInt> {
        let scale = rational::int(BigInt::one() << k as usize);
        if let Some(r) = self.t.as_rational() {
            return Ok(rational::floor(&(r * &scale)));
        }
        let k32 =
            u32::try_from(k).map_err(|_| Error::BudgetExceeded("bit position too large".into()))?;
        let mut extra = 8;
        loop {
            let iv = self.t.refine(k32 + extra);
            let lo = rational::floor(&(iv.lo() * &scale));
            if lo == rational::floor(&(iv.hi() * &scale)) {
                return Ok(lo);
            }
            if extra >= slack {
                return Err(Error::BudgetExceeded(format!(
                    "bit {k} of t straddles a dyadic point"
                )));
            }
            extra *= 4;
        }
    }

    /// `floor(2^k t)`.
    fn scaled_floor(&self, k: u64, slack: u32) -> Result<BigInt> {
        {
            let best = self.best.lock().expect("bit cache poisoned");
            if let Some((bk, f)) = best.as_ref().filter(|(bk, _)| *bk >= k) {
                return Ok(f.div_floor(&(BigInt::one() << (bk - k) as usize)));
            }
        }
        let f = self.compute(k, slack)?;
        let mut best = self.best.lock().expect("bit cache poisoned");
        if best.as_ref().map_or(true, |(bk, _)| k > *bk) {
            *best = Some((k, f.clone()));
        }
        Ok(f)
    }

    /// `(floor(t), bits of frac(t) at positions 1..=k)`.
    fn split(&self, k: u64, slack: u32) -> Result<(BigInt, BigInt)> {
        let f = self.scaled_floor(k, slack)?;
        let (int, frac) = f.div_mod_floor(&(BigInt::one() << k as usize));
        Ok((int, frac))
    }
}

/// Both parts' bits at precision `k`: `(xi, eta)` numerators over `2^k`,
/// `eta` including the integer part.
fn parts_at(src: &BitSource, k: u64, slack: u32) -> Result<(BigInt, BigInt)> {
    let (int, frac) = src.split(k, slack)?;
    let xi = &frac & part_mask(Part::Xi, k);
    let eta = (int << k as usize) + (&frac & part_mask(Part::Eta, k));
    Ok((xi, eta))
}

fn part_real(src: Arc<BitSource>, part: Part) -> ExactReal {
    ExactReal::from_fn(
        move |prec| {
            let k = prec as u64 + 5;
            let (xi, eta) = parts_at(&src, k, 1 << 24)
                .expect("bits of t could not be separated from a dyadic point");
            let num = if part == Part::Xi { xi } else { eta };
            let den = BigInt::one() << k as usize;
            let lo = Rational::new(num.clone(), den.clone());
            Interval::new(lo, Rational::new(num + 1, den)).expect("ordered")
        },
        None,
    )
}

fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    (d & (d - BigInt::one())).is_zero()
}

fn binary_series() -> ExactReal {
    liouville::series_constant(2, Schedule::Factorial, DigitRule::Constant { value: 1 })
        .expect("valid series")
}

fn attach_sum_recipes(t: &ExactReal, xi: ExactReal, eta: ExactReal) -> (ExactReal, ExactReal) {
    match t.recipe() {
        Some(r) => {
            let mk = |part| Recipe::SplitSum {
                target: Box::new(r.clone()),
                part,
            };
            (xi.with_recipe(mk(Part::Xi)), eta.with_recipe(mk(Part::Eta)))
        }
        None => (xi, eta),
    }
}

/// The two parts of the digit-block split of `t`, without certificates.
///
/// Dyadic rationals have no infinite binary tail to split, so they use
/// `xi = sum 2^-k!` and `eta = t - xi` instead.
pub fn split_sum_parts(t: &ExactReal) -> Result<(ExactReal, ExactReal)> {
    let (xi, eta) = match t.as_rational() {
        Some(r) if is_dyadic(r) => {
            let xi = binary_series();
            let eta = ExactReal::from_rational(r.clone()).sub(&xi);
            (xi, eta)
        }
        _ => {
            let src = Arc::new(BitSource::new(t.clone()));
            (part_real(src.clone(), Part::Xi), part_real(src, Part::Eta))
        }
    };
    Ok(attach_sum_recipes(t, xi, eta))
}

/// Handle on the bit structure of a non-dyadic sum split, for inspection.
pub struct SplitBits {
    src: BitSource,
}

impl SplitBits {
    pub fn new(t: &ExactReal) -> Self {
        SplitBits {
            src: BitSource::new(t.clone()),
        }
    }

    /// `(frac bits of t, bits of xi, fractional bits of eta)` at positions `1..=k`.
    pub fn bits(&self, k: u64) -> Result<(BigInt, BigInt, BigInt)> {
        let (_, frac) = self.src.split(k, BIT_SLACK)?;
        let xi = &frac & part_mask(Part::Xi, k);
        let eta = &frac & part_mask(Part::Eta, k);
        Ok((frac, xi, eta))
    }
}

/// Level-`n` witness for one part: truncate it just before block `j` (owned
/// by the other part), where the zero run `[m_j, m_{j+1})` makes the error at
/// most `2^(1 - m_{j+1}) <= q^-(j+2)` with `q = 2^m_j`. The error must also be
/// nonzero, so the next block of the part needs a one bit.
fn block_witness(src: &BitSource, part: Part, n: u32) -> Result<Witness> {
    let parity = if part == Part::Xi { 0 } else { 1 };
    let mut j = n.saturating_sub(2).max(1);
    if j % 2 != parity {
        j += 1;
    }
    loop {
        let (start, end) = (block_cut(j + 1), block_cut(j + 2));
        if start >= BIT_CAP {
            return Err(Error::BudgetExceeded(format!(
                "no one bit in the {part:?} blocks below bit {BIT_CAP}"
            )));
        }
        let mut upto = start + 64;
        loop {
            let upto_c = upto.min(end - 1).min(BIT_CAP);
            let (_, frac) = src.split(upto_c, BIT_SLACK)?;
            let low: BigInt = (BigInt::one() << (upto_c - start + 1) as usize) - 1;
            let tail: BigInt = &frac & low;
            if !tail.is_zero() {
                let m = block_cut(j);
                let (xi, eta) = parts_at(src, m, BIT_SLACK)?;
                let p = if part == Part::Xi { xi } else { eta };
                return Ok(Witness::new(n, p, BigInt::one() << m as usize));
            }
            if upto_c == end - 1 || upto_c == BIT_CAP {
                break;
            }
            upto *= 4;
        }
        j += 2;
    }
}

/// Witnesses for `t - xi` from truncations of `xi = sum 2^-k!`: with
/// `t = a / 2^s` and `q = 2^k!` for `k! >= s`, `t q` is an integer.
fn dyadic_eta_witnesses(t: &Rational, levels: u32) -> Vec<Witness> {
    let s = t.denom().bits().saturating_sub(1);
    let fact = |k: u32| {
        (1..=k as u64)
            .try_fold(1u64, |a, i| a.checked_mul(i))
            .unwrap_or(u64::MAX)
    };
    let mut k0 = 1;
    while fact(k0) < s {
        k0 += 1;
    }
    (1..=levels)
        .map(|n| {
            let k = n.max(k0);
            let (trunc, _) = liouville::series_truncation(
                2,
                &Schedule::Factorial,
                &DigitRule::Constant { value: 1 },
                k,
            );
            let q = trunc.denom().clone();
            let v = t - trunc;
            debug_assert!((v.denom() % &q).is_zero() || (&q % v.denom()).is_zero());
            let p = (v * rational::int(q.clone())).to_integer();
            Witness::new(n, p, q)
        })
        .collect()
}

/// Splits `t = xi + eta` into two Liouville numbers by giving alternate
/// factorial-length blocks of the binary expansion to each part.
pub fn erdos_split_sum(t: &ExactReal, levels: u32) -> Result<PairSplit> {
    if levels == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let (xi, eta) = split_sum_parts(t)?;
    let (wx, we) = match t.as_rational() {
        Some(r) if is_dyadic(r) => (
            certify_level(&xi, levels)?.witnesses,
            dyadic_eta_witnesses(r, levels),
        ),
        _ => {
            let src = BitSource::new(t.clone());
            let wx = (1..=levels)
                .map(|n| block_witness(&src, Part::Xi, n))
                .collect::<Result<Vec<_>>>()?;
            let we = (1..=levels)
                .map(|n| block_witness(&src, Part::Eta, n))
                .collect::<Result<Vec<_>>>()?;
            (wx, we)
        }
    };
    let certs = (
        LiouvilleCertificate {
            subject: xi.recipe().cloned(),
            witnesses: wx.clone(),
        },
        LiouvilleCertificate {
            subject: eta.recipe().cloned(),
            witnesses: we.clone(),
        },
    );
    Ok(PairSplit {
        xi: xi.with_witnesses(wx),
        eta: eta.with_witnesses(we),
        certs,
        log: None,
    })
}

// ------------------------------------------------------------ product split

fn retag(s: &Steering, idx: usize, recipe: Option<Recipe>) -> (ExactReal, LiouvilleCertificate) {
    let mut cert = s.certificates[idx].clone();
    let v = match recipe {
        Some(r) => {
            cert.subject = Some(r.clone());
            s.images[idx].with_recipe(r)
        }
        None => s.images[idx].clone(),
    };
    (v, cert)
}

/// Splits `t = xi eta` by steering `x -> t/x` on `[a, 2a]` with `a` near
/// `sqrt|t|` (on `[-2a, -a]` when `t < 0`).
pub fn erdos_split_prod(t: &ExactReal, levels: u32) -> Result<PairSplit> {
    let budget = Budget::default().separation;
    let (_, iv) = t
        .separate_from_zero(budget)
        .ok_or(Error::NotSeparatedFromZero { budget })?;
    let e = rational::log2_lower(&iv.mig()).div_euclid(2);
    let a = rational::pow2(e);
    let i0 = if iv.is_positive() {
        Interval::new(a.clone(), a * rational::int(2))?
    } else {
        Interval::new(-(&a * rational::int(2)), -a)?
    };
    let s = steer(&[CatalogMap::RecipScale(t.clone())], &i0, levels)?;
    let mk = |part| {
        t.recipe().map(|r| Recipe::SplitProd {
            target: Box::new(r.clone()),
            level: levels,
            part,
        })
    };
    let (xi, cx) = retag(&s, 0, mk(Part::Xi));
    let (eta, ce) = retag(&s, 1, mk(Part::Eta));
    Ok(PairSplit {
        xi,
        eta,
        certs: (cx, ce),
        log: Some(s.log),
    })
}

// ------------------------------------------------------------ implicit pair

#[derive(PartialEq)]
enum SliceCheck {
    Good,
    NoRoot,
    NotMonotone,
}

fn check_slice(
    p: &BivarPolyQ,
    px: &BivarPolyQ,
    py: &BivarPolyQ,
    x: &Interval,
    y: &Interval,
) -> SliceCheck {
    let lo = p.eval_interval(x, &Interval::point(y.lo().clone()));
    let hi = p.eval_interval(x, &Interval::point(y.hi().clone()));
    let sign_change =
        (lo.is_negative() && hi.is_positive()) || (lo.is_positive() && hi.is_negative());
    if !sign_change {
        return SliceCheck::NoRoot;
    }
    if px.eval_interval(x, y).excludes_zero() && py.eval_interval(x, y).excludes_zero() {
        SliceCheck::Good
    } else {
        SliceCheck::NotMonotone
    }
}

/// Largest run of consecutive pieces of `i` on which `P(x, .)` changes sign
/// across `j` and both partials are certifiably nonzero.
fn certified_domain(p: &BivarPolyQ, i: &Interval, j: &Interval) -> Result<Interval> {
    let (px, py) = (p.partial_x(), p.partial_y());
    let mut saw_root = false;
    for depth in [0u32, 2, 4, 6, 8] {
        let pieces = 1usize << depth;
        let step = i.width() / rational::int(pieces as i64);
        let piece = |k: usize| {
            let lo = i.lo() + &step * rational::int(k as i64);
            Interval::new(lo.clone(), lo + &step).expect("ordered")
        };
        let good: Vec<bool> = (0..pieces)
            .map(|k| {
                let c = check_slice(p, &px, &py, &piece(k), j);
                saw_root |= c != SliceCheck::NoRoot;
                c == SliceCheck::Good
            })
            .collect();
        let mut best: Option<(usize, usize)> = None;
        let mut k = 0;
        while k < pieces {
            if good[k] {
                let start = k;
                while k < pieces && good[k] {
                    k += 1;
                }
                if best.map_or(true, |(a, b)| k - start > b - a) {
                    best = Some((start, k));
                }
            } else {
                k += 1;
            }
        }
        if let Some((a, b)) = best {
            return Interval::new(piece(a).lo().clone(), piece(b - 1).hi().clone());
        }
    }
    if saw_root {
        Err(Error::NonMonotoneSlice(format!("{p} on {i} x {j}")))
    } else {
        Err(Error::NoRootInJ(format!(
            "{p} has no certified root in {j} for x in {i}"
        )))
    }
}

/// A pair `(xi, eta)` of Liouville numbers with `P(xi, eta) = 0`, `xi` in `i`
/// and `eta` in `j`, built by steering the implicit function `y = phi(x)`.
pub fn implicit_pair(p: &BivarPolyQ, i: &Interval, j: &Interval, levels: u32) -> Result<PairSplit> {
    if p.partial_x().is_zero() || p.partial_y().is_zero() {
        return Err(Error::NonMonotoneSlice(format!(
            "{p} does not involve both variables"
        )));
    }
    let dom = certified_domain(p, i, j)?;
    let phi = CatalogMap::Implicit {
        poly: p.clone(),
        x_range: dom.clone(),
        y_range: j.clone(),
    };
    let s = steer(&[phi], &dom, levels)?;
    let mk = |part| {
        Some(Recipe::Implicit {
            poly: p.to_string(),
            x_interval: i.clone(),
            y_interval: j.clone(),
            level: levels,
            part,
        })
    };
    let (xi, cx) = retag(&s, 0, mk(Part::Xi));
    let (eta, ce) = retag(&s, 1, mk(Part::Eta));
    Ok(PairSplit {
        xi,
        eta,
        certs: (cx, ce),
        log: Some(s.log),
    })
}

// -------------------------------------------------------------------- orbit

#[derive(Debug)]
pub struct Orbit {
    pub depth: u32,
    /// `elements[k + depth]` is `phi^k(xi)`.
    pub elements: Vec<ExactReal>,
    pub certificates: Vec<LiouvilleCertificate>,
    pub log: ConstructionLog,
}

impl Orbit {
    pub fn element(&self, k: i64) -> Option<&ExactReal> {
        let idx = k.checked_add(self.depth as i64)?;
        self.elements.get(usize::try_from(idx).ok()?)
    }

    pub fn certificate(&self, k: i64) -> Option<&LiouvilleCertificate> {
        let idx = k.checked_add(self.depth as i64)?;
        self.certificates.get(usize::try_from(idx).ok()?)
    }
}

pub fn default_orbit_interval() -> Interval {
    Interval::new(rational::rat(1, 10), rational::rat(9, 10)).expect("ordered")
}

pub fn orbit_construct(phi: &CatalogMap, depth: u32, levels: u32) -> Result<Orbit> {
    orbit_construct_on(phi, depth, levels, &default_orbit_interval())
}

/// Steers `phi^k` for `0 < |k| <= depth` at once, so the whole orbit segment
/// `phi^-depth(xi) .. phi^depth(xi)` is certified.
pub fn orbit_construct_on(
    phi: &CatalogMap,
    depth: u32,
    levels: u32,
    interval: &Interval,
) -> Result<Orbit> {
    let d = depth as i64;
    let ks: Vec<i64> = (-d..0).chain(1..=d).collect();
    let maps = ks
        .iter()
        .map(|&k| phi.iterate(k))
        .collect::<Result<Vec<_>>>()?;
    let escape = |e: Error| match e {
        Error::DomainError(m) => Error::DomainEscape(m),
        other => other,
    };
    let s = steer(&maps, interval, levels).map_err(escape)?;
    let desc = phi.desc();
    let mut elements = Vec::with_capacity(ks.len() + 1);
    let mut certificates = Vec::with_capacity(ks.len() + 1);
    for k in -d..=d {
        let idx = match k {
            0 => 0,
            k if k < 0 => (k + d + 1) as usize,
            k => (k + d) as usize,
        };
        let recipe = desc.as_ref().map(|m| Recipe::Orbit {
            map: Box::new(m.clone()),
            depth,
            level: levels,
            interval: interval.clone(),
            iterate: k,
        });
        let (v, c) = retag(&s, idx, recipe);
        elements.push(v);
        certificates.push(c);
    }
    Ok(Orbit {
        depth,
        elements,
        certificates,
        log: s.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{classical_constant, verify_certificate};
    use crate::rational::rat;

    fn both_verify(s: &PairSplit) {
        assert!(verify_certificate(&s.xi, &s.certs.0).unwrap());
        assert!(verify_certificate(&s.eta, &s.certs.1).unwrap());
    }

    #[test]
    fn blocks() {
        assert_eq!((block_cut(1), block_cut(2), block_cut(3)), (6, 24, 120));
        assert_eq!(block_of(1), 0);
        assert_eq!(block_of(5), 0);
        assert_eq!(block_of(6), 1);
        assert_eq!(block_of(23), 1);
        assert_eq!(block_of(24), 2);
        assert_eq!(block_cut(40), u64::MAX);
    }

    #[test]
    fn masks_partition_positions() {
        for k in [1u64, 5, 6, 30, 130] {
            let x = part_mask(Part::Xi, k);
            let e = part_mask(Part::Eta, k);
            assert!((&x & &e).is_zero());
            assert_eq!(x | e, (BigInt::one() << k as usize) - 1);
        }
        // position 6 is bit k - 6
        assert_eq!(part_mask(Part::Xi, 6), BigInt::one());
    }

    #[test]
    fn third_splits_exactly() {
        let t = ExactReal::from_rational(rat(1, 3));
        let s = erdos_split_sum(&t, 3).unwrap();
        both_verify(&s);
        let sum = s.xi.add(&s.eta);
        for k in [10, 100, 300] {
            assert!(sum.refine(k).contains(&rat(1, 3)));
        }
        let (frac, xi, eta) = SplitBits::new(&t).bits(200).unwrap();
        assert!((&xi & &eta).is_zero());
        assert_eq!(xi | eta, frac);
    }

    #[test]
    fn negative_and_integer_parts() {
        let t = ExactReal::from_rational(rat(-7, 3));
        let s = erdos_split_sum(&t, 2).unwrap();
        both_verify(&s);
        assert!(s.xi.add(&s.eta).refine(64).contains(&rat(-7, 3)));
        assert!(s.xi.refine(20).lo() >= &rat(0, 1));
    }

    #[test]
    fn dyadic_fallback() {
        for r in [rat(0, 1), rat(3, 8), rat(-5, 1)] {
            let t = ExactReal::from_rational(r.clone());
            let s = erdos_split_sum(&t, 4).unwrap();
            both_verify(&s);
            assert!(s.xi.add(&s.eta).refine(80).contains(&r));
        }
    }

    #[test]
    fn split_of_liouville_plus_third() {
        let t = classical_constant().add(&ExactReal::from_rational(rat(1, 3)));
        let s = erdos_split_sum(&t, 2).unwrap();
        both_verify(&s);
        let sum = s.xi.add(&s.eta).refine(100);
        assert!(sum.contains_interval(&t.refine(104)));
        let again = s.eta.recipe().unwrap().realize().unwrap();
        assert_eq!(again.refine(90), s.eta.refine(90));
    }

    #[test]
    fn product_split() {
        for (t, n) in [(rat(2, 1), 2), (rat(1, 1), 1), (rat(-1, 1), 2)] {
            let s = erdos_split_prod(&ExactReal::from_rational(t.clone()), n).unwrap();
            both_verify(&s);
            assert!(s.xi.mul(&s.eta).refine(80).contains(&t));
        }
        assert_eq!(
            erdos_split_prod(&ExactReal::from_int(0), 1)
                .unwrap_err()
                .token(),
            "NotSeparatedFromZero"
        );
    }

    #[test]
    fn implicit_line_and_circle() {
        let i = Interval::new(rat(1, 10), rat(9, 10)).unwrap();
        for poly in ["x + y - 1", "x^2 + y^2 - 1"] {
            let p = BivarPolyQ::parse(poly).unwrap();
            let s = implicit_pair(&p, &i, &i, 2).unwrap();
            both_verify(&s);
            assert!(p.eval_real(&s.xi, &s.eta).refine(60).contains(&rat(0, 1)));
        }
        let hyp = BivarPolyQ::parse("x*y - 2").unwrap();
        assert_eq!(
            implicit_pair(&hyp, &i, &i, 1).unwrap_err().token(),
            "NoRootInJ"
        );
        let j = Interval::new(rat(1, 1), rat(3, 1)).unwrap();
        let s = implicit_pair(&hyp, &j, &j, 2).unwrap();
        both_verify(&s);
    }

    #[test]
    fn orbit_of_translation() {
        let phi = CatalogMap::parse("add:1").unwrap();
        let o = orbit_construct(&phi, 1, 2).unwrap();
        assert_eq!(o.elements.len(), 3);
        for k in -1..=1 {
            assert!(verify_certificate(o.element(k).unwrap(), o.certificate(k).unwrap()).unwrap());
        }
        let diff = o.element(1).unwrap().sub(o.element(0).unwrap());
        assert!(diff.refine(60).contains(&rat(1, 1)));
        assert!(o.element(2).is_none());
        let zero = orbit_construct(&phi, 0, 2).unwrap();
        assert_eq!(zero.elements.len(), 1);
    }

    #[test]
    fn orbit_escaping_domain() {
        let phi = CatalogMap::parse("add:-1").unwrap();
        let sq = CatalogMap::Compose(vec![phi, CatalogMap::Pow(rat(1, 2))]);
        let err = orbit_construct(&sq, 1, 1).unwrap_err();
        assert_eq!(err.token(), "DomainEscape");
    }
}
