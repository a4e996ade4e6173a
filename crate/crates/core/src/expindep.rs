//! Independence of exponentials of polynomials.
//!
//! `e^{g_1}, .., e^{g_n}` are linearly independent over `C(z)` iff no
//! difference `g_i - g_j` is constant, and `e^{f_1}, .., e^{f_m}` are
//! algebraically independent iff no nonzero integer combination of the `f_j`
//! is constant. Both reduce to exact linear algebra on the coefficient
//! vectors with the constant term dropped.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, P61};
use crate::poly::{BivarPolyQ, PolyQ};
use crate::rational::{self, Rational};

/// Coefficients of `z, z^2, ..`: the image of a polynomial modulo constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SImage(Vec<Rational>);

impl SImage {
    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of `z^k`, `k >= 1`.
    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k - 1).cloned().unwrap_or_else(Rational::zero)
    }
}

pub fn s_image(g: &PolyQ) -> SImage {
    SImage(g.coeffs().iter().skip(1).cloned().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Independent,
    Dependent,
}

/// `sum a_j f_j = c` identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerRelation {
    #[serde(with = "bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependenceWitness {
    /// 1-based indices `i < j` with `g_i - g_j` constant.
    Pair(usize, usize),
    Relation(IntegerRelation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndepVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DependenceWitness>,
}

impl IndepVerdict {
    fn independent() -> Self {
        IndepVerdict {
            status: Status::Independent,
            witness: None,
        }
    }

    pub fn is_independent(&self) -> bool {
        self.status == Status::Independent
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
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn lin_indep_exp(gs: &[PolyQ]) -> IndepVerdict {
    let imgs: Vec<SImage> = gs.iter().map(s_image).collect();
    for i in 0..imgs.len() {
        for j in i + 1..imgs.len() {
            if imgs[i] == imgs[j] {
                return IndepVerdict {
                    status: Status::Dependent,
                    witness: Some(DependenceWitness::Pair(i + 1, j + 1)),
                };
            }
        }
    }
    IndepVerdict::independent()
}

fn ambient_degree(ps: &[PolyQ]) -> usize {
    ps.iter().filter_map(PolyQ::degree).max().unwrap_or(0)
}

/// Column `j` holds the s-image of `fs[j]`.
fn image_columns(fs: &[PolyQ]) -> Matrix {
    let d = ambient_degree(fs);
    (1..=d)
        .map(|k| fs.iter().map(|f| f.coeff(k)).collect())
        .collect()
}

pub fn alg_indep_exp(fs: &[PolyQ]) -> IndepVerdict {
    let m = image_columns(fs);
    let kernel = if m.is_empty() {
        // every f_j is constant
        (!fs.is_empty()).then(|| {
            let mut v = vec![Rational::zero(); fs.len()];
            v[0] = Rational::one();
            v
        })
    } else {
        linalg::kernel_vector(&m, fs.len())
    };
    match kernel {
        None => IndepVerdict::independent(),
        Some(v) => {
            let a = linalg::primitive(&v);
            let c = combine(fs, &a).coeff(0);
            IndepVerdict {
                status: Status::Dependent,
                witness: Some(DependenceWitness::Relation(IntegerRelation { a, c })),
            }
        }
    }
}

fn combine(fs: &[PolyQ], a: &[BigInt]) -> PolyQ {
    fs.iter().zip(a).fold(PolyQ::zero(), |acc, (f, k)| {
        acc.add(&f.scale(&Rational::from_integer(k.clone())))
    })
}

/// `prod_{a_i > 0} X_i^{a_i} = e^c prod_{a_i < 0} X_i^{-a_i}` with `X_i = e^{f_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdentity {
    /// `(i, a_i)` with 1-based `i`.
    pub positive: Vec<(usize, u64)>,
    pub negative: Vec<(usize, u64)>,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

impl fmt::Display for MonomialIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[(usize, u64)]| {
            if v.is_empty() {
                return "1".to_string();
            }
            v.iter()
                .map(|(i, e)| {
                    if *e == 1 {
                        format!("X{i}")
                    } else {
                        format!("X{i}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        let rhs = side(&self.negative);
        if self.c.is_zero() {
            write!(f, "{} = {rhs}", side(&self.positive))
        } else {
            write!(f, "{} = e^({})*{rhs}", side(&self.positive), self.c)
        }
    }
}

pub fn monomial_certificate(fs: &[PolyQ], rel: &IntegerRelation) -> Result<MonomialIdentity> {
    if rel.a.len() != fs.len() || rel.a.iter().all(Zero::is_zero) {
        return Err(Error::InvalidRelation);
    }
    let sum = combine(fs, &rel.a);
    if sum != PolyQ::constant(rel.c.clone()) {
        return Err(Error::InvalidRelation);
    }
    let exp =
        |x: &BigInt| -> Result<u64> { x.abs().try_into().map_err(|_| Error::InvalidRelation) };
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (i, a) in rel.a.iter().enumerate() {
        if a.is_positive() {
            positive.push((i + 1, exp(a)?));
        } else if a.is_negative() {
            negative.push((i + 1, exp(a)?));
        }
    }
    Ok(MonomialIdentity {
        positive,
        negative,
        c: rel.c.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentBasis {
    /// Polynomials without constant term.
    pub basis: Vec<PolyQ>,
    /// `lambda[i][j]`: coefficient of `basis[j]` in `g_i`.
    #[serde(with = "bigint_matrix")]
    pub lambda: Vec<Vec<BigInt>>,
    #[serde(with = "rational_vec")]
    pub c: Vec<Rational>,
}

impl ExponentBasis {
    /// `sum_j lambda[i][j] basis[j]`, i.e. `g_i` without its constant.
    pub fn reduced(&self, i: usize) -> PolyQ {
        combine(&self.basis, &self.lambda[i])
    }

    pub fn reconstruct(&self, i: usize) -> PolyQ {
        self.reduced(i).add(&PolyQ::constant(self.c[i].clone()))
    }
}

mod bigint_matrix {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Basis of the span of the s-images, scaled so every `g_i` has integer
/// coordinates.
pub fn exponent_basis(gs: &[PolyQ]) -> ExponentBasis {
    let c: Vec<Rational> = gs.iter().map(|g| g.coeff(0)).collect();
    let d = ambient_degree(gs);
    let mut rows: Matrix = gs
        .iter()
        .map(|g| (1..=d).map(|k| g.coeff(k)).collect())
        .collect();
    let pivots = if d == 0 {
        Vec::new()
    } else {
        linalg::rref(&mut rows)
    };
    // RREF rows have a 1 at their pivot and 0 at the other pivots, so the
    // coordinates of g_i are its entries at the pivot columns.
    let coords: Vec<Vec<Rational>> = gs
        .iter()
        .map(|g| pivots.iter().map(|&p| g.coeff(p + 1)).collect())
        .collect();
    let mut basis = Vec::with_capacity(pivots.len());
    let mut lambda = vec![Vec::with_capacity(pivots.len()); gs.len()];
    for (j, row) in rows.iter().take(pivots.len()).enumerate() {
        let l = coords.iter().fold(BigInt::one(), |acc, v| {
            num_integer::Integer::lcm(&acc, v[j].denom())
        });
        let lr = Rational::from_integer(l.clone());
        let mut poly = vec![Rational::zero()];
        poly.extend(row.iter().map(|x| x / &lr));
        basis.push(PolyQ::new(poly));
        for (i, v) in coords.iter().enumerate() {
            lambda[i].push((&v[j] * &lr).to_integer());
        }
    }
    ExponentBasis { basis, lambda, c }
}

/// Outcome of the truncated power-series search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    IndependentAtBound,
    /// Multipliers `A_i` with `sum A_i e^{h_i} = 0` to the truncation order.
    DependentAtBound(Vec<PolyQ>),
}

impl OracleVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, OracleVerdict::IndependentAtBound)
    }
}

/// First `t` Taylor coefficients of `e^h`, from `(e^h)' = h' e^h`.
fn exp_series(h: &PolyQ, t: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); t];
    if t == 0 {
        return e;
    }
    e[0] = Rational::one();
    let d = h.degree().unwrap_or(0);
    for n in 1..t {
        let mut s = Rational::zero();
        for k in 1..=d.min(n) {
            s += rational::int(k as i64) * h.coeff(k) * &e[n - k];
        }
        e[n] = s / rational::int(n as i64);
    }
    e
}

fn exp_series_mod(h: &PolyQ, t: usize, p: u64) -> Option<Vec<u64>> {
    let d = h.degree().unwrap_or(0);
    let hk: Vec<u64> = (0..=d)
        .map(|k| linalg::rational_mod(&h.coeff(k), p))
        .collect::<Option<_>>()?;
    let mut e = vec![0u64; t];
    if t == 0 {
        return Some(e);
    }
    e[0] = 1;
    for n in 1..t {
        let mut s = 0u64;
        for k in 1..=d.min(n) {
            let term = linalg::mul_mod(linalg::mul_mod(k as u64 % p, hk[k], p), e[n - k], p);
            s = (s + term) % p;
        }
        e[n] = linalg::mul_mod(s, linalg::inv_mod(n as u64, p)?, p);
    }
    Some(e)
}

/// Rows are the coefficients of `z^0..z^{t-1}` in `sum_i A_i e^{h_i}`,
/// columns the coefficients of the `A_i` (degree at most `b`).
fn series_system<T: Clone + Default>(series: &[Vec<T>], b: usize, t: usize) -> Vec<Vec<T>> {
    (0..t)
        .map(|row| {
            series
                .iter()
                .flat_map(|e| {
                    (0..=b).map(move |k| {
                        if row >= k {
                            e[row - k].clone()
                        } else {
                            T::default()
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn dependent(ints: &[BigInt], b: usize) -> OracleVerdict {
    let polys = ints
        .chunks(b + 1)
        .map(|c| {
            PolyQ::new(
                c.iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect(),
            )
        })
        .collect();
    OracleVerdict::DependentAtBound(polys)
}

/// Checks `sum_{i,k} v_{ik} z^k e^{h_i} = 0 mod z^t` in integers. With `L`
/// a common denominator of the coefficients, `E_n = n! L^n [z^n] e^h` is an
/// integer, and row `r` times `r! L^r` reads
/// `sum v_{ik} E_i[r-k] r!/(r-k)! L^k`.
fn integer_null(hs: &[PolyQ], v: &[BigInt], b: usize, t: usize) -> bool {
    if v.iter().all(Zero::is_zero) {
        return false;
    }
    let l = hs
        .iter()
        .flat_map(|h| h.coeffs().iter())
        .fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
    let series: Vec<Vec<BigInt>> = hs.iter().map(|h| exp_series_scaled(h, &l, t)).collect();
    let lpow: Vec<BigInt> = (0..=b).map(|k| num_traits::pow(l.clone(), k)).collect();
    (0..t).all(|r| {
        let mut acc = BigInt::zero();
        for (i, e) in series.iter().enumerate() {
            // r!/(r-k)! for k = 0..=b
            let mut falling = BigInt::one();
            for k in 0..=b.min(r) {
                if k > 0 {
                    falling *= r + 1 - k;
                }
                let c = &v[i * (b + 1) + k];
                if !c.is_zero() {
                    acc += c * &e[r - k] * &falling * &lpow[k];
                }
            }
        }
        acc.is_zero()
    })
}

/// `E_n = n! L^n [z^n] e^h` for `n < t`, from
/// `E_n = sum_k k (h_k L^k) (n-1)!/(n-k)! E_{n-k}`.
fn exp_series_scaled(h: &PolyQ, l: &BigInt, t: usize) -> Vec<BigInt> {
    let d = h.degree().unwrap_or(0);
    let hk: Vec<BigInt> = (0..=d)
        .map(|k| (h.coeff(k) * Rational::from_integer(num_traits::pow(l.clone(), k))).to_integer())
        .collect();
    let mut e = vec![BigInt::zero(); t];
    if t == 0 {
        return e;
    }
    e[0] = BigInt::one();
    for n in 1..t {
        let mut s = BigInt::zero();
        // (n-1)!/(n-k)! built up as k grows
        let mut falling = BigInt::one();
        for k in 1..=d.min(n) {
            if k > 1 {
                falling *= n + 1 - k;
            }
            s += &hk[k] * k * &falling * &e[n - k];
        }
        e[n] = s;
    }
    e
}

/// A null vector of `system` by exact elimination, solving a short prefix of its rows first and
/// keeping the answer only if every row vanishes on it. An empty kernel on a
/// prefix means an empty kernel overall.
fn exact_kernel(system: &linalg::Matrix, unknowns: usize) -> Option<Vec<Rational>> {
    let full = system.len();
    for rows in [unknowns + 4, full] {
        let rows = rows.min(full);
        let v = linalg::kernel_vector(&system[..rows].to_vec(), unknowns)?;
        if null_on(&system[rows..], &v) {
            return Some(v);
        }
    }
    None
}

fn null_on(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    !v.iter().all(Zero::is_zero)
        && rows.iter().all(|r| {
            r.iter()
                .zip(v)
                .filter(|(_, x)| !x.is_zero())
                .map(|(a, x)| a * x)
                .sum::<Rational>()
                .is_zero()
        })
}

/// Searches for polynomials `A_i` of degree at most `b`, not all zero, with
/// `sum A_i e^{g_i} = 0` modulo `z^t`. The inputs are first reduced by
/// [`exponent_basis`] and their constants dropped (each `e^{c_i}` is a
/// nonzero scalar), so the system is rational.
pub fn series_dependence_oracle(gs: &[PolyQ], b: usize, t: usize) -> OracleVerdict {
    if gs.is_empty() {
        return OracleVerdict::IndependentAtBound;
    }
    let eb = exponent_basis(gs);
    let hs: Vec<PolyQ> = (0..gs.len()).map(|i| eb.reduced(i)).collect();
    let unknowns = hs.len() * (b + 1);
    let modular: Option<Vec<Vec<u64>>> = hs.iter().map(|h| exp_series_mod(h, t, P61)).collect();
    let mut lifted = None;
    if let Some(series) = modular {
        let system = series_system(&series, b, t);
        match linalg::kernel_vector_mod_p(&system, unknowns, P61) {
            None => return OracleVerdict::IndependentAtBound,
            Some(v) => {
                lifted = v
                    .iter()
                    .map(|&x| linalg::rational_reconstruct(x, P61))
                    .collect::<Option<Vec<Rational>>>();
            }
        }
    }
    if let Some(v) = lifted.map(|v| linalg::primitive(&v)) {
        if integer_null(&hs, &v, b, t) {
            return dependent(&v, b);
        }
    }
    let series: Vec<Vec<Rational>> = hs.iter().map(|h| exp_series(h, t)).collect();
    let system = series_system(&series, b, t);
    match exact_kernel(&system, unknowns) {
        None => OracleVerdict::IndependentAtBound,
        Some(v) => dependent(&linalg::primitive(&v), b),
    }
}

/// Exponents whose exponentials the series oracle must find dependent or
/// independent to confirm an algebraic verdict: for a relation `a`, the two
/// sides `sum_{a_j>0} a_j f_j` and `sum_{a_j<0} -a_j f_j`; for an independent
/// verdict, every `sum k_j f_j` with `0 <= k_j <= box_size`.
pub fn alg_oracle_exponents(fs: &[PolyQ], verdict: &IndepVerdict, box_size: u32) -> Vec<PolyQ> {
    match &verdict.witness {
        Some(DependenceWitness::Relation(rel)) => {
            let pos: Vec<BigInt> = rel
                .a
                .iter()
                .map(|x| {
                    if x.is_positive() {
                        x.clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect();
            let neg: Vec<BigInt> = rel
                .a
                .iter()
                .map(|x| if x.is_negative() { -x } else { BigInt::zero() })
                .collect();
            vec![combine(fs, &pos), combine(fs, &neg)]
        }
        _ => {
            let mut out = vec![PolyQ::zero()];
            for f in fs {
                let mut next = Vec::with_capacity(out.len() * (box_size as usize + 1));
                for base in &out {
                    for k in 0..=box_size {
                        next.push(base.add(&f.scale(&rational::int(k as i64))));
                    }
                }
                out = next;
            }
            out
        }
    }
}

/// `P(F(x, y))`, which vanishes wherever `F(x, y)` is a root of `P`.
pub fn burger_annihilator(p: &PolyQ, f: &BivarPolyQ) -> Result<BivarPolyQ> {
    if p.is_zero() {
        return Err(Error::ZeroP);
    }
    if f.is_constant() {
        return Err(Error::ConstantF);
    }
    Ok(f.compose_into(p))
}
