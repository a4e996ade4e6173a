//! Exact linear algebra over the rationals, plus a rank test modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns. Zero rows
/// end up at the bottom.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

/// A nonzero null vector of `m` (`cols` columns), from the first free column
/// of the reduced echelon form; `None` when the columns are independent.
pub fn kernel_vector(m: &Matrix, cols: usize) -> Option<Vec<Rational>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -r[row][free].clone();
    }
    Some(v)
}

/// Scales a nonzero rational vector to coprime integers whose first nonzero
/// entry is positive.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// The Mersenne prime `2^61 - 1`.
pub const P61: u64 = (1 << 61) - 1;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| pow_mod(a, p - 2, p))
}

/// `x mod p`, or `None` if `p` divides the denominator.
pub fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n: u64 = x
        .numer()
        .mod_floor(&pb)
        .try_into()
        .expect("reduced below p");
    let d: u64 = x
        .denom()
        .mod_floor(&pb)
        .try_into()
        .expect("reduced below p");
    Some(mul_mod(n, inv_mod(d, p)?, p))
}

/// Rank over `Z/p`. Never exceeds the rank over the rationals of any matrix
/// it is the reduction of.
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p).expect("nonzero pivot");
        for i in r + 1..rows {
            if a[i][c] != 0 {
                let f = mul_mod(a[i][c], inv, p);
                for j in c..cols {
                    let d = mul_mod(f, a[r][j], p);
                    a[i][j] = (a[i][j] + p - d) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// A null vector over `Z/p` from the first free column of the reduced
/// echelon form, or `None` when the columns are independent mod `p`.
pub fn kernel_vector_mod_p(m: &[Vec<u64>], cols: usize, p: u64) -> Option<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    let d = mul_mod(f, a[r][j], p);
                    a[i][j] = (a[i][j] + p - d) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0u64; cols];
    v[free] = 1;
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = (p - a[row][free]) % p;
    }
    Some(v)
}

/// The rational `n/d` with `|n|, d <= sqrt(p/2)` congruent to `x` mod `p`,
/// if there is one (Wang's reconstruction).
pub fn rational_reconstruct(x: u64, p: u64) -> Option<Rational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::new(BigInt::from(n), BigInt::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
            .collect()
    }

    #[test]
    fn echelon_and_kernel() {
        let a = m(&[&[1, 1, 0], &[1, -1, 1]]);
        let v = kernel_vector(&a, 3).unwrap();
        assert_eq!(
            primitive(&v),
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(-2)]
        );
        assert_eq!(rank(&a), 2);
        assert!(kernel_vector(&m(&[&[1, 0], &[0, 1]]), 2).is_none());
        assert_eq!(
            primitive(&[rat(-1, 2), rat(1, 3)]),
            vec![BigInt::from(3), BigInt::from(-2)]
        );
    }

    #[test]
    fn modular_rank_matches_exact() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let am: Vec<Vec<u64>> = a
            .iter()
            .map(|r| r.iter().map(|x| rational_mod(x, P61).unwrap()).collect())
            .collect();
        assert_eq!(rank_mod_p(&am, P61), rank(&a));
        assert_eq!(rational_mod(&rat(1, 2), 7), Some(4));
        assert_eq!(rational_mod(&rat(1, 7), 7), None);
        assert_eq!(rational_mod(&rat(-1, 1), 7), Some(6));
    }

    #[test]
    fn modular_kernel_lifts() {
        let a = m(&[&[1, 1, 0], &[1, -1, 1]]);
        let am: Vec<Vec<u64>> = a
            .iter()
            .map(|r| r.iter().map(|x| rational_mod(x, P61).unwrap()).collect())
            .collect();
        let v = kernel_vector_mod_p(&am, 3, P61).unwrap();
        let lifted: Vec<Rational> = v
            .iter()
            .map(|&x| rational_reconstruct(x, P61).unwrap())
            .collect();
        assert_eq!(lifted, kernel_vector(&a, 3).unwrap());
        for x in [rat(-3, 7), rat(12345, 678), rat(0, 1)] {
            let r = rational_mod(&x, P61).unwrap();
            assert_eq!(rational_reconstruct(r, P61), Some(x));
        }
    }
}
