//! LLL reduction driven by a Gram matrix.
//!
//! The reduction never sees basis vectors, only inner products, so the same
//! routine serves exact rational Grams and floating-point search iterates.
//! The exact entry point runs a floating pass first and then finishes in
//! rational arithmetic, which certifies the Lovász condition.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, Zero};

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::signrev::PosDefGram;

pub const DEFAULT_DELTA: f64 = 0.99;

pub(crate) trait Scalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Int: Clone + Zero + One;
    /// Nearest integer, or `None` when it is not representable.
    fn nearest(&self) -> Option<Self::Int>;
    fn from_int(i: &Self::Int) -> Self;
    fn abs_val(&self) -> Self;
    fn half() -> Self;
    fn int_mul_sub(a: &Self::Int, q: &Self::Int, b: &Self::Int) -> Option<Self::Int>;
}

impl Scalar for f64 {
    type Int = i64;
    fn nearest(&self) -> Option<i64> {
        let r = Float::round(*self);
        (r.is_finite() && r.abs() < 9.0e15).then_some(r as i64)
    }
    fn from_int(i: &i64) -> f64 {
        *i as f64
    }
    fn abs_val(&self) -> f64 {
        Float::abs(*self)
    }
    fn half() -> f64 {
        0.5
    }
    fn int_mul_sub(a: &i64, q: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(q.checked_mul(*b)?)
    }
}

impl Scalar for Rat {
    type Int = BigInt;
    fn nearest(&self) -> Option<BigInt> {
        Some((self + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer())
    }
    fn from_int(i: &BigInt) -> Rat {
        arith::int_rat(i)
    }
    fn abs_val(&self) -> Rat {
        self.abs()
    }
    fn half() -> Rat {
        Rat::new(BigInt::one(), BigInt::from(2))
    }
    fn int_mul_sub(a: &BigInt, q: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - q * b)
    }
}

/// Result of a Gram-matrix LLL run. Row `k` of `basis` holds the
/// coordinates of the `k`-th reduced vector in the input basis.
pub(crate) struct Reduced<T: Scalar> {
    pub basis: Vec<Vec<T::Int>>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub gram: Vec<Vec<T>>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub swaps: usize,
}

/// Gram-based LLL with incremental Gram–Schmidt data. Returns `None` when a
/// Gram–Schmidt norm is not positive or a coefficient leaves the integer
/// range of `T::Int`.
pub(crate) fn reduce_gram<T: Scalar>(gram: Vec<Vec<T>>, delta: &T) -> Option<Reduced<T>> {
    let n = gram.len();
    let mut a = gram;
    let mut basis: Vec<Vec<T::Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::Int::one() } else { T::Int::zero() }).collect())
        .collect();
    let mut mu = vec![vec![T::zero(); n]; n];
    let mut bstar = vec![T::zero(); n];
    let mut swaps = 0usize;
    if n == 0 {
        return Some(Reduced { basis, gram: a, swaps });
    }
    bstar[0] = a[0][0].clone();
    if !(bstar[0] > T::zero()) {
        return None;
    }

    // b_k <- b_k - q b_l, keeping the Gram matrix and mu in step
    let size_reduce = |k: usize,
                       l: usize,
                       a: &mut Vec<Vec<T>>,
                       basis: &mut Vec<Vec<T::Int>>,
                       mu: &mut Vec<Vec<T>>|
     -> Option<()> {
        if !(mu[k][l].abs_val() > T::half()) {
            return Some(());
        }
        let q = mu[k][l].nearest()?;
        let qt = T::from_int(&q);
        for j in 0..n {
            let updated = T::Int::clone(&basis[k][j]);
            basis[k][j] = T::int_mul_sub(&updated, &q, &basis[l][j])?;
        }
        let akk = a[k][k].clone() - qt.clone() * a[k][l].clone() - qt.clone() * a[l][k].clone()
            + qt.clone() * qt.clone() * a[l][l].clone();
        for i in 0..n {
            if i != k {
                let v = a[k][i].clone() - qt.clone() * a[l][i].clone();
                a[k][i] = v.clone();
                a[i][k] = v;
            }
        }
        a[k][k] = akk;
        mu[k][l] = mu[k][l].clone() - qt.clone();
        for i in 0..l {
            mu[k][i] = mu[k][i].clone() - qt.clone() * mu[l][i].clone();
        }
        Some(())
    };

    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..k {
                let mut s = a[k][j].clone();
                for i in 0..j {
                    s = s - mu[j][i].clone() * mu[k][i].clone() * bstar[i].clone();
                }
                mu[k][j] = s / bstar[j].clone();
            }
            let mut b = a[k][k].clone();
            for j in 0..k {
                b = b - mu[k][j].clone() * mu[k][j].clone() * bstar[j].clone();
            }
            if !(b > T::zero()) {
                return None;
            }
            bstar[k] = b;
        }
        size_reduce(k, k - 1, &mut a, &mut basis, &mut mu)?;
        let m = mu[k][k - 1].clone();
        if bstar[k] < (delta.clone() - m.clone() * m.clone()) * bstar[k - 1].clone() {
            swaps += 1;
            basis.swap(k, k - 1);
            a.swap(k, k - 1);
            for row in a.iter_mut() {
                row.swap(k, k - 1);
            }
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let b = bstar[k].clone() + m.clone() * m.clone() * bstar[k - 1].clone();
            if !(b > T::zero()) {
                return None;
            }
            mu[k][k - 1] = m.clone() * bstar[k - 1].clone() / b.clone();
            bstar[k] = bstar[k - 1].clone() * bstar[k].clone() / b.clone();
            bstar[k - 1] = b;
            for i in k + 1..=kmax {
                let t = mu[i][k].clone();
                mu[i][k] = mu[i][k - 1].clone() - m.clone() * t.clone();
                mu[i][k - 1] = t + mu[k][k - 1].clone() * mu[i][k].clone();
            }
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(k, l, &mut a, &mut basis, &mut mu)?;
            }
            k += 1;
        }
    }
    Some(Reduced { basis, gram: a, swaps })
}

/// Floating-point reduction of a row-major Gram matrix. Returns the
/// transform (rows are reduced vectors) or `None` on numerical breakdown.
pub fn lll_f64(gram: &[f64], n: usize, delta: f64) -> Option<Vec<Vec<i64>>> {
    let rows: Vec<Vec<f64>> = (0..n).map(|i| gram[i * n..(i + 1) * n].to_vec()).collect();
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return None;
    }
    reduce_gram(rows, &delta).map(|r| r.basis)
}

/// Output of [`lll_reduce`]: `reduced == Uᵀ G U`, `det U = ±1`.
#[derive(Debug, Clone)]
pub struct LllOutput {
    /// `U` with the reduced basis vectors as columns.
    pub transform: Vec<Vec<BigInt>>,
    pub reduced: PosDefGram,
}

fn transpose<T: Clone>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = rows.len();
    (0..n).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

/// Exact LLL reduction with parameter `delta ∈ (1/4, 1)`.
pub fn lll_reduce(g: &PosDefGram, delta: f64) -> Result<LllOutput> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::InvalidConfig("LLL delta must lie in (1/4, 1)"));
    }
    let n = g.rank();
    let mut transform: Vec<Vec<BigInt>> = arith::identity(n)
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer()).collect())
        .collect();
    let mut current = g.clone();
    if let Some(rows) = lll_f64(&g.to_f64(), n, delta) {
        let u: Vec<Vec<BigInt>> = transpose(&rows).iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        current = g.congruent(&u)?;
        transform = u;
    }
    let exact_delta = Rat::from_float(delta).ok_or(Error::InvalidConfig("LLL delta must be finite"))?;
    let rows: Vec<Vec<Rat>> = current.entries().chunks(n).map(<[Rat]>::to_vec).collect();
    let out = reduce_gram(rows, &exact_delta).ok_or(Error::NotPositiveDefinite)?;
    let polish = transpose(&out.basis);
    transform = mat_mul(&transform, &polish);
    let reduced = g.congruent(&transform)?;
    Ok(LllOutput { transform, reduced })
}

/// Exact Lovász and size-reduction check on a Gram matrix.
pub fn is_lll_reduced(g: &PosDefGram, delta: &Rat) -> bool {
    let n = g.rank();
    let a: Vec<Vec<Rat>> = g.entries().chunks(n).map(<[Rat]>::to_vec).collect();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut bstar = vec![Rat::zero(); n];
    for k in 0..n {
        for j in 0..k {
            let mut s = a[k][j].clone();
            for i in 0..j {
                s -= &mu[j][i] * &mu[k][i] * &bstar[i];
            }
            mu[k][j] = s / &bstar[j];
        }
        let mut b = a[k][k].clone();
        for j in 0..k {
            b -= &mu[k][j] * &mu[k][j] * &bstar[j];
        }
        if !b.is_positive() {
            return false;
        }
        bstar[k] = b;
    }
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let size_reduced = (0..n).all(|k| (0..k).all(|j| mu[k][j].abs() <= half));
    let lovasz = (1..n).all(|k| bstar[k] >= (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1]);
    size_reduced && lovasz
}

#[cfg(test)]
fn unimodular_det(u: &[Vec<BigInt>]) -> BigInt {
    arith::bareiss_det(u)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{build_e8, E8Sign};

    fn delta() -> Rat {
        Rat::from_float(DEFAULT_DELTA).unwrap()
    }

    #[test]
    fn identity_stays_identity() {
        let g = PosDefGram::from_i64_rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        let out = lll_reduce(&g, DEFAULT_DELTA).unwrap();
        assert_eq!(out.reduced, g);
        assert!(unimodular_det(&out.transform).abs().is_one());
    }

    #[test]
    fn skewed_plane_is_reduced() {
        let g = PosDefGram::from_i64_rows(&[[5, 3], [3, 2]]).unwrap();
        let out = lll_reduce(&g, DEFAULT_DELTA).unwrap();
        assert!(unimodular_det(&out.transform).abs().is_one());
        assert!(is_lll_reduced(&out.reduced, &delta()));
        let diag: Vec<Rat> = (0..2).map(|i| out.reduced.entry(i, i)).collect();
        assert!(diag.iter().all(|d| *d < arith::rat(2)));
        // det 1 is preserved
        let det = out.reduced.entry(0, 0) * out.reduced.entry(1, 1) - out.reduced.entry(0, 1) * out.reduced.entry(1, 0);
        assert_eq!(det, arith::rat(1));
    }

    #[test]
    fn e8_reduced_minimum_diagonal_is_two() {
        let g = PosDefGram::from_gram(&build_e8(E8Sign::Positive)).unwrap();
        let out = lll_reduce(&g, DEFAULT_DELTA).unwrap();
        let min = (0..8).map(|i| out.reduced.entry(i, i)).min().unwrap();
        assert_eq!(min, arith::rat(2));
        assert!(is_lll_reduced(&out.reduced, &delta()));
    }

    #[test]
    fn rejects_bad_delta() {
        let g = PosDefGram::from_i64_rows(&[[1]]).unwrap();
        assert!(lll_reduce(&g, 0.2).is_err());
        assert!(lll_reduce(&g, 1.0).is_err());
    }

    #[test]
    fn exact_pass_alone_reduces() {
        let rows = vec![vec![arith::rat(101), arith::rat(60)], vec![arith::rat(60), arith::rat(36)]];
        let out = reduce_gram(rows, &delta()).unwrap();
        assert!(out.swaps > 0);
        let n = 2;
        let flat: Vec<Rat> = out.gram.iter().flatten().cloned().collect();
        let g = PosDefGram::new(n, &flat).unwrap();
        assert!(is_lll_reduced(&g, &delta()));
    }
}
