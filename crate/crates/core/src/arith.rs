//! Exact rational linear algebra used across the crate.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn int_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Square matrix of exact rationals, row-major nested vectors.
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// `xᵀ A y` for a rational matrix and integer vectors.
pub fn bilinear_int(a: &[Vec<Rat>], x: &[BigInt], y: &[BigInt]) -> Rat {
    let mut acc = Rat::zero();
    for (i, row) in a.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let mut inner = Rat::zero();
        for (j, entry) in row.iter().enumerate() {
            if !y[j].is_zero() {
                inner += entry * int_rat(&y[j]);
            }
        }
        acc += inner * int_rat(&x[i]);
    }
    acc
}

/// `xᵀ A y` with every operand rational.
pub fn bilinear(a: &[Vec<Rat>], x: &[Rat], y: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, row) in a.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let mut inner = Rat::zero();
        for (j, entry) in row.iter().enumerate() {
            if !y[j].is_zero() {
                inner += entry * &y[j];
            }
        }
        acc += inner * &x[i];
    }
    acc
}

pub fn mat_vec(a: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Rat::zero(), |acc, (m, v)| acc + m * v))
        .collect()
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse by Gauss–Jordan elimination; `None` when singular.
pub fn inverse(m: &[Vec<Rat>]) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let da = &f * &a[col][j];
                a[r][j] -= da;
                let di = &f * &inv[col][j];
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

/// Congruence diagonalization `Pᵀ A P = diag(d)` of a symmetric rational
/// matrix. Columns of `basis` are the new basis vectors.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub basis: RatMatrix,
    pub diagonal: Vec<Rat>,
}

impl Diagonalization {
    pub fn counts(&self) -> (usize, usize, usize) {
        let pos = self.diagonal.iter().filter(|d| d.is_positive()).count();
        let neg = self.diagonal.iter().filter(|d| d.is_negative()).count();
        (pos, neg, self.diagonal.len() - pos - neg)
    }
}

/// Symmetric elimination with symmetric pivoting. When every remaining
/// diagonal entry vanishes but an off-diagonal one does not, the hyperbolic
/// block `[[0,a],[a,0]]` is split by `e_i ± e_j` into `diag(2a, -2a)`.
pub fn diagonalize(m: &[Vec<Rat>]) -> Diagonalization {
    let n = m.len();
    let mut a: RatMatrix = m.to_vec();
    let mut p = identity(n);
    let mut diagonal = vec![Rat::zero(); n];

    // basis change e_j <- e_j + f e_k, applied as a congruence
    fn add_multiple(a: &mut RatMatrix, p: &mut RatMatrix, j: usize, k: usize, f: &Rat) {
        let n = a.len();
        for l in 0..n {
            let t = f * &a[k][l];
            a[j][l] += t;
        }
        for l in 0..n {
            let t = f * &a[l][k];
            a[l][j] += t;
        }
        for row in p.iter_mut() {
            let t = f * &row[k];
            row[j] += t;
        }
    }
    fn swap(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, k: usize) {
        if i == k {
            return;
        }
        a.swap(i, k);
        for row in a.iter_mut() {
            row.swap(i, k);
        }
        for row in p.iter_mut() {
            row.swap(i, k);
        }
    }

    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap(&mut a, &mut p, i, k);
            let pivot = a[k][k].clone();
            for j in k + 1..n {
                if a[j][k].is_zero() {
                    continue;
                }
                let f = -(&a[j][k] / &pivot);
                add_multiple(&mut a, &mut p, j, k, &f);
            }
            diagonal[k] = pivot;
            k += 1;
            continue;
        }
        let pair = (k..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        let Some((i, j)) = pair else {
            // remaining block is identically zero
            break;
        };
        swap(&mut a, &mut p, i, k);
        let j = if j == k { i } else { j };
        swap(&mut a, &mut p, j, k + 1);
        // (e_k, e_{k+1}) -> (e_k + e_{k+1}, e_k - e_{k+1})
        add_multiple(&mut a, &mut p, k, k + 1, &Rat::one());
        add_multiple(&mut a, &mut p, k + 1, k, &(rat(-1) / rat(2)));
        let flip = rat(-2);
        for l in 0..n {
            a[k + 1][l] *= &flip;
        }
        for l in 0..n {
            a[l][k + 1] *= &flip;
        }
        for row in p.iter_mut() {
            row[k + 1] *= &flip;
        }
    }
    Diagonalization { basis: p, diagonal }
}

/// Clears denominators, divides by the content and makes the first nonzero
/// coordinate positive. `None` for the zero vector.
pub fn canonical_primitive(v: &[Rat]) -> Option<Vec<BigInt>> {
    let first = v.iter().position(|x| !x.is_zero())?;
    let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints[first].is_negative() { -BigInt::one() } else { BigInt::one() };
    let unit = sign * content;
    Some(ints.iter().map(|x| x / &unit).collect())
}

pub fn canonical_primitive_int(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let r: Vec<Rat> = v.iter().map(int_rat).collect();
    canonical_primitive(&r)
}

/// Last continued-fraction convergent of `x` whose denominator does not
/// exceed `max_den`. The expansion runs on the exact binary value of `x`.
pub fn cf_round(x: f64, max_den: u64) -> Rat {
    let Some(exact) = Rat::from_float(x) else {
        return Rat::zero();
    };
    let cap = BigInt::from(max_den);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = exact;
    loop {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > cap {
            break;
        }
        h_prev = core::mem::replace(&mut h, h_next);
        k_prev = core::mem::replace(&mut k, k_next);
        let frac = &rest - int_rat(&a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    if k.is_zero() {
        // cap below 1: nothing representable beyond the integer part
        return Rat::from_integer(x_floor(x));
    }
    Rat::new(h, k)
}

fn x_floor(x: f64) -> BigInt {
    Rat::from_float(x).map(|r| r.floor().to_integer()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn rat_matrix(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = int_matrix(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(bareiss_det(&m), BigInt::from(4));
        let h = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(bareiss_det(&h), BigInt::from(-1));
        let singular = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(bareiss_det(&singular).is_zero());
    }

    #[test]
    fn diagonalize_hyperbolic_block() {
        let h = rat_matrix(&[&[0, 1], &[1, 0]]);
        let d = diagonalize(&h);
        assert_eq!(d.counts(), (1, 1, 0));
        // Pᵀ H P == diag(d)
        for i in 0..2 {
            for j in 0..2 {
                let col_i: Vec<Rat> = d.basis.iter().map(|r| r[i].clone()).collect();
                let col_j: Vec<Rat> = d.basis.iter().map(|r| r[j].clone()).collect();
                let expect = if i == j { d.diagonal[i].clone() } else { Rat::zero() };
                assert_eq!(bilinear(&h, &col_i, &col_j), expect);
            }
        }
    }

    #[test]
    fn diagonalize_degenerate() {
        let m = rat_matrix(&[&[1, 1], &[1, 1]]);
        assert_eq!(diagonalize(&m).counts(), (1, 0, 1));
    }

    #[test]
    fn canonical_primitive_normalizes() {
        let v = [Rat::new(BigInt::from(-2), BigInt::from(3)), rat(0), Rat::new(BigInt::from(4), BigInt::from(9))];
        let c = canonical_primitive(&v).unwrap();
        assert_eq!(c, [BigInt::from(3), BigInt::from(0), BigInt::from(-2)]);
        assert!(canonical_primitive(&[rat(0), rat(0)]).is_none());
    }

    #[test]
    fn cf_round_recovers_simple_fractions() {
        assert_eq!(cf_round(0.5, 1_000_000), Rat::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(cf_round(-1.0 / 3.0, 1_000_000), Rat::new(BigInt::from(-1), BigInt::from(3)));
        let pi = cf_round(core::f64::consts::PI, 1000);
        assert_eq!(pi, Rat::new(BigInt::from(355), BigInt::from(113)));
        assert_eq!(cf_round(7.0, 10), rat(7));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = rat_matrix(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, rat_matrix(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&rat_matrix(&[&[1, 2], &[2, 4]])).is_none());
    }
}
