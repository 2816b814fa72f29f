//! Orthogonal complements of a lattice vector and the sweep over
//! `q_{n,1}(v) = -1`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::quadform::{build_diagonal, invariants, GramMatrix};
use crate::signrev::PosDefGram;
use crate::svp::shortest_vector;

use super::SearchConfig;

/// Integer basis of `{w : Q̄(w, v) = 0}` (as columns) via unimodular column
/// operations that reduce the row `vᵀQ̄` to `(g, 0, …, 0)`.
fn kernel_basis(row: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = row.len();
    let mut r = row.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|j| (0..m).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for j in 1..m {
        if r[j].is_zero() {
            continue;
        }
        if r[0].is_zero() {
            r.swap(0, j);
            u.swap(0, j);
            continue;
        }
        let e = r[0].extended_gcd(&r[j]);
        let (a, b) = (&r[0] / &e.gcd, &r[j] / &e.gcd);
        let c0: Vec<BigInt> = u[0].iter().zip(&u[j]).map(|(p, q)| &e.x * p + &e.y * q).collect();
        let cj: Vec<BigInt> = u[0].iter().zip(&u[j]).map(|(p, q)| &a * q - &b * p).collect();
        u[0] = c0;
        u[j] = cj;
        r[0] = e.gcd;
        r[j] = BigInt::zero();
    }
    u.split_off(1)
}

/// Gram matrix of `v^⊥` in `Q̄`. When `Q̄` is unimodular and `Q̄(v, v) = -1`
/// the result is checked to be unimodular too.
pub fn perp_lattice(qbar: &GramMatrix, v: &[BigInt]) -> Result<GramMatrix> {
    let n = qbar.rank();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let sq = qbar.pair(v, v);
    if sq.is_zero() {
        return Err(Error::DegenerateComplement);
    }
    if n == 1 {
        return Err(Error::RankTooSmall { rank: 1, min: 2 });
    }
    let cols = kernel_basis(&qbar.apply(v));
    let mut entries = Vec::with_capacity((n - 1) * (n - 1));
    for a in &cols {
        for b in &cols {
            entries.push(qbar.pair(a, b));
        }
    }
    let perp = GramMatrix::new(n - 1, entries)?;
    if sq == -BigInt::one() && invariants(qbar).unimodular {
        let det = perp.determinant();
        if det.abs() != BigInt::one() {
            return Err(Error::Invariant(alloc::format!("complement of a (-1)-vector has determinant {det}")));
        }
    }
    Ok(perp)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerpSearchResult {
    /// Representative with `x_1 ≥ … ≥ x_n ≥ 0` and positive last coordinate.
    pub v: Vec<BigInt>,
    pub perp_min: Rat,
    pub perp: GramMatrix,
    pub candidates: usize,
}

/// Sweeps `v = (x, t)` in `I_{n,1}` with `|x|² = t² - 1` and all coordinates
/// at most `height_bound`, maximizing the minimum of `v^⊥`. Sign changes
/// and permutations of `x` are isometries, so only sorted nonnegative `x`
/// are visited; ties go to the lexicographically smallest such `v`.
pub fn perp_search(n: usize, cfg: &SearchConfig) -> Result<PerpSearchResult> {
    if n == 0 {
        return Err(Error::RankTooSmall { rank: 1, min: 2 });
    }
    cfg.validate()?;
    let q = build_diagonal(n, 1)?;
    let h = i64::from(cfg.height_bound);
    let mut best: Option<PerpSearchResult> = None;
    let mut candidates = 0;
    for t in 1..=h {
        let mut x = vec![0i64; n];
        sorted_vectors(&mut x, 0, h, t * t - 1, &mut |x| {
            let mut v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            v.push(BigInt::from(t));
            candidates += 1;
            let perp = perp_lattice(&q, &v)?;
            let perp_min = shortest_vector(&PosDefGram::from_gram(&perp)?)?.min_norm_sq;
            let better = match &best {
                None => true,
                Some(b) => perp_min > b.perp_min || (perp_min == b.perp_min && v < b.v),
            };
            if better {
                best = Some(PerpSearchResult { v, perp_min, perp, candidates: 0 });
            }
            Ok(())
        })?;
    }
    let mut best = best.expect("v = e_{n+1} is always visited");
    best.candidates = candidates;
    Ok(best)
}

/// Visits nonincreasing nonnegative vectors with `Σ x_i² = target`.
fn sorted_vectors(
    x: &mut [i64],
    i: usize,
    cap: i64,
    target: i64,
    visit: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if i == x.len() {
        return if target == 0 { visit(x) } else { Ok(()) };
    }
    let remaining = (x.len() - i) as i64;
    for c in (0..=cap).rev() {
        if c * c > target {
            continue;
        }
        if c * c * remaining < target {
            break;
        }
        x[i] = c;
        sorted_vectors(x, i + 1, c, target - c * c, visit)?;
    }
    x[i] = 0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::quadform::Parity;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn coordinate_complement() {
        for n in 1..=9 {
            let q = build_diagonal(n, 1).unwrap();
            let mut v = vec![0; n + 1];
            v[n] = 1;
            let p = perp_lattice(&q, &big(&v)).unwrap();
            assert_eq!(p, build_diagonal(n, 0).unwrap());
        }
    }

    #[test]
    fn complement_in_i31() {
        let q = build_diagonal(3, 1).unwrap();
        let v = big(&[1, 1, 1, 2]);
        let p = perp_lattice(&q, &v).unwrap();
        let inv = invariants(&p);
        assert_eq!((inv.rank, inv.b_plus, inv.unimodular), (3, 3, true));
        let m = shortest_vector(&PosDefGram::from_gram(&p).unwrap()).unwrap();
        assert_eq!(m.min_norm_sq, rat(1));
    }

    #[test]
    fn kernel_is_orthogonal_and_saturated() {
        let row = big(&[6, 10, 15, 0]);
        let k = kernel_basis(&row);
        assert_eq!(k.len(), 3);
        for c in &k {
            let dot: BigInt = c.iter().zip(&row).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn errors() {
        let q = build_diagonal(1, 1).unwrap();
        assert_eq!(perp_lattice(&q, &big(&[1, 1])), Err(Error::DegenerateComplement));
        assert_eq!(perp_lattice(&q, &big(&[0, 0])), Err(Error::ZeroVector));
        assert!(matches!(perp_lattice(&q, &big(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn search_small_ranks() {
        let cfg = SearchConfig { height_bound: 3, ..SearchConfig::default() };
        for n in [1, 3] {
            assert_eq!(perp_search(n, &cfg).unwrap().perp_min, rat(1));
        }
        let r = perp_search(8, &cfg).unwrap();
        assert_eq!(r.v, big(&[1, 1, 1, 1, 1, 1, 1, 1, 3]));
        assert_eq!(r.perp_min, rat(2));
        let inv = invariants(&r.perp);
        assert_eq!((inv.rank, inv.parity, inv.unimodular), (8, Parity::Even, true));
    }
}
