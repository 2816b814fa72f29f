//! Hyperboloid model of the space of negative lines.
//!
//! A rational congruence `Pᵀ Q̄ P = diag(d)` followed by the real scaling
//! `z_i = √|d_i| · y_i` turns `Q̄` into the Minkowski form with a single
//! time coordinate. Negative lines are then points of the upper sheet
//! `⟨z, z⟩ = -1`, and search moves along its geodesics.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadform::GramMatrix;

#[derive(Debug, Clone)]
pub struct HyperboloidChart {
    dim: usize,
    time: usize,
    /// `P`, columns are the diagonalizing basis.
    basis: Vec<Vec<f64>>,
    basis_inv: Vec<Vec<f64>>,
    scale: Vec<f64>,
}

impl HyperboloidChart {
    /// Requires `qbar` nondegenerate with exactly one negative direction.
    pub fn new(qbar: &GramMatrix) -> Result<Self> {
        let q = qbar.to_rational();
        let diag = arith::diagonalize(&q);
        let (pos, neg, zero) = diag.counts();
        if zero > 0 {
            return Err(Error::Degenerate);
        }
        if neg != 1 {
            return Err(Error::UnsupportedSignature { b_plus: pos, b_minus: neg });
        }
        let inv = arith::inverse(&diag.basis).ok_or(Error::Degenerate)?;
        let to_f = |m: &[Vec<arith::Rat>]| -> Vec<Vec<f64>> {
            m.iter().map(|r| r.iter().map(arith::rat_to_f64).collect()).collect()
        };
        let time = diag.diagonal.iter().position(|d| d < &arith::rat(0)).expect("one negative entry");
        let scale = diag.diagonal.iter().map(|d| Float::sqrt(Float::abs(arith::rat_to_f64(d)))).collect();
        Ok(HyperboloidChart { dim: qbar.rank(), time, basis: to_f(&diag.basis), basis_inv: to_f(&inv), scale })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn minkowski(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            if i == self.time {
                s -= a[i] * b[i];
            } else {
                s += a[i] * b[i];
            }
        }
        s
    }

    /// Projects onto the upper sheet; `None` outside the open negative cone.
    pub fn retract(&self, z: &[f64]) -> Option<Vec<f64>> {
        let sq = self.minkowski(z, z);
        if !(sq < 0.0) || !sq.is_finite() {
            return None;
        }
        let mut s = 1.0 / Float::sqrt(-sq);
        if z[self.time] < 0.0 {
            s = -s;
        }
        Some(z.iter().map(|x| x * s).collect())
    }

    /// Sheet point of the line through `v` (lattice coordinates).
    pub fn to_sheet(&self, v: &[f64]) -> Option<Vec<f64>> {
        let z: Vec<f64> = (0..self.dim)
            .map(|i| self.scale[i] * (0..self.dim).map(|j| self.basis_inv[i][j] * v[j]).sum::<f64>())
            .collect();
        self.retract(&z)
    }

    /// Lattice-coordinate representative of a sheet point, scaled so its
    /// largest coordinate has magnitude 1.
    pub fn to_line(&self, z: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = (0..self.dim).map(|i| z[i] / self.scale[i]).collect();
        let v: Vec<f64> = (0..self.dim).map(|i| (0..self.dim).map(|j| self.basis[i][j] * y[j]).sum()).collect();
        let m = v.iter().fold(0.0f64, |m, x| m.max(Float::abs(*x)));
        if m > 0.0 {
            v.iter().map(|x| x / m).collect()
        } else {
            v
        }
    }

    /// `(√(1+|u|²), u)` with `u` standard normal in the spatial coordinates.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut z = vec![0.0; self.dim];
        let mut norm = 0.0;
        for (i, zi) in z.iter_mut().enumerate() {
            if i != self.time {
                let u: f64 = rng.sample(StandardNormal);
                *zi = u;
                norm += u * u;
            }
        }
        z[self.time] = Float::sqrt(1.0 + norm);
        z
    }

    /// Unit tangent vector at `z`, Gaussian direction projected onto the
    /// tangent space.
    pub fn random_tangent<R: Rng + ?Sized>(&self, z: &[f64], rng: &mut R) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
            let c = self.minkowski(&g, z);
            let u: Vec<f64> = g.iter().zip(z).map(|(gi, zi)| gi + c * zi).collect();
            let len = self.minkowski(&u, &u);
            if len > 1e-24 {
                let s = 1.0 / Float::sqrt(len);
                return u.iter().map(|x| x * s).collect();
            }
        }
    }

    /// Point at distance `t` along the geodesic from `z` in unit direction `u`.
    pub fn geodesic(&self, z: &[f64], u: &[f64], t: f64) -> Option<Vec<f64>> {
        if t == 0.0 {
            return Some(z.to_vec());
        }
        let (c, s) = (libm::cosh(t), libm::sinh(t));
        let p: Vec<f64> = z.iter().zip(u).map(|(a, b)| c * a + s * b).collect();
        self.retract(&p)
    }

    /// Hyperbolic distance between two sheet points.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let c = -self.minkowski(a, b);
        libm::acosh(c.max(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{build_diagonal, build_e8, build_h, direct_sum, negate, E8Sign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lattice_square(q: &GramMatrix, v: &[f64]) -> f64 {
        let f = q.to_f64();
        let n = v.len();
        (0..n).map(|i| (0..n).map(|j| v[i] * f[i * n + j] * v[j]).sum::<f64>()).sum()
    }

    #[test]
    fn sheet_points_are_negative_lines() {
        let forms =
            [build_diagonal(3, 1).unwrap(), build_h(), negate(&direct_sum(&build_h(), &build_e8(E8Sign::Negative)))];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in &forms {
            let chart = HyperboloidChart::new(q).unwrap();
            for _ in 0..20 {
                let z = chart.random_point(&mut rng);
                assert!((chart.minkowski(&z, &z) + 1.0).abs() < 1e-9);
                let v = chart.to_line(&z);
                assert!(lattice_square(q, &v) < 0.0);
                let back = chart.to_sheet(&v).unwrap();
                assert!(chart.distance(&z, &back) < 1e-6);
            }
        }
    }

    #[test]
    fn geodesic_steps_have_requested_length() {
        let q = build_diagonal(4, 1).unwrap();
        let chart = HyperboloidChart::new(&q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = chart.random_point(&mut rng);
        let u = chart.random_tangent(&z, &mut rng);
        assert!(chart.minkowski(&z, &u).abs() < 1e-9);
        for t in [1e-3, 0.1, 0.7] {
            let w = chart.geodesic(&z, &u, t).unwrap();
            assert!((chart.distance(&z, &w) - t).abs() < 1e-6);
        }
        assert_eq!(chart.geodesic(&z, &u, 0.0).unwrap(), z);
    }

    #[test]
    fn rejects_wrong_signature() {
        assert!(HyperboloidChart::new(&build_diagonal(2, 2).unwrap()).is_err());
        assert!(HyperboloidChart::new(&build_diagonal(3, 0).unwrap()).is_err());
    }
}
