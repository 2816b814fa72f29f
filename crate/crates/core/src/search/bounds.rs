//! Numerical checks of the universal ceiling and of continuity in the
//! line, plus the informational gap report.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_bigint::BigInt;
use num_traits::{Float, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::hyperboloid::HyperboloidChart;
use crate::quadform::{invariants, GramMatrix};
use crate::signrev::{orientation_normalize, PeriodLine};

use super::{confsys_exact, confsys_sq_f64, CsEstimate};

/// Scale of the integer grid random sheet points are rounded to.
const SAMPLE_GRID: f64 = 1e4;
const MAX_RESAMPLES: u32 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rank: usize,
    pub samples: u64,
    /// `(2/3) · rank`.
    pub ceiling: Rat,
    pub max_value_sq: Rat,
    /// `max_value_sq / ceiling`; below 1 when the bound holds.
    pub max_ratio: f64,
    pub argmax: PeriodLine,
    /// Rounded samples that fell outside the negative cone.
    pub resampled: u64,
}

fn ceiling(rank: usize) -> Rat {
    Rat::new(BigInt::from(2 * rank), BigInt::from(3))
}

/// Random sheet points rounded to the integer grid, as period lines.
fn sample_line(chart: &HyperboloidChart, qbar: &GramMatrix, rng: &mut ChaCha8Rng, resampled: &mut u64) -> Result<PeriodLine> {
    for _ in 0..MAX_RESAMPLES {
        let v = chart.to_line(&chart.random_point(rng));
        let ints: Vec<BigInt> = v.iter().map(|x| BigInt::from(Float::round(x * SAMPLE_GRID) as i64)).collect();
        if let Ok(line) = PeriodLine::from_ints(&ints) {
            if line.square(qbar).is_negative() {
                return Ok(line);
            }
        }
        *resampled += 1;
    }
    Err(Error::Invariant("could not sample a negative line".into()))
}

/// Checks `confsys² < (2/3) · rank` exactly on `samples` seeded random lines.
pub fn verify_universal_bound(q: &GramMatrix, samples: u64, seed: u64) -> Result<BoundReport> {
    if q.rank() < 2 {
        return Err(Error::RankTooSmall { rank: q.rank(), min: 2 });
    }
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be positive"));
    }
    let (qbar, _) = orientation_normalize(q)?;
    let inv = invariants(&qbar);
    if !inv.unimodular {
        return Err(Error::NotUnimodular { det: inv.determinant });
    }
    let chart = HyperboloidChart::new(&qbar)?;
    let ceil = ceiling(q.rank());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resampled = 0;
    let mut best: Option<(Rat, PeriodLine)> = None;
    for _ in 0..samples {
        let line = sample_line(&chart, &qbar, &mut rng, &mut resampled)?;
        let value_sq = confsys_exact(&qbar, &line)?;
        if value_sq >= ceil {
            return Err(Error::BoundViolation {
                line: line.coords().to_vec(),
                value_sq: alloc::format!("{value_sq}"),
                rank: q.rank(),
            });
        }
        if best.as_ref().is_none_or(|(b, l)| value_sq > *b || (value_sq == *b && line < *l)) {
            best = Some((value_sq, line));
        }
    }
    let (max_value_sq, argmax) = best.expect("at least one sample");
    Ok(BoundReport {
        rank: q.rank(),
        samples,
        max_ratio: arith::rat_to_f64(&(&max_value_sq / &ceil)),
        ceiling: ceil,
        max_value_sq,
        argmax,
        resampled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePoint {
    pub eps: f64,
    pub max_delta: f64,
}

/// Largest `|confsys(v') - confsys(v)|` over `directions` geodesic
/// perturbations of length `eps`, for each `eps`. The same directions are
/// used for every `eps`.
pub fn continuity_probe(
    q: &GramMatrix,
    v: &PeriodLine,
    eps_list: &[f64],
    directions: u32,
    seed: u64,
) -> Result<Vec<ProbePoint>> {
    if directions == 0 {
        return Err(Error::InvalidConfig("directions must be positive"));
    }
    if eps_list.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::InvalidConfig("eps values must be finite and nonnegative"));
    }
    let (qbar, _) = orientation_normalize(q)?;
    if v.dim() != qbar.rank() {
        return Err(Error::DimensionMismatch { expected: qbar.rank(), found: v.dim() });
    }
    if !v.square(&qbar).is_negative() {
        return Err(Error::NonNegativeLine { square: alloc::format!("{}", v.square(&qbar)) });
    }
    let chart = HyperboloidChart::new(&qbar)?;
    let qf = qbar.to_f64();
    let value = |z: &[f64]| confsys_sq_f64(&qf, &chart.to_line(z)).map(Float::sqrt);
    let z0 = chart.to_sheet(&v.to_f64()).ok_or(Error::Invariant("base line left the cone".into()))?;
    let base = value(&z0).ok_or(Error::NotPositiveDefinite)?;

    let mut out = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_delta = 0.0f64;
        let mut done = 0;
        let mut attempts = 0;
        while done < directions {
            attempts += 1;
            if attempts > directions.saturating_mul(10) + MAX_RESAMPLES {
                return Err(Error::Invariant("too many perturbations left the cone".into()));
            }
            let u = chart.random_tangent(&z0, &mut rng);
            let Some(val) = chart.geodesic(&z0, &u, eps).and_then(|z| value(&z)) else { continue };
            max_delta = max_delta.max(Float::abs(val - base));
            done += 1;
        }
        out.push(ProbePoint { eps, max_delta });
    }
    Ok(out)
}

/// Largest observed `max_delta / eps` over the positive radii.
pub fn lipschitz_estimate(points: &[ProbePoint]) -> Option<f64> {
    points.iter().filter(|p| p.eps > 0.0).map(|p| p.max_delta / p.eps).reduce(f64::max)
}

/// `n / (2πe)`, the large-`n` growth of the Conway–Thompson minimum.
pub fn k_asymptotic(n: u64) -> f64 {
    n as f64 / (2.0 * PI * E)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KatzReport {
    pub b2: usize,
    /// `b₂ - 1`, the number of negative summands of `(1) ⊕ n(-1)`.
    pub n: u64,
    pub best_sq: Rat,
    pub ceiling: Rat,
    /// `√k(n)` with `k` replaced by its asymptote.
    pub proxy: f64,
    pub ratio_to_ceiling: f64,
    pub ratio_to_proxy: f64,
}

pub fn katz_gap_report(q: &GramMatrix, est: &CsEstimate) -> KatzReport {
    let b2 = q.rank();
    let n = b2.saturating_sub(1) as u64;
    let ceiling = ceiling(b2);
    let proxy = Float::sqrt(k_asymptotic(n));
    let best = arith::rat_to_f64(&est.best_value_sq);
    KatzReport {
        b2,
        n,
        ratio_to_ceiling: arith::rat_to_f64(&(&est.best_value_sq / &ceiling)),
        ratio_to_proxy: if proxy > 0.0 { best / proxy } else { f64::INFINITY },
        best_sq: est.best_value_sq.clone(),
        ceiling,
        proxy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::build_diagonal;
    use crate::search::{cs_search, SearchConfig};

    #[test]
    fn asymptote_values() {
        assert!((k_asymptotic(17) - 0.995_34).abs() < 1e-5);
        assert!((k_asymptotic(171) - 10.012).abs() < 1e-3);
        assert!((k_asymptotic(1) - 0.058_55).abs() < 1e-5);
    }

    #[test]
    fn bound_small_forms() {
        let r = verify_universal_bound(&build_diagonal(1, 1).unwrap(), 100, 3).unwrap();
        assert!(r.max_ratio < 1.0);
        assert_eq!(r.ceiling, Rat::new(4.into(), 3.into()));
        assert!(matches!(
            verify_universal_bound(&build_diagonal(1, 0).unwrap(), 10, 0),
            Err(Error::RankTooSmall { .. })
        ));
    }

    #[test]
    fn probe_shrinks() {
        let q = build_diagonal(2, 1).unwrap();
        let v = PeriodLine::from_i64(&[0, 0, 1]).unwrap();
        let pts = continuity_probe(&q, &v, &[0.0, 1e-2, 1e-3, 1e-4], 16, 0).unwrap();
        assert_eq!(pts[0].max_delta, 0.0);
        assert!(pts[3].max_delta < pts[1].max_delta);
        assert!(lipschitz_estimate(&pts).unwrap().is_finite());
    }

    #[test]
    fn gap_report() {
        let q = build_diagonal(1, 1).unwrap();
        let cfg = SearchConfig { height_bound: 2, restarts: 1, max_iters: 10, ..SearchConfig::default() };
        let est = cs_search(&q, &cfg).unwrap();
        let r = katz_gap_report(&q, &est);
        assert_eq!((r.n, r.ceiling.clone()), (1, Rat::new(4.into(), 3.into())));
        assert!(r.best_sq <= r.ceiling);
    }
}
