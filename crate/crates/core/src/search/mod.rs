//! Lower bounds for the conformal-systole supremum of an intersection form.
//!
//! The objective is `confsys(V) = λ₁(L, SR(Q̄, V)^{1/2})` over negative
//! lines `V`. [`cs_search`] combines an exhaustive sweep of small rational
//! lines with restarted local ascent on the hyperboloid; every reported
//! value is recomputed exactly on a rational certificate line.
//!
//! The work is split into shards ([`SearchPlan::sweep_shards`] and one
//! shard per restart) that are pure functions of the plan, so a caller may
//! run them on any number of threads and merge with [`SearchPlan::finish`].

mod bounds;
mod perp;
mod sweep;

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::{Float, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::hyperboloid::HyperboloidChart;
use crate::quadform::{invariants, GramMatrix};
use crate::signrev::{orientation_normalize, sign_reverse_f64, sign_reverse_unchecked, PeriodLine};
use crate::svp::{shortest_norm_sq_f64, shortest_vector};

pub use bounds::{
    continuity_probe, k_asymptotic, katz_gap_report, lipschitz_estimate, verify_universal_bound, BoundReport, KatzReport,
    ProbePoint,
};
pub use perp::{perp_lattice, perp_search, PerpSearchResult};

/// Denominator cap for rounding float iterates to rational lines.
pub const ROUNDING_DENOMINATOR_CAP: u64 = 1_000_000;
/// Relative value a certificate may give up for a smaller denominator.
pub const ROUNDING_SLACK: f64 = 1e-6;
/// Lines per sweep shard; fixed so the shard plan does not depend on the
/// thread count.
pub const SWEEP_SHARD_SIZE: usize = 256;
/// Relative margin under which a float value cannot beat the exact best.
const SCREEN_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Largest coordinate magnitude in the rational-line sweep.
    pub height_bound: u32,
    pub restarts: u32,
    pub max_iters: u32,
    /// Initial geodesic step length.
    pub step_scale: f64,
    pub seed: u64,
    /// Relative improvement needed to accept a move; the ascent stops once
    /// the step shrinks below `step_scale * tol`.
    pub tol: f64,
    /// Cap on the number of sweep lines.
    pub sweep_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            height_bound: 4,
            restarts: 16,
            max_iters: 500,
            step_scale: 0.5,
            seed: 0,
            tol: 1e-10,
            sweep_limit: 20_000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.height_bound == 0 {
            return Err(Error::InvalidConfig("height_bound must be positive"));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidConfig("restarts and max_iters must be positive"));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::InvalidConfig("step_scale must be positive"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidConfig("tol must lie in (0, 1)"));
        }
        if self.sweep_limit == 0 {
            return Err(Error::InvalidConfig("sweep_limit must be positive"));
        }
        Ok(())
    }
}

/// Value of the objective on one line.
#[derive(Debug, Clone, PartialEq)]
pub struct Confsys {
    pub value: f64,
    pub value_sq: Rat,
    /// A line was supplied for a rank-1 form, where none is needed.
    pub line_ignored: bool,
}

/// Exact `λ₁²` of the sign-reversed lattice; `qbar` must have `b⁻ = 1`.
pub(crate) fn confsys_exact(qbar: &GramMatrix, line: &PeriodLine) -> Result<Rat> {
    let g = sign_reverse_unchecked(qbar, line)?;
    Ok(shortest_vector(&g)?.min_norm_sq)
}

/// Float `λ₁²` for a line given in lattice coordinates.
pub(crate) fn confsys_sq_f64(qbar: &[f64], v: &[f64]) -> Option<f64> {
    let g = sign_reverse_f64(qbar, v)?;
    shortest_norm_sq_f64(&g, v.len())
}

/// Conformal systole of `q` at the period line `line`, after orientation
/// normalization. Rank-1 forms need no line.
pub fn confsys(q: &GramMatrix, line: Option<&PeriodLine>) -> Result<Confsys> {
    let (qbar, _) = orientation_normalize(q)?;
    let (line, line_ignored) = if q.rank() == 1 {
        (PeriodLine::from_i64(&[1])?, line.is_some())
    } else {
        (line.cloned().ok_or(Error::InvalidConfig("a period line is required for rank >= 2"))?, false)
    };
    let value_sq = confsys_exact(&qbar, &line)?;
    Ok(Confsys { value: Float::sqrt(arith::rat_to_f64(&value_sq)), value_sq, line_ignored })
}

/// Where a candidate line came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Sweep,
    Restart(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub line: PeriodLine,
    pub value_sq: Rat,
    pub source: Source,
}

impl Candidate {
    /// Higher value wins; equal values go to the lexicographically smaller line.
    fn beats(&self, other: &Candidate) -> bool {
        self.value_sq > other.value_sq || (self.value_sq == other.value_sq && self.line < other.line)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub height_bound: u32,
    pub sweep_lines: usize,
    pub sweep_truncated: bool,
    pub restarts: u32,
    pub max_iters: u32,
    pub step_scale: f64,
    pub tol: f64,
    pub seed: u64,
}

/// A certified lower bound for the conformal-systole supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct CsEstimate {
    /// The form as given (original orientation).
    pub form: GramMatrix,
    /// Whether the search ran on the negated form.
    pub flipped: bool,
    pub best_line: PeriodLine,
    pub best_value_sq: Rat,
    pub best_value: f64,
    pub strategy: Strategy,
    pub evaluations: u64,
    /// Running-maximum improvements in shard order; strictly increasing.
    pub history: Vec<Candidate>,
}

/// Result of one shard.
#[derive(Debug, Clone, PartialEq)]
pub struct ShardOutcome {
    records: Vec<Candidate>,
    best: Option<Candidate>,
    evaluations: u64,
}

impl ShardOutcome {
    fn push(&mut self, c: Candidate) {
        if self.records.last().is_none_or(|r| c.value_sq > r.value_sq) {
            self.records.push(c.clone());
        }
        if self.best.as_ref().is_none_or(|b| c.beats(b)) {
            self.best = Some(c);
        }
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.best.as_ref()
    }
}

/// Everything a search needs, fixed before any shard runs.
#[derive(Debug, Clone)]
pub struct SearchPlan {
    form: GramMatrix,
    qbar: GramMatrix,
    qbar_f: Vec<f64>,
    flipped: bool,
    unimodular: bool,
    chart: HyperboloidChart,
    cfg: SearchConfig,
    sweep: Vec<PeriodLine>,
    sweep_truncated: bool,
}

impl SearchPlan {
    pub fn new(q: &GramMatrix, cfg: &SearchConfig) -> Result<Self> {
        cfg.validate()?;
        if q.rank() < 2 {
            return Err(Error::RankTooSmall { rank: q.rank(), min: 2 });
        }
        let (qbar, flipped) = orientation_normalize(q)?;
        let chart = HyperboloidChart::new(&qbar)?;
        let (sweep, sweep_truncated) = sweep::SweepPlan::new(&qbar)?.lines(cfg.height_bound, cfg.sweep_limit);
        Ok(SearchPlan {
            form: q.clone(),
            qbar_f: qbar.to_f64(),
            unimodular: invariants(&qbar).unimodular,
            qbar,
            flipped,
            chart,
            cfg: cfg.clone(),
            sweep,
            sweep_truncated,
        })
    }

    pub fn normalized_form(&self) -> &GramMatrix {
        &self.qbar
    }

    pub fn sweep_lines(&self) -> &[PeriodLine] {
        &self.sweep
    }

    pub fn sweep_shards(&self) -> Vec<Range<usize>> {
        (0..self.sweep.len())
            .step_by(SWEEP_SHARD_SIZE)
            .map(|s| s..(s + SWEEP_SHARD_SIZE).min(self.sweep.len()))
            .collect()
    }

    /// Evaluates a slice of the sweep. Lines whose float value is clearly
    /// below the shard's best so far skip the exact evaluation.
    pub fn run_sweep_shard(&self, range: Range<usize>) -> Result<ShardOutcome> {
        let mut out = ShardOutcome { records: Vec::new(), best: None, evaluations: 0 };
        let mut best_f = f64::NEG_INFINITY;
        for line in &self.sweep[range] {
            out.evaluations += 1;
            let approx = confsys_sq_f64(&self.qbar_f, &line.to_f64()).unwrap_or(f64::INFINITY);
            if approx < best_f * (1.0 - SCREEN_MARGIN) {
                continue;
            }
            let value_sq = confsys_exact(&self.qbar, line)?;
            best_f = best_f.max(arith::rat_to_f64(&value_sq));
            out.push(Candidate { line: line.clone(), value_sq, source: Source::Sweep });
        }
        Ok(out)
    }

    /// Restart `index` starts from `start` when given, otherwise from a
    /// random sheet point drawn from the `(seed, index)` stream.
    pub fn run_restart(&self, index: u32, start: Option<&PeriodLine>) -> Result<ShardOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(u64::from(index) + 1);
        let mut z = match start.and_then(|l| self.chart.to_sheet(&l.to_f64())) {
            Some(z) => z,
            None => self.chart.random_point(&mut rng),
        };
        let eval = |z: &[f64]| confsys_sq_f64(&self.qbar_f, &self.chart.to_line(z)).unwrap_or(f64::NEG_INFINITY);
        let mut value = eval(&z);
        let mut evaluations = 1u64;
        let mut step = self.cfg.step_scale;
        let floor = self.cfg.step_scale * self.cfg.tol;
        let patience = self.chart.dim();
        let mut failures = 0;
        for _ in 0..self.cfg.max_iters {
            if step < floor {
                break;
            }
            let u = self.chart.random_tangent(&z, &mut rng);
            let mut moved = false;
            for sign in [1.0, -1.0] {
                let dir: Vec<f64> = u.iter().map(|x| sign * x).collect();
                let Some(next) = self.chart.geodesic(&z, &dir, step) else { continue };
                let v = eval(&next);
                evaluations += 1;
                if v > value * (1.0 + self.cfg.tol) {
                    z = next;
                    value = v;
                    moved = true;
                    break;
                }
            }
            if moved {
                failures = 0;
                step *= 1.25;
            } else {
                failures += 1;
                if failures >= patience {
                    step *= 0.5;
                    failures = 0;
                }
            }
        }

        let mut out = ShardOutcome { records: Vec::new(), best: None, evaluations };
        if let Some(line) = self.certificate_line(&self.chart.to_line(&z), value) {
            out.evaluations += 1;
            let value_sq = confsys_exact(&self.qbar, &line)?;
            out.push(Candidate { line, value_sq, source: Source::Restart(index) });
        }
        Ok(out)
    }

    /// Rounds with caps `10, 100, …` up to [`ROUNDING_DENOMINATOR_CAP`] and
    /// keeps the first line whose float value is within [`ROUNDING_SLACK`]
    /// of `value`.
    fn certificate_line(&self, v: &[f64], value: f64) -> Option<PeriodLine> {
        let mut cap = 10;
        loop {
            let line = self.round_to_line(v, cap);
            if cap >= ROUNDING_DENOMINATOR_CAP {
                return line;
            }
            if let Some(l) = line {
                let f = confsys_sq_f64(&self.qbar_f, &l.to_f64()).unwrap_or(f64::NEG_INFINITY);
                if f >= value * (1.0 - ROUNDING_SLACK) {
                    return Some(l);
                }
            }
            cap *= 10;
        }
    }

    /// Continued-fraction rounding per coordinate, then the canonical
    /// primitive representative; `None` if rounding left the cone.
    pub fn round_to_line(&self, v: &[f64], max_den: u64) -> Option<PeriodLine> {
        let r: Vec<Rat> = v.iter().map(|&x| arith::cf_round(x, max_den)).collect();
        let line = PeriodLine::from_rational(&r).ok()?;
        line.square(&self.qbar).is_negative().then_some(line)
    }

    /// Deterministic merge of sweep shards (in shard order) followed by
    /// restart shards (in index order).
    pub fn finish(&self, sweep: Vec<ShardOutcome>, restarts: Vec<ShardOutcome>) -> Result<CsEstimate> {
        let mut best: Option<Candidate> = None;
        let mut history: Vec<Candidate> = Vec::new();
        let mut evaluations = 0;
        for shard in sweep.into_iter().chain(restarts) {
            evaluations += shard.evaluations;
            for r in shard.records {
                if history.last().is_none_or(|h| r.value_sq > h.value_sq) {
                    history.push(r);
                }
            }
            if let Some(b) = shard.best {
                if best.as_ref().is_none_or(|cur| b.beats(cur)) {
                    best = Some(b);
                }
            }
        }
        let best = best.ok_or(Error::Invariant("search produced no certificate line".into()))?;

        let recomputed = confsys_exact(&self.qbar, &best.line)?;
        if recomputed != best.value_sq {
            return Err(Error::Invariant(format!("certificate recomputes to {recomputed}, not {}", best.value_sq)));
        }
        let rank = self.qbar.rank() as i64;
        if self.unimodular && arith::rat(3) * &best.value_sq >= arith::rat(2 * rank) {
            return Err(Error::Invariant(format!("confsys^2 = {} reaches 2/3 * {rank}", best.value_sq)));
        }
        Ok(CsEstimate {
            form: self.form.clone(),
            flipped: self.flipped,
            best_value: Float::sqrt(arith::rat_to_f64(&best.value_sq)),
            best_line: best.line,
            best_value_sq: best.value_sq,
            strategy: Strategy {
                height_bound: self.cfg.height_bound,
                sweep_lines: self.sweep.len(),
                sweep_truncated: self.sweep_truncated,
                restarts: self.cfg.restarts,
                max_iters: self.cfg.max_iters,
                step_scale: self.cfg.step_scale,
                tol: self.cfg.tol,
                seed: self.cfg.seed,
            },
            evaluations,
            history,
        })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }
}

/// Best line of the merged sweep, the seed point of restart 0.
pub fn sweep_best(outcomes: &[ShardOutcome]) -> Option<&Candidate> {
    let mut best: Option<&Candidate> = None;
    for b in outcomes.iter().filter_map(ShardOutcome::best) {
        if best.is_none_or(|cur| b.beats(cur)) {
            best = Some(b);
        }
    }
    best
}

/// Serial search. Same result as any parallel execution of the same plan.
pub fn cs_search(q: &GramMatrix, cfg: &SearchConfig) -> Result<CsEstimate> {
    let plan = SearchPlan::new(q, cfg)?;
    let sweep = plan.sweep_shards().into_iter().map(|r| plan.run_sweep_shard(r)).collect::<Result<Vec<_>>>()?;
    let start = sweep_best(&sweep).map(|c| c.line.clone());
    let restarts = (0..cfg.restarts)
        .map(|i| plan.run_restart(i, if i == 0 { start.as_ref() } else { None }))
        .collect::<Result<Vec<_>>>()?;
    plan.finish(sweep, restarts)
}
