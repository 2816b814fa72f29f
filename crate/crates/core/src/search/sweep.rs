//! Enumeration of small primitive negative lines, one per orbit of the
//! obvious coordinate isometries.
//!
//! A coordinate whose row has no off-diagonal entries can be negated
//! without changing `Q̄`, and two such coordinates with equal diagonal
//! entries can be swapped. Both moves preserve the lattice, so the sweep
//! only visits lines whose isolated coordinates are nonnegative and
//! nonincreasing within each diagonal class. Lines are produced shell by
//! shell in the max norm, lexicographically inside a shell.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::quadform::GramMatrix;
use crate::signrev::PeriodLine;

pub(crate) struct SweepPlan {
    entries: Vec<i64>,
    n: usize,
    /// For each coordinate: `None` if free, otherwise the previous
    /// coordinate of the same isolated class (or `Some(None)` for the first).
    isolated: Vec<Option<Option<usize>>>,
}

impl SweepPlan {
    pub fn new(qbar: &GramMatrix) -> Result<Self> {
        let n = qbar.rank();
        let entries = qbar
            .rows()
            .flatten()
            .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 31))
            .collect::<Option<Vec<i64>>>()
            .ok_or(Error::InvalidConfig("form entries too large for the line sweep"))?;
        let mut isolated = vec![None; n];
        for i in 0..n {
            let alone = (0..n).all(|j| j == i || entries[i * n + j] == 0);
            if alone {
                let prev = (0..i).rev().find(|&j| isolated[j].is_some() && entries[j * n + j] == entries[i * n + i]);
                isolated[i] = Some(prev);
            }
        }
        Ok(SweepPlan { entries, n, isolated })
    }

    fn square(&self, v: &[i64]) -> i128 {
        let n = self.n;
        let mut acc: i128 = 0;
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            let inner: i128 = (0..n).map(|j| i128::from(self.entries[i * n + j]) * i128::from(v[j])).sum();
            acc += inner * i128::from(v[i]);
        }
        acc
    }

    /// Visits lines in order until `limit` are produced. Returns the lines
    /// and whether the limit cut the sweep short.
    pub fn lines(&self, height: u32, limit: usize) -> (Vec<PeriodLine>, bool) {
        let mut out = Vec::new();
        let mut v = vec![0i64; self.n];
        for h in 1..=i64::from(height) {
            let flow = self.fill(0, h, false, false, &mut v, &mut |v: &[i64]| {
                if out.len() >= limit {
                    return ControlFlow::Break(());
                }
                let g = v.iter().fold(0i64, |a, &x| a.gcd(&x));
                if g == 1 && self.square(v) < 0 {
                    let ints: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                    out.push(PeriodLine::from_ints(&ints).expect("nonzero"));
                }
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                return (out, true);
            }
        }
        (out, false)
    }

    fn fill<F: FnMut(&[i64]) -> ControlFlow<()>>(
        &self,
        i: usize,
        h: i64,
        hit_shell: bool,
        free_started: bool,
        v: &mut Vec<i64>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if i == self.n {
            return if hit_shell { visit(v) } else { ControlFlow::Continue(()) };
        }
        let (lo, hi) = match self.isolated[i] {
            Some(Some(prev)) => (0, v[prev]),
            Some(None) => (0, h),
            // the first nonzero free coordinate is positive
            None if !free_started => (0, h),
            None => (-h, h),
        };
        for x in lo..=hi {
            v[i] = x;
            let started = free_started || (self.isolated[i].is_none() && x != 0);
            self.fill(i + 1, h, hit_shell || x.abs() == h, started, v, visit)?;
        }
        v[i] = 0;
        ControlFlow::Continue(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{build_diagonal, build_h};
    use crate::search::confsys_exact;
    use alloc::collections::BTreeMap;

    /// Every canonical primitive negative line of height ≤ h, no symmetry.
    fn all_lines(q: &GramMatrix, h: i64) -> Vec<PeriodLine> {
        let n = q.rank();
        let mut out = Vec::new();
        let mut v = vec![-h; n];
        loop {
            let ints: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            if let Ok(line) = PeriodLine::from_ints(&ints) {
                if line.coords() == &ints[..] && q.pair(&ints, &ints) < BigInt::from(0) {
                    out.push(line);
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if v[i] < h {
                    v[i] += 1;
                    break;
                }
                v[i] = -h;
                i += 1;
            }
        }
    }

    #[test]
    fn reduced_sweep_reaches_every_value() {
        for q in [build_diagonal(2, 1).unwrap(), build_diagonal(1, 1).unwrap(), build_h()] {
            let plan = SweepPlan::new(&q).unwrap();
            let (reps, truncated) = plan.lines(3, usize::MAX);
            assert!(!truncated);
            let full = all_lines(&q, 3);
            assert!(reps.len() <= full.len());
            let values = |lines: &[PeriodLine]| {
                let mut m = BTreeMap::new();
                for l in lines {
                    *m.entry(confsys_exact(&q, l).unwrap()).or_insert(0) += 1;
                }
                m.into_keys().collect::<Vec<_>>()
            };
            assert_eq!(values(&reps), values(&full));
        }
    }

    #[test]
    fn limit_truncates() {
        let plan = SweepPlan::new(&build_diagonal(3, 1).unwrap()).unwrap();
        let (lines, truncated) = plan.lines(4, 3);
        assert_eq!(lines.len(), 3);
        assert!(truncated);
        assert_eq!(lines[0], PeriodLine::from_i64(&[0, 0, 0, 1]).unwrap());
    }
}
