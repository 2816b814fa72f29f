//! Exact shortest nonzero vectors of a positive-definite Gram matrix.
//!
//! The search is a Fincke–Pohst enumeration over an LLL-reduced basis,
//! driven by a floating Cholesky factor. The float radius carries a guard
//! band of `1 + 1e-6`; every leaf that survives is re-measured in exact
//! integer arithmetic on the denominator-scaled Gram, so the reported
//! minimum and minimizer set are exact.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::lll::{lll_f64, lll_reduce, DEFAULT_DELTA};
use crate::signrev::PosDefGram;

const GUARD: f64 = 1e-6;
pub const FLOAT_NODE_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestVectorResult {
    pub min_norm_sq: Rat,
    /// One canonical representative per antipodal pair, sorted.
    pub minimizers: Vec<Vec<BigInt>>,
    pub node_count: u64,
}

/// `λ₁` as a float together with its exact square.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda1 {
    pub value: f64,
    pub value_sq: Rat,
}

/// Fincke–Pohst quadratic form: `xᵀAx = Σ q[i][i] (x_i + Σ_{j>i} q[i][j] x_j)²`.
struct Cholesky {
    q: Vec<Vec<f64>>,
}

impl Cholesky {
    fn new(a: &[Vec<f64>]) -> Option<Self> {
        let n = a.len();
        let mut q = a.to_vec();
        for i in 0..n {
            if !(q[i][i] > 0.0) || !q[i][i].is_finite() {
                return None;
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Some(Cholesky { q })
    }
}

/// Depth-first enumeration of the ellipsoid `xᵀAx ≤ radius`. Only one
/// vector of each `±x` pair is produced (last nonzero coordinate positive).
/// The visitor sees each leaf with its float norm and returns the radius to
/// use from then on.
struct Enumerator<'a, V: FnMut(&[i64], f64) -> f64> {
    chol: &'a Cholesky,
    radius: f64,
    x: Vec<i64>,
    nodes: u64,
    budget: u64,
    visit: V,
}

impl<V: FnMut(&[i64], f64) -> f64> Enumerator<'_, V> {
    fn run(&mut self) {
        let n = self.x.len();
        if n > 0 {
            self.level(n - 1, 0.0, true);
        }
    }

    fn exhausted(&self) -> bool {
        self.nodes > self.budget
    }

    fn level(&mut self, i: usize, partial: f64, higher_zero: bool) {
        self.nodes += 1;
        if self.exhausted() {
            return;
        }
        let q = &self.chol.q;
        let n = self.x.len();
        let center = -(i + 1..n).map(|j| q[i][j] * self.x[j] as f64).sum::<f64>();
        let room = self.radius - partial;
        if room < 0.0 {
            return;
        }
        let reach = Float::sqrt(room / q[i][i]);
        let mut lo = Float::ceil(center - reach) as i64;
        let hi = Float::floor(center + reach) as i64;
        if higher_zero {
            lo = lo.max(0);
        }
        for xi in lo..=hi {
            let d = xi as f64 - center;
            let t = partial + q[i][i] * d * d;
            if t > self.radius {
                if d > 0.0 {
                    break;
                }
                continue;
            }
            self.x[i] = xi;
            let still_zero = higher_zero && xi == 0;
            if i == 0 {
                if !still_zero {
                    let x = self.x.clone();
                    self.radius = (self.visit)(&x, t);
                }
            } else {
                self.level(i - 1, t, still_zero);
            }
        }
        self.x[i] = 0;
    }
}

type FloatRows = Vec<Vec<f64>>;

fn rows_of(flat: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect()
}

/// Reduced basis vectors (rows) and their float Gram; `None` when the
/// float reduction overflows.
fn float_reduction(gram: &[f64], n: usize) -> Option<(Vec<Vec<i64>>, FloatRows)> {
    let rows = lll_f64(gram, n, DEFAULT_DELTA)?;
    let g = rows_of(gram, n);
    let reduced = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut s = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            s += rows[a][i] as f64 * g[i][j] * rows[b][j] as f64;
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    Some((rows, reduced))
}

/// Exact reduction for Gram matrices the float pass cannot handle.
fn exact_reduction(g: &PosDefGram) -> Result<Vec<Vec<i64>>> {
    let out = lll_reduce(g, DEFAULT_DELTA)?;
    let n = g.rank();
    (0..n)
        .map(|a| (0..n).map(|i| out.transform[i][a].to_i64()).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Invariant("reduced basis exceeds 64-bit coordinates".into()))
}

fn scaled_reduced(g: &PosDefGram, rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = g.rank();
    let s = g.scaled_numerators();
    let u: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let su: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|b| (0..n).fold(BigInt::zero(), |acc, j| acc + &s[i * n + j] * &u[b][j])).collect())
        .collect();
    (0..n)
        .map(|a| (0..n).map(|b| (0..n).fold(BigInt::zero(), |acc, i| acc + &u[a][i] * &su[i][b])).collect())
        .collect()
}

fn int_norm(s: &[Vec<BigInt>], x: &[i64]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, row) in s.iter().enumerate() {
        if x[i] == 0 {
            continue;
        }
        let inner = row.iter().zip(x).filter(|(_, &xj)| xj != 0).fold(BigInt::zero(), |a, (sij, &xj)| a + sij * xj);
        acc += inner * x[i];
    }
    acc
}

fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    arith::rat_to_f64(&Rat::new(num.clone(), den.clone()))
}

/// Exact `λ₁²` and every minimizer, up to sign.
pub fn shortest_vector(g: &PosDefGram) -> Result<ShortestVectorResult> {
    let n = g.rank();
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let denom = g.denominator().clone();
    let rows = match float_reduction(&g.to_f64(), n) {
        Some((rows, _)) => rows,
        None => exact_reduction(g)?,
    };
    let s_red = scaled_reduced(g, &rows);
    let gram_red: Vec<Vec<f64>> = s_red.iter().map(|r| r.iter().map(|x| ratio_f64(x, &denom)).collect()).collect();
    let chol = Cholesky::new(&gram_red).ok_or(Error::NotPositiveDefinite)?;

    let mut best = (0..n).map(|i| s_red[i][i].clone()).min().expect("rank >= 1");
    if !best.is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut found: Vec<Vec<i64>> = Vec::new();
    let radius = ratio_f64(&best, &denom) * (1.0 + GUARD);
    let nodes = {
        let visit = |x: &[i64], _t: f64| -> f64 {
            let norm = int_norm(&s_red, x);
            if norm < best {
                best = norm;
                found.clear();
                found.push(x.to_vec());
            } else if norm == best {
                found.push(x.to_vec());
            }
            ratio_f64(&best, &denom) * (1.0 + GUARD)
        };
        let mut e = Enumerator { chol: &chol, radius, x: vec![0; n], nodes: 0, budget: u64::MAX, visit };
        e.run();
        e.nodes
    };
    if found.is_empty() {
        return Err(Error::Invariant("enumeration missed the reduced basis vector".into()));
    }

    let mut minimizers: Vec<Vec<BigInt>> = found
        .iter()
        .map(|x| {
            let w: Vec<BigInt> =
                (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + BigInt::from(rows[k][j]) * x[k])).collect();
            arith::canonical_primitive_int(&w).expect("nonzero")
        })
        .collect();
    minimizers.sort();
    minimizers.dedup();
    Ok(ShortestVectorResult { min_norm_sq: Rat::new(best, denom), minimizers, node_count: nodes })
}

pub fn lambda1(g: &PosDefGram) -> Result<Lambda1> {
    let r = shortest_vector(g)?;
    Ok(Lambda1 { value: Float::sqrt(arith::rat_to_f64(&r.min_norm_sq)), value_sq: r.min_norm_sq })
}

/// Floating-point `λ₁²` of a row-major Gram matrix, for search iterates.
/// Gives up (`None`) on matrices too ill-conditioned to reduce or
/// enumerate within [`FLOAT_NODE_BUDGET`] nodes.
pub fn shortest_norm_sq_f64(gram: &[f64], n: usize) -> Option<f64> {
    if n == 0 {
        return None;
    }
    let (_, reduced) = float_reduction(gram, n)?;
    let chol = Cholesky::new(&reduced)?;
    let best0 = (0..n).map(|i| reduced[i][i]).fold(f64::INFINITY, f64::min);
    let mut best = best0;
    let visit = |_x: &[i64], t: f64| -> f64 {
        if t < best {
            best = t;
        }
        best
    };
    let mut e =
        Enumerator { chol: &chol, radius: best0 * (1.0 + 1e-12), x: vec![0; n], nodes: 0, budget: FLOAT_NODE_BUDGET, visit };
    e.run();
    if e.exhausted() {
        return None;
    }
    Some(best)
}

/// Per-coordinate box guaranteed to contain every shortest vector:
/// `|x_i| ≤ ⌊√(m · (G⁻¹)_ii)⌋` with `m` the smallest diagonal entry.
pub fn coordinate_box(g: &PosDefGram) -> Result<Vec<BigInt>> {
    let n = g.rank();
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let rows: Vec<Vec<Rat>> = g.entries().chunks(n).map(<[Rat]>::to_vec).collect();
    let inv = arith::inverse(&rows).ok_or(Error::NotPositiveDefinite)?;
    let m = (0..n).map(|i| rows[i][i].clone()).min().expect("rank >= 1");
    Ok((0..n).map(|i| (&m * &inv[i][i]).floor().to_integer().sqrt()).collect())
}

/// The widest coordinate of [`coordinate_box`].
pub fn required_box(g: &PosDefGram) -> Result<BigInt> {
    Ok(coordinate_box(g)?.into_iter().max().expect("rank >= 1"))
}

/// Exhaustive scan of `[-coeff_bound, coeff_bound]ⁿ`, clipped to the
/// guaranteed per-coordinate box, with exact norms. Serves as an oracle for
/// [`shortest_vector`].
pub fn brute_force_shortest(g: &PosDefGram, coeff_bound: u32) -> Result<ShortestVectorResult> {
    let n = g.rank();
    let boxes = coordinate_box(g)?;
    let required = boxes.iter().max().expect("rank >= 1").clone();
    if BigInt::from(coeff_bound) < required {
        return Err(Error::InsufficientBound { given: coeff_bound, required });
    }
    let bounds: Vec<i64> = boxes.iter().map(|b| b.to_i64().unwrap_or(i64::MAX).min(i64::from(coeff_bound))).collect();
    let s = g.scaled_numerators();
    let small: Option<Vec<i128>> = s
        .iter()
        .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40).map(i128::from))
        .collect::<Option<Vec<_>>>()
        .filter(|_| coeff_bound < 1 << 10);

    let mut best: Option<BigInt> = None;
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        // first nonzero coordinate positive: one of each ± pair, zero skipped
        if x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
            let norm = match &small {
                Some(s) => {
                    let mut acc: i128 = 0;
                    for i in 0..n {
                        for j in 0..n {
                            acc += s[i * n + j] * i128::from(x[i]) * i128::from(x[j]);
                        }
                    }
                    BigInt::from(acc)
                }
                None => {
                    let w: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                    g.norm_sq(&w).numer() * (g.denominator() / g.norm_sq(&w).denom())
                }
            };
            match &best {
                Some(m) if norm > *m => {}
                Some(m) if norm == *m => found.push(x.clone()),
                _ => {
                    best = Some(norm);
                    found.clear();
                    found.push(x.clone());
                }
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                let min = best.ok_or(Error::EmptyLattice)?;
                let mut minimizers: Vec<Vec<BigInt>> =
                    found.iter().map(|v| v.iter().map(|&c| BigInt::from(c)).collect()).collect();
                minimizers.sort();
                return Ok(ShortestVectorResult {
                    min_norm_sq: Rat::new(min, g.denominator().clone()),
                    minimizers,
                    node_count: nodes,
                });
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}
