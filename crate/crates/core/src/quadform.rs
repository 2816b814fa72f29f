//! Integral symmetric bilinear forms: construction, invariants and the
//! classification of indefinite unimodular forms.
//!
//! All arithmetic here is exact. Signatures come from a congruence
//! diagonalization over the rationals, determinants from fraction-free
//! elimination over the integers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Rat, RatMatrix};
use crate::error::{Error, Result};

/// An integral symmetric matrix, the Gram matrix of an intersection form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    rank: usize,
    entries: Vec<BigInt>,
}

impl GramMatrix {
    /// Builds a form from row-major entries, checking shape and symmetry.
    pub fn new(rank: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::EmptyForm);
        }
        if entries.len() != rank * rank {
            return Err(Error::DimensionMismatch { expected: rank * rank, found: entries.len() });
        }
        for row in 0..rank {
            for col in row + 1..rank {
                if entries[row * rank + col] != entries[col * rank + row] {
                    return Err(Error::NotSymmetric { row, col });
                }
            }
        }
        Ok(GramMatrix { rank, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let rank = rows.len();
        let mut entries = Vec::with_capacity(rank * rank);
        for row in rows {
            let row = row.as_ref();
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: row.len() });
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        GramMatrix::new(rank, entries)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.rank + col]
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.rank..(row + 1) * self.rank]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.rank)
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.rows().map(|r| r.iter().map(arith::int_rat).collect()).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `Q(x, y)` for integer vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, row) in self.rows().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let inner = row.iter().zip(y).fold(BigInt::zero(), |a, (q, v)| a + q * v);
            acc += inner * &x[i];
        }
        acc
    }

    /// `Q(x, y)` for rational vectors.
    pub fn pair_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        arith::bilinear(&self.to_rational(), x, y)
    }

    /// `Q v` as a column of integers.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows()
            .map(|row| row.iter().zip(v).fold(BigInt::zero(), |a, (q, x)| a + q * x))
            .collect()
    }

    /// `Uᵀ Q U` for a square integer matrix `U` (rows of `u` are rows of `U`).
    pub fn congruent(&self, u: &[Vec<BigInt>]) -> Result<GramMatrix> {
        let n = self.rank;
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: u.len() });
        }
        let mut qu = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                qu[i * n + j] = (0..n).fold(BigInt::zero(), |a, k| a + self.entry(i, k) * &u[k][j]);
            }
        }
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).fold(BigInt::zero(), |a, k| a + &u[k][i] * &qu[k * n + j]);
            }
        }
        GramMatrix::new(n, out)
    }

    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self.rows().map(<[BigInt]>::to_vec).collect();
        arith::bareiss_det(&rows)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| i == j || self.entry(i, j).is_zero()))
    }
}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `I_{p,q} = p(1) ⊕ q(-1)`.
pub fn build_diagonal(p: usize, q: usize) -> Result<GramMatrix> {
    let n = p + q;
    if n == 0 {
        return Err(Error::EmptyForm);
    }
    let mut entries = vec![BigInt::zero(); n * n];
    for i in 0..n {
        entries[i * n + i] = if i < p { BigInt::one() } else { -BigInt::one() };
    }
    GramMatrix::new(n, entries)
}

/// Diagonal form with the given entries.
pub fn build_diagonal_entries(diag: &[i64]) -> Result<GramMatrix> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::EmptyForm);
    }
    let mut entries = vec![BigInt::zero(); n * n];
    for (i, &d) in diag.iter().enumerate() {
        entries[i * n + i] = BigInt::from(d);
    }
    GramMatrix::new(n, entries)
}

/// The hyperbolic plane `[[0,1],[1,0]]`.
pub fn build_h() -> GramMatrix {
    GramMatrix::from_rows(&[[0, 1], [1, 0]]).expect("static form")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum E8Sign {
    Positive,
    Negative,
}

/// Root basis of E8 in Bourbaki node order 1..8: the chain
/// 1-3-4-5-6-7-8 with node 2 attached to node 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 7)];

/// The E8 lattice: 2 on the diagonal, -1 between Dynkin-adjacent roots.
/// Negated entrywise for [`E8Sign::Negative`].
pub fn build_e8(sign: E8Sign) -> GramMatrix {
    let s: i64 = match sign {
        E8Sign::Positive => 1,
        E8Sign::Negative => -1,
    };
    let mut rows = [[0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2 * s;
    }
    for &(a, b) in &E8_EDGES {
        rows[a][b] = -s;
        rows[b][a] = -s;
    }
    GramMatrix::from_rows(&rows).expect("static form")
}

/// Block-diagonal sum `A ⊕ B`.
pub fn direct_sum(a: &GramMatrix, b: &GramMatrix) -> GramMatrix {
    let n = a.rank + b.rank;
    let mut entries = vec![BigInt::zero(); n * n];
    for i in 0..a.rank {
        for j in 0..a.rank {
            entries[i * n + j] = a.entry(i, j).clone();
        }
    }
    for i in 0..b.rank {
        for j in 0..b.rank {
            entries[(a.rank + i) * n + a.rank + j] = b.entry(i, j).clone();
        }
    }
    GramMatrix { rank: n, entries }
}

/// `A ⊕ A ⊕ ... ⊕ A` with `copies ≥ 1` summands.
pub fn repeat_sum(a: &GramMatrix, copies: usize) -> Result<GramMatrix> {
    if copies == 0 {
        return Err(Error::EmptyForm);
    }
    let mut out = a.clone();
    for _ in 1..copies {
        out = direct_sum(&out, a);
    }
    Ok(out)
}

pub fn negate(q: &GramMatrix) -> GramMatrix {
    GramMatrix { rank: q.rank, entries: q.entries.iter().map(|x| -x).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub signature: i64,
    pub parity: Parity,
    pub determinant: BigInt,
    pub unimodular: bool,
}

impl FormInvariants {
    pub fn is_indefinite(&self) -> bool {
        self.b_plus >= 1 && self.b_minus >= 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.b_plus + self.b_minus < self.rank
    }
}

/// Rank, inertia, parity and determinant. Degenerate forms are reported
/// with `b_plus + b_minus < rank`.
pub fn invariants(q: &GramMatrix) -> FormInvariants {
    let diag = arith::diagonalize(&q.to_rational());
    let (b_plus, b_minus, _) = diag.counts();
    let determinant = q.determinant();
    let parity = if (0..q.rank).all(|i| (q.entry(i, i) % 2i32).is_zero()) {
        Parity::Even
    } else {
        Parity::Odd
    };
    FormInvariants {
        rank: q.rank,
        b_plus,
        b_minus,
        signature: b_plus as i64 - b_minus as i64,
        parity,
        unimodular: determinant.abs().is_one(),
        determinant,
    }
}

/// Isomorphism class of an indefinite unimodular form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormClass {
    /// `p(1) ⊕ q(-1)`.
    OddIndefinite { p: usize, q: usize },
    /// `p_h·H ⊕ (-k)E8`; negative `k_e8` stands for positive E8 summands.
    EvenIndefinite { p_h: usize, k_e8: i64 },
}

impl FormClass {
    /// The canonical representative of the class.
    pub fn canonical_form(&self) -> Result<GramMatrix> {
        match *self {
            FormClass::OddIndefinite { p, q } => build_diagonal(p, q),
            FormClass::EvenIndefinite { p_h, k_e8 } => {
                let e8 = build_e8(if k_e8 > 0 { E8Sign::Negative } else { E8Sign::Positive });
                let k = k_e8.unsigned_abs() as usize;
                match (p_h, k) {
                    (0, 0) => Err(Error::EmptyForm),
                    (0, k) => repeat_sum(&e8, k),
                    (p, 0) => repeat_sum(&build_h(), p),
                    (p, k) => Ok(direct_sum(&repeat_sum(&build_h(), p)?, &repeat_sum(&e8, k)?)),
                }
            }
        }
    }
}

fn require_indefinite_unimodular(inv: &FormInvariants) -> Result<()> {
    if inv.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if !inv.unimodular {
        return Err(Error::NotUnimodular { det: inv.determinant.clone() });
    }
    if !inv.is_indefinite() {
        return Err(Error::DefiniteForm);
    }
    Ok(())
}

/// Rank, signature and parity determine an indefinite unimodular form.
pub fn classify_indefinite_unimodular(q: &GramMatrix) -> Result<FormClass> {
    let inv = invariants(q);
    require_indefinite_unimodular(&inv)?;
    match inv.parity {
        Parity::Odd => Ok(FormClass::OddIndefinite { p: inv.b_plus, q: inv.b_minus }),
        Parity::Even => {
            if inv.signature % 8 != 0 {
                return Err(Error::IntegralityViolation { signature: inv.signature });
            }
            let e8_rank = inv.signature.unsigned_abs() as usize;
            Ok(FormClass::EvenIndefinite { p_h: (inv.rank - e8_rank) / 2, k_e8: -inv.signature / 8 })
        }
    }
}

pub fn is_isomorphic(a: &GramMatrix, b: &GramMatrix) -> Result<bool> {
    let ia = invariants(a);
    let ib = invariants(b);
    require_indefinite_unimodular(&ia)?;
    require_indefinite_unimodular(&ib)?;
    Ok(ia.rank == ib.rank && ia.signature == ib.signature && ia.parity == ib.parity)
}

/// `5|σ| ≤ 4·b₂`.
pub fn five_fourths_holds(q: &GramMatrix) -> bool {
    let inv = invariants(q);
    5 * inv.signature.unsigned_abs() <= 4 * inv.rank as u64
}

/// `5|σ| + 8 ≤ 4·b₂`.
pub fn furuta_holds(q: &GramMatrix) -> bool {
    let inv = invariants(q);
    5 * inv.signature.unsigned_abs() + 8 <= 4 * inv.rank as u64
}

/// The `k` in `Q ≅ p·H ⊕ (-k)E8` for an even form with `σ ≤ 0`.
pub fn even_k(q: &GramMatrix) -> Result<u64> {
    let inv = invariants(q);
    require_indefinite_unimodular(&inv)?;
    if inv.parity == Parity::Odd {
        return Err(Error::OddForm);
    }
    if inv.signature > 0 {
        return Err(Error::PositiveSignature { signature: inv.signature });
    }
    if inv.signature % 8 != 0 {
        return Err(Error::IntegralityViolation { signature: inv.signature });
    }
    Ok(inv.signature.unsigned_abs() / 8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_minus_k_e8(p_h: usize, k: usize) -> GramMatrix {
        FormClass::EvenIndefinite { p_h, k_e8: k as i64 }.canonical_form().unwrap()
    }

    #[test]
    fn diagonal_builders() {
        assert_eq!(build_diagonal(1, 0).unwrap(), GramMatrix::from_rows(&[[1]]).unwrap());
        assert_eq!(build_diagonal(1, 1).unwrap(), GramMatrix::from_rows(&[[1, 0], [0, -1]]).unwrap());
        let i91 = build_diagonal(9, 1).unwrap();
        assert_eq!(i91.rank(), 10);
        assert!((0..9).all(|i| i91.entry(i, i).is_one()));
        assert_eq!(i91.entry(9, 9), &BigInt::from(-1));
        assert_eq!(build_diagonal(0, 0), Err(Error::EmptyForm));
    }

    #[test]
    fn hyperbolic_plane() {
        let h = build_h();
        assert_eq!(h, GramMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap());
        let inv = invariants(&h);
        assert_eq!((inv.rank, inv.signature, inv.parity), (2, 0, Parity::Even));
        assert_eq!(inv.determinant, BigInt::from(-1));
        assert!(inv.unimodular);
        assert_eq!(classify_indefinite_unimodular(&h), Ok(FormClass::EvenIndefinite { p_h: 1, k_e8: 0 }));
    }

    #[test]
    fn e8_invariants() {
        let e8 = build_e8(E8Sign::Positive);
        let inv = invariants(&e8);
        assert_eq!((inv.rank, inv.b_plus, inv.signature), (8, 8, 8));
        assert_eq!(inv.parity, Parity::Even);
        assert_eq!(inv.determinant, BigInt::one());
        let neg = invariants(&build_e8(E8Sign::Negative));
        assert_eq!((neg.b_minus, neg.signature), (8, -8));
        assert_eq!(neg.determinant, BigInt::one());
    }

    #[test]
    fn direct_sums() {
        let a = direct_sum(&build_h(), &build_e8(E8Sign::Negative));
        assert_eq!(a.rank(), 10);
        assert_eq!(invariants(&a).signature, -8);
        let b = direct_sum(&build_diagonal(1, 0).unwrap(), &build_diagonal(0, 1).unwrap());
        assert_eq!(b, build_diagonal(1, 1).unwrap());
        let e = build_e8(E8Sign::Positive);
        let c = invariants(&direct_sum(&e, &e));
        assert_eq!((c.rank, c.signature), (16, 16));
    }

    #[test]
    fn negation() {
        let q = build_diagonal(1, 2).unwrap();
        let nq = negate(&q);
        assert_eq!(nq, GramMatrix::from_rows(&[[-1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap());
        assert_eq!(negate(&nq), q);
        let (iq, inq) = (invariants(&q), invariants(&nq));
        assert_eq!((iq.b_plus, iq.b_minus), (inq.b_minus, inq.b_plus));
        let h = invariants(&negate(&build_h()));
        assert_eq!((h.parity, h.signature), (Parity::Even, 0));
    }

    #[test]
    fn invariants_examples() {
        let i = invariants(&build_diagonal(9, 1).unwrap());
        assert_eq!((i.rank, i.b_plus, i.b_minus, i.signature), (10, 9, 1, 8));
        assert_eq!((i.parity, i.determinant.clone()), (Parity::Odd, BigInt::from(-1)));
        let k2 = invariants(&h_minus_k_e8(1, 2));
        assert_eq!((k2.rank, k2.signature, k2.parity), (18, -16, Parity::Even));
    }

    #[test]
    fn degenerate_form_is_reported() {
        let q = GramMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap();
        let inv = invariants(&q);
        assert!(inv.is_degenerate());
        assert!(!inv.unimodular);
        assert_eq!(classify_indefinite_unimodular(&q), Err(Error::Degenerate));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_indefinite_unimodular(&h_minus_k_e8(1, 1)),
            Ok(FormClass::EvenIndefinite { p_h: 1, k_e8: 1 })
        );
        assert_eq!(
            classify_indefinite_unimodular(&build_diagonal(1, 9).unwrap()),
            Ok(FormClass::OddIndefinite { p: 1, q: 9 })
        );
        let pos_e8 = direct_sum(&build_h(), &build_e8(E8Sign::Positive));
        assert_eq!(classify_indefinite_unimodular(&pos_e8), Ok(FormClass::EvenIndefinite { p_h: 1, k_e8: -1 }));
    }

    #[test]
    fn classification_errors() {
        assert_eq!(classify_indefinite_unimodular(&build_e8(E8Sign::Positive)), Err(Error::DefiniteForm));
        let two = GramMatrix::from_rows(&[[2, 0], [0, -1]]).unwrap();
        assert!(matches!(classify_indefinite_unimodular(&two), Err(Error::NotUnimodular { .. })));
        assert_eq!(is_isomorphic(&build_e8(E8Sign::Positive), &build_h()), Err(Error::DefiniteForm));
    }

    #[test]
    fn isomorphism_by_invariants() {
        assert_eq!(is_isomorphic(&build_diagonal(1, 9).unwrap(), &h_minus_k_e8(1, 1)), Ok(false));
        assert_eq!(is_isomorphic(&build_diagonal(1, 1).unwrap(), &build_h()), Ok(false));
        // I_{1,1} ⊕ E8 is odd, I_{9,1} too: same rank and signature
        let odd = direct_sum(&build_diagonal(1, 1).unwrap(), &build_e8(E8Sign::Positive));
        assert_eq!(is_isomorphic(&odd, &build_diagonal(9, 1).unwrap()), Ok(true));
    }

    #[test]
    fn five_fourths_and_furuta() {
        assert!(five_fourths_holds(&h_minus_k_e8(1, 1)));
        assert!(!five_fourths_holds(&h_minus_k_e8(1, 2)));
        assert!(five_fourths_holds(&build_h()));
        assert!(furuta_holds(&build_h()));
        assert!(!furuta_holds(&h_minus_k_e8(1, 1)));
        let k3 = h_minus_k_e8(3, 2);
        assert_eq!(k3.rank(), 22);
        assert!(furuta_holds(&k3));
    }

    #[test]
    fn even_k_examples() {
        assert_eq!(even_k(&build_h()), Ok(0));
        assert_eq!(even_k(&h_minus_k_e8(1, 1)), Ok(1));
        assert_eq!(even_k(&h_minus_k_e8(2, 3)), Ok(3));
        assert_eq!(even_k(&build_diagonal(1, 9).unwrap()), Err(Error::OddForm));
        assert_eq!(even_k(&negate(&h_minus_k_e8(1, 1))), Err(Error::PositiveSignature { signature: 8 }));
    }

    #[test]
    fn five_fourths_iff_k_at_most_one() {
        for k in 0..=5usize {
            let q = h_minus_k_e8(1, k);
            assert_eq!(five_fourths_holds(&q), even_k(&q).unwrap() <= 1, "k = {k}");
        }
    }

    #[test]
    fn rejects_asymmetric_and_misshaped() {
        assert_eq!(GramMatrix::from_rows(&[[0, 1], [2, 0]]), Err(Error::NotSymmetric { row: 0, col: 1 }));
        assert!(matches!(GramMatrix::new(2, vec![BigInt::zero(); 3]), Err(Error::DimensionMismatch { .. })));
    }
}
