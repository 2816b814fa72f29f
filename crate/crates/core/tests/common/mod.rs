#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use systole_core::quadform::{build_diagonal, build_e8, build_h, direct_sum, E8Sign, GramMatrix};

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `U` and `U⁻¹` built from elementary column operations `col_j += k·col_i`.
#[derive(Debug, Clone)]
pub struct Unimodular {
    pub u: Vec<Vec<BigInt>>,
    pub inv: Vec<Vec<BigInt>>,
}

impl Unimodular {
    pub fn from_ops(n: usize, ops: &[(usize, usize, i64)]) -> Self {
        let id: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
        let (mut u, mut inv) = (id.clone(), id);
        for &(i, j, k) in ops {
            let (i, j) = (i % n, j % n);
            if i == j || k == 0 {
                continue;
            }
            for row in u.iter_mut() {
                let add = &row[i] * k;
                row[j] += add;
            }
            let sub: Vec<BigInt> = inv[j].iter().map(|x| x * k).collect();
            for (a, s) in inv[i].iter_mut().zip(sub) {
                *a -= s;
            }
        }
        Unimodular { u, inv }
    }

    pub fn apply(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

pub fn ops(max_len: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..16, 0usize..16, -2i64..=2), 0..max_len)
}

#[derive(Debug, Clone, Copy)]
pub enum Atom {
    H,
    E8(bool),
    Unit(bool),
    Scaled(i64),
}

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::H),
        any::<bool>().prop_map(Atom::E8),
        any::<bool>().prop_map(Atom::Unit),
        prop_oneof![-5i64..=-2, 2i64..=5].prop_map(Atom::Scaled),
    ]
}

pub fn atom_form(a: Atom) -> GramMatrix {
    match a {
        Atom::H => build_h(),
        Atom::E8(pos) => build_e8(if pos { E8Sign::Positive } else { E8Sign::Negative }),
        Atom::Unit(pos) => if pos { build_diagonal(1, 0) } else { build_diagonal(0, 1) }.unwrap(),
        Atom::Scaled(d) => GramMatrix::from_rows(&[[d]]).unwrap(),
    }
}

pub fn sum_form(atoms: &[Atom]) -> GramMatrix {
    let mut it = atoms.iter().map(|&a| atom_form(a));
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, f| direct_sum(&acc, &f))
}

/// Positive-definite integer Gram `BᵀB + I` with small entries.
pub fn posdef_gram(n: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n).prop_filter_map("entries too large", move |b| {
        let g: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| b[k][i] * b[k][j]).sum::<i64>() + i64::from(i == j)).collect())
            .collect();
        g.iter().flatten().all(|x| x.abs() <= max_entry).then_some(g)
    })
}
