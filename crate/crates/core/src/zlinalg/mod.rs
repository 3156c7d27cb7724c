//! Exact integer linear algebra: sparse relation matrices, Hermite and Smith
//! normal forms, and orders of elements in finitely presented abelian groups.

mod group;
mod hnf;
mod scalar;
mod snf;

use num_bigint::BigInt;
use num_traits::Zero;

pub use group::{invariant_factors_of_cyclic, FpAbelianGroup, GroupElement, Order};
pub use hnf::{hnf_accumulate, HermiteBasis, HnfAccumulator};
pub use snf::{smith_dense, smith_of_hermite, snf, snf_direct, SnfResult};

/// Sorted `(column, coefficient)` pairs without zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Integer matrix stored as sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n_cols: usize,
    rows: Vec<SparseRow>,
}

impl IntMatrix {
    pub fn new(n_cols: usize) -> Self {
        IntMatrix {
            n_cols,
            rows: Vec::new(),
        }
    }

    pub fn from_dense<R: AsRef<[i64]>>(rows: Vec<R>, n_cols: usize) -> Self {
        let mut m = IntMatrix::new(n_cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n_cols, "row length");
            m.push_row(r.iter().enumerate().map(|(j, &x)| (j, x)));
        }
        m
    }

    /// Appends a row given as `(column, coefficient)` terms; repeated columns
    /// are summed and zero coefficients dropped.
    pub fn push_row<I, C>(&mut self, terms: I)
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut row: SparseRow = Vec::new();
        for (j, c) in terms {
            assert!(j < self.n_cols, "column {j} out of range");
            row.push((j, c.into()));
        }
        row.sort_by_key(|e| e.0);
        let mut merged: SparseRow = Vec::with_capacity(row.len());
        for (j, c) in row {
            match merged.last_mut() {
                Some((lj, lc)) if *lj == j => *lc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|e| !e.1.is_zero());
        self.rows.push(merged);
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.n_cols];
                for (j, x) in r {
                    d[*j] = x.clone();
                }
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_row_merges_terms() {
        let mut m = IntMatrix::new(4);
        m.push_row([(2, 1), (0, 3), (2, 2), (1, 1), (1, -1)]);
        assert_eq!(m.rows()[0], vec![(0, BigInt::from(3)), (2, BigInt::from(3))]);
    }
}
