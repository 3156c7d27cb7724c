//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::{hnf_accumulate, HermiteBasis};
use super::IntMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_k` of a row lattice in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// All nonzero diagonal entries, ones included.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub free_rank: usize,
}

impl SnfResult {
    fn new(invariant_factors: Vec<BigInt>, n_cols: usize) -> Self {
        let rank = invariant_factors.len();
        SnfResult {
            invariant_factors,
            rank,
            free_rank: n_cols - rank,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Product of the invariant factors, or `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Invariant factors different from 1.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// Largest invariant factor, or `None` for infinite groups.
    pub fn exponent(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        Some(self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one))
    }
}

/// Smith form of a dense matrix, optionally recording the column transform.
///
/// Returns the nonzero diagonal in chain order. When `track` is set, also
/// returns an `n_cols x n_cols` unimodular `V` such that `U A V = D` for
/// some unimodular `U`; column `i` of `V` belongs to diagonal position `i`.
pub fn smith_dense(
    mut a: Vec<Vec<BigInt>>,
    n_cols: usize,
    track: bool,
) -> (Vec<BigInt>, Option<Vec<Vec<BigInt>>>) {
    let m = a.len();
    let mut v = track.then(|| identity(n_cols));
    let mut t = 0;
    while t < m.min(n_cols) {
        // least |a_ij| in the trailing block; ties: lowest row, then column
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n_cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, v.as_mut(), t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = &a[i][t] / &a[t][t];
                if !f.is_zero() {
                    let (top, rest) = a.split_at_mut(i);
                    for j in t..n_cols {
                        let d = &f * &top[t][j];
                        rest[0][j] -= d;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n_cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = &a[t][j] / &a[t][t];
                if !f.is_zero() {
                    col_axpy(&mut a, v.as_mut(), j, t, &f);
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest leftover of row t / column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..m {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n_cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, v.as_mut(), t, best.1);
                }
                continue;
            }
            let p = a[t][t].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n_cols).any(|j| !a[i][j].is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for j in t..n_cols {
                        top[t][j] += &rest[0][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| a[i][i].clone()).collect();
    (diag, v)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], v: Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in a.iter_mut() {
        r.swap(i, j);
    }
    if let Some(v) = v {
        for r in v.iter_mut() {
            r.swap(i, j);
        }
    }
}

/// `col_j -= f * col_t`.
fn col_axpy(a: &mut [Vec<BigInt>], v: Option<&mut Vec<Vec<BigInt>>>, j: usize, t: usize, f: &BigInt) {
    for r in a.iter_mut() {
        if !r[t].is_zero() {
            let d = f * &r[t];
            r[j] -= d;
        }
    }
    if let Some(v) = v {
        for r in v.iter_mut() {
            if !r[t].is_zero() {
                let d = f * &r[t];
                r[j] -= d;
            }
        }
    }
}

/// Smith form of a reduced Hermite basis.
///
/// A pivot equal to 1 is the only nonzero entry of its column (entries above
/// are reduced mod 1, entries below vanish), so its row and column split off
/// as an invariant factor 1 after clearing the row by column operations. Only
/// the remaining block goes through the dense elimination.
pub fn smith_of_hermite(h: &HermiteBasis, track: bool) -> (SnfResult, Option<Vec<Vec<BigInt>>>) {
    let n = h.n_cols;
    let mut v = track.then(|| identity(n));
    let mut unit_cols = Vec::new();
    let mut is_unit = vec![false; n];
    for row in &h.rows {
        let (c, p) = (&row[0].0, &row[0].1);
        if p.is_one() {
            unit_cols.push(*c);
            is_unit[*c] = true;
            if let Some(v) = v.as_mut() {
                for (j, x) in &row[1..] {
                    for vr in v.iter_mut() {
                        if !vr[*c].is_zero() {
                            let d = x * &vr[*c];
                            vr[*j] -= d;
                        }
                    }
                }
            }
        }
    }
    let rest_cols: Vec<usize> = (0..n).filter(|&j| !is_unit[j]).collect();
    let mut pos = vec![usize::MAX; n];
    for (k, &j) in rest_cols.iter().enumerate() {
        pos[j] = k;
    }
    let block: Vec<Vec<BigInt>> = h
        .rows
        .iter()
        .filter(|r| !r[0].1.is_one())
        .map(|r| {
            let mut d = vec![BigInt::zero(); rest_cols.len()];
            for (j, x) in r {
                debug_assert!(!is_unit[*j]);
                d[pos[*j]] = x.clone();
            }
            d
        })
        .collect();
    let (sub_diag, sub_v) = smith_dense(block, rest_cols.len(), track);

    let mut factors = vec![BigInt::one(); unit_cols.len()];
    factors.extend(sub_diag);
    let result = SnfResult::new(factors, n);

    let v = match (v, sub_v) {
        (Some(v), Some(sv)) => {
            // columns reordered: unit pivots first, then the block in Smith order
            let mut out = vec![vec![BigInt::zero(); n]; n];
            for (r, vr) in v.iter().enumerate() {
                for (k, &c) in unit_cols.iter().enumerate() {
                    out[r][k] = vr[c].clone();
                }
                for k in 0..rest_cols.len() {
                    let mut acc = BigInt::zero();
                    for (l, &c) in rest_cols.iter().enumerate() {
                        if !vr[c].is_zero() && !sv[l][k].is_zero() {
                            acc += &vr[c] * &sv[l][k];
                        }
                    }
                    out[r][unit_cols.len() + k] = acc;
                }
            }
            Some(out)
        }
        _ => None,
    };
    (result, v)
}

/// Invariant factors of the row lattice of `m`, via Hermite accumulation.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let h = hnf_accumulate(m.n_cols(), m.rows());
    smith_of_hermite(&h, false).0
}

/// Invariant factors by dense elimination on the raw matrix, without the
/// Hermite pass.
pub fn snf_direct(m: &IntMatrix) -> SnfResult {
    let (diag, _) = smith_dense(m.to_dense(), m.n_cols(), false);
    SnfResult::new(diag, m.n_cols())
}
