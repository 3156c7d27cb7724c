//! Slow reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut total = 0;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                total += sign * m[0][j] * det(&minor);
            }
            total
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}` where
/// `D_k` is the gcd of all `k x k` minors. Ones included, zeros omitted.
pub fn minor_gcd_factors(a: &[Vec<i64>], n_cols: usize) -> Vec<BigInt> {
    let n_rows = a.len();
    let mut out = Vec::new();
    let mut prev: i128 = 1;
    for k in 1..=n_rows.min(n_cols) {
        let mut g: i128 = 0;
        for rs in subsets(n_rows, k) {
            for cs in subsets(n_cols, k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect())
                    .collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(BigInt::from(g / prev));
        prev = g;
    }
    out
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> (Vec<Vec<i64>>, usize) {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let m = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    (m, cols)
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|l| r[l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// A random unimodular `n x n` matrix together with its inverse, built from
/// a few elementary row operations with small multipliers.
pub fn unimodular_pair<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id = |n: usize| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect()
    };
    let (mut w, mut w_inv) = (id(n), id(n));
    if n < 2 {
        return (w, w_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                // row_i += c row_j on W; col_j -= c col_i on W^{-1}
                let c = rng.gen_range(-2..=2);
                let src = w[j].clone();
                for (x, s) in w[i].iter_mut().zip(&src) {
                    *x += c * s;
                }
                for row in w_inv.iter_mut() {
                    row[j] -= c * row[i];
                }
            }
            1 => {
                w.swap(i, j);
                for row in w_inv.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                for x in w[i].iter_mut() {
                    *x = -*x;
                }
                for row in w_inv.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    (w, w_inv)
}

/// Order of `e` in `Z_{m_1} + ... + Z_{m_k}` (with `m_i = 0` meaning `Z`) by
/// scanning multiples. `None` means infinite.
pub fn brute_force_order(m: &[i64], e: &[i64]) -> Option<u64> {
    if m.iter().zip(e).any(|(&mi, &ei)| mi == 0 && ei != 0) {
        return None;
    }
    let bound: i64 = m.iter().filter(|&&x| x != 0).product();
    (1..=bound.max(1)).find(|&k| {
        m.iter()
            .zip(e)
            .all(|(&mi, &ei)| mi == 0 || (k * ei).rem_euclid(mi) == 0)
    })
    .map(|k| k as u64)
}

pub fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| {
            assert!(x.abs() < BigInt::from(i64::MAX));
            i64::try_from(x).unwrap()
        })
        .collect()
}

pub fn is_chain(d: &[BigInt]) -> bool {
    d.iter().all(|x| x.is_positive())
        && d.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}
