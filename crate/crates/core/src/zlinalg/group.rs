//! Finitely presented abelian groups `Z^n / L` and element orders.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::HnfAccumulator;
use super::snf::{smith_of_hermite, SnfResult};
use super::IntMatrix;

/// Order of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// An element of the free cover `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn zero(n: usize) -> Self {
        GroupElement {
            coords: vec![BigInt::zero(); n],
        }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.coords[i] = BigInt::one();
        e
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        GroupElement {
            coords: coords.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    fn sparse(&self) -> Vec<(usize, BigInt)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect()
    }
}

/// `Z^{n_gens}` modulo the row lattice of `relations`.
#[derive(Debug)]
pub struct FpAbelianGroup {
    n_gens: usize,
    relations: IntMatrix,
    hnf: OnceLock<HnfAccumulator>,
    invariants: OnceLock<SnfResult>,
    transform: OnceLock<Vec<Vec<BigInt>>>,
}

impl FpAbelianGroup {
    pub fn new(relations: IntMatrix) -> Self {
        FpAbelianGroup {
            n_gens: relations.n_cols(),
            relations,
            hnf: OnceLock::new(),
            invariants: OnceLock::new(),
            transform: OnceLock::new(),
        }
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    fn accumulator(&self) -> &HnfAccumulator {
        self.hnf.get_or_init(|| {
            let mut rows: Vec<_> = self.relations.rows().iter().collect();
            rows.sort_by_key(|r| r.len());
            let mut acc = HnfAccumulator::new(self.n_gens);
            for r in rows {
                acc.push(r);
            }
            acc
        })
    }

    pub fn invariants(&self) -> &SnfResult {
        self.invariants
            .get_or_init(|| smith_of_hermite(&self.accumulator().basis(), false).0)
    }

    /// Invariant factors of the quotient by the subgroup generated by `e`.
    pub fn quotient_invariants(&self, e: &GroupElement) -> SnfResult {
        assert_eq!(e.coords.len(), self.n_gens);
        let mut acc = self.accumulator().clone();
        acc.push(&e.sparse());
        smith_of_hermite(&acc.basis(), false).0
    }

    /// `|A| / |A / <e>|`, defined when both groups are finite.
    pub fn order_by_quotient(&self, e: &GroupElement) -> Option<Order> {
        let whole = self.invariants().order()?;
        let quotient = self.quotient_invariants(e).order()?;
        Some(Order::Finite(whole / quotient))
    }

    fn column_transform(&self) -> &Vec<Vec<BigInt>> {
        self.transform.get_or_init(|| {
            let (res, v) = smith_of_hermite(&self.accumulator().basis(), true);
            let _ = self.invariants.set(res);
            v.expect("transform requested")
        })
    }

    /// Order from the Smith coordinates `e V`: the lcm of `d_i / gcd(d_i, e'_i)`
    /// over the torsion positions, infinite if `e'` has a free component.
    pub fn order_by_transform(&self, e: &GroupElement) -> Order {
        assert_eq!(e.coords.len(), self.n_gens);
        let v = self.column_transform();
        let inv = self.invariants();
        let n = self.n_gens;
        let mut order = BigInt::one();
        for col in 0..n {
            let x: BigInt = e
                .coords
                .iter()
                .zip(v)
                .filter(|(el, row)| !el.is_zero() && !row[col].is_zero())
                .map(|(el, row)| el * &row[col])
                .sum();
            if col < inv.rank {
                let d = &inv.invariant_factors[col];
                let g = d.gcd(&x);
                order = order.lcm(&(d / g));
            } else if !x.is_zero() {
                return Order::Infinite;
            }
        }
        Order::Finite(order)
    }

    /// Order of `e`: the quotient ratio when the group is finite, the Smith
    /// transform otherwise.
    pub fn element_order(&self, e: &GroupElement) -> Order {
        self.order_by_quotient(e)
            .unwrap_or_else(|| self.order_by_transform(e))
    }
}

/// Invariant factors of `Z_{m_1} + ... + Z_{m_k}`, via the primary
/// decomposition. Cyclic orders of 1 are dropped; the result is in chain
/// order and contains no ones.
pub fn invariant_factors_of_cyclic(orders: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &m in orders {
        assert!(m > 0, "cyclic order must be positive");
        let mut rest = m;
        let mut p = 2;
        while rest > 1 {
            if p * p > rest {
                p = rest;
            }
            if rest % p == 0 {
                let mut pk = 1;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                by_prime.entry(p).or_default().push(pk);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, pk) in powers.iter().enumerate() {
            out[len - 1 - k] *= pk;
        }
    }
    out
}
