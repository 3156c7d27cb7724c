//! Arithmetic in the cubic extension `F_{q^3}` of `F_q`, `q = p^r`.
//!
//! The field is built in one step as `F_p[t]/(f)` with `deg f = 3r`; the
//! intermediate field `F_q` is the fixed set of `x -> x^q`. Every nonzero
//! element is addressed by its discrete logarithm to the base `zeta = t mod f`,
//! which is primitive by construction.

use std::fmt;

use thiserror::Error;

/// Largest `q` accepted. `q^3` field elements are tabulated.
pub const MAX_Q: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is outside the supported range 2..={MAX_Q}")]
    UnsupportedSize(u64),
    #[error("no primitive polynomial of degree {degree} over F_{p}")]
    NoPrimitivePolynomial { p: u32, degree: u32 },
}

/// `q = p^r` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u32,
    r: u32,
    q: u32,
}

impl PrimePower {
    /// Factors `q` as a prime power. Any `q >= 2` is accepted here; the
    /// field and plane constructors enforce the supported range.
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q < 2 {
            return Err(GfError::NotPrimePower(q));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut r = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            r += 1;
        }
        if rest != 1 || q > u32::MAX as u64 {
            return Err(GfError::NotPrimePower(q));
        }
        Ok(PrimePower {
            p: p as u32,
            r,
            q: q as u32,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of points of PG(2,q).
    pub fn plane_order(&self) -> u32 {
        self.q * self.q + self.q + 1
    }

    /// All prime powers in `lo..=hi`, ascending.
    pub fn in_range(lo: u64, hi: u64) -> Vec<PrimePower> {
        (lo.max(2)..=hi).filter_map(|q| PrimePower::new(q).ok()).collect()
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        out.push(p);
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    out
}

/// An element of `F_{q^3}`, packed as the base-`p` integer of its
/// polynomial coefficients (coefficient of `t^i` is digit `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

/// Tables for `F_{q^3} = F_p[t]/(f)`.
#[derive(Debug, Clone)]
pub struct FieldContext {
    pp: PrimePower,
    degree: u32,
    order: u32,
    /// `f` as coefficients `c_0..c_{degree}`, monic.
    modulus: Vec<u32>,
    exp: Vec<FieldElem>,
    dlog: Vec<u32>,
}

impl FieldContext {
    /// Builds `F_{q^3}` over the lexicographically smallest primitive
    /// polynomial. Polynomials are ordered by their coefficient vectors read
    /// from `t^{3r-1}` down to `t^0`.
    pub fn new(pp: PrimePower) -> Result<Self, GfError> {
        if pp.q > MAX_Q {
            return Err(GfError::UnsupportedSize(pp.q as u64));
        }
        let p = pp.p;
        let degree = 3 * pp.r;
        let order = pp.q.pow(3);
        let group_order = (order - 1) as u64;
        let cofactors: Vec<u64> = prime_factors(group_order)
            .into_iter()
            .map(|l| group_order / l)
            .collect();

        let modulus = (0..p.pow(degree))
            .map(|m| {
                let mut c = digits(m, p, degree);
                c.push(1);
                c
            })
            .filter(|f| f[0] != 0 && is_irreducible(f, p))
            .find(|f| {
                let t = vec![0, 1];
                cofactors
                    .iter()
                    .all(|&e| poly_powmod(&t, e, f, p) != [1])
            })
            .ok_or(GfError::NoPrimitivePolynomial { p, degree })?;

        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut dlog = vec![u32::MAX; order as usize];
        let mut cur = vec![0u32; degree as usize];
        cur[0] = 1;
        for k in 0..order - 1 {
            let e = pack(&cur, p);
            if dlog[e as usize] != u32::MAX {
                return Err(GfError::NoPrimitivePolynomial { p, degree });
            }
            dlog[e as usize] = k;
            exp.push(FieldElem(e));
            mul_by_t(&mut cur, &modulus, p);
        }
        if pack(&cur, p) != 1 {
            return Err(GfError::NoPrimitivePolynomial { p, degree });
        }

        Ok(FieldContext {
            pp,
            degree,
            order,
            modulus,
            exp,
            dlog,
        })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    /// Number of elements, `q^3`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Extension degree over the prime field, `3r`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// The primitive generator `zeta`.
    pub fn zeta(&self) -> FieldElem {
        self.exp(1)
    }

    /// `zeta^k`, any `k`.
    pub fn exp(&self, k: u64) -> FieldElem {
        self.exp[(k % (self.order as u64 - 1)) as usize]
    }

    /// Discrete log to base `zeta`, `None` for zero.
    pub fn dlog(&self, a: FieldElem) -> Option<u32> {
        match self.dlog[a.0 as usize] {
            u32::MAX => None,
            k => Some(k),
        }
    }

    pub fn elem(&self, index: u32) -> Option<FieldElem> {
        (index < self.order).then_some(FieldElem(index))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Option<FieldElem> {
        if coeffs.len() > self.degree as usize || coeffs.iter().any(|&c| c >= self.pp.p) {
            return None;
        }
        Some(FieldElem(pack(coeffs, self.pp.p)))
    }

    /// Polynomial coefficients, constant term first, length `3r`.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.pp.p, self.degree)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.pp.p;
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        while x != 0 || y != 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.pp.p;
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x != 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match (self.dlog(a), self.dlog(b)) {
            (Some(i), Some(j)) => self.exp(i as u64 + j as u64),
            _ => FieldElem::ZERO,
        }
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        match self.dlog(a) {
            None if k == 0 => self.one(),
            None => FieldElem::ZERO,
            Some(i) => {
                let m = self.order as u64 - 1;
                self.exp((i as u64 % m) * (k % m))
            }
        }
    }

    /// `a^q`.
    pub fn frobenius_q(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.pp.q as u64)
    }

    /// `a + a^q + a^{q^2}`, an element of the subfield `F_q`.
    pub fn trace(&self, a: FieldElem) -> FieldElem {
        let a1 = self.frobenius_q(a);
        let a2 = self.frobenius_q(a1);
        self.add(self.add(a, a1), a2)
    }

    pub fn in_subfield(&self, a: FieldElem) -> bool {
        self.frobenius_q(a) == a
    }

    /// The `q` elements fixed by `x -> x^q`.
    pub fn subfield(&self) -> Vec<FieldElem> {
        self.elements().filter(|&a| self.in_subfield(a)).collect()
    }
}

fn digits(mut m: u32, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        out.push(m % p);
        m /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies `cur` (degree < deg f) by `t` modulo the monic `f`.
fn mul_by_t(cur: &mut [u32], f: &[u32], p: u32) {
    let n = cur.len();
    let top = cur[n - 1];
    for i in (1..n).rev() {
        cur[i] = cur[i - 1];
    }
    cur[0] = 0;
    if top != 0 {
        for i in 0..n {
            cur[i] = (cur[i] + (p - f[i]) * top) % p;
        }
    }
}

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small
    (1..p).find(|&x| (a * x) % p == 1).expect("nonzero residue")
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

/// Trial division by every monic polynomial of degree `1..=deg f / 2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = (f.len() - 1) as u32;
    for d in 1..=n / 2 {
        for m in 0..p.pow(d) {
            let mut g = digits(m, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> FieldContext {
        FieldContext::new(PrimePower::new(q).unwrap()).unwrap()
    }

    #[test]
    fn prime_power_factoring() {
        let pp = PrimePower::new(9).unwrap();
        assert_eq!((pp.p(), pp.r(), pp.q()), (3, 2, 9));
        assert_eq!(PrimePower::new(6), Err(GfError::NotPrimePower(6)));
        assert_eq!(PrimePower::new(1), Err(GfError::NotPrimePower(1)));
        let qs: Vec<u32> = PrimePower::in_range(2, 16).iter().map(|p| p.q()).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }

    #[test]
    fn too_large_is_rejected() {
        let pp = PrimePower::new(67).unwrap();
        assert_eq!(FieldContext::new(pp).unwrap_err(), GfError::UnsupportedSize(67));
    }

    #[test]
    fn gf8_generator_order() {
        let f = field(2);
        assert_eq!(f.order(), 8);
        let z = f.zeta();
        let order = (1..8).find(|&k| f.pow(z, k) == f.one()).unwrap();
        assert_eq!(order, 7);
    }

    #[test]
    fn gf64_subfield_has_four_elements() {
        let f = field(4);
        assert_eq!(f.order(), 64);
        let order = (1..64).find(|&k| f.pow(f.zeta(), k) == f.one()).unwrap();
        assert_eq!(order, 63);
        assert_eq!(f.subfield().len(), 4);
    }

    #[test]
    fn gf27_tables_invert() {
        let f = field(3);
        for k in 0..26 {
            assert_eq!(f.dlog(f.exp(k)), Some(k as u32));
        }
        assert_eq!(f.dlog(f.zero()), None);
    }

    #[test]
    fn modulus_is_smallest_primitive() {
        // t^3 + t + 1 is the first primitive cubic over F_2 in this ordering
        assert_eq!(field(2).modulus(), &[1, 1, 0, 1]);
        // over F_3: t^3 + 2t + 1
        assert_eq!(field(3).modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn trace_small_cases() {
        let f2 = field(2);
        assert_eq!(f2.trace(f2.zero()), f2.zero());
        assert_eq!(f2.trace(f2.one()), f2.one());
        let f3 = field(3);
        assert_eq!(f3.trace(f3.one()), f3.zero());
    }

    #[test]
    fn frobenius_has_order_three() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            for a in f.elements() {
                let b = f.frobenius_q(f.frobenius_q(f.frobenius_q(a)));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn frobenius_in_log_coordinates_q2() {
        let f = field(2);
        for k in 0..7 {
            assert_eq!(f.frobenius_q(f.exp(k)), f.exp(2 * k % 7));
        }
        assert_eq!(f.frobenius_q(f.zero()), f.zero());
    }

    #[test]
    fn add_and_neg_are_consistent() {
        let f = field(5);
        for a in f.elements().step_by(7) {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            assert_eq!(f.sub(a, a), f.zero());
        }
        let c = f.coeffs(f.zeta());
        assert_eq!(f.from_coeffs(&c), Some(f.zeta()));
    }
}
