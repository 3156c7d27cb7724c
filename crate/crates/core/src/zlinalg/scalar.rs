use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer coefficients used by the Hermite accumulator. Machine integers
/// report overflow through `None`; big integers never fail.
pub(crate) trait Scalar: Clone + PartialEq + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    /// `floor(self / d)` for `d > 0`.
    fn div_floor(&self, d: &Self) -> Self;
    /// Quotient of an exact division.
    fn div_exact(&self, d: &Self) -> Option<Self>;
    fn divides(&self, n: &Self) -> bool;
    /// `(g, s, t)` with `g = gcd(a, b) > 0` and `g = s a + t b`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i64::checked_add(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i64::checked_mul(*self, *o)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn div_floor(&self, d: &Self) -> Self {
        self.div_euclid(*d)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn divides(&self, n: &Self) -> bool {
        *self != 0 && (n.checked_rem(*self) == Some(0))
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let (mut r0, mut r1) = (*a, *b);
        let (mut s0, mut s1) = (1i64, 0i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0.checked_div(r1)?;
            (r0, r1) = (r1, r0.checked_sub(q.checked_mul(r1)?)?);
            (s0, s1) = (s1, s0.checked_sub(q.checked_mul(s1)?)?);
            (t0, t1) = (t1, t0.checked_sub(q.checked_mul(t1)?)?);
        }
        if r0 < 0 {
            Some((r0.checked_neg()?, s0.checked_neg()?, t0.checked_neg()?))
        } else {
            Some((r0, s0, t0))
        }
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        i64::try_from(b).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_floor(&self, d: &Self) -> Self {
        Integer::div_floor(self, d)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn divides(&self, n: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&(n % self))
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(12i64, 18), (-12, 18), (7, -3), (0, 5), (5, 0), (-4, -6)] {
            let (g, s, t) = <i64 as Scalar>::ext_gcd(&a, &b).unwrap();
            assert!(g > 0);
            assert_eq!(g, a.gcd(&b));
            assert_eq!(s * a + t * b, g);
            let (gb, sb, tb) =
                <BigInt as Scalar>::ext_gcd(&BigInt::from(a), &BigInt::from(b)).unwrap();
            assert_eq!(gb, BigInt::from(g));
            assert_eq!(sb * a + tb * b, gb);
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(Scalar::checked_mul(&i64::MAX, &2), None);
        assert_eq!(<i64 as Scalar>::from_big(&(BigInt::from(i64::MAX) + 1)), None);
    }
}
