use std::fmt::Debug;

use super::Rational;

/// Commutative ring with identity.
///
/// Everything in [`crate::arith`] is generic over this contract; concrete
/// client rings (the tautological algebra, the GRR ring) live elsewhere.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Multiplicative inverse, when `self` is a unit.
    fn unit_inverse(&self) -> Option<Self> {
        None
    }

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring containing the rationals.
pub trait QAlgebra: Ring {
    fn scale(&self, q: &Rational) -> Self;

    fn from_rational(q: &Rational) -> Self {
        Self::one().scale(q)
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }
}
