use super::ring::{QAlgebra, Ring};
use super::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
///
/// The highest stored coefficient is always nonzero; the zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct DensePoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> DensePoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^exp`
    pub fn monomial(c: R, exp: usize) -> Self {
        if c.is_zero() {
            return Self::new(Vec::new());
        }
        let mut coeffs = vec![R::zero(); exp + 1];
        coeffs[exp] = c;
        DensePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i`; zero above the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeff_ref(&self, i: usize) -> Option<&R> {
        self.coeffs.get(i)
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, &R)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Drops every term of degree `>= order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order).cloned().collect())
    }

    /// Product with all terms of degree `>= order` discarded.
    pub fn mul_trunc(&self, other: &Self, order: usize) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() || order == 0 {
            return Self::new(Vec::new());
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(order);
        let mut out = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> DensePoly<S> {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn mul_coeff(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Synthetic division by the monic linear polynomial `x - root`.
    /// Returns `(quotient, remainder)`.
    pub fn div_by_linear(&self, root: &R) -> (Self, R) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::new(Vec::new()), R::zero());
        }
        let mut quot = vec![R::zero(); n - 1];
        let mut carry = R::zero();
        for k in (0..n).rev() {
            let value = self.coeffs[k].add(&carry.mul(root));
            if k == 0 {
                return (Self::new(quot), value);
            }
            quot[k - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    /// Exact division by `x - root`; a nonzero remainder is an error.
    pub fn exact_div_by_linear(&self, root: &R) -> Result<Self> {
        let (q, rem) = self.div_by_linear(root);
        if !rem.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "division by linear factor left remainder {rem:?}"
            )));
        }
        Ok(q)
    }
}

impl<R: QAlgebra> DensePoly<R> {
    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale(q)).collect())
    }

    /// `exp(p)` truncated below `x^order`. Requires `p(0) = 0`.
    pub fn exp_trunc(&self, order: usize) -> Result<Self> {
        if self.coeffs.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::InvalidParameter(
                "exp of a polynomial with nonzero constant term".into(),
            ));
        }
        let mut total = Self::one().truncate(order);
        let mut term = total.clone();
        for i in 1.. {
            term = term
                .mul_trunc(self, order)
                .scale(&Rational::from(i as i64).recip()?);
            if term.coeffs.is_empty() {
                break;
            }
            total = total.add(&term);
        }
        Ok(total)
    }
}

impl<R: Ring> Ring for DensePoly<R> {
    fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        DensePoly::constant(R::one())
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(out)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_trunc(other, usize::MAX)
    }
    fn neg(&self) -> Self {
        DensePoly {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn unit_inverse(&self) -> Option<Self> {
        match self.coeffs.as_slice() {
            [c] => c.unit_inverse().map(Self::constant),
            _ => None,
        }
    }
}

impl<R: QAlgebra> QAlgebra for DensePoly<R> {
    fn scale(&self, q: &Rational) -> Self {
        DensePoly::scale(self, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> DensePoly<Rational> {
        DensePoly::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[]).is_zero());
    }

    #[test]
    fn product_and_truncation() {
        let a = p(&[1, 1]);
        assert_eq!(a.mul(&a), p(&[1, 2, 1]));
        assert_eq!(a.mul_trunc(&a, 2), p(&[1, 2]));
    }

    #[test]
    fn synthetic_division() {
        // u + u^2 = u (1 + u)
        let (q, r) = p(&[0, 1, 1]).div_by_linear(&Rational::from(-1));
        assert_eq!(q, p(&[0, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[1, 0, 1]).div_by_linear(&Rational::from(-1));
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, Rational::from(2));
        assert!(p(&[1, 0, 1])
            .exact_div_by_linear(&Rational::from(-1))
            .is_err());
    }

    #[test]
    fn exp_of_t() {
        let e = p(&[0, 1]).exp_trunc(3).unwrap();
        let half = Rational::new(1, 2).unwrap();
        assert_eq!(
            e,
            DensePoly::new(vec![Rational::from(1), Rational::from(1), half])
        );
        assert_eq!(p(&[]).exp_trunc(4).unwrap(), p(&[1]));
        assert!(p(&[1, 1]).exp_trunc(3).is_err());
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            p(&[0, 1, 3, 2]).eval(&Rational::from(-1)),
            Rational::from(0)
        );
        assert_eq!(p(&[1, 2, 3]).eval(&Rational::from(2)), Rational::from(17));
    }
}
