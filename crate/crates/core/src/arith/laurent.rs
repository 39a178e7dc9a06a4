//! Truncated Laurent series with explicit precision.
//!
//! A series stores the coefficients for exponents
//! `valuation .. valuation + coeffs.len()` and an order `T`: everything at
//! exponents `>= T` is unknown. Every operation derives the order of its
//! result from the orders and valuations of its inputs, so an identity
//! checked below `T` is an identity, not an artefact of dropped terms.

use super::poly::DensePoly;
use super::ring::{QAlgebra, Ring};
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentSeries<R> {
    valuation: i64,
    coeffs: Vec<R>,
    order: i64,
}

impl<R: Ring> LaurentSeries<R> {
    /// Builds `sum coeffs[i] x^(valuation + i) + O(x^order)`.
    ///
    /// Coefficients at or beyond `order` are discarded and leading zeros
    /// are absorbed into the valuation.
    pub fn new(valuation: i64, mut coeffs: Vec<R>, order: i64) -> Self {
        let keep = (order - valuation).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(order),
            Some(k) => {
                coeffs.drain(..k);
                while coeffs.last().is_some_and(Ring::is_zero) {
                    coeffs.pop();
                }
                LaurentSeries {
                    valuation: valuation + k as i64,
                    coeffs,
                    order,
                }
            }
        }
    }

    /// `O(x^order)`
    pub fn zero(order: i64) -> Self {
        LaurentSeries {
            valuation: order,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(R::one(), 0, order)
    }

    pub fn monomial(c: R, exp: i64, order: i64) -> Self {
        Self::new(exp, vec![c], order)
    }

    /// A polynomial viewed as a series known below `order`.
    pub fn from_poly(p: &DensePoly<R>, order: i64) -> Self {
        Self::new(0, p.coeffs().to_vec(), order)
    }

    /// `sum p_m x^(-m)`, i.e. the polynomial evaluated at `1/x`.
    pub fn from_poly_inverse_var(p: &DensePoly<R>, order: i64) -> Self {
        let Some(deg) = p.degree() else {
            return Self::zero(order);
        };
        let coeffs = p.coeffs().iter().rev().cloned().collect();
        Self::new(-(deg as i64), coeffs, order)
    }

    /// Valuation of the known part; equals the order for `O(x^order)`.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^exp`. Asking beyond the order is an error.
    pub fn coeff(&self, exp: i64) -> Result<R> {
        if exp >= self.order {
            return Err(Error::BeyondTruncation {
                exponent: exp,
                order: self.order,
            });
        }
        let idx = exp - self.valuation;
        if idx < 0 {
            return Ok(R::zero());
        }
        Ok(self
            .coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(R::zero))
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        let v = self.valuation;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (v + i as i64, c))
    }

    /// Exponent of the highest stored nonzero coefficient.
    pub fn top_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.valuation + self.coeffs.len() as i64 - 1)
    }

    /// Lowers the order to `min(order, self.order)`.
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.valuation, self.coeffs.clone(), order.min(self.order))
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.is_zero() {
            return other.truncate(order);
        }
        if other.is_zero() {
            return self.truncate(order);
        }
        let lo = self.valuation.min(other.valuation);
        let hi = self
            .top_exponent()
            .unwrap()
            .max(other.top_exponent().unwrap())
            .min(order - 1);
        if hi < lo {
            return Self::zero(order);
        }
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.get(e);
                let b = other.get(e);
                match (a, b) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => R::zero(),
                }
            })
            .collect();
        Self::new(lo, coeffs, order)
    }

    fn get(&self, exp: i64) -> Option<&R> {
        let idx = exp - self.valuation;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
            order: self.order,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; the order of the result is
    /// `min(val(a) + ord(b), val(b) + ord(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.valuation + other.order).min(other.valuation + self.order);
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let valuation = self.valuation + other.valuation;
        let len =
            (self.coeffs.len() + other.coeffs.len() - 1).min((order - valuation).max(0) as usize);
        let mut out = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
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
        Self::new(valuation, out, order)
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.order - self.valuation);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut exp = n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Multiplies every coefficient by `c`.
    pub fn mul_coeff(&self, c: &R) -> Self {
        Self::new(
            self.valuation,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
            self.order,
        )
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + shift,
            coeffs: self.coeffs.clone(),
            order: self.order + shift,
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> LaurentSeries<S> {
        LaurentSeries::new(
            self.valuation,
            self.coeffs.iter().map(f).collect(),
            self.order,
        )
    }

    /// Reciprocal, via `x^(-v) * (unit part)^(-1)`. The leading coefficient
    /// must be a unit of the coefficient ring.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible(format!(
                "series vanishes below x^{}",
                self.order
            )));
        }
        let lead_inv = self.coeffs[0].unit_inverse().ok_or_else(|| {
            Error::NotInvertible(format!(
                "leading coefficient {:?} is not a unit",
                self.coeffs[0]
            ))
        })?;
        let rel = (self.order - self.valuation) as usize;
        let mut inv: Vec<R> = Vec::with_capacity(rel);
        inv.push(lead_inv.clone());
        let neg_lead_inv = lead_inv.neg();
        for k in 1..rel {
            let mut acc = R::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc.add(&self.coeffs[j].mul(&inv[k - j]));
            }
            inv.push(acc.mul(&neg_lead_inv));
        }
        Ok(Self::new(
            -self.valuation,
            inv,
            self.order - 2 * self.valuation,
        ))
    }

    /// Coefficient list between two exponents (inclusive), all known.
    pub fn coeff_window(&self, lo: i64, hi: i64) -> Result<Vec<R>> {
        (lo..=hi).map(|e| self.coeff(e)).collect()
    }
}

impl<R: QAlgebra> LaurentSeries<R> {
    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(
            self.valuation,
            self.coeffs.iter().map(|c| c.scale(q)).collect(),
            self.order,
        )
    }
}

/// `log(1 + x) = x - x^2/2 + x^3/3 - ... + O(x^order)`.
pub fn log1p_series(order: i64) -> Result<LaurentSeries<Rational>> {
    if order < 1 {
        return Err(Error::InvalidParameter(format!(
            "log1p order must be >= 1, got {order}"
        )));
    }
    let coeffs = (1..order)
        .map(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            Rational::new(sign, k).unwrap()
        })
        .collect();
    Ok(LaurentSeries::new(1, coeffs, order))
}

/// `s^(-n)`, truncated to at most `order`.
///
/// The leading monomial is factored out and the remaining unit power series
/// is inverted by the usual coefficient recurrence before raising to `n`.
pub fn laurent_pow_inv<R: Ring>(
    s: &LaurentSeries<R>,
    n: u32,
    order: i64,
) -> Result<LaurentSeries<R>> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "laurent_pow_inv needs n >= 1".into(),
        ));
    }
    let inv = s.inverse()?;
    Ok(inv.pow(n).truncate(order))
}

/// `exp(s) = sum s^i / i!`, truncated to at most `order`.
///
/// `s` must have valuation at least one, so the sum is finite below any
/// order; nilpotent coefficients end it earlier.
pub fn series_exp<R: QAlgebra>(s: &LaurentSeries<R>, order: i64) -> Result<LaurentSeries<R>> {
    if !s.is_zero() && s.valuation() < 1 {
        return Err(Error::InvalidParameter(format!(
            "exp needs an argument without constant term (valuation {})",
            s.valuation()
        )));
    }
    let order = order.min(s.order());
    let mut total = LaurentSeries::one(order);
    let mut term = total.clone();
    for i in 1.. {
        term = term
            .mul(s)
            .truncate(order)
            .scale(&Rational::from(i).recip()?);
        if term.is_zero() {
            break;
        }
        total = total.add(&term);
    }
    Ok(total.truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| Rational::from(c)).collect()
    }

    #[test]
    fn log1p_examples() {
        let s = log1p_series(3).unwrap();
        assert_eq!(s.valuation(), 1);
        assert_eq!(s.order(), 3);
        assert_eq!(s.coeff_window(1, 2).unwrap(), vec![q(1, 1), q(-1, 2)]);

        let z = log1p_series(1).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.order(), 1);

        let s = log1p_series(5).unwrap();
        assert_eq!(
            s.coeff_window(0, 4).unwrap(),
            vec![q(0, 1), q(1, 1), q(-1, 2), q(1, 3), q(-1, 4)]
        );
        assert!(log1p_series(0).is_err());
    }

    #[test]
    fn coefficient_beyond_order_is_an_error() {
        let s = log1p_series(3).unwrap();
        assert!(matches!(
            s.coeff(3),
            Err(Error::BeyondTruncation {
                exponent: 3,
                order: 3
            })
        ));
        assert_eq!(s.coeff(-4).unwrap(), q(0, 1));
    }

    #[test]
    fn inverse_powers_of_log1p() {
        let l = log1p_series(14).unwrap();
        let inv = laurent_pow_inv(&l, 5, 6)
            .unwrap()
            .scale(&Rational::factorial(4));
        assert_eq!(inv.valuation(), -5);
        assert_eq!(inv.order(), 6);
        assert_eq!(
            inv.coeff_window(-5, 0).unwrap(),
            ints(&[24, 60, 50, 15, 1, 0])
        );
        assert_eq!(
            inv.coeff_window(1, 5).unwrap(),
            vec![
                q(-1, 252),
                q(1, 504),
                q(-19, 30240),
                q(-1, 20160),
                q(53, 147840)
            ]
        );
    }

    #[test]
    fn monomial_inverse() {
        let x = LaurentSeries::monomial(Rational::from(1), 1, 10);
        let inv = laurent_pow_inv(&x, 2, 100).unwrap();
        assert_eq!(inv.valuation(), -2);
        assert_eq!(inv.terms().count(), 1);
        assert_eq!(inv.coeff(-2).unwrap(), q(1, 1));
        assert_eq!(inv.order(), 7);
    }

    #[test]
    fn zero_is_not_invertible() {
        let z = LaurentSeries::<Rational>::zero(4);
        assert!(matches!(
            laurent_pow_inv(&z, 1, 4),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn exp_examples() {
        let t = LaurentSeries::monomial(Rational::from(1), 1, 3);
        let e = series_exp(&t, 3).unwrap();
        assert_eq!(
            e.coeff_window(0, 2).unwrap(),
            vec![q(1, 1), q(1, 1), q(1, 2)]
        );

        let e0 = series_exp(&LaurentSeries::<Rational>::zero(5), 5).unwrap();
        assert_eq!(e0.coeff_window(0, 4).unwrap(), ints(&[1, 0, 0, 0, 0]));

        let bad = LaurentSeries::new(0, ints(&[1, 1]), 4);
        assert!(series_exp(&bad, 4).is_err());
    }

    #[test]
    fn exp_t_times_exp_t_minus_one() {
        // e^t (e^t - 1): expand e^{2t} - e^t independently.
        let t = LaurentSeries::monomial(Rational::from(1), 1, 6);
        let e = series_exp(&t, 6).unwrap();
        let prod = e.mul(&e.sub(&LaurentSeries::one(6)));
        assert_eq!(prod.coeff(3).unwrap(), q(7, 6));
        let oracle = (Rational::from(8).sub(&Rational::from(1))).scale(&q(1, 6));
        assert_eq!(prod.coeff(3).unwrap(), oracle);
    }

    #[test]
    fn product_order_bookkeeping() {
        let a = LaurentSeries::new(-2, ints(&[1, 1]), 3);
        let b = LaurentSeries::new(1, ints(&[2]), 5);
        let p = a.mul(&b);
        // min(v_a + o_b, v_b + o_a) = min(-2 + 5, 1 + 3)
        assert_eq!(p.order(), 3);
        assert_eq!(p.valuation(), -1);
    }

    #[test]
    fn inverse_poly_variable() {
        let p = DensePoly::new(ints(&[0, 1, 3, 2]));
        let s = LaurentSeries::from_poly_inverse_var(&p, 2);
        assert_eq!(s.valuation(), -3);
        assert_eq!(s.coeff_window(-3, 1).unwrap(), ints(&[2, 3, 1, 0, 0]));
    }
}
