//! Stirling numbers, the polynomials `P_n(u)` and the sums `B_d(a)`.
//!
//! `P_n(u) = sum_{i >= 1} i^(n-1) (u / (1 + u))^i` is a polynomial of degree
//! `n`. It is produced three independent ways (Stirling numbers, the
//! generating function `u e^t / (1 - u (e^t - 1))`, and the principal part
//! of `(n-1)! / log(1+x)^n`) so each route checks the others.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Pow, Zero};

use crate::arith::{
    laurent_pow_inv, log1p_series, series_exp, DensePoly, LaurentSeries, Rational, Ring,
};
use crate::error::{Error, Result};

/// Memoized Stirling numbers of the second kind.
///
/// Values are computed by the alternating binomial sum. Concurrent writers
/// always insert identical values, so races are harmless.
#[derive(Default)]
pub struct StirlingTable {
    memo: RwLock<HashMap<(u32, u32), BigInt>>,
}

impl StirlingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u32, m: u32) -> BigInt {
        if m > n || (m == 0 && n > 0) {
            return BigInt::zero();
        }
        if let Some(v) = self.memo.read().unwrap().get(&(n, m)) {
            return v.clone();
        }
        let v = stirling2_sum(n, m);
        self.memo.write().unwrap().insert((n, m), v.clone());
        v
    }
}

fn stirling2_sum(n: u32, m: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 0..=m {
        let term = binomial(BigInt::from(m), BigInt::from(k)) * Pow::pow(BigInt::from(k), n);
        if (m - k).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let mut mfact = BigInt::one();
    for i in 2..=m {
        mfact *= i;
    }
    debug_assert!((&acc % &mfact).is_zero());
    acc / mfact
}

fn table() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(StirlingTable::new)
}

/// Stirling number of the second kind `S(n, m)`; zero out of range.
pub fn stirling2(n: u32, m: u32) -> BigInt {
    table().get(n, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PRoute {
    Stirling,
    GenFunc,
    Laurent,
}

/// `P_n(u)` with its index.
#[derive(Debug, Clone, PartialEq)]
pub struct PnPolynomial {
    pub n: u32,
    pub coeffs: DensePoly<Rational>,
}

impl PnPolynomial {
    /// Degree `n`, zero constant term, and `[u^m] = (m-1)! S(n,m)` a positive
    /// integer for `1 <= m <= n`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n as usize;
        if self.coeffs.degree() != Some(n) {
            return Err(Error::InvariantViolation(format!(
                "P_{} has wrong degree",
                self.n
            )));
        }
        if !self.coeffs.coeff(0).is_zero() {
            return Err(Error::InvariantViolation(format!(
                "P_{} has a constant term",
                self.n
            )));
        }
        for m in 1..=self.n {
            let c = self.coeffs.coeff(m as usize);
            let expected = Rational::factorial(m - 1).mul(&Rational::from(stirling2(self.n, m)));
            if c != expected || !c.is_integer() || !c.is_positive() {
                return Err(Error::InvariantViolation(format!(
                    "P_{}: coefficient of u^{m} is {c}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        self.coeffs.eval(u)
    }
}

pub fn p_poly(n: u32, route: PRoute) -> Result<PnPolynomial> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "P_n needs n >= 1, got {n}"
        )));
    }
    let coeffs = match route {
        PRoute::Stirling => p_by_stirling(n),
        PRoute::GenFunc => p_by_genfunc(n)?,
        PRoute::Laurent => p_by_laurent(n)?,
    };
    Ok(PnPolynomial { n, coeffs })
}

fn p_by_stirling(n: u32) -> DensePoly<Rational> {
    let mut coeffs = vec![Rational::zero()];
    for m in 1..=n {
        coeffs.push(Rational::factorial(m - 1).mul(&Rational::from(stirling2(n, m))));
    }
    DensePoly::new(coeffs)
}

/// `(n-1)! [t^(n-1)] u e^t / (1 - u (e^t - 1))` as a t-series over `Q[u]`.
fn p_by_genfunc(n: u32) -> Result<DensePoly<Rational>> {
    type UPoly = DensePoly<Rational>;
    let order = n as i64;
    let t = LaurentSeries::monomial(UPoly::one(), 1, order);
    let et = series_exp(&t, order)?;
    let u = UPoly::monomial(Rational::one(), 1);
    let denom = LaurentSeries::one(order).sub(&et.sub(&LaurentSeries::one(order)).mul_coeff(&u));
    let gf = et.mul_coeff(&u).mul(&denom.inverse()?);
    let c = gf.coeff(order - 1)?;
    Ok(c.scale(&Rational::factorial(n - 1)))
}

/// Principal part of `(n-1)! / log(1+x)^n`, read with `u = 1/x`.
fn p_by_laurent(n: u32) -> Result<DensePoly<Rational>> {
    let expansion = log_inverse_power(n, 0)?;
    let mut coeffs = vec![Rational::zero()];
    for m in 1..=n as i64 {
        coeffs.push(expansion.coeff(-m)?);
    }
    Ok(DensePoly::new(coeffs))
}

/// `(n-1)! / log(1+x)^n`, known below `x^order`.
pub fn log_inverse_power(n: u32, order: i64) -> Result<LaurentSeries<Rational>> {
    Ok(inv_log_power(n, order)?.scale(&Rational::factorial(n - 1)))
}

/// `1 / log(1+x)^n`, known below `x^order`.
pub fn inv_log_power(n: u32, order: i64) -> Result<LaurentSeries<Rational>> {
    if n < 1 {
        return Err(Error::InvalidParameter("log power needs n >= 1".into()));
    }
    let log = log1p_series((order + n as i64 + 1).max(2))?;
    let s = laurent_pow_inv(&log, n, order)?;
    debug_assert!(s.order() == order);
    Ok(s)
}

/// `B_d(a) = sum_{i_k >= 1} (-1)^(d - |i|) C(d, |i|) prod i_k^(a_k)`.
pub fn b_sum(d: u32, a: &[u32]) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::InvalidParameter(
            "B_d needs a nonempty exponent list".into(),
        ));
    }
    fn walk(d: u32, a: &[u32], used: u32, weight: BigInt, acc: &mut BigInt) {
        match a.split_first() {
            None => {
                let term = binomial(BigInt::from(d), BigInt::from(used)) * weight;
                if (d - used).is_multiple_of(2) {
                    *acc += term;
                } else {
                    *acc -= term;
                }
            }
            Some((&e, rest)) => {
                for i in 1..=(d - used) {
                    // remaining indices need at least one each
                    if used + i + rest.len() as u32 > d {
                        break;
                    }
                    walk(
                        d,
                        rest,
                        used + i,
                        &weight * Pow::pow(BigInt::from(i), e),
                        acc,
                    );
                }
            }
        }
    }
    let mut acc = BigInt::zero();
    walk(d, a, 0, BigInt::one(), &mut acc);
    Ok(Rational::from(acc))
}

/// `[u^d] P_{a_1+1}(u) ... P_{a_r+1}(u) / (1 + u)`.
pub fn b_gen(d: u32, a: &[u32]) -> Result<Rational> {
    if a.is_empty() {
        return Err(Error::InvalidParameter(
            "B_d needs a nonempty exponent list".into(),
        ));
    }
    let order = d as usize + 1;
    let mut prod = DensePoly::<Rational>::one();
    for &e in a {
        prod = prod.mul_trunc(&p_poly(e + 1, PRoute::Stirling)?.coeffs, order);
    }
    let geometric = DensePoly::new(
        (0..order)
            .map(|k| {
                if k % 2 == 0 {
                    Rational::one()
                } else {
                    Rational::one().neg()
                }
            })
            .collect(),
    );
    Ok(prod.mul_trunc(&geometric, order).coeff(d as usize))
}

/// Result of checking `(n-1)!/log(1+x)^n = P_n(1/x) + O(x)`.
#[derive(Debug, Clone)]
pub struct LogPowerReport {
    pub n: u32,
    pub order: i64,
    pub expansion: LaurentSeries<Rational>,
    /// `(n-1)!/log(1+x)^n - P_n(1/x)`
    pub residual: LaurentSeries<Rational>,
    /// Every coefficient of the residual at exponents `<= 0` vanishes.
    pub holds: bool,
    /// The coefficients at negative exponents agree.
    pub principal_part_holds: bool,
    pub constant_term: Rational,
}

/// Expands `(n-1)!/log(1+x)^n` through `x^order` and compares with `P_n(1/x)`.
pub fn verify_identity4(n: u32, order: i64) -> Result<LogPowerReport> {
    if n < 1 || order < 1 {
        return Err(Error::InvalidParameter(format!(
            "identity check needs n >= 1 and order >= 1 (got n = {n}, order = {order})"
        )));
    }
    let expansion = log_inverse_power(n, order + 1)?;
    if expansion.order() < 1 {
        return Err(Error::InsufficientTruncation(format!(
            "expansion known only below x^{}",
            expansion.order()
        )));
    }
    let p = p_poly(n, PRoute::Stirling)?;
    let principal = LaurentSeries::from_poly_inverse_var(&p.coeffs, expansion.order());
    let residual = expansion.sub(&principal);
    let holds = residual.valuation() >= 1;
    let principal_part_holds = residual.valuation() >= 0;
    let constant_term = residual.coeff(0)?;
    Ok(LogPowerReport {
        n,
        order,
        expansion,
        residual,
        holds,
        principal_part_holds,
        constant_term,
    })
}

/// `P_n(-1)`, which vanishes for `n > 1`.
pub fn p_at_minus_one(n: u32) -> Result<Rational> {
    Ok(p_poly(n, PRoute::Stirling)?.eval(&Rational::from(-1)))
}
