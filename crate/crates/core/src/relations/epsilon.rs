//! The error series `eps(x, t) = H(1/x, t) - G(t / log(1+x))`.
//!
//! Series are in `x` with coefficients that are polynomials in `t` over `R`.

use crate::arith::{DensePoly, LaurentSeries, Rational};
use crate::combinat::inv_log_power;
use crate::error::{Error, Result};
use crate::tautalg::{build_H, TautElement};

pub type TPoly = DensePoly<TautElement>;

fn check_orders(x_order: i64, t_order: usize) -> Result<()> {
    if x_order < 1 {
        return Err(Error::InsufficientTruncation(format!(
            "x-order {x_order} leaves the x^0 coefficient unknown"
        )));
    }
    if t_order < 2 {
        return Err(Error::InsufficientTruncation(format!(
            "t-order {t_order} leaves t^0 and t^1 unknown"
        )));
    }
    Ok(())
}

/// `sum_n c_n t^n / log(1+x)^n` for a `t`-polynomial `sum_n c_n t^n`,
/// known below `x^x_order`. Powers `t^n` with `n >= t_order` are dropped.
pub(crate) fn substitute_log(
    c: &TPoly,
    x_order: i64,
    t_order: usize,
) -> Result<LaurentSeries<TPoly>> {
    let mut out = LaurentSeries::zero(x_order);
    for (n, e) in c.iter_terms() {
        if n >= t_order {
            break;
        }
        if n == 0 {
            out = out.add(&LaurentSeries::monomial(
                TPoly::constant(e.clone()),
                0,
                x_order,
            ));
            continue;
        }
        let tn = TPoly::monomial(e.clone(), n);
        let l = inv_log_power(n as u32, x_order)?;
        out = out.add(&l.map(|q| tn.scale(q)));
    }
    Ok(out)
}

/// `G(t / log(1+x))`.
pub fn g_substituted(g: u32, x_order: i64, t_order: usize) -> Result<LaurentSeries<TPoly>> {
    check_orders(x_order, t_order)?;
    let gt = crate::tautalg::build_G(g)?.u_constant_part();
    substitute_log(&gt, x_order, t_order)
}

/// `H(1/x, t)`, a Laurent polynomial in `x`.
pub fn h_inverse_x(g: u32, x_order: i64, t_order: usize) -> Result<LaurentSeries<TPoly>> {
    check_orders(x_order, t_order)?;
    let h = build_H(g)?;
    let top = h.u_degree().unwrap_or(0);
    let mut by_x: Vec<Vec<TautElement>> = vec![Vec::new(); top + 1];
    for (n, c) in h.t_terms() {
        if n >= t_order {
            break;
        }
        for (m, e) in c.iter_terms() {
            let row = &mut by_x[top - m];
            if row.len() <= n {
                row.resize(n + 1, TautElement::zero_in(g));
            }
            row[n] = e.clone();
        }
    }
    let coeffs = by_x.into_iter().map(TPoly::new).collect();
    Ok(LaurentSeries::new(-(top as i64), coeffs, x_order))
}

#[derive(Debug, Clone)]
pub struct EpsilonReport {
    pub g: u32,
    pub x_order: i64,
    pub t_order: usize,
    pub epsilon: LaurentSeries<TPoly>,
    /// Lowest `x`-exponent with a nonzero coefficient.
    pub x_valuation: Option<i64>,
    /// Lowest `t`-exponent over all known coefficients.
    pub t_valuation: Option<usize>,
    /// `eps = O(x t^2)` on the known window.
    pub bound_x_t2: bool,
    /// `eps = O(x^0 t^2)` on the known window.
    pub bound_1_t2: bool,
}

impl EpsilonReport {
    /// Coefficient of `x^i t^j`.
    pub fn coefficient(&self, i: i64, j: usize) -> Result<TautElement> {
        if j >= self.t_order {
            return Err(Error::BeyondTruncation {
                exponent: j as i64,
                order: self.t_order as i64,
            });
        }
        Ok(self.epsilon.coeff(i)?.coeff(j))
    }
}

pub fn epsilon_series(g: u32, x_order: i64, t_order: usize) -> Result<EpsilonReport> {
    check_orders(x_order, t_order)?;
    let eps = h_inverse_x(g, x_order, t_order)?.sub(&g_substituted(g, x_order, t_order)?);
    let x_valuation = (!eps.is_zero()).then(|| eps.valuation());
    let t_valuation = eps
        .terms()
        .filter_map(|(_, c)| c.iter_terms().next().map(|(n, _)| n))
        .min();
    let t_ok = t_valuation.is_none_or(|v| v >= 2);
    Ok(EpsilonReport {
        g,
        x_order,
        t_order,
        x_valuation,
        t_valuation,
        bound_x_t2: t_ok && x_valuation.is_none_or(|v| v >= 1),
        bound_1_t2: t_ok && x_valuation.is_none_or(|v| v >= 0),
        epsilon: eps,
    })
}

/// Scalar `[x^(-m)] x / (1+x) / log(1+x)^n`.
pub(crate) fn stirling_scalar(m: u32, n: u32) -> Result<Rational> {
    // x/(1+x) = x - x^2 + ..., exact through x^(n+1)
    let order = 1 - m as i64;
    let l = inv_log_power(n, order)?;
    let alternating = (0..=n)
        .map(|k| Rational::from(if k % 2 == 0 { 1 } else { -1 }))
        .collect();
    let damp = LaurentSeries::new(1, alternating, n as i64 + 2);
    let prod = l.mul(&damp);
    prod.coeff(-(m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{QAlgebra, Ring};

    fn c(g: u32, j: u32) -> TautElement {
        TautElement::generator(g, j).unwrap()
    }

    #[test]
    fn genus_one_coefficients() {
        let rep = epsilon_series(1, 4, 3).unwrap();
        // 1/log(1+x)^2 = x^-2 + x^-1 + 1/12 + 0 x - x^2/240 + ...
        assert_eq!(
            rep.coefficient(0, 2).unwrap(),
            c(1, 0).scale(&Rational::new(-1, 12).unwrap())
        );
        assert!(rep.coefficient(1, 2).unwrap().is_zero());
        assert_eq!(
            rep.coefficient(2, 2).unwrap(),
            c(1, 0).scale(&Rational::new(1, 240).unwrap())
        );
        assert!(rep.coefficient(-1, 2).unwrap().is_zero());
        assert!(rep.coefficient(-2, 2).unwrap().is_zero());
        assert_eq!(rep.x_valuation, Some(0));
        assert!(!rep.bound_x_t2);
        assert!(rep.bound_1_t2);
    }

    #[test]
    fn principal_part_cancels() {
        for g in 1..=5 {
            let rep = epsilon_series(g, 3, g as usize + 2).unwrap();
            assert!(rep.bound_1_t2, "g={g}");
            assert_eq!(rep.t_valuation, Some(2));
        }
    }

    #[test]
    fn insufficient_orders() {
        assert!(matches!(
            epsilon_series(2, 0, 5),
            Err(Error::InsufficientTruncation(_))
        ));
        assert!(matches!(
            epsilon_series(2, 3, 1),
            Err(Error::InsufficientTruncation(_))
        ));
        let rep = epsilon_series(2, 2, 5).unwrap();
        assert!(rep.coefficient(2, 2).is_err());
    }

    #[test]
    fn scalar_closed_form() {
        use crate::combinat::stirling2;
        for n in 2..=9u32 {
            for m in 0..=n {
                let expected = Rational::factorial(m)
                    .mul(&Rational::from(stirling2(n - 1, m)))
                    .checked_div(&Rational::factorial(n - 1))
                    .unwrap();
                assert_eq!(stirling_scalar(m, n).unwrap(), expected, "m={m} n={n}");
            }
        }
        assert_eq!(
            stirling_scalar(2, 5).unwrap(),
            Rational::new(7, 12).unwrap()
        );
    }
}
