//! Exact arithmetic kernels: rationals, dense polynomials and truncated
//! Laurent series over an arbitrary commutative coefficient ring.

mod laurent;
mod poly;
mod rational;
mod ring;

pub use laurent::{laurent_pow_inv, log1p_series, series_exp, LaurentSeries};
pub use poly::DensePoly;
pub use rational::{rat_arith, RatOp, Rational};
pub use ring::{QAlgebra, Ring};
