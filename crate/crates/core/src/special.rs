//! Special functions: normal density and distribution, Gamma, Pochhammer
//! symbols and the Gauss hypergeometric series.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Standard normal density.
pub fn normal_pdf<T: Scalar>(x: T) -> T {
    let x = x.as_f64();
    T::lit((-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt())
}

/// Standard normal distribution function.
pub fn normal_cdf<T: Scalar>(x: T) -> T {
    T::lit(0.5 * libm::erfc(-x.as_f64() / std::f64::consts::SQRT_2))
}

pub fn gamma<T: Scalar>(x: T) -> T {
    T::lit(libm::tgamma(x.as_f64()))
}

/// Rising factorial `(a)_k = a (a + 1) ... (a + k - 1)`.
pub fn pochhammer<T: Scalar>(a: T, k: usize) -> T {
    (0..k).fold(T::one(), |p, i| p * (a + T::from_count(i)))
}

/// Relative size below which a series term ends the summation.
pub const SERIES_TOL: f64 = 1e-14;
/// Term cap of [`hyp2f1`].
pub const SERIES_CAP: usize = 10_000;

/// `2F1(a, b; c; x)` by its power series for `|x| < 1`.
///
/// Summation stops once a term falls below `tol` in absolute value; hitting
/// `cap` terms first is reported as divergence, as is `|x| >= 1`.
pub fn hyp2f1_series<T: Scalar>(a: T, b: T, c: T, x: T, tol: T, cap: usize) -> Result<T> {
    if !(x.abs() < T::one()) {
        return Err(Error::SeriesDiverged(x.as_f64()));
    }
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..cap {
        let kt = T::from_count(k);
        term = term * (a + kt) * (b + kt) / ((c + kt) * (kt + T::one())) * x;
        sum = sum + term;
        if term.abs() < tol {
            return Ok(sum);
        }
    }
    Err(Error::SeriesDiverged(x.as_f64()))
}

/// `2F1(a, b; c; x)` with the default tolerance and cap.
pub fn hyp2f1<T: Scalar>(a: T, b: T, c: T, x: T) -> Result<T> {
    hyp2f1_series(a, b, c, x, T::lit(SERIES_TOL), SERIES_CAP)
}
