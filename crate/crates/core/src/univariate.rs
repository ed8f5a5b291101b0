//! Univariate M-quantiles through the generalized inverse of the G function.
//!
//! For a loss `rho` with left derivative `psi_-`, the function
//!
//! ```text
//! G(theta) = E[|psi_-(Z - theta)| 1[Z <= theta]] / E[|psi_-(Z - theta)|]
//! ```
//!
//! is a distribution function, and the order-`alpha` M-quantile is
//! `inf { theta : G(theta) >= alpha }`. The absolute loss gives the classical
//! left-continuous quantile and the quadratic loss gives the expectile.

use crate::error::{Error, Result};
use crate::loss::{LossSpec, Order};
use crate::scalar::Scalar;

/// Iteration cap of the bisection used for Huber and power losses.
const MAX_BISECTION: usize = 200;

/// A finite weighted sample on the real line.
#[derive(Clone, Debug)]
pub struct Series<T> {
    values: Vec<T>,
    weights: Vec<T>,
    /// `(value, weight)` sorted by value.
    sorted: Vec<(T, T)>,
}

impl<T: Scalar> Series<T> {
    /// Uniformly weighted series.
    pub fn new(values: Vec<T>) -> Result<Self> {
        let n = values.len();
        let w = T::one() / T::from_count(n.max(1));
        Self::build(values, vec![w; n])
    }

    /// Weighted series; weights are normalized to sum to one.
    pub fn weighted(values: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != values.len() {
            return Err(Error::InvalidSeries(format!("{} values but {} weights", values.len(), weights.len())));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidSeries("weights must be finite and nonnegative".into()));
        }
        let total: T = weights.iter().copied().sum();
        if total <= T::zero() {
            return Err(Error::InvalidSeries("weights sum to zero".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::build(values, weights)
    }

    fn build(values: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSeries(format!("need at least 2 values, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries("values must be finite".into()));
        }
        let mut sorted: Vec<(T, T)> = values.iter().copied().zip(weights.iter().copied()).collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
        let mut charged = sorted.iter().filter(|(_, w)| *w > T::zero()).map(|(v, _)| *v);
        let first = charged.next();
        if first.is_none() || charged.all(|v| Some(v) == first) {
            return Err(Error::InvalidSeries("all mass sits at a single value".into()));
        }
        Ok(Series { values, weights, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Smallest value carrying positive weight.
    pub fn min(&self) -> T {
        self.sorted.iter().find(|(_, w)| *w > T::zero()).map(|p| p.0).unwrap_or(self.sorted[0].0)
    }

    /// Largest value carrying positive weight.
    pub fn max(&self) -> T {
        self.sorted.iter().rev().find(|(_, w)| *w > T::zero()).map(|p| p.0).unwrap_or(self.sorted[0].0)
    }

    pub fn mean(&self) -> T {
        self.sorted.iter().fold(T::zero(), |acc, &(v, w)| acc + v * w)
    }

    /// Numerator and denominator of `G(theta)`.
    fn g_parts(&self, loss: &LossSpec<T>, theta: T) -> (T, T) {
        let mut num = T::zero();
        let mut den = T::zero();
        for &(z, w) in &self.sorted {
            let a = w * loss.psi_weight(z - theta);
            den = den + a;
            if z <= theta {
                num = num + a;
            }
        }
        (num, den)
    }

    /// `G(theta)`, a right-continuous distribution function in `theta`.
    pub fn g_function(&self, loss: &LossSpec<T>, theta: T) -> Result<T> {
        let (num, den) = self.g_parts(loss, theta);
        if den <= T::zero() {
            return Err(Error::DegenerateDenominator);
        }
        Ok(num / den)
    }

    /// Left limit `G(theta - 0)`.
    pub fn g_left_limit(&self, loss: &LossSpec<T>, theta: T) -> Result<T> {
        if loss.is_absolute() {
            // G is the ECDF; its left limit is the strict ECDF.
            Ok(self.sorted.iter().filter(|(z, _)| *z < theta).fold(T::zero(), |acc, &(_, w)| acc + w))
        } else {
            self.g_function(loss, theta)
        }
    }

    /// Order-`alpha` M-quantile `inf { theta : G(theta) >= alpha }`.
    pub fn m_quantile(&self, loss: &LossSpec<T>, order: Order<T>) -> T {
        let alpha = order.value();
        match loss {
            LossSpec::Quadratic => self.expectile(order),
            l if l.is_absolute() => {
                // Cumulative weights are sums of 1/n terms; absorb their rounding
                // so that alpha on a step picks the lower order statistic.
                let slack = T::epsilon() * T::from_count(4 * self.len());
                let mut cum = T::zero();
                for &(z, w) in &self.sorted {
                    cum = cum + w;
                    if w > T::zero() && cum >= alpha - slack {
                        return z;
                    }
                }
                self.max()
            }
            _ => self.bisect_quantile(loss, alpha),
        }
    }

    fn bisect_quantile(&self, loss: &LossSpec<T>, alpha: T) -> T {
        // h has the sign of G - alpha; the predicate h >= 0 is the one that
        // defines the quantile.
        let h = |theta: T| {
            let (num, den) = self.g_parts(loss, theta);
            num - alpha * den
        };
        let mut lo = self.min();
        let mut hi = self.max();
        let mut f_lo = h(lo);
        if f_lo >= T::zero() {
            return lo;
        }
        let mut f_hi = h(hi);
        // Illinois regula falsi with a bisection step whenever three steps
        // fail to halve the bracket. Invariant: h(lo) < 0 <= h(hi).
        let mut last_side = 0i8;
        let mut checkpoint = hi - lo;
        for it in 0..MAX_BISECTION {
            let width = hi - lo;
            let mut c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if it % 3 == 2 {
                if width > checkpoint / T::two() {
                    c = lo + width / T::two();
                }
                checkpoint = width;
            }
            if !(c > lo && c < hi) {
                c = lo + width / T::two();
                if c <= lo || c >= hi {
                    break;
                }
            }
            let fc = h(c);
            if fc >= T::zero() {
                hi = c;
                f_hi = fc;
                if last_side == 1 {
                    f_lo = f_lo / T::two();
                }
                last_side = 1;
            } else {
                lo = c;
                f_lo = fc;
                if last_side == -1 {
                    f_hi = f_hi / T::two();
                }
                last_side = -1;
            }
        }
        hi
    }

    /// Exact order-`alpha` expectile by a linear scan over the sorted values.
    ///
    /// Solves `alpha E[(Z - t)_+] = (1 - alpha) E[(t - Z)_+]`, which is linear
    /// in `t` between consecutive order statistics.
    pub fn expectile(&self, order: Order<T>) -> T {
        let alpha = order.value();
        let beta = T::one() - alpha;
        // Center for accuracy of the running sums.
        let shift = self.mean();
        let mut w_total = T::zero();
        let mut y_total = T::zero();
        for &(z, w) in &self.sorted {
            w_total = w_total + w;
            y_total = y_total + w * (z - shift);
        }
        let mut w_lo = T::zero();
        let mut y_lo = T::zero();
        let n = self.sorted.len();
        for k in 0..n - 1 {
            let (zk, wk) = self.sorted[k];
            w_lo = w_lo + wk;
            y_lo = y_lo + wk * (zk - shift);
            let a = zk - shift;
            let b = self.sorted[k + 1].0 - shift;
            if b <= a {
                continue;
            }
            let w_up = w_total - w_lo;
            let y_up = y_total - y_lo;
            // h(t) = alpha (y_up - t w_up) - beta (t w_lo - y_lo) on [a, b].
            let h_b = alpha * (y_up - b * w_up) - beta * (b * w_lo - y_lo);
            if h_b <= T::zero() {
                let t = (alpha * y_up + beta * y_lo) / (alpha * w_up + beta * w_lo);
                return t.max(a).min(b) + shift;
            }
        }
        self.max()
    }

    /// Univariate M-depth `min(G(theta), 1 - G(theta - 0))`.
    pub fn mdepth(&self, loss: &LossSpec<T>, theta: T) -> Result<T> {
        let g = self.g_function(loss, theta)?;
        let g_left = self.g_left_limit(loss, theta)?;
        Ok(g.min(T::one() - g_left).max(T::zero()))
    }

    /// Empirical objective `sum_i w_i rho_alpha(z_i - theta)`.
    pub fn objective(&self, loss: &LossSpec<T>, order: Order<T>, theta: T) -> T {
        self.sorted.iter().fold(T::zero(), |acc, &(z, w)| acc + w * loss.rho_alpha(order, z - theta))
    }
}
