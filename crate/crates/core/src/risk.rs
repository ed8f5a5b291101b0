//! Expectile risk halfspaces and checks of the coherency axioms.
//!
//! For a fixed direction every set-valued statement reduces to an inequality
//! between expectile intercepts of projections, which is what the checks
//! evaluate.

use crate::directions;
use crate::error::{Error, Result};
use crate::loss::Order;
use crate::region::{ClipBox, Region2D};
use crate::sample::{Direction, Hyperplane, Sample};
use crate::scalar::Scalar;

/// Absolute tolerance of the coherency checks.
pub const RISK_TOL: f64 = 1e-9;

/// Outcome of one scalar coherency check.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskReport<T> {
    pub alpha: T,
    pub u: Vec<T>,
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
    pub tolerance: T,
}

fn intercept<T: Scalar>(sample: &Sample<T>, order: Order<T>, u: &Direction<T>) -> Result<T> {
    if u.dim() != sample.dim() {
        return Err(Error::ShapeMismatch("direction dimension differs from the sample".into()));
    }
    Ok(sample.projected_series(u)?.expectile(order))
}

/// Expectile risk halfspace `{z : u'z >= theta}` with `theta` the order-`alpha`
/// expectile of `u'Z`.
pub fn risk_halfspace<T: Scalar>(sample: &Sample<T>, order: Order<T>, u: &Direction<T>) -> Result<Hyperplane<T>> {
    Ok(Hyperplane::new(u.clone(), intercept(sample, order, u)?))
}

/// Intersection of the risk halfspaces over `l` directions spanning the
/// closed arc `[0, pi/2]`, clipped to the data box inflated by 10%.
pub fn upper_envelope_2d<T: Scalar>(sample: &Sample<T>, order: Order<T>, l: usize) -> Result<Region2D<T>> {
    if sample.dim() != 2 {
        return Err(Error::ShapeMismatch("upper envelopes are bivariate".into()));
    }
    if l < 2 {
        return Err(Error::PreconditionViolated("need at least 2 directions".into()));
    }
    let halfspaces = directions::arc(T::zero(), T::FRAC_PI_2(), l)
        .iter()
        .map(|u| risk_halfspace(sample, order, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(Region2D::from_halfspaces(halfspaces, ClipBox::around(sample, T::lit(0.1))))
}

fn report<T: Scalar>(order: Order<T>, u: &Direction<T>, lhs: T, rhs: T, holds: bool) -> RiskReport<T> {
    RiskReport { alpha: order.value(), u: u.as_slice().to_vec(), lhs, rhs, holds, tolerance: T::lit(RISK_TOL) }
}

/// Set subadditivity for `alpha <= 1/2`:
/// `theta(u'(X + Y)) >= theta(u'X) + theta(u'Y)` up to the tolerance.
pub fn check_subadditivity<T: Scalar>(
    x: &Sample<T>,
    y: &Sample<T>,
    order: Order<T>,
    u: &Direction<T>,
) -> Result<RiskReport<T>> {
    if order.value() > T::half() {
        return Err(Error::PreconditionViolated("subadditivity needs alpha <= 1/2".into()));
    }
    let lhs = intercept(&x.add(y)?, order, u)?;
    let rhs = intercept(x, order, u)? + intercept(y, order, u)?;
    Ok(report(order, u, lhs, rhs, lhs >= rhs - T::lit(RISK_TOL)))
}

/// Set superadditivity for `alpha >= 1/2`:
/// `theta(u'(X + Y)) <= theta(u'X) + theta(u'Y)` up to the tolerance.
pub fn check_superadditivity<T: Scalar>(
    x: &Sample<T>,
    y: &Sample<T>,
    order: Order<T>,
    u: &Direction<T>,
) -> Result<RiskReport<T>> {
    if order.value() < T::half() {
        return Err(Error::PreconditionViolated("superadditivity needs alpha >= 1/2".into()));
    }
    let lhs = intercept(&x.add(y)?, order, u)?;
    let rhs = intercept(x, order, u)? + intercept(y, order, u)?;
    Ok(report(order, u, lhs, rhs, lhs <= rhs + T::lit(RISK_TOL)))
}

/// Monotonicity: for `X <= Y` entrywise and `u >= 0`,
/// `theta(u'X) <= theta(u'Y)` up to the tolerance.
pub fn check_monotonicity<T: Scalar>(
    x: &Sample<T>,
    y: &Sample<T>,
    order: Order<T>,
    u: &Direction<T>,
) -> Result<RiskReport<T>> {
    if x.len() != y.len() || x.dim() != y.dim() {
        return Err(Error::ShapeMismatch("samples must have equal shape".into()));
    }
    if x.as_flat().iter().zip(y.as_flat()).any(|(a, b)| a > b) {
        return Err(Error::PreconditionViolated("X <= Y fails".into()));
    }
    if u.as_slice().iter().any(|&c| c < T::zero()) {
        return Err(Error::PreconditionViolated("direction must be nonnegative".into()));
    }
    let lhs = intercept(x, order, u)?;
    let rhs = intercept(y, order, u)?;
    Ok(report(order, u, lhs, rhs, lhs <= rhs + T::lit(RISK_TOL)))
}

/// Translation invariance: `theta(u'(X + c)) = theta(u'X) + u'c`.
pub fn check_translation<T: Scalar>(
    x: &Sample<T>,
    shift: &[T],
    order: Order<T>,
    u: &Direction<T>,
) -> Result<RiskReport<T>> {
    let lhs = intercept(&x.translate(shift)?, order, u)?;
    let rhs = intercept(x, order, u)? + u.dot(shift);
    Ok(report(order, u, lhs, rhs, (lhs - rhs).abs() <= T::lit(RISK_TOL)))
}

/// Positive homogeneity: `theta(u'(lambda X)) = lambda theta(u'X)`.
pub fn check_homogeneity<T: Scalar>(
    x: &Sample<T>,
    lambda: T,
    order: Order<T>,
    u: &Direction<T>,
) -> Result<RiskReport<T>> {
    if !(lambda > T::zero()) {
        return Err(Error::PreconditionViolated("lambda must be positive".into()));
    }
    let lhs = intercept(&x.scale(lambda)?, order, u)?;
    let rhs = lambda * intercept(x, order, u)?;
    Ok(report(order, u, lhs, rhs, (lhs - rhs).abs() <= T::lit(RISK_TOL)))
}
