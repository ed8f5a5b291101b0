//! Multiple-output expectile regression by direction-wise single-output fits.
//!
//! For a response direction `u`, the responses are projected to `u'Y_i` and an
//! expectile regression of those on the covariates gives the conditional
//! intercept `theta(x)`; intersecting `{y : u'y >= theta(x)}` over many
//! directions gives a conditional depth region.

use rayon::prelude::*;

use crate::directions;
use crate::error::{Error, Result};
use crate::linalg;
use crate::loss::Order;
use crate::region::{ClipBox, Region2D};
use crate::sample::{Direction, Hyperplane, Sample};
use crate::scalar::Scalar;
use crate::univariate::Series;

/// Covariates (`n x p`, row-major) paired with responses (`n x d`).
#[derive(Clone, Debug)]
pub struct RegressionData<T> {
    p: usize,
    covariates: Vec<T>,
    responses: Sample<T>,
}

impl<T: Scalar> RegressionData<T> {
    pub fn new(p: usize, covariates: Vec<T>, responses: Sample<T>) -> Result<Self> {
        let n = responses.len();
        if covariates.len() != n * p {
            return Err(Error::ShapeMismatch(format!(
                "{} covariate entries for {n} rows and {p} columns",
                covariates.len()
            )));
        }
        if n < p + 2 {
            return Err(Error::InvalidSample(format!("need at least p + 2 = {} rows, got {n}", p + 2)));
        }
        if covariates.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("covariates must be finite".into()));
        }
        Ok(RegressionData { p, covariates, responses })
    }

    pub fn from_rows(x: &[Vec<T>], y: &[Vec<T>]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::ShapeMismatch("covariate and response row counts differ".into()));
        }
        let p = x.first().map_or(0, Vec::len);
        if x.iter().any(|r| r.len() != p) {
            return Err(Error::ShapeMismatch("covariate rows have different lengths".into()));
        }
        Self::new(p, x.iter().flatten().copied().collect(), Sample::from_rows(y)?)
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// Number of covariates.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Response dimension.
    pub fn d(&self) -> usize {
        self.responses.dim()
    }

    pub fn covariates(&self) -> &[T] {
        &self.covariates
    }

    pub fn covariate_row(&self, i: usize) -> &[T] {
        &self.covariates[i * self.p..(i + 1) * self.p]
    }

    pub fn responses(&self) -> &Sample<T> {
        &self.responses
    }
}

/// A fitted linear expectile regression `theta(x) = beta_0 + beta_1 x_1 + ...`.
#[derive(Clone, Debug)]
pub struct RegressionFit<T> {
    /// Response direction, when the fit comes from projected responses.
    pub u: Option<Direction<T>>,
    pub alpha: Order<T>,
    /// Intercept first.
    pub beta: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

fn linear_predict<T: Scalar>(beta: &[T], x: &[T]) -> T {
    beta[0] + beta[1..].iter().zip(x).fold(T::zero(), |s, (&b, &v)| s + b * v)
}

impl<T: Scalar> RegressionFit<T> {
    pub fn predict(&self, x: &[T]) -> T {
        linear_predict(&self.beta, x)
    }

    /// `max_j |sum_i w_i r_i x_ij|` over the design columns `[1 | X]`, with
    /// `w_i` the asymmetric weights at the residuals `r_i`. Zero at an exact
    /// solution.
    pub fn normal_equation_residual(&self, x: &[T], y: &[T]) -> T {
        let p = self.beta.len() - 1;
        let a = self.alpha.value();
        let mut g = vec![T::zero(); p + 1];
        for (i, &yi) in y.iter().enumerate() {
            let row = &x[i * p..(i + 1) * p];
            let r = yi - self.predict(row);
            let w = if r >= T::zero() { a } else { T::one() - a };
            g[0] = g[0] + w * r;
            for j in 0..p {
                g[j + 1] = g[j + 1] + w * r * row[j];
            }
        }
        g.into_iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Settings of the reweighting iteration.
#[derive(Clone, Debug)]
pub struct IrlsOptions<T> {
    /// Stop once no coefficient moves by more than this.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for IrlsOptions<T> {
    fn default() -> Self {
        IrlsOptions { tol: T::lit(1e-10), max_iter: 200 }
    }
}

fn weighted_least_squares<T: Scalar>(x: &[T], y: &[T], p: usize, w: &[T]) -> Result<Vec<T>> {
    let k = p + 1;
    let mut a = vec![T::zero(); k * k];
    let mut b = vec![T::zero(); k];
    let mut row = vec![T::one(); k];
    for (i, (&yi, &wi)) in y.iter().zip(w).enumerate() {
        row[1..].copy_from_slice(&x[i * p..(i + 1) * p]);
        for r in 0..k {
            let wr = wi * row[r];
            b[r] = b[r] + wr * yi;
            for c in 0..=r {
                a[r * k + c] = a[r * k + c] + wr * row[c];
            }
        }
    }
    for r in 0..k {
        for c in r + 1..k {
            a[r * k + c] = a[c * k + r];
        }
    }
    linalg::cholesky_solve(&a, &b, k)
}

/// Linear expectile regression of `y` on the `n x p` covariates `x` by
/// iteratively reweighted least squares, started from ordinary least squares.
///
/// Weights are `alpha` for nonnegative residuals and `1 - alpha` otherwise.
/// A fit that reaches `max_iter` is returned with `converged = false`.
pub fn linear_expectile_fit<T: Scalar>(
    x: &[T],
    p: usize,
    y: &[T],
    order: Order<T>,
    opts: &IrlsOptions<T>,
) -> Result<RegressionFit<T>> {
    let n = y.len();
    if x.len() != n * p {
        return Err(Error::ShapeMismatch(format!("{} covariate entries for {n} rows and {p} columns", x.len())));
    }
    if n < p + 2 {
        return Err(Error::InvalidSample(format!("need at least p + 2 = {} rows, got {n}", p + 2)));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidSample("entries must be finite".into()));
    }
    let a = order.value();
    let mut w = vec![T::half(); n];
    let mut beta = weighted_least_squares(x, y, p, &w)?;
    let mut fit = RegressionFit { u: None, alpha: order, beta: Vec::new(), iterations: 0, converged: false };
    for it in 1..=opts.max_iter {
        let mut changed = false;
        for i in 0..n {
            let r = y[i] - linear_predict(&beta, &x[i * p..(i + 1) * p]);
            let wi = if r >= T::zero() { a } else { T::one() - a };
            changed |= wi != w[i];
            w[i] = wi;
        }
        let next = weighted_least_squares(x, y, p, &w)?;
        let step = next.iter().zip(&beta).fold(T::zero(), |m, (&b1, &b0)| m.max((b1 - b0).abs()));
        beta = next;
        fit.iterations = it;
        if step < opts.tol || !changed {
            fit.converged = true;
            break;
        }
    }
    fit.beta = beta;
    Ok(fit)
}

/// Smoothing kernel of the local engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Gaussian,
    Epanechnikov,
}

impl Kernel {
    pub fn eval<T: Scalar>(self, t: T) -> T {
        match self {
            Kernel::Gaussian => (-t * t / T::two()).exp(),
            Kernel::Epanechnikov => (T::one() - t * t).max(T::zero()),
        }
    }
}

/// Minimum kernel mass, in units of `K(0)`, for a local fit.
pub const MIN_LOCAL_MASS: f64 = 5.0;

/// Local constant expectile at `x0`: the weighted expectile of `y` with
/// product-kernel weights `prod_j K((x_ij - x0_j) / h)`.
pub fn local_expectile_fit<T: Scalar>(
    x: &[T],
    p: usize,
    y: &[T],
    order: Order<T>,
    x0: &[T],
    bandwidth: T,
    kernel: Kernel,
) -> Result<T> {
    let n = y.len();
    if x.len() != n * p || x0.len() != p {
        return Err(Error::ShapeMismatch("covariates do not match the evaluation point".into()));
    }
    if !(bandwidth > T::zero()) || !bandwidth.is_finite() {
        return Err(Error::PreconditionViolated("bandwidth must be positive".into()));
    }
    let w: Vec<T> = (0..n)
        .map(|i| {
            x[i * p..(i + 1) * p].iter().zip(x0).fold(T::one(), |k, (&xi, &c)| k * kernel.eval((xi - c) / bandwidth))
        })
        .collect();
    let mass = w.iter().fold(T::zero(), |s, &v| s + v);
    if !(mass >= T::lit(MIN_LOCAL_MASS)) {
        return Err(Error::InsufficientLocalData { mass: mass.as_f64(), required: MIN_LOCAL_MASS });
    }
    let mut charged = y.iter().zip(&w).filter(|(_, &wi)| wi > T::zero()).map(|(&yi, _)| yi);
    let first = charged.next().expect("positive mass");
    if charged.all(|v| v == first) {
        return Ok(first);
    }
    Ok(Series::weighted(y.to_vec(), w)?.expectile(order))
}

/// Single-output engine behind the conditional halfspaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Engine<T> {
    Linear,
    Local { bandwidth: T, kernel: Kernel },
}

/// Conditional expectile halfspace `{y : u'y >= theta(x)}`.
pub fn conditional_halfspace<T: Scalar>(
    data: &RegressionData<T>,
    order: Order<T>,
    u: &Direction<T>,
    x: &[T],
    engine: &Engine<T>,
) -> Result<Hyperplane<T>> {
    if u.dim() != data.d() {
        return Err(Error::ShapeMismatch("direction dimension differs from the responses".into()));
    }
    if x.len() != data.p() {
        return Err(Error::ShapeMismatch(format!("evaluation point has {} entries, expected {}", x.len(), data.p())));
    }
    let y = data.responses().project(u);
    let theta = match *engine {
        Engine::Linear => {
            let mut fit = linear_expectile_fit(data.covariates(), data.p(), &y, order, &IrlsOptions::default())?;
            fit.u = Some(u.clone());
            fit.predict(x)
        }
        Engine::Local { bandwidth, kernel } => {
            local_expectile_fit(data.covariates(), data.p(), &y, order, x, bandwidth, kernel)?
        }
    };
    Ok(Hyperplane::new(u.clone(), theta))
}

/// Default number of directions for conditional regions.
pub const CONDITIONAL_DIRECTIONS: usize = 200;

/// Conditional region at `x` over an explicit direction set, clipped to the
/// response box inflated by 10%.
pub fn conditional_region_from_directions<T: Scalar>(
    data: &RegressionData<T>,
    order: Order<T>,
    x: &[T],
    dirs: &[Direction<T>],
    engine: &Engine<T>,
) -> Result<Region2D<T>> {
    if data.d() != 2 {
        return Err(Error::ShapeMismatch("conditional regions need bivariate responses".into()));
    }
    let halfspaces =
        dirs.par_iter().map(|u| conditional_halfspace(data, order, u, x, engine)).collect::<Result<Vec<_>>>()?;
    Ok(Region2D::from_halfspaces(halfspaces, ClipBox::around(data.responses(), T::lit(0.1))))
}

/// Conditional region at `x` from `l` equispaced directions.
pub fn conditional_region_2d<T: Scalar>(
    data: &RegressionData<T>,
    order: Order<T>,
    x: &[T],
    l: usize,
    engine: &Engine<T>,
) -> Result<Region2D<T>> {
    if l < 3 {
        return Err(Error::PreconditionViolated("need at least 3 directions".into()));
    }
    conditional_region_from_directions(data, order, x, &directions::circle(l), engine)
}
