//! Halfspace M-depth.
//!
//! The depth of `z` is the infimum over unit directions `u` of the directional
//! outlyingness
//!
//! ```text
//! G_u(u'z) = sum_i |psi_-(u'(Z_i - z))| 1[u'(Z_i - z) <= 0] / sum_i |psi_-(u'(Z_i - z))|
//! ```
//!
//! With the absolute loss this is Tukey's halfspace depth; with the quadratic
//! loss it is the expectile depth, whose profile along any great circle is
//! constant, then increasing, then constant away from its minimizer. The
//! optimizer in [`expectile_depth`] exploits that shape with golden-section
//! searches along great circles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::directions;
use crate::error::{Error, Result};
use crate::loss::LossSpec;
use crate::optimize::golden_section;
use crate::sample::{Direction, Sample};
use crate::scalar::{dot, norm, Scalar};

/// Two truncated means bracketing `z` along the minimal direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    /// Mean of the points with `u'Z_i <= u'z`.
    pub lower_mean: Vec<T>,
    /// Mean of the points with `u'Z_i >= u'z`.
    pub upper_mean: Vec<T>,
}

impl<T: Scalar> Certificate<T> {
    /// Euclidean distance from `z` to the segment `[lower_mean, upper_mean]`.
    pub fn residual(&self, z: &[T]) -> T {
        let ab: Vec<T> = self.upper_mean.iter().zip(&self.lower_mean).map(|(&b, &a)| b - a).collect();
        let az: Vec<T> = z.iter().zip(&self.lower_mean).map(|(&x, &a)| x - a).collect();
        let len2 = dot(&ab, &ab);
        let t = if len2 > T::zero() { (dot(&az, &ab) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
        let diff: Vec<T> = az.iter().zip(&ab).map(|(&p, &q)| p - t * q).collect();
        norm(&diff)
    }
}

#[derive(Clone, Debug)]
pub struct DepthResult<T> {
    pub value: T,
    pub argmin_u: Direction<T>,
    /// Number of directional outlyingness evaluations.
    pub evals: usize,
    pub certificate: Option<Certificate<T>>,
    /// False when the optimizer hit its sweep limit; `value` is then the best
    /// value found.
    pub converged: bool,
}

fn check_point<T: Scalar>(sample: &Sample<T>, z: &[T]) -> Result<()> {
    if z.len() != sample.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point of dimension {} for a {}-variate sample",
            z.len(),
            sample.dim()
        )));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::PreconditionViolated("point must be finite".into()));
    }
    Ok(())
}

fn outlyingness_parts<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, z: &[T], u: &[T]) -> (T, T) {
    let mut num = T::zero();
    let mut den = T::zero();
    for row in sample.rows() {
        let t = row.iter().zip(z).zip(u).fold(T::zero(), |s, ((&x, &c), &w)| s + w * (x - c));
        let a = loss.psi_weight(t);
        den = den + a;
        if t <= T::zero() {
            num = num + a;
        }
    }
    (num, den)
}

/// `G_u(u'z)`, the M-quantile outlyingness of `u'z` within the projection of
/// the sample on `u`.
pub fn directional_outlyingness<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    z: &[T],
    u: &Direction<T>,
) -> Result<T> {
    check_point(sample, z)?;
    if u.dim() != sample.dim() {
        return Err(Error::ShapeMismatch("direction dimension differs from the sample".into()));
    }
    let (num, den) = outlyingness_parts(sample, loss, z, u.as_slice());
    if den <= T::zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

/// Expectile outlyingness `e_z(u)`; `directional_outlyingness` with the
/// quadratic loss.
pub fn expectile_outlyingness<T: Scalar>(sample: &Sample<T>, z: &[T], u: &Direction<T>) -> Result<T> {
    directional_outlyingness(sample, &LossSpec::Quadratic, z, u)
}

fn argmin_of<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn grid_result<T: Scalar>(values: Vec<T>, directions: &[Direction<T>]) -> DepthResult<T> {
    let i = argmin_of(&values);
    DepthResult {
        value: values[i],
        argmin_u: directions[i].clone(),
        evals: values.len(),
        certificate: None,
        converged: true,
    }
}

/// Depth approximated by the minimum over a finite direction set. Upper
/// bounds the exact depth.
pub fn mdepth_grid<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    z: &[T],
    directions: &[Direction<T>],
) -> Result<DepthResult<T>> {
    if directions.is_empty() {
        return Err(Error::PreconditionViolated("empty direction set".into()));
    }
    let values = directions.iter().map(|u| directional_outlyingness(sample, loss, z, u)).collect::<Result<Vec<T>>>()?;
    Ok(grid_result(values, directions))
}

/// Parallel [`mdepth_grid`]; returns the same result.
pub fn mdepth_grid_par<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    z: &[T],
    directions: &[Direction<T>],
) -> Result<DepthResult<T>> {
    if directions.is_empty() {
        return Err(Error::PreconditionViolated("empty direction set".into()));
    }
    let values =
        directions.par_iter().map(|u| directional_outlyingness(sample, loss, z, u)).collect::<Result<Vec<T>>>()?;
    Ok(grid_result(values, directions))
}

/// Grid depth of many points, in parallel.
pub fn mdepth_grid_many<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    points: &[Vec<T>],
    directions: &[Direction<T>],
) -> Result<Vec<DepthResult<T>>> {
    points.par_iter().map(|z| mdepth_grid(sample, loss, z, directions)).collect()
}

/// Truncated means along `u` through `z`.
pub fn truncated_means<T: Scalar>(sample: &Sample<T>, z: &[T], u: &Direction<T>) -> Certificate<T> {
    let d = sample.dim();
    let cut = u.dot(z);
    let mut lo = vec![T::zero(); d];
    let mut hi = vec![T::zero(); d];
    let (mut n_lo, mut n_hi) = (0usize, 0usize);
    for row in sample.rows() {
        let p = u.dot(row);
        if p <= cut {
            n_lo += 1;
            lo.iter_mut().zip(row).for_each(|(a, &x)| *a = *a + x);
        }
        if p >= cut {
            n_hi += 1;
            hi.iter_mut().zip(row).for_each(|(a, &x)| *a = *a + x);
        }
    }
    let fin = |v: Vec<T>, k: usize| -> Vec<T> {
        if k == 0 {
            v
        } else {
            v.into_iter().map(|a| a / T::from_count(k)).collect()
        }
    };
    Certificate { lower_mean: fin(lo, n_lo), upper_mean: fin(hi, n_hi) }
}

/// Settings of the great-circle optimizer.
#[derive(Clone, Debug)]
pub struct ExpectileDepthOptions<T> {
    /// Stop once a full sweep improves the objective by less than this.
    pub tol: T,
    /// Maximum number of sweeps per restart.
    pub max_iter: usize,
    /// Number of starting directions taken from the coarse pre-scan.
    pub restarts: usize,
    /// Size of the coarse pre-scan grid.
    pub prescan: usize,
    /// Seed for the random great circles used after the first sweep.
    pub seed: u64,
}

impl<T: Scalar> Default for ExpectileDepthOptions<T> {
    fn default() -> Self {
        ExpectileDepthOptions { tol: T::lit(1e-12), max_iter: 50, restarts: 8, prescan: 64, seed: 0x00de_9e17 }
    }
}

/// Points of the circle scan used to bracket the minimum on a great circle.
const CIRCLE_SCAN: usize = 24;
/// Angular resolution of the golden-section refinement.
const ANGLE_TOL: f64 = 1e-10;

struct CircleSearch<'a, T> {
    sample: &'a Sample<T>,
    z: &'a [T],
    evals: usize,
}

impl<T: Scalar> CircleSearch<'_, T> {
    fn eval(&mut self, u: &[T]) -> T {
        self.evals += 1;
        let (num, den) = outlyingness_parts(self.sample, &LossSpec::Quadratic, self.z, u);
        if den > T::zero() {
            num / den
        } else {
            T::one()
        }
    }

    fn point(u: &[T], v: &[T], t: T) -> Vec<T> {
        let (s, c) = t.sin_cos();
        let p: Vec<T> = u.iter().zip(v).map(|(&a, &b)| c * a + s * b).collect();
        let r = norm(&p);
        p.into_iter().map(|x| x / r).collect()
    }

    /// Minimizes along the great circle through `u` and the unit tangent `v`.
    /// Returns `(angle, value)` with value at most `f_u`.
    fn minimize(&mut self, u: &[T], v: &[T], f_u: T) -> (T, T) {
        let pi = T::PI();
        let step = T::two() * pi / T::from_count(CIRCLE_SCAN);
        let tol = T::lit(ANGLE_TOL);
        let mut best = (T::zero(), f_u);
        // Local refinement around the current iterate.
        let local = golden_section(|t| self.eval(&Self::point(u, v, t)), -step, step, tol, 200);
        if local.fx < best.1 {
            best = (local.x, local.fx);
        }
        // Global scan of the circle, then refinement around its best point.
        let mut scan_best = (T::zero(), T::infinity());
        for k in 1..CIRCLE_SCAN {
            let t = step * T::from_count(k);
            let f = self.eval(&Self::point(u, v, t));
            if f < scan_best.1 {
                scan_best = (t, f);
            }
        }
        if scan_best.1 < best.1 {
            let t0 = scan_best.0;
            let g = golden_section(|t| self.eval(&Self::point(u, v, t)), t0 - step, t0 + step, tol, 200);
            best = if g.fx < scan_best.1 { (g.x, g.fx) } else { scan_best };
        }
        best
    }
}

fn orthonormal_against<T: Scalar>(v: &[T], basis: &[&[T]]) -> Option<Vec<T>> {
    let mut w = v.to_vec();
    for b in basis {
        let p = dot(&w, b);
        w.iter_mut().zip(b.iter()).for_each(|(x, &y)| *x = *x - p * y);
    }
    let r = norm(&w);
    if r > T::lit(1e-6) {
        Some(w.into_iter().map(|x| x / r).collect())
    } else {
        None
    }
}

fn tangent_candidates<T: Scalar>(u: &[T], sweep: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let d = u.len();
    if d == 2 {
        return vec![vec![-u[1], u[0]]];
    }
    (0..d)
        .map(|j| {
            if sweep == 0 {
                (0..d).map(|i| if i == j { T::one() } else { T::zero() }).collect()
            } else {
                (0..d).map(|_| T::lit(StandardNormal.sample(&mut *rng))).collect()
            }
        })
        .collect()
}

/// Expectile depth by great-circle coordinate descent on the sphere.
///
/// A coarse grid of `opts.prescan` directions seeds `opts.restarts` descents.
/// Each sweep minimizes `e_z` along great circles through the current
/// direction (coordinate circles first, then random ones) until a sweep gains
/// less than `opts.tol`.
pub fn expectile_depth<T: Scalar>(
    sample: &Sample<T>,
    z: &[T],
    opts: &ExpectileDepthOptions<T>,
) -> Result<DepthResult<T>> {
    check_point(sample, z)?;
    let d = sample.dim();
    if d == 1 {
        let mut r = mdepth_grid(sample, &LossSpec::Quadratic, z, &directions::grid(1, 2))?;
        r.certificate = certificate_if_positive(sample, z, &r);
        return Ok(r);
    }
    let mut search = CircleSearch { sample, z, evals: 0 };
    let grid = directions::grid::<T>(d, opts.prescan.max(4));
    let mut scanned: Vec<(T, usize)> = grid.iter().enumerate().map(|(i, u)| (search.eval(u.as_slice()), i)).collect();
    scanned.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));

    let mut best_u = grid[scanned[0].1].as_slice().to_vec();
    let mut best_f = scanned[0].0;
    let mut all_converged = true;
    for (r, &(f0, idx)) in scanned.iter().take(opts.restarts.max(1)).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
        let mut u = grid[idx].as_slice().to_vec();
        let mut f = f0;
        let mut converged = false;
        for sweep in 0..opts.max_iter {
            let f_start = f;
            for cand in tangent_candidates(&u, sweep, &mut rng) {
                let Some(v) = orthonormal_against(&cand, &[&u]) else { continue };
                let (t, ft) = search.minimize(&u, &v, f);
                if ft < f {
                    u = CircleSearch::<T>::point(&u, &v, t);
                    f = ft;
                }
            }
            if f_start - f <= opts.tol {
                converged = true;
                break;
            }
        }
        all_converged &= converged;
        if f < best_f {
            best_f = f;
            best_u = u;
        }
    }
    let mut result = DepthResult {
        value: best_f.max(T::zero()),
        argmin_u: Direction::normalized_unchecked(best_u),
        evals: search.evals,
        certificate: None,
        converged: all_converged,
    };
    result.certificate = certificate_if_positive(sample, z, &result);
    Ok(result)
}

/// Optimizer depth of many points, in parallel.
pub fn expectile_depth_many<T: Scalar>(
    sample: &Sample<T>,
    points: &[Vec<T>],
    opts: &ExpectileDepthOptions<T>,
) -> Result<Vec<DepthResult<T>>> {
    points.par_iter().map(|z| expectile_depth(sample, z, opts)).collect()
}

fn certificate_if_positive<T: Scalar>(sample: &Sample<T>, z: &[T], r: &DepthResult<T>) -> Option<Certificate<T>> {
    (r.value > T::zero()).then(|| truncated_means(sample, z, &r.argmin_u))
}

fn normalize_angle<T: Scalar>(a: T) -> T {
    let tau = T::two() * T::PI();
    let r = a % tau;
    if r < T::zero() {
        r + tau
    } else {
        r
    }
}

/// Angular events of a bivariate sweep around `z`: each nonzero `Z_i - z`
/// enters the lower halfplane of `u(phi)` at `a_i + pi/2` and leaves it at
/// `a_i - pi/2`.
struct Sweep<T> {
    offsets: Vec<[T; 2]>,
    /// `(angle, point index, entering)` sorted by angle.
    events: Vec<(T, usize, bool)>,
    /// Points coinciding with `z`.
    at_z: usize,
}

impl<T: Scalar> Sweep<T> {
    fn new(sample: &Sample<T>, z: &[T]) -> Result<Self> {
        if sample.dim() != 2 {
            return Err(Error::ShapeMismatch("bivariate sweep needs d = 2".into()));
        }
        check_point(sample, z)?;
        let half_pi = T::FRAC_PI_2();
        let mut offsets = Vec::with_capacity(sample.len());
        let mut events = Vec::with_capacity(2 * sample.len());
        let mut at_z = 0;
        for row in sample.rows() {
            let w = [row[0] - z[0], row[1] - z[1]];
            if w[0] == T::zero() && w[1] == T::zero() {
                at_z += 1;
                continue;
            }
            let a = w[1].atan2(w[0]);
            let i = offsets.len();
            offsets.push(w);
            events.push((normalize_angle(a + half_pi), i, true));
            events.push((normalize_angle(a - half_pi), i, false));
        }
        events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        Ok(Sweep { offsets, events, at_z })
    }

    /// A start angle strictly inside the gap preceding the first event, and
    /// the lower-halfplane membership there.
    fn start(&self) -> (T, Vec<bool>) {
        let tau = T::two() * T::PI();
        let first = self.events[0].0;
        let last = self.events[self.events.len() - 1].0;
        let phi = first - (first + tau - last) / T::two();
        let mut inside = vec![false; self.offsets.len()];
        for &(angle, i, entering) in &self.events {
            if entering {
                let rel = normalize_angle(phi - angle);
                inside[i] = rel > T::zero() && rel < T::PI();
            }
        }
        (phi, inside)
    }
}

/// Exact bivariate Tukey depth by an angular sweep, `O(n log n)`.
pub fn tukey_depth_2d_exact<T: Scalar>(sample: &Sample<T>, z: &[T]) -> Result<T> {
    let sweep = Sweep::new(sample, z)?;
    let n = T::from_count(sample.len());
    if sweep.events.is_empty() {
        return Ok(T::one());
    }
    let (_, inside) = sweep.start();
    let mut count = inside.iter().filter(|&&b| b).count() as i64;
    let mut best = count;
    let ev = &sweep.events;
    let mut k = 0;
    while k < ev.len() {
        let angle = ev[k].0;
        while k < ev.len() && ev[k].0 == angle {
            count += if ev[k].2 { 1 } else { -1 };
            k += 1;
        }
        best = best.min(count);
    }
    Ok(T::from_count(best.max(0) as usize + sweep.at_z) / n)
}

/// Exact bivariate expectile depth by an angular sweep, `O(n log n)`.
///
/// Between consecutive critical angles `e_z` is a ratio of two linear forms in
/// `u`, hence monotone, so the minimum sits at a critical angle.
pub fn expectile_depth_2d_exact<T: Scalar>(sample: &Sample<T>, z: &[T]) -> Result<DepthResult<T>> {
    let sweep = Sweep::new(sample, z)?;
    let (phi0, inside) = sweep.start();
    let mut total = [T::zero(); 2];
    let mut lower = [T::zero(); 2];
    for (w, &ins) in sweep.offsets.iter().zip(&inside) {
        total = [total[0] + w[0], total[1] + w[1]];
        if ins {
            lower = [lower[0] + w[0], lower[1] + w[1]];
        }
    }
    let value_at = |phi: T, lower: &[T; 2]| -> T {
        let (s, c) = phi.sin_cos();
        let num = -(c * lower[0] + s * lower[1]);
        let den = c * (total[0] - T::two() * lower[0]) + s * (total[1] - T::two() * lower[1]);
        if den > T::zero() {
            (num / den).max(T::zero()).min(T::one())
        } else {
            T::one()
        }
    };
    let mut best = (value_at(phi0, &lower), phi0);
    for &(angle, i, entering) in &sweep.events {
        let w = sweep.offsets[i];
        if entering {
            lower = [lower[0] + w[0], lower[1] + w[1]];
        } else {
            lower = [lower[0] - w[0], lower[1] - w[1]];
        }
        let v = value_at(angle, &lower);
        if v < best.0 {
            best = (v, angle);
        }
    }
    let mut result = DepthResult {
        value: best.0,
        argmin_u: Direction::from_angle(best.1),
        evals: sweep.events.len() + 1,
        certificate: None,
        converged: true,
    };
    result.certificate = certificate_if_positive(sample, z, &result);
    Ok(result)
}

/// Grid size used for support membership when `d >= 3`.
const SUPPORT_GRID: usize = 2000;

/// Membership in the closed convex hull of the sample: every closed lower
/// halfspace through `x` carries mass. Exact for `d <= 2`, grid based above.
pub fn in_support<T: Scalar>(sample: &Sample<T>, x: &[T]) -> Result<bool> {
    check_point(sample, x)?;
    match sample.dim() {
        1 => {
            let b = sample.bounds()[0];
            Ok(x[0] >= b.0 && x[0] <= b.1)
        }
        2 => Ok(tukey_depth_2d_exact(sample, x)? > T::zero()),
        d => Ok(mdepth_grid(sample, &LossSpec::Absolute, x, &directions::grid(d, SUPPORT_GRID))?.value > T::zero()),
    }
}

/// `sup { r > 0 : origin + r u in C_P }` by bisection on support membership,
/// to absolute resolution `1e-6`.
pub fn support_radius<T: Scalar>(sample: &Sample<T>, origin: &[T], u: &Direction<T>) -> Result<T> {
    if u.dim() != sample.dim() {
        return Err(Error::ShapeMismatch("direction dimension differs from the sample".into()));
    }
    if !in_support(sample, origin)? {
        return Err(Error::OriginOutsideSupport);
    }
    let at = |r: T| -> Vec<T> { origin.iter().zip(u.as_slice()).map(|(&o, &w)| o + r * w).collect() };
    let mut lo = T::zero();
    let mut hi = sample.radius_around(origin) + T::one();
    let tol = T::lit(1e-6);
    while hi - lo > tol {
        let mid = lo + (hi - lo) / T::two();
        if mid <= lo || mid >= hi {
            break;
        }
        if in_support(sample, &at(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
