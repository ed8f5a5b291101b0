//! Hyperplane M-quantiles, bivariate depth regions and the M-median.

use rayon::prelude::*;

use crate::depth::{in_support, mdepth_grid};
use crate::directions;
use crate::error::{Error, Result};
use crate::loss::{LossSpec, Order};
use crate::sample::{Direction, Hyperplane, Sample};
use crate::scalar::Scalar;

/// Slack used by [`Region2D::contains`].
pub const CONTAINS_TOL: f64 = 1e-9;

/// Origin of a polygon edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSource {
    /// Lies on the boundary line of the given defining halfspace.
    Halfspace(usize),
    /// Artificial edge of the clipping box.
    ClipBox,
}

/// Axis-aligned box `[xmin, xmax] x [ymin, ymax]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClipBox<T> {
    pub xmin: T,
    pub xmax: T,
    pub ymin: T,
    pub ymax: T,
}

impl<T: Scalar> ClipBox<T> {
    /// Bounding box of a bivariate sample, inflated by `frac` of its size on
    /// every side.
    pub fn around(sample: &Sample<T>, frac: T) -> Self {
        let b = sample.bounds();
        let px = (b[0].1 - b[0].0) * frac;
        let py = (b[1].1 - b[1].0) * frac;
        ClipBox { xmin: b[0].0 - px, xmax: b[0].1 + px, ymin: b[1].0 - py, ymax: b[1].1 + py }
    }

    fn corners(&self) -> Vec<[T; 2]> {
        vec![[self.xmin, self.ymin], [self.xmax, self.ymin], [self.xmax, self.ymax], [self.xmin, self.ymax]]
    }

    fn diameter(&self) -> T {
        let dx = self.xmax - self.xmin;
        let dy = self.ymax - self.ymin;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Intersection of finitely many upper halfspaces in the plane, as a convex
/// polygon.
///
/// `vertices` run counterclockwise; edge `i` joins vertex `i` to vertex
/// `i + 1` and `edge_sources[i]` records its origin. An empty vertex list
/// means the intersection is empty. A region may degenerate to a segment or a
/// single point.
#[derive(Clone, Debug)]
pub struct Region2D<T> {
    pub halfspaces: Vec<Hyperplane<T>>,
    pub vertices: Vec<[T; 2]>,
    pub edge_sources: Vec<EdgeSource>,
    pub clip_box: ClipBox<T>,
}

impl<T: Scalar> Region2D<T> {
    /// Clips `clip_box` successively by every halfspace `u'z >= theta`.
    pub fn from_halfspaces(halfspaces: Vec<Hyperplane<T>>, clip_box: ClipBox<T>) -> Self {
        let mut poly: Vec<([T; 2], EdgeSource)> =
            clip_box.corners().into_iter().map(|c| (c, EdgeSource::ClipBox)).collect();
        let merge_tol = clip_box.diameter() * T::lit(1e-13);
        for (k, h) in halfspaces.iter().enumerate() {
            if poly.is_empty() {
                break;
            }
            poly = clip(&poly, h, k);
            dedupe(&mut poly, merge_tol);
        }
        let (vertices, edge_sources) = poly.into_iter().unzip();
        Region2D { halfspaces, vertices, edge_sources, clip_box }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Membership in every defining halfspace, with slack `1e-9`.
    pub fn contains(&self, z: &[T; 2]) -> bool {
        let tol = T::lit(CONTAINS_TOL);
        self.halfspaces.iter().all(|h| h.upper_contains(z, tol))
    }

    /// True when some edge comes from the clipping box, i.e. the box cuts the
    /// region.
    pub fn is_clipped(&self) -> bool {
        self.edge_sources.contains(&EdgeSource::ClipBox)
    }

    /// Mean of the vertices.
    pub fn barycenter(&self) -> Option<[T; 2]> {
        if self.vertices.is_empty() {
            return None;
        }
        let n = T::from_count(self.vertices.len());
        let s = self.vertices.iter().fold([T::zero(); 2], |a, v| [a[0] + v[0], a[1] + v[1]]);
        Some([s[0] / n, s[1] / n])
    }

    /// Polygon area by the shoelace formula.
    pub fn area(&self) -> T {
        let n = self.vertices.len();
        let mut s = T::zero();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            s = s + p[0] * q[1] - q[0] * p[1];
        }
        s / T::two()
    }
}

/// `region.contains(z)`.
pub fn region_contains<T: Scalar>(region: &Region2D<T>, z: &[T; 2]) -> bool {
    region.contains(z)
}

fn clip<T: Scalar>(poly: &[([T; 2], EdgeSource)], h: &Hyperplane<T>, k: usize) -> Vec<([T; 2], EdgeSource)> {
    let n = poly.len();
    let f = |p: &[T; 2]| h.signed_distance(p);
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, src) = poly[i];
        let q = poly[(i + 1) % n].0;
        let (fp, fq) = (f(&p), f(&q));
        let p_in = fp >= T::zero();
        let q_in = fq >= T::zero();
        let cross = || {
            let t = fp / (fp - fq);
            [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
        };
        match (p_in, q_in) {
            (true, true) => out.push((p, src)),
            (true, false) => {
                out.push((p, src));
                out.push((cross(), EdgeSource::Halfspace(k)));
            }
            (false, true) => out.push((cross(), src)),
            (false, false) => {}
        }
    }
    out
}

fn dedupe<T: Scalar>(poly: &mut Vec<([T; 2], EdgeSource)>, tol: T) {
    let close = |a: &[T; 2], b: &[T; 2]| (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol;
    let mut i = 0;
    while poly.len() > 1 && i < poly.len() {
        let j = (i + 1) % poly.len();
        if close(&poly[i].0, &poly[j].0) {
            // Drop the earlier vertex; the later keeps its outgoing edge.
            poly.remove(i);
            if i >= poly.len() {
                break;
            }
        } else {
            i += 1;
        }
    }
}

/// The order-`alpha` M-quantile hyperplane of the sample in direction `u`:
/// `theta` is the univariate M-quantile of the projections `u'Z_i`.
pub fn mquantile_hyperplane<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    order: Order<T>,
    u: &Direction<T>,
) -> Result<Hyperplane<T>> {
    if u.dim() != sample.dim() {
        return Err(Error::ShapeMismatch("direction dimension differs from the sample".into()));
    }
    let theta = sample.projected_series(u)?.m_quantile(loss, order);
    Ok(Hyperplane::new(u.clone(), theta))
}

/// Depth region over an explicit direction set, clipped to the data box
/// inflated by 10%.
pub fn region_from_directions<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    order: Order<T>,
    dirs: &[Direction<T>],
) -> Result<Region2D<T>> {
    if sample.dim() != 2 {
        return Err(Error::ShapeMismatch("depth regions are bivariate".into()));
    }
    loss.validate()?;
    let halfspaces =
        dirs.par_iter().map(|u| mquantile_hyperplane(sample, loss, order, u)).collect::<Result<Vec<_>>>()?;
    Ok(Region2D::from_halfspaces(halfspaces, ClipBox::around(sample, T::lit(0.1))))
}

/// Default number of directions for depth regions.
pub const REGION_DIRECTIONS: usize = 500;

/// Order-`alpha` depth region from `l` equispaced directions.
pub fn depth_region_2d<T: Scalar>(
    sample: &Sample<T>,
    loss: &LossSpec<T>,
    order: Order<T>,
    l: usize,
) -> Result<Region2D<T>> {
    if l < 3 {
        return Err(Error::PreconditionViolated("need at least 3 directions".into()));
    }
    region_from_directions(sample, loss, order, &directions::circle(l))
}

/// Boundary points: vertices plus `SUBDIVISIONS` points per edge.
const SUBDIVISIONS: usize = 64;

fn boundary_points<T: Scalar>(v: &[[T; 2]]) -> Vec<[T; 2]> {
    if v.len() == 1 {
        return v.to_vec();
    }
    let mut out = Vec::with_capacity(v.len() * SUBDIVISIONS);
    for i in 0..v.len() {
        let p = v[i];
        let q = v[(i + 1) % v.len()];
        for k in 0..SUBDIVISIONS {
            let t = T::from_count(k) / T::from_count(SUBDIVISIONS);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn segment_distance<T: Scalar>(z: &[T; 2], p: &[T; 2], q: &[T; 2]) -> T {
    let d = [q[0] - p[0], q[1] - p[1]];
    let w = [z[0] - p[0], z[1] - p[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t =
        if len2 > T::zero() { ((w[0] * d[0] + w[1] * d[1]) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    let e = [w[0] - t * d[0], w[1] - t * d[1]];
    (e[0] * e[0] + e[1] * e[1]).sqrt()
}

fn boundary_distance<T: Scalar>(z: &[T; 2], v: &[[T; 2]]) -> T {
    if v.len() == 1 {
        return segment_distance(z, &v[0], &v[0]);
    }
    (0..v.len()).map(|i| segment_distance(z, &v[i], &v[(i + 1) % v.len()])).fold(T::infinity(), T::min)
}

fn directed<T: Scalar>(from: &[[T; 2]], to: &[[T; 2]]) -> T {
    boundary_points(from).par_iter().map(|z| boundary_distance(z, to)).reduce(|| T::zero(), T::max)
}

/// Symmetric Hausdorff distance between the two boundaries, each sampled at
/// its vertices and 64 points per edge and measured against the other
/// boundary's edges.
pub fn region_hausdorff<T: Scalar>(a: &Region2D<T>, b: &Region2D<T>) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(directed(&a.vertices, &b.vertices).max(directed(&b.vertices, &a.vertices)))
}

/// Settings of [`m_median`].
#[derive(Clone, Debug)]
pub struct MedianOptions<T> {
    /// Directions per region (`d = 2`) or grid size (`d >= 3`).
    pub directions: usize,
    /// Resolution of the bisection on the maximal depth.
    pub alpha_tol: T,
    /// Depth slack below the maximal depth for the returned barycenter.
    pub slack: T,
}

impl<T: Scalar> Default for MedianOptions<T> {
    fn default() -> Self {
        MedianOptions { directions: REGION_DIRECTIONS, alpha_tol: T::lit(1e-4), slack: T::lit(1e-3) }
    }
}

/// The M-median: barycenter of the region at depth slightly below the
/// maximal one. The quadratic loss returns the column means.
pub fn m_median<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, opts: &MedianOptions<T>) -> Result<Vec<T>> {
    loss.validate()?;
    if matches!(loss, LossSpec::Quadratic) {
        return Ok(sample.mean().to_vec());
    }
    match sample.dim() {
        1 => median_1d(sample, loss, opts),
        2 => median_2d(sample, loss, opts),
        _ => median_search(sample, loss, opts),
    }
}

/// Largest order in `(0, 1)` for which `nonempty` holds, by bisection.
fn max_order<T: Scalar, F: FnMut(Order<T>) -> Result<bool>>(mut nonempty: F, tol: T) -> Result<T> {
    let mut lo = T::zero();
    let mut hi = T::one();
    while hi - lo > tol {
        let mid = lo + (hi - lo) / T::two();
        if nonempty(Order::new(mid)?)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn slack_order<T: Scalar>(alpha: T, opts: &MedianOptions<T>) -> Result<Order<T>> {
    Order::new((alpha - opts.slack).max(opts.alpha_tol))
}

fn interval_1d<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, order: Order<T>) -> Result<(T, T)> {
    let up = Direction::new(vec![T::one()])?;
    let lo = mquantile_hyperplane(sample, loss, order, &up)?.theta;
    let hi = -mquantile_hyperplane(sample, loss, order, &up.negated())?.theta;
    Ok((lo, hi))
}

fn median_1d<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, opts: &MedianOptions<T>) -> Result<Vec<T>> {
    let alpha = max_order(|o| interval_1d(sample, loss, o).map(|(a, b)| a <= b), opts.alpha_tol)?;
    let (a, b) = interval_1d(sample, loss, slack_order(alpha, opts)?)?;
    Ok(vec![(a + b) / T::two()])
}

fn median_2d<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, opts: &MedianOptions<T>) -> Result<Vec<T>> {
    let dirs = directions::circle(opts.directions.max(3));
    let alpha = max_order(|o| Ok(!region_from_directions(sample, loss, o, &dirs)?.is_empty()), opts.alpha_tol)?;
    let region = region_from_directions(sample, loss, slack_order(alpha, opts)?, &dirs)?;
    region.barycenter().map(|c| c.to_vec()).ok_or(Error::EmptyRegion)
}

/// Compass search for the deepest grid point, started at the mean.
fn median_search<T: Scalar>(sample: &Sample<T>, loss: &LossSpec<T>, opts: &MedianOptions<T>) -> Result<Vec<T>> {
    let d = sample.dim();
    let dirs = directions::grid(d, opts.directions.max(2 * d));
    let depth = |z: &[T]| mdepth_grid(sample, loss, z, &dirs).map(|r| r.value);
    let mut x = sample.mean().to_vec();
    let mut fx = depth(&x)?;
    let mut step = sample.radius_around(&x) / T::lit(4.0);
    let min_step = step * T::lit(1e-6);
    while step > min_step {
        let mut moved = false;
        for j in 0..d {
            for sign in [T::one(), -T::one()] {
                let mut y = x.clone();
                y[j] = y[j] + sign * step;
                let fy = depth(&y)?;
                if fy > fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            step = step / T::two();
        }
    }
    if !in_support(sample, &x)? {
        return Err(Error::NotConverged { iterations: 0 });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Sample<f64> {
        Sample::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap()
    }

    fn unit_box() -> ClipBox<f64> {
        ClipBox { xmin: -1.0, xmax: 2.0, ymin: -1.0, ymax: 2.0 }
    }

    fn square_region(lo: f64, hi: f64) -> Region2D<f64> {
        let hs = vec![
            Hyperplane::new(Direction::new(vec![1.0, 0.0]).unwrap(), lo),
            Hyperplane::new(Direction::new(vec![-1.0, 0.0]).unwrap(), -hi),
            Hyperplane::new(Direction::new(vec![0.0, 1.0]).unwrap(), lo),
            Hyperplane::new(Direction::new(vec![0.0, -1.0]).unwrap(), -hi),
        ];
        Region2D::from_halfspaces(hs, ClipBox { xmin: -5.0, xmax: 5.0, ymin: -5.0, ymax: 5.0 })
    }

    #[test]
    fn clipping_builds_counterclockwise_polygon() {
        let r = square_region(0.0, 1.0);
        assert_eq!(r.vertices.len(), 4);
        assert!((r.area() - 1.0).abs() < 1e-12);
        assert!(!r.is_clipped());
        assert!(r.edge_sources.iter().all(|s| matches!(s, EdgeSource::Halfspace(_))));
        assert!(r.contains(&[0.5, 0.5]));
        assert!(r.contains(&[1.0, 1.0]));
        assert!(!r.contains(&[1.1, 0.5]));
    }

    #[test]
    fn empty_and_unbounded_intersections() {
        let hs = vec![
            Hyperplane::new(Direction::new(vec![1.0, 0.0]).unwrap(), 1.0),
            Hyperplane::new(Direction::new(vec![-1.0, 0.0]).unwrap(), 0.0),
        ];
        let r = Region2D::from_halfspaces(hs, unit_box());
        assert!(r.is_empty());
        assert!(r.barycenter().is_none());

        let hs = vec![Hyperplane::new(Direction::new(vec![1.0, 1.0]).unwrap(), 0.0)];
        let r = Region2D::from_halfspaces(hs, unit_box());
        assert!(r.is_clipped());
        assert_eq!(r.edge_sources.iter().filter(|s| **s == EdgeSource::Halfspace(0)).count(), 1);
        assert!((r.area() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_examples() {
        let a = square_region(0.0, 1.0);
        assert_eq!(region_hausdorff(&a, &a).unwrap(), 0.0);
        let hs: Vec<_> =
            a.halfspaces.iter().map(|h| Hyperplane::new(h.u.clone(), h.theta + h.u.dot(&[0.3, 0.0]))).collect();
        let shifted = Region2D::from_halfspaces(hs, a.clip_box);
        assert!((region_hausdorff(&a, &shifted).unwrap() - 0.3).abs() < 1e-12);
        let eps = 0.05;
        let big = square_region(-eps, 1.0 + eps);
        assert!((region_hausdorff(&a, &big).unwrap() - eps * 2f64.sqrt()).abs() < 1e-12);
        let empty = Region2D::from_halfspaces(
            vec![
                Hyperplane::new(Direction::new(vec![1.0, 0.0]).unwrap(), 1.0),
                Hyperplane::new(Direction::new(vec![-1.0, 0.0]).unwrap(), 0.0),
            ],
            unit_box(),
        );
        assert_eq!(region_hausdorff(&a, &empty), Err(Error::EmptyRegion));
    }

    #[test]
    fn hyperplane_examples() {
        let s = Sample::from_rows(&[vec![0.0f64, 1.0], vec![2.0, 0.0], vec![1.0, 5.0], vec![4.0, 2.0]]).unwrap();
        let u = Direction::new(vec![0.6, 0.8]).unwrap();
        let half = Order::new(0.5).unwrap();
        let h = mquantile_hyperplane(&s, &LossSpec::Quadratic, half, &u).unwrap();
        assert!((h.theta - u.dot(s.mean())).abs() < 1e-14);
        let e1 = Direction::new(vec![1.0, 0.0]).unwrap();
        let q = mquantile_hyperplane(&s, &LossSpec::Absolute, Order::new(0.25).unwrap(), &e1).unwrap();
        assert_eq!(q.theta, 0.0);
        let b = [3.0, -2.0];
        let shifted = s.translate(&b).unwrap();
        let h2 = mquantile_hyperplane(&shifted, &LossSpec::Huber(0.5), Order::new(0.3).unwrap(), &u).unwrap();
        let h1 = mquantile_hyperplane(&s, &LossSpec::Huber(0.5), Order::new(0.3).unwrap(), &u).unwrap();
        assert!((h2.theta - h1.theta - u.dot(&b)).abs() < 1e-9);
    }

    #[test]
    fn square_regions() {
        let s = square();
        let r = depth_region_2d(&s, &LossSpec::Quadratic, Order::new(0.499).unwrap(), 360).unwrap();
        assert!(!r.is_empty());
        assert!(r.contains(&[0.5, 0.5]));
        assert!(r.area() < 1e-3);
        let outer = depth_region_2d(&s, &LossSpec::Quadratic, Order::new(0.0001).unwrap(), 360).unwrap();
        for v in &outer.vertices {
            assert!(v[0] >= -1e-9 && v[0] <= 1.0 + 1e-9 && v[1] >= -1e-9 && v[1] <= 1.0 + 1e-9);
        }
        assert!(!outer.contains(&[1.5, 0.5]));
        let bc = outer.barycenter().unwrap();
        assert!(outer.contains(&bc));
        for v in &outer.vertices {
            assert!(outer.contains(v));
        }
    }

    #[test]
    fn median_examples() {
        let s = Sample::from_rows(&[vec![1.0, 2.0], vec![3.0, 0.0], vec![0.0, 7.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(m_median(&s, &LossSpec::Quadratic, &MedianOptions::default()).unwrap(), s.mean().to_vec());

        // Centrally symmetric about (1, -2).
        let c = [1.0, -2.0];
        let offs = [[1.0, 0.2], [0.3, 1.1], [-0.7, 0.9], [2.0, -0.4], [0.5, 0.5]];
        let rows: Vec<Vec<f64>> =
            offs.iter().flat_map(|o| [vec![c[0] + o[0], c[1] + o[1]], vec![c[0] - o[0], c[1] - o[1]]]).collect();
        let sym = Sample::from_rows(&rows).unwrap();
        let med = m_median(&sym, &LossSpec::Absolute, &MedianOptions::default()).unwrap();
        assert!((med[0] - c[0]).abs() < 1e-6 && (med[1] - c[1]).abs() < 1e-6, "{med:?}");
    }

    #[test]
    fn univariate_median_is_interval_midpoint() {
        let s = Sample::from_rows(&[vec![0.0f64], vec![1.0], vec![2.0], vec![10.0]]).unwrap();
        let med = m_median(&s, &LossSpec::Absolute, &MedianOptions::default()).unwrap();
        // Depth is maximal (1/2) on [1, 2].
        assert!((med[0] - 1.5).abs() < 1e-12);
        let series = crate::univariate::Series::new(vec![0.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!(series.mdepth(&LossSpec::Absolute, med[0]).unwrap(), 0.5);
    }
}
