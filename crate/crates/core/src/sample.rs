//! Multivariate samples, unit directions and hyperplanes.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, norm, Scalar};
use crate::univariate::Series;

/// An `n x d` data matrix standing for its empirical measure.
///
/// Construction rejects samples carried by a single hyperplane.
#[derive(Clone, Debug)]
pub struct Sample<T> {
    n: usize,
    d: usize,
    data: Vec<T>,
    mean: Vec<T>,
}

impl<T: Scalar> Sample<T> {
    /// Builds from row-major storage.
    pub fn from_flat(n: usize, d: usize, data: Vec<T>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSample("dimension must be at least 1".into()));
        }
        if data.len() != n * d {
            return Err(Error::ShapeMismatch(format!("{} entries for a {n} x {d} sample", data.len())));
        }
        if n < d + 1 {
            return Err(Error::InvalidSample(format!("need at least d + 1 = {} rows, got {n}", d + 1)));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("entries must be finite".into()));
        }
        let nt = T::from_count(n);
        let mut mean = vec![T::zero(); d];
        for row in data.chunks_exact(d) {
            for (m, &v) in mean.iter_mut().zip(row) {
                *m = *m + v;
            }
        }
        mean.iter_mut().for_each(|m| *m = *m / nt);
        let sample = Sample { n, d, data, mean };
        if sample.centered_rank() < d {
            return Err(Error::InvalidSample("all points lie on a single hyperplane".into()));
        }
        Ok(sample)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::ShapeMismatch("rows have different lengths".into()));
        }
        Self::from_flat(rows.len(), d, rows.iter().flatten().copied().collect())
    }

    fn centered_rank(&self) -> usize {
        let d = self.d;
        let mut gram = vec![T::zero(); d * d];
        for row in self.rows() {
            for i in 0..d {
                let ci = row[i] - self.mean[i];
                for j in 0..d {
                    gram[i * d + j] = gram[i * d + j] + ci * (row[j] - self.mean[j]);
                }
            }
        }
        linalg::psd_rank(&gram, d, T::epsilon().sqrt() * T::lit(1e-2))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[T] {
        &self.data
    }

    /// Column means.
    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    /// Projections `u'Z_i`.
    pub fn project(&self, u: &Direction<T>) -> Vec<T> {
        self.rows().map(|r| dot(r, u.as_slice())).collect()
    }

    /// The projected sample as a univariate series.
    pub fn projected_series(&self, u: &Direction<T>) -> Result<Series<T>> {
        Series::new(self.project(u))
    }

    /// Per-coordinate `(min, max)`.
    pub fn bounds(&self) -> Vec<(T, T)> {
        let mut b = vec![(T::infinity(), T::neg_infinity()); self.d];
        for row in self.rows() {
            for (bj, &v) in b.iter_mut().zip(row) {
                bj.0 = bj.0.min(v);
                bj.1 = bj.1.max(v);
            }
        }
        b
    }

    /// Image under `z -> A z + b` (`A` row-major `d x d`).
    pub fn affine_image(&self, a: &[T], b: &[T]) -> Result<Self> {
        let d = self.d;
        if a.len() != d * d || b.len() != d {
            return Err(Error::ShapeMismatch("affine map does not match the dimension".into()));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.rows() {
            let img = linalg::mul(a, row, d);
            data.extend(img.iter().zip(b).map(|(&x, &y)| x + y));
        }
        Self::from_flat(self.n, d, data)
    }

    /// Sample shifted by `z`.
    pub fn translate(&self, z: &[T]) -> Result<Self> {
        if z.len() != self.d {
            return Err(Error::ShapeMismatch("shift does not match the dimension".into()));
        }
        let data = self.rows().flat_map(|r| r.iter().zip(z).map(|(&x, &y)| x + y).collect::<Vec<_>>()).collect();
        Self::from_flat(self.n, self.d, data)
    }

    /// Sample scaled by `lambda`.
    pub fn scale(&self, lambda: T) -> Result<Self> {
        Self::from_flat(self.n, self.d, self.data.iter().map(|&v| v * lambda).collect())
    }

    /// Row-wise sum of two samples of equal shape.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::ShapeMismatch(format!("{} x {} vs {} x {}", self.n, self.d, other.n, other.d)));
        }
        Self::from_flat(self.n, self.d, self.data.iter().zip(&other.data).map(|(&x, &y)| x + y).collect())
    }

    /// Largest distance from `z` to a sample point.
    pub(crate) fn radius_around(&self, z: &[T]) -> T {
        self.rows()
            .map(|r| r.iter().zip(z).fold(T::zero(), |s, (&a, &b)| s + (a - b) * (a - b)).sqrt())
            .fold(T::zero(), T::max)
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction<T>(Vec<T>);

impl<T: Scalar> Direction<T> {
    /// Normalizes `v`; fails on zero or non-finite input.
    pub fn new(v: Vec<T>) -> Result<Self> {
        let r = norm(&v);
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidDirection("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Direction(v.into_iter().map(|x| x / r).collect()))
    }

    /// `(cos phi, sin phi)`.
    pub fn from_angle(phi: T) -> Self {
        Direction(vec![phi.cos(), phi.sin()])
    }

    /// Normalizes without validation.
    pub(crate) fn normalized_unchecked(v: Vec<T>) -> Self {
        let r = norm(&v);
        Direction(v.into_iter().map(|x| x / r).collect())
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn dot(&self, x: &[T]) -> T {
        dot(&self.0, x)
    }

    pub fn negated(&self) -> Self {
        Direction(self.0.iter().map(|&x| -x).collect())
    }

    /// Angle in the plane, for `d = 2`.
    pub fn angle(&self) -> T {
        self.0[1].atan2(self.0[0])
    }

    /// The direction `(A^{-1})'u / ||(A^{-1})'u||` that carries halfspaces
    /// through the affine map `z -> A z + b`. Takes `A^{-1}` row-major.
    pub fn affine_transform(&self, a_inv: &[T]) -> Self {
        Self::normalized_unchecked(linalg::transpose_mul(a_inv, &self.0, self.0.len()))
    }
}

/// The hyperplane `{z : u'z = theta}` with upper halfspace `{z : u'z >= theta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<T> {
    pub u: Direction<T>,
    pub theta: T,
}

impl<T: Scalar> Hyperplane<T> {
    pub fn new(u: Direction<T>, theta: T) -> Self {
        Hyperplane { u, theta }
    }

    /// `u'z - theta`; nonnegative inside the upper halfspace.
    #[inline]
    pub fn signed_distance(&self, z: &[T]) -> T {
        self.u.dot(z) - self.theta
    }

    /// Membership in the upper halfspace with absolute slack `tol`.
    #[inline]
    pub fn upper_contains(&self, z: &[T], tol: T) -> bool {
        self.signed_distance(z) >= -tol
    }
}
