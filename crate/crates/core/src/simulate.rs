//! Seeded data generators. Every generator draws from one `ChaCha8Rng`
//! seeded with the given `u64`, so equal seeds give identical data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::regression::RegressionData;
use crate::sample::Sample;
use crate::scalar::Scalar;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn to_sample<T: Scalar>(n: usize, d: usize, data: Vec<f64>) -> Result<Sample<T>> {
    Sample::from_flat(n, d, data.into_iter().map(T::lit).collect())
}

/// Heteroscedastic model `Y = 4 (X, X) + sqrt(X / 3) (e1, e2)` with
/// `X ~ U[0, 1]` and `e1 + 1`, `e2 + 1` independent unit exponentials.
pub fn simulate_hetero<T: Scalar>(n: usize, seed: u64) -> Result<RegressionData<T>> {
    let mut r = rng(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let xi: f64 = r.random();
        let e1: f64 = Exp1.sample(&mut r);
        let e2: f64 = Exp1.sample(&mut r);
        let s = (xi / 3.0).sqrt();
        x.push(T::lit(xi));
        y.push(4.0 * xi + s * (e1 - 1.0));
        y.push(4.0 * xi + s * (e2 - 1.0));
    }
    RegressionData::new(1, x, to_sample(n, 2, y)?)
}

/// Cigar-shaped sample: `x` on the uniform grid of `[-1, 1]` with both ends
/// included, `y ~ N(0, 0.01)`.
pub fn simulate_cigar<T: Scalar>(n: usize, seed: u64) -> Result<Sample<T>> {
    if n < 3 {
        return Err(Error::InvalidSample("need at least 3 points".into()));
    }
    let mut r = rng(seed);
    let mut data = Vec::with_capacity(2 * n);
    for i in 0..n {
        let y: f64 = StandardNormal.sample(&mut r);
        data.push(-1.0 + 2.0 * i as f64 / (n - 1) as f64);
        data.push(0.1 * y);
    }
    to_sample(n, 2, data)
}

/// Standard Gaussian sample in `R^d`.
pub fn gaussian_sample<T: Scalar>(n: usize, d: usize, seed: u64) -> Result<Sample<T>> {
    let mut r = rng(seed);
    let data = (0..n * d).map(|_| StandardNormal.sample(&mut r)).collect();
    to_sample(n, d, data)
}

fn sphere_point(r: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut *r)).collect();
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 0.0 {
            return v.into_iter().map(|x| x / nrm).collect();
        }
    }
}

/// Uniform sample on the unit ball of `R^d`.
pub fn uniform_ball_sample<T: Scalar>(n: usize, d: usize, seed: u64) -> Result<Sample<T>> {
    let mut r = rng(seed);
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let dir = sphere_point(&mut r, d);
        let u: f64 = r.random();
        let rad = u.powf(1.0 / d as f64);
        data.extend(dir.into_iter().map(|x| rad * x));
    }
    to_sample(n, d, data)
}

/// Uniform sample on the unit sphere of `R^d`.
pub fn uniform_sphere_sample<T: Scalar>(n: usize, d: usize, seed: u64) -> Result<Sample<T>> {
    let mut r = rng(seed);
    let data = (0..n).flat_map(|_| sphere_point(&mut r, d)).collect();
    to_sample(n, d, data)
}

/// Sample with independent unit exponential coordinates.
pub fn exponential_sample<T: Scalar>(n: usize, d: usize, seed: u64) -> Result<Sample<T>> {
    let mut r = rng(seed);
    let data = (0..n * d).map(|_| Exp1.sample(&mut r)).collect();
    to_sample(n, d, data)
}

/// Draws of `E - 1` with `E` a unit exponential.
pub fn centered_exponential_draws<T: Scalar>(n: usize, seed: u64) -> Vec<T> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(&mut r);
            T::lit(e - 1.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cigar_grid_endpoints_are_exact() {
        let s = simulate_cigar::<f64>(200, 7).unwrap();
        assert_eq!(s.row(0)[0], -1.0);
        assert_eq!(s.row(199)[0], 1.0);
        let big = simulate_cigar::<f64>(100_000, 1).unwrap();
        let var = big.rows().map(|r| r[1] * r[1]).sum::<f64>() / 100_000.0;
        assert!((var - 0.01).abs() < 5e-4);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = simulate_hetero::<f64>(100, 3).unwrap();
        let b = simulate_hetero::<f64>(100, 3).unwrap();
        assert_eq!(a.covariates(), b.covariates());
        assert_eq!(a.responses().as_flat(), b.responses().as_flat());
        let c = simulate_hetero::<f64>(100, 4).unwrap();
        assert_ne!(a.covariates(), c.covariates());
        assert_eq!(
            gaussian_sample::<f64>(10, 3, 1).unwrap().as_flat(),
            gaussian_sample::<f64>(10, 3, 1).unwrap().as_flat()
        );
    }

    #[test]
    fn hetero_conditional_moments() {
        let data = simulate_hetero::<f64>(200_000, 11).unwrap();
        // Standardized residuals (Y1 - 4X) / sqrt(X/3) have mean 0 and variance 1.
        let mut m = 0.0;
        let mut v = 0.0;
        for i in 0..data.len() {
            let x = data.covariate_row(i)[0];
            let z = (data.responses().row(i)[0] - 4.0 * x) / (x / 3.0).sqrt();
            m += z;
            v += z * z;
        }
        let n = data.len() as f64;
        assert!((m / n).abs() < 0.01);
        assert!((v / n - 1.0).abs() < 0.02);
    }

    #[test]
    fn ball_and_sphere_radii() {
        let b = uniform_ball_sample::<f64>(2000, 3, 5).unwrap();
        assert!(b.rows().all(|r| r.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12));
        let s = uniform_sphere_sample::<f64>(100, 4, 5).unwrap();
        assert!(s.rows().all(|r| (r.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12));
    }
}
