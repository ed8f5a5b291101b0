//! Closed-form population expectile depths, plus population expectiles of a
//! few reference laws. Used as ground truth for the sample engines.

use crate::error::{Error, Result};
use crate::linalg;
use crate::loss::Order;
use crate::scalar::Scalar;
use crate::special::{gamma, hyp2f1, hyp2f1_series, normal_cdf, normal_pdf};

/// Expectile depth of `z` for the uniform law on `[0, 1]`.
pub fn ed_uniform_interval<T: Scalar>(z: T) -> T {
    if !(z >= T::zero() && z <= T::one()) {
        return T::zero();
    }
    let a = z * z;
    let b = (T::one() - z) * (T::one() - z);
    a.min(b) / (a + b)
}

/// Expectile depth of `z` for the uniform law on `{0, 1}`.
pub fn ed_uniform_pair<T: Scalar>(z: T) -> T {
    if !(z >= T::zero() && z <= T::one()) {
        return T::zero();
    }
    z.min(T::one() - z)
}

/// Location and scatter of an elliptical law.
#[derive(Clone, Debug)]
pub struct EllipticalSpec<T> {
    mu: Vec<T>,
    sigma: Vec<T>,
    chol: Vec<T>,
}

impl<T: Scalar> EllipticalSpec<T> {
    /// `sigma` is row-major `d x d`, symmetric and positive definite.
    pub fn new(mu: Vec<T>, sigma: Vec<T>) -> Result<Self> {
        let d = mu.len();
        if d == 0 || sigma.len() != d * d {
            return Err(Error::ShapeMismatch(format!("scatter has {} entries for dimension {d}", sigma.len())));
        }
        if mu.iter().chain(&sigma).any(|v| !v.is_finite()) {
            return Err(Error::PreconditionViolated("parameters must be finite".into()));
        }
        let tol = T::lit(1e-12);
        for i in 0..d {
            for j in 0..i {
                if (sigma[i * d + j] - sigma[j * d + i]).abs() > tol {
                    return Err(Error::PreconditionViolated("scatter matrix is not symmetric".into()));
                }
            }
        }
        let chol = linalg::cholesky(&sigma, d)?;
        Ok(EllipticalSpec { mu, sigma, chol })
    }

    /// Standard spherical law in dimension `d`.
    pub fn standard(d: usize) -> Self {
        let sigma = (0..d * d).map(|k| if k % (d + 1) == 0 { T::one() } else { T::zero() }).collect();
        Self::new(vec![T::zero(); d], sigma).expect("identity scatter")
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn sigma(&self) -> &[T] {
        &self.sigma
    }

    /// `||z||_{mu, Sigma} = sqrt((z - mu)' Sigma^{-1} (z - mu))`.
    pub fn mahalanobis(&self, z: &[T]) -> Result<T> {
        let d = self.dim();
        if z.len() != d {
            return Err(Error::ShapeMismatch(format!("point of dimension {} for dimension {d}", z.len())));
        }
        // Solve L y = z - mu; the radius is ||y||.
        let mut y = vec![T::zero(); d];
        for i in 0..d {
            let row = &self.chol[i * d..i * d + i];
            let s = row.iter().zip(&y).fold(z[i] - self.mu[i], |s, (&l, &v)| s - l * v);
            y[i] = s / self.chol[i * d + i];
        }
        Ok(y.iter().fold(T::zero(), |a, &v| a + v * v).sqrt())
    }
}

/// Gaussian expectile depth as a function of the Mahalanobis radius:
/// `1/2 - 1 / (2 ((2/r) phi(r) + 2 Phi(r) - 1))`.
pub fn gaussian_depth_profile<T: Scalar>(r: T) -> T {
    let r = r.abs();
    if r == T::zero() {
        return T::half();
    }
    let denom = T::two() / r * normal_pdf(r) + T::two() * normal_cdf(r) - T::one();
    (T::half() - T::one() / (T::two() * denom)).max(T::zero())
}

/// Expectile depth of `z` under the Gaussian law with parameters `spec`.
pub fn ed_gaussian<T: Scalar>(z: &[T], spec: &EllipticalSpec<T>) -> Result<T> {
    Ok(gaussian_depth_profile(spec.mahalanobis(z)?))
}

/// Radius at which the Gaussian depth profile equals `depth`, for
/// `depth` in `(0, 1/2]`.
pub fn gaussian_depth_radius<T: Scalar>(depth: T) -> Result<T> {
    if !(depth > T::zero() && depth <= T::half()) {
        return Err(Error::PreconditionViolated("depth must lie in (0, 1/2]".into()));
    }
    bisect(|r| gaussian_depth_profile(r) - depth, T::zero(), T::lit(40.0), true)
}

fn bisect<T: Scalar, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, decreasing: bool) -> Result<T> {
    for _ in 0..400 {
        let mid = lo + (hi - lo) / T::two();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if (v > T::zero()) == decreasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) / T::two())
}

/// Truncation and term cap of the transformed series. Its terms decay only
/// polynomially near `r = 1`, so the cut is much finer than the default.
const EULER_TOL: f64 = 1e-18;
const EULER_CAP: usize = 2_000_000;

/// `omega_m(r)`, the expectile depth profile of the rotationally symmetric
/// laws whose one-dimensional marginals have density proportional to
/// `(1 - t^2)^{(m-1)/2}` on `[-1, 1]`, with `m = -1` the pair `{-1, 1}`.
///
/// `m = d` gives the uniform law on the unit ball of `R^d` and `m = d - 2`
/// the uniform law on its sphere. Defined for `m >= -1`; zero for `r >= 1`.
pub fn omega<T: Scalar>(r: T, m: i32) -> Result<T> {
    if m < -1 {
        return Err(Error::PreconditionViolated(format!("index {m} is below -1")));
    }
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::PreconditionViolated("radius must be finite and nonnegative".into()));
    }
    if r >= T::one() {
        return Ok(T::zero());
    }
    if r == T::zero() {
        return Ok(T::half());
    }
    let mt = T::lit(f64::from(m));
    let x = r * r;
    let ratio =
        T::PI().sqrt() * r * gamma((mt + T::lit(3.0)) / T::two()) / (T::two() * gamma((mt + T::two()) / T::two()));
    let value = match hyp2f1(T::one(), (mt + T::two()) / T::two(), T::lit(1.5), x) {
        Ok(f) => {
            let pre = (T::one() - x).powf(-(mt + T::one()) / T::two());
            T::half() - ratio * pre / (T::one() + (mt + T::one()) * x * f)
        }
        Err(_) => T::half() - ratio / omega_euler_denominator(x, mt)?,
    };
    Ok(value.max(T::zero()).min(T::half()))
}

/// `(1 - x)^{(m+1)/2} + (m + 1) x 2F1(1/2, (1-m)/2; 3/2; x)`, the Euler
/// transform of the denominator of [`omega`]. Its series converges up to
/// `x = 1`.
fn omega_euler_denominator<T: Scalar>(x: T, mt: T) -> Result<T> {
    let f = hyp2f1_series(T::half(), (T::one() - mt) / T::two(), T::lit(1.5), x, T::lit(EULER_TOL), EULER_CAP)?;
    Ok((T::one() - x).powf((mt + T::one()) / T::two()) + (mt + T::one()) * x * f)
}

/// [`omega`] evaluated through the Euler-transformed series only.
pub fn omega_transformed<T: Scalar>(r: T, m: i32) -> Result<T> {
    if r >= T::one() {
        return Ok(T::zero());
    }
    if r <= T::zero() {
        return Ok(T::half());
    }
    let mt = T::lit(f64::from(m));
    let ratio =
        T::PI().sqrt() * r * gamma((mt + T::lit(3.0)) / T::two()) / (T::two() * gamma((mt + T::two()) / T::two()));
    let v = T::half() - ratio / omega_euler_denominator(r * r, mt)?;
    Ok(v.max(T::zero()).min(T::half()))
}

/// Expectile depth at radius `r` for the uniform law on the unit ball of `R^d`.
pub fn ed_uniform_ball<T: Scalar>(r: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::PreconditionViolated("dimension must be at least 1".into()));
    }
    omega(r, d as i32)
}

/// Expectile depth at radius `r` for the uniform law on the unit sphere of
/// `R^d`. For `d = 1` the sphere is the pair `{-1, 1}`.
pub fn ed_uniform_sphere<T: Scalar>(r: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::PreconditionViolated("dimension must be at least 1".into()));
    }
    omega(r, d as i32 - 2)
}

/// Order-`alpha` expectile of the standard normal law.
pub fn gaussian_expectile<T: Scalar>(order: Order<T>) -> T {
    let a = order.value();
    // alpha E(Z - t)_+ = (1 - alpha) E(t - Z)_+
    let f = |t: T| {
        let upper = normal_pdf(t) - t * (T::one() - normal_cdf(t));
        let lower = t * normal_cdf(t) + normal_pdf(t);
        a * upper - (T::one() - a) * lower
    };
    bisect(f, T::lit(-40.0), T::lit(40.0), true).expect("bisection")
}

/// Order-`alpha` expectile of the unit exponential law.
pub fn exponential_expectile<T: Scalar>(order: Order<T>) -> T {
    let a = order.value();
    let f = |t: T| a * (-t).exp() - (T::one() - a) * (t - T::one() + (-t).exp());
    bisect(f, T::zero(), T::lit(60.0), true).expect("bisection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn univariate_examples() {
        assert_eq!(ed_uniform_interval(0.5), 0.5);
        assert_relative_eq!(ed_uniform_interval(0.25), 0.1, max_relative = 1e-15);
        assert_eq!(ed_uniform_interval(1.5), 0.0);
        assert_eq!(ed_uniform_pair(0.25), 0.25);
        assert_eq!(ed_uniform_pair(0.5), 0.5);
        assert_eq!(ed_uniform_pair(-0.1), 0.0);
    }

    #[test]
    fn gaussian_profile() {
        assert_eq!(gaussian_depth_profile(0.0f64), 0.5);
        let phi1 = 0.241971;
        let cdf1 = 0.841345;
        let hand = 0.5 - 1.0 / (2.0 * (2.0 * phi1 + 2.0 * cdf1 - 1.0));
        assert!((gaussian_depth_profile(1.0f64) - hand).abs() < 1e-6);
        assert!((gaussian_depth_profile(1.0f64) - 0.0714).abs() < 1e-4);
        let r = gaussian_depth_radius(0.2f64).unwrap();
        assert!((gaussian_depth_profile(r) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn gaussian_depth_is_radial() {
        let spec = EllipticalSpec::new(vec![1.0, -1.0], vec![2.0, 0.5, 0.5, 1.0]).unwrap();
        assert_eq!(ed_gaussian(&[1.0, -1.0], &spec).unwrap(), 0.5);
        let a = ed_gaussian(&[2.0, -1.0], &spec).unwrap();
        let b = ed_gaussian(&[0.0, -1.0], &spec).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        assert!(EllipticalSpec::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(EllipticalSpec::new(vec![0.0, 0.0], vec![1.0, 2.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn ball_matches_interval_in_one_dimension() {
        for k in 0..=20 {
            let z = k as f64 / 20.0;
            let via_ball = ed_uniform_ball((2.0 * z - 1.0).abs(), 1).unwrap();
            assert!((via_ball - ed_uniform_interval(z)).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn low_index_spheres_match_pair_and_interval() {
        for k in 0..=20 {
            let z = k as f64 / 20.0;
            let r = (2.0 * z - 1.0).abs();
            assert!((ed_uniform_sphere(r, 1).unwrap() - ed_uniform_pair(z)).abs() < 1e-12);
            assert!((ed_uniform_sphere(r, 3).unwrap() - ed_uniform_interval(z)).abs() < 1e-12);
        }
        // m = 0 has the closed form 1/2 - (pi/4) r / (sqrt(1 - r^2) + r asin r).
        for r in [0.1f64, 0.5, 0.9, 0.999] {
            let closed = 0.5 - std::f64::consts::FRAC_PI_4 * r / ((1.0 - r * r).sqrt() + r * r.asin());
            assert!((ed_uniform_sphere(r, 2).unwrap() - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_profiles_are_monotone() {
        for d in 1..=6 {
            assert_eq!(ed_uniform_ball(0.0f64, d).unwrap(), 0.5);
            assert_eq!(ed_uniform_ball(1.0f64, d).unwrap(), 0.0);
            let mut prev = 0.5;
            for k in 1..=1000 {
                let r = k as f64 * 0.000999;
                let v = ed_uniform_ball(r, d).unwrap();
                assert!(v <= prev + 1e-13, "d = {d}, r = {r}");
                assert!((0.0..=0.5).contains(&v));
                prev = v;
            }
            assert!(ed_uniform_ball(0.999f64, d).unwrap() < 0.01);
        }
    }

    #[test]
    fn both_series_routes_agree() {
        for m in -1..=6 {
            for r in [0.05f64, 0.3, 0.6, 0.9, 0.99] {
                let a = omega(r, m).unwrap();
                let b = omega_transformed(r, m).unwrap();
                assert!((a - b).abs() < 1e-11, "m = {m}, r = {r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn reference_expectiles() {
        let half = Order::new(0.5f64).unwrap();
        assert!(gaussian_expectile(half).abs() < 1e-12);
        assert!((exponential_expectile(half) - 1.0).abs() < 1e-12);
        let lo = Order::new(0.2f64).unwrap();
        assert!((gaussian_expectile(lo) + gaussian_expectile(lo.complement())).abs() < 1e-12);
        // Gaussian depth at the expectile radius equals the order.
        let r = -gaussian_expectile(lo);
        assert!((gaussian_depth_profile(r) - 0.2).abs() < 1e-10);
    }
}
