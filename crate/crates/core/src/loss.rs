//! Symmetric convex losses, their asymmetric versions and left derivatives.
//!
//! Every M-quantile in the crate is parameterized by a [`LossSpec`]: the
//! absolute loss gives quantiles, the quadratic loss gives expectiles, and the
//! power and Huber families interpolate between them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A convex, symmetric loss that vanishes only at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LossSpec<T> {
    /// `|t|`
    Absolute,
    /// `t^2`
    Quadratic,
    /// `|t|^r` with `r >= 1`.
    Power(T),
    /// `t^2/(2c)` on `|t| < c`, `|t| - c/2` outside, with `c > 0`.
    Huber(T),
}

impl<T: Scalar> LossSpec<T> {
    pub fn power(r: T) -> Result<Self> {
        if r.is_finite() && r >= T::one() {
            Ok(LossSpec::Power(r))
        } else {
            Err(Error::InvalidLoss(format!("power exponent must be >= 1, got {r}")))
        }
    }

    pub fn huber(c: T) -> Result<Self> {
        if c.is_finite() && c > T::zero() {
            Ok(LossSpec::Huber(c))
        } else {
            Err(Error::InvalidLoss(format!("huber scale must be > 0, got {c}")))
        }
    }

    /// Checks the parameter constraints of a value built without the
    /// validating constructors.
    pub fn validate(&self) -> Result<()> {
        match *self {
            LossSpec::Power(r) => Self::power(r).map(|_| ()),
            LossSpec::Huber(c) => Self::huber(c).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// `rho(t)`.
    pub fn rho(&self, t: T) -> T {
        let a = t.abs();
        match *self {
            LossSpec::Absolute => a,
            LossSpec::Quadratic => t * t,
            LossSpec::Power(r) => a.powf(r),
            LossSpec::Huber(c) => {
                if a < c {
                    t * t / (T::two() * c)
                } else {
                    a - c / T::two()
                }
            }
        }
    }

    /// Left derivative `psi_-(t)` of `rho`.
    pub fn psi_minus(&self, t: T) -> T {
        match *self {
            LossSpec::Absolute => {
                if t > T::zero() {
                    T::one()
                } else {
                    -T::one()
                }
            }
            LossSpec::Quadratic => T::two() * t,
            LossSpec::Power(r) => {
                if t == T::zero() {
                    if r > T::one() {
                        T::zero()
                    } else {
                        -T::one()
                    }
                } else {
                    r * t.signum() * t.abs().powf(r - T::one())
                }
            }
            LossSpec::Huber(c) => {
                if t.abs() < c {
                    t / c
                } else if t > T::zero() {
                    T::one()
                } else {
                    -T::one()
                }
            }
        }
    }

    /// `|psi_-(t)|`, the weight a residual `t` receives in the G function.
    #[inline]
    pub(crate) fn psi_weight(&self, t: T) -> T {
        match *self {
            LossSpec::Absolute => T::one(),
            LossSpec::Quadratic => t.abs(),
            _ => self.psi_minus(t).abs(),
        }
    }

    /// Asymmetric loss `((1-alpha) 1[t<0] + alpha 1[t>0]) rho(t)`.
    pub fn rho_alpha(&self, order: Order<T>, t: T) -> T {
        let a = order.value();
        if t < T::zero() {
            (T::one() - a) * self.rho(t)
        } else if t > T::zero() {
            a * self.rho(t)
        } else {
            T::zero()
        }
    }

    /// True when `psi_-` is continuous, so that `G(theta_alpha) = alpha`.
    pub fn has_continuous_psi(&self) -> bool {
        match *self {
            LossSpec::Absolute => false,
            LossSpec::Power(r) => r > T::one(),
            LossSpec::Quadratic | LossSpec::Huber(_) => true,
        }
    }

    /// True for the power family, whose M-quantiles are affine equivariant.
    pub fn is_power_family(&self) -> bool {
        !matches!(self, LossSpec::Huber(_))
    }

    /// Absolute loss or `Power(1)`.
    pub(crate) fn is_absolute(&self) -> bool {
        match *self {
            LossSpec::Absolute => true,
            LossSpec::Power(r) => r == T::one(),
            _ => false,
        }
    }
}

impl<T: Scalar> fmt::Display for LossSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossSpec::Absolute => write!(f, "absolute"),
            LossSpec::Quadratic => write!(f, "quadratic"),
            LossSpec::Power(r) => write!(f, "power:{r}"),
            LossSpec::Huber(c) => write!(f, "huber:{c}"),
        }
    }
}

/// Parses `absolute`, `quadratic`, `power:R` and `huber:C`.
impl<T: Scalar> FromStr for LossSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let param = |a: Option<&str>| -> Result<T> {
            let a = a.ok_or_else(|| Error::InvalidLoss(format!("`{name}` needs a parameter, e.g. `{name}:1.5`")))?;
            a.parse::<f64>().map(T::lit).map_err(|_| Error::InvalidLoss(format!("cannot parse parameter `{a}`")))
        };
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("absolute", None) => Ok(LossSpec::Absolute),
            ("quadratic", None) => Ok(LossSpec::Quadratic),
            ("power", a) => LossSpec::power(param(a)?),
            ("huber", a) => LossSpec::huber(param(a)?),
            _ => Err(Error::InvalidLoss(format!("unknown loss `{s}`"))),
        }
    }
}

/// An order `alpha` in the open unit interval.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Order<T>(T);

impl<T: Scalar> Order<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha > T::zero() && alpha < T::one() {
            Ok(Order(alpha))
        } else {
            Err(Error::InvalidOrder(alpha.as_f64()))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// The order `1 - alpha`.
    pub fn complement(self) -> Self {
        Order(T::one() - self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        assert_eq!(LossSpec::<f64>::Quadratic.rho(3.0), 9.0);
        assert_eq!(LossSpec::Huber(1.0).rho(2.0), 1.5);
        assert_eq!(LossSpec::<f64>::Absolute.rho(-4.0), 4.0);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(LossSpec::<f64>::Absolute.psi_minus(0.0), -1.0);
        assert_eq!(LossSpec::<f64>::Quadratic.psi_minus(-2.0), -4.0);
        assert_eq!(LossSpec::Huber(2.0).psi_minus(1.0), 0.5);
        assert_eq!(LossSpec::Power(1.5).psi_minus(0.0), 0.0);
        assert_eq!(LossSpec::Power(1.0).psi_minus(0.0), -1.0);
        assert_eq!(LossSpec::Huber(1.0).psi_minus(-1.0), -1.0);
    }

    #[test]
    fn rho_alpha_examples() {
        let half = Order::new(0.5).unwrap();
        let nine = Order::new(0.9).unwrap();
        assert_eq!(LossSpec::<f64>::Quadratic.rho_alpha(half, 2.0), 2.0);
        assert!((LossSpec::<f64>::Absolute.rho_alpha(nine, -1.0) - 0.1).abs() < 1e-15);
        for loss in [LossSpec::Absolute, LossSpec::Quadratic, LossSpec::Power(1.7), LossSpec::Huber(0.3)] {
            assert_eq!(loss.rho_alpha(nine, 0.0), 0.0);
        }
    }

    #[test]
    fn order_bounds() {
        assert!(Order::new(0.0).is_err());
        assert!(Order::new(1.0).is_err());
        assert!(Order::new(f64::NAN).is_err());
        assert_eq!(Order::new(0.3).unwrap().complement().value(), 0.7);
    }

    #[test]
    fn constructors_validate() {
        assert!(LossSpec::power(0.5).is_err());
        assert!(LossSpec::huber(0.0).is_err());
        assert!(LossSpec::Huber(-1.0).validate().is_err());
        assert!(LossSpec::power(1.0).is_ok());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["absolute", "quadratic", "power:1.5", "huber:0.25"] {
            let l: LossSpec<f64> = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert!("power".parse::<LossSpec<f64>>().is_err());
        assert!("huber:-1".parse::<LossSpec<f64>>().is_err());
        assert!("cubic".parse::<LossSpec<f64>>().is_err());
        assert!("absolute:2".parse::<LossSpec<f64>>().is_err());
    }

    #[test]
    fn power_one_matches_absolute() {
        let p = LossSpec::Power(1.0);
        for i in -50..=50 {
            let t = i as f64 * 0.13;
            assert_eq!(p.rho(t), LossSpec::Absolute.rho(t));
            assert_eq!(p.psi_minus(t), LossSpec::Absolute.psi_minus(t));
        }
    }

    #[test]
    fn small_huber_tracks_absolute() {
        // |t| - c/2 outside the corridor: the gap to |t| is exactly c/2.
        let c = 1e-6;
        for i in 1..100 {
            let t = i as f64 * 0.05;
            assert!((LossSpec::Huber(c).rho(t) - t).abs() <= c / 2.0 + 1e-15);
        }
    }
}
