//! Halfspace M-depth and hyperplane-valued M-quantiles.
//!
//! The library computes univariate M-quantiles and M-depths for absolute,
//! quadratic, power and Huber losses; their multivariate extension through
//! directional projections (with Tukey depth and expectile depth as the
//! absolute and quadratic cases); depth regions and M-medians in the plane;
//! expectile risk halfspaces; and multiple-output expectile regression.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The `*64` and
//! `*32` aliases below fix the precision.
//!
//! ```
//! use mdepth::{expectile_depth, ExpectileDepthOptions, Sample64};
//!
//! let s = Sample64::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
//! let r = expectile_depth(&s, &[0.5, 0.5], &ExpectileDepthOptions::default()).unwrap();
//! assert!((r.value - 0.5).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod depth;
pub mod directions;
pub mod error;
pub mod linalg;
pub mod loss;
pub mod optimize;
pub mod oracles;
pub mod region;
pub mod regression;
pub mod risk;
pub mod sample;
pub mod scalar;
pub mod simulate;
pub mod special;
pub mod univariate;

pub use depth::{
    directional_outlyingness, expectile_depth, expectile_depth_2d_exact, expectile_depth_many, expectile_outlyingness,
    in_support, mdepth_grid, mdepth_grid_many, mdepth_grid_par, support_radius, truncated_means, tukey_depth_2d_exact,
    Certificate, DepthResult, ExpectileDepthOptions,
};
pub use error::{Error, Result};
pub use loss::{LossSpec, Order};
pub use oracles::{
    ed_gaussian, ed_uniform_ball, ed_uniform_interval, ed_uniform_pair, ed_uniform_sphere, EllipticalSpec,
};
pub use region::{
    depth_region_2d, m_median, mquantile_hyperplane, region_contains, region_from_directions, region_hausdorff,
    ClipBox, EdgeSource, MedianOptions, Region2D,
};
pub use regression::{
    conditional_halfspace, conditional_region_2d, conditional_region_from_directions, linear_expectile_fit,
    local_expectile_fit, Engine, IrlsOptions, Kernel, RegressionData, RegressionFit,
};
pub use risk::{
    check_homogeneity, check_monotonicity, check_subadditivity, check_superadditivity, check_translation,
    risk_halfspace, upper_envelope_2d, RiskReport,
};
pub use sample::{Direction, Hyperplane, Sample};
pub use scalar::Scalar;
pub use simulate::{simulate_cigar, simulate_hetero};
pub use univariate::Series;

pub type Sample64 = Sample<f64>;
pub type Series64 = Series<f64>;
pub type Direction64 = Direction<f64>;
pub type Hyperplane64 = Hyperplane<f64>;
pub type DepthResult64 = DepthResult<f64>;
pub type Region2D64 = Region2D<f64>;
pub type LossSpec64 = LossSpec<f64>;
pub type Order64 = Order<f64>;
pub type RegressionData64 = RegressionData<f64>;
pub type RegressionFit64 = RegressionFit<f64>;
pub type EllipticalSpec64 = EllipticalSpec<f64>;

pub type Sample32 = Sample<f32>;
pub type Series32 = Series<f32>;
pub type Direction32 = Direction<f32>;
pub type Hyperplane32 = Hyperplane<f32>;
pub type DepthResult32 = DepthResult<f32>;
pub type Region2D32 = Region2D<f32>;
pub type LossSpec32 = LossSpec<f32>;
pub type Order32 = Order<f32>;
