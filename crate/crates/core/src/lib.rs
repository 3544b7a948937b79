//! Low-dimensional convex geometry for higher-order polar projection bodies.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernel`]: polytopes in R² and R³ (hulls, halfspace intersection,
//!   volume, Minkowski sums, shadows, surface area measures).
//! - [`quadrature`]: fixed spherical quadrature rules on S¹ and S².
//! - [`gauge`]: support functions of the hulls `C_θ̄`, classical and
//!   mth-order polar projection body gauges, mean width.
//! - [`mixed`]: mixed volumes by polarization and mixed mth-order gauges.
//! - [`covariogram`]: the mth-order covariogram and its radial derivative.
//! - [`stochastic`]: seeded sphere sampling, star-body volumes and the
//!   probabilistic constants of the projection inequalities.
//! - [`positions`]: John ellipsoid, volume ratio, John position and the
//!   minimal isoperimetric ratio.
//!
//! Polytopal arithmetic is restricted to `n ∈ {2, 3}`; star bodies in
//! `R^{nm}` are only ever handled through their gauges.

// `!(x > 0.0)` is used deliberately to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod covariogram;
pub mod error;
pub mod gauge;
pub mod kernel;
pub mod mixed;
pub mod positions;
pub mod quadrature;
pub mod stochastic;

pub use error::{Error, Result};
pub use gauge::{ConvexBody, DirectionTuple, Gauge};
pub use kernel::{Facet, FacetMeasure, Halfspace, Polytope, Segment};
pub use positions::Ellipsoid;
pub use stochastic::EstimateCI;

/// Column vector of runtime dimension.
pub type Vector = nalgebra::DVector<f64>;
/// Square matrix of runtime dimension.
pub type Matrix = nalgebra::DMatrix<f64>;

/// Tolerance for coplanarity, deduplication and membership tests.
pub const EPS_GEOM: f64 = 1e-9;
/// Volumes below this are treated as empty.
pub const EPS_VOL: f64 = 1e-12;
