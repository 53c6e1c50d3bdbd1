//! Shared numerical machinery: adaptive quadrature, semi-infinite integrals,
//! bracketed root finding, truncated series arithmetic, an embedded
//! Runge-Kutta stepper with dense output, and small least-squares fits.

pub mod brent;
pub mod fit;
pub mod ode;
pub mod quad;
pub mod series;

pub use brent::{brent_root, BrentResult};
pub use ode::{DenseOde, OdeTol};
pub use quad::{adaptive_quad, semiinfinite_quad, QuadratureSpec};
pub use series::SeriesAtPoint;
