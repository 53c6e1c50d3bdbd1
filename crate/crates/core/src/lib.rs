//! Numerical construction of non-radial, rigidly rotating eigenmodes of the
//! linearized 2D Euler equations around a plateaued radial vortex.
//!
//! The base vortex `(1+r^2)^{-1}` is flattened on an annulus of width
//! `epsilon` around `r = 1`. On the support of the modified profile's radial
//! derivative the eigenmode equation reduces to a pair of singular
//! second-order ODEs, one on each side of the plateau, coupled only through
//! the rotation speed `lambda` and a 2x2 matching system at the plateau
//! edges. This crate provides:
//!
//! * [`profiles`]: the vortex profiles, angular-velocity coefficient `c(r)`
//!   and its rescaled one-sided variants with closed-form epsilon expansions;
//! * [`kernels`]: the azimuthal interaction kernels `K_n` and their
//!   trigonometric-integral representation used as an independent oracle;
//! * [`numerics`]: adaptive Gauss-Kronrod quadrature for nearly singular
//!   integrands, semi-infinite integrals, Brent root finding, truncated
//!   power/log series and a Dormand-Prince stepper with dense output;
//! * [`radial_ode`]: shooting solutions of the left/right radial ODEs with
//!   series starters at the regular-singular endpoints, companion solutions
//!   and Wronskian diagnostics;
//! * [`eigensolver`]: the matching integrals, the determinant condition and
//!   the bracketed root solve for the rotation speed;
//! * [`mode_assembly`]: reconstruction of the physical eigenmode, residual
//!   verification of the original integral equations, and scaling studies;
//! * [`checks`]: the fast self-check suite run by `vortex-modes check`.

pub mod checks;
pub mod eigensolver;
pub mod error;
pub mod kernels;
pub mod mode_assembly;
pub mod numerics;
pub mod profiles;
pub mod radial_ode;

pub use error::{Error, Result};
pub use profiles::{Side, VortexProfile};

/// `lambda_0 = log(2)/2`, the rotation speed of the unperturbed problem.
pub const LAMBDA_0: f64 = core::f64::consts::LN_2 / 2.0;

/// Slope of `lambda_0 + c(x, 0)` at `x = 1`: `log(2) - 1/2`.
pub const C_SLOPE_AT_1: f64 = core::f64::consts::LN_2 - 0.5;

/// `d/dr (1+r^2)^{-1}` evaluated at `r = 1`.
pub const DVARPI0_AT_1: f64 = -0.5;

/// Default upper limit for the plateau width parameter.
pub const EPSILON_MAX: f64 = 0.15;

/// Open admissible window for the first-order rotation-speed coefficient:
/// `(-log(2)/2, -(1-log(2))/2)`.
pub fn lambda1_window() -> (f64, f64) {
    (-LAMBDA_0, -(1.0 - core::f64::consts::LN_2) / 2.0)
}
