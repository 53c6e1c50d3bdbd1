//! Azimuthal interaction kernels and their integral representations.
//!
//! `K_n(r) = r^{n-1}/2` for `r <= 1` and `r^{-n-1}/2` for `r > 1`; the
//! trigonometric integral over the circle reproduces the same values and
//! serves as an independent oracle for the closed form. The angular-velocity
//! identity ties the kernel route for `u_theta/r` to the partial-mass route
//! used throughout the solver.

use crate::error::{Error, Result};
use crate::numerics::{adaptive_quad, semiinfinite_quad, QuadratureSpec};
use crate::profiles::VortexProfile;

/// Azimuthal wavenumber holder for kernel evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub n: u32,
}

impl KernelSpec {
    pub fn new(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("kernel wavenumber must be >= 1"));
        }
        Ok(KernelSpec { n })
    }
}

/// Closed-form kernel value; `r = 1` takes the inner branch (both agree).
pub fn eval_kernel(spec: KernelSpec, r: f64) -> Result<f64> {
    eval_kernel_impl(spec, r, false)
}

/// Implementation with an injectable branch fault used by the self-check
/// suite to prove the trigonometric oracle can detect a corrupted kernel.
#[doc(hidden)]
pub fn eval_kernel_impl(spec: KernelSpec, r: f64, flip_outer_branch: bool) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel ratio must be positive, got {r}")));
    }
    let n = spec.n as i32;
    let v = if r <= 1.0 {
        0.5 * r.powi(n - 1)
    } else if flip_outer_branch {
        0.5 * r.powi(n - 1)
    } else {
        0.5 * r.powi(-n - 1)
    };
    Ok(v)
}

/// Kernel value from the circle integral
/// `(1/2pi) int sin(b) sin(nb) / (1 + r^2 - 2 r cos(b)) db`.
///
/// The integrand concentrates in a Lorentzian peak of width `|1 - r|` at
/// `b = 0`, so panels are graded toward the origin.
pub fn kernel_trig_oracle(spec: KernelSpec, r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("kernel ratio must be positive, got {r}")));
    }
    if r == 1.0 {
        return Err(Error::domain("trig oracle is singular at r = 1"));
    }
    let n = spec.n;
    let f = |beta: f64| {
        beta.sin() * (n as f64 * beta).sin() / (1.0 + r * r - 2.0 * r * beta.cos())
    };
    // Even integrand: integrate the half circle and double.
    let spec_q = QuadratureSpec {
        rel_tol: (0.1 * tol).max(1e-12),
        abs_tol: (0.01 * tol).max(1e-13),
        grading_center: Some(0.0),
        ..QuadratureSpec::default()
    };
    let (half, _) = adaptive_quad(f, (0.0, std::f64::consts::PI), &spec_q)?;
    Ok(half / std::f64::consts::PI)
}

/// Two routes to the angular velocity of the plateaued vortex.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// `int varpi_eps'(s) K_1(r/s) ds` by quadrature.
    pub kernel_route: f64,
    /// `-(1/r^2) int_0^r s varpi_eps ds` from the closed form.
    pub mass_route: f64,
    pub difference: f64,
}

/// Check `c(r) = int_0^inf varpi_eps'(s) K_1(r/s) ds` against the
/// partial-mass closed form. Disagreement beyond `tol` is an error: it
/// signals a broken kernel branch or profile branch.
pub fn angular_velocity_identity(profile: &VortexProfile, r: f64, tol: f64) -> Result<IdentityReport> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let k1 = KernelSpec::new(1)?;
    let integrand = |s: f64| {
        profile.perturbed_derivative(s) * eval_kernel(k1, r / s).unwrap_or(f64::NAN)
    };
    let splits = [profile.inner_edge(), profile.outer_edge(), r];
    let cut = 2.0 * r.max(profile.outer_edge());
    let spec_fin = QuadratureSpec::with_tols(1e-12, 1e-15)
        .split_at(&splits)
        .graded_toward(r.min(cut));
    let (head, _) = adaptive_quad(integrand, (0.0, cut), &spec_fin)?;
    let spec_tail = QuadratureSpec::with_tols(1e-12, 1e-15);
    let (tail, _) = semiinfinite_quad(integrand, cut, &spec_tail)?;
    let kernel_route = head + tail;
    let mass_route = profile.c_physical(r)?;
    let difference = (kernel_route - mass_route).abs();
    if difference > tol {
        return Err(Error::IdentityViolation {
            lhs: kernel_route,
            rhs: mass_route,
            diff: difference,
            tol,
        });
    }
    Ok(IdentityReport { kernel_route, mass_route, difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LAMBDA_0;
    use proptest::prelude::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(eval_kernel(KernelSpec::new(1).unwrap(), 1.0).unwrap(), 0.5);
        assert_eq!(eval_kernel(KernelSpec::new(2).unwrap(), 0.5).unwrap(), 0.25);
        assert_eq!(eval_kernel(KernelSpec::new(3).unwrap(), 2.0).unwrap(), 1.0 / 32.0);
        assert!(eval_kernel(KernelSpec::new(1).unwrap(), 0.0).is_err());
        assert!(eval_kernel(KernelSpec::new(1).unwrap(), -1.0).is_err());
    }

    #[test]
    fn continuous_at_one() {
        for n in 1..=6 {
            let spec = KernelSpec::new(n).unwrap();
            let below = eval_kernel(spec, 1.0 - 1e-12).unwrap();
            let above = eval_kernel(spec, 1.0 + 1e-12).unwrap();
            assert!((below - above).abs() < 1e-10);
            assert!((eval_kernel(spec, 1.0).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn trig_oracle_matches_closed_form() {
        for n in [1, 4] {
            let spec = KernelSpec::new(n).unwrap();
            for r in [0.5, 2.0] {
                let oracle = kernel_trig_oracle(spec, r, 1e-10).unwrap();
                let exact = eval_kernel(spec, r).unwrap();
                assert!((oracle - exact).abs() < 1e-10, "n={n} r={r}: {oracle} vs {exact}");
            }
        }
        // Small-r limit for n = 1: the integrand tends to sin^2(b), whose
        // circle average is 1/2, matching the constant inner branch of K_1.
        let spec = KernelSpec::new(1).unwrap();
        let v = kernel_trig_oracle(spec, 1e-3, 1e-12).unwrap();
        assert!((v - 0.5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn trig_oracle_detects_flipped_branch() {
        let spec = KernelSpec::new(3).unwrap();
        let oracle = kernel_trig_oracle(spec, 2.0, 1e-10).unwrap();
        let bad = eval_kernel_impl(spec, 2.0, true).unwrap();
        assert!((oracle - bad).abs() > 1e-2);
    }

    #[test]
    fn decay_limits_on_dyadic_sequences() {
        for n in 2..=5 {
            let spec = KernelSpec::new(n).unwrap();
            let mut prev_small = f64::INFINITY;
            let mut prev_large = f64::INFINITY;
            for k in 1..=12 {
                let r_small = 2.0_f64.powi(-k);
                let r_large = 2.0_f64.powi(k);
                let low = r_small.powi(2 - n as i32) * eval_kernel(spec, r_small).unwrap();
                let high = r_large.powi(n as i32) * eval_kernel(spec, r_large).unwrap();
                assert!(low < prev_small);
                assert!(high < prev_large);
                prev_small = low;
                prev_large = high;
            }
            assert!(prev_small < 1e-3);
            assert!(prev_large < 1e-3);
        }
    }

    #[test]
    fn angular_velocity_identity_at_limit_profile() {
        let p = VortexProfile::new(0.0).unwrap();
        let rep = angular_velocity_identity(&p, 1.0, 1e-9).unwrap();
        assert!((rep.kernel_route + LAMBDA_0).abs() < 1e-9);
        assert!((rep.mass_route + LAMBDA_0).abs() < 1e-15);
    }

    #[test]
    fn angular_velocity_identity_with_plateau() {
        let p = VortexProfile::new(0.1).unwrap();
        for r in [0.5, 1.0, 2.5] {
            let rep = angular_velocity_identity(&p, r, 1e-9).unwrap();
            assert!(rep.difference < 1e-9, "r={r}: {rep:?}");
        }
        // Far field: both routes go to zero.
        let rep = angular_velocity_identity(&p, 1e4, 1e-9).unwrap();
        assert!(rep.mass_route.abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn scaling_identity_on_random_pairs(
            r in 0.05..5.0f64,
            s in 0.05..5.0f64,
            n in 1u32..8,
        ) {
            let spec = KernelSpec::new(n).unwrap();
            let lhs = eval_kernel(spec, s / r).unwrap() * (s * s) / (r * r);
            let rhs = eval_kernel(spec, r / s).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}
