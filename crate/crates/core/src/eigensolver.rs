//! Matching integrals, determinant condition and the rotation-speed solve.
//!
//! The two one-sided solutions couple only through a 2x2 homogeneous system
//! at the plateau edges. Its determinant
//!
//! ```text
//! det(lambda) = 1 + I1 + I2 + (1 - q^{2n}) I1 I2,    q = (1-eps/2)/(1+eps/2)
//! ```
//!
//! diverges logarithmically with opposite signs at the two ends of the
//! spectral-gap bracket, so a bracketed root solve in `lambda` replaces the
//! fixed-point construction of the second-order coefficient. The expansion
//! `lambda = lambda0 + eps l1 + eps^2 log^2(eps) l2` is recovered afterwards
//! as a diagnostic fit against the leading-order `l1` equation.

use crate::error::{Error, Result};
use crate::numerics::{adaptive_quad, brent_root, semiinfinite_quad, QuadratureSpec};
use crate::profiles::{dvarpi0, lambda_bracket, CoeffOrder, Side, SideCoefficient};
use crate::radial_ode::{integrate_radial, GridSpec, OdeProblem, RadialSolution, DEFAULT_START_OFFSET};
use crate::{lambda1_window, C_SLOPE_AT_1, DVARPI0_AT_1, LAMBDA_0};

/// Default bound accepted for the fitted second-order coefficient.
pub const LAMBDA2_BOUND: f64 = 50.0;

/// Relative margin kept away from each bracket endpoint during the solve.
pub const BRACKET_MARGIN: f64 = 5e-4;

/// Stage tolerances of the eigenvalue solve.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub root_tol: f64,
    pub ode_rel_tol: f64,
    pub quad_rel_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { root_tol: 1e-12, ode_rel_tol: 1e-12, quad_rel_tol: 1e-11 }
    }
}

impl Settings {
    pub fn grid(&self) -> GridSpec {
        GridSpec { ode_rel_tol: self.ode_rel_tol, ..GridSpec::default() }
    }
}

/// Decomposition of a solved rotation speed.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Lambda {
    pub total: f64,
    pub lambda0: f64,
    /// `(total - lambda0)/eps`.
    pub lambda1_fit: f64,
    /// `(total - lambda0 - eps l1_ref)/(eps^2 log^2 eps)`.
    pub lambda2_fit: f64,
    /// Leading-order reference coefficient used in the fit.
    pub lambda1_ref: f64,
    pub epsilon: f64,
}

/// Residual summary attached after mode verification.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ResidualSummary {
    pub left_max: f64,
    pub right_max: f64,
    pub physical_max: f64,
    pub n_l_at_1: f64,
    pub n_r_at_1: f64,
}

/// A solved eigenvalue with matching data.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EigenResult {
    pub epsilon: f64,
    pub n: u32,
    pub lambda: Lambda,
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "A")]
    pub amp_a: f64,
    #[serde(rename = "B")]
    pub amp_b: f64,
    pub q_factor: f64,
    pub det_at_root: f64,
    pub bracket: (f64, f64),
    pub residuals: Option<ResidualSummary>,
}

impl EigenResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("eigenvalue result serializes")
    }
}

fn quad_spec_toward_1(rel_tol: f64) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol,
        abs_tol: 1e-12,
        grading_center: Some(1.0),
        ..QuadratureSpec::default()
    }
}

/// `I1 = -((1-eps/2)/2n) int_0^1 varpi0'(s(1-eps/2)) s^n h_L(s)
///        / (lambda + c_L(s,eps)) ds`.
pub fn compute_i1(h_left: &RadialSolution, lambda: f64, epsilon: f64, n: u32) -> Result<f64> {
    compute_i1_with(h_left, lambda, epsilon, n, 1e-11)
}

pub fn compute_i1_with(h_left: &RadialSolution, lambda: f64, epsilon: f64, n: u32, quad_rel: f64) -> Result<f64> {
    let scale = 1.0 - 0.5 * epsilon;
    let coeff = SideCoefficient::new(Side::Left, epsilon)?;
    let pot = h_left.problem.potential_scale;
    let f = |s: f64| {
        let den = lambda + coeff.eval(s, CoeffOrder::Value).unwrap_or(f64::NAN);
        pot * dvarpi0(s * scale) * s.powi(n as i32) * h_left.eval(s) / den
    };
    let (v, _) = adaptive_quad(f, (0.0, 1.0), &quad_spec_toward_1(quad_rel))?;
    Ok(-scale / (2.0 * n as f64) * v)
}

/// `I2 = -((1+eps/2)/2n) int_1^inf varpi0'(s(1+eps/2)) s^{-n} h_R(s)
///        / (lambda + c_R(s,eps)) ds`, tail mapped through `z = 1/x`.
pub fn compute_i2(h_right: &RadialSolution, lambda: f64, epsilon: f64, n: u32) -> Result<f64> {
    compute_i2_with(h_right, lambda, epsilon, n, 1e-11)
}

pub fn compute_i2_with(h_right: &RadialSolution, lambda: f64, epsilon: f64, n: u32, quad_rel: f64) -> Result<f64> {
    let scale = 1.0 + 0.5 * epsilon;
    let coeff = SideCoefficient::new(Side::Right, epsilon)?;
    let pot = h_right.problem.potential_scale;
    let f = |s: f64| {
        let den = lambda + coeff.eval(s, CoeffOrder::Value).unwrap_or(f64::NAN);
        pot * dvarpi0(s * scale) * s.powi(-(n as i32)) * h_right.eval(s) / den
    };
    let (head, _) = adaptive_quad(&f, (1.0, 2.0), &quad_spec_toward_1(quad_rel))?;
    let (tail, _) = semiinfinite_quad(&f, 2.0, &QuadratureSpec::with_tols(quad_rel, 1e-13))?;
    Ok(-scale / (2.0 * n as f64) * (head + tail))
}

/// One determinant evaluation, carrying the pieces it was built from.
#[derive(Debug)]
pub struct DetEval {
    pub lambda: f64,
    pub i1: f64,
    pub i2: f64,
    pub det: f64,
    pub h_left: RadialSolution,
    pub h_right: RadialSolution,
}

/// Solve both ODEs at `lambda` and evaluate the matching determinant.
pub fn determinant(lambda: f64, epsilon: f64, n: u32) -> Result<DetEval> {
    determinant_with(lambda, epsilon, n, &Settings::default())
}

pub fn determinant_with(lambda: f64, epsilon: f64, n: u32, settings: &Settings) -> Result<DetEval> {
    let left = OdeProblem::new(Side::Left, n, epsilon, lambda)?;
    let right = OdeProblem::new(Side::Right, n, epsilon, lambda)?;
    let grid = settings.grid();
    let h_left = integrate_radial(&left, DEFAULT_START_OFFSET, grid)?;
    let h_right = integrate_radial(&right, DEFAULT_START_OFFSET, grid)?;
    let i1 = compute_i1_with(&h_left, lambda, epsilon, n, settings.quad_rel_tol)?;
    let i2 = compute_i2_with(&h_right, lambda, epsilon, n, settings.quad_rel_tol)?;
    let q = (1.0 - 0.5 * epsilon) / (1.0 + 0.5 * epsilon);
    let det = 1.0 + i1 + i2 + (1.0 - q.powi(2 * n as i32)) * i1 * i2;
    Ok(DetEval { lambda, i1, i2, det, h_left, h_right })
}

/// Null vector of the matching matrix at a (near-)root, normalized so the
/// largest-magnitude amplitude equals one. Row selection by larger pivot.
pub fn null_vector(i1: f64, i2: f64, epsilon: f64, n: u32) -> Result<(f64, f64)> {
    let q = (1.0 - 0.5 * epsilon) / (1.0 + 0.5 * epsilon);
    let qn = q.powi(n as i32);
    let (a, b) = if (1.0 + i1).abs() >= (1.0 + i2).abs() {
        (qn * i2, -(1.0 + i1))
    } else {
        (-(1.0 + i2), qn * i1)
    };
    let m = if a.abs() >= b.abs() { a } else { b };
    if m == 0.0 {
        return Err(Error::DegenerateMatrix);
    }
    Ok((a / m, b / m))
}

/// Pieces of the leading-order equation for the first expansion coefficient.
#[derive(Debug, Clone, Copy)]
pub struct Lambda1Leading {
    /// Root of the condition with the profile-slope weight on the log term
    /// (the convention consistent with the asymptotics of `I1 + I2`).
    pub value: f64,
    /// Root of the variant with a unit-weight log term, kept as a
    /// diagnostic; the two typeset conventions disagree in print.
    pub value_alt: f64,
    pub z_left: f64,
    pub z_right: f64,
}

/// Curvature of `lambda0 + c(x, 0)` at `x = 1`: `(2 - 3 log 2)/2`.
fn c_curvature_at_1() -> f64 {
    0.5 * (2.0 - 3.0 * std::f64::consts::LN_2)
}

/// `[(lambda0 + c(x,0)) - c1 (x-1)] / [(lambda0 + c(x,0)) c1 (x-1)]`,
/// removable at `x = 1`; both factors come from the cancellation-free gap
/// series.
fn regularized_gap_quotient(x: f64) -> f64 {
    let u = x - 1.0;
    let c1 = C_SLOPE_AT_1;
    if u == 0.0 {
        return c_curvature_at_1() / (c1 * c1);
    }
    crate::profiles::gap0_tail(x) / (crate::profiles::gap0(x) * c1 * u)
}

/// Compute the two collapsed boundary integrals of the limit problem and
/// solve the scalar leading-order condition for the first coefficient.
pub fn lambda1_leading(n: u32) -> Result<Lambda1Leading> {
    let left_problem = OdeProblem::new(Side::Left, n, 0.0, LAMBDA_0)?;
    let right_problem = OdeProblem::new(Side::Right, n, 0.0, LAMBDA_0)?;
    let grid = GridSpec::default();
    let h_left = integrate_radial(&left_problem, DEFAULT_START_OFFSET, grid)?;
    let h_right = integrate_radial(&right_problem, DEFAULT_START_OFFSET, grid)?;
    let (z_left, z_right) = boundary_z_integrals(&h_left, &h_right, n)?;

    let (w_lo, w_hi) = lambda1_window();
    let log_ratio = |l1: f64| (-(l1 + (1.0 - std::f64::consts::LN_2) / 2.0) / (l1 + LAMBDA_0)).ln();
    let two_n = 2.0 * n as f64;
    let f_slope = |l1: f64| 1.0 - (DVARPI0_AT_1 / C_SLOPE_AT_1) / two_n * log_ratio(l1) + z_left + z_right;
    let f_unit = |l1: f64| 1.0 - (1.0 / C_SLOPE_AT_1) / two_n * log_ratio(l1) + z_left + z_right;

    let solve_in_window = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let width = w_hi - w_lo;
        let mut delta = 1e-3 * width;
        while delta > 1e-15 * width {
            let lo = w_lo + delta;
            let hi = w_hi - delta;
            if f(lo).signum() != f(hi).signum() {
                let r = brent_root(f, (lo, hi), 1e-14, 200)?;
                return Ok(r.root);
            }
            delta *= 1e-3;
        }
        Err(Error::WindowViolation { value: f(0.5 * (w_lo + w_hi)) })
    };
    let value = solve_in_window(&f_slope)?;
    let value_alt = solve_in_window(&f_unit)?;
    Ok(Lambda1Leading { value, value_alt, z_left, z_right })
}

/// The `Z` functionals of the limit solutions (finite: the numerators vanish
/// resonantly at the matching point).
pub fn boundary_z_integrals(h_left: &RadialSolution, h_right: &RadialSolution, n: u32) -> Result<(f64, f64)> {
    let c1 = C_SLOPE_AT_1;
    let ni = n as i32;
    let spec1 = quad_spec_toward_1(1e-11);

    // Left pieces.
    let (t1, _) = adaptive_quad(
        |x| {
            if (x - 1.0).abs() < 1e-12 {
                n as f64 / c1
            } else {
                (x.powi(ni) - 1.0) / (c1 * (x - 1.0))
            }
        },
        (0.0, 1.0),
        &spec1,
    )?;
    let (t2, _) = adaptive_quad(|x| regularized_gap_quotient(x) * x.powi(ni), (0.0, 1.0), &spec1)?;
    let (t4, _) = adaptive_quad(
        |x| h_left.eval_minus_one(x) / crate::profiles::gap0(x) * x.powi(ni),
        (0.0, 1.0),
        &spec1,
    )?;
    let z_left = -DVARPI0_AT_1 / (2.0 * n as f64) * (t1 + t2 + t4 - c1.ln() / c1);

    // Right pieces.
    let (u1, _) = adaptive_quad(
        |x| {
            if (x - 1.0).abs() < 1e-12 {
                -(n as f64) / c1
            } else {
                (x.powi(-ni) - 1.0) / (c1 * (x - 1.0))
            }
        },
        (1.0, 2.0),
        &spec1,
    )?;
    let (u2, _) = semiinfinite_quad(
        |x| x.powi(-ni) / (c1 * (x - 1.0)),
        2.0,
        &QuadratureSpec::with_tols(1e-11, 1e-13),
    )?;
    let (u3a, _) = adaptive_quad(|x| regularized_gap_quotient(x) * x.powi(-ni), (1.0, 2.0), &spec1)?;
    let (u3b, _) = semiinfinite_quad(
        |x| regularized_gap_quotient(x) * x.powi(-ni),
        2.0,
        &QuadratureSpec::with_tols(1e-11, 1e-13),
    )?;
    let (u5a, _) = adaptive_quad(
        |x| h_right.eval_minus_one(x) / crate::profiles::gap0(x) * x.powi(-ni),
        (1.0, 2.0),
        &spec1,
    )?;
    let (u5b, _) = semiinfinite_quad(
        |x| h_right.eval_minus_one(x) / crate::profiles::gap0(x) * x.powi(-ni),
        2.0,
        &QuadratureSpec::with_tols(1e-11, 1e-13),
    )?;
    let z_right =
        -DVARPI0_AT_1 / (2.0 * n as f64) * (u1 + u2 + u3a + u3b + u5a + u5b + c1.ln() / c1);
    Ok((z_left, z_right))
}

/// Find the rotation speed inside the spectral-gap bracket, fit the
/// expansion coefficients, and fill the amplitudes.
pub fn solve_lambda(epsilon: f64, n: u32, tol: f64) -> Result<EigenResult> {
    let l1_ref = lambda1_leading(n)?.value;
    solve_lambda_with_ref(epsilon, n, tol, l1_ref)
}

/// As [`solve_lambda`] with a precomputed leading-order reference (sweeps
/// share one).
pub fn solve_lambda_with_ref(epsilon: f64, n: u32, tol: f64, l1_ref: f64) -> Result<EigenResult> {
    let settings = Settings { root_tol: tol, ..Settings::default() };
    solve_lambda_cfg(epsilon, n, &settings, l1_ref)
}

pub fn solve_lambda_cfg(epsilon: f64, n: u32, settings: &Settings, l1_ref: f64) -> Result<EigenResult> {
    let (lo, hi) = lambda_bracket(epsilon)?;
    let width = hi - lo;
    let a = lo + BRACKET_MARGIN * width;
    let b = hi - BRACKET_MARGIN * width;
    let eval = |lam: f64| -> f64 {
        determinant_with(lam, epsilon, n, settings).map(|d| d.det).unwrap_or(f64::NAN)
    };
    let fa = eval(a);
    let fb = eval(b);
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::domain("determinant evaluation failed at the bracket margins"));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { f_lo: fa, f_hi: fb });
    }
    let root = brent_root(eval, (a, b), settings.root_tol, 200)?;
    let lambda = root.root;
    // Re-evaluate at the root so the stored pieces match `lambda` exactly.
    let det_eval = determinant_with(lambda, epsilon, n, settings)?;

    let lambda1_fit = (lambda - LAMBDA_0) / epsilon;
    let log_eps = epsilon.ln();
    let lambda2_fit = (lambda - LAMBDA_0 - epsilon * l1_ref) / (epsilon * epsilon * log_eps * log_eps);
    let (amp_a, amp_b) = null_vector(det_eval.i1, det_eval.i2, epsilon, n)?;
    let q = (1.0 - 0.5 * epsilon) / (1.0 + 0.5 * epsilon);
    Ok(EigenResult {
        epsilon,
        n,
        lambda: Lambda {
            total: lambda,
            lambda0: LAMBDA_0,
            lambda1_fit,
            lambda2_fit,
            lambda1_ref: l1_ref,
            epsilon,
        },
        i1: det_eval.i1,
        i2: det_eval.i2,
        amp_a,
        amp_b,
        q_factor: q.powi(n as i32),
        det_at_root: det_eval.det,
        bracket: (lo, hi),
        residuals: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_ode::{integrate_radial, GridSpec};

    fn mid_lambda(eps: f64) -> f64 {
        let (lo, hi) = lambda_bracket(eps).unwrap();
        0.5 * (lo + hi)
    }

    fn solve_pair(eps: f64, n: u32, lam: f64) -> (RadialSolution, RadialSolution) {
        let left = OdeProblem::new(Side::Left, n, eps, lam).unwrap();
        let right = OdeProblem::new(Side::Right, n, eps, lam).unwrap();
        (
            integrate_radial(&left, DEFAULT_START_OFFSET, GridSpec::default()).unwrap(),
            integrate_radial(&right, DEFAULT_START_OFFSET, GridSpec::default()).unwrap(),
        )
    }

    #[test]
    fn matching_integral_signs() {
        let eps = 0.1;
        let n = 4;
        let lam = mid_lambda(eps);
        let (hl, hr) = solve_pair(eps, n, lam);
        let i1 = compute_i1(&hl, lam, eps, n).unwrap();
        let i2 = compute_i2(&hr, lam, eps, n).unwrap();
        assert!(i1 < 0.0, "I1 = {i1}");
        assert!(i2 > 0.0, "I2 = {i2}");
    }

    #[test]
    fn matching_integrals_vanish_without_profile_slope() {
        let eps = 0.1;
        let n = 4;
        let lam = mid_lambda(eps);
        let left = OdeProblem::new(Side::Left, n, eps, lam).unwrap().with_potential_scale(0.0);
        let hl = integrate_radial(&left, DEFAULT_START_OFFSET, GridSpec::default()).unwrap();
        let i1 = compute_i1(&hl, lam, eps, n).unwrap();
        assert_eq!(i1, 0.0);
    }

    #[test]
    fn i2_tail_truncation_is_converged() {
        let eps = 0.1;
        let n = 4;
        let lam = mid_lambda(eps);
        let (_, hr) = solve_pair(eps, n, lam);
        let scale = 1.0 + 0.5 * eps;
        let coeff = SideCoefficient::new(Side::Right, eps).unwrap();
        let f = |s: f64| {
            let den = lam + coeff.eval(s, CoeffOrder::Value).unwrap();
            dvarpi0(s * scale) * s.powi(-4) * hr.eval(s) / den
        };
        let spec = QuadratureSpec::with_tols(1e-12, 1e-15);
        let (full, _) = semiinfinite_quad(&f, 2.0, &spec).unwrap();
        let (to_1e3, _) = adaptive_quad(&f, (2.0, 1e3), &spec).unwrap();
        let (beyond, _) = adaptive_quad(&f, (1e3, 1e6), &spec).unwrap();
        assert!((full - (to_1e3 + beyond)).abs() < 1e-10);
    }

    #[test]
    fn determinant_reduces_to_affine_without_integrals() {
        // With I1 = I2 = 0 the determinant is 1; with the edge ratio forced
        // to 1 the product term drops.
        let q: f64 = 1.0;
        let (i1, i2) = (0.0, 0.0);
        let det = 1.0 + i1 + i2 + (1.0 - q.powi(8)) * i1 * i2;
        assert_eq!(det, 1.0);
        let (i1, i2) = (-0.4, 0.7);
        let det_q1 = 1.0 + i1 + i2 + (1.0 - q.powi(8)) * i1 * i2;
        assert!((det_q1 - (1.0 + i1 + i2)).abs() < 1e-15);
    }

    #[test]
    fn determinant_changes_sign_across_bracket() {
        for eps in [0.05, 0.1] {
            let (lo, hi) = lambda_bracket(eps).unwrap();
            let w = hi - lo;
            let da = determinant(lo + 1e-4 * w, eps, 4).unwrap();
            let db = determinant(hi - 1e-4 * w, eps, 4).unwrap();
            assert!(da.det > 0.0, "eps={eps}: det(lo) = {}", da.det);
            assert!(db.det < 0.0, "eps={eps}: det(hi) = {}", db.det);
        }
    }

    #[test]
    fn null_vector_row_consistency() {
        let (i1, eps, n) = (-0.62, 0.1, 4u32);
        // Construct an exactly singular matrix by solving row 2 for i2.
        let q: f64 = (1.0 - 0.05) / (1.0 + 0.05);
        let qn = q.powi(4);
        let i2s = qn * qn * i1 / (1.0 + i1) - 1.0;
        let (a, b) = null_vector(i1, i2s, eps, n).unwrap();
        let row2 = qn * i1 * a + (1.0 + i2s) * b;
        assert!(row2.abs() < 1e-12 * a.abs().max(b.abs()), "row2 = {row2}");
        // Scaling invariance: amplitudes normalized to max magnitude 1.
        assert!((a.abs().max(b.abs()) - 1.0).abs() < 1e-15);
        // Lower-triangular case: the first row vanishes identically and the
        // surviving row forces B = q^n A.
        let (a, b) = null_vector(-1.0, 0.0, eps, n).unwrap();
        assert_eq!(a, 1.0);
        assert!((b - qn).abs() < 1e-15);
        let row2 = qn * (-1.0) * a + 1.0 * b;
        assert!(row2.abs() < 1e-15);
    }

    #[test]
    fn leading_coefficient_equation_has_unique_window_root() {
        let lead = lambda1_leading(4).unwrap();
        let (w_lo, w_hi) = lambda1_window();
        assert!(lead.value > w_lo && lead.value < w_hi, "{lead:?}");
        assert!(lead.value_alt > w_lo && lead.value_alt < w_hi, "{lead:?}");
        assert!(lead.z_left.is_finite() && lead.z_right.is_finite());
    }

    #[test]
    fn harmonic_piece_of_z_left() {
        // The first boundary integral collapses to H_n / c1.
        let n = 4;
        let spec = quad_spec_toward_1(1e-11);
        let (t1, _) = adaptive_quad(
            |x: f64| {
                if (x - 1.0).abs() < 1e-12 {
                    n as f64 / C_SLOPE_AT_1
                } else {
                    (x.powi(n) - 1.0) / (C_SLOPE_AT_1 * (x - 1.0))
                }
            },
            (0.0, 1.0),
            &spec,
        )
        .unwrap();
        let h4: f64 = (1..=4).map(|k| 1.0 / k as f64).sum();
        assert!((t1 - h4 / C_SLOPE_AT_1).abs() < 1e-10);
        assert!((h4 - 25.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn gap_quotient_is_smooth_through_one() {
        let inner = regularized_gap_quotient(1.0 - 5e-5);
        let outer = regularized_gap_quotient(1.0 + 5e-5);
        let off = regularized_gap_quotient(1.0 - 2e-4);
        assert!((inner - outer).abs() < 1e-3);
        assert!((inner - off).abs() < 1e-3);
    }
}
