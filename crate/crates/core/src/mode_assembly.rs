//! Physical eigenmode reconstruction and residual verification.
//!
//! From the normalized one-sided solutions and the solved rotation speed,
//! the amplitude functions are unscaled back to physical radius and verified
//! directly against the coupled integral equations they were derived from,
//! plus the kernel-form eigenvalue equation in physical variables. This is
//! the end-to-end consistency gate: the ODE route and the integral-equation
//! route must agree at collocation points.

use crate::eigensolver::{compute_i1, compute_i2, EigenResult, ResidualSummary};
use crate::error::{Error, Result};
use crate::kernels::{eval_kernel, KernelSpec};
use crate::numerics::{adaptive_quad, semiinfinite_quad, QuadratureSpec};
use crate::profiles::{dvarpi0, varpi0, CoeffOrder, Side, SideCoefficient, VortexProfile};
use crate::radial_ode::{integrate_radial, GridSpec, OdeProblem, RadialSolution, DEFAULT_START_OFFSET};
use crate::LAMBDA_0;

/// Assembled eigenmode with dense evaluators in both coordinate systems.
pub struct ModeField {
    pub epsilon: f64,
    pub n: u32,
    pub lambda: f64,
    pub amp_a: f64,
    pub amp_b: f64,
    pub h_left: RadialSolution,
    pub h_right: RadialSolution,
    profile: VortexProfile,
    coeff_left: SideCoefficient,
    coeff_right: SideCoefficient,
}

impl ModeField {
    /// Rescaled amplitude on the left domain `(0, 1]`.
    pub fn f_star_left(&self, x: f64) -> f64 {
        let scale = 1.0 - 0.5 * self.epsilon;
        let den = self.lambda + self.coeff_left.eval(x, CoeffOrder::Value).unwrap_or(f64::NAN);
        self.amp_a * self.h_left.eval(x) / (2.0 * self.n as f64 * x * scale * den)
    }

    /// Rescaled amplitude on the right domain `[1, inf)`.
    pub fn f_star_right(&self, x: f64) -> f64 {
        let scale = 1.0 + 0.5 * self.epsilon;
        let den = self.lambda + self.coeff_right.eval(x, CoeffOrder::Value).unwrap_or(f64::NAN);
        self.amp_b * self.h_right.eval(x) / (2.0 * self.n as f64 * x * scale * den)
    }

    /// The radial factor of the eigenmode in physical radius (zero on the
    /// plateau, where the profile derivative vanishes).
    pub fn w_n(&self, r: f64) -> f64 {
        let a = self.profile.inner_edge();
        let b = self.profile.outer_edge();
        if r > a && r < b {
            0.0
        } else if r <= a {
            self.f_star_left(r / a) * dvarpi0(r)
        } else {
            self.f_star_right(r / b) * dvarpi0(r)
        }
    }

    /// The traveling mode `W_n(r) cos(n (theta - lambda t))`.
    pub fn w(&self, r: f64, theta: f64, t: f64) -> f64 {
        self.w_n(r) * (self.n as f64 * (theta - self.lambda * t)).cos()
    }

    /// Rotation period `2 pi / (n lambda)`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / (self.n as f64 * self.lambda)
    }
}

/// Build the physical mode from a solved eigenvalue and its two solutions.
pub fn assemble_mode(eigen: &EigenResult, h_left: RadialSolution, h_right: RadialSolution) -> Result<ModeField> {
    if eigen.n < 2 {
        return Err(Error::domain("mode assembly requires wavenumber >= 2"));
    }
    if (h_left.problem.lambda - eigen.lambda.total).abs() > 1e-14
        || (h_right.problem.lambda - eigen.lambda.total).abs() > 1e-14
    {
        return Err(Error::domain("solutions were solved at a different rotation speed"));
    }
    let profile = VortexProfile::new(eigen.epsilon)?;
    let coeff_left = SideCoefficient::new(Side::Left, eigen.epsilon)?;
    let coeff_right = SideCoefficient::new(Side::Right, eigen.epsilon)?;
    // Denominator safety floor on the support.
    let floor = 1e-14;
    for i in 1..=100 {
        let x = i as f64 / 100.0;
        let dl = eigen.lambda.total + coeff_left.eval(x, CoeffOrder::Value)?;
        let dr = eigen.lambda.total + coeff_right.eval(1.0 / x, CoeffOrder::Value)?;
        if dl.abs() < floor || dr.abs() < floor {
            return Err(Error::domain(format!("matching denominator under safety floor near x = {x}")));
        }
    }
    Ok(ModeField {
        epsilon: eigen.epsilon,
        n: eigen.n,
        lambda: eigen.lambda.total,
        amp_a: eigen.amp_a,
        amp_b: eigen.amp_b,
        h_left,
        h_right,
        profile,
        coeff_left,
        coeff_right,
    })
}

/// Collocation directives for [`verify_integral_equations`].
#[derive(Debug, Clone, Copy)]
pub struct CollocationSpec {
    pub per_side: usize,
    pub physical: usize,
    /// Smallest rescaled coordinate checked on the left side.
    pub x_min_left: f64,
    /// Largest rescaled coordinate checked on the right side.
    pub x_max_right: f64,
    pub quad_rel: f64,
}

impl Default for CollocationSpec {
    fn default() -> Self {
        CollocationSpec { per_side: 50, physical: 30, x_min_left: 0.1, x_max_right: 10.0, quad_rel: 1e-11 }
    }
}

/// Residual maxima of the verification pass, all relative to the solution
/// scale `max(|H_L|, |H_R|)` on the collocation grids (the physical residual
/// relative to `max |W_n|`).
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub left_max: f64,
    pub right_max: f64,
    pub physical_max: f64,
    pub n_l_at_1: f64,
    pub n_r_at_1: f64,
    pub layer_width: f64,
    pub left_points: Vec<(f64, f64)>,
    pub right_points: Vec<(f64, f64)>,
    pub physical_points: Vec<(f64, f64)>,
    pub scale: f64,
}

impl ResidualReport {
    pub fn summary(&self) -> ResidualSummary {
        ResidualSummary {
            left_max: self.left_max,
            right_max: self.right_max,
            physical_max: self.physical_max,
            n_l_at_1: self.n_l_at_1,
            n_r_at_1: self.n_r_at_1,
        }
    }
}

struct EquationContext<'a> {
    mode: &'a ModeField,
    qn: f64,
    quad_rel: f64,
}

impl<'a> EquationContext<'a> {
    fn new(mode: &'a ModeField) -> Self {
        Self::with_rel(mode, 1e-11)
    }

    fn with_rel(mode: &'a ModeField, quad_rel: f64) -> Self {
        let q = (1.0 - 0.5 * mode.epsilon) / (1.0 + 0.5 * mode.epsilon);
        EquationContext { mode, qn: q.powi(mode.n as i32), quad_rel }
    }

    fn h_big_left(&self, s: f64) -> f64 {
        self.mode.amp_a * self.mode.h_left.eval(s)
    }

    fn h_big_right(&self, s: f64) -> f64 {
        self.mode.amp_b * self.mode.h_right.eval(s)
    }

    fn den_left(&self, s: f64) -> f64 {
        self.mode.lambda + self.mode.coeff_left.eval(s, CoeffOrder::Value).unwrap_or(f64::NAN)
    }

    fn den_right(&self, s: f64) -> f64 {
        self.mode.lambda + self.mode.coeff_right.eval(s, CoeffOrder::Value).unwrap_or(f64::NAN)
    }

    /// Left integral-equation residual at rescaled `x` in `(0, 1)`.
    fn left_residual(&self, x: f64) -> Result<f64> {
        let m = self.mode;
        let n = m.n as i32;
        let a = 1.0 - 0.5 * m.epsilon;
        let b = 1.0 + 0.5 * m.epsilon;
        let two_n = 2.0 * m.n as f64;
        let spec_in = QuadratureSpec::with_tols(self.quad_rel, 1e-14);
        let spec_layer = QuadratureSpec {
            rel_tol: self.quad_rel,
            abs_tol: 1e-14,
            grading_center: Some(1.0),
            ..QuadratureSpec::default()
        };
        let (t1, _) = adaptive_quad(
            |s: f64| dvarpi0(s * a) * (s / x).powi(n) * self.h_big_left(s) / self.den_left(s),
            (0.0, x),
            &spec_in,
        )?;
        let (t2, _) = adaptive_quad(
            |s: f64| dvarpi0(s * a) * (s / x).powi(-n) * self.h_big_left(s) / self.den_left(s),
            (x, 1.0),
            &spec_layer,
        )?;
        let f3 = |s: f64| dvarpi0(s * b) * (s / x).powi(-n) * self.h_big_right(s) / self.den_right(s);
        let (t3a, _) = adaptive_quad(&f3, (1.0, 2.0), &spec_layer)?;
        let (t3b, _) = semiinfinite_quad(&f3, 2.0, &spec_in)?;
        Ok(self.h_big_left(x)
            - a / two_n * t1
            - a / two_n * t2
            - b / two_n * self.qn * (t3a + t3b))
    }

    /// Right integral-equation residual at rescaled `x` in `(1, inf)`.
    fn right_residual(&self, x: f64) -> Result<f64> {
        let m = self.mode;
        let n = m.n as i32;
        let a = 1.0 - 0.5 * m.epsilon;
        let b = 1.0 + 0.5 * m.epsilon;
        let two_n = 2.0 * m.n as f64;
        let spec_in = QuadratureSpec::with_tols(self.quad_rel, 1e-14);
        let spec_layer = QuadratureSpec {
            rel_tol: self.quad_rel,
            abs_tol: 1e-14,
            grading_center: Some(1.0),
            ..QuadratureSpec::default()
        };
        let (t1, _) = adaptive_quad(
            |s: f64| dvarpi0(s * a) * (s / x).powi(n) * self.h_big_left(s) / self.den_left(s),
            (0.0, 1.0),
            &spec_layer,
        )?;
        let (t2, _) = adaptive_quad(
            |s: f64| dvarpi0(s * b) * (s / x).powi(n) * self.h_big_right(s) / self.den_right(s),
            (1.0, x),
            &spec_layer,
        )?;
        let f3 = |s: f64| dvarpi0(s * b) * (s / x).powi(-n) * self.h_big_right(s) / self.den_right(s);
        let cut = (2.0 * x).max(4.0);
        let (t3a, _) = adaptive_quad(&f3, (x, cut), &spec_in)?;
        let (t3b, _) = semiinfinite_quad(&f3, cut, &spec_in)?;
        Ok(self.h_big_right(x)
            - a / two_n * self.qn * t1
            - b / two_n * t2
            - b / two_n * (t3a + t3b))
    }

    /// Kernel-form residual in physical radius, on the support of the
    /// profile derivative: `(lambda + c(r)) h_n(r)
    /// - (1/n) int varpi_eps'(s) K_n(r/s) h_n(s) ds`, scaled by
    /// `varpi_eps'(r)` to give the mode-equation residual.
    fn physical_residual(&self, r: f64) -> Result<f64> {
        let m = self.mode;
        let profile = &m.profile;
        let a_edge = profile.inner_edge();
        let b_edge = profile.outer_edge();
        let spec = KernelSpec::new(m.n)?;
        let h_n = |s: f64| {
            if s <= a_edge {
                m.f_star_left(s / a_edge)
            } else {
                m.f_star_right(s / b_edge)
            }
        };
        let integrand = |s: f64| {
            profile.perturbed_derivative(s) * eval_kernel(spec, r / s).unwrap_or(f64::NAN) * h_n(s)
        };
        let spec_core = QuadratureSpec {
            rel_tol: self.quad_rel,
            abs_tol: 1e-14,
            split_points: vec![r],
            grading_center: Some(a_edge),
            ..QuadratureSpec::default()
        };
        let (inner, _) = adaptive_quad(&integrand, (0.0, a_edge), &spec_core)?;
        let cut = (2.0 * r).max(4.0);
        let spec_outer = QuadratureSpec {
            rel_tol: self.quad_rel,
            abs_tol: 1e-14,
            split_points: vec![r],
            grading_center: Some(b_edge),
            ..QuadratureSpec::default()
        };
        let (outer, _) = adaptive_quad(&integrand, (b_edge, cut), &spec_outer)?;
        let (tail, _) = semiinfinite_quad(&integrand, cut, &QuadratureSpec::with_tols(self.quad_rel, 1e-14))?;
        let total = inner + outer + tail;
        let c_r = profile.c_physical(r)?;
        let h_form = (m.lambda + c_r) * h_n(r) - total / m.n as f64;
        Ok(h_form * profile.perturbed_derivative(r))
    }

    /// `H_L(x) + (x/n) H_L'(x) - 2 B(x)`: the first-derivative relation the
    /// left equation implies.
    fn relation_residual(&self, x: f64) -> Result<f64> {
        let m = self.mode;
        let n = m.n as i32;
        let a = 1.0 - 0.5 * m.epsilon;
        let b = 1.0 + 0.5 * m.epsilon;
        let two_n = 2.0 * m.n as f64;
        let spec_layer = QuadratureSpec {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            grading_center: Some(1.0),
            ..QuadratureSpec::default()
        };
        let (t2, _) = adaptive_quad(
            |s: f64| dvarpi0(s * a) * (s / x).powi(-n) * self.h_big_left(s) / self.den_left(s),
            (x, 1.0),
            &spec_layer,
        )?;
        let f3 = |s: f64| dvarpi0(s * b) * (s / x).powi(-n) * self.h_big_right(s) / self.den_right(s);
        let (t3a, _) = adaptive_quad(&f3, (1.0, 2.0), &spec_layer)?;
        let (t3b, _) = semiinfinite_quad(&f3, 2.0, &QuadratureSpec::with_tols(self.quad_rel, 1e-14))?;
        let big_b = a / two_n * t2 + b / two_n * self.qn * (t3a + t3b);
        let h = self.h_big_left(x);
        let dh = m.amp_a * self.mode.h_left.eval_derivative(x);
        Ok(h + x / m.n as f64 * dh - 2.0 * big_b)
    }
}

/// Evaluate the rescaled and physical residuals over collocation grids.
pub fn verify_integral_equations(mode: &ModeField, colloc: CollocationSpec) -> Result<ResidualReport> {
    let ctx = EquationContext::with_rel(mode, colloc.quad_rel);
    let layer = (mode.epsilon / 20.0).max(1e-4);
    let per_side = colloc.per_side.max(50);

    // Collocation grids graded toward the matching point from both sides.
    let mut xs_left = Vec::with_capacity(per_side);
    let span_l = (1.0 - layer) - colloc.x_min_left;
    let mut xs_right = Vec::with_capacity(per_side);
    let span_r = colloc.x_max_right - (1.0 + layer);
    for i in 0..per_side {
        let frac = i as f64 / (per_side - 1) as f64;
        xs_left.push(1.0 - layer - span_l * (1e-2_f64).powf(frac));
        xs_right.push(1.0 + layer + span_r * (1e-2_f64).powf(frac));
    }

    let scale = xs_left
        .iter()
        .map(|&x| ctx.h_big_left(x).abs())
        .chain(xs_right.iter().map(|&x| ctx.h_big_right(x).abs()))
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Err(Error::domain("trivial amplitudes: nothing to verify"));
    }

    let mut left_points = Vec::with_capacity(xs_left.len());
    let mut left_max = 0.0_f64;
    for &x in &xs_left {
        let r = ctx.left_residual(x)? / scale;
        left_max = left_max.max(r.abs());
        left_points.push((x, r));
    }
    let mut right_points = Vec::with_capacity(xs_right.len());
    let mut right_max = 0.0_f64;
    for &x in &xs_right {
        let r = ctx.right_residual(x)? / scale;
        right_max = right_max.max(r.abs());
        right_points.push((x, r));
    }

    // Physical radii spanning both support components.
    let a_edge = mode.profile.inner_edge();
    let b_edge = mode.profile.outer_edge();
    let half = (colloc.physical / 2).max(10);
    let mut rs = Vec::with_capacity(2 * half);
    for i in 0..half {
        let frac = (i as f64 + 0.5) / half as f64;
        rs.push((a_edge - layer) * (0.05 + 0.95 * frac));
        rs.push(b_edge + layer + (6.0 - b_edge) * frac * frac);
    }
    let w_scale = rs.iter().map(|&r| mode.w_n(r).abs()).fold(0.0_f64, f64::max);
    let mut physical_points = Vec::with_capacity(rs.len());
    let mut physical_max = 0.0_f64;
    for &r in &rs {
        let resid = ctx.physical_residual(r)? / w_scale;
        physical_max = physical_max.max(resid.abs());
        physical_points.push((r, resid));
    }

    // Boundary mismatches from the matching integrals of this very mode.
    let i1 = compute_i1(&mode.h_left, mode.lambda, mode.epsilon, mode.n)?;
    let i2 = compute_i2(&mode.h_right, mode.lambda, mode.epsilon, mode.n)?;
    let n_l = mode.amp_a * (1.0 + i1) + mode.amp_b * ctx.qn * i2;
    let n_r = mode.amp_a * ctx.qn * i1 + mode.amp_b * (1.0 + i2);

    Ok(ResidualReport {
        left_max,
        right_max,
        physical_max,
        n_l_at_1: n_l.abs() / scale,
        n_r_at_1: n_r.abs() / scale,
        layer_width: layer,
        left_points,
        right_points,
        physical_points,
        scale,
    })
}

/// Diagnostic access to the first-derivative relation of the left equation.
pub fn relation_residual(mode: &ModeField, x: f64) -> Result<f64> {
    EquationContext::new(mode).relation_residual(x)
}

/// Left integral-equation residual of an assembled mode at rescaled `x`.
pub fn left_equation_residual(mode: &ModeField, x: f64) -> Result<f64> {
    EquationContext::new(mode).left_residual(x)
}

/// Right integral-equation residual of an assembled mode at rescaled `x`.
pub fn right_equation_residual(mode: &ModeField, x: f64) -> Result<f64> {
    EquationContext::new(mode).right_residual(x)
}

/// Kernel-form residual of an assembled mode at physical radius `r`.
pub fn physical_equation_residual(mode: &ModeField, r: f64) -> Result<f64> {
    EquationContext::new(mode).physical_residual(r)
}

/// Solved output of the full pipeline for one plateau width.
pub struct SolveOutput {
    pub eigen: EigenResult,
    pub mode: ModeField,
    pub report: ResidualReport,
}

/// Solve, assemble and verify one configuration.
pub fn solve_and_verify(epsilon: f64, n: u32, root_tol: f64, l1_ref: Option<f64>) -> Result<SolveOutput> {
    let settings = crate::eigensolver::Settings { root_tol, ..Default::default() };
    solve_and_verify_cfg(epsilon, n, &settings, l1_ref)
}

/// As [`solve_and_verify`] with full stage tolerances.
pub fn solve_and_verify_cfg(
    epsilon: f64,
    n: u32,
    settings: &crate::eigensolver::Settings,
    l1_ref: Option<f64>,
) -> Result<SolveOutput> {
    let l1 = match l1_ref {
        Some(v) => v,
        None => crate::eigensolver::lambda1_leading(n)?.value,
    };
    let mut eigen = crate::eigensolver::solve_lambda_cfg(epsilon, n, settings, l1)?;
    let det = crate::eigensolver::determinant_with(eigen.lambda.total, epsilon, n, settings)?;
    let mode = assemble_mode(&eigen, det.h_left, det.h_right)?;
    let colloc = CollocationSpec { quad_rel: settings.quad_rel_tol, ..Default::default() };
    let report = verify_integral_equations(&mode, colloc)?;
    eigen.residuals = Some(report.summary());
    Ok(SolveOutput { eigen, mode, report })
}

/// One row of the plateau-width scaling study.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ScalingRow {
    pub epsilon: f64,
    pub lambda: f64,
    /// `sup |x^{-n} (h_L^eps - h_L^0)|` on the common grid.
    pub left_diff_norm: f64,
    /// `sup |x^{n} (h_R^eps - h_R^0)|` on the common grid.
    pub right_diff_norm: f64,
    pub left_ratio: f64,
    pub right_ratio: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ScalingTable {
    pub n: u32,
    pub rows: Vec<ScalingRow>,
}

impl ScalingTable {
    /// Largest over smallest ratio entry per side.
    pub fn ratio_spread(&self) -> (f64, f64) {
        let spread = |pick: &dyn Fn(&ScalingRow) -> f64| {
            let vals: Vec<f64> = self.rows.iter().map(|r| pick(r)).collect();
            let max = vals.iter().cloned().fold(0.0_f64, f64::max);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            max / min
        };
        (spread(&|r| r.left_ratio), spread(&|r| r.right_ratio))
    }
}

/// Weighted sup-norm distance between the plateau solutions and the limit
/// solutions across a decreasing list of widths, scaled by `eps log(1/eps)`.
pub fn difference_scaling_study(n: u32, eps_list: &[f64], root_tol: f64) -> Result<ScalingTable> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("width list must be strictly decreasing"));
    }
    let l1_ref = crate::eigensolver::lambda1_leading(n)?.value;
    let grid = GridSpec::default();
    let left0 = integrate_radial(&OdeProblem::new(Side::Left, n, 0.0, LAMBDA_0)?, DEFAULT_START_OFFSET, grid)?;
    let right0 = integrate_radial(&OdeProblem::new(Side::Right, n, 0.0, LAMBDA_0)?, DEFAULT_START_OFFSET, grid)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let eigen = crate::eigensolver::solve_lambda_with_ref(eps, n, root_tol, l1_ref)?;
        let det = crate::eigensolver::determinant(eigen.lambda.total, eps, n)?;
        let mut left_norm = 0.0_f64;
        for &x in &det.h_left.grid {
            let d = det.h_left.eval(x) - left0.eval(x);
            left_norm = left_norm.max((x.powi(-(n as i32)) * d).abs());
        }
        let mut right_norm = 0.0_f64;
        for &x in &det.h_right.grid {
            let d = det.h_right.eval(x) - right0.eval(x);
            right_norm = right_norm.max((x.powi(n as i32) * d).abs());
        }
        let s = eps * (1.0 / eps).ln();
        rows.push(ScalingRow {
            epsilon: eps,
            lambda: eigen.lambda.total,
            left_diff_norm: left_norm,
            right_diff_norm: right_norm,
            left_ratio: left_norm / s,
            right_ratio: right_norm / s,
        });
    }
    Ok(ScalingTable { n, rows })
}

/// Tabular data for the profile comparison figure.
pub fn profile_figure_data(epsilon: f64, samples: usize) -> Result<Vec<(f64, f64, f64)>> {
    let profile = VortexProfile::new(epsilon)?;
    Ok((0..=samples)
        .map(|i| {
            let r = 3.0 * i as f64 / samples as f64;
            (r, varpi0(r), profile.perturbed(r))
        })
        .collect())
}

/// Tabular data for the angular-velocity gap figure: `c(r)` on both support
/// components, the gap band and the radius where `c` crosses the band
/// midpoint inside the plateau.
pub struct CGapData {
    pub rows: Vec<(f64, f64, &'static str)>,
    pub band: (f64, f64),
    pub r_star: f64,
}

pub fn c_gap_figure_data(epsilon: f64, samples: usize) -> Result<CGapData> {
    let profile = VortexProfile::new(epsilon)?;
    let (lo, hi) = crate::profiles::lambda_bracket(epsilon)?;
    let a = profile.inner_edge();
    let b = profile.outer_edge();
    let mut rows = Vec::new();
    for i in 0..=samples {
        let r = 0.2 + (3.0 - 0.2) * i as f64 / samples as f64;
        let label = if r <= a {
            "left"
        } else if r < b {
            "plateau"
        } else {
            "right"
        };
        rows.push((r, profile.c_physical(r)?, label));
    }
    // Radius where c equals minus the band midpoint, inside the plateau.
    let mid = 0.5 * (lo + hi);
    let f = |r: f64| mid + profile.c_physical(r).unwrap_or(f64::NAN);
    let root = crate::numerics::brent_root(f, (a, b), 1e-13, 200)?;
    Ok(CGapData { rows, band: (lo, hi), r_star: root.root })
}

/// Long-form mode data: the radial profile and an `(r, theta)` sampling of
/// the revolving field at `t = 0`.
pub struct ModeFigureData {
    pub radial: Vec<(f64, f64)>,
    pub heatmap: Vec<(f64, f64, f64)>,
}

pub fn mode_figure_data(mode: &ModeField, radial_samples: usize, angular_samples: usize) -> ModeFigureData {
    let mut radial = Vec::with_capacity(radial_samples);
    for i in 0..=radial_samples {
        let r = 3.0 * i as f64 / radial_samples as f64;
        radial.push((r, mode.w_n(r)));
    }
    let mut heatmap = Vec::new();
    for i in 0..=radial_samples / 2 {
        let r = 2.5 * i as f64 / (radial_samples / 2) as f64;
        for j in 0..angular_samples {
            let theta = std::f64::consts::TAU * j as f64 / angular_samples as f64;
            heatmap.push((r, theta, mode.w(r, theta, 0.0)));
        }
    }
    ModeFigureData { radial, heatmap }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_study_rejects_unsorted_widths() {
        let err = difference_scaling_study(4, &[0.05, 0.1], 1e-12).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn profile_figure_shows_plateau() {
        let rows = profile_figure_data(0.1, 300).unwrap();
        let plateau: Vec<&(f64, f64, f64)> =
            rows.iter().filter(|(r, _, _)| *r > 0.96 && *r < 1.04).collect();
        assert!(plateau.len() > 3);
        let v0 = plateau[0].2;
        for row in &plateau {
            assert!((row.2 - v0).abs() < 1e-12, "plateau not flat at r = {}", row.0);
        }
        // The two curves split below the plateau and agree beyond it.
        let below = rows.iter().find(|(r, _, _)| (*r - 0.5).abs() < 0.02).unwrap();
        assert!((below.1 - below.2).abs() > 0.01);
        let beyond = rows.iter().find(|(r, _, _)| *r > 2.0).unwrap();
        assert!((beyond.1 - beyond.2).abs() < 1e-14);
    }

    #[test]
    fn c_gap_band_and_marker() {
        let data = c_gap_figure_data(0.1, 200).unwrap();
        assert!(data.band.0 < data.band.1);
        assert!(data.r_star > 0.95 && data.r_star < 1.05);
        // c increases along the rows.
        let mut prev = f64::NEG_INFINITY;
        for (_, c, _) in &data.rows {
            assert!(*c > prev);
            prev = *c;
        }
    }
}
