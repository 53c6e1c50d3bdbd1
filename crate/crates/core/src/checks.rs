//! Fast self-check suite behind the `check` subcommand.
//!
//! Every entry compares an independently computed quantity against a closed
//! form or a second computational route and records the achieved deviation
//! next to the accepted tolerance. The whole suite stays well under the
//! 30-second envelope so it can gate CI runs.

use crate::eigensolver;
use crate::error::Result;
use crate::kernels::{self, eval_kernel_impl, KernelSpec};
use crate::numerics::{adaptive_quad, brent_root, QuadratureSpec, SeriesAtPoint};
use crate::profiles::{
    self, dcl_deps_at_zero, dcr_deps_at_zero, lambda_bracket, CoeffOrder, Side, SideCoefficient,
    VortexProfile,
};
use crate::radial_ode::{
    integrate_radial, picard_oracle_right, second_solution, wronskian_report, GridSpec, OdeProblem,
    DEFAULT_START_OFFSET,
};
use crate::LAMBDA_0;

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub required: f64,
    pub achieved: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
    pub elapsed_seconds: f64,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// Options for the suite; the kernel fault is a fixture proving the
/// trigonometric oracle detects a corrupted branch.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub inject_kernel_fault: bool,
}

fn record(results: &mut Vec<CheckResult>, name: &str, required: f64, achieved: f64) {
    results.push(CheckResult {
        name: name.to_string(),
        required,
        achieved,
        passed: achieved <= required,
    });
}

/// Run the suite.
pub fn run_all(opts: CheckOptions) -> Result<CheckReport> {
    let start = std::time::Instant::now();
    let mut results = Vec::new();

    // Kernel closed form against the circle integral.
    let mut worst = 0.0_f64;
    for n in 1..=8 {
        let spec = KernelSpec::new(n)?;
        for &r in &[0.1, 0.5, 0.9, 1.1, 2.0, 5.0] {
            let oracle = kernels::kernel_trig_oracle(spec, r, 1e-10)?;
            let closed = eval_kernel_impl(spec, r, opts.inject_kernel_fault)?;
            worst = worst.max((oracle - closed).abs());
        }
    }
    record(&mut results, "kernel branch vs circle integral", 1e-10, worst);

    // Kernel scaling identity on a fixed pair set.
    let mut worst = 0.0_f64;
    for n in 1..=6 {
        let spec = KernelSpec::new(n)?;
        for (r, s) in [(0.3, 1.7), (2.4, 0.9), (1.2, 1.3), (0.2, 0.1)] {
            let lhs = eval_kernel_impl(spec, s / r, opts.inject_kernel_fault)? * s * s / (r * r);
            let rhs = eval_kernel_impl(spec, r / s, opts.inject_kernel_fault)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    record(&mut results, "kernel scaling identity", 1e-12, worst);

    // Side coefficients against the partial-mass route on a grid.
    let mut worst = 0.0_f64;
    for &eps in &[0.0, 0.01, 0.05, 0.1] {
        let profile = VortexProfile::new(eps)?;
        let left = SideCoefficient::new(Side::Left, eps)?;
        let right = SideCoefficient::new(Side::Right, eps)?;
        for i in 1..=20 {
            let x = i as f64 / 20.0;
            let via_mass = profile.c_physical(x * (1.0 - 0.5 * eps))?;
            worst = worst.max((left.eval(x, CoeffOrder::Value)? - via_mass).abs());
            let xr = 1.0 + 2.0 * i as f64 / 20.0;
            let via_mass_r = profile.c_physical(xr * (1.0 + 0.5 * eps))?;
            worst = worst.max((right.eval(xr, CoeffOrder::Value)? - via_mass_r).abs());
        }
    }
    record(&mut results, "side coefficients vs partial mass", 1e-10, worst);

    // Rotation-speed anchor at the matching point.
    let anchor = (LAMBDA_0 + SideCoefficient::new(Side::Left, 0.0)?.eval(1.0, CoeffOrder::Value)?)
        .abs()
        .max((LAMBDA_0 + SideCoefficient::new(Side::Right, 0.0)?.eval(1.0, CoeffOrder::Value)?).abs());
    record(&mut results, "gap endpoints meet log(2)/2 in the limit", 1e-12, anchor);

    // Closed-form epsilon slopes vs finite differences through eval.
    let left = SideCoefficient::new(Side::Left, 0.0)?;
    let right = SideCoefficient::new(Side::Right, 0.0)?;
    let worst = (left.eval(1.0, CoeffOrder::DEps)? - dcl_deps_at_zero(1.0))
        .abs()
        .max((right.eval(1.0, CoeffOrder::DEps)? - dcr_deps_at_zero(1.0)).abs());
    record(&mut results, "epsilon slopes of side coefficients", 1e-6, worst);

    // Monotonicity of the angular-velocity coefficient.
    let mut min_slope = f64::INFINITY;
    let profile = VortexProfile::new(0.1)?;
    for i in 1..400 {
        let r = 4.0 * i as f64 / 400.0;
        min_slope = min_slope.min(profile.c_prime(r)?);
    }
    record(
        &mut results,
        "c strictly increasing (min slope > 0)",
        0.0,
        if min_slope > 0.0 { 0.0 } else { 1.0 },
    );

    // Angular-velocity identity: kernel route vs mass route.
    let mut worst = 0.0_f64;
    for &eps in &[0.0, 0.1] {
        let p = VortexProfile::new(eps)?;
        for &r in &[0.5, 1.0, 2.5] {
            let rep = kernels::angular_velocity_identity(&p, r, 1e-6)?;
            worst = worst.max(rep.difference);
        }
    }
    record(&mut results, "angular-velocity identity", 1e-9, worst);

    // Quadrature battery: two closed forms exercising grading and splits.
    let spec = QuadratureSpec::default().graded_toward(1.0);
    let (v1, _) = adaptive_quad(|x| 1.0 / ((x - 1.0) + 0.01), (1.0, 2.0), &spec)?;
    let spec0 = QuadratureSpec::default().graded_toward(0.0);
    let (v2, _) = adaptive_quad(|x: f64| (1.0 / x).ln(), (0.0, 1.0), &spec0)?;
    let worst = (v1 - 101.0_f64.ln()).abs().max((v2 - 1.0).abs());
    record(&mut results, "quadrature closed forms", 1e-10, worst);

    // Root finder sanity.
    let r = brent_root(|x| x * x - 2.0, (1.0, 2.0), 1e-14, 100)?;
    record(&mut results, "bracketed root of x^2 - 2", 1e-12, (r.root - 2.0_f64.sqrt()).abs());

    // Series arithmetic spot value.
    let s = SeriesAtPoint::with_logs(1.0, 1, vec![1.0], vec![1.0], 0.5);
    let u: f64 = (1.0 + 1e-3) - 1.0;
    let expect = u + u * u.ln();
    record(&mut results, "series log-channel evaluation", 1e-15, (s.eval(1.0 + 1e-3)? - expect).abs());

    // Limit-problem shooting: Wronskian of each one-sided pair.
    let grid = GridSpec::default();
    let mut worst = 0.0_f64;
    for side in [Side::Left, Side::Right] {
        let problem = OdeProblem::new(side, 4, 0.0, LAMBDA_0)?;
        let principal = integrate_radial(&problem, DEFAULT_START_OFFSET, grid)?;
        let companion = second_solution(side, 4, grid)?;
        let rep = wronskian_report(&principal, &companion)?;
        worst = worst.max(rep.max_deviation);
    }
    record(&mut results, "limit Wronskians equal 1/x", 1e-6, worst);

    // Fixed-point oracle contraction.
    let oracle = picard_oracle_right(4, 10.0, 0.8, 30)?;
    record(
        &mut results,
        "fixed-point map contracts",
        1.0,
        oracle.predicted_factor,
    );

    // Spectral-gap bracket endpoints bound a midpoint rotation speed.
    let (lo, hi) = lambda_bracket(0.1)?;
    let mid = 0.5 * (lo + hi);
    let left_den = mid + SideCoefficient::new(Side::Left, 0.1)?.eval(1.0, CoeffOrder::Value)?;
    let right_den = mid + SideCoefficient::new(Side::Right, 0.1)?.eval(1.0, CoeffOrder::Value)?;
    record(
        &mut results,
        "bracket midpoint keeps denominator signs",
        0.0,
        if left_den < 0.0 && right_den > 0.0 { 0.0 } else { 1.0 },
    );

    // Extended denominators vanish on the far side of the matching point.
    let xr = profiles::extended_zero(Side::Right, mid, 0.1)?;
    let xl = profiles::extended_zero(Side::Left, mid, 0.1)?;
    record(
        &mut results,
        "extended zeros straddle the matching point",
        0.0,
        if xr < 1.0 && xl > 1.0 { 0.0 } else { 1.0 },
    );

    // Leading-order coefficient window.
    let lead = eigensolver::lambda1_leading(4)?;
    let (w_lo, w_hi) = crate::lambda1_window();
    record(
        &mut results,
        "leading-order coefficient inside window",
        0.0,
        if lead.value > w_lo && lead.value < w_hi { 0.0 } else { 1.0 },
    );

    Ok(CheckReport { results, elapsed_seconds: start.elapsed().as_secs_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_suite_passes() {
        let report = run_all(CheckOptions::default()).unwrap();
        for r in &report.results {
            assert!(r.passed, "{}: achieved {} > required {}", r.name, r.achieved, r.required);
        }
        assert!(report.elapsed_seconds < 30.0);
    }

    #[test]
    fn kernel_fault_is_detected() {
        let report = run_all(CheckOptions { inject_kernel_fault: true }).unwrap();
        assert!(!report.all_passed());
        let kernel_check = report
            .results
            .iter()
            .find(|r| r.name.contains("circle integral"))
            .unwrap();
        assert!(!kernel_check.passed);
    }
}
