//! Cross-module behavior of the solved eigenmode at one plateau width.

use std::sync::OnceLock;
use vortex_modes::eigensolver::{
    compute_i1, compute_i2, determinant, lambda1_leading, null_vector, EigenResult, Lambda,
};
use vortex_modes::mode_assembly::{
    assemble_mode, left_equation_residual, physical_equation_residual, relation_residual,
    right_equation_residual, solve_and_verify, verify_integral_equations, CollocationSpec,
    ModeField, SolveOutput,
};
use vortex_modes::profiles::lambda_bracket;
use vortex_modes::{lambda1_window, Side};

const EPS: f64 = 0.1;
const N: u32 = 4;

fn solved() -> &'static SolveOutput {
    static CELL: OnceLock<SolveOutput> = OnceLock::new();
    CELL.get_or_init(|| solve_and_verify(EPS, N, 1e-12, None).expect("pipeline solve"))
}

fn perturbed_mode() -> &'static (f64, ModeField) {
    static CELL: OnceLock<(f64, ModeField)> = OnceLock::new();
    CELL.get_or_init(|| {
        let base = solved();
        let (lo, hi) = lambda_bracket(EPS).unwrap();
        let width = hi - lo;
        // Move 10% of the bracket toward whichever side has room.
        let lam = base.eigen.lambda.total;
        let lam_p = if lam - lo > hi - lam { lam - 0.1 * width } else { lam + 0.1 * width };
        let det = determinant(lam_p, EPS, N).unwrap();
        let (a, b) = null_vector(det.i1, det.i2, EPS, N).unwrap();
        let eigen = EigenResult {
            epsilon: EPS,
            n: N,
            lambda: Lambda {
                total: lam_p,
                lambda0: vortex_modes::LAMBDA_0,
                lambda1_fit: 0.0,
                lambda2_fit: 0.0,
                lambda1_ref: 0.0,
                epsilon: EPS,
            },
            i1: det.i1,
            i2: det.i2,
            amp_a: a,
            amp_b: b,
            q_factor: 1.0,
            det_at_root: det.det,
            bracket: (lo, hi),
            residuals: None,
        };
        (lam_p, assemble_mode(&eigen, det.h_left, det.h_right).unwrap())
    })
}

#[test]
fn solved_configuration_meets_tolerances() {
    let out = solved();
    let e = &out.eigen;
    assert!(e.det_at_root.abs() < 1e-8);
    assert!(e.lambda.total > e.bracket.0 && e.lambda.total < e.bracket.1);
    let (w_lo, w_hi) = lambda1_window();
    assert!(e.lambda.lambda1_fit > w_lo && e.lambda.lambda1_fit < w_hi);
    let r = &out.report;
    assert!(r.left_max < 1e-6 && r.right_max < 1e-6 && r.physical_max < 1e-6, "{r:?}");
    assert!(r.n_l_at_1 < 1e-6 && r.n_r_at_1 < 1e-6);
}

#[test]
fn mode_vanishes_on_plateau_and_decays_beyond() {
    let mode = &solved().mode;
    for r in [0.96, 1.0, 1.04] {
        assert_eq!(mode.w_n(r), 0.0, "plateau value at r = {r}");
    }
    // Far-field decay at least r^{-(n+3)} on dyadic radii.
    let mut prev = f64::INFINITY;
    for k in 2..=7 {
        let r = 2.0_f64.powi(k);
        let weighted = mode.w_n(r).abs() * r.powi(N as i32 + 3);
        assert!(weighted < prev * 1.05, "weighted far field grew at r = {r}");
        prev = weighted;
    }
}

#[test]
fn traveling_mode_is_time_periodic_with_zero_mean() {
    let mode = &solved().mode;
    let period = mode.period();
    let (r, theta) = (0.7, 1.234);
    let w0 = mode.w(r, theta, 0.4);
    let w1 = mode.w(r, theta, 0.4 + period);
    assert!((w0 - w1).abs() < 1e-12);
    // Azimuthal average vanishes for a pure cos(n theta) mode.
    let m = 64;
    for r in [0.5, 2.0] {
        let mean: f64 = (0..m)
            .map(|j| mode.w(r, std::f64::consts::TAU * j as f64 / m as f64, 0.0))
            .sum::<f64>()
            / m as f64;
        assert!(mean.abs() < 1e-13, "mean over theta at r = {r}: {mean}");
    }
}

#[test]
fn residuals_respond_to_eigenvalue_perturbation() {
    let out = solved();
    let (_, mode_p) = perturbed_mode();
    let report_p = verify_integral_equations(mode_p, CollocationSpec::default()).unwrap();
    let base = out.report.left_max.max(out.report.right_max);
    let pert = report_p.left_max.max(report_p.right_max);
    assert!(
        pert > 10.0 * base,
        "perturbed residual {pert} is not an order above the solved one {base}"
    );
}

#[test]
fn physical_and_rescaled_residuals_agree_through_the_jacobian() {
    // The kernel-form residual equals the rescaled-equation residual times
    // varpi'(r)/(2 n r), evaluated where residuals are O(1) so the
    // comparison is meaningful.
    let (_, mode) = perturbed_mode();
    let a_scale = 1.0 - 0.5 * EPS;
    let b_scale = 1.0 + 0.5 * EPS;
    for x in [0.35, 0.6, 0.8, 0.9] {
        let r = x * a_scale;
        let phys = physical_equation_residual(mode, r).unwrap();
        let resc = left_equation_residual(mode, x).unwrap();
        let expected = vortex_modes::profiles::dvarpi0(r) * resc / (2.0 * N as f64 * r);
        assert!(
            (phys - expected).abs() < 1e-7 * expected.abs().max(1e-8),
            "left x={x}: {phys} vs {expected}"
        );
    }
    for x in [1.3, 1.9, 3.0] {
        let r = x * b_scale;
        let phys = physical_equation_residual(mode, r).unwrap();
        let resc = right_equation_residual(mode, x).unwrap();
        let expected = vortex_modes::profiles::dvarpi0(r) * resc / (2.0 * N as f64 * r);
        assert!(
            (phys - expected).abs() < 1e-7 * expected.abs().max(1e-8),
            "right x={x}: {phys} vs {expected}"
        );
    }
}

#[test]
fn first_derivative_relation_holds_at_collocation_points() {
    let mode = &solved().mode;
    for x in [0.3, 0.55, 0.8] {
        let resid = relation_residual(mode, x).unwrap();
        assert!(resid.abs() < 1e-7, "relation residual at x={x}: {resid}");
    }
}

#[test]
fn rank_one_consistency_at_the_root() {
    let e = &solved().eigen;
    let q = (1.0 - 0.5 * EPS) / (1.0 + 0.5 * EPS);
    let qn = q.powi(N as i32);
    let row1 = e.amp_a * (1.0 + e.i1) + e.amp_b * qn * e.i2;
    let row2 = e.amp_a * qn * e.i1 + e.amp_b * (1.0 + e.i2);
    let scale = e.amp_a.abs().max(e.amp_b.abs());
    assert!(row1.abs() < 1e-8 * scale, "row1 = {row1}");
    assert!(row2.abs() < 1e-8 * scale, "row2 = {row2}");
}

#[test]
fn root_is_simple_with_bounded_secant_slope() {
    let e = &solved().eigen;
    let w = e.bracket.1 - e.bracket.0;
    let dl = 1e-3 * w;
    let below = determinant(e.lambda.total - dl, EPS, N).unwrap().det;
    let above = determinant(e.lambda.total + dl, EPS, N).unwrap().det;
    assert!(below.signum() != above.signum(), "no sign change across the root");
    let slope = (above - below) / (2.0 * dl);
    assert!(slope.abs() > 1.0, "secant slope {slope} too flat");
}

#[test]
fn determinant_is_continuous_in_lambda() {
    let e = &solved().eigen;
    let w = e.bracket.1 - e.bracket.0;
    let base = determinant(e.lambda.total, EPS, N).unwrap().det;
    let mut prev = base;
    for k in 1..=4 {
        let d = determinant(e.lambda.total + k as f64 * 1e-4 * w, EPS, N).unwrap().det;
        assert!((d - prev).abs() < 0.05, "determinant jumped: {prev} -> {d}");
        prev = d;
    }
}

#[test]
fn neighboring_wavenumbers_give_distinct_modes() {
    let l6 = lambda1_leading(6).unwrap();
    let out6 =
        vortex_modes::eigensolver::solve_lambda_with_ref(EPS, 6, 1e-12, l6.value).unwrap();
    let e4 = &solved().eigen;
    assert!((out6.lambda.total - e4.lambda.total).abs() > 1e-5);
    assert!(out6.lambda.total > out6.bracket.0 && out6.lambda.total < out6.bracket.1);
}

#[test]
fn matching_integrals_recomputed_from_stored_solutions() {
    let out = solved();
    let i1 = compute_i1(&out.mode.h_left, out.eigen.lambda.total, EPS, N).unwrap();
    let i2 = compute_i2(&out.mode.h_right, out.eigen.lambda.total, EPS, N).unwrap();
    assert!((i1 - out.eigen.i1).abs() < 1e-10);
    assert!((i2 - out.eigen.i2).abs() < 1e-10);
}

#[test]
fn eigen_result_serializes_with_interface_names() {
    let e = &solved().eigen;
    let json = e.to_json();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["epsilon", "n", "lambda", "I1", "I2", "A", "B", "residuals"] {
        assert!(value.get(key).is_some(), "missing key {key}");
    }
    assert!(value["lambda"].get("total").is_some());
    assert!(value["lambda"].get("lambda1_fit").is_some());
    assert!(value["lambda"].get("lambda2_fit").is_some());
    let back: EigenResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back.lambda.total, e.lambda.total);
}

#[test]
fn difference_to_limit_solution_shrinks_pointwise() {
    let out = solved();
    let limit = vortex_modes::radial_ode::integrate_radial(
        &vortex_modes::radial_ode::OdeProblem::new(Side::Left, N, 0.0, vortex_modes::LAMBDA_0)
            .unwrap(),
        1e-3,
        Default::default(),
    )
    .unwrap();
    let small = solve_and_verify(0.02, N, 1e-12, Some(out.eigen.lambda.lambda1_ref)).unwrap();
    for x in [0.3, 0.6, 0.9] {
        let d_big = (out.mode.h_left.eval(x) - limit.eval(x)).abs();
        let d_small = (small.mode.h_left.eval(x) - limit.eval(x)).abs();
        assert!(d_small < d_big, "difference did not shrink at x = {x}");
    }
}
