//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p vortex-modes-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use vortex_modes::eigensolver::{determinant, lambda1_leading, LAMBDA2_BOUND};
use vortex_modes::kernels::{eval_kernel, kernel_trig_oracle, KernelSpec};
use vortex_modes::mode_assembly::{difference_scaling_study, solve_and_verify, SolveOutput};
use vortex_modes::numerics::{adaptive_quad, QuadratureSpec};
use vortex_modes::profiles::{
    holder_distance, lambda_bracket, sup_abs_dvarpi0, CoeffOrder, Side, SideCoefficient,
    VortexProfile,
};
use vortex_modes::radial_ode::{
    integrate_radial, picard_oracle_right, second_solution, wronskian_report, GridSpec,
    OdeProblem, DEFAULT_START_OFFSET,
};
use vortex_modes::{lambda1_window, LAMBDA_0};

const SWEEP_EPS: [f64; 5] = [0.1, 0.07, 0.05, 0.035, 0.02];
const N: u32 = 4;

fn report(number: u32, label: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {number:>2} [{label}]: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({label}) failed: {detail}");
}

fn sweep() -> &'static Vec<SolveOutput> {
    static CELL: OnceLock<Vec<SolveOutput>> = OnceLock::new();
    CELL.get_or_init(|| {
        let l1 = lambda1_leading(N).expect("leading-order reference").value;
        SWEEP_EPS
            .iter()
            .map(|&eps| solve_and_verify(eps, N, 1e-12, Some(l1)).expect("sweep solve"))
            .collect()
    })
}

#[test]
fn criterion_01_kernel_identity() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in 1..=8 {
        let spec = KernelSpec::new(n).unwrap();
        for &r in &[0.1, 0.5, 0.9, 1.1, 2.0, 5.0] {
            let oracle = kernel_trig_oracle(spec, r, 1e-10).unwrap();
            let closed = eval_kernel(spec, r).unwrap();
            worst = worst.max((oracle - closed).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "kernel identity",
        worst < 1e-10 && elapsed < 5.0,
        &format!("worst |trig - closed| = {worst:.3e} over 48 cases in {elapsed:.2} s"),
    );
}

#[test]
fn criterion_02_angular_velocity_consistency() {
    let start = Instant::now();
    let mut worst_c = 0.0_f64;
    for &eps in &[0.0, 0.01, 0.05, 0.1] {
        let profile = VortexProfile::new(eps).unwrap();
        let left = SideCoefficient::new(Side::Left, eps).unwrap();
        let right = SideCoefficient::new(Side::Right, eps).unwrap();
        let spec = QuadratureSpec::with_tols(1e-12, 1e-15)
            .split_at(&[profile.inner_edge(), profile.outer_edge()]);
        for i in 1..=10 {
            let x = i as f64 / 10.0;
            let r = x * (1.0 - 0.5 * eps);
            let (mass, _) = adaptive_quad(|s| s * profile.perturbed(s), (0.0, r), &spec).unwrap();
            let closed = left.eval(x, CoeffOrder::Value).unwrap();
            worst_c = worst_c.max((closed + mass / (r * r)).abs());

            let x_r = 1.0 + 2.0 * i as f64 / 10.0;
            let r_r = x_r * (1.0 + 0.5 * eps);
            let (mass_r, _) = adaptive_quad(|s| s * profile.perturbed(s), (0.0, r_r), &spec).unwrap();
            let closed_r = right.eval(x_r, CoeffOrder::Value).unwrap();
            worst_c = worst_c.max((closed_r + mass_r / (r_r * r_r)).abs());
        }
    }
    let anchor = (LAMBDA_0
        + SideCoefficient::new(Side::Left, 0.0).unwrap().eval(1.0, CoeffOrder::Value).unwrap())
    .abs()
    .max(
        (LAMBDA_0
            + SideCoefficient::new(Side::Right, 0.0).unwrap().eval(1.0, CoeffOrder::Value).unwrap())
        .abs(),
    );
    let dl = SideCoefficient::new(Side::Left, 0.0).unwrap().eval(1.0, CoeffOrder::DEps).unwrap();
    let dr = SideCoefficient::new(Side::Right, 0.0).unwrap().eval(1.0, CoeffOrder::DEps).unwrap();
    let ln2 = std::f64::consts::LN_2;
    let slope_err = (dl - (1.0 - ln2) / 2.0).abs().max((dr - ln2 / 2.0).abs());
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_c < 1e-10 && anchor < 1e-12 && slope_err < 1e-6 && elapsed < 10.0;
    report(
        2,
        "angular-velocity consistency",
        pass,
        &format!(
            "closed-vs-quadrature {worst_c:.3e}, anchor {anchor:.3e}, slopes {slope_err:.3e}, {elapsed:.2} s"
        ),
    );
}

#[test]
fn criterion_03_limit_ode_suite() {
    let start = Instant::now();
    let grid = GridSpec::default();
    let mut detail = String::new();
    let mut pass = true;

    let mut weighted_sups = [0.0_f64; 2];
    for (idx, side) in [Side::Left, Side::Right].into_iter().enumerate() {
        let problem = OdeProblem::new(side, N, 0.0, LAMBDA_0).unwrap();
        let sol = integrate_radial(&problem, DEFAULT_START_OFFSET, grid).unwrap();
        pass &= (sol.eval_t(1.0) - 1.0).abs() < 1e-9;
        pass &= sol.positive_on_grid();
        let mut sup = 0.0_f64;
        for k in 0..=300 {
            let x = match side {
                Side::Left => 1e-3_f64.powf(1.0 - k as f64 / 300.0),
                Side::Right => 1e3_f64.powf(k as f64 / 300.0),
            };
            let weighted = match side {
                Side::Left => x.powi(-(N as i32)) * sol.eval(x),
                Side::Right => x.powi(N as i32) * sol.eval(x),
            };
            sup = sup.max(weighted.abs());
        }
        weighted_sups[idx] = sup;
        pass &= sup.is_finite() && sup < 1e6;

        let companion = second_solution(side, N, grid).unwrap();
        let w = wronskian_report(&sol, &companion).unwrap();
        pass &= w.max_deviation < 1e-6;
        detail.push_str(&format!("{}: wronskian {:.2e}, weighted sup {:.3}; ", side.name(), w.max_deviation, sup));
    }

    let oracle = picard_oracle_right(N, 10.0, 0.8, 40).unwrap();
    let problem = OdeProblem::new(Side::Right, N, 0.0, LAMBDA_0).unwrap();
    let shoot = integrate_radial(&problem, DEFAULT_START_OFFSET, grid).unwrap();
    let z_ref = 0.8;
    let oracle_ref = *oracle.h.last().unwrap();
    let shoot_ref = shoot.eval_t(z_ref);
    let mut worst = 0.0_f64;
    for (i, &z) in oracle.z.iter().enumerate() {
        if z < 0.05 {
            continue;
        }
        worst = worst.max((oracle.h[i] / oracle_ref - shoot.eval_t(z) / shoot_ref).abs());
    }
    pass &= worst < 1e-7;
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 30.0;
    detail.push_str(&format!("picard vs shooting {worst:.2e}, {elapsed:.2} s"));
    report(3, "limit ODE suite", pass, &detail);
}

#[test]
fn criterion_04_eigenvalue_existence_and_window() {
    let start = Instant::now();
    let outputs = sweep();
    let (w_lo, w_hi) = lambda1_window();
    let mut pass = true;
    let mut detail = String::new();
    for out in outputs.iter() {
        let e = &out.eigen;
        let (lo, hi) = lambda_bracket(e.epsilon).unwrap();
        let margin = 5e-4 * (hi - lo);
        let d_lo = determinant(lo + margin, e.epsilon, N).unwrap().det;
        let d_hi = determinant(hi - margin, e.epsilon, N).unwrap().det;
        let signs_ok = d_lo.signum() != d_hi.signum();
        let root_ok = e.det_at_root.abs() < 1e-8;
        let inside = e.lambda.total > lo && e.lambda.total < hi;
        let window_ok = e.lambda.lambda1_fit > w_lo && e.lambda.lambda1_fit < w_hi;
        pass &= signs_ok && root_ok && inside && window_ok;
        detail.push_str(&format!(
            "eps={}: l1={:.4}{} ",
            e.epsilon,
            e.lambda.lambda1_fit,
            if signs_ok && root_ok && inside && window_ok { "" } else { " <-FAIL" }
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 300.0;
    detail.push_str(&format!("window ({w_lo:.4}, {w_hi:.4}), {elapsed:.1} s"));
    report(4, "eigenvalue existence and window", pass, &detail);
}

#[test]
fn criterion_05_expansion_boundedness() {
    let outputs = sweep();
    let l2: Vec<f64> = outputs.iter().map(|o| o.eigen.lambda.lambda2_fit).collect();
    let max_abs = l2.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min_abs = l2.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let spread = max_abs / min_abs;
    // No monotone divergence: the sequence (ordered by decreasing eps) must
    // not grow strictly toward small widths.
    let mut strictly_growing = true;
    for w in l2.windows(2) {
        if w[1].abs() <= w[0].abs() {
            strictly_growing = false;
        }
    }
    let pass = spread < 10.0 && !strictly_growing && max_abs <= LAMBDA2_BOUND;
    report(
        5,
        "expansion boundedness",
        pass,
        &format!("l2 fits {:?}, spread {spread:.3}", l2.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>()),
    );
}

#[test]
fn criterion_06_end_to_end_residuals() {
    let outputs = sweep();
    let mut pass = true;
    let mut detail = String::new();
    for out in outputs.iter() {
        let r = &out.report;
        let worst = r.left_max.max(r.right_max).max(r.physical_max);
        let boundary = r.n_l_at_1.max(r.n_r_at_1);
        pass &= worst < 1e-6 && boundary < 1e-6;
        detail.push_str(&format!("eps={}: {worst:.2e}/{boundary:.2e} ", out.eigen.epsilon));
    }
    report(6, "end-to-end residuals", pass, &detail);
}

#[test]
fn criterion_07_holder_proximity() {
    let (r_at, sup_slope) = sup_abs_dvarpi0();
    let exact = 3.0 * 3.0_f64.sqrt() / 8.0;
    let mut pass = (sup_slope - exact).abs() < 1e-6;
    let mut detail = format!("|varpi0'| max {sup_slope:.8} at r = {r_at:.6}; ");
    for &eps in &[0.1, 0.05] {
        for &alpha in &[0.25, 0.5, 0.75] {
            let rep = holder_distance(eps, alpha, 300).unwrap();
            let ok = rep.c_alpha <= rep.bound;
            pass &= ok;
            detail.push_str(&format!(
                "({eps},{alpha}): {:.4} <= {:.4}{} ",
                rep.c_alpha,
                rep.bound,
                if ok { "" } else { " <-FAIL" }
            ));
        }
    }
    report(7, "Hoelder proximity", pass, &detail);
}

#[test]
fn criterion_08_difference_scaling() {
    let table = difference_scaling_study(N, &SWEEP_EPS, 1e-12).unwrap();
    let (left_spread, right_spread) = table.ratio_spread();
    let pass = left_spread < 3.0 && right_spread < 3.0;
    report(
        8,
        "difference scaling",
        pass,
        &format!("ratio spreads: left {left_spread:.3}, right {right_spread:.3} (< 3 required)"),
    );
}

#[test]
fn criterion_09_negative_control_at_zero_width() {
    let out_dir = std::env::temp_dir().join(format!("vortex-acc9-{}", std::process::id()));
    let output = Command::new(env!("CARGO_BIN_EXE_vortex-modes"))
        .args(["solve", "--eps", "0", "-o"])
        .arg(&out_dir)
        .output()
        .expect("run solver binary");
    let stdout = String::from_utf8_lossy(&output.stdout);
    let pass = output.status.success()
        && stdout.contains("no bracket exists")
        && stdout.contains("no rotating mode")
        && !out_dir.join("eigen_0.json").exists();
    let _ = std::fs::remove_dir_all(&out_dir);
    report(
        9,
        "negative control at eps=0",
        pass,
        &format!("exit {:?}, message: {}", output.status.code(), stdout.trim()),
    );
}

#[test]
fn criterion_10_deterministic_outputs() {
    let base = std::env::temp_dir().join(format!("vortex-acc10-{}", std::process::id()));
    let dir_a = base.join("a");
    let dir_b = base.join("b");
    for dir in [&dir_a, &dir_b] {
        let run = Command::new(env!("CARGO_BIN_EXE_vortex-modes"))
            .args(["sweep", "--eps", "0.1,0.05", "-o"])
            .arg(dir)
            .output()
            .expect("run sweep binary");
        assert!(run.status.success(), "sweep run failed");
    }
    let mut pass = true;
    let mut detail = String::new();
    for name in [
        "eigen_0.1.json",
        "eigen_0.05.json",
        "mode_0.1.csv",
        "mode_0.05.csv",
        "residuals_0.1.json",
        "residuals_0.05.json",
        "sweep_summary.json",
    ] {
        let a = std::fs::read(dir_a.join(name)).expect("first run output");
        let b = std::fs::read(dir_b.join(name)).expect("second run output");
        if a != b {
            pass = false;
            detail.push_str(&format!("{name} differs; "));
        }
    }
    if pass {
        detail = "7 files byte-identical across two sweep runs".to_string();
    }
    let _ = std::fs::remove_dir_all(&base);
    report(10, "deterministic outputs", pass, &detail);
}
