use std::time::Instant;
use vortex_modes::eigensolver::lambda1_leading;
use vortex_modes::mode_assembly::{difference_scaling_study, solve_and_verify};

fn main() {
    let t0 = Instant::now();
    let lead = lambda1_leading(4).unwrap();
    let eps_list = [0.1, 0.07, 0.05, 0.035, 0.02];
    for &eps in &eps_list {
        let out = solve_and_verify(eps, 4, 1e-12, Some(lead.value)).unwrap();
        let e = &out.eigen;
        println!(
            "eps={:<6} lambda={:.12} l1_fit={:+.6} l2_fit={:+.6} det={:+.2e} resid(max)={:.2e}",
            eps, e.lambda.total, e.lambda.lambda1_fit, e.lambda.lambda2_fit, e.det_at_root,
            out.report.left_max.max(out.report.right_max).max(out.report.physical_max)
        );
    }
    println!("sweep took {:.2?}", t0.elapsed());
    let t1 = Instant::now();
    let table = difference_scaling_study(4, &eps_list, 1e-12).unwrap();
    for row in &table.rows {
        println!(
            "eps={:<6} |x^-n dL|={:.4e} ratio={:.4}   |x^n dR|={:.4e} ratio={:.4}",
            row.epsilon, row.left_diff_norm, row.left_ratio, row.right_diff_norm, row.right_ratio
        );
    }
    let (sl, sr) = table.ratio_spread();
    println!("ratio spreads: left {:.3} right {:.3}  ({:.2?})", sl, sr, t1.elapsed());

    // Distinct modes at n and n+2.
    let l6 = lambda1_leading(6).unwrap();
    let out6 = solve_and_verify(0.1, 6, 1e-12, Some(l6.value)).unwrap();
    println!("n=6: lambda = {:.12} (n=4 gave 0.330365730397685)", out6.eigen.lambda.total);
}
