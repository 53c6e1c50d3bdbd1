use std::time::Instant;
use vortex_modes::eigensolver::{determinant, lambda1_leading};
use vortex_modes::mode_assembly::solve_and_verify;

fn main() {
    let t0 = Instant::now();
    let lead = lambda1_leading(4).unwrap();
    println!("lambda1 leading: {:?} ({:.2?})", lead, t0.elapsed());

    let t1 = Instant::now();
    let out = solve_and_verify(0.1, 4, 1e-12, Some(lead.value)).unwrap();
    println!("solve+verify at eps=0.1 took {:.2?}", t1.elapsed());
    let e = &out.eigen;
    println!("lambda = {:.15}", e.lambda.total);
    println!("bracket = ({:.15}, {:.15})", e.bracket.0, e.bracket.1);
    println!("lambda1_fit = {:.8}  lambda2_fit = {:.6}", e.lambda.lambda1_fit, e.lambda.lambda2_fit);
    println!("I1 = {:.10}  I2 = {:.10}  det = {:.3e}", e.i1, e.i2, e.det_at_root);
    println!("A = {:.10}  B = {:.10}", e.amp_a, e.amp_b);
    println!("residuals: left {:.3e} right {:.3e} phys {:.3e} NL {:.3e} NR {:.3e}",
        out.report.left_max, out.report.right_max, out.report.physical_max,
        out.report.n_l_at_1, out.report.n_r_at_1);

    let t2 = Instant::now();
    let d = determinant(e.lambda.total, 0.1, 4).unwrap();
    println!("one determinant eval: {:.2?} (det = {:.3e})", t2.elapsed(), d.det);
}
