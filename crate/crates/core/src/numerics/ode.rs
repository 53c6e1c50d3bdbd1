//! Dormand-Prince 5(4) integrator with dense output for second-order
//! problems written as first-order systems of dimension 2.
//!
//! Accepted steps store the coefficients of the standard fourth-order
//! continuous extension, so solution and derivative values can be queried at
//! arbitrary points inside the integration range afterwards.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct OdeTol {
    pub rel: f64,
    pub abs: f64,
}

impl Default for OdeTol {
    fn default() -> Self {
        OdeTol { rel: 1e-11, abs: 1e-13 }
    }
}

#[derive(Debug, Clone)]
struct DenseStep {
    x0: f64,
    h: f64,
    // rcont[j][component], j = 0..4.
    rcont: [[f64; 2]; 5],
}

impl DenseStep {
    fn eval(&self, x: f64) -> State {
        let theta = (x - self.x0) / self.h;
        let th1 = 1.0 - theta;
        let mut y = [0.0; 2];
        for c in 0..2 {
            y[c] = self.rcont[0][c]
                + theta
                    * (self.rcont[1][c]
                        + th1 * (self.rcont[2][c] + theta * (self.rcont[3][c] + th1 * self.rcont[4][c])));
        }
        y
    }

    fn eval_derivative(&self, x: f64) -> State {
        // d/dx of the quartic continuous extension.
        let theta = (x - self.x0) / self.h;
        let th1 = 1.0 - theta;
        let mut dy = [0.0; 2];
        for c in 0..2 {
            let r1 = self.rcont[1][c];
            let r2 = self.rcont[2][c];
            let r3 = self.rcont[3][c];
            let r4 = self.rcont[4][c];
            // y(theta) = r0 + r1 t + r2 t(1-t) + r3 t^2 (1-t) + r4 t^2 (1-t)^2
            let d = r1 + r2 * (1.0 - 2.0 * theta) + r3 * theta * (2.0 - 3.0 * theta)
                + r4 * theta * th1 * (2.0 - 4.0 * theta);
            dy[c] = d / self.h;
        }
        dy
    }
}

/// Piecewise quartic dense representation of an accepted integration.
#[derive(Debug, Clone)]
pub struct DenseOde {
    steps: Vec<DenseStep>,
    x_start: f64,
    x_end: f64,
    pub y_end: State,
    pub n_steps: usize,
    pub n_rejected: usize,
}

impl DenseOde {
    pub fn range(&self) -> (f64, f64) {
        if self.x_start <= self.x_end {
            (self.x_start, self.x_end)
        } else {
            (self.x_end, self.x_start)
        }
    }

    fn locate(&self, x: f64) -> &DenseStep {
        // Steps are monotone in x0; binary search on the step origin.
        let forward = self.x_end >= self.x_start;
        let mut lo = 0usize;
        let mut hi = self.steps.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let x0 = self.steps[mid].x0;
            if (forward && x0 <= x) || (!forward && x0 >= x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        &self.steps[lo]
    }

    /// Solution value at `x` (clamped to the integration range).
    pub fn eval(&self, x: f64) -> State {
        let (lo, hi) = self.range();
        let x = x.clamp(lo, hi);
        self.locate(x).eval(x)
    }

    /// Derivative of the dense representation at `x`.
    pub fn eval_derivative(&self, x: f64) -> State {
        let (lo, hi) = self.range();
        let x = x.clamp(lo, hi);
        self.locate(x).eval_derivative(x)
    }
}

/// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
pub fn integrate<F: Fn(f64, &State) -> State>(f: F, x0: f64, x1: f64, y0: State, tol: OdeTol) -> Result<DenseOde> {
    if !(x0.is_finite() && x1.is_finite()) || x0 == x1 {
        return Err(Error::domain("invalid integration range"));
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = dir * (span * 1e-4).min(1e-3).max(span * 1e-12);

    let mut steps: Vec<DenseStep> = Vec::new();
    let mut n_rejected = 0usize;
    let max_steps = 2_000_000usize;

    for _ in 0..max_steps {
        if (dir > 0.0 && x + h > x1) || (dir < 0.0 && x + h < x1) {
            h = x1 - x;
        }
        let mut y2 = [0.0; 2];
        for c in 0..2 {
            y2[c] = y[c] + h * A21 * k1[c];
        }
        let k2 = f(x + C2 * h, &y2);
        let mut y3 = [0.0; 2];
        for c in 0..2 {
            y3[c] = y[c] + h * (A31 * k1[c] + A32 * k2[c]);
        }
        let k3 = f(x + C3 * h, &y3);
        let mut y4 = [0.0; 2];
        for c in 0..2 {
            y4[c] = y[c] + h * (A41 * k1[c] + A42 * k2[c] + A43 * k3[c]);
        }
        let k4 = f(x + C4 * h, &y4);
        let mut y5 = [0.0; 2];
        for c in 0..2 {
            y5[c] = y[c] + h * (A51 * k1[c] + A52 * k2[c] + A53 * k3[c] + A54 * k4[c]);
        }
        let k5 = f(x + C5 * h, &y5);
        let mut y6 = [0.0; 2];
        for c in 0..2 {
            y6[c] = y[c] + h * (A61 * k1[c] + A62 * k2[c] + A63 * k3[c] + A64 * k4[c] + A65 * k5[c]);
        }
        let k6 = f(x + h, &y6);
        let mut ynew = [0.0; 2];
        for c in 0..2 {
            ynew[c] = y[c] + h * (B1 * k1[c] + B3 * k3[c] + B4 * k4[c] + B5 * k5[c] + B6 * k6[c]);
        }
        let k7 = f(x + h, &ynew);

        let mut err_norm = 0.0;
        for c in 0..2 {
            let e = h * (E1 * k1[c] + E3 * k3[c] + E4 * k4[c] + E5 * k5[c] + E6 * k6[c] + E7 * k7[c]);
            let sc = tol.abs + tol.rel * y[c].abs().max(ynew[c].abs());
            err_norm += (e / sc) * (e / sc);
        }
        err_norm = (err_norm / 2.0).sqrt();

        if !err_norm.is_finite() {
            return Err(Error::NonFiniteSample { x });
        }

        if err_norm <= 1.0 {
            let mut rcont = [[0.0; 2]; 5];
            for c in 0..2 {
                let ydiff = ynew[c] - y[c];
                let bspl = h * k1[c] - ydiff;
                rcont[0][c] = y[c];
                rcont[1][c] = ydiff;
                rcont[2][c] = bspl;
                rcont[3][c] = ydiff - h * k7[c] - bspl;
                rcont[4][c] = h
                    * (D1 * k1[c] + D3 * k3[c] + D4 * k4[c] + D5 * k5[c] + D6 * k6[c] + D7 * k7[c]);
            }
            steps.push(DenseStep { x0: x, h, rcont });
            x += h;
            y = ynew;
            k1 = k7; // first-same-as-last
            if (dir > 0.0 && x >= x1) || (dir < 0.0 && x <= x1) {
                return Ok(DenseOde {
                    steps,
                    x_start: x0,
                    x_end: x,
                    y_end: y,
                    n_steps: 0,
                    n_rejected,
                }
                .with_counts(n_rejected));
            }
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            n_rejected += 1;
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.1, 1.0);
            h *= fac;
            if h.abs() < 1e-15 * (x.abs() + 1.0) {
                return Err(Error::domain(format!("step size underflow at x = {x:.6e}")));
            }
        }
    }
    Err(Error::domain("step budget exhausted"))
}

impl DenseOde {
    fn with_counts(mut self, rejected: usize) -> Self {
        self.n_steps = self.steps.len();
        self.n_rejected = rejected;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_round_trip() {
        let sol = integrate(|_, y| [y[1], -y[0]], 0.0, std::f64::consts::TAU, [1.0, 0.0], OdeTol::default()).unwrap();
        assert!((sol.y_end[0] - 1.0).abs() < 1e-9);
        assert!(sol.y_end[1].abs() < 1e-9);
        // Dense output mid-way.
        let q = sol.eval(std::f64::consts::FRAC_PI_2);
        assert!(q[0].abs() < 1e-8);
        assert!((q[1] + 1.0).abs() < 1e-8);
        let dq = sol.eval_derivative(std::f64::consts::PI);
        assert!(dq[0].abs() < 1e-7);
    }

    #[test]
    fn euler_equation_monomial_solution() {
        // x^2 y'' + x y' - n^2 y = 0 has the exact solution x^n.
        let n = 4.0;
        let rhs = |x: f64, y: &State| [y[1], -y[1] / x + (n * n) / (x * x) * y[0]];
        let x0 = 0.5;
        let sol = integrate(rhs, x0, 2.0, [x0.powf(n), n * x0.powf(n - 1.0)], OdeTol::default()).unwrap();
        assert!((sol.y_end[0] - 2.0_f64.powf(n)).abs() < 1e-8);
        let mid = sol.eval(1.3);
        assert!((mid[0] - 1.3_f64.powf(n)).abs() < 1e-8);
        assert!((mid[1] - n * 1.3_f64.powf(n - 1.0)).abs() < 1e-7);
    }

    #[test]
    fn backward_integration() {
        let sol = integrate(|_, y| [y[1], -y[0]], 1.0, 0.25, [1.0_f64.sin(), 1.0_f64.cos()], OdeTol::default()).unwrap();
        assert!((sol.y_end[0] - 0.25_f64.sin()).abs() < 1e-9);
        let q = sol.eval(0.5);
        assert!((q[0] - 0.5_f64.sin()).abs() < 1e-9);
    }
}
