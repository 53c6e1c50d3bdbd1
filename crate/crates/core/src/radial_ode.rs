//! Shooting solutions of the left and right radial ODEs.
//!
//! Both sides reduce to the same template on a bounded interval: the left
//! equation lives directly on `x in (0, 1)`, the right equation is pulled
//! back to `z = 1/x in (0, 1)`. In the integration variable `t` the problem
//! reads
//!
//! ```text
//! h'' + h'/t - (n^2 + t^2 W(t)) h / t^2 = 0,
//! ```
//!
//! where `W` is the regular part of the potential (`psi_tilde`). The
//! recessive solution at the origin behaves like `t^n`; it is produced by a
//! short Volterra march on `[0, t_0]` (the fixed-point form of the ODE) and
//! then continued by the adaptive stepper. At `eps = 0` the potential has a
//! simple pole at `t = 1` with a resonant `(t-1) log|t-1|` structure;
//! integration stops just short of the pole and the boundary value is
//! recovered from a fitted local log model.

use crate::error::{Error, Result};
use crate::numerics::fit::least_squares;
use crate::numerics::ode::{self, OdeTol, State};
use crate::numerics::series::SeriesAtPoint;
use crate::profiles::{lambda_bracket, varpi0, CoeffOrder, Side, SideCoefficient};
use crate::{C_SLOPE_AT_1, LAMBDA_0};

/// How far short of the interior singular point the `eps = 0` integration
/// stops (in the integration variable).
pub const LIMIT_POLE_OFFSET: f64 = 1e-4;

/// Default series/Volterra hand-off point.
pub const DEFAULT_START_OFFSET: f64 = 1e-3;

/// One radial shooting problem.
#[derive(Debug, Clone, Copy)]
pub struct OdeProblem {
    pub side: Side,
    pub n: u32,
    pub epsilon: f64,
    pub lambda: f64,
    /// Multiplies the potential term; 0 reduces the equation to its Euler
    /// part (used as a test hook), 1 is the physical problem.
    pub potential_scale: f64,
}

impl OdeProblem {
    pub fn new(side: Side, n: u32, epsilon: f64, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("wavenumber must be >= 2, got {n}")));
        }
        if epsilon == 0.0 {
            if (lambda - LAMBDA_0).abs() > 1e-13 {
                return Err(Error::domain(format!(
                    "the limit problem requires lambda = log(2)/2, got {lambda}"
                )));
            }
        } else {
            let (lo, hi) = lambda_bracket(epsilon)?;
            if !(lambda > lo && lambda < hi) {
                return Err(Error::BracketViolation {
                    side: side.name(),
                    x: 1.0,
                    denom: if lambda <= lo { lambda - lo } else { lambda - hi },
                });
            }
        }
        Ok(OdeProblem { side, n, epsilon, lambda, potential_scale: 1.0 })
    }

    pub fn with_potential_scale(mut self, scale: f64) -> Self {
        self.potential_scale = scale;
        self
    }

    /// Matching denominator `lambda + c_side` as a function of the
    /// integration variable `t` (`x` on the left, `z = 1/x` on the right).
    pub fn denominator(&self, t: f64) -> f64 {
        let coeff = SideCoefficient { side: self.side, epsilon: self.epsilon };
        let x = match self.side {
            Side::Left => t,
            Side::Right => 1.0 / t,
        };
        self.lambda + coeff.eval(x, CoeffOrder::Value).unwrap_or(f64::NAN)
    }

    /// Regular part `W(t)` of the potential: the full coefficient is
    /// `n^2 + t^2 W(t)`. Finite at `t = 0`; simple pole at `t = 1` only in
    /// the `eps = 0` limit.
    pub fn psi_tilde(&self, t: f64) -> f64 {
        let s = self.side.scale(self.epsilon);
        let denom = self.denominator(t);
        let shape = match self.side {
            Side::Left => {
                let y = s * t;
                let d = 1.0 + y * y;
                2.0 * s * s / (d * d)
            }
            Side::Right => {
                let d = t * t + s * s;
                2.0 * s * s / (d * d)
            }
        };
        self.potential_scale * shape / denom
    }

    /// Expected sign of the matching denominator on this side.
    fn denominator_sign(&self) -> f64 {
        match self.side {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }

    fn rhs(&self) -> impl Fn(f64, &State) -> State + '_ {
        let n2 = (self.n as f64) * (self.n as f64);
        move |t: f64, y: &State| {
            let w = self.psi_tilde(t);
            [y[1], -y[1] / t + (n2 / (t * t) + w) * y[0]]
        }
    }

    fn probe_denominator(&self, t_end: f64) -> Result<()> {
        let want = self.denominator_sign();
        for i in 1..=400 {
            let t = t_end * i as f64 / 400.0;
            let d = self.denominator(t);
            if !(d * want > 0.0) {
                return Err(Error::BracketViolation {
                    side: self.side.name(),
                    x: match self.side {
                        Side::Left => t,
                        Side::Right => 1.0 / t,
                    },
                    denom: d,
                });
            }
        }
        Ok(())
    }
}

/// Output sampling and stepper directives for [`integrate_radial`].
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub samples: usize,
    pub ode_rel_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { samples: 400, ode_rel_tol: 1e-12 }
    }
}

/// Local boundary model `h(t) ~ c0 + c1 u log|u| + c2 u + c3 u^2 log|u| + c4 u^2`
/// around the interior singular point, `u = t - 1`.
#[derive(Debug, Clone, Copy)]
pub struct LogBoundaryModel {
    pub coeffs: [f64; 5],
}

impl LogBoundaryModel {
    fn eval(&self, u: f64) -> f64 {
        let l = if u == 0.0 { 0.0 } else { u.abs().ln() };
        self.coeffs[0]
            + self.coeffs[1] * u * l
            + self.coeffs[2] * u
            + self.coeffs[3] * u * u * l
            + self.coeffs[4] * u * u
    }

    fn eval_derivative(&self, u: f64) -> f64 {
        let l = if u == 0.0 { 0.0 } else { u.abs().ln() };
        self.coeffs[1] * (l + 1.0)
            + self.coeffs[2]
            + self.coeffs[3] * u * (2.0 * l + 1.0)
            + self.coeffs[4] * 2.0 * u
    }

    /// Coefficient ratio of the resonant term relative to the value at 1.
    pub fn log_slope_ratio(&self) -> f64 {
        self.coeffs[1] / self.coeffs[0]
    }

    /// `eval(u) - 1` without cancellation (the constant term is 1 after
    /// normalization, so the difference is formed coefficient-wise).
    fn eval_minus_one(&self, u: f64) -> f64 {
        let l = if u == 0.0 { 0.0 } else { u.abs().ln() };
        (self.coeffs[0] - 1.0)
            + self.coeffs[1] * u * l
            + self.coeffs[2] * u
            + self.coeffs[3] * u * u * l
            + self.coeffs[4] * u * u
    }
}

/// Whether a radial solution is the recessive (normalized) solution or the
/// companion solution that vanishes at the matching point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Principal,
    Companion,
}

/// One solved radial profile with dense evaluation.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub problem: OdeProblem,
    pub kind: SolutionKind,
    /// Increasing physical-rescaled sample points `x`.
    pub grid: Vec<f64>,
    /// Normalized values at `grid`.
    pub values: Vec<f64>,
    /// Normalized `d/dx` at `grid`.
    pub derivatives: Vec<f64>,
    /// Power/log expansion at the recessive endpoint (in the integration
    /// variable), before normalization.
    pub origin_series: Option<SeriesAtPoint>,
    /// Unnormalized solution value at the matching point `t = 1`.
    pub endpoint_value_at_1: f64,
    /// Fitted boundary model for the `eps = 0` pole (normalized scale).
    pub boundary_model: Option<LogBoundaryModel>,
    dense: ode::DenseOde,
    scale: f64,
    t_start: f64,
    t_end: f64,
}

impl RadialSolution {
    /// Evaluate in the integration variable `t`.
    pub fn eval_t(&self, t: f64) -> f64 {
        if t < self.t_start {
            let anchor = self.dense.eval(self.t_start)[0] * self.scale;
            let expo = match self.kind {
                SolutionKind::Principal => self.problem.n as i32,
                SolutionKind::Companion => -(self.problem.n as i32),
            };
            return anchor * (t / self.t_start).powi(expo);
        }
        if t > self.t_end {
            if let Some(model) = &self.boundary_model {
                return model.eval(t - 1.0);
            }
            return self.dense.eval(self.t_end)[0] * self.scale;
        }
        self.dense.eval(t)[0] * self.scale
    }

    /// `d/dt` in the integration variable.
    pub fn eval_t_derivative(&self, t: f64) -> f64 {
        if t > self.t_end {
            if let Some(model) = &self.boundary_model {
                return model.eval_derivative(t - 1.0);
            }
        }
        let t = t.clamp(self.t_start, self.t_end);
        self.dense.eval_derivative(t)[0] * self.scale
    }

    fn to_t(&self, x: f64) -> f64 {
        match self.problem.side {
            Side::Left => x,
            Side::Right => 1.0 / x,
        }
    }

    /// Evaluate at the rescaled coordinate `x` of the solution's side.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_t(self.to_t(x))
    }

    /// `h(x) - 1`, formed without cancellation inside the boundary-model
    /// region where `h` is within roundoff of its matching value.
    pub fn eval_minus_one(&self, x: f64) -> f64 {
        let t = self.to_t(x);
        if t > self.t_end {
            if let Some(model) = &self.boundary_model {
                return model.eval_minus_one(t - 1.0);
            }
        }
        self.eval_t(t) - 1.0
    }

    /// `d/dx` at the rescaled coordinate.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        match self.problem.side {
            Side::Left => self.eval_t_derivative(x),
            Side::Right => {
                let z = 1.0 / x;
                -z * z * self.eval_t_derivative(z)
            }
        }
    }

    /// Range of `x` covered by dense data.
    pub fn x_range(&self) -> (f64, f64) {
        match self.problem.side {
            Side::Left => (self.t_start, self.t_end),
            Side::Right => (1.0 / self.t_end, 1.0 / self.t_start),
        }
    }

    pub fn positive_on_grid(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }
}

/// Recessive starter from the fixed-point form of the ODE on `[0, t0]`.
///
/// With `h = t^n f`, two cumulative integrals give
/// `f(t) = 1 + (1/2n) int W z f dz - (1/2n) int W f (z/t)^{2n} z dz` and
/// `f'(t) = int W f (z/t)^{2n+1} dz`. Three sweeps leave a relative error
/// of order `t0^6`.
fn volterra_start(problem: &OdeProblem, t0: f64) -> (f64, f64) {
    let m = 128usize;
    let hgrid = t0 / m as f64;
    let ts: Vec<f64> = (0..=m).map(|i| i as f64 * hgrid).collect();
    let w: Vec<f64> = ts.iter().map(|&t| problem.psi_tilde(t)).collect();
    let two_n = 2.0 * problem.n as f64;
    let mut f = vec![1.0_f64; m + 1];

    // Composite Simpson over samples 0..=j (trapezoid patch on odd tails).
    let simpson = |g: &dyn Fn(usize) -> f64, j: usize| -> f64 {
        let mut acc = 0.0;
        let pairs = j / 2;
        for p in 0..pairs {
            let i = 2 * p;
            acc += hgrid / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
        }
        if j % 2 == 1 {
            acc += 0.5 * hgrid * (g(j - 1) + g(j));
        }
        acc
    };

    for _ in 0..3 {
        let prev = f.clone();
        // Cumulative integral of W z f by Simpson on even indices,
        // trapezoid-patched on odd ones.
        for j in 1..=m {
            let ga = |i: usize| w[i] * ts[i] * prev[i];
            let ia = simpson(&ga, j);
            let tj = ts[j];
            let gb = |i: usize| w[i] * prev[i] * (ts[i] / tj).powi(2 * problem.n as i32) * ts[i];
            let ib = simpson(&gb, j);
            f[j] = 1.0 + (ia - ib) / two_n;
        }
    }
    let tj = t0;
    let gd = |i: usize| w[i] * f[i] * (ts[i] / tj).powi(2 * problem.n as i32 + 1);
    let fp = simpson(&gd, m);
    let fv = f[m];
    let n = problem.n as f64;
    let h = t0.powi(problem.n as i32) * fv;
    let dh = n * t0.powi(problem.n as i32 - 1) * fv + t0.powi(problem.n as i32) * fp;
    (h, dh)
}

/// Power/log expansion of the potential's regular part around `t = 0`.
fn potential_origin_series(problem: &OdeProblem, order: i32) -> Result<SeriesAtPoint> {
    let s = problem.side.scale(problem.epsilon);
    let radius = 0.25;
    let order = order.max(2);
    let len = (order + 1) as usize;
    match problem.side {
        Side::Left => {
            // lambda + c_L = lambda + K_eps + c0(s t): even series, no logs.
            let k_eps = 16.0 * problem.epsilon / (64.0 + problem.epsilon.powi(4));
            let mut den = vec![0.0; len];
            den[0] = problem.lambda + k_eps;
            let mut j = 0usize;
            while 2 * j < len {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                den[2 * j] += -0.5 * sign * s.powi(2 * j as i32) / (j as f64 + 1.0);
                j += 1;
            }
            let den_series = SeriesAtPoint::new(0.0, 0, den, radius);
            let mut shape = vec![0.0; len];
            let mut mm = 0usize;
            while 2 * mm < len {
                let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
                shape[2 * mm] = (mm as f64 + 1.0) * sign * s.powi(2 * mm as i32);
                mm += 1;
            }
            let shape_series = SeriesAtPoint::new(0.0, 0, shape, radius).scale(2.0 * s * s);
            let inv = den_series.recip(order)?;
            let mut w = shape_series.multiply(&inv, order)?;
            w = w.scale(problem.potential_scale);
            Ok(w)
        }
        Side::Right => {
            // lambda + c_R(1/z): the pulled-back coefficient carries a
            // z^2 log z term next to its even power series.
            let a = 1.0 - 0.5 * problem.epsilon;
            let b = s;
            let base = |y: f64| 0.5 * (y * y).ln_1p();
            let k3 = base(a) - base(b) + 0.5 * (b * b * varpi0(b) - a * a * varpi0(a));
            let mut den = vec![0.0; len];
            let mut den_logs = vec![0.0; len];
            den[0] = problem.lambda;
            if len > 2 {
                den[2] += -(k3 + b.ln()) / (b * b);
                den_logs[2] = 1.0 / (b * b);
                // -(z^2/b^2) * 0.5 * sum_{j>=1} (-1)^{j+1} (z^2/b^2)^j / j
                let mut j = 1usize;
                while 2 + 2 * j < len {
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    den[2 + 2 * j] += -0.5 * sign / (j as f64 * b.powi(2 * (j as i32 + 1)));
                    j += 1;
                }
            }
            let den_series = SeriesAtPoint::with_logs(0.0, 0, den, den_logs, radius);
            // 2 b^2 / (z^2 + b^2)^2 = (2/b^2) sum (m+1) (-1)^m (z/b)^{2m}.
            let mut shape = vec![0.0; len];
            let mut mm = 0usize;
            while 2 * mm < len {
                let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
                shape[2 * mm] = (mm as f64 + 1.0) * sign / b.powi(2 * mm as i32);
                mm += 1;
            }
            let shape_series = SeriesAtPoint::new(0.0, 0, shape, radius).scale(2.0 / (b * b));
            let inv = den_series.recip(order)?;
            let mut w = shape_series.multiply(&inv, order)?;
            w = w.scale(problem.potential_scale);
            Ok(w)
        }
    }
}

/// Frobenius expansion `t^n (1 + a_1 t + ...)` of the recessive solution at
/// the origin of the integration variable, with the log channel induced by
/// the pulled-back coefficient on the right side. Log-squared terms are
/// beyond the representation and dropped.
pub fn frobenius_origin_series(problem: &OdeProblem, order: usize) -> Result<SeriesAtPoint> {
    let order = order.min(60) as i32;
    let w = potential_origin_series(problem, order)?;
    let n = problem.n as f64;
    let nn = problem.n as i32;
    let len = (order + 1) as usize;
    let mut a = vec![0.0_f64; len];
    let mut bl = vec![0.0_f64; len];
    a[0] = 1.0;
    for k in 1..len {
        let m = n + k as f64;
        let indicial = m * m - n * n;
        let mut pow_sum = 0.0;
        let mut log_sum = 0.0;
        // The potential enters as t^2 W(t), so its coefficient at exponent i
        // is W's coefficient at i - 2; it multiplies a_{k-i}.
        for i in 2..=k {
            let (pi, li) = (w.coeff(i as i32 - 2), w.log_coeff(i as i32 - 2));
            pow_sum += pi * a[k - i];
            log_sum += pi * bl[k - i] + li * a[k - i];
        }
        bl[k] = log_sum / indicial;
        a[k] = (pow_sum - 2.0 * m * bl[k]) / indicial;
    }
    Ok(SeriesAtPoint::with_logs(0.0, nn, a, bl, 0.25))
}

fn output_grid(t0: f64, t_end: f64, samples: usize) -> Vec<f64> {
    // Log-spaced toward the origin on the lower half, geometric clustering
    // toward the matching point on the upper half.
    let half = (samples / 2).max(8);
    let mid = 0.5 * (t0 + t_end);
    let mut ts = Vec::with_capacity(2 * half + 2);
    for i in 0..half {
        let frac = i as f64 / half as f64;
        ts.push(t0 * (mid / t0).powf(frac));
    }
    let gap = t_end - mid;
    for i in 0..half {
        let frac = i as f64 / (half - 1) as f64;
        ts.push(t_end - gap * (1e-4_f64).powf(frac));
    }
    ts.push(mid);
    ts.push(t_end);
    ts.retain(|&t| t >= t0 && t <= t_end);
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup();
    ts
}

/// Integrate the recessive solution and normalize it to 1 at the matching
/// point. The returned samples are in the rescaled physical coordinate of
/// the problem's side.
pub fn integrate_radial(problem: &OdeProblem, start_offset: f64, grid: GridSpec) -> Result<RadialSolution> {
    if !(start_offset > 0.0 && start_offset < 0.1) {
        return Err(Error::domain(format!("start offset must lie in (0, 0.1), got {start_offset}")));
    }
    let limit_case = problem.epsilon == 0.0 && problem.potential_scale != 0.0;
    let t_end = if limit_case { 1.0 - LIMIT_POLE_OFFSET } else { 1.0 };
    if problem.potential_scale != 0.0 {
        problem.probe_denominator(t_end)?;
    }

    let (h0, dh0) = volterra_start(problem, start_offset);
    let tol = OdeTol { rel: grid.ode_rel_tol, abs: 1e-300 };
    let dense = ode::integrate(problem.rhs(), start_offset, t_end, [h0, dh0], tol)?;

    // Unnormalized value at the matching point.
    let (value_at_1, model_unscaled) = if limit_case {
        // Fit the local log model on [1 - 10 d, 1 - d].
        let d = LIMIT_POLE_OFFSET;
        let xs: Vec<f64> = (0..=60)
            .map(|i| {
                let frac = i as f64 / 60.0;
                let t = (1.0 - 10.0 * d) + frac * 9.0 * d;
                t - 1.0
            })
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&u| dense.eval(1.0 + u)[0]).collect();
        let coeffs = least_squares(&xs, &ys, |u| {
            let l = u.abs().ln();
            vec![1.0, u * l, u, u * u * l, u * u]
        })
        .ok_or_else(|| Error::domain("boundary model fit is singular"))?;
        let model = LogBoundaryModel { coeffs: [coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]] };
        (model.coeffs[0], Some(model))
    } else {
        (dense.y_end[0], None)
    };

    let sup = dense.eval(0.5 * (start_offset + t_end))[0].abs().max(value_at_1.abs());
    if value_at_1.abs() < 1e-12 * sup.max(1e-300) || value_at_1 == 0.0 {
        return Err(Error::DegenerateNormalization { value: value_at_1 });
    }
    let scale = 1.0 / value_at_1;
    let boundary_model = model_unscaled.map(|m| LogBoundaryModel {
        coeffs: [
            m.coeffs[0] * scale,
            m.coeffs[1] * scale,
            m.coeffs[2] * scale,
            m.coeffs[3] * scale,
            m.coeffs[4] * scale,
        ],
    });

    let series = frobenius_origin_series(problem, 40).ok();
    let mut sol = RadialSolution {
        problem: *problem,
        kind: SolutionKind::Principal,
        grid: Vec::new(),
        values: Vec::new(),
        derivatives: Vec::new(),
        origin_series: series,
        endpoint_value_at_1: value_at_1,
        boundary_model,
        dense,
        scale,
        t_start: start_offset,
        t_end,
    };

    let ts = output_grid(start_offset, t_end, grid.samples);
    let mut xs: Vec<f64> = ts
        .iter()
        .map(|&t| match problem.side {
            Side::Left => t,
            Side::Right => 1.0 / t,
        })
        .collect();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    sol.grid = xs.clone();
    sol.values = xs.iter().map(|&x| sol.eval(x)).collect();
    sol.derivatives = xs.iter().map(|&x| sol.eval_derivative(x)).collect();
    Ok(sol)
}

/// The companion solution at the matching point: vanishing value, unit
/// slope, analytic in the integration variable. Only the limit problem
/// (`eps = 0`) needs it, for Wronskian diagnostics.
pub fn second_solution(side: Side, n: u32, grid: GridSpec) -> Result<RadialSolution> {
    let problem = OdeProblem::new(side, n, 0.0, LAMBDA_0)?;
    // Leading local coefficients: g = u + g2 u^2 + O(u^3), where
    // g2 = (rho - 1)/2 and rho is the residue of the regular part at t = 1.
    let rho = match side {
        Side::Left => -crate::DVARPI0_AT_1 / C_SLOPE_AT_1,
        Side::Right => crate::DVARPI0_AT_1 / C_SLOPE_AT_1,
    };
    let g2 = 0.5 * (rho - 1.0);
    let delta = 1e-6;
    let u0 = -delta;
    let y0 = [u0 + g2 * u0 * u0, 1.0 + 2.0 * g2 * u0];
    let t_start = 1e-3;
    let t_end = 1.0 - delta;
    let tol = OdeTol { rel: grid.ode_rel_tol, abs: 1e-300 };
    let dense = ode::integrate(problem.rhs(), t_end, t_start, y0, tol)?;

    let mut sol = RadialSolution {
        problem,
        kind: SolutionKind::Companion,
        grid: Vec::new(),
        values: Vec::new(),
        derivatives: Vec::new(),
        origin_series: None,
        endpoint_value_at_1: 0.0,
        boundary_model: None,
        dense,
        scale: 1.0,
        t_start,
        t_end,
    };
    let ts = output_grid(t_start, t_end, grid.samples);
    let mut xs: Vec<f64> = ts
        .iter()
        .map(|&t| match side {
            Side::Left => t,
            Side::Right => 1.0 / t,
        })
        .collect();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    sol.grid = xs.clone();
    sol.values = xs.iter().map(|&x| sol.eval(x)).collect();
    sol.derivatives = xs.iter().map(|&x| sol.eval_derivative(x)).collect();
    Ok(sol)
}

/// Deviation of `x (a b' - a' b)` from its constant value 1.
#[derive(Debug, Clone, Copy)]
pub struct WronskianReport {
    pub max_deviation: f64,
    /// Orientation applied so the product tends to +1 at the matching point.
    pub orientation: f64,
    pub linearly_dependent: bool,
}

/// Evaluate the scaled Wronskian of two solutions over the overlap of their
/// dense ranges.
pub fn wronskian_report(a: &RadialSolution, b: &RadialSolution) -> Result<WronskianReport> {
    let (a_lo, a_hi) = a.x_range();
    let (b_lo, b_hi) = b.x_range();
    let lo = a_lo.max(b_lo);
    let hi = a_hi.min(b_hi);
    if !(hi > lo) {
        return Err(Error::GridMismatch);
    }
    let m = 200;
    let mut products = Vec::with_capacity(m);
    for i in 0..m {
        let x = lo * (hi / lo).powf(i as f64 / (m - 1) as f64);
        let w = a.eval(x) * b.eval_derivative(x) - a.eval_derivative(x) * b.eval(x);
        products.push(x * w);
    }
    let max_abs = products.iter().fold(0.0_f64, |acc, p| acc.max(p.abs()));
    if max_abs < 1e-8 {
        return Ok(WronskianReport { max_deviation: 1.0, orientation: 1.0, linearly_dependent: true });
    }
    // Orient by the sample nearest the matching point.
    let near_match = if (1.0 - hi).abs() < (1.0 - lo).abs() { products[m - 1] } else { products[0] };
    let orientation = near_match.signum();
    let max_deviation = products
        .iter()
        .fold(0.0_f64, |acc, p| acc.max((orientation * p - 1.0).abs()));
    Ok(WronskianReport { max_deviation, orientation, linearly_dependent: false })
}

/// Fixed-point oracle for the right-side limit solution in `z`.
#[derive(Debug, Clone)]
pub struct PicardOracle {
    pub z: Vec<f64>,
    /// `f` samples of the factorized solution `h = z^n f`.
    pub f: Vec<f64>,
    /// `z^n f(z)` samples.
    pub h: Vec<f64>,
    /// Successive-iterate distances in the weighted sup norm.
    pub deltas: Vec<f64>,
    /// A priori contraction bound of the fixed-point map.
    pub predicted_factor: f64,
}

/// Run the fixed-point iteration for the right-side limit problem on
/// `[0, a]`, `a < 1`, in the exponentially weighted sup norm with weight
/// `exp(-alpha z)`. Errors if the a priori factor fails to contract.
pub fn picard_oracle_right(n: u32, alpha_weight: f64, domain_cap: f64, iterations: usize) -> Result<PicardOracle> {
    if !(domain_cap > 0.0 && domain_cap < 1.0) {
        return Err(Error::domain(format!("domain cap must lie in (0,1), got {domain_cap}")));
    }
    let problem = OdeProblem::new(Side::Right, n, 0.0, LAMBDA_0)?;
    let m = 4000usize;
    let h = domain_cap / m as f64;
    let zs: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
    let w: Vec<f64> = zs.iter().map(|&z| problem.psi_tilde(z)).collect();
    let c_a = w.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let two_n = 2.0 * n as f64;

    // A priori factor: C(a)/(2n) * (S1 + S2) with
    // S1 = sup e^{-az} int_0^z y e^{ay} dy (closed form, increasing) and
    // S2 <= S1 since the extra weight (y/z)^{2n} is at most 1.
    let s1 = (alpha_weight * domain_cap - 1.0 + (-alpha_weight * domain_cap).exp())
        / (alpha_weight * alpha_weight);
    let predicted_factor = c_a / two_n * 2.0 * s1;
    if predicted_factor >= 1.0 {
        return Err(Error::ContractionFailed { factor: predicted_factor });
    }

    let weighted_norm = |g: &[f64]| -> f64 {
        g.iter()
            .zip(&zs)
            .fold(0.0_f64, |acc, (&v, &z)| acc.max(((-alpha_weight * z).exp() * v).abs()))
    };

    let mut f = vec![1.0_f64; m + 1];
    let mut deltas = Vec::new();
    for _ in 0..iterations {
        let prev = f.clone();
        // Cumulative Simpson for int W y f dy.
        let mut cum = vec![0.0_f64; m + 1];
        for j in 1..=m {
            let i = j - 1;
            // Trapezoid refinement with midpoint via Simpson on pairs.
            cum[j] = cum[i] + 0.5 * h * (w[i] * zs[i] * prev[i] + w[j] * zs[j] * prev[j]);
        }
        // Richardson-style correction: redo with Simpson where possible.
        let mut cum_s = vec![0.0_f64; m + 1];
        for j in (2..=m).step_by(2) {
            cum_s[j] = cum_s[j - 2]
                + h / 3.0
                    * (w[j - 2] * zs[j - 2] * prev[j - 2]
                        + 4.0 * w[j - 1] * zs[j - 1] * prev[j - 1]
                        + w[j] * zs[j] * prev[j]);
        }
        for j in (1..=m).step_by(2) {
            cum_s[j] = cum_s[j - 1] + (cum[j] - cum[j - 1]);
        }
        let mut next = vec![0.0_f64; m + 1];
        next[0] = 1.0;
        for j in 1..=m {
            let zj = zs[j];
            // second integral with the (y/z)^{2n} weight, Simpson in place.
            let g = |i: usize| w[i] * prev[i] * (zs[i] / zj).powi(2 * n as i32) * zs[i];
            let mut ib = 0.0;
            let pairs = j / 2;
            for p in 0..pairs {
                let i = 2 * p;
                ib += h / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
            }
            if j % 2 == 1 {
                ib += 0.5 * h * (g(j - 1) + g(j));
            }
            next[j] = 1.0 + (cum_s[j] - ib) / two_n;
        }
        let diff: Vec<f64> = next.iter().zip(&f).map(|(a, b)| a - b).collect();
        deltas.push(weighted_norm(&diff));
        f = next;
        if deltas.last().copied().unwrap_or(1.0) < 1e-13 {
            break;
        }
    }
    let h_samples: Vec<f64> = zs.iter().zip(&f).map(|(&z, &fv)| z.powi(n as i32) * fv).collect();
    Ok(PicardOracle { z: zs, f, h: h_samples, deltas, predicted_factor })
}

/// Max deviation of the dense solution from the governing equation, using a
/// finite-difference second derivative as the independent route.
pub fn ode_residual_max(sol: &RadialSolution, points: usize) -> f64 {
    let (lo, hi) = (sol.t_start * 1.5, 0.9 * sol.t_end);
    let n2 = (sol.problem.n as f64).powi(2);
    let mut worst = 0.0_f64;
    for i in 0..points {
        let t = lo * (hi / lo).powf(i as f64 / (points - 1) as f64);
        let d = 1e-5 * t.max(0.05);
        let hm = sol.eval_t(t - d);
        let h0 = sol.eval_t(t);
        let hp = sol.eval_t(t + d);
        let d2 = (hp - 2.0 * h0 + hm) / (d * d);
        let d1 = sol.eval_t_derivative(t);
        let rhs = -d1 / t + (n2 / (t * t) + sol.problem.psi_tilde(t)) * h0;
        let resid = (d2 - rhs).abs() / (1.0 + rhs.abs());
        worst = worst.max(resid);
    }
    worst
}
