//! The base vortex `(1+r^2)^{-1}`, its plateaued modification, the
//! angular-velocity coefficient `c(r)` and the rescaled one-sided
//! coefficients with their closed-form epsilon expansions.

use crate::error::{Error, Result};
use crate::numerics::fit::golden_max;
use crate::EPSILON_MAX;

/// Which side of the plateau a rescaled coefficient lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    /// Rescaled domain `[0, 1]`, physical radii `r = x (1 - eps/2)`.
    Left,
    /// Rescaled domain `[1, +inf)`, physical radii `r = x (1 + eps/2)`.
    Right,
}

impl Side {
    /// The rescaling factor `1 -/+ eps/2`.
    pub fn scale(self, epsilon: f64) -> f64 {
        match self {
            Side::Left => 1.0 - 0.5 * epsilon,
            Side::Right => 1.0 + 0.5 * epsilon,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Quantity selector for [`eval_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileQuantity {
    Base,
    Perturbed,
    Derivative,
}

/// Derivative selector for [`SideCoefficient::eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffOrder {
    Value,
    DEps,
    DX,
    D2Eps,
}

/// `(1+r^2)^{-1}`.
pub fn varpi0(r: f64) -> f64 {
    1.0 / (1.0 + r * r)
}

/// `d/dr (1+r^2)^{-1} = -2r/(1+r^2)^2`.
pub fn dvarpi0(r: f64) -> f64 {
    let d = 1.0 + r * r;
    -2.0 * r / (d * d)
}

/// `d^2/dr^2 (1+r^2)^{-1}`.
pub fn d2varpi0(r: f64) -> f64 {
    let d = 1.0 + r * r;
    (6.0 * r * r - 2.0) / (d * d * d)
}

/// `-log(1+y^2)/(2 y^2)`, the shared closed form of both side coefficients
/// at `eps = 0`; series for small `y` avoids the 0/0.
pub fn c0(y: f64) -> f64 {
    let t = y * y;
    if y.abs() < 1e-3 {
        // log(1+t)/t = 1 - t/2 + t^2/3 - t^3/4 + ...
        -0.5 * (1.0 - t / 2.0 + t * t / 3.0 - t * t * t / 4.0)
    } else if y > 1e150 {
        -y.ln() / t
    } else {
        -t.ln_1p() / (2.0 * t)
    }
}

/// Taylor coefficients of `lambda0 + c0(x)` around `x = 1`, built from the
/// composition `log(1+x^2) = log 2 + log(1+u+u^2/2)` and `(1+u)^{-2}`.
/// The nearest singularities sit at `x = +-i`, giving radius `sqrt(2)`.
fn gap0_coefficients() -> &'static [f64] {
    use std::sync::OnceLock;
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let k = 32usize;
        // L(u) = log(1 + u + u^2/2), truncated.
        let mut w = vec![0.0; k + 1];
        w[1] = 1.0;
        w[2] = 0.5;
        let mut l = vec![0.0; k + 1];
        let mut w_pow = vec![0.0; k + 1];
        w_pow[0] = 1.0;
        for j in 1..=k {
            // w_pow <- w_pow * w, truncated.
            let mut next = vec![0.0; k + 1];
            for (i, &a) in w_pow.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (m, &b) in w.iter().enumerate() {
                    if b == 0.0 || i + m > k {
                        continue;
                    }
                    next[i + m] += a * b;
                }
            }
            w_pow = next;
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            for i in 0..=k {
                l[i] += sign * w_pow[i] / j as f64;
            }
        }
        // P(u) = (1+u)^{-2}.
        let p: Vec<f64> = (0..=k)
            .map(|i| if i % 2 == 0 { (i + 1) as f64 } else { -((i + 1) as f64) })
            .collect();
        // lambda0 + c0 = lambda0 - (log2/2) P - (1/2) L P.
        let mut lp = vec![0.0; k + 1];
        for i in 0..=k {
            for m in 0..=k - i {
                lp[i + m] += l[i] * p[m];
            }
        }
        let half_log2 = 0.5 * std::f64::consts::LN_2;
        let mut coeffs: Vec<f64> = (0..=k)
            .map(|i| -half_log2 * p[i] - 0.5 * lp[i])
            .collect();
        coeffs[0] = 0.0; // exact zero at the matching point
        coeffs[1] = crate::C_SLOPE_AT_1;
        coeffs
    })
}

/// `lambda0 + c0(x)`, evaluated without cancellation near the zero at `x=1`.
pub fn gap0(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() <= 0.25 {
        let c = gap0_coefficients();
        let mut acc = 0.0;
        for &ck in c.iter().rev() {
            acc = acc * u + ck;
        }
        acc
    } else {
        crate::LAMBDA_0 + c0(x)
    }
}

/// `gap0(x) - c1 (x-1)`: the quadratic-and-higher tail of the gap function.
pub fn gap0_tail(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() <= 0.25 {
        let c = gap0_coefficients();
        let mut acc = 0.0;
        for &ck in c.iter().rev().take(c.len() - 2) {
            acc = acc * u + ck;
        }
        acc * u * u
    } else {
        crate::LAMBDA_0 + c0(x) - crate::C_SLOPE_AT_1 * u
    }
}

/// `d/dy c0(y) = (1/y) (log(1+y^2)/y^2 - 1/(1+y^2))`, with a small-`y` series.
pub fn c0_prime(y: f64) -> f64 {
    let t = y * y;
    if y.abs() < 1e-3 {
        y * (0.5 - 2.0 * t / 3.0 + 0.75 * t * t)
    } else {
        (t.ln_1p() / t - 1.0 / (1.0 + t)) / y
    }
}

/// The plateaued vortex profile, parameterized by the plateau width.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct VortexProfile {
    pub epsilon: f64,
}

impl VortexProfile {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=EPSILON_MAX).contains(&epsilon) {
            return Err(Error::domain(format!(
                "epsilon must lie in [0, {EPSILON_MAX}], got {epsilon}"
            )));
        }
        Ok(VortexProfile { epsilon })
    }

    /// Inner plateau edge `1 - eps/2`.
    pub fn inner_edge(&self) -> f64 {
        1.0 - 0.5 * self.epsilon
    }

    /// Outer plateau edge `1 + eps/2`.
    pub fn outer_edge(&self) -> f64 {
        1.0 + 0.5 * self.epsilon
    }

    /// The constant `varpi0(1+eps/2) - varpi0(1-eps/2)` added on the core;
    /// equals `-32 eps / (64 + eps^4)`.
    pub fn shift(&self) -> f64 {
        -32.0 * self.epsilon / (64.0 + self.epsilon.powi(4))
    }

    /// Plateaued profile value.
    pub fn perturbed(&self, r: f64) -> f64 {
        let a = self.inner_edge();
        let b = self.outer_edge();
        if r <= a {
            varpi0(r) + self.shift()
        } else if r < b {
            varpi0(b)
        } else {
            varpi0(r)
        }
    }

    /// Radial derivative of the plateaued profile: `varpi0'` off the plateau,
    /// zero on the open plateau.
    pub fn perturbed_derivative(&self, r: f64) -> f64 {
        let a = self.inner_edge();
        let b = self.outer_edge();
        if r > a && r < b {
            0.0
        } else {
            dvarpi0(r)
        }
    }

    /// `int_0^r s varpi_eps(s) ds` via the three-branch closed form.
    pub fn partial_mass(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::domain(format!("radius must be non-negative, got {r}")));
        }
        let a = self.inner_edge();
        let b = self.outer_edge();
        let base = outer_log_half;
        let v = if r <= a {
            base(r) + 0.5 * r * r * self.shift()
        } else if r < b {
            base(a) + 0.5 * r * r * varpi0(b) - 0.5 * a * a * varpi0(a)
        } else {
            base(a) + base(r) - base(b) + 0.5 * (b * b * varpi0(b) - a * a * varpi0(a))
        };
        Ok(v)
    }

    /// `c(r) = -(1/r^2) int_0^r s varpi_eps ds`, extended continuously to 0.
    pub fn c_physical(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::domain(format!("radius must be non-negative, got {r}")));
        }
        if r < 1e-8 {
            return Ok(-0.5 * self.perturbed(0.0));
        }
        Ok(-self.partial_mass(r)? / (r * r))
    }

    /// `c'(r) = 2 m(r)/r^3 - varpi_eps(r)/r`; strictly positive for `r > 0`.
    pub fn c_prime(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::domain(format!("radius must be non-negative, got {r}")));
        }
        if r < 1e-6 {
            // c(r) = -(1+shift)/2 + r^2/4 + O(r^4) near the axis.
            return Ok(0.5 * r);
        }
        Ok(2.0 * self.partial_mass(r)? / (r * r * r) - self.perturbed(r) / r)
    }
}

/// Evaluate the base profile, the plateaued profile, or its derivative.
pub fn eval_profile(profile: &VortexProfile, r: f64, which: ProfileQuantity) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::domain(format!("radius must be non-negative, got {r}")));
    }
    Ok(match which {
        ProfileQuantity::Base => varpi0(r),
        ProfileQuantity::Perturbed => profile.perturbed(r),
        ProfileQuantity::Derivative => profile.perturbed_derivative(r),
    })
}

/// One-sided rescaled coefficient `c_L(x, eps)` / `c_R(x, eps)` together with
/// its epsilon- and x-derivatives. Values use the real-analytic closed forms,
/// so both sides extend beyond their nominal domains.
#[derive(Debug, Clone, Copy)]
pub struct SideCoefficient {
    pub side: Side,
    pub epsilon: f64,
}

impl SideCoefficient {
    pub fn new(side: Side, epsilon: f64) -> Result<Self> {
        if !(0.0..=EPSILON_MAX).contains(&epsilon) {
            return Err(Error::domain(format!(
                "epsilon must lie in [0, {EPSILON_MAX}], got {epsilon}"
            )));
        }
        Ok(SideCoefficient { side, epsilon })
    }

    fn value_at(&self, x: f64, epsilon: f64) -> f64 {
        let y = x * self.side.scale(epsilon);
        match self.side {
            // c_L = 16 eps/(64 + eps^4) + c0(y), y = x (1 - eps/2).
            Side::Left => 16.0 * epsilon / (64.0 + epsilon.powi(4)) + c0(y),
            // c_R = -(1/y^2) m3(y) with the outer-branch mass continued to all y > 0.
            Side::Right => {
                if y > 1e100 {
                    return 0.0;
                }
                let a = 1.0 - 0.5 * epsilon;
                let b = 1.0 + 0.5 * epsilon;
                let m3 = 0.5 * (a * a).ln_1p() - 0.5 * (b * b).ln_1p()
                    + 0.5 * (b * b * varpi0(b) - a * a * varpi0(a))
                    + outer_log_half(y);
                -m3 / (y * y)
            }
        }
    }

    /// Evaluate the coefficient or one of its derivatives at rescaled `x`.
    pub fn eval(&self, x: f64, order: CoeffOrder) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::domain(format!("rescaled coordinate must be non-negative, got {x}")));
        }
        if self.side == Side::Right && x == 0.0 {
            return Err(Error::domain("right coefficient is singular at x = 0"));
        }
        match order {
            CoeffOrder::Value => Ok(self.value_at(x, self.epsilon)),
            CoeffOrder::DX => {
                let s = self.side.scale(self.epsilon);
                let y = x * s;
                match self.side {
                    Side::Left => Ok(s * c0_prime(y)),
                    Side::Right => {
                        // d/dy of -(m3/y^2) = 2 m3/y^3 - varpi0(y)/y, times the scale.
                        let v = self.value_at(x, self.epsilon);
                        Ok(s * (-2.0 * v / y - varpi0(y) / y))
                    }
                }
            }
            CoeffOrder::DEps => {
                // Central difference in eps; exact closed forms exist at eps = 0
                // and are pinned by tests through this same entry point.
                let h = 1e-5;
                let lo = self.value_at(x, self.epsilon - h);
                let hi = self.value_at(x, self.epsilon + h);
                Ok((hi - lo) / (2.0 * h))
            }
            CoeffOrder::D2Eps => {
                match self.side {
                    Side::Left if x > 1.75 => {
                        return Err(Error::domain(format!(
                            "second epsilon derivative of the left coefficient is only controlled for x <= 7/4, got {x}"
                        )))
                    }
                    Side::Right if x < 0.25 => {
                        return Err(Error::domain(format!(
                            "second epsilon derivative of the right coefficient is only controlled for x >= 1/4, got {x}"
                        )))
                    }
                    _ => {}
                }
                let h = 1e-4;
                let mid = self.value_at(x, self.epsilon);
                let lo = self.value_at(x, self.epsilon - h);
                let hi = self.value_at(x, self.epsilon + h);
                Ok((hi - 2.0 * mid + lo) / (h * h))
            }
        }
    }
}

/// `0.5 log(1 + y^2)` with protection against overflow of `y^2`.
fn outer_log_half(y: f64) -> f64 {
    if y > 1e150 {
        y.ln()
    } else {
        0.5 * (y * y).ln_1p()
    }
}

/// Exact `d/deps c_L(x, 0) = 1/4 + 1/(2(1+x^2)) - log(1+x^2)/(2x^2)`.
pub fn dcl_deps_at_zero(x: f64) -> f64 {
    0.25 + 0.5 * varpi0(x) + c0(x)
}

/// Exact `d/deps c_R(x, 0) = -1/(4x^2) + 1/(2x^2(1+x^2)) + log(1+x^2)/(2x^2)`.
pub fn dcr_deps_at_zero(x: f64) -> f64 {
    -0.25 / (x * x) + 0.5 * varpi0(x) / (x * x) - c0(x)
}

/// The open interval of admissible rotation speeds `(-c_R(1,eps), -c_L(1,eps))`.
///
/// Empty exactly at `eps = 0`, where both endpoints collapse to `log(2)/2`.
pub fn lambda_bracket(epsilon: f64) -> Result<(f64, f64)> {
    if epsilon == 0.0 {
        return Err(Error::EmptyBracket);
    }
    if !(0.0..=EPSILON_MAX).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, {EPSILON_MAX}], got {epsilon}"
        )));
    }
    let cl = SideCoefficient::new(Side::Left, epsilon)?.eval(1.0, CoeffOrder::Value)?;
    let cr = SideCoefficient::new(Side::Right, epsilon)?.eval(1.0, CoeffOrder::Value)?;
    debug_assert!(cl < cr);
    Ok((-cr, -cl))
}

/// Maximum of `|varpi0'|`, located by golden-section search (`3 sqrt(3)/8` at
/// `r = 1/sqrt(3)`).
pub fn sup_abs_dvarpi0() -> (f64, f64) {
    golden_max(|r| dvarpi0(r).abs(), 0.05, 2.0, 1e-13)
}

/// Components of the Hoelder-distance estimate between the base and the
/// plateaued profile.
#[derive(Debug, Clone, Copy)]
pub struct HolderReport {
    pub sup_norm: f64,
    pub seminorm: f64,
    /// The Hoelder norm `max(sup, seminorm)`.
    pub c_alpha: f64,
    /// The closed-form bound `sup|varpi0'| * eps^(1-alpha)`.
    pub bound: f64,
}

/// Estimate the `C^alpha` distance between `varpi0` and `varpi_eps` on a
/// graded grid (dense near the plateau edges, where the supremum of the
/// difference quotient is attained).
pub fn holder_distance(epsilon: f64, alpha: f64, grid_resolution: usize) -> Result<HolderReport> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if epsilon < 0.0 || epsilon > EPSILON_MAX {
        return Err(Error::domain(format!("epsilon must lie in [0, {EPSILON_MAX}], got {epsilon}")));
    }
    let profile = VortexProfile::new(epsilon)?;
    let a = profile.inner_edge();
    let b = profile.outer_edge();
    let diff = |r: f64| varpi0(r) - profile.perturbed(r);

    let n_backbone = grid_resolution.max(16);
    let mut grid: Vec<f64> = (0..=n_backbone)
        .map(|i| 2.5 * i as f64 / n_backbone as f64)
        .collect();
    // Geometric clusters toward both plateau edges from either side.
    let mut w = 0.5 * epsilon.max(1e-12);
    for _ in 0..24 {
        for edge in [a, b] {
            grid.push(edge - w);
            grid.push(edge + w);
        }
        w *= 0.5;
    }
    grid.push(a);
    grid.push(b);
    grid.retain(|&r| r >= 0.0);
    grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    grid.dedup();

    let values: Vec<f64> = grid.iter().map(|&r| diff(r)).collect();
    let sup_norm = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut seminorm = 0.0_f64;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let dr = grid[j] - grid[i];
            if dr <= 0.0 {
                continue;
            }
            let q = (values[j] - values[i]).abs() / dr.powf(alpha);
            seminorm = seminorm.max(q);
        }
    }
    let (_, m) = sup_abs_dvarpi0();
    Ok(HolderReport {
        sup_norm,
        seminorm,
        c_alpha: sup_norm.max(seminorm),
        bound: m * epsilon.powf(1.0 - alpha),
    })
}

/// Zero of `lambda + c_side(x, eps)` on the analytically extended domain
/// nearest the matching point: below 1 for the right side, above 1 for the
/// left side. (The far continuation may pick up an additional spurious sign
/// change at larger eps; only the near zero is meaningful.)
pub fn extended_zero(side: Side, lambda: f64, epsilon: f64) -> Result<f64> {
    let coeff = SideCoefficient::new(side, epsilon)?;
    let f = |x: f64| lambda + coeff.eval(x, CoeffOrder::Value).unwrap_or(f64::NAN);
    let step = match side {
        Side::Right => -1e-3,
        Side::Left => 1e-3,
    };
    let mut prev = 1.0;
    let mut fprev = f(prev);
    for i in 1..=700 {
        let x = 1.0 + step * i as f64;
        let fx = f(x);
        if fx.signum() != fprev.signum() {
            let bracket = if prev < x { (prev, x) } else { (x, prev) };
            let r = crate::numerics::brent_root(f, bracket, 1e-13, 200)?;
            return Ok(r.root);
        }
        prev = x;
        fprev = fx;
    }
    Err(Error::NoSignChange { f_lo: f(1.0), f_hi: fprev })
}
