//! Truncated power series with an optional logarithmic channel.
//!
//! A series represents
//!
//! ```text
//! sum_k a_k (x - x0)^k  +  log|x - x0| * sum_k b_k (x - x0)^k,   k = k_min .. k_min + len - 1
//! ```
//!
//! which covers both the `x^{pm n}` expansions at the origin and the
//! resonant `(x-1) log|x-1|` expansions at the interior singular point.
//! Arithmetic is truncated at a fixed order; products of two series that both
//! carry a log channel are rejected (a `log^2` channel is never needed here).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SeriesAtPoint {
    pub center: f64,
    /// Leading exponent of both coefficient sequences.
    pub k_min: i32,
    /// Coefficients of `(x - center)^k`.
    pub powers: Vec<f64>,
    /// Coefficients of `(x - center)^k * log|x - center|`; all zero when no
    /// logarithmic part is present.
    pub logs: Vec<f64>,
    /// Evaluation radius recorded for the truncation.
    pub radius: f64,
}

impl SeriesAtPoint {
    pub fn new(center: f64, k_min: i32, powers: Vec<f64>, radius: f64) -> Self {
        let n = powers.len();
        SeriesAtPoint { center, k_min, powers, logs: vec![0.0; n], radius }
    }

    pub fn with_logs(center: f64, k_min: i32, powers: Vec<f64>, logs: Vec<f64>, radius: f64) -> Self {
        assert_eq!(powers.len(), logs.len());
        SeriesAtPoint { center, k_min, powers, logs, radius }
    }

    pub fn constant(value: f64, center: f64, radius: f64) -> Self {
        SeriesAtPoint::new(center, 0, vec![value], radius)
    }

    pub fn truncation_order(&self) -> i32 {
        self.k_min + self.powers.len() as i32 - 1
    }

    pub fn has_log_part(&self) -> bool {
        self.logs.iter().any(|&b| b != 0.0)
    }

    /// Coefficient of `(x-center)^k` in the power channel (0 outside range).
    pub fn coeff(&self, k: i32) -> f64 {
        let idx = k - self.k_min;
        if idx < 0 || idx as usize >= self.powers.len() {
            0.0
        } else {
            self.powers[idx as usize]
        }
    }

    pub fn log_coeff(&self, k: i32) -> f64 {
        let idx = k - self.k_min;
        if idx < 0 || idx as usize >= self.logs.len() {
            0.0
        } else {
            self.logs[idx as usize]
        }
    }

    /// Evaluate at `x`, including the log channel. Errors outside the radius.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let u = x - self.center;
        if u.abs() > self.radius {
            return Err(Error::SeriesOutOfRadius { x, center: self.center, radius: self.radius });
        }
        // Horner on the non-negative part, explicit powers for k_min < 0.
        let mut pow_sum = 0.0;
        let mut log_sum = 0.0;
        for i in (0..self.powers.len()).rev() {
            pow_sum = pow_sum * u + self.powers[i];
            log_sum = log_sum * u + self.logs[i];
        }
        let lead = if self.k_min == 0 {
            1.0
        } else {
            u.powi(self.k_min)
        };
        let log_term = if log_sum == 0.0 || u == 0.0 {
            // u = 0 only contributes through k = 0 of the power channel.
            0.0
        } else {
            log_sum * u.abs().ln()
        };
        Ok(lead * (pow_sum + log_term))
    }

    /// Term-by-term derivative; the log channel differentiates into both
    /// channels (`d/dx u^k log u = k u^{k-1} log u + u^{k-1}`).
    pub fn derivative(&self) -> SeriesAtPoint {
        let n = self.powers.len();
        let mut powers = vec![0.0; n];
        let mut logs = vec![0.0; n];
        for i in 0..n {
            let k = (self.k_min + i as i32) as f64;
            powers[i] = k * self.powers[i] + self.logs[i];
            logs[i] = k * self.logs[i];
        }
        SeriesAtPoint { center: self.center, k_min: self.k_min - 1, powers, logs, radius: self.radius }
    }

    fn check_center(&self, other: &SeriesAtPoint) -> Result<()> {
        if self.center != other.center {
            return Err(Error::SeriesCenterMismatch { a: self.center, b: other.center });
        }
        Ok(())
    }

    pub fn add(&self, other: &SeriesAtPoint) -> Result<SeriesAtPoint> {
        self.check_center(other)?;
        let k_min = self.k_min.min(other.k_min);
        let upper = self.truncation_order().max(other.truncation_order());
        let len = (upper - k_min + 1).max(1) as usize;
        let mut powers = vec![0.0; len];
        let mut logs = vec![0.0; len];
        for (i, p) in powers.iter_mut().enumerate() {
            let k = k_min + i as i32;
            *p = self.coeff(k) + other.coeff(k);
        }
        for (i, l) in logs.iter_mut().enumerate() {
            let k = k_min + i as i32;
            *l = self.log_coeff(k) + other.log_coeff(k);
        }
        Ok(SeriesAtPoint { center: self.center, k_min, powers, logs, radius: self.radius.min(other.radius) })
    }

    pub fn scale(&self, factor: f64) -> SeriesAtPoint {
        let mut out = self.clone();
        for a in &mut out.powers {
            *a *= factor;
        }
        for b in &mut out.logs {
            *b *= factor;
        }
        out
    }

    /// Truncated product. At most one factor may carry a log channel.
    pub fn multiply(&self, other: &SeriesAtPoint, order: i32) -> Result<SeriesAtPoint> {
        self.check_center(other)?;
        if self.has_log_part() && other.has_log_part() {
            return Err(Error::SeriesLogProduct);
        }
        let k_min = self.k_min + other.k_min;
        let len = (order - k_min + 1).max(0) as usize;
        let mut powers = vec![0.0; len];
        let mut logs = vec![0.0; len];
        for (i, &a) in self.powers.iter().enumerate() {
            let ka = self.k_min + i as i32;
            for (j, &b) in other.powers.iter().enumerate() {
                let k = ka + other.k_min + j as i32;
                let idx = k - k_min;
                if idx >= 0 && (idx as usize) < len {
                    powers[idx as usize] += a * b;
                }
            }
            for (j, &b) in other.logs.iter().enumerate() {
                let k = ka + other.k_min + j as i32;
                let idx = k - k_min;
                if idx >= 0 && (idx as usize) < len {
                    logs[idx as usize] += a * b;
                }
            }
        }
        for (i, &al) in self.logs.iter().enumerate() {
            if al == 0.0 {
                continue;
            }
            let ka = self.k_min + i as i32;
            for (j, &b) in other.powers.iter().enumerate() {
                let k = ka + other.k_min + j as i32;
                let idx = k - k_min;
                if idx >= 0 && (idx as usize) < len {
                    logs[idx as usize] += al * b;
                }
            }
        }
        Ok(SeriesAtPoint { center: self.center, k_min, powers, logs, radius: self.radius.min(other.radius) })
    }

    /// Truncated reciprocal of a series with non-vanishing constant term.
    /// The log channel is carried to first order; induced `log^2` terms are
    /// beyond the truncation model and dropped.
    pub fn recip(&self, order: i32) -> Result<SeriesAtPoint> {
        if self.k_min < 0 {
            return Err(Error::domain("series reciprocal of a pole is not supported"));
        }
        if self.coeff(0) == 0.0 {
            return Err(Error::domain("series reciprocal requires a non-zero constant term"));
        }
        let a0 = self.powers[0];
        let len = (order + 1).max(1) as usize;
        let mut inv_pow = vec![0.0; len];
        inv_pow[0] = 1.0 / a0;
        for k in 1..len {
            let mut s = 0.0;
            for j in 1..=k.min(self.powers.len() - 1) {
                s += self.powers[j] * inv_pow[k - j];
            }
            inv_pow[k] = -s / a0;
        }
        // First-order log correction: 1/(P + L log) ~ 1/P - (L/P^2) log.
        let mut logs = vec![0.0; len];
        if self.has_log_part() {
            // L/P^2 = L * inv * inv, truncated.
            let inv = SeriesAtPoint::new(self.center, 0, inv_pow.clone(), self.radius);
            let l_series = SeriesAtPoint::new(self.center, self.k_min, self.logs.clone(), self.radius);
            let tmp = l_series.multiply(&inv, order)?.multiply(&inv, order)?;
            for (i, l) in logs.iter_mut().enumerate() {
                *l = -tmp.coeff(i as i32);
            }
        }
        Ok(SeriesAtPoint { center: self.center, k_min: 0, powers: inv_pow, logs, radius: self.radius })
    }

    /// Multiply by `(x - center)^shift` (pure exponent bookkeeping).
    pub fn shift_exponent(&self, shift: i32) -> SeriesAtPoint {
        let mut out = self.clone();
        out.k_min += shift;
        out
    }
}
