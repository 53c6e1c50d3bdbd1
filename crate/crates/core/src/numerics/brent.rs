//! Brent's method for bracketed scalar root finding.
//!
//! Inverse quadratic interpolation with a bisection fallback, after the
//! classic treatment in Numerical Recipes. The iterate never leaves the
//! initial bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct BrentResult {
    pub root: f64,
    pub f_root: f64,
    pub iterations: usize,
}

/// Find a root of `f` in `[lo, hi]`, requiring a sign change over the bracket.
///
/// `tol` is an absolute tolerance on the root location; a machine-precision
/// relative term is always added.
pub fn brent_root<F: FnMut(f64) -> f64>(mut f: F, bracket: (f64, f64), tol: f64, max_iter: usize) -> Result<BrentResult> {
    let (lo, hi) = bracket;
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(BrentResult { root: a, f_root: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(BrentResult { root: b, f_root: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { f_lo: fa, f_hi: fb });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    let eps = f64::EPSILON;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * eps * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(BrentResult { root: b, f_root: fb, iterations: iter });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::RootMaxIterations { max_iter })
}
