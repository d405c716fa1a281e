//! Bisection root finding.

use crate::error::{Error, Result};

/// Find a root of `f` on `[lo, hi]` by bisection.
///
/// Requires a sign change (`f(lo) * f(hi) <= 0`) and `tol > 0`; the
/// returned midpoint is within `tol` of a root. Deterministic: the
/// bracket halves every iteration.
pub fn find_root_bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol = {tol} must be > 0")));
    }
    if !(lo < hi) {
        return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    let mut lo = lo;
    let mut hi = hi;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracketing { lo, hi, flo, fhi });
    }
    let mut width = hi - lo;
    while width > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at f64 resolution
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        let new_width = hi - lo;
        debug_assert!(new_width <= 0.5 * width * (1.0 + 1e-15));
        width = new_width;
    }
    Ok(0.5 * (lo + hi))
}
