//! Least-squares slope of log y against log x.

use crate::error::{Error, Result};

/// Fit `log y = s * log x + b` by least squares and return `s`.
///
/// Needs at least two points with distinct x; all coordinates must be
/// strictly positive.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Domain(format!("need >= 2 points, got {}", points.len())));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::Domain(format!("nonpositive point ({x}, {y})")));
        }
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::Domain("all x coincide; slope undefined".into()));
    }
    Ok((n * sxy - sx * sy) / denom)
}
