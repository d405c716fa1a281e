//! Exact binomial tail probabilities.
//!
//! Probabilities are accumulated from a log-domain anchor at the
//! threshold term and the stable ratio recurrence
//! `pmf(k+1) = pmf(k) * (m-k)/(k+1) * q/(1-q)`, which keeps the
//! summation accurate to ~1e-15 for the `m` up to a few thousand used
//! here.

use crate::error::{Error, Result};

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn ln_choose(m: u64, k: u64) -> f64 {
    ln_factorial(m) - ln_factorial(k) - ln_factorial(m - k)
}

/// Probability mass `P(X = k)` for `X ~ Binomial(m, q)`.
pub fn binom_pmf(m: u64, q: f64, k: u64) -> f64 {
    if k > m {
        return 0.0;
    }
    if q <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q >= 1.0 {
        return if k == m { 1.0 } else { 0.0 };
    }
    let ln_p = ln_choose(m, k) + k as f64 * q.ln() + (m - k) as f64 * (-q).ln_1p();
    ln_p.exp()
}

/// Upper tail `P(X >= k)` for `X ~ Binomial(m, q)`.
pub fn binom_tail(m: u64, q: f64, k: u64) -> Result<f64> {
    check(m, q, k)?;
    if k == 0 {
        return Ok(1.0);
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let ratio = q / (1.0 - q);
    let mut pmf = binom_pmf(m, q, k);
    let mut total = pmf;
    for i in k..m {
        pmf *= (m - i) as f64 / (i + 1) as f64 * ratio;
        total += pmf;
    }
    Ok(total.min(1.0))
}

/// Lower tail `P(X <= k)` for `X ~ Binomial(m, q)`.
pub fn binom_lower_tail(m: u64, q: f64, k: u64) -> Result<f64> {
    check(m, q, k)?;
    if k == m {
        return Ok(1.0);
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    if q == 1.0 {
        return Ok(0.0);
    }
    let ratio = (1.0 - q) / q;
    let mut pmf = binom_pmf(m, q, k);
    let mut total = pmf;
    for i in (1..=k).rev() {
        pmf *= i as f64 / (m - i + 1) as f64 * ratio;
        total += pmf;
    }
    Ok(total.min(1.0))
}

fn check(m: u64, q: f64, k: u64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) || q.is_nan() {
        return Err(Error::Domain(format!("q = {q} not in [0, 1]")));
    }
    if k > m {
        return Err(Error::Domain(format!("k = {k} exceeds m = {m}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert!((binom_tail(2, 0.5, 1).unwrap() - 0.75).abs() < 1e-15);
        assert!((binom_tail(17, 0.3, 0).unwrap() - 1.0).abs() < 1e-15);
        // All ten correct: 0.999^10.
        let all = binom_tail(10, 0.999, 10).unwrap();
        assert!((all - 0.999f64.powi(10)).abs() < 1e-15);
        assert!((all - 0.990044880).abs() < 1e-9);
    }

    #[test]
    fn out_of_range_inputs() {
        assert!(binom_tail(5, -0.1, 1).is_err());
        assert!(binom_tail(5, 1.1, 1).is_err());
        assert!(binom_tail(5, 0.5, 6).is_err());
    }

    #[test]
    fn degenerate_probabilities() {
        assert_eq!(binom_tail(5, 0.0, 0).unwrap(), 1.0);
        assert_eq!(binom_tail(5, 0.0, 1).unwrap(), 0.0);
        assert_eq!(binom_tail(5, 1.0, 5).unwrap(), 1.0);
        assert_eq!(binom_lower_tail(5, 1.0, 4).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn tails_sum_to_one(m in 1u64..2000, q in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
            let k = ((m as f64) * frac).round() as u64;
            prop_assume!(k >= 1);
            let upper = binom_tail(m, q, k).unwrap();
            let lower = binom_lower_tail(m, q, k - 1).unwrap();
            prop_assert!((upper + lower - 1.0).abs() < 1e-12);
        }
    }
}
