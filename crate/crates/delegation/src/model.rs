//! Problem parameters, the error/accuracy curve, and the agent's best
//! response to linear contracts.
//!
//! A delegation instance is five scalars: the optimal-error fraction
//! `theta`, the curve scale `d` and decay exponent `p` of the expected
//! accuracy `1 - theta - d/n^p`, the agent's per-sample cost `alpha`, and
//! the principal's payment weight `beta`. Everything else in the crate is
//! built on top of these primitives.

use crate::error::{Error, Result};

/// The five scalars defining one delegation instance.
///
/// Invariants: `0 <= theta < 1`; `d`, `p`, `alpha`, `beta` strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    /// Optimal-error fraction in `[0, 1)`.
    pub theta: f64,
    /// Curve scale (dimensionless), `> 0`.
    pub d: f64,
    /// Decay exponent of the excess error, `> 0`.
    pub p: f64,
    /// Agent cost per sample (currency/sample), `> 0`.
    pub alpha: f64,
    /// Principal's payment weight (utility/currency), `> 0`.
    pub beta: f64,
}

impl ProblemParams {
    pub fn new(theta: f64, d: f64, p: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta = {theta} not in [0, 1)")));
        }
        for (name, v) in [("d", d), ("p", p), ("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(Self { theta, d, p, alpha, beta })
    }

    /// Same instance with a different optimal error.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(theta, self.d, self.p, self.alpha, self.beta)
    }
}

/// The agent's best response to a linear contract.
#[derive(Debug, Clone, Copy)]
pub struct AgentResponse {
    /// Chosen sample count (continuous; `>= 0`).
    pub n: f64,
    /// Expected accuracy `1 - theta - d/n^p` (negative infinity at `n = 0`).
    pub expected_accuracy: f64,
    /// Expected payment, clamped at zero (contracts cannot pay negative amounts).
    pub expected_payment: f64,
    /// `c * (1 - theta - d/n^p) - alpha * n`.
    pub agent_utility: f64,
    /// `agent_utility >= 0`.
    pub participates: bool,
}

/// Principal-side utility accounting for one contract on one instance.
#[derive(Debug, Clone, Copy)]
pub struct UtilityReport {
    pub principal_utility: f64,
    pub agent_utility: f64,
    pub first_best_utility: f64,
    /// `principal_utility / first_best_utility`; `None` when the benchmark
    /// is not positive.
    pub ratio_to_first_best: Option<f64>,
    pub participates: bool,
}

/// Expected accuracy of a classifier trained on `n > 0` samples.
pub fn expected_accuracy(n: f64, params: &ProblemParams) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::Domain(format!("expected_accuracy needs n > 0, got {n}")));
    }
    Ok(1.0 - params.theta - params.d / n.powf(params.p))
}

/// The agent's utility from collecting `n` samples under slope `c`,
/// `c * a(n) - alpha * n`. Shared by the best-response formula and the
/// grid oracles in the tests.
pub fn agent_utility_at(n: f64, c: f64, params: &ProblemParams) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    c * (1.0 - params.theta - params.d / n.powf(params.p)) - params.alpha * n
}

/// Maximizer of the agent's utility under a linear contract:
/// `n(c) = (c d p / alpha)^{1/(p+1)}`.
pub fn best_response_samples(c: f64, params: &ProblemParams) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    (c * params.d * params.p / params.alpha).powf(1.0 / (params.p + 1.0))
}

/// Best response of the agent to a `c`-linear contract.
///
/// `c = 0` yields no effort and zero utility (the agent still
/// participates: opting out is worth the same).
pub fn agent_best_response_linear(c: f64, params: &ProblemParams) -> Result<AgentResponse> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("contract slope c = {c} must be >= 0")));
    }
    if c == 0.0 {
        return Ok(AgentResponse {
            n: 0.0,
            expected_accuracy: f64::NEG_INFINITY,
            expected_payment: 0.0,
            agent_utility: 0.0,
            participates: true,
        });
    }
    let n = best_response_samples(c, params);
    let accuracy = 1.0 - params.theta - params.d / n.powf(params.p);
    let utility = c * accuracy - params.alpha * n;
    Ok(AgentResponse {
        n,
        expected_accuracy: accuracy,
        expected_payment: (c * accuracy).max(0.0),
        agent_utility: utility,
        participates: utility >= 0.0,
    })
}

/// Principal's expected utility from a `c`-linear contract against the
/// best-responding agent: `(1 - beta c)(1 - theta - (alpha d^{1/p}/(p c))^{p/(p+1)})`
/// when the agent participates, zero otherwise.
pub fn principal_utility_linear(c: f64, params: &ProblemParams) -> Result<UtilityReport> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("contract slope c = {c} must be >= 0")));
    }
    let (_, _, first_best_utility) = crate::single_round::first_best(params);
    let response = agent_best_response_linear(c, params)?;
    let principal_utility = if c > 0.0 && response.participates {
        let excess = (params.alpha * params.d.powf(1.0 / params.p) / (params.p * c))
            .powf(params.p / (params.p + 1.0));
        (1.0 - params.beta * c) * (1.0 - params.theta - excess)
    } else {
        0.0
    };
    let ratio = if first_best_utility > 0.0 {
        Some(principal_utility / first_best_utility)
    } else {
        None
    };
    Ok(UtilityReport {
        principal_utility,
        agent_utility: response.agent_utility,
        first_best_utility,
        ratio_to_first_best: ratio,
        participates: response.participates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_round;
    use proptest::prelude::*;

    fn baseline() -> ProblemParams {
        ProblemParams::new(0.0, 0.01, 1.0, 1e-4, 1.0).unwrap()
    }

    #[test]
    fn accuracy_curve_values() {
        let params = baseline();
        assert!((expected_accuracy(10.0, &params).unwrap() - 0.999).abs() < 1e-12);
        assert!((expected_accuracy(1.0, &params).unwrap() - 0.99).abs() < 1e-12);
        // Asymptote is 1 - theta.
        let shifted = params.with_theta(0.3).unwrap();
        let far = expected_accuracy(1e12, &shifted).unwrap();
        assert!((far - 0.7).abs() < 1e-11);
        assert!(expected_accuracy(0.0, &params).is_err());
        assert!(expected_accuracy(-1.0, &params).is_err());
    }

    #[test]
    fn accuracy_concave_on_log_grid() {
        let params = ProblemParams::new(0.1, 0.05, 0.7, 1e-4, 1.0).unwrap();
        for i in 0..200 {
            let n = 10f64.powf(-1.0 + 4.0 * i as f64 / 199.0);
            let h = 1e-4 * n;
            let f = |x: f64| expected_accuracy(x, &params).unwrap();
            let second = (f(n + h) - 2.0 * f(n) + f(n - h)) / (h * h);
            assert!(second <= 1e-9, "second difference {second} at n = {n}");
        }
    }

    #[test]
    fn best_response_worked_example() {
        // Grid search over n in (0, 100] at step 1e-4 confirms the maximizer.
        let params = baseline();
        let resp = agent_best_response_linear(0.25, &params).unwrap();
        assert!((resp.n - 5.0).abs() < 1e-12);
        assert!((resp.expected_accuracy - 0.998).abs() < 1e-12);
        assert!((resp.agent_utility - 0.249).abs() < 1e-12);
        assert!(resp.participates);

        let mut best_u = f64::NEG_INFINITY;
        let mut best_n = 0.0;
        let mut n = 1e-4;
        while n <= 100.0 {
            let u = agent_utility_at(n, 0.25, &params);
            if u > best_u {
                best_u = u;
                best_n = n;
            }
            n += 1e-4;
        }
        assert!((best_n - resp.n).abs() < 2e-4, "grid argmax {best_n} vs formula {}", resp.n);
        assert!(resp.agent_utility >= best_u - 1e-12);
    }

    #[test]
    fn zero_slope_response() {
        let resp = agent_best_response_linear(0.0, &baseline()).unwrap();
        assert_eq!(resp.n, 0.0);
        assert_eq!(resp.agent_utility, 0.0);
        assert!(resp.participates);
    }

    #[test]
    fn just_below_participation_threshold_opts_out() {
        let params = baseline();
        let c2 = single_round::participation_threshold(&params);
        let resp = agent_best_response_linear(c2 * (1.0 - 1e-9), &params).unwrap();
        assert!(!resp.participates, "utility {}", resp.agent_utility);
        let at = agent_best_response_linear(c2 * (1.0 + 1e-9), &params).unwrap();
        assert!(at.participates);
    }

    #[test]
    fn principal_utility_worked_example() {
        let params = baseline();
        let report = principal_utility_linear(0.25, &params).unwrap();
        assert!((report.principal_utility - 0.7485).abs() < 1e-12);
        assert!((report.ratio_to_first_best.unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn principal_utility_vanishes_at_c_equal_inverse_beta() {
        let params = baseline();
        let report = principal_utility_linear(1.0 / params.beta, &params).unwrap();
        assert!(report.principal_utility.abs() < 1e-15);
    }

    #[test]
    fn principal_utility_zero_below_threshold() {
        let params = baseline();
        let c2 = single_round::participation_threshold(&params);
        let report = principal_utility_linear(c2 * 0.5, &params).unwrap();
        assert_eq!(report.principal_utility, 0.0);
        assert!(!report.participates);
    }

    #[test]
    fn expected_payment_under_binomial_test_is_test_size_free() {
        // With test accuracy Binomial(m, a(n))/m the expected payment is
        // c * a(n) for every m, so the best response cannot depend on m.
        let params = baseline();
        let c = 0.25;
        for n in [2.0, 5.0, 9.0] {
            let a = expected_accuracy(n, &params).unwrap();
            for m in [1u64, 2, 7, 40] {
                let mut expectation = 0.0;
                for k in 0..=m {
                    let pmf = crate::numerics::binom_pmf(m, a, k);
                    expectation += (k as f64 / m as f64) * pmf;
                }
                assert!(
                    (c * expectation - c * a).abs() < 1e-12,
                    "m = {m}, n = {n}: payment {} vs {}",
                    c * expectation,
                    c * a
                );
            }
        }
    }

    proptest! {
        #[test]
        fn best_response_beats_grid(
            c in 1e-3f64..1.0,
            theta in 0.0f64..0.9,
            d in 1e-3f64..0.5,
            p in 0.3f64..2.5,
            log_alpha in -5.0f64..-2.0,
        ) {
            let params = ProblemParams::new(theta, d, p, 10f64.powf(log_alpha), 1.0).unwrap();
            let resp = agent_best_response_linear(c, &params).unwrap();
            let hi = (resp.n * 10.0).max(1.0);
            for i in 1..=10_000u32 {
                let n = hi * i as f64 / 10_000.0;
                prop_assert!(agent_utility_at(n, c, &params) <= resp.agent_utility + 1e-9);
            }
        }

        #[test]
        fn scale_covariance(
            c in 1e-3f64..1.0,
            lambda in 1e-2f64..1e2,
            d in 1e-3f64..0.5,
            p in 0.3f64..2.5,
        ) {
            let params = ProblemParams::new(0.1, d, p, 1e-4, 1.0).unwrap();
            let scaled = ProblemParams::new(0.1, d, p, 1e-4 * lambda, 1.0).unwrap();
            let n = best_response_samples(c, &params);
            let n_scaled = best_response_samples(c * lambda, &scaled);
            prop_assert!((n - n_scaled).abs() <= 1e-9 * n.max(1.0));
        }
    }
}
