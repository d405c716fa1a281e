//! First-best contract, the near-optimal linear contract, approximation
//! ratios, and the instance construction on which the linear-contract
//! bound is tight.

use crate::error::{Error, Result};
use crate::model::{self, ProblemParams};

/// Pay `payment` when the measured accuracy reaches `accuracy_threshold`,
/// nothing otherwise. The first-best contract has this form.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdContract {
    pub accuracy_threshold: f64,
    pub payment: f64,
}

/// Pay `c` times the measured test accuracy.
#[derive(Debug, Clone, Copy)]
pub struct LinearContract {
    pub c: f64,
}

impl LinearContract {
    pub fn new(c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("linear contract slope c = {c} must be >= 0")));
        }
        Ok(Self { c })
    }
}

/// Samples requested by the first-best contract: `n* = (p d / (alpha beta))^{1/(p+1)}`.
pub fn first_best_samples(params: &ProblemParams) -> f64 {
    (params.p * params.d / (params.alpha * params.beta)).powf(1.0 / (params.p + 1.0))
}

/// The first-best contract: payment `alpha n*` at accuracy threshold
/// `1 - theta - d/n*^p`, and the utility it yields the principal in the
/// idealized setting (the benchmark everything else is measured against).
pub fn first_best(params: &ProblemParams) -> (ThresholdContract, f64, f64) {
    let n_star = first_best_samples(params);
    let threshold = 1.0 - params.theta - params.d / n_star.powf(params.p);
    let payment = params.alpha * n_star;
    let utility = threshold - params.beta * payment;
    (ThresholdContract { accuracy_threshold: threshold, payment }, n_star, utility)
}

/// Slope above which the agent's best-response utility is non-negative:
/// `c2 = (alpha d^{1/p} / p) ((p+1)/(1-theta))^{(p+1)/p}`.
pub fn participation_threshold(params: &ProblemParams) -> f64 {
    let e = (params.p + 1.0) / params.p;
    params.alpha * params.d.powf(1.0 / params.p) / params.p
        * ((params.p + 1.0) / (1.0 - params.theta)).powf(e)
}

/// The theta-free branch of the near-optimal slope:
/// `1 / (beta (p+1)^{(p+1)/p})`.
pub fn robust_slope(params: &ProblemParams) -> f64 {
    1.0 / (params.beta * (params.p + 1.0).powf((params.p + 1.0) / params.p))
}

/// Near-optimal linear contract `c* = max(robust slope, participation threshold)`.
pub fn approx_linear_contract(params: &ProblemParams) -> LinearContract {
    LinearContract { c: robust_slope(params).max(participation_threshold(params)) }
}

/// Guaranteed fraction of the first-best utility for the near-optimal
/// linear contract: `1 - 1/(p+1)^{(p+1)/p}`, which is at least `1 - 1/e`.
pub fn approximation_bound(p: f64) -> f64 {
    1.0 - 1.0 / (p + 1.0).powf((p + 1.0) / p)
}

/// Whether the theta-free contract keeps its guarantee for every optimal
/// error below `theta_bar`: requires
/// `alpha <= (p / (beta d^{1/p})) ((1 - theta_bar)/(p+1)^2)^{(p+1)/p}`.
pub fn robust_contract_applicable(params: &ProblemParams, theta_bar: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&theta_bar) {
        return Err(Error::Domain(format!("theta_bar = {theta_bar} not in [0, 1)")));
    }
    if params.theta >= theta_bar {
        return Err(Error::Domain(format!(
            "theta = {} must be below theta_bar = {theta_bar}",
            params.theta
        )));
    }
    Ok(params.alpha <= robust_alpha_bound(params, theta_bar))
}

/// The alpha bound in the robust-contract condition.
pub fn robust_alpha_bound(params: &ProblemParams, theta_bar: f64) -> f64 {
    let e = (params.p + 1.0) / params.p;
    params.p / (params.beta * params.d.powf(1.0 / params.p))
        * ((1.0 - theta_bar) / ((params.p + 1.0) * (params.p + 1.0))).powf(e)
}

/// Ratio of the linear contract's utility to the first-best utility.
///
/// Errors when the agent opts out under `contract` or the benchmark is
/// not positive.
pub fn approximation_ratio(contract: &LinearContract, params: &ProblemParams) -> Result<f64> {
    let report = model::principal_utility_linear(contract.c, params)?;
    if report.first_best_utility <= 0.0 {
        return Err(Error::UndefinedBenchmark(report.first_best_utility));
    }
    if !report.participates {
        return Err(Error::NoParticipation(contract.c));
    }
    Ok(report.principal_utility / report.first_best_utility)
}

/// Construct problem parameters on which no linear contract beats the
/// `1 - 1/(p+1)^{(p+1)/p}` fraction of first-best: fix `beta = 1` and
/// choose `alpha` so the principal's utility derivative vanishes at the
/// theta-free slope, i.e.
/// `1-theta = (alpha beta d^{1/p}/p)^{p/(p+1)} (p+1)(1 + (1 - 1/(p+1)^{(p+1)/p}) p (p+1)^{1/p})`.
pub fn tightness_instance(theta: f64, p: f64, d: f64) -> Result<ProblemParams> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta = {theta} not in [0, 1)")));
    }
    if !(p > 0.0) || !(d > 0.0) {
        return Err(Error::InvalidParameter(format!("p = {p} and d = {d} must be > 0")));
    }
    let beta = 1.0;
    let gamma = approximation_bound(p);
    let inner = 1.0 + gamma * p * (p + 1.0).powf(1.0 / p);
    let r = (1.0 - theta) / ((p + 1.0) * inner);
    let alpha = p * r.powf((p + 1.0) / p) / (beta * d.powf(1.0 / p));
    ProblemParams::new(theta, d, p, alpha, beta)
}

/// Best approximation ratio over a log grid of linear slopes between the
/// participation threshold and `1/beta`. Used to probe tightness; the
/// grid has `points` entries.
pub fn best_linear_ratio_on_grid(params: &ProblemParams, points: usize) -> Result<(f64, f64)> {
    let c_lo = participation_threshold(params) * (1.0 + 1e-12);
    let c_hi = 1.0 / params.beta * (1.0 - 1e-12);
    if c_lo >= c_hi {
        return Err(Error::Domain("participation threshold exceeds 1/beta".into()));
    }
    let (log_lo, log_hi) = (c_lo.ln(), c_hi.ln());
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_c = c_lo;
    for i in 0..points {
        let c = (log_lo + (log_hi - log_lo) * i as f64 / (points - 1) as f64).exp();
        let report = model::principal_utility_linear(c, params)?;
        if let Some(ratio) = report.ratio_to_first_best {
            if report.participates && ratio > best_ratio {
                best_ratio = ratio;
                best_c = c;
            }
        }
    }
    if best_ratio.is_infinite() {
        return Err(Error::UndefinedBenchmark(f64::NEG_INFINITY));
    }
    Ok((best_c, best_ratio))
}
