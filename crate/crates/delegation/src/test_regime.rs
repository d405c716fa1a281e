//! Medium-test-set machinery: the sample-size formula under which hidden
//! action becomes insignificant, and an exact-binomial validator checking
//! that the first-best threshold contract is epsilon-optimal against
//! agent deviations at that test size.

use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::numerics::binom_tail;
use crate::single_round;

/// Test-set size bound together with the kappa it was computed from.
///
/// kappa is reported rather than clamped: negative values mean the
/// Hoeffding-based construction is vacuous there, but the resulting `m`
/// is still well defined and the exact-binomial validator is the ground
/// truth either way.
#[derive(Debug, Clone, Copy)]
pub struct TestSizeBound {
    pub m: u64,
    pub kappa: f64,
}

/// Outcome of the exact-binomial deviation check at test size `m`.
#[derive(Debug, Clone)]
pub struct HiddenActionReport {
    pub test_size: u64,
    pub epsilon: f64,
    /// Grid argmax of the agent's expected utility.
    pub best_deviation_n: f64,
    /// Agent's expected utility at the best deviation.
    pub best_deviation_utility: f64,
    /// First-best expected utility minus the principal's utility under
    /// the agent's exact best response.
    pub utility_gap: f64,
    pub passed: bool,
}

/// Test-set size `m = ceil((1/(2 eps^2)) ln(4/(1-kappa)))` with
/// `kappa = d^p (1/(d - 2 eps n*^{1/p})^p - 1/(d + 2 eps n*^{1/p})^p)`,
/// evaluated verbatim.
///
/// Errors when the formula breaks down (`kappa >= 1` or non-finite, which
/// happens for fractional `p` once `d < 2 eps n*^{1/p}`).
pub fn min_test_size(epsilon: f64, params: &ProblemParams) -> Result<TestSizeBound> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be > 0")));
    }
    let n_star = single_round::first_best_samples(params);
    let x = 2.0 * epsilon * n_star.powf(1.0 / params.p);
    let kappa = params.d.powf(params.p)
        * ((params.d - x).powf(params.p).recip() - (params.d + x).powf(params.p).recip());
    if !kappa.is_finite() || kappa >= 1.0 {
        return Err(Error::ConstructionInapplicable { kappa });
    }
    let m = ((4.0 / (1.0 - kappa)).ln() / (2.0 * epsilon * epsilon)).ceil();
    Ok(TestSizeBound { m: (m.max(1.0)) as u64, kappa })
}

/// Agent's expected utility when the first-best threshold contract is
/// evaluated on `m` i.i.d. test points: the payment lands exactly when
/// the correct-count reaches `ceil(m a*)` (ties pay).
pub fn deviation_utility(n: f64, m: u64, params: &ProblemParams) -> Result<f64> {
    let (contract, _, _) = single_round::first_best(params);
    let k = (m as f64 * contract.accuracy_threshold).ceil() as u64;
    let a = (1.0 - params.theta - params.d / n.powf(params.p)).clamp(0.0, 1.0);
    let win = binom_tail(m, a, k.min(m))?;
    Ok(contract.payment * win - params.alpha * n)
}

/// Exact-binomial check that hidden action is insignificant at level
/// `epsilon` for test size `m`: scans the agent's expected utility over
/// `n_grid`, takes the exact best response, and compares the principal's
/// realized utility against the deterministic first-best.
pub fn hidden_action_gap(
    params: &ProblemParams,
    m: u64,
    epsilon: f64,
    n_grid: &[f64],
) -> Result<HiddenActionReport> {
    if n_grid.is_empty() {
        return Err(Error::Domain("empty deviation grid".into()));
    }
    if m == 0 {
        return Err(Error::Domain("test size m must be >= 1".into()));
    }
    let (contract, _, first_best_utility) = single_round::first_best(params);
    let k = ((m as f64) * contract.accuracy_threshold).ceil() as u64;
    let k = k.min(m);

    let mut best_n = n_grid[0];
    let mut best_u = f64::NEG_INFINITY;
    for &n in n_grid {
        if !(n > 0.0) {
            return Err(Error::Domain(format!("grid point n = {n} must be > 0")));
        }
        let u = deviation_utility(n, m, params)?;
        if u > best_u {
            best_u = u;
            best_n = n;
        }
    }

    let realized = if best_u >= 0.0 {
        let a = 1.0 - params.theta - params.d / best_n.powf(params.p);
        let win = binom_tail(m, a.clamp(0.0, 1.0), k)?;
        a - params.beta * contract.payment * win
    } else {
        0.0 // agent opts out entirely
    };
    let utility_gap = first_best_utility - realized;
    Ok(HiddenActionReport {
        test_size: m,
        epsilon,
        best_deviation_n: best_n,
        best_deviation_utility: best_u,
        utility_gap,
        passed: utility_gap <= epsilon,
    })
}

/// Default deviation grid: `points` log-spaced samples covering
/// `[n*/4, 4 n*]`.
pub fn default_deviation_grid(params: &ProblemParams, points: usize) -> Vec<f64> {
    let n_star = single_round::first_best_samples(params);
    let lo = (n_star / 4.0).ln();
    let hi = (4.0 * n_star).ln();
    (0..points)
        .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}
