//! Self-contained numerical kit: bracketing root finder, golden-section
//! scalar minimizer, log-barrier solver for small convex programs, exact
//! binomial tails, and log-log slope fitting.

mod binomial;
mod convex;
mod root;
mod scalar;
mod slope;

pub use binomial::{binom_lower_tail, binom_pmf, binom_tail};
pub use convex::{solve_convex, Constraint, ConvexProgram, SolveReport};
pub use root::find_root_bisect;
pub use scalar::minimize_scalar;
pub use slope::fit_loglog_slope;
