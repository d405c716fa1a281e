//! Log-barrier solver for small inequality-constrained convex programs.
//!
//! Minimizes `f(x)` subject to `g_k(x) <= 0` and per-coordinate lower
//! bounds, starting from a strictly feasible point. Each outer stage
//! minimizes the barrier `f(x) - mu * sum ln(-g_k(x))` by gradient
//! descent with Barzilai-Borwein step seeding and backtracking line
//! search; `mu` is halved per stage until the duality measure
//! `mu * #constraints` drops below the requested tolerance. Problem
//! sizes here are tiny (a handful of variables, O(N^2) constraints), so
//! robustness is worth far more than speed.

use crate::error::{Error, Result};

type Eval = Box<dyn Fn(&[f64]) -> f64 + Sync>;
type Grad = Box<dyn Fn(&[f64], &mut [f64]) + Sync>;

/// One inequality constraint `g(x) <= 0` with an optional analytic
/// gradient; central finite differences are used when absent.
pub struct Constraint {
    pub eval: Eval,
    pub grad: Option<Grad>,
}

impl Constraint {
    pub fn new(eval: impl Fn(&[f64]) -> f64 + Sync + 'static) -> Self {
        Self { eval: Box::new(eval), grad: None }
    }

    pub fn with_grad(
        eval: impl Fn(&[f64]) -> f64 + Sync + 'static,
        grad: impl Fn(&[f64], &mut [f64]) + Sync + 'static,
    ) -> Self {
        Self { eval: Box::new(eval), grad: Some(Box::new(grad)) }
    }
}

/// A differentiable convex objective with convex inequality constraints
/// and coordinate lower bounds, all defined on the positive orthant.
pub struct ConvexProgram {
    pub dim: usize,
    pub objective: Eval,
    pub objective_grad: Option<Grad>,
    pub constraints: Vec<Constraint>,
    /// `x[i] >= lower_bounds[i]` where present.
    pub lower_bounds: Vec<Option<f64>>,
}

impl ConvexProgram {
    pub fn new(dim: usize, objective: impl Fn(&[f64]) -> f64 + Sync + 'static) -> Self {
        Self {
            dim,
            objective: Box::new(objective),
            objective_grad: None,
            constraints: Vec::new(),
            lower_bounds: vec![None; dim],
        }
    }
}

/// Outcome of a [`solve_convex`] run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub objective: f64,
    /// `max(0, max_k g_k(x))`; zero for interior iterates.
    pub max_violation: f64,
    /// Stationarity residual plus the final duality measure.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn finite_diff(f: &Eval, x: &[f64], out: &mut [f64], scratch: &mut [f64]) {
    scratch.copy_from_slice(x);
    for i in 0..x.len() {
        let h = 1e-6 * x[i].abs().max(1.0);
        scratch[i] = x[i] + h;
        let fp = f(scratch);
        scratch[i] = x[i] - h;
        let fm = f(scratch);
        scratch[i] = x[i];
        out[i] = (fp - fm) / (2.0 * h);
    }
}

struct Barrier<'a> {
    prog: &'a ConvexProgram,
    mu: f64,
}

impl Barrier<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        let mut b = (self.prog.objective)(x);
        for c in &self.prog.constraints {
            let g = (c.eval)(x);
            if g >= 0.0 {
                return f64::INFINITY;
            }
            b -= self.mu * (-g).ln();
        }
        for (i, lb) in self.prog.lower_bounds.iter().enumerate() {
            if let Some(lb) = lb {
                let slack = x[i] - lb;
                if slack <= 0.0 {
                    return f64::INFINITY;
                }
                b -= self.mu * slack.ln();
            }
        }
        b
    }

    fn gradient(&self, x: &[f64], out: &mut [f64], tmp: &mut [f64], scratch: &mut [f64]) {
        match &self.prog.objective_grad {
            Some(g) => g(x, out),
            None => finite_diff(&self.prog.objective, x, out, scratch),
        }
        for c in &self.prog.constraints {
            let g = (c.eval)(x);
            let w = self.mu / (-g);
            match &c.grad {
                Some(cg) => cg(x, tmp),
                None => finite_diff(&c.eval, x, tmp, scratch),
            }
            for i in 0..x.len() {
                out[i] += w * tmp[i];
            }
        }
        for (i, lb) in self.prog.lower_bounds.iter().enumerate() {
            if let Some(lb) = lb {
                out[i] -= self.mu / (x[i] - lb);
            }
        }
    }
}

/// Solve the program from a strictly feasible `x0`; `tol` is the target
/// duality measure (and bounds the objective suboptimality on exit).
pub fn solve_convex(prog: &ConvexProgram, x0: &[f64], tol: f64) -> Result<SolveReport> {
    if x0.len() != prog.dim {
        return Err(Error::Domain(format!(
            "start has dim {}, program has dim {}",
            x0.len(),
            prog.dim
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol = {tol} must be > 0")));
    }
    for (k, c) in prog.constraints.iter().enumerate() {
        let g = (c.eval)(x0);
        if !(g < 0.0) {
            return Err(Error::InfeasibleStart { index: k, value: g });
        }
    }
    for (i, lb) in prog.lower_bounds.iter().enumerate() {
        if let Some(lb) = lb {
            if !(x0[i] > *lb) {
                return Err(Error::InfeasibleStart { index: prog.constraints.len() + i, value: lb - x0[i] });
            }
        }
    }

    let n_constraints =
        prog.constraints.len() + prog.lower_bounds.iter().filter(|b| b.is_some()).count();
    let mut x = x0.to_vec();
    let mut total_iters = 0usize;
    let mut grad_inf = 0.0f64;
    let max_inner = 4000usize;

    if n_constraints == 0 {
        let barrier = Barrier { prog, mu: 0.0 };
        let (iters, g) = inner_minimize(&barrier, &mut x, tol.min(1e-10), max_inner);
        total_iters += iters;
        grad_inf = g;
    } else {
        let mut mu = 1.0f64;
        loop {
            let barrier = Barrier { prog, mu };
            let gtol = (1e-2 * mu).max(1e-12);
            let (iters, g) = inner_minimize(&barrier, &mut x, gtol, max_inner);
            total_iters += iters;
            grad_inf = g;
            if mu * n_constraints as f64 <= tol {
                break;
            }
            mu *= 0.5;
        }
    }

    let mut max_violation = 0.0f64;
    for c in &prog.constraints {
        max_violation = max_violation.max((c.eval)(&x));
    }
    for (i, lb) in prog.lower_bounds.iter().enumerate() {
        if let Some(lb) = lb {
            max_violation = max_violation.max(lb - x[i]);
        }
    }
    max_violation = max_violation.max(0.0);

    let duality = if n_constraints == 0 { 0.0 } else { tol };
    let converged = max_violation <= 1e-8 && total_iters < max_inner * 64;
    Ok(SolveReport {
        objective: (prog.objective)(&x),
        x,
        max_violation,
        kkt_residual: grad_inf.max(duality),
        iterations: total_iters,
        converged,
    })
}

/// Gradient descent with BB step seeding and Armijo backtracking.
/// Returns (iterations, final gradient infinity norm). The merit value
/// never increases across accepted iterates.
fn inner_minimize(barrier: &Barrier, x: &mut Vec<f64>, gtol: f64, max_iter: usize) -> (usize, f64) {
    let dim = x.len();
    let mut g = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    let mut xn = vec![0.0; dim];
    let mut gn = vec![0.0; dim];

    let mut merit = barrier.value(x);
    barrier.gradient(x, &mut g, &mut tmp, &mut scratch);
    let mut step_seed = 1.0f64;

    for it in 0..max_iter {
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        let ginf = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if ginf <= gtol {
            return (it, ginf);
        }
        let mut t = step_seed;
        let mut accepted = false;
        while t > 1e-20 {
            for i in 0..dim {
                xn[i] = x[i] - t * g[i];
            }
            let mn = barrier.value(&xn);
            if mn <= merit - 1e-4 * t * gnorm2 {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return (it, ginf);
        }
        barrier.gradient(&xn, &mut gn, &mut tmp, &mut scratch);
        // Barzilai-Borwein seed for the next line search.
        let mut ss = 0.0;
        let mut sy = 0.0;
        for i in 0..dim {
            let s = xn[i] - x[i];
            let y = gn[i] - g[i];
            ss += s * s;
            sy += s * y;
        }
        step_seed = if sy > 1e-300 { (ss / sy).clamp(1e-12, 1e6) } else { (t * 2.0).min(1e6) };
        let mn = barrier.value(&xn);
        debug_assert!(
            mn <= merit + 1e-12 * (1.0 + merit.abs()),
            "merit increased: {merit} -> {mn}"
        );
        merit = mn;
        x.copy_from_slice(&xn);
        g.copy_from_slice(&gn);
    }
    let ginf = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (max_iter, ginf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_quadratic_is_exact() {
        let prog = ConvexProgram::new(2, |x: &[f64]| {
            (x[0] - 3.0) * (x[0] - 3.0) + 2.0 * (x[1] + 1.0) * (x[1] + 1.0)
        });
        let report = solve_convex(&prog, &[0.0, 0.0], 1e-10).unwrap();
        assert!(report.converged);
        assert!((report.x[0] - 3.0).abs() < 1e-6, "{:?}", report.x);
        assert!((report.x[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn constrained_quadratic_lands_on_boundary() {
        // min (x-2)^2 s.t. x <= 1  ->  x = 1.
        let mut prog = ConvexProgram::new(1, |x: &[f64]| (x[0] - 2.0) * (x[0] - 2.0));
        prog.constraints.push(Constraint::new(|x: &[f64]| x[0] - 1.0));
        let report = solve_convex(&prog, &[0.0], 1e-9).unwrap();
        assert!(report.converged);
        assert!((report.x[0] - 1.0).abs() < 1e-4, "{:?}", report.x);
        assert!(report.max_violation <= 1e-8);
        // Objective within tol-ish of the optimum value 1.
        assert!((report.objective - 1.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let mut prog = ConvexProgram::new(1, |x: &[f64]| x[0] * x[0]);
        prog.constraints.push(Constraint::new(|x: &[f64]| x[0] - 1.0));
        assert!(matches!(
            solve_convex(&prog, &[2.0], 1e-9),
            Err(Error::InfeasibleStart { .. })
        ));
    }

    #[test]
    fn analytic_and_finite_difference_gradients_agree() {
        let f = |x: &[f64]| x[0] * x[0] * x[1] + x[1].powi(3);
        let fg = |x: &[f64], out: &mut [f64]| {
            out[0] = 2.0 * x[0] * x[1];
            out[1] = x[0] * x[0] + 3.0 * x[1] * x[1];
        };
        let boxed: Eval = Box::new(f);
        let x = [1.3, 0.7];
        let mut fd = [0.0, 0.0];
        let mut scratch = [0.0, 0.0];
        finite_diff(&boxed, &x, &mut fd, &mut scratch);
        let mut an = [0.0, 0.0];
        fg(&x, &mut an);
        for i in 0..2 {
            assert!((fd[i] - an[i]).abs() < 1e-6, "{fd:?} vs {an:?}");
        }
    }
}
