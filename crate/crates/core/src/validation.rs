//! Out-of-sample checks of a first-stage decision and derived statistics.

use swc_lp::{LpSolver, Status};

use crate::builders::{exact_value, recourse_lp, ExactMode};
use crate::model::MultistageRobustLP;
use crate::sampling::{draw_with, rng_for, PathSampler, Uniform, VALIDATION_STREAM};
use crate::uncertainty::ScenarioPath;
use crate::{RobustProblem, SwcError};

/// Absolute slack on the cost comparison so solver noise is not counted.
pub const VIOLATION_TOL: f64 = 1e-7;

/// Whether some recourse along `path` keeps the total cost within `gamma`.
pub fn certificate_feasible(
    model: &MultistageRobustLP,
    x1: &[f64],
    gamma: f64,
    path: &ScenarioPath,
    solver: &dyn LpSolver,
) -> Result<bool, SwcError> {
    let lp = recourse_lp(model, x1, path);
    let res = solver.solve(&lp)?;
    let c1: f64 = model.first.c.iter().zip(x1).map(|(c, x)| c * x).sum();
    match res.status {
        Status::Optimal => Ok(c1 + res.objective.unwrap_or(f64::NAN) <= gamma + VIOLATION_TOL),
        Status::Infeasible => Ok(false),
        Status::Unbounded => Ok(true),
        status => Err(SwcError::Solver { context: "recourse LP".into(), status }),
    }
}

/// Fraction of `batches * per_batch` fresh paths (validation stream of
/// `seed`) that admit no recourse within `gamma`. With equal batch sizes
/// this equals the mean of the per-batch fractions.
pub fn empirical_violation(
    problem: &RobustProblem,
    x1: &[f64],
    gamma: f64,
    batches: usize,
    per_batch: usize,
    seed: u64,
    solver: &dyn LpSolver,
) -> Result<f64, SwcError> {
    empirical_violation_with(problem, x1, gamma, batches, per_batch, seed, solver, &Uniform)
}

#[allow(clippy::too_many_arguments)]
pub fn empirical_violation_with(
    problem: &RobustProblem,
    x1: &[f64],
    gamma: f64,
    batches: usize,
    per_batch: usize,
    seed: u64,
    solver: &dyn LpSolver,
    sampler: &dyn PathSampler,
) -> Result<f64, SwcError> {
    if batches == 0 || per_batch == 0 {
        return Err(SwcError::Domain("validation needs at least one batch of one path".into()));
    }
    let mut rng = rng_for(seed, VALIDATION_STREAM);
    let mut failed = 0usize;
    for _ in 0..batches {
        for path in draw_with(&problem.set, per_batch, &mut rng, sampler) {
            if !certificate_feasible(&problem.model, x1, gamma, &path, solver)? {
                failed += 1;
            }
        }
    }
    Ok(failed as f64 / (batches * per_batch) as f64)
}

/// `(value - reference) / reference`.
pub fn optimality_gap(value: f64, reference: f64) -> Result<f64, SwcError> {
    if reference == 0.0 {
        return Err(SwcError::Domain("optimality gap against a zero reference".into()));
    }
    Ok((value - reference) / reference)
}

/// Robust value of perfect information, `RO - RWS`.
pub fn rvpi(problem: &RobustProblem, solver: &dyn LpSolver) -> Result<f64, SwcError> {
    Ok(exact_value(problem, ExactMode::Ro, solver)? - exact_value(problem, ExactMode::Rws, solver)?)
}
