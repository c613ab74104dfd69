// Out-of-sample violation of a sampled solution versus the target level.

use swc_lp::solver::BuiltinSolver;
use swc_robust::builders::{solve_swc_with, Strategy};
use swc_robust::inventory::{standard_problem, DemandVariant, N0};
use swc_robust::sampling::draw_paths;
use swc_robust::validation::empirical_violation;
use swc_robust::{sample_complexity, ScenarioPrefixTree, SwcError};

pub fn run() -> Result<(), SwcError> {
    let solver = BuiltinSolver::default();
    let problem = standard_problem(5, DemandVariant::Continuous)?;
    for eps in [0.3, 0.1] {
        let n = sample_complexity(eps, 0.001, N0)?;
        let seed = 11;
        let tree = ScenarioPrefixTree::build(draw_paths(&problem.set, n, seed))?;
        let sol = solve_swc_with(&problem.model, &tree, &solver, Strategy::Generation)?;
        let v = empirical_violation(&problem, &sol.x1, sol.value, 10, n, seed, &solver)?;
        println!("eps {eps}: N {n}, value {:.4}, empirical violation {v:.4}", sol.value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
