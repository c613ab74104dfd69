// One scenario-with-certificates solve on the five-stage inventory model.

use swc_lp::solver::BuiltinSolver;
use swc_robust::builders::{solve_swc_with, Strategy};
use swc_robust::inventory::{standard_problem, DemandVariant, N0};
use swc_robust::sampling::draw_paths;
use swc_robust::validation::optimality_gap;
use swc_robust::{exact_value, sample_complexity, ExactMode, ScenarioPrefixTree, SwcError};

pub fn run() -> Result<(), SwcError> {
    let solver = BuiltinSolver::default();
    let problem = standard_problem(5, DemandVariant::Continuous)?;
    let n = sample_complexity(0.1, 0.001, N0)?;
    let tree = ScenarioPrefixTree::build(draw_paths(&problem.set, n, 7))?;
    let sol = solve_swc_with(&problem.model, &tree, &solver, Strategy::Generation)?;
    let ro = exact_value(&problem, ExactMode::Ro, &solver)?;
    println!("N = {n}: {} variables, {} rows", sol.num_vars, sol.num_rows);
    println!("SwC value {:.6}, exact RO {ro:.6}, gap {:.4}", sol.value, optimality_gap(sol.value, ro)?);
    println!("first-stage decision (x_o, x_c, s_inv, s_co) = {:?}", sol.x1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
