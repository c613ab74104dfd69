// Sampled lower bounds on the same draws: wait-and-see (SWS) <= two-stage
// relaxation (SwCT) <= SwC, next to the exact references.

use swc_lp::solver::BuiltinSolver;
use swc_robust::builders::{solve_swc, swct_solve};
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::sampling::draw_paths;
use swc_robust::{exact_value, sws_value, ExactMode, ScenarioPrefixTree, SwcError, TailPolicy};

pub fn run() -> Result<(), SwcError> {
    let solver = BuiltinSolver::default();
    let problem = standard_problem(3, DemandVariant::Integer)?;
    let paths = draw_paths(&problem.set, 95, 3);
    let tree = ScenarioPrefixTree::build(paths.clone())?;
    println!("{} paths, {} distinct first-stage demands", paths.len(), tree.node_counts()[0]);
    let swc = solve_swc(&problem.model, &tree, &solver)?.value;
    let swct = swct_solve(&problem.model, &paths, &TailPolicy::Sampled, &solver)?.value;
    let (sws, worst) = sws_value(&problem.model, &paths, &solver)?;
    println!("SWS  {sws:.4} (worst path {worst})");
    println!("SwCT {swct:.4}");
    println!("SwC  {swc:.4}");
    for mode in [ExactMode::Rws, ExactMode::Rt, ExactMode::Ro] {
        println!("{:<4} {:.4}", mode.as_str(), exact_value(&problem, mode, &solver)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
