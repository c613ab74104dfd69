// Writes a scenario LP in LP format, parses it back and solves both.

use swc_lp::lpfile::{parse_lp, write_lp};
use swc_lp::solver::BuiltinSolver;
use swc_lp::LpSolver;
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::sampling::draw_paths;
use swc_robust::{build_swc, ScenarioPrefixTree, SwcError};

pub fn run() -> Result<(), SwcError> {
    let problem = standard_problem(3, DemandVariant::Continuous)?;
    let tree = ScenarioPrefixTree::build(draw_paths(&problem.set, 4, 2))?;
    let (lp, _) = build_swc(&problem.model, &tree)?;
    let text = write_lp(&lp);
    println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("... {} lines", text.lines().count());

    let parsed = parse_lp(&text)?;
    let solver = BuiltinSolver::default();
    let (a, b) = (solver.solve(&lp)?, solver.solve(&parsed)?);
    println!("objective {:?} / after roundtrip {:?}", a.objective, b.objective);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
