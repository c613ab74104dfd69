// Reads a three-stage reorder model from its JSON file, writes it back out
// and solves both copies.

use swc_lp::solver::BuiltinSolver;
use swc_robust::builders::solve_swc;
use swc_robust::problem_file::{parse_problem, read_problem, write_problem};
use swc_robust::sampling::draw_paths;
use swc_robust::{exact_value, ExactMode, ScenarioPrefixTree, SwcError};

const MODEL: &str = include_str!("../data/reorder3.json");

pub fn run() -> Result<(), SwcError> {
    let solver = BuiltinSolver::default();
    let problem = parse_problem(MODEL)?;
    println!("stages {}, decisions {:?}, rows {:?}", problem.model.horizon(), problem.model.dims.n, problem.model.dims.m);

    let path = std::env::temp_dir().join(format!("swc-reorder3-{}.json", std::process::id()));
    write_problem(&problem, &path)?;
    let reread = read_problem(&path)?;
    std::fs::remove_file(&path)?;
    assert_eq!(reread, problem);

    let ro = exact_value(&reread, ExactMode::Ro, &solver)?;
    let tree = ScenarioPrefixTree::build(draw_paths(&reread.set, 50, 1))?;
    let sol = solve_swc(&reread.model, &tree, &solver)?;
    println!("exact RO {ro:.4}; SwC with 50 paths {:.4}, first order {:.4}", sol.value, sol.x1[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
