// Exact robust, wait-and-see and two-stage references on the inventory
// benchmark, computed on the tree of demand vertices.

use swc_lp::solver::BuiltinSolver;
use swc_robust::builders::{exact_solve, nominal_tail, ExactOptions};
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::validation::{optimality_gap, rvpi};
use swc_robust::{ExactMode, SwcError, TailPolicy};

pub fn run() -> Result<(), SwcError> {
    let solver = BuiltinSolver::default();
    for stages in [2, 5] {
        let problem = standard_problem(stages, DemandVariant::Continuous)?;
        println!("H = {stages}, {} vertex paths", problem.set.vertex_path_count());
        let mut values = Vec::new();
        for mode in [ExactMode::Ro, ExactMode::Rws, ExactMode::Rt] {
            let s = exact_solve(&problem, mode, &ExactOptions::default(), &solver)?;
            println!("  {:<4} {:.6}", mode.as_str(), s.value);
            values.push(s.value);
        }
        println!("  RVPI {:.5}", rvpi(&problem, &solver)?);
        println!("  RWS gap to RO {:.6}", optimality_gap(values[1], values[0])?);
        if stages > 2 {
            let opts = ExactOptions { tail: TailPolicy::Fixed(nominal_tail(&problem)), ..Default::default() };
            let fixed = exact_solve(&problem, ExactMode::Rt, &opts, &solver)?;
            println!("  RT with nominal later demand {:.6}", fixed.value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
