// Routes LPs to an external solver process.
//
// The command is taken from `SWC_EXTERNAL_SOLVER` and is invoked as
// `<command> <model.lp> <solution.txt>`. `scripts/highs_solve.py` wraps
// HiGHS this way:
//
// `SWC_EXTERNAL_SOLVER="python3 scripts/highs_solve.py" cargo run --example external_solver`

use swc_lp::solver::BuiltinSolver;
use swc_lp::{ExternalSolver, SolverChoice};
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::{exact_value, ExactMode, SwcError};

pub fn run() -> Result<(), SwcError> {
    let Some(external) = ExternalSolver::from_env() else {
        println!("SWC_EXTERNAL_SOLVER is not set; nothing to compare");
        return Ok(());
    };
    let problem = standard_problem(5, DemandVariant::Continuous)?;
    let builtin = exact_value(&problem, ExactMode::Ro, &BuiltinSolver::default())?;
    let choice = SolverChoice::External(external);
    let outside = exact_value(&problem, ExactMode::Ro, &choice)?;
    println!("RO builtin {builtin:.6}, {} {outside:.6}", choice.describe());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
