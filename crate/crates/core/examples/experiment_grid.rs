// A small seeded experiment written as CSV files.
//
// `cargo run --release --example experiment_grid -- OUT_DIR`

use swc_lp::solver::BuiltinSolver;
use swc_robust::experiment::{run_experiment, ExperimentOptions};
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::SwcError;

pub fn run_in(dir: &std::path::Path) -> Result<(), SwcError> {
    let problem = standard_problem(2, DemandVariant::Continuous)?;
    let opts = ExperimentOptions {
        epsilons: vec![0.3, 0.1],
        instances: 10,
        validation_batches: 5,
        bounds: true,
        ..Default::default()
    };
    let report = run_experiment(&problem, &opts, &BuiltinSolver::default())?;
    report.write_csvs(dir)?;
    for s in &report.summaries {
        let gap = report.summary(s.eps, "gap").map_or(f64::NAN, |st| st.mean);
        let viol = report.summary(s.eps, "violation").map_or(f64::NAN, |st| st.max);
        println!("eps {}: N {}, mean gap {gap:.5}, largest violation {viol:.4}", s.eps, s.n);
    }
    println!("wrote {}", dir.display());
    Ok(())
}

pub fn run() -> Result<(), SwcError> {
    let dir = std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("swc-grid"));
    run_in(&dir)
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
