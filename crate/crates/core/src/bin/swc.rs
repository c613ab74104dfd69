use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use swc_lp::lpfile::write_lp_file;
use swc_robust::builders::{build_swc, exact_solve, nominal_tail, solve_swc_with, ExactOptions, Strategy};
use swc_robust::config::{RunConfig, SolverKind, StrategyName};
use swc_robust::experiment::{run_experiment, ExperimentReport, PAPER_EPSILONS};
use swc_robust::inventory::DemandVariant;
use swc_robust::sampling::draw_paths;
use swc_robust::validation::empirical_violation;
use swc_robust::{min_samples_exact, sample_complexity, ExactMode, ScenarioPrefixTree, SwcError, TailPolicy};

#[derive(Parser)]
#[command(name = "swc", version, about = "Multistage robust LPs by scenarios with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample size for a violation level and confidence.
    Complexity(ComplexityArgs),
    /// Solve one sampled scenario-with-certificates program.
    SolveSwc(SolveArgs),
    /// Exact reference values on the vertex tree.
    Exact(ExactArgs),
    /// Empirical violation probability of a stored solution.
    Validate(ValidateArgs),
    /// Multi-instance experiment grid written as CSV files.
    Experiment(ExperimentArgs),
    /// Experiment grid on the inventory benchmark.
    BenchmarkInventory(BenchmarkArgs),
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.001)]
    beta: f64,
    #[arg(long)]
    n0: usize,
    /// Also print the smallest N whose binomial tail is at most beta.
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Clone, Default)]
struct ProblemArgs {
    /// Problem file (JSON).
    #[arg(long, conflicts_with = "benchmark")]
    problem: Option<PathBuf>,
    /// Built-in benchmark.
    #[arg(long, value_enum)]
    benchmark: Option<Benchmark>,
    #[arg(long)]
    stages: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Benchmark {
    Inventory,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Continuous,
    Integer,
}

#[derive(Args, Clone, Default)]
struct SolverArgs {
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    /// External solver command, invoked as `<cmd> <model.lp> <solution>`.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Let the built-in simplex take instances above its size limit.
    #[arg(long)]
    force_builtin: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Builtin,
    External,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Full,
    Generation,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Number of sampled paths; overrides the size derived from --eps.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0.001)]
    beta: f64,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "generation")]
    strategy: StrategyArg,
    /// Write the full scenario LP in LP format.
    #[arg(long)]
    write_lp: Option<PathBuf>,
    /// Write the solution as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ro,
    Rws,
    Rt,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TailArg {
    /// Every vertex path keeps its own later realizations.
    Sampled,
    /// Later realizations fixed at their nominal values.
    Nominal,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, value_enum, default_value = "all")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "sampled")]
    tail: TailArg,
    #[arg(long, default_value_t = swc_robust::builders::DEFAULT_LEAF_CAP)]
    leaf_cap: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Solution JSON written by `solve-swc --out`.
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 100)]
    batches: usize,
    /// Paths per batch; defaults to the solution's N.
    #[arg(long)]
    per_batch: Option<usize>,
    /// Defaults to the solution's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone, Default)]
struct GridArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Use the full nine-level ε grid.
    #[arg(long, conflicts_with = "eps")]
    paper_grid: bool,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Validation batches L.
    #[arg(long)]
    batches: Option<usize>,
    /// L = 1000 validation batches.
    #[arg(long)]
    paper_scale: bool,
    /// Also compute the SWS and SwCT lower bounds.
    #[arg(long)]
    bounds: bool,
    /// Fill the runtime_ms column.
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Print one line per finished instance to stderr.
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long, default_value_t = 5)]
    stages: usize,
    #[arg(long, value_enum, default_value = "continuous")]
    variant: VariantArg,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    value: f64,
    x1: Vec<f64>,
    n: usize,
    seed: u64,
    num_vars: usize,
    num_rows: usize,
}

/// Ten significant digits, trailing zeros dropped.
fn sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let int_digits = v.abs().log10().floor() as i32 + 1;
    let decimals = (10 - int_digits).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn apply_problem(cfg: &mut RunConfig, p: &ProblemArgs) {
    if let Some(path) = &p.problem {
        cfg.problem = Some(path.clone());
        cfg.benchmark = None;
    }
    if p.benchmark.is_some() {
        cfg.problem = None;
        cfg.benchmark = Some("inventory".into());
    }
    if let Some(s) = p.stages {
        cfg.stages = s;
    }
    if let Some(v) = p.variant {
        cfg.variant = variant(v);
    }
}

fn variant(v: VariantArg) -> DemandVariant {
    match v {
        VariantArg::Continuous => DemandVariant::Continuous,
        VariantArg::Integer => DemandVariant::Integer,
    }
}

fn apply_solver(cfg: &mut RunConfig, s: &SolverArgs) {
    if let Some(kind) = s.solver {
        cfg.solver = match kind {
            SolverArg::Builtin => SolverKind::Builtin,
            SolverArg::External => SolverKind::External,
            SolverArg::Auto => SolverKind::Auto,
        };
    } else if s.solver_cmd.is_some() {
        cfg.solver = SolverKind::External;
    }
    if let Some(cmd) = &s.solver_cmd {
        cfg.solver_cmd = Some(cmd.clone());
    }
    cfg.force_builtin |= s.force_builtin;
}

fn strategy(s: StrategyArg) -> StrategyName {
    match s {
        StrategyArg::Full => StrategyName::Full,
        StrategyArg::Generation => StrategyName::Generation,
    }
}

fn apply_grid(cfg: &mut RunConfig, g: &GridArgs) {
    if let Some(e) = &g.eps {
        cfg.epsilons = e.clone();
    }
    if g.paper_grid {
        cfg.epsilons = PAPER_EPSILONS.to_vec();
    }
    macro_rules! set {
        ($field:ident, $flag:expr) => {
            if let Some(v) = $flag {
                cfg.$field = v;
            }
        };
    }
    set!(beta, g.beta);
    set!(instances, g.instances);
    set!(base_seed, g.seed);
    set!(jobs, g.jobs);
    set!(out_dir, g.out.clone());
    if g.n0.is_some() {
        cfg.n0 = g.n0;
    }
    if g.batches.is_some() {
        cfg.validation_batches = g.batches;
    }
    cfg.paper_scale |= g.paper_scale;
    cfg.bounds |= g.bounds;
    cfg.timings |= g.timings;
    if let Some(s) = g.strategy {
        cfg.strategy = strategy(s);
    }
}

fn config_from(problem: &ProblemArgs, solver: &SolverArgs) -> RunConfig {
    let mut cfg = RunConfig { benchmark: None, ..Default::default() };
    apply_problem(&mut cfg, problem);
    apply_solver(&mut cfg, solver);
    cfg
}

fn run(cli: Cli) -> Result<(), SwcError> {
    match cli.command {
        Command::Complexity(a) => {
            println!("{}", sample_complexity(a.eps, a.beta, a.n0)?);
            if a.exact {
                println!("exact {}", min_samples_exact(a.eps, a.beta, a.n0)?);
            }
        }
        Command::SolveSwc(a) => {
            let cfg = config_from(&a.problem, &a.solver);
            let problem = cfg.problem()?;
            let solver = cfg.solver()?;
            let n = match (a.n, a.eps) {
                (Some(n), _) => n,
                (None, Some(eps)) => sample_complexity(eps, a.beta, a.n0.unwrap_or(problem.model.n1()))?,
                (None, None) => return Err(SwcError::Domain("give --n or --eps".into())),
            };
            if n == 0 {
                return Err(SwcError::Domain("--n must be at least 1".into()));
            }
            let tree = ScenarioPrefixTree::build(draw_paths(&problem.set, n, a.seed))?;
            if let Some(path) = &a.write_lp {
                let (lp, _) = build_swc(&problem.model, &tree)?;
                write_lp_file(&lp, path)?;
            }
            let sol = solve_swc_with(&problem.model, &tree, &solver, strategy_of(a.strategy))?;
            println!("{}", sig(sol.value));
            if let Some(out) = &a.out {
                let file = SolutionFile {
                    value: sol.value,
                    x1: sol.x1,
                    n,
                    seed: a.seed,
                    num_vars: sol.num_vars,
                    num_rows: sol.num_rows,
                };
                std::fs::write(out, serde_json::to_string_pretty(&file)? + "\n")?;
            }
        }
        Command::Exact(a) => {
            let cfg = config_from(&a.problem, &a.solver);
            let problem = cfg.problem()?;
            let solver = cfg.solver()?;
            let tail = match a.tail {
                TailArg::Sampled => TailPolicy::Sampled,
                TailArg::Nominal => TailPolicy::Fixed(nominal_tail(&problem)),
            };
            let opts = ExactOptions { leaf_cap: a.leaf_cap, tail };
            let modes: &[ExactMode] = match a.mode {
                ModeArg::Ro => &[ExactMode::Ro],
                ModeArg::Rws => &[ExactMode::Rws],
                ModeArg::Rt => &[ExactMode::Rt],
                ModeArg::All => &[ExactMode::Ro, ExactMode::Rws, ExactMode::Rt],
            };
            for &mode in modes {
                let s = exact_solve(&problem, mode, &opts, &solver)?;
                if modes.len() == 1 {
                    println!("{}", sig(s.value));
                } else {
                    println!("{} {}", mode.as_str(), sig(s.value));
                }
            }
        }
        Command::Validate(a) => {
            let cfg = config_from(&a.problem, &a.solver);
            let problem = cfg.problem()?;
            let solver = cfg.solver()?;
            let path = a.solution.display().to_string();
            let text = std::fs::read_to_string(&a.solution).map_err(|e| SwcError::File { path: path.clone(), message: e.to_string() })?;
            let sol: SolutionFile = serde_json::from_str(&text).map_err(|e| SwcError::File { path, message: e.to_string() })?;
            if sol.x1.len() != problem.model.n1() {
                return Err(SwcError::Domain(format!(
                    "solution has {} first-stage values, the problem has {}",
                    sol.x1.len(),
                    problem.model.n1()
                )));
            }
            let v = empirical_violation(
                &problem,
                &sol.x1,
                sol.value,
                a.batches,
                a.per_batch.unwrap_or(sol.n),
                a.seed.unwrap_or(sol.seed),
                &solver,
            )?;
            println!("{}", sig(v));
        }
        Command::Experiment(a) => {
            let mut cfg = match &a.grid.config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            apply_problem(&mut cfg, &a.problem);
            apply_solver(&mut cfg, &a.solver);
            apply_grid(&mut cfg, &a.grid);
            grid(&cfg, a.grid.progress)?;
        }
        Command::BenchmarkInventory(a) => {
            let mut cfg = match &a.grid.config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            cfg.problem = None;
            cfg.benchmark = Some("inventory".into());
            cfg.stages = a.stages;
            cfg.variant = variant(a.variant);
            apply_solver(&mut cfg, &a.solver);
            apply_grid(&mut cfg, &a.grid);
            grid(&cfg, a.grid.progress)?;
        }
    }
    Ok(())
}

fn strategy_of(s: StrategyArg) -> Strategy {
    strategy(s).into()
}

fn grid(cfg: &RunConfig, progress: bool) -> Result<(), SwcError> {
    let problem = cfg.problem()?;
    let solver = cfg.solver()?;
    let mut opts = cfg.experiment_options(&problem);
    opts.progress = progress;
    let report = run_experiment(&problem, &opts, &solver)?;
    report.write_csvs(&cfg.out_dir)?;
    print_report(&report);
    Ok(())
}

fn print_report(report: &ExperimentReport) {
    let refs = &report.references;
    for (name, v) in [("RO", refs.ro), ("RWS", refs.rws), ("RT", refs.rt)] {
        if let Some(v) = v {
            println!("{name} {}", sig(v));
        }
    }
    for s in &report.summaries {
        let mean = |m: &str| report.summary(s.eps, m).map(|st| sig(st.mean)).unwrap_or_else(|| "-".into());
        let failed = report.rows.iter().filter(|r| r.eps == s.eps && r.error.is_some()).count();
        println!(
            "eps {} N {} mean_gap {} mean_violation {} failed {failed}",
            s.eps,
            s.n,
            mean("gap"),
            mean("violation")
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = if e.is_solver_failure() { "solver" } else { "input" };
            eprintln!("{}", serde_json::json!({ "error": kind, "message": e.to_string() }));
            ExitCode::from(if e.is_solver_failure() { 3 } else { 1 })
        }
    }
}
