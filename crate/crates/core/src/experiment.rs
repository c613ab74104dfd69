//! Multi-instance experiments: per-instance rows, per-ε summaries and CSV output.
//!
//! Instance `k` of every ε level uses seed `base_seed + k`; training paths
//! come from stream 0 of that seed and validation paths from stream 1.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use swc_lp::LpSolver;

use crate::builders::{exact_solve, solve_swc_with, sws_value, swct_solve_with, ExactMode, ExactOptions, Strategy, TailPolicy};
use crate::complexity::sample_complexity;
use crate::sampling::draw_paths;
use crate::tree::ScenarioPrefixTree;
use crate::validation::{empirical_violation, optimality_gap};
use crate::{RobustProblem, SwcError};

pub const INSTANCE_HEADER: [&str; 11] =
    ["eps", "instance", "seed", "N", "swc_value", "gap", "violation", "sws", "swct", "ro_exact", "runtime_ms"];
pub const SUMMARY_HEADER: [&str; 8] = ["metric", "count", "mean", "min", "q1", "median", "q3", "max"];

/// ε levels of the desk-scale grid.
pub const DESK_EPSILONS: [f64; 5] = [0.3, 0.2, 0.1, 0.05, 0.01];
/// Full ε grid, down to 0.025%.
pub const PAPER_EPSILONS: [f64; 9] = [0.3, 0.2, 0.1, 0.05, 0.01, 0.005, 0.001, 0.0005, 0.00025];

#[derive(Clone, Debug)]
pub struct ExperimentOptions {
    pub epsilons: Vec<f64>,
    pub beta: f64,
    pub n0: usize,
    pub instances: usize,
    pub base_seed: u64,
    pub jobs: usize,
    /// Validation batches `L`; zero skips validation.
    pub validation_batches: usize,
    /// Paths per validation batch; `None` uses the training size `N`.
    pub validation_per_batch: Option<usize>,
    /// Also compute the sampled wait-and-see and two-stage relaxation values.
    pub bounds: bool,
    pub strategy: Strategy,
    /// Record wall time per instance (makes the CSV run-dependent).
    pub timings: bool,
    /// Print one line per finished instance to stderr.
    pub progress: bool,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            epsilons: DESK_EPSILONS.to_vec(),
            beta: 0.001,
            n0: 4,
            instances: 100,
            base_seed: 1,
            jobs: 1,
            validation_batches: 100,
            validation_per_batch: None,
            bounds: false,
            strategy: Strategy::Generation,
            timings: false,
            progress: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct References {
    pub ro: Option<f64>,
    pub rws: Option<f64>,
    pub rt: Option<f64>,
}

impl References {
    /// Exact references; a mode that cannot be computed is left empty.
    pub fn compute(problem: &RobustProblem, solver: &dyn LpSolver) -> (References, Vec<String>) {
        let mut notes = Vec::new();
        let mut get = |mode: ExactMode| match exact_solve(problem, mode, &ExactOptions::default(), solver) {
            Ok(s) => Some(s.value),
            Err(e) => {
                notes.push(format!("{}: {e}", mode.as_str()));
                None
            }
        };
        let r = References { ro: get(ExactMode::Ro), rws: get(ExactMode::Rws), rt: get(ExactMode::Rt) };
        (r, notes)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRow {
    pub eps: f64,
    pub instance: usize,
    pub seed: u64,
    pub n: usize,
    pub swc_value: Option<f64>,
    pub gap: Option<f64>,
    pub violation: Option<f64>,
    pub sws: Option<f64>,
    pub swct: Option<f64>,
    pub ro_exact: Option<f64>,
    pub runtime_ms: Option<u128>,
    pub error: Option<String>,
    /// Lower-bound relations that failed beyond tolerance.
    pub chain_flags: Vec<String>,
}

/// Order statistics; quartiles interpolate linearly between order statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(values: &[f64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(Stats {
        count: v.len(),
        mean: v.iter().sum::<f64>() / v.len() as f64,
        min: v[0],
        q1: quantile(&v, 0.25),
        median: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[v.len() - 1],
    })
}

#[derive(Clone, Debug)]
pub struct EpsSummary {
    pub eps: f64,
    pub n: usize,
    /// `(metric, stats)` for every metric with at least one value.
    pub metrics: Vec<(String, Stats)>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub references: References,
    pub reference_notes: Vec<String>,
    pub rows: Vec<InstanceRow>,
    pub summaries: Vec<EpsSummary>,
}

fn metric_values(rows: &[InstanceRow], refs: &References) -> Vec<(String, Vec<f64>)> {
    let pick = |f: &dyn Fn(&InstanceRow) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<f64>>();
    let vs_ref = |v: Option<f64>, r: Option<f64>| match (v, r) {
        (Some(v), Some(r)) if r != 0.0 => Some((v - r) / r),
        _ => None,
    };
    vec![
        ("swc_value".into(), pick(&|r| r.swc_value)),
        ("gap".into(), pick(&|r| r.gap)),
        ("violation".into(), pick(&|r| r.violation)),
        ("sws".into(), pick(&|r| r.sws)),
        ("sws_gap_rws".into(), pick(&|r| vs_ref(r.sws, refs.rws))),
        ("swct".into(), pick(&|r| r.swct)),
        ("swct_gap_rt".into(), pick(&|r| vs_ref(r.swct, refs.rt))),
    ]
}

impl ExperimentReport {
    /// Recomputes the per-ε summaries from the rows.
    pub fn summarize(rows: &[InstanceRow], refs: &References, epsilons: &[f64]) -> Vec<EpsSummary> {
        epsilons
            .iter()
            .map(|&eps| {
                let cell: Vec<InstanceRow> = rows.iter().filter(|r| r.eps == eps).cloned().collect();
                let n = cell.first().map_or(0, |r| r.n);
                let metrics = metric_values(&cell, refs)
                    .into_iter()
                    .filter_map(|(name, v)| summarize(&v).map(|s| (name, s)))
                    .collect();
                EpsSummary { eps, n, metrics }
            })
            .collect()
    }

    pub fn summary(&self, eps: f64, metric: &str) -> Option<&Stats> {
        self.summaries.iter().find(|s| s.eps == eps)?.metrics.iter().find(|(m, _)| m == metric).map(|(_, s)| s)
    }

    pub fn write_csvs(&self, dir: impl AsRef<Path>) -> Result<(), SwcError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("instances.csv"))?;
        w.write_record(INSTANCE_HEADER)?;
        for r in &self.rows {
            w.write_record([
                fmt(r.eps),
                r.instance.to_string(),
                r.seed.to_string(),
                r.n.to_string(),
                opt(r.swc_value),
                opt(r.gap),
                opt(r.violation),
                opt(r.sws),
                opt(r.swct),
                opt(r.ro_exact),
                r.runtime_ms.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;

        for s in &self.summaries {
            let mut w = csv::Writer::from_path(dir.join(format!("summary_eps_{}.csv", fmt(s.eps))))?;
            w.write_record(SUMMARY_HEADER)?;
            for (name, st) in &s.metrics {
                w.write_record([
                    name.clone(),
                    st.count.to_string(),
                    fmt(st.mean),
                    fmt(st.min),
                    fmt(st.q1),
                    fmt(st.median),
                    fmt(st.q3),
                    fmt(st.max),
                ])?;
            }
            w.flush()?;
        }

        let mut w = csv::Writer::from_path(dir.join("references.csv"))?;
        w.write_record(["mode", "value"])?;
        for (mode, v) in [("RO", self.references.ro), ("RWS", self.references.rws), ("RT", self.references.rt)] {
            w.write_record([mode.to_string(), opt(v)])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("errors.csv"))?;
        w.write_record(["eps", "instance", "seed", "kind", "message"])?;
        for note in &self.reference_notes {
            w.write_record(["", "", "", "reference", note.as_str()])?;
        }
        for r in &self.rows {
            let head = [fmt(r.eps), r.instance.to_string(), r.seed.to_string()];
            if let Some(e) = &r.error {
                w.write_record(head.iter().map(String::as_str).chain(["error", e.as_str()]))?;
            }
            for f in &r.chain_flags {
                w.write_record(head.iter().map(String::as_str).chain(["chain", f.as_str()]))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// Tolerance for the lower-bound relations.
const CHAIN_TOL: f64 = 1e-6;

fn chain_flags(row: &InstanceRow, refs: &References) -> Vec<String> {
    let mut out = Vec::new();
    let mut le = |a: Option<f64>, b: Option<f64>, what: &str| {
        if let (Some(a), Some(b)) = (a, b) {
            if a > b + CHAIN_TOL * (1.0 + b.abs()) {
                out.push(format!("{what}: {a} > {b}"));
            }
        }
    };
    le(row.swc_value, refs.ro, "SwC <= RO");
    le(row.sws, refs.rws, "SWS <= RWS");
    le(row.swct, refs.rt, "SwCT <= RT");
    le(row.sws, row.swct, "SWS <= SwCT");
    le(row.swct, row.swc_value, "SwCT <= SwC");
    out
}

fn run_instance(
    problem: &RobustProblem,
    opts: &ExperimentOptions,
    refs: &References,
    eps: f64,
    n: usize,
    instance: usize,
    solver: &dyn LpSolver,
) -> InstanceRow {
    let seed = opts.base_seed.wrapping_add(instance as u64);
    let start = Instant::now();
    let mut row = InstanceRow {
        eps,
        instance,
        seed,
        n,
        swc_value: None,
        gap: None,
        violation: None,
        sws: None,
        swct: None,
        ro_exact: refs.ro,
        runtime_ms: None,
        error: None,
        chain_flags: Vec::new(),
    };
    let result = (|| -> Result<(), SwcError> {
        let paths = draw_paths(&problem.set, n, seed);
        let tree = ScenarioPrefixTree::build(paths.clone())?;
        let sol = solve_swc_with(&problem.model, &tree, solver, opts.strategy)?;
        row.swc_value = Some(sol.value);
        if let Some(ro) = refs.ro {
            row.gap = Some(optimality_gap(sol.value, ro)?);
        }
        let per_batch = opts.validation_per_batch.unwrap_or(n);
        if opts.validation_batches > 0 {
            row.violation =
                Some(empirical_violation(problem, &sol.x1, sol.value, opts.validation_batches, per_batch, seed, solver)?);
        }
        if opts.bounds {
            row.sws = Some(sws_value(&problem.model, &paths, solver)?.0);
            // with no shared prefix the relaxation is the same LP
            row.swct = Some(if tree.node_counts().iter().all(|&c| c == n) {
                sol.value
            } else {
                swct_solve_with(&problem.model, &paths, &TailPolicy::Sampled, solver, opts.strategy)?.value
            });
        }
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    if opts.timings {
        row.runtime_ms = Some(start.elapsed().as_millis());
    }
    row.chain_flags = chain_flags(&row, refs);
    row
}

/// Runs every `(ε, instance)` cell on a pool of `opts.jobs` workers.
/// Per-instance failures are recorded in the rows; the run continues.
pub fn run_experiment(problem: &RobustProblem, opts: &ExperimentOptions, solver: &dyn LpSolver) -> Result<ExperimentReport, SwcError> {
    let (refs, notes) = References::compute(problem, solver);
    run_experiment_with_references(problem, opts, refs, notes, solver)
}

pub fn run_experiment_with_references(
    problem: &RobustProblem,
    opts: &ExperimentOptions,
    references: References,
    reference_notes: Vec<String>,
    solver: &dyn LpSolver,
) -> Result<ExperimentReport, SwcError> {
    if opts.instances == 0 {
        return Err(SwcError::Domain("at least one instance is required".into()));
    }
    let mut tasks = Vec::new();
    for &eps in &opts.epsilons {
        let n = sample_complexity(eps, opts.beta, opts.n0)?;
        for k in 0..opts.instances {
            tasks.push((eps, n, k));
        }
    }
    let slots: Vec<Mutex<Option<InstanceRow>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let jobs = opts.jobs.clamp(1, tasks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(eps, n, k)) = tasks.get(i) else { break };
                let row = run_instance(problem, opts, &references, eps, n, k, solver);
                if opts.progress {
                    eprintln!(
                        "eps={eps} instance {}/{} N={n} value={} gap={} violation={}{}",
                        k + 1,
                        opts.instances,
                        opt(row.swc_value),
                        opt(row.gap),
                        opt(row.violation),
                        row.error.as_ref().map(|e| format!(" error: {e}")).unwrap_or_default()
                    );
                }
                *slots[i].lock().expect("result slot") = Some(row);
            });
        }
    });
    let rows: Vec<InstanceRow> =
        slots.into_iter().map(|s| s.into_inner().expect("result slot").expect("every task ran")).collect();
    let summaries = ExperimentReport::summarize(&rows, &references, &opts.epsilons);
    Ok(ExperimentReport { references, reference_notes, rows, summaries })
}
