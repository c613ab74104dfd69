//! Run configuration shared by the experiment commands.
//!
//! A config file is a JSON object with the fields of [`RunConfig`]; absent
//! fields take their defaults. Command-line flags override file values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swc_lp::solver::BuiltinSolver;
use swc_lp::{ExternalSolver, SolverChoice};

use crate::builders::Strategy;
use crate::experiment::{ExperimentOptions, DESK_EPSILONS};
use crate::inventory::{standard_problem, DemandVariant};
use crate::problem_file::read_problem;
use crate::{RobustProblem, SwcError};

/// Validation batches under `paper_scale`.
pub const PAPER_SCALE_BATCHES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Builtin,
    External,
    /// Built-in below its size limit, external above it.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyName {
    Full,
    Generation,
}

impl From<StrategyName> for Strategy {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::Full => Strategy::Full,
            StrategyName::Generation => Strategy::Generation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Problem file; takes precedence over `benchmark`.
    pub problem: Option<PathBuf>,
    /// Built-in benchmark name (`inventory`).
    pub benchmark: Option<String>,
    pub stages: usize,
    pub variant: DemandVariant,
    pub epsilons: Vec<f64>,
    pub beta: f64,
    /// Complexity constant; defaults to the number of first-stage decisions.
    pub n0: Option<usize>,
    pub instances: usize,
    pub base_seed: u64,
    pub jobs: usize,
    pub solver: SolverKind,
    pub solver_cmd: Option<String>,
    pub force_builtin: bool,
    pub out_dir: PathBuf,
    /// Validation batches `L`; `paper_scale` raises the default to 1000.
    pub validation_batches: Option<usize>,
    pub paper_scale: bool,
    pub bounds: bool,
    pub timings: bool,
    pub strategy: StrategyName,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            problem: None,
            benchmark: None,
            stages: 5,
            variant: DemandVariant::Continuous,
            epsilons: DESK_EPSILONS.to_vec(),
            beta: 0.001,
            n0: None,
            instances: 100,
            base_seed: 1,
            jobs: 1,
            solver: SolverKind::Builtin,
            solver_cmd: None,
            force_builtin: false,
            out_dir: PathBuf::from("results"),
            validation_batches: None,
            paper_scale: false,
            bounds: false,
            timings: false,
            strategy: StrategyName::Generation,
        }
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, SwcError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| SwcError::File { path: path.display().to_string(), message: e.to_string() })?;
        serde_json::from_str(&text).map_err(|e| SwcError::File { path: path.display().to_string(), message: e.to_string() })
    }

    pub fn problem(&self) -> Result<RobustProblem, SwcError> {
        if let Some(p) = &self.problem {
            return read_problem(p);
        }
        match self.benchmark.as_deref() {
            Some("inventory") => standard_problem(self.stages, self.variant),
            Some(other) => Err(SwcError::Domain(format!("unknown benchmark `{other}` (known: inventory)"))),
            None => Err(SwcError::Domain("no problem file or benchmark given".into())),
        }
    }

    pub fn solver(&self) -> Result<SolverChoice, SwcError> {
        let builtin = BuiltinSolver { force: self.force_builtin, ..Default::default() };
        let external = || -> Result<ExternalSolver, SwcError> {
            match &self.solver_cmd {
                Some(cmd) => Ok(ExternalSolver::new(cmd)?),
                None => ExternalSolver::from_env().ok_or(SwcError::Lp(swc_lp::LpError::NotConfigured)),
            }
        };
        Ok(match self.solver {
            SolverKind::Builtin => SolverChoice::Builtin(builtin),
            SolverKind::External => SolverChoice::External(external()?),
            SolverKind::Auto => SolverChoice::Auto { builtin, external: external()? },
        })
    }

    pub fn validation_batches(&self) -> usize {
        self.validation_batches.unwrap_or(if self.paper_scale { PAPER_SCALE_BATCHES } else { 100 })
    }

    pub fn experiment_options(&self, problem: &RobustProblem) -> ExperimentOptions {
        ExperimentOptions {
            epsilons: self.epsilons.clone(),
            beta: self.beta,
            n0: self.n0.unwrap_or(problem.model.n1()),
            instances: self.instances,
            base_seed: self.base_seed,
            jobs: self.jobs,
            validation_batches: self.validation_batches(),
            validation_per_batch: None,
            bounds: self.bounds,
            strategy: self.strategy.into(),
            timings: self.timings,
            progress: false,
        }
    }
}
