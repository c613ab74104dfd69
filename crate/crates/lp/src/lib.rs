//! Linear programming backend: a sparse instance type, a built-in bounded
//! two-phase revised simplex, CPLEX-style LP text interchange and an adapter
//! that hands instances to an external solver process.

use std::time::Duration;

use thiserror::Error;

pub mod external;
pub mod instance;
pub mod lpfile;
mod lu;
pub mod simplex;
pub mod solver;

pub use external::ExternalSolver;
pub use instance::{LpInstance, Row, Sense};
pub use simplex::{Pricing, SimplexOptions};
pub use solver::{LpSolver, SolverChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    /// Objective value, present only when `status` is `Optimal`.
    pub objective: Option<f64>,
    /// Primal values of the structural variables (last iterate unless optimal).
    pub x: Vec<f64>,
    /// Row duals `d objective / d rhs`; empty when the backend does not report them.
    pub duals: Vec<f64>,
    pub iterations: usize,
    pub elapsed: Duration,
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("variable {var} has invalid bounds [{lower}, {upper}]")]
    InvalidBounds { var: usize, lower: f64, upper: f64 },
    #[error("row {row} references variable {var} but the instance has {vars} variables")]
    BadIndex { row: usize, var: usize, vars: usize },
    #[error("non-finite data: {0}")]
    NonFinite(String),
    #[error("instance has {vars} variables, above the built-in solver limit of {limit}; use an external solver or force the built-in one")]
    SizeLimit { vars: usize, limit: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("LP file parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no external solver configured (set SWC_EXTERNAL_SOLVER or pass a solver command)")]
    NotConfigured,
    #[error("external solver executable not found: {0}")]
    MissingExecutable(String),
    #[error("external solver exited with status {code:?}: {stderr}")]
    SolverExit { code: Option<i32>, stderr: String },
    #[error("could not parse solver solution: {0}")]
    UnparsableSolution(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
