//! Multistage robust linear programs solved by scenarios with certificates.
//!
//! A [`RobustProblem`] pairs a [`MultistageRobustLP`] with an
//! [`UncertaintySet`]. Sampled paths are grouped into a
//! [`ScenarioPrefixTree`]; [`builders::build_swc`] turns the tree into one
//! LP whose certificates are shared exactly along common prefixes.

pub mod builders;
pub mod complexity;
pub mod config;
pub mod experiment;
pub mod inventory;
pub mod model;
pub mod problem_file;
pub mod sampling;
pub mod tree;
pub mod uncertainty;
pub mod validation;

use swc_lp::{LpError, Status};
use thiserror::Error;

pub use builders::{build_swc, exact_solve, exact_value, solve_swc, sws_value, swct_value, ExactMode, TailPolicy};
pub use complexity::{binomial_violation_bound, min_samples_exact, sample_complexity};
pub use model::{AffineMap, MultistageRobustLP, StageDims};
pub use swc_lp;
pub use tree::ScenarioPrefixTree;
pub use uncertainty::{ScenarioPath, StageSupport, UncertaintySet};

#[derive(Debug, Error)]
pub enum SwcError {
    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),
    #[error("{0}")]
    Domain(String),
    #[error("{context} ended with status {}", .status.as_str())]
    Solver { context: String, status: Status },
    #[error("path {index}: {source}")]
    Path { index: usize, source: Box<SwcError> },
    #[error("vertex tree has {leaves} leaves, above the cap of {cap}")]
    LeafCap { leaves: usize, cap: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SwcError {
    /// True when the failure came from an LP solve rather than from input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            SwcError::Solver { .. } => true,
            SwcError::Lp(e) => !matches!(e, LpError::Io(_) | LpError::Parse { .. }),
            SwcError::Path { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }
}

/// Model plus uncertainty set with matching dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct RobustProblem {
    pub model: MultistageRobustLP,
    pub set: UncertaintySet,
}

impl RobustProblem {
    pub fn new(model: MultistageRobustLP, set: UncertaintySet) -> Result<Self, SwcError> {
        model.validate()?;
        if set.dims() != model.xi_dims {
            return Err(SwcError::Domain(format!(
                "uncertainty dimensions {:?} do not match model {:?}",
                set.dims(),
                model.xi_dims
            )));
        }
        Ok(RobustProblem { model, set })
    }
}
