use crate::{simplex, ExternalSolver, LpError, LpInstance, SimplexOptions, SolveResult};

/// Largest instance (in variables) the built-in simplex accepts unless forced.
pub const BUILTIN_VAR_LIMIT: usize = 30_000;

/// Anything that can solve an [`LpInstance`].
pub trait LpSolver: Sync {
    fn solve(&self, lp: &LpInstance) -> Result<SolveResult, LpError>;
}

#[derive(Clone, Debug, Default)]
pub struct BuiltinSolver {
    pub options: SimplexOptions,
    /// Skip the size guard.
    pub force: bool,
}

impl LpSolver for BuiltinSolver {
    fn solve(&self, lp: &LpInstance) -> Result<SolveResult, LpError> {
        if !self.force && lp.num_vars() > BUILTIN_VAR_LIMIT {
            return Err(LpError::SizeLimit { vars: lp.num_vars(), limit: BUILTIN_VAR_LIMIT });
        }
        simplex::solve(lp, &self.options)
    }
}

/// Solver selection used by the higher layers.
#[derive(Clone, Debug)]
pub enum SolverChoice {
    Builtin(BuiltinSolver),
    External(ExternalSolver),
    /// Built-in below the size limit, external above it.
    Auto { builtin: BuiltinSolver, external: ExternalSolver },
}

impl Default for SolverChoice {
    fn default() -> Self {
        SolverChoice::Builtin(BuiltinSolver::default())
    }
}

impl SolverChoice {
    /// Built-in solver, routing oversized instances to `SWC_EXTERNAL_SOLVER` when set.
    pub fn from_env() -> Self {
        match ExternalSolver::from_env() {
            Some(external) => SolverChoice::Auto { builtin: BuiltinSolver::default(), external },
            None => SolverChoice::default(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SolverChoice::Builtin(b) if b.force => "builtin (forced)".into(),
            SolverChoice::Builtin(_) => "builtin".into(),
            SolverChoice::External(e) => format!("external `{}`", e.command_line()),
            SolverChoice::Auto { external, .. } => format!("builtin, external `{}` above limit", external.command_line()),
        }
    }
}

impl LpSolver for SolverChoice {
    fn solve(&self, lp: &LpInstance) -> Result<SolveResult, LpError> {
        match self {
            SolverChoice::Builtin(b) => b.solve(lp),
            SolverChoice::External(e) => e.solve(lp),
            SolverChoice::Auto { builtin, external } => {
                if builtin.force || lp.num_vars() <= BUILTIN_VAR_LIMIT {
                    builtin.solve(lp)
                } else {
                    external.solve(lp)
                }
            }
        }
    }
}

impl<S: LpSolver + ?Sized> LpSolver for &S {
    fn solve(&self, lp: &LpInstance) -> Result<SolveResult, LpError> {
        (**self).solve(lp)
    }
}
