//! Hands instances to an external solver process.
//!
//! Contract: the command is invoked as `<command...> <lp_path> <solution_path>`.
//! It reads the LP file and writes a plain-text solution file:
//!
//! ```text
//! status optimal
//! objective 2.8
//! x 1.6
//! y 1.2
//! ```
//!
//! `status` is one of `optimal`, `infeasible`, `unbounded`, `iteration_limit`.
//! Variable lines are required only for an optimal status.

use std::collections::HashMap;
use std::io::ErrorKind;
use std::process::Command;
use std::time::Instant;

use crate::lpfile::{variable_names, write_lp};
use crate::{LpError, LpInstance, SolveResult, Status};

pub const ENV_VAR: &str = "SWC_EXTERNAL_SOLVER";

#[derive(Clone, Debug)]
pub struct ExternalSolver {
    command: Vec<String>,
}

impl ExternalSolver {
    /// Builds a solver from a whitespace-separated command line.
    pub fn new(command_line: &str) -> Result<Self, LpError> {
        let command: Vec<String> = command_line.split_whitespace().map(str::to_owned).collect();
        if command.is_empty() {
            return Err(LpError::NotConfigured);
        }
        Ok(ExternalSolver { command })
    }

    /// Reads the command from `SWC_EXTERNAL_SOLVER`.
    pub fn from_env() -> Option<Self> {
        std::env::var(ENV_VAR).ok().and_then(|s| ExternalSolver::new(&s).ok())
    }

    pub fn command_line(&self) -> String {
        self.command.join(" ")
    }

    pub fn solve(&self, lp: &LpInstance) -> Result<SolveResult, LpError> {
        lp.validate()?;
        let start = Instant::now();
        let dir = tempfile::tempdir()?;
        let lp_path = dir.path().join("model.lp");
        let sol_path = dir.path().join("model.sol");
        std::fs::write(&lp_path, write_lp(lp))?;
        let output = Command::new(&self.command[0])
            .args(&self.command[1..])
            .arg(&lp_path)
            .arg(&sol_path)
            .output()
            .map_err(|e| match e.kind() {
                ErrorKind::NotFound | ErrorKind::PermissionDenied => LpError::MissingExecutable(self.command[0].clone()),
                _ => LpError::Io(e),
            })?;
        if !output.status.success() {
            return Err(LpError::SolverExit {
                code: output.status.code(),
                stderr: String::from_utf8_lossy(&output.stderr).trim().to_owned(),
            });
        }
        let text = std::fs::read_to_string(&sol_path)
            .map_err(|e| LpError::UnparsableSolution(format!("cannot read solution file: {e}")))?;
        let mut result = parse_solution(&text, lp)?;
        result.elapsed = start.elapsed();
        Ok(result)
    }
}

/// Parses a solution file against the variable names `write_lp` assigns to `lp`.
pub fn parse_solution(text: &str, lp: &LpInstance) -> Result<SolveResult, LpError> {
    let bad = |m: String| LpError::UnparsableSolution(m);
    let names = variable_names(lp);
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(j, n)| (n.as_str(), j)).collect();
    let mut status = None;
    let mut objective = None;
    let mut x = vec![f64::NAN; lp.num_vars()];
    for (k, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let (Some(key), Some(value)) = (parts.next(), parts.next()) else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(bad(format!("line {}: expected `<key> <value>`", k + 1)));
        };
        if parts.next().is_some() {
            return Err(bad(format!("line {}: trailing fields", k + 1)));
        }
        let number = || value.parse::<f64>().map_err(|_| bad(format!("line {}: bad number `{value}`", k + 1)));
        match key {
            "status" => {
                status = Some(match value.to_ascii_lowercase().as_str() {
                    "optimal" => Status::Optimal,
                    "infeasible" => Status::Infeasible,
                    "unbounded" => Status::Unbounded,
                    "iteration_limit" => Status::IterationLimit,
                    other => return Err(bad(format!("unknown status `{other}`"))),
                })
            }
            "objective" => objective = Some(number()?),
            name => match index.get(name) {
                Some(&j) => x[j] = number()?,
                None => return Err(bad(format!("unknown variable `{name}`"))),
            },
        }
    }
    let status = status.ok_or_else(|| bad("missing status line".into()))?;
    if status == Status::Optimal {
        if let Some(j) = x.iter().position(|v| v.is_nan()) {
            return Err(bad(format!("no value for variable `{}`", names[j])));
        }
        if objective.is_none() {
            objective = Some(lp.objective_value(&x));
        }
    } else {
        objective = None;
        x.iter_mut().for_each(|v| *v = if v.is_nan() { 0.0 } else { *v });
    }
    Ok(SolveResult { status, objective, x, duals: Vec::new(), iterations: 0, elapsed: Default::default() })
}
