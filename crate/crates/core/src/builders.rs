//! Deterministic LPs built from a robust model and scenario data.
//!
//! Variable order: `γ`, then `x¹`, then one certificate block per tree node,
//! stage by stage and, within a stage, in order of first appearance. Rows
//! that depend only on a shared prefix are emitted once per node.

use std::ops::Range;

use swc_lp::{LpInstance, LpSolver, Sense, SolveResult, Status};

use crate::model::MultistageRobustLP;
use crate::tree::ScenarioPrefixTree;
use crate::uncertainty::ScenarioPath;
use crate::{RobustProblem, SwcError};

/// Default cap on vertex-tree leaves for exact references.
pub const DEFAULT_LEAF_CAP: usize = 4096;

#[derive(Clone, Debug)]
pub struct VariableIndexMap {
    pub gamma: usize,
    pub x1: Range<usize>,
    /// `blocks[t-2][k]`: stage-`t` certificate owned by stage-`(t-1)` node `k`.
    pub blocks: Vec<Vec<Range<usize>>>,
}

impl VariableIndexMap {
    /// Stage-`t` certificate used by path `i`.
    pub fn certificate(&self, tree: &ScenarioPrefixTree, i: usize, t: usize) -> Range<usize> {
        self.blocks[t - 2][tree.path_to_node[i][t - 2]].clone()
    }
}

/// Source of the previous stage's decision in a dynamics row.
#[derive(Clone, Copy)]
enum Parent<'a> {
    Vars(usize),
    Fixed(&'a [f64]),
}

fn add_block(lp: &mut LpInstance, lower: &[f64], upper: &[f64], name: impl Fn(usize) -> String) -> Range<usize> {
    let start = lp.num_vars();
    for j in 0..lower.len() {
        lp.add_named_var(name(j), lower[j], upper[j], 0.0);
    }
    start..lp.num_vars()
}

/// Emits the stage-`t` rows evaluated at `xi` (flattened `ξ^1..ξ^{t-1}`) and
/// returns the stage cost as `(variable, coefficient)` terms.
fn emit_stage(
    lp: &mut LpInstance,
    model: &MultistageRobustLP,
    t: usize,
    xi: &[f64],
    parent: Parent,
    block: usize,
    label: &str,
) -> Vec<(usize, f64)> {
    let s = model.stage(t);
    let m = model.dims.m[t - 1];
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    let mut rhs = s.h_map.evaluate_vector(xi);
    for (r, c, v) in s.t_map.evaluate_sparse(xi) {
        match parent {
            Parent::Vars(p) => rows[r].push((p + c, v)),
            Parent::Fixed(x) => rhs[r] -= v * x[c],
        }
    }
    for (r, c, v) in s.w_map.evaluate_sparse(xi) {
        rows[r].push((block + c, v));
    }
    for (r, coeffs) in rows.into_iter().enumerate() {
        lp.add_named_row(format!("{label}_r{r}"), coeffs, s.senses[r], rhs[r]);
    }
    s.c_map.evaluate_sparse(xi).into_iter().map(|(j, _, v)| (block + j, v)).collect()
}

fn check_tree(model: &MultistageRobustLP, tree: &ScenarioPrefixTree) -> Result<(), SwcError> {
    model.validate()?;
    if tree.stages() != model.horizon() - 1 {
        return Err(SwcError::Domain(format!(
            "scenario paths have {} stages, model needs {}",
            tree.stages(),
            model.horizon() - 1
        )));
    }
    for (i, p) in tree.paths.iter().enumerate() {
        for (s, xi) in p.realizations.iter().enumerate() {
            if xi.len() != model.xi_dims[s] {
                return Err(SwcError::Domain(format!(
                    "path {i}, stage {}: dimension {} but model expects {}",
                    s + 1,
                    xi.len(),
                    model.xi_dims[s]
                )));
            }
        }
    }
    Ok(())
}

/// Scenario-with-certificates LP: minimize `γ` subject to the first-stage
/// rows, one dynamics block per tree node and one epigraph row per leaf.
pub fn build_swc(model: &MultistageRobustLP, tree: &ScenarioPrefixTree) -> Result<(LpInstance, VariableIndexMap), SwcError> {
    check_tree(model, tree)?;
    Ok(assemble(model, tree, None))
}

/// `(variables, rows)` of [`build_swc`] on `tree`, without building it.
pub fn swc_size(model: &MultistageRobustLP, tree: &ScenarioPrefixTree) -> (usize, usize) {
    let h = model.horizon();
    let (mut vars, mut rows) = (1 + model.n1(), model.dims.m[0]);
    for t in 2..=h {
        let k = tree.nodes[t - 2].len();
        vars += k * model.dims.n[t - 1];
        rows += k * model.dims.m[t - 1];
    }
    (vars, rows + tree.nodes[h - 2].len())
}

/// The same LP with `x¹` fixed: only `γ` and the certificates remain, and
/// its optimum is the worst leaf cost reachable from `x¹`.
pub fn build_fixed_first_stage(
    model: &MultistageRobustLP,
    tree: &ScenarioPrefixTree,
    x1: &[f64],
) -> Result<(LpInstance, VariableIndexMap), SwcError> {
    check_tree(model, tree)?;
    if x1.len() != model.n1() {
        return Err(SwcError::Domain(format!("x1 has length {}, expected {}", x1.len(), model.n1())));
    }
    Ok(assemble(model, tree, Some(x1)))
}

fn assemble(model: &MultistageRobustLP, tree: &ScenarioPrefixTree, fixed_x1: Option<&[f64]>) -> (LpInstance, VariableIndexMap) {
    let h = model.horizon();
    let mut lp = LpInstance::new();
    let gamma = lp.add_named_var("gamma", f64::NEG_INFINITY, f64::INFINITY, 1.0);
    let f = &model.first;
    let x1 = match fixed_x1 {
        Some(_) => lp.num_vars()..lp.num_vars(),
        None => {
            let x1 = add_block(&mut lp, &f.lower, &f.upper, |j| format!("x1_{j}"));
            let mut rows1: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.dims.m[0]];
            for &(r, c, v) in &f.a {
                rows1[r].push((x1.start + c, v));
            }
            for (r, coeffs) in rows1.into_iter().enumerate() {
                lp.add_named_row(format!("s1_r{r}"), coeffs, f.senses[r], f.h[r]);
            }
            x1
        }
    };

    let mut blocks: Vec<Vec<Range<usize>>> = Vec::with_capacity(h - 1);
    let mut costs: Vec<Vec<Vec<(usize, f64)>>> = Vec::with_capacity(h - 1);
    for t in 2..=h {
        let s = model.stage(t);
        let mut stage_blocks = Vec::with_capacity(tree.nodes[t - 2].len());
        let mut stage_costs = Vec::with_capacity(tree.nodes[t - 2].len());
        for (k, node) in tree.nodes[t - 2].iter().enumerate() {
            let block = add_block(&mut lp, &s.lower, &s.upper, |j| format!("x{t}_n{k}_{j}"));
            let parent = match (node.parent, fixed_x1) {
                (None, Some(x)) => Parent::Fixed(x),
                (None, None) => Parent::Vars(x1.start),
                (Some(p), _) => Parent::Vars(blocks[t - 3][p].start),
            };
            let xi = tree.node_path(t - 1, k).flatten(t - 1);
            stage_costs.push(emit_stage(&mut lp, model, t, &xi, parent, block.start, &format!("s{t}_n{k}")));
            stage_blocks.push(block);
        }
        blocks.push(stage_blocks);
        costs.push(stage_costs);
    }

    let (c1, rhs): (Vec<(usize, f64)>, f64) = match fixed_x1 {
        Some(x) => (Vec::new(), -f.c.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()),
        None => (f.c.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(j, &v)| (x1.start + j, v)).collect(), 0.0),
    };
    for (leaf, node) in tree.nodes[h - 2].iter().enumerate() {
        let mut coeffs = c1.clone();
        coeffs.push((gamma, -1.0));
        let path = &tree.path_to_node[node.representative];
        for t in 2..=h {
            coeffs.extend_from_slice(&costs[t - 2][path[t - 2]]);
        }
        lp.add_named_row(format!("epi_{leaf}"), coeffs, Sense::Le, rhs);
    }
    (lp, VariableIndexMap { gamma, x1, blocks })
}

/// Optimal `(x¹, γ)` of a scenario program.
#[derive(Clone, Debug)]
pub struct SwcSolution {
    pub value: f64,
    pub x1: Vec<f64>,
    pub num_vars: usize,
    pub num_rows: usize,
    pub iterations: usize,
}

pub(crate) fn require_optimal(res: SolveResult, what: &str) -> Result<SolveResult, SwcError> {
    match res.status {
        Status::Optimal => Ok(res),
        status => Err(SwcError::Solver { context: what.to_owned(), status }),
    }
}

/// How a scenario LP is solved. Both give the optimum of the same LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Build the whole LP and solve it once.
    Full,
    /// Solve on a growing subset of stage-1 subtrees, adding every subtree
    /// whose worst cost at the current `x¹` exceeds `γ`, until none does.
    Generation,
}

/// Subtrees added in the first round and at most per later round.
const GENERATION_BATCH: usize = 16;

fn full_solve(model: &MultistageRobustLP, tree: &ScenarioPrefixTree, solver: &dyn LpSolver, what: &str) -> Result<SwcSolution, SwcError> {
    let (lp, map) = build_swc(model, tree)?;
    let res = require_optimal(solver.solve(&lp)?, what)?;
    Ok(SwcSolution {
        value: res.x[map.gamma],
        x1: res.x[map.x1.clone()].to_vec(),
        num_vars: lp.num_vars(),
        num_rows: lp.num_rows(),
        iterations: res.iterations,
    })
}

/// Worst leaf cost of `tree` reachable from a fixed `x¹`; `+inf` if no
/// recourse exists, `-inf` if costs are unbounded below.
pub fn fixed_first_stage_value(
    model: &MultistageRobustLP,
    tree: &ScenarioPrefixTree,
    x1: &[f64],
    solver: &dyn LpSolver,
) -> Result<f64, SwcError> {
    let (lp, map) = build_fixed_first_stage(model, tree, x1)?;
    let res = solver.solve(&lp)?;
    match res.status {
        Status::Optimal => Ok(res.x[map.gamma]),
        Status::Infeasible => Ok(f64::INFINITY),
        Status::Unbounded => Ok(f64::NEG_INFINITY),
        status => Err(SwcError::Solver { context: "fixed first-stage LP".into(), status }),
    }
}

fn generation_solve(model: &MultistageRobustLP, tree: &ScenarioPrefixTree, solver: &dyn LpSolver, what: &str) -> Result<SwcSolution, SwcError> {
    check_tree(model, tree)?;
    let groups = tree.stage_one_groups();
    let mut active = vec![false; groups.len()];
    for a in active.iter_mut().take(GENERATION_BATCH) {
        *a = true;
    }
    let mut iterations = 0;
    loop {
        let chosen: Vec<usize> =
            groups.iter().zip(&active).filter(|(_, &a)| a).flat_map(|(g, _)| g.iter().copied()).collect();
        let sub = tree.restrict(&chosen)?;
        let mut sol = full_solve(model, &sub, solver, what)?;
        iterations += sol.iterations;
        let tol = 1e-9 * (1.0 + sol.value.abs());
        let mut violated: Vec<(f64, usize)> = Vec::new();
        for (k, g) in groups.iter().enumerate() {
            if active[k] {
                continue;
            }
            let v = fixed_first_stage_value(model, &tree.restrict(g)?, &sol.x1, solver)?;
            if v > sol.value + tol {
                violated.push((v - sol.value, k));
            }
        }
        if violated.is_empty() {
            (sol.num_vars, sol.num_rows) = swc_size(model, tree);
            sol.iterations = iterations;
            return Ok(sol);
        }
        // most violated first, ties by subtree order
        violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, k) in violated.iter().take(GENERATION_BATCH) {
            active[k] = true;
        }
    }
}

fn solve_tree(model: &MultistageRobustLP, tree: &ScenarioPrefixTree, solver: &dyn LpSolver, what: &str) -> Result<SwcSolution, SwcError> {
    solve_tree_with(model, tree, solver, Strategy::Full, what)
}

fn solve_tree_with(
    model: &MultistageRobustLP,
    tree: &ScenarioPrefixTree,
    solver: &dyn LpSolver,
    strategy: Strategy,
    what: &str,
) -> Result<SwcSolution, SwcError> {
    match strategy {
        Strategy::Full => full_solve(model, tree, solver, what),
        Strategy::Generation => generation_solve(model, tree, solver, what),
    }
}

pub fn solve_swc(model: &MultistageRobustLP, tree: &ScenarioPrefixTree, solver: &dyn LpSolver) -> Result<SwcSolution, SwcError> {
    solve_tree(model, tree, solver, "scenario-with-certificates LP")
}

pub fn solve_swc_with(
    model: &MultistageRobustLP,
    tree: &ScenarioPrefixTree,
    solver: &dyn LpSolver,
    strategy: Strategy,
) -> Result<SwcSolution, SwcError> {
    solve_tree_with(model, tree, solver, strategy, "scenario-with-certificates LP")
}

/// Deterministic multistage value along one path (all decisions anticipative).
pub fn deterministic_value(model: &MultistageRobustLP, path: &ScenarioPath, solver: &dyn LpSolver) -> Result<SwcSolution, SwcError> {
    let tree = ScenarioPrefixTree::build(vec![path.clone()])?;
    solve_tree(model, &tree, solver, "deterministic path LP")
}

/// Sampled wait-and-see value: the largest per-path deterministic optimum,
/// with the index of the path attaining it.
pub fn sws_value(model: &MultistageRobustLP, paths: &[ScenarioPath], solver: &dyn LpSolver) -> Result<(f64, usize), SwcError> {
    if paths.is_empty() {
        return Err(SwcError::Domain("wait-and-see bound needs at least one path".into()));
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, p) in paths.iter().enumerate() {
        let v = deterministic_value(model, p, solver).map_err(|e| SwcError::Path { index: i, source: Box::new(e) })?;
        if v.value > best.0 {
            best = (v.value, i);
        }
    }
    Ok(best)
}

/// How stages `2..H-1` are treated in the two-stage relaxation.
#[derive(Clone, Debug, PartialEq)]
pub enum TailPolicy {
    /// Keep each path's own realizations; only `x¹` is shared.
    Sampled,
    /// Replace `ξ^2..ξ^{H-1}` of every path by the given vectors.
    Fixed(Vec<Vec<f64>>),
}

/// Paths used by the two-stage relaxation under `tail`.
pub fn relaxation_paths(paths: &[ScenarioPath], tail: &TailPolicy) -> Vec<ScenarioPath> {
    match tail {
        TailPolicy::Sampled => paths.to_vec(),
        TailPolicy::Fixed(rest) => paths
            .iter()
            .map(|p| {
                let mut r = vec![p.realizations[0].clone()];
                r.extend(rest.iter().cloned());
                ScenarioPath::new(r)
            })
            .collect(),
    }
}

/// Scenario-with-certificates two-stage relaxation: `x¹` shared, every
/// later decision free to depend on the whole path.
pub fn swct_solve(
    model: &MultistageRobustLP,
    paths: &[ScenarioPath],
    tail: &TailPolicy,
    solver: &dyn LpSolver,
) -> Result<SwcSolution, SwcError> {
    swct_solve_with(model, paths, tail, solver, Strategy::Full)
}

pub fn swct_solve_with(
    model: &MultistageRobustLP,
    paths: &[ScenarioPath],
    tail: &TailPolicy,
    solver: &dyn LpSolver,
    strategy: Strategy,
) -> Result<SwcSolution, SwcError> {
    if let TailPolicy::Fixed(rest) = tail {
        if rest.len() + 2 != model.horizon() {
            return Err(SwcError::Domain(format!(
                "fixed tail has {} stages, expected {}",
                rest.len(),
                model.horizon() - 2
            )));
        }
    }
    let tree = ScenarioPrefixTree::without_sharing(relaxation_paths(paths, tail))?;
    solve_tree_with(model, &tree, solver, strategy, "two-stage relaxation LP")
}

pub fn swct_value(model: &MultistageRobustLP, paths: &[ScenarioPath], tail: &TailPolicy, solver: &dyn LpSolver) -> Result<f64, SwcError> {
    swct_solve(model, paths, tail, solver).map(|s| s.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMode {
    /// Nonanticipative robust problem on the vertex tree.
    Ro,
    /// Robust wait-and-see.
    Rws,
    /// Robust two-stage relaxation.
    Rt,
}

impl ExactMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExactMode::Ro => "RO",
            ExactMode::Rws => "RWS",
            ExactMode::Rt => "RT",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub leaf_cap: usize,
    /// Tail treatment for [`ExactMode::Rt`].
    pub tail: TailPolicy,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { leaf_cap: DEFAULT_LEAF_CAP, tail: TailPolicy::Sampled }
    }
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub mode: ExactMode,
    pub value: f64,
    /// First-stage decision (RO and RT only).
    pub x1: Option<Vec<f64>>,
    /// Worst vertex path (RWS only).
    pub worst_path: Option<usize>,
    pub leaves: usize,
}

/// Reference value on the vertex tree of the uncertainty set. Exact when the
/// worst case over the set is attained at vertices, as for right-hand-side
/// uncertainty entering affinely.
pub fn exact_solve(problem: &RobustProblem, mode: ExactMode, opts: &ExactOptions, solver: &dyn LpSolver) -> Result<ExactSolution, SwcError> {
    let leaves = problem.set.vertex_path_count();
    if leaves > opts.leaf_cap {
        return Err(SwcError::LeafCap { leaves, cap: opts.leaf_cap });
    }
    let paths = problem.set.vertex_paths();
    let model = &problem.model;
    Ok(match mode {
        ExactMode::Ro => {
            let s = solve_tree(model, &ScenarioPrefixTree::build(paths)?, solver, "exact robust LP")?;
            ExactSolution { mode, value: s.value, x1: Some(s.x1), worst_path: None, leaves }
        }
        ExactMode::Rws => {
            let (value, worst) = sws_value(model, &paths, solver)?;
            ExactSolution { mode, value, x1: None, worst_path: Some(worst), leaves }
        }
        ExactMode::Rt => {
            let paths = match opts.tail {
                // once the tail is fixed one path per stage-1 vertex suffices
                TailPolicy::Fixed(_) => {
                    let stride = paths.len() / problem.set.stage_vertices(1).len();
                    paths.into_iter().step_by(stride).collect()
                }
                TailPolicy::Sampled => paths,
            };
            let s = swct_solve(model, &paths, &opts.tail, solver)?;
            ExactSolution { mode, value: s.value, x1: Some(s.x1), worst_path: None, leaves }
        }
    })
}

pub fn exact_value(problem: &RobustProblem, mode: ExactMode, solver: &dyn LpSolver) -> Result<f64, SwcError> {
    exact_solve(problem, mode, &ExactOptions::default(), solver).map(|s| s.value)
}

/// Stage nominal vectors `ξ̄^2..ξ̄^{H-1}`, the default fixed tail.
pub fn nominal_tail(problem: &RobustProblem) -> Vec<Vec<f64>> {
    problem.set.stages[1..].iter().map(|s| s.nominal()).collect()
}

/// Recourse LP along `path` with `x¹` fixed: minimize `Σ_{t>=2} c^t x^t`.
pub fn recourse_lp(model: &MultistageRobustLP, x1: &[f64], path: &ScenarioPath) -> LpInstance {
    let mut lp = LpInstance::new();
    let mut prev: Option<usize> = None;
    let mut cost: Vec<(usize, f64)> = Vec::new();
    for t in 2..=model.horizon() {
        let s = model.stage(t);
        let block = add_block(&mut lp, &s.lower, &s.upper, |j| format!("x{t}_{j}"));
        let parent = match prev {
            None => Parent::Fixed(x1),
            Some(p) => Parent::Vars(p),
        };
        let xi = path.flatten(t - 1);
        cost.extend(emit_stage(&mut lp, model, t, &xi, parent, block.start, &format!("s{t}")));
        prev = Some(block.start);
    }
    for (j, c) in cost {
        let cur = lp.cost()[j];
        lp.set_cost(j, cur + c);
    }
    lp
}
