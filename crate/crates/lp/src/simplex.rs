//! Bounded-variable two-phase revised simplex.
//!
//! Every row `a·x (sense) b` gets a logical variable `r` with `a·x - r = 0`
//! and bounds encoding the sense. Rows whose logical cannot start feasible
//! receive an artificial column; phase one drives the artificials to zero,
//! phase two minimizes the true objective. The basis is held as a sparse LU
//! factorization with product-form updates and is refactorized periodically.
//!
//! Pricing is Dantzig's rule by default. After a run of degenerate pivots the
//! solver switches to Bland's smallest-index rule until the objective moves
//! again, which rules out cycling. `Pricing::Bland` uses Bland's rule throughout.

use std::time::Instant;

use crate::lu::Factor;
use crate::{LpError, LpInstance, Sense, SolveResult, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pricing {
    /// Largest reduced cost, falling back to Bland's rule while stalled.
    Dantzig,
    /// Bland's smallest-index rule for every pivot.
    Bland,
}

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Pivot limit; `None` means `50 * (rows + cols)`.
    pub max_iterations: Option<usize>,
    pub pricing: Pricing,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
    pub degenerate_switch: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            max_iterations: None,
            pricing: Pricing::Dantzig,
            refactor_every: 64,
            degenerate_switch: 50,
        }
    }
}

const PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free variable resting at zero.
    Zero,
}

enum Step {
    Optimal,
    Unbounded,
    Limit,
}

struct Simplex<'a> {
    opts: &'a SimplexOptions,
    n: usize,
    m: usize,
    // structural columns (CSC) and rows (CSR)
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    row_start: Vec<usize>,
    row_col: Vec<usize>,
    row_val: Vec<f64>,
    /// artificial k sits in row `art_row[k]` with coefficient `art_sign[k]`
    art_row: Vec<usize>,
    art_sign: Vec<f64>,
    art_of_row: Vec<usize>,
    true_cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    pos_of: Vec<usize>,
    d: Vec<f64>,
    factor: Factor,
    iterations: usize,
    max_iterations: usize,
    degenerate_run: usize,
    // scratch
    work: Vec<f64>,
    alpha: Vec<f64>,
    rho: Vec<f64>,
    acc: Vec<f64>,
    touched: Vec<usize>,
    in_touched: Vec<bool>,
}

/// Solves `lp` with the built-in simplex.
pub fn solve(lp: &LpInstance, opts: &SimplexOptions) -> Result<SolveResult, LpError> {
    lp.validate()?;
    let start = Instant::now();

    // Empty rows carry no variables: check them and drop them.
    let mut kept: Vec<usize> = Vec::with_capacity(lp.num_rows());
    for (i, row) in lp.rows().iter().enumerate() {
        if row.coeffs.is_empty() {
            if !row.sense.holds(0.0, row.rhs, opts.feasibility_tol) {
                return Ok(SolveResult {
                    status: Status::Infeasible,
                    objective: None,
                    x: vec![0.0; lp.num_vars()],
                    duals: vec![0.0; lp.num_rows()],
                    iterations: 0,
                    elapsed: start.elapsed(),
                });
            }
        } else {
            kept.push(i);
        }
    }

    let mut s = Simplex::new(lp, &kept, opts)?;
    let status = s.run()?;
    let x: Vec<f64> = s.x[..s.n].to_vec();
    let mut duals = vec![0.0; lp.num_rows()];
    if status == Status::Optimal {
        let y = s.duals();
        for (k, &i) in kept.iter().enumerate() {
            duals[i] = y[k];
        }
        let viol = lp.max_violation(&x);
        let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if viol > 1e-6 * scale {
            return Err(LpError::Numerical(format!("final point violates constraints by {viol:e}")));
        }
    }
    Ok(SolveResult {
        status,
        objective: (status == Status::Optimal).then(|| lp.objective_value(&x)),
        x,
        duals,
        iterations: s.iterations,
        elapsed: start.elapsed(),
    })
}

fn row_bounds(sense: Sense, rhs: f64) -> (f64, f64) {
    match sense {
        Sense::Le => (f64::NEG_INFINITY, rhs),
        Sense::Ge => (rhs, f64::INFINITY),
        Sense::Eq => (rhs, rhs),
    }
}

fn resting_point(l: f64, u: f64) -> (State, f64) {
    if l.is_finite() {
        (State::Lower, l)
    } else if u.is_finite() {
        (State::Upper, u)
    } else {
        (State::Zero, 0.0)
    }
}

impl<'a> Simplex<'a> {
    fn new(lp: &LpInstance, kept: &[usize], opts: &'a SimplexOptions) -> Result<Self, LpError> {
        let n = lp.num_vars();
        let m = kept.len();

        let mut row_start = Vec::with_capacity(m + 1);
        let mut row_col = Vec::new();
        let mut row_val = Vec::new();
        row_start.push(0);
        let mut col_count = vec![0usize; n];
        for &i in kept {
            for &(j, a) in &lp.rows()[i].coeffs {
                row_col.push(j);
                row_val.push(a);
                col_count[j] += 1;
            }
            row_start.push(row_col.len());
        }
        let mut col_start = vec![0usize; n + 1];
        for j in 0..n {
            col_start[j + 1] = col_start[j] + col_count[j];
        }
        let mut fill = col_start.clone();
        let mut col_row = vec![0usize; row_col.len()];
        let mut col_val = vec![0.0; row_col.len()];
        for i in 0..m {
            for e in row_start[i]..row_start[i + 1] {
                let j = row_col[e];
                col_row[fill[j]] = i;
                col_val[fill[j]] = row_val[e];
                fill[j] += 1;
            }
        }

        let mut lower: Vec<f64> = lp.lower().to_vec();
        let mut upper: Vec<f64> = lp.upper().to_vec();
        let mut x = Vec::with_capacity(n + 2 * m);
        let mut state = Vec::with_capacity(n + 2 * m);
        for j in 0..n {
            let (st, v) = resting_point(lower[j], upper[j]);
            state.push(st);
            x.push(v);
        }
        let mut activity = vec![0.0; m];
        for (i, act) in activity.iter_mut().enumerate() {
            for e in row_start[i]..row_start[i + 1] {
                *act += row_val[e] * x[row_col[e]];
            }
        }

        let mut basis = Vec::with_capacity(m);
        let mut art_row = Vec::new();
        let mut art_sign = Vec::new();
        let mut art_value = Vec::new();
        for (k, &i) in kept.iter().enumerate() {
            let row = &lp.rows()[i];
            let (l, u) = row_bounds(row.sense, row.rhs);
            lower.push(l);
            upper.push(u);
            let act = activity[k];
            let tol = opts.feasibility_tol;
            if act >= l - tol && act <= u + tol {
                state.push(State::Basic);
                x.push(act);
                basis.push(n + k);
            } else {
                let b = if act < l { l } else { u };
                state.push(if act < l { State::Lower } else { State::Upper });
                x.push(b);
                let sign = if b - act >= 0.0 { 1.0 } else { -1.0 };
                art_row.push(k);
                art_sign.push(sign);
                art_value.push((b - act).abs());
                basis.push(usize::MAX); // patched below
            }
        }
        let nart = art_row.len();
        for (a, &k) in art_row.iter().enumerate() {
            let var = n + m + a;
            basis[k] = var;
            lower.push(0.0);
            upper.push(f64::INFINITY);
            state.push(State::Basic);
            x.push(art_value[a]);
        }
        let total = n + m + nart;
        let mut art_of_row = vec![usize::MAX; m];
        for (a, &k) in art_row.iter().enumerate() {
            art_of_row[k] = a;
        }
        let mut pos_of = vec![usize::MAX; total];
        for (p, &v) in basis.iter().enumerate() {
            pos_of[v] = p;
        }

        let max_iterations = opts.max_iterations.unwrap_or(50 * (m + n).max(1));
        let mut s = Simplex {
            opts,
            n,
            m,
            col_start,
            col_row,
            col_val,
            row_start,
            row_col,
            row_val,
            art_row,
            art_sign,
            art_of_row,
            true_cost: lp.cost().to_vec(),
            lower,
            upper,
            cost: vec![0.0; total],
            x,
            state,
            basis,
            pos_of,
            d: vec![0.0; total],
            factor: Factor::new(0, Vec::new()).expect("empty factor"),
            iterations: 0,
            max_iterations,
            degenerate_run: 0,
            work: vec![0.0; m],
            alpha: vec![0.0; m],
            rho: vec![0.0; m],
            acc: vec![0.0; total],
            touched: Vec::new(),
            in_touched: vec![false; total],
        };
        s.refactor()?;
        Ok(s)
    }

    fn total(&self) -> usize {
        self.lower.len()
    }

    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for e in self.col_start[j]..self.col_start[j + 1] {
                f(self.col_row[e], self.col_val[e]);
            }
        } else if j < self.n + self.m {
            f(j - self.n, -1.0);
        } else {
            let a = j - self.n - self.m;
            f(self.art_row[a], self.art_sign[a]);
        }
    }

    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        let mut c = Vec::new();
        self.for_col(j, |i, a| c.push((i, a)));
        c
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lower[j] == self.upper[j]
    }

    /// Refactorizes the basis, swapping in logicals for any dependent columns,
    /// then recomputes basic values.
    fn refactor(&mut self) -> Result<(), LpError> {
        for _attempt in 0..3 {
            let cols: Vec<Vec<(usize, f64)>> = self.basis.iter().map(|&v| self.column(v)).collect();
            match Factor::new(self.m, cols) {
                Ok(f) => {
                    self.factor = f;
                    self.compute_basic_values();
                    return Ok(());
                }
                Err(sing) => {
                    for (&p, &r) in sing.positions.iter().zip(&sing.rows) {
                        let old = self.basis[p];
                        let (st, v) = resting_point(self.lower[old], self.upper[old]);
                        let v = if st == State::Zero { 0.0 } else { v };
                        self.state[old] = st;
                        self.x[old] = v;
                        self.pos_of[old] = usize::MAX;
                        let logical = self.n + r;
                        if self.state[logical] == State::Basic {
                            return Err(LpError::Numerical("singular basis recovery failed".into()));
                        }
                        self.basis[p] = logical;
                        self.pos_of[logical] = p;
                        self.state[logical] = State::Basic;
                    }
                }
            }
        }
        Err(LpError::Numerical("basis remained singular after repair".into()))
    }

    fn compute_basic_values(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.total() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                let v = self.x[j];
                self.for_col(j, |i, a| rhs[i] -= a * v);
            }
        }
        let mut out = vec![0.0; m];
        self.factor.ftran(&mut rhs, &mut out);
        for p in 0..m {
            self.x[self.basis[p]] = out[p];
        }
    }

    fn compute_reduced_costs(&mut self) {
        let m = self.m;
        for p in 0..m {
            self.work[p] = self.cost[self.basis[p]];
        }
        let mut y = vec![0.0; m];
        let mut w = std::mem::take(&mut self.work);
        self.factor.btran(&mut w, &mut y);
        self.work = w;
        for j in 0..self.total() {
            if self.state[j] == State::Basic {
                self.d[j] = 0.0;
                continue;
            }
            let mut dj = self.cost[j];
            self.for_col(j, |i, a| dj -= y[i] * a);
            self.d[j] = dj;
        }
    }

    fn duals(&mut self) -> Vec<f64> {
        let m = self.m;
        for p in 0..m {
            self.work[p] = self.cost[self.basis[p]];
        }
        let mut y = vec![0.0; m];
        let mut w = std::mem::take(&mut self.work);
        self.factor.btran(&mut w, &mut y);
        self.work = w;
        y
    }

    fn run(&mut self) -> Result<Status, LpError> {
        let nart = self.art_row.len();
        if nart > 0 {
            let first_art = self.n + self.m;
            for a in 0..nart {
                self.cost[first_art + a] = 1.0;
            }
            self.compute_reduced_costs();
            match self.iterate(true)? {
                Step::Limit => return Ok(Status::IterationLimit),
                Step::Unbounded => {
                    return Err(LpError::Numerical("phase one reported an unbounded ray".into()))
                }
                Step::Optimal => {}
            }
            let infeas: f64 = (first_art..first_art + nart).map(|v| self.x[v].max(0.0)).sum();
            let scale = 1.0
                + self.upper[self.n..self.n + self.m]
                    .iter()
                    .chain(&self.lower[self.n..self.n + self.m])
                    .filter(|v| v.is_finite())
                    .fold(0.0f64, |a, v| a.max(v.abs()));
            if infeas > self.opts.feasibility_tol * scale * 10.0 {
                return Ok(Status::Infeasible);
            }
            for v in first_art..first_art + nart {
                self.cost[v] = 0.0;
                self.upper[v] = 0.0;
                if self.state[v] != State::Basic {
                    self.state[v] = State::Lower;
                    self.x[v] = 0.0;
                }
            }
        }
        self.cost[..self.n].copy_from_slice(&self.true_cost);
        self.degenerate_run = 0;
        self.compute_reduced_costs();
        Ok(match self.iterate(false)? {
            Step::Optimal => Status::Optimal,
            Step::Unbounded => Status::Unbounded,
            Step::Limit => Status::IterationLimit,
        })
    }

    fn iterate(&mut self, phase_one: bool) -> Result<Step, LpError> {
        loop {
            if self.iterations >= self.max_iterations {
                return Ok(Step::Limit);
            }
            let use_bland =
                self.opts.pricing == Pricing::Bland || self.degenerate_run >= self.opts.degenerate_switch;
            let Some((q, dir)) = self.price(use_bland) else {
                // confirm with fresh reduced costs before declaring optimality
                self.compute_reduced_costs();
                match self.price(use_bland) {
                    None => return Ok(Step::Optimal),
                    Some(_) => continue,
                }
            };
            self.iterations += 1;

            // alpha = B^-1 a_q
            self.work.iter_mut().for_each(|w| *w = 0.0);
            {
                let mut w = std::mem::take(&mut self.work);
                self.for_col(q, |i, a| w[i] = a);
                let mut alpha = std::mem::take(&mut self.alpha);
                self.factor.ftran(&mut w, &mut alpha);
                self.work = w;
                self.alpha = alpha;
            }

            let (theta, leave) = self.ratio_test(q, dir, use_bland);
            let flip = if self.lower[q].is_finite() && self.upper[q].is_finite() {
                Some(self.upper[q] - self.lower[q])
            } else {
                None
            };
            let (theta, leave) = match (flip, leave) {
                (Some(f), Some(_)) if f <= theta => (f, None),
                (Some(f), None) => (f, None),
                (None, None) => {
                    if phase_one {
                        return Err(LpError::Numerical("no blocking variable in phase one".into()));
                    }
                    return Ok(Step::Unbounded);
                }
                (_, l) => (theta, l),
            };

            if theta <= self.opts.feasibility_tol {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }

            // primal update
            let step = dir * theta;
            self.x[q] += step;
            if step != 0.0 {
                for p in 0..self.m {
                    let a = self.alpha[p];
                    if a != 0.0 {
                        let v = self.basis[p];
                        self.x[v] -= step * a;
                    }
                }
            }

            let Some((p, to_upper)) = leave else {
                // bound flip
                self.state[q] = if dir > 0.0 { State::Upper } else { State::Lower };
                self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                continue;
            };

            self.update_reduced_costs(q, p);

            let out = self.basis[p];
            self.state[out] = if to_upper { State::Upper } else { State::Lower };
            self.x[out] = if to_upper { self.upper[out] } else { self.lower[out] };
            if phase_one && out >= self.n + self.m {
                // an artificial that leaves never returns
                self.upper[out] = 0.0;
                self.x[out] = 0.0;
                self.state[out] = State::Lower;
            }
            self.pos_of[out] = usize::MAX;
            self.basis[p] = q;
            self.pos_of[q] = p;
            self.state[q] = State::Basic;
            self.d[q] = 0.0;

            let alpha = std::mem::take(&mut self.alpha);
            self.factor.push_eta(p, &alpha);
            self.alpha = alpha;

            if self.factor.num_etas() >= self.opts.refactor_every {
                self.refactor()?;
                self.compute_reduced_costs();
            }
        }
    }

    /// Chooses an entering variable and its direction of motion.
    fn price(&self, bland: bool) -> Option<(usize, f64)> {
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.total() {
            let st = self.state[j];
            if st == State::Basic || self.is_fixed(j) {
                continue;
            }
            let dj = self.d[j];
            let (score, dir) = match st {
                State::Lower if dj < -tol => (-dj, 1.0),
                State::Upper if dj > tol => (dj, -1.0),
                State::Zero if dj.abs() > tol => (dj.abs(), -dj.signum()),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, s, _)| score > s) {
                best = Some((j, score, dir));
            }
        }
        best.map(|(j, _, dir)| (j, dir))
    }

    /// Returns the step length and the leaving position (with whether it
    /// leaves at its upper bound). `None` means no basic variable blocks.
    fn ratio_test(&self, _q: usize, dir: f64, bland: bool) -> (f64, Option<(usize, bool)>) {
        let tol = self.opts.feasibility_tol;
        if bland {
            let mut best: Option<(f64, usize, bool)> = None;
            for p in 0..self.m {
                let a = self.alpha[p];
                if a.abs() <= PIVOT_TOL {
                    continue;
                }
                let v = self.basis[p];
                let delta = -dir * a;
                let (t, up) = if delta > 0.0 && self.upper[v].is_finite() {
                    (((self.upper[v] - self.x[v]) / delta).max(0.0), true)
                } else if delta < 0.0 && self.lower[v].is_finite() {
                    (((self.lower[v] - self.x[v]) / delta).max(0.0), false)
                } else {
                    continue;
                };
                let better = match best {
                    None => true,
                    Some((bt, bp, _)) => t < bt || (t == bt && v < self.basis[bp]),
                };
                if better {
                    best = Some((t, p, up));
                }
            }
            return match best {
                Some((t, p, up)) => (t, Some((p, up))),
                None => (f64::INFINITY, None),
            };
        }

        // Harris two-pass: find the largest step allowed with bounds relaxed
        // by the tolerance, then pick the largest pivot within it.
        let mut theta_max = f64::INFINITY;
        for p in 0..self.m {
            let a = self.alpha[p];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let v = self.basis[p];
            let delta = -dir * a;
            let t = if delta > 0.0 && self.upper[v].is_finite() {
                (self.upper[v] + tol - self.x[v]) / delta
            } else if delta < 0.0 && self.lower[v].is_finite() {
                (self.lower[v] - tol - self.x[v]) / delta
            } else {
                continue;
            };
            theta_max = theta_max.min(t);
        }
        if theta_max == f64::INFINITY {
            return (f64::INFINITY, None);
        }
        let mut best: Option<(f64, usize, bool, f64)> = None;
        for p in 0..self.m {
            let a = self.alpha[p];
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let v = self.basis[p];
            let delta = -dir * a;
            let (t, up) = if delta > 0.0 && self.upper[v].is_finite() {
                ((self.upper[v] - self.x[v]) / delta, true)
            } else if delta < 0.0 && self.lower[v].is_finite() {
                ((self.lower[v] - self.x[v]) / delta, false)
            } else {
                continue;
            };
            if t <= theta_max && best.is_none_or(|(_, _, _, ba)| a.abs() > ba) {
                best = Some((t.max(0.0), p, up, a.abs()));
            }
        }
        match best {
            Some((t, p, up, _)) => (t, Some((p, up))),
            None => (f64::INFINITY, None),
        }
    }

    /// Updates reduced costs for a pivot of entering `q` into position `p`.
    fn update_reduced_costs(&mut self, q: usize, p: usize) {
        let m = self.m;
        self.work.iter_mut().for_each(|w| *w = 0.0);
        self.work[p] = 1.0;
        let mut w = std::mem::take(&mut self.work);
        let mut rho = std::mem::take(&mut self.rho);
        self.factor.btran(&mut w, &mut rho);
        self.work = w;

        let n = self.n;
        for i in 0..m {
            let r = rho[i];
            if r == 0.0 {
                continue;
            }
            for e in self.row_start[i]..self.row_start[i + 1] {
                let j = self.row_col[e];
                if !self.in_touched[j] {
                    self.in_touched[j] = true;
                    self.touched.push(j);
                }
                self.acc[j] += r * self.row_val[e];
            }
            let lj = n + i;
            if !self.in_touched[lj] {
                self.in_touched[lj] = true;
                self.touched.push(lj);
            }
            self.acc[lj] -= r;
            let a = self.art_of_row[i];
            if a != usize::MAX {
                let j = n + m + a;
                if !self.in_touched[j] {
                    self.in_touched[j] = true;
                    self.touched.push(j);
                }
                self.acc[j] += r * self.art_sign[a];
            }
        }
        self.rho = rho;

        let alpha_pq = self.alpha[p];
        let ratio = self.d[q] / alpha_pq;
        let out = self.basis[p];
        for &j in &self.touched {
            if self.state[j] != State::Basic {
                self.d[j] -= ratio * self.acc[j];
            }
            self.acc[j] = 0.0;
            self.in_touched[j] = false;
        }
        self.touched.clear();
        self.d[out] = -ratio;
    }
}
