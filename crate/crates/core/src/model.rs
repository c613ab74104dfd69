//! Multistage robust LPs with coefficients affine in the uncertainty.
//!
//! Stage 1 holds `A x¹ (sense) h¹` and cost `c¹`. Stage `t = 2..H` holds
//! `T(ξ) x^{t-1} + W(ξ) x^t (sense) h(ξ)` and cost `c(ξ)`, where every map
//! may depend only on `ξ¹..ξ^{t-1}` flattened into one vector.

use std::collections::BTreeMap;

use swc_lp::Sense;

use crate::uncertainty::ScenarioPath;
use crate::SwcError;

/// One nonzero `(row, col, value)`. Vectors use column 0.
pub type Triplet = (usize, usize, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct StageDims {
    /// Decision dimensions `n_1..n_H`.
    pub n: Vec<usize>,
    /// Row counts `m_1..m_H`.
    pub m: Vec<usize>,
}

impl StageDims {
    pub fn stages(&self) -> usize {
        self.n.len()
    }
}

/// `base + Σ_k ξ_k · terms[k]`, stored as sparse triplets.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub rows: usize,
    pub cols: usize,
    pub base: Vec<Triplet>,
    /// `(flattened uncertainty index, coefficient array)`.
    pub terms: Vec<(usize, Vec<Triplet>)>,
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }
}

impl AffineMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        AffineMap { rows, cols, base: Vec::new(), terms: Vec::new() }
    }

    pub fn constant(rows: usize, cols: usize, base: Vec<Triplet>) -> Self {
        AffineMap { rows, cols, base, terms: Vec::new() }
    }

    pub fn with_term(mut self, xi: usize, entries: Vec<Triplet>) -> Self {
        self.terms.push((xi, entries));
        self
    }

    /// Dense vector from a column map.
    pub fn vector(len: usize, entries: &[(usize, f64)]) -> Self {
        AffineMap::constant(len, 1, entries.iter().map(|&(i, v)| (i, 0, v)).collect())
    }

    fn max_xi(&self) -> Option<usize> {
        self.terms.iter().map(|(k, _)| *k).max()
    }

    /// Nonzeros of the evaluated array, merged and ordered by `(row, col)`.
    pub fn evaluate_sparse(&self, xi: &[f64]) -> Vec<Triplet> {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, c, v) in &self.base {
            *acc.entry((r, c)).or_insert(0.0) += v;
        }
        for (k, entries) in &self.terms {
            let s = xi[*k];
            if s == 0.0 {
                continue;
            }
            for &(r, c, v) in entries {
                *acc.entry((r, c)).or_insert(0.0) += s * v;
            }
        }
        acc.into_iter().filter(|&(_, v)| v != 0.0).map(|((r, c), v)| (r, c, v)).collect()
    }

    pub fn evaluate(&self, xi: &[f64]) -> Matrix {
        let mut data = vec![0.0; self.rows * self.cols];
        for &(r, c, v) in &self.base {
            data[r * self.cols + c] += v;
        }
        for (k, entries) in &self.terms {
            for &(r, c, v) in entries {
                data[r * self.cols + c] += xi[*k] * v;
            }
        }
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Evaluated column vector (`cols == 1`).
    pub fn evaluate_vector(&self, xi: &[f64]) -> Vec<f64> {
        self.evaluate(xi).data
    }

    fn check(&self, what: &str, t: usize, rows: usize, cols: usize, xi_avail: usize, out: &mut Vec<String>) {
        if self.rows != rows || self.cols != cols {
            out.push(format!(
                "stage {t}: {what} has shape {}x{}, expected {rows}x{cols}",
                self.rows, self.cols
            ));
            return;
        }
        let bad_entry = |e: &[Triplet]| e.iter().any(|&(r, c, v)| r >= rows || c >= cols || !v.is_finite());
        if bad_entry(&self.base) || self.terms.iter().any(|(_, e)| bad_entry(e)) {
            out.push(format!("stage {t}: {what} has an entry outside {rows}x{cols} or a non-finite value"));
        }
        if let Some(k) = self.max_xi() {
            if k >= xi_avail {
                out.push(format!(
                    "stage {t}: {what} depends on uncertainty component {k}, but only components 0..{xi_avail} (stages 1..{}) are revealed",
                    t - 1
                ));
            }
        }
    }
}

/// Data of stage 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstStage {
    pub a: Vec<Triplet>,
    pub h: Vec<f64>,
    pub c: Vec<f64>,
    pub senses: Vec<Sense>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Data of a stage `t >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub t_map: AffineMap,
    pub w_map: AffineMap,
    pub h_map: AffineMap,
    pub c_map: AffineMap,
    pub senses: Vec<Sense>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultistageRobustLP {
    pub dims: StageDims,
    /// Uncertainty dimension of `ξ^1..ξ^{H-1}`.
    pub xi_dims: Vec<usize>,
    pub first: FirstStage,
    /// Stages `2..H`.
    pub stages: Vec<Stage>,
}

/// Evaluated data of one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageCoefficients {
    pub t: Matrix,
    pub w: Matrix,
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl MultistageRobustLP {
    pub fn horizon(&self) -> usize {
        self.dims.stages()
    }

    /// Number of first-stage decisions.
    pub fn n1(&self) -> usize {
        self.dims.n[0]
    }

    /// Stage `t` data, `2 <= t <= H`.
    pub fn stage(&self, t: usize) -> &Stage {
        &self.stages[t - 2]
    }

    /// Length of `(ξ^1, .., ξ^{t-1})` flattened.
    pub fn xi_prefix_len(&self, t: usize) -> usize {
        self.xi_dims[..t - 1].iter().sum()
    }

    /// Every shape or nonanticipativity problem found; empty when well formed.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let h = self.dims.n.len();
        if h < 2 {
            out.push(format!("horizon must be at least 2, got {h}"));
            return out;
        }
        if self.dims.m.len() != h {
            out.push(format!("{} row counts given for {h} stages", self.dims.m.len()));
            return out;
        }
        if let Some(t) = self.dims.n.iter().position(|&n| n == 0) {
            out.push(format!("stage {}: no decision variables", t + 1));
        }
        if self.xi_dims.len() != h - 1 {
            out.push(format!("{} uncertainty stages given, expected {}", self.xi_dims.len(), h - 1));
            return out;
        }
        if self.stages.len() != h - 1 {
            out.push(format!("{} stage blocks given, expected {}", self.stages.len(), h - 1));
            return out;
        }
        let (n1, m1) = (self.dims.n[0], self.dims.m[0]);
        let f = &self.first;
        for (what, len, want) in [
            ("h1", f.h.len(), m1),
            ("senses", f.senses.len(), m1),
            ("c1", f.c.len(), n1),
            ("lower", f.lower.len(), n1),
            ("upper", f.upper.len(), n1),
        ] {
            if len != want {
                out.push(format!("stage 1: {what} has length {len}, expected {want}"));
            }
        }
        if f.a.iter().any(|&(r, c, v)| r >= m1 || c >= n1 || !v.is_finite()) {
            out.push(format!("stage 1: A has an entry outside {m1}x{n1} or a non-finite value"));
        }
        check_bounds(1, &f.lower, &f.upper, &mut out);
        for t in 2..=h {
            let s = self.stage(t);
            let (np, n, m) = (self.dims.n[t - 2], self.dims.n[t - 1], self.dims.m[t - 1]);
            let avail = self.xi_prefix_len(t);
            s.t_map.check("T", t, m, np, avail, &mut out);
            s.w_map.check("W", t, m, n, avail, &mut out);
            s.h_map.check("h", t, m, 1, avail, &mut out);
            s.c_map.check("c", t, n, 1, avail, &mut out);
            for (what, len, want) in [("senses", s.senses.len(), m), ("lower", s.lower.len(), n), ("upper", s.upper.len(), n)] {
                if len != want {
                    out.push(format!("stage {t}: {what} has length {len}, expected {want}"));
                }
            }
            check_bounds(t, &s.lower, &s.upper, &mut out);
        }
        out
    }

    pub fn validate(&self) -> Result<(), SwcError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SwcError::InvalidModel(v))
        }
    }

    /// Evaluates `(T, W, h, c)` of stage `t` along `path`.
    pub fn evaluate_coefficients(&self, path: &ScenarioPath, t: usize) -> Result<StageCoefficients, SwcError> {
        let h = self.horizon();
        if t < 2 || t > h {
            return Err(SwcError::Domain(format!("stage {t} outside 2..={h}")));
        }
        if path.stages() < t - 1 {
            return Err(SwcError::Domain(format!("path has {} stages, stage {t} needs {}", path.stages(), t - 1)));
        }
        for s in 0..t - 1 {
            if path.realizations[s].len() != self.xi_dims[s] {
                return Err(SwcError::Domain(format!(
                    "path component at stage {} has dimension {}, expected {}",
                    s + 1,
                    path.realizations[s].len(),
                    self.xi_dims[s]
                )));
            }
        }
        let xi = path.flatten(t - 1);
        let s = self.stage(t);
        Ok(StageCoefficients {
            t: s.t_map.evaluate(&xi),
            w: s.w_map.evaluate(&xi),
            h: s.h_map.evaluate_vector(&xi),
            c: s.c_map.evaluate_vector(&xi),
        })
    }
}

fn check_bounds(t: usize, lower: &[f64], upper: &[f64], out: &mut Vec<String>) {
    for (j, (l, u)) in lower.iter().zip(upper).enumerate() {
        if l.is_nan() || u.is_nan() || l > u || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
            out.push(format!("stage {t}: variable {j} has invalid bounds [{l}, {u}]"));
        }
    }
}
