//! Per-stage uncertainty supports, scenario paths and vertex enumeration.

use rand::Rng;

use crate::SwcError;

/// Support of one stage's uncertainty vector.
#[derive(Clone, Debug, PartialEq)]
pub enum StageSupport {
    /// `|ξ_k - nominal_k| <= rho * |nominal_k|` for each component.
    Box { nominal: Vec<f64>, rho: f64 },
    /// Integer lattice points of `[lower, upper]`.
    IntegerBox { lower: Vec<i64>, upper: Vec<i64> },
    /// Finitely many listed points.
    Discrete { values: Vec<Vec<f64>> },
}

impl StageSupport {
    pub fn dim(&self) -> usize {
        match self {
            StageSupport::Box { nominal, .. } => nominal.len(),
            StageSupport::IntegerBox { lower, .. } => lower.len(),
            StageSupport::Discrete { values } => values.first().map_or(0, Vec::len),
        }
    }

    /// Componentwise interval hull.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match self {
            StageSupport::Box { nominal, rho } => nominal
                .iter()
                .map(|&v| {
                    let r = rho * v.abs();
                    (v - r, v + r)
                })
                .collect(),
            StageSupport::IntegerBox { lower, upper } => {
                lower.iter().zip(upper).map(|(&l, &u)| (l as f64, u as f64)).collect()
            }
            StageSupport::Discrete { values } => (0..self.dim())
                .map(|k| {
                    let it = values.iter().map(|v| v[k]);
                    (it.clone().fold(f64::INFINITY, f64::min), it.fold(f64::NEG_INFINITY, f64::max))
                })
                .collect(),
        }
    }

    /// Representative point: the nominal vector, the box midpoint or the
    /// mean of the listed values.
    pub fn nominal(&self) -> Vec<f64> {
        match self {
            StageSupport::Box { nominal, .. } => nominal.clone(),
            StageSupport::IntegerBox { .. } => self.intervals().iter().map(|(l, u)| 0.5 * (l + u)).collect(),
            StageSupport::Discrete { values } => (0..self.dim())
                .map(|k| values.iter().map(|v| v[k]).sum::<f64>() / values.len() as f64)
                .collect(),
        }
    }

    /// Corner points (first component varies slowest, lower before upper),
    /// or the listed values of a discrete support. Degenerate components
    /// contribute a single value.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        if let StageSupport::Discrete { values } = self {
            return values.clone();
        }
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for (l, u) in self.intervals() {
            let choices: &[f64] = if l == u { &[l] } else { &[l, u] };
            out = out
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn contains(&self, xi: &[f64], tol: f64) -> bool {
        if xi.len() != self.dim() {
            return false;
        }
        match self {
            StageSupport::Discrete { values } => values.iter().any(|v| v.iter().zip(xi).all(|(a, b)| (a - b).abs() <= tol)),
            StageSupport::IntegerBox { .. } => {
                xi.iter().all(|v| v.fract() == 0.0) && self.intervals().iter().zip(xi).all(|((l, u), v)| l <= v && v <= u)
            }
            StageSupport::Box { .. } => self.intervals().iter().zip(xi).all(|((l, u), v)| *l - tol <= *v && *v <= *u + tol),
        }
    }

    /// One uniform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            StageSupport::Box { .. } => self
                .intervals()
                .into_iter()
                .map(|(l, u)| if l == u { l } else { rng.gen_range(l..=u) })
                .collect(),
            StageSupport::IntegerBox { lower, upper } => {
                lower.iter().zip(upper).map(|(&l, &u)| rng.gen_range(l..=u) as f64).collect()
            }
            StageSupport::Discrete { values } => values[rng.gen_range(0..values.len())].clone(),
        }
    }

    fn check(&self, stage: usize) -> Result<(), SwcError> {
        let bad = |m: String| Err(SwcError::Domain(format!("uncertainty stage {stage}: {m}")));
        match self {
            StageSupport::Box { nominal, rho } => {
                if !(0.0..=1.0).contains(rho) {
                    return bad(format!("radius {rho} outside [0, 1]"));
                }
                if nominal.iter().any(|v| !v.is_finite()) {
                    return bad("non-finite nominal value".into());
                }
            }
            StageSupport::IntegerBox { lower, upper } => {
                if lower.len() != upper.len() {
                    return bad("lower and upper lengths differ".into());
                }
                if lower.iter().zip(upper).any(|(l, u)| l > u) {
                    return bad("lower bound above upper bound".into());
                }
            }
            StageSupport::Discrete { values } => {
                if values.is_empty() {
                    return bad("empty discrete support".into());
                }
                let d = values[0].len();
                if values.iter().any(|v| v.len() != d || v.iter().any(|x| !x.is_finite())) {
                    return bad("discrete values of unequal dimension or non-finite".into());
                }
            }
        }
        Ok(())
    }
}

/// Supports of `ξ^1..ξ^{H-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintySet {
    pub stages: Vec<StageSupport>,
}

impl UncertaintySet {
    pub fn new(stages: Vec<StageSupport>) -> Result<Self, SwcError> {
        for (k, s) in stages.iter().enumerate() {
            s.check(k + 1)?;
        }
        Ok(UncertaintySet { stages })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.stages.iter().map(StageSupport::dim).collect()
    }

    /// Vertices of stage `t` (1-based).
    pub fn stage_vertices(&self, t: usize) -> Vec<Vec<f64>> {
        self.stages[t - 1].vertices()
    }

    /// Number of vertex paths, saturating.
    pub fn vertex_path_count(&self) -> usize {
        self.stages.iter().fold(1usize, |acc, s| acc.saturating_mul(s.vertices().len()))
    }

    /// Cartesian product of stage vertices, stage 1 varying slowest.
    pub fn vertex_paths(&self) -> Vec<ScenarioPath> {
        let mut out = vec![ScenarioPath { realizations: Vec::new() }];
        for s in &self.stages {
            let verts = s.vertices();
            out = out
                .into_iter()
                .flat_map(|p| {
                    verts.iter().map(move |v| {
                        let mut q = p.clone();
                        q.realizations.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn nominal_path(&self) -> ScenarioPath {
        ScenarioPath { realizations: self.stages.iter().map(StageSupport::nominal).collect() }
    }

    pub fn contains(&self, path: &ScenarioPath, tol: f64) -> bool {
        path.realizations.len() == self.stages.len()
            && self.stages.iter().zip(&path.realizations).all(|(s, xi)| s.contains(xi, tol))
    }
}

/// Realizations `(ξ^1, .., ξ^{H-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioPath {
    pub realizations: Vec<Vec<f64>>,
}

impl ScenarioPath {
    pub fn new(realizations: Vec<Vec<f64>>) -> Self {
        ScenarioPath { realizations }
    }

    /// Path of scalar realizations.
    pub fn scalars(values: &[f64]) -> Self {
        ScenarioPath { realizations: values.iter().map(|&v| vec![v]).collect() }
    }

    pub fn stages(&self) -> usize {
        self.realizations.len()
    }

    /// `ξ^1..ξ^k` concatenated.
    pub fn flatten(&self, k: usize) -> Vec<f64> {
        self.realizations[..k].iter().flatten().copied().collect()
    }
}
