//! JSON problem files (`swc-problem-v1`). See `docs/problem-format.md`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use swc_lp::Sense;

use crate::model::{AffineMap, FirstStage, MultistageRobustLP, Stage, StageDims, Triplet};
use crate::uncertainty::{StageSupport, UncertaintySet};
use crate::{RobustProblem, SwcError};

pub const FORMAT: &str = "swc-problem-v1";

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum SenseRepr {
    Le,
    Eq,
    Ge,
}

impl From<Sense> for SenseRepr {
    fn from(s: Sense) -> Self {
        match s {
            Sense::Le => SenseRepr::Le,
            Sense::Eq => SenseRepr::Eq,
            Sense::Ge => SenseRepr::Ge,
        }
    }
}

impl From<SenseRepr> for Sense {
    fn from(s: SenseRepr) -> Self {
        match s {
            SenseRepr::Le => Sense::Le,
            SenseRepr::Eq => Sense::Eq,
            SenseRepr::Ge => Sense::Ge,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermRepr {
    xi: usize,
    entries: Vec<Triplet>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MapRepr {
    rows: usize,
    cols: usize,
    #[serde(default)]
    base: Vec<Triplet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    terms: Vec<TermRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FirstRepr {
    #[serde(rename = "A", default)]
    a: Vec<Triplet>,
    h: Vec<f64>,
    c: Vec<f64>,
    #[serde(default)]
    senses: Option<Vec<SenseRepr>>,
    #[serde(default)]
    lower: Option<Vec<Option<f64>>>,
    #[serde(default)]
    upper: Option<Vec<Option<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StageRepr {
    #[serde(rename = "T")]
    t: MapRepr,
    #[serde(rename = "W")]
    w: MapRepr,
    h: MapRepr,
    c: MapRepr,
    #[serde(default)]
    senses: Option<Vec<SenseRepr>>,
    #[serde(default)]
    lower: Option<Vec<Option<f64>>>,
    #[serde(default)]
    upper: Option<Vec<Option<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum SupportRepr {
    Box { nominal: Vec<f64>, rho: f64 },
    IntegerBox { lower: Vec<i64>, upper: Vec<i64> },
    Discrete { values: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ProblemRepr {
    format: String,
    n: Vec<usize>,
    m: Vec<usize>,
    xi_dims: Vec<usize>,
    first_stage: FirstRepr,
    stages: Vec<StageRepr>,
    uncertainty: Vec<SupportRepr>,
}

fn map_from(r: MapRepr) -> AffineMap {
    AffineMap { rows: r.rows, cols: r.cols, base: r.base, terms: r.terms.into_iter().map(|t| (t.xi, t.entries)).collect() }
}

fn map_to(m: &AffineMap) -> MapRepr {
    MapRepr {
        rows: m.rows,
        cols: m.cols,
        base: m.base.clone(),
        terms: m.terms.iter().map(|(xi, e)| TermRepr { xi: *xi, entries: e.clone() }).collect(),
    }
}

fn senses_from(s: Option<Vec<SenseRepr>>, m: usize) -> Vec<Sense> {
    s.map_or_else(|| vec![Sense::Eq; m], |v| v.into_iter().map(Sense::from).collect())
}

fn bounds_from(v: Option<Vec<Option<f64>>>, n: usize, missing: f64, null: f64) -> Vec<f64> {
    v.map_or_else(|| vec![missing; n], |v| v.into_iter().map(|b| b.unwrap_or(null)).collect())
}

fn bounds_to(v: &[f64]) -> Vec<Option<f64>> {
    v.iter().map(|&b| if b.is_finite() { Some(b) } else { None }).collect()
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<RobustProblem, SwcError> {
    let r: ProblemRepr = serde_json::from_str(text)?;
    if r.format != FORMAT {
        return Err(SwcError::Domain(format!("unsupported format `{}`, expected `{FORMAT}`", r.format)));
    }
    if r.n.is_empty() || r.m.len() != r.n.len() || r.stages.len() + 1 != r.n.len() {
        return Err(SwcError::InvalidModel(vec![format!(
            "{} decision dimensions, {} row counts and {} stage blocks do not describe one horizon",
            r.n.len(),
            r.m.len(),
            r.stages.len()
        )]));
    }
    let f = r.first_stage;
    let first = FirstStage {
        a: f.a,
        h: f.h,
        c: f.c,
        senses: senses_from(f.senses, r.m[0]),
        lower: bounds_from(f.lower, r.n[0], 0.0, f64::NEG_INFINITY),
        upper: bounds_from(f.upper, r.n[0], f64::INFINITY, f64::INFINITY),
    };
    let stages = r
        .stages
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            let (n, m) = (r.n[k + 1], r.m[k + 1]);
            Stage {
                t_map: map_from(s.t),
                w_map: map_from(s.w),
                h_map: map_from(s.h),
                c_map: map_from(s.c),
                senses: senses_from(s.senses, m),
                lower: bounds_from(s.lower, n, 0.0, f64::NEG_INFINITY),
                upper: bounds_from(s.upper, n, f64::INFINITY, f64::INFINITY),
            }
        })
        .collect();
    let model = MultistageRobustLP { dims: StageDims { n: r.n, m: r.m }, xi_dims: r.xi_dims, first, stages };
    let set = UncertaintySet::new(
        r.uncertainty
            .into_iter()
            .map(|s| match s {
                SupportRepr::Box { nominal, rho } => StageSupport::Box { nominal, rho },
                SupportRepr::IntegerBox { lower, upper } => StageSupport::IntegerBox { lower, upper },
                SupportRepr::Discrete { values } => StageSupport::Discrete { values },
            })
            .collect(),
    )?;
    RobustProblem::new(model, set)
}

/// Pretty-printed problem document.
pub fn to_json(problem: &RobustProblem) -> String {
    let m = &problem.model;
    let r = ProblemRepr {
        format: FORMAT.into(),
        n: m.dims.n.clone(),
        m: m.dims.m.clone(),
        xi_dims: m.xi_dims.clone(),
        first_stage: FirstRepr {
            a: m.first.a.clone(),
            h: m.first.h.clone(),
            c: m.first.c.clone(),
            senses: Some(m.first.senses.iter().map(|&s| s.into()).collect()),
            lower: Some(bounds_to(&m.first.lower)),
            upper: Some(bounds_to(&m.first.upper)),
        },
        stages: m
            .stages
            .iter()
            .map(|s| StageRepr {
                t: map_to(&s.t_map),
                w: map_to(&s.w_map),
                h: map_to(&s.h_map),
                c: map_to(&s.c_map),
                senses: Some(s.senses.iter().map(|&x| x.into()).collect()),
                lower: Some(bounds_to(&s.lower)),
                upper: Some(bounds_to(&s.upper)),
            })
            .collect(),
        uncertainty: problem
            .set
            .stages
            .iter()
            .map(|s| match s.clone() {
                StageSupport::Box { nominal, rho } => SupportRepr::Box { nominal, rho },
                StageSupport::IntegerBox { lower, upper } => SupportRepr::IntegerBox { lower, upper },
                StageSupport::Discrete { values } => SupportRepr::Discrete { values },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&r).expect("problem documents serialize")
}

pub fn read_problem(path: impl AsRef<Path>) -> Result<RobustProblem, SwcError> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p).map_err(|e| SwcError::File { path: p.display().to_string(), message: e.to_string() })?;
    parse_problem(&text).map_err(|e| SwcError::File { path: p.display().to_string(), message: e.to_string() })
}

pub fn write_problem(problem: &RobustProblem, path: impl AsRef<Path>) -> Result<(), SwcError> {
    std::fs::write(path, to_json(problem) + "\n")?;
    Ok(())
}
