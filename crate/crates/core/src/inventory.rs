//! Inventory management with cumulative orders.
//!
//! Stage `t < H` decisions are `(x_o, x_c, s_inv, s_co)`: order, stage cost,
//! inventory level (negative means backlog) and cumulative orders. Stage `H`
//! has no order. The stage cost satisfies `x_c >= d x_o + max(h s, -p s)`,
//! written as two rows, and demand `ξ^t` enters the inventory balance of
//! stage `t + 1` through its right-hand side.

use swc_lp::Sense;

use crate::model::{AffineMap, FirstStage, MultistageRobustLP, Stage, StageDims};
use crate::uncertainty::{StageSupport, UncertaintySet};
use crate::{RobustProblem, SwcError};

/// First-stage decision count used for the benchmark's sample sizes.
pub const N0: usize = 4;

const INF: f64 = f64::INFINITY;

/// Integer demand intervals of the discrete-demand variant, stages 1..4.
pub const INTEGER_DEMAND_BOUNDS: [(i64, i64); 4] = [(53, 97), (70, 130), (88, 163), (100, 186)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemandVariant {
    Continuous,
    Integer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InventoryData {
    pub stages: usize,
    /// Backlog cost per unit.
    pub p: f64,
    /// Order cost per unit.
    pub d: f64,
    /// Holding cost per unit.
    pub h: f64,
    pub initial_inventory: f64,
    /// `(lower, upper)` on `x_o^t`, `t = 1..H-1`.
    pub order_bounds: Vec<(f64, f64)>,
    /// Bounds on `s_co^t`, `t = 1..H`.
    pub cum_lower: Vec<f64>,
    pub cum_upper: Vec<f64>,
    pub rho: f64,
    /// `ξ̄^t`, `t = 1..H-1`.
    pub demand_nominal: Vec<f64>,
    pub variant: DemandVariant,
}

/// `100 (1 + sin(π (t - 2) / 6) / 2)`.
pub fn nominal_demand(t: usize) -> f64 {
    100.0 * (1.0 + 0.5 * (std::f64::consts::PI * (t as f64 - 2.0) / 6.0).sin())
}

impl InventoryData {
    /// Benchmark data for `stages` in `2..=5`.
    pub fn standard(stages: usize, variant: DemandVariant) -> Result<Self, SwcError> {
        if !(2..=5).contains(&stages) {
            return Err(SwcError::Domain(format!("the inventory benchmark has 2 to 5 stages, got {stages}")));
        }
        let lo = [47.0, 134.0, 188.0, 429.0];
        let hi = [94.0, 248.0, 370.0, 586.0];
        let mut cum_lower: Vec<f64> = lo[..stages - 1].to_vec();
        let mut cum_upper: Vec<f64> = hi[..stages - 1].to_vec();
        cum_lower.push(0.0);
        cum_upper.push(INF);
        Ok(InventoryData {
            stages,
            p: 11.0,
            d: 1.0,
            h: 10.0,
            initial_inventory: 0.0,
            order_bounds: vec![(0.0, INF); stages - 1],
            cum_lower,
            cum_upper,
            rho: 0.3,
            demand_nominal: (1..stages).map(nominal_demand).collect(),
            variant,
        })
    }

    pub fn validate(&self) -> Result<(), SwcError> {
        let h = self.stages;
        let mut bad = Vec::new();
        if h < 2 {
            bad.push(format!("need at least 2 stages, got {h}"));
        }
        if self.order_bounds.len() + 1 != h || self.demand_nominal.len() + 1 != h {
            bad.push("order bounds and nominal demand need one entry per stage 1..H-1".into());
        }
        if self.cum_lower.len() != h || self.cum_upper.len() != h {
            bad.push("cumulative-order bounds need one entry per stage".into());
        }
        if self.cum_lower.iter().zip(&self.cum_upper).any(|(l, u)| l > u) {
            bad.push("cumulative-order lower bound above upper bound".into());
        }
        if self.order_bounds.iter().any(|(l, u)| l > u) {
            bad.push("order lower bound above upper bound".into());
        }
        if !(0.0..=1.0).contains(&self.rho) {
            bad.push(format!("rho {} outside [0, 1]", self.rho));
        }
        if self.demand_nominal.iter().any(|&v| v.is_nan() || v <= 0.0) {
            bad.push("nominal demand must be positive".into());
        }
        if self.variant == DemandVariant::Integer && h - 1 > INTEGER_DEMAND_BOUNDS.len() {
            bad.push("integer demand intervals are defined for at most 5 stages".into());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(SwcError::InvalidModel(bad))
        }
    }
}

struct Layout {
    xo: Option<usize>,
    xc: usize,
    sinv: usize,
    sco: usize,
    n: usize,
}

fn layout(t: usize, h: usize) -> Layout {
    if t < h {
        Layout { xo: Some(0), xc: 1, sinv: 2, sco: 3, n: 4 }
    } else {
        Layout { xo: None, xc: 0, sinv: 1, sco: 2, n: 3 }
    }
}

/// Cost rows `x_c - d x_o - h s >= 0` and `x_c - d x_o + p s >= 0`.
fn cost_rows(data: &InventoryData, l: &Layout) -> Vec<(usize, usize, f64)> {
    let mut e = vec![(0, l.xc, 1.0), (0, l.sinv, -data.h), (1, l.xc, 1.0), (1, l.sinv, data.p)];
    if let Some(xo) = l.xo {
        e.push((0, xo, -data.d));
        e.push((1, xo, -data.d));
    }
    e
}

fn bounds(data: &InventoryData, t: usize, l: &Layout) -> (Vec<f64>, Vec<f64>) {
    let mut lower = vec![0.0; l.n];
    let mut upper = vec![INF; l.n];
    if let Some(xo) = l.xo {
        (lower[xo], upper[xo]) = data.order_bounds[t - 1];
    }
    (lower[l.xc], upper[l.xc]) = (f64::NEG_INFINITY, INF);
    (lower[l.sinv], upper[l.sinv]) =
        if t == 1 { (data.initial_inventory, data.initial_inventory) } else { (f64::NEG_INFINITY, INF) };
    (lower[l.sco], upper[l.sco]) = (data.cum_lower[t - 1], data.cum_upper[t - 1]);
    (lower, upper)
}

/// Robust inventory model and its demand uncertainty set.
pub fn build_coc(data: &InventoryData) -> Result<RobustProblem, SwcError> {
    data.validate()?;
    let h = data.stages;
    let l1 = layout(1, h);
    let (lower, upper) = bounds(data, 1, &l1);
    let mut c1 = vec![0.0; l1.n];
    c1[l1.xc] = 1.0;
    let first = FirstStage { a: cost_rows(data, &l1), h: vec![0.0; 2], c: c1, senses: vec![Sense::Ge; 2], lower, upper };

    let mut stages = Vec::with_capacity(h - 1);
    for t in 2..=h {
        let (lp, l) = (layout(t - 1, h), layout(t, h));
        let xo_prev = lp.xo.expect("every stage before the last orders");
        let mut w = cost_rows(data, &l);
        w.push((2, l.sinv, 1.0));
        w.push((3, l.sco, 1.0));
        let tm = vec![(2, lp.sinv, -1.0), (2, xo_prev, -1.0), (3, lp.sco, -1.0), (3, xo_prev, -1.0)];
        let (lower, upper) = bounds(data, t, &l);
        stages.push(Stage {
            t_map: AffineMap::constant(4, lp.n, tm),
            w_map: AffineMap::constant(4, l.n, w),
            // s_inv^t - s_inv^{t-1} - x_o^{t-1} = -ξ^{t-1}
            h_map: AffineMap::zeros(4, 1).with_term(t - 2, vec![(2, 0, -1.0)]),
            c_map: AffineMap::vector(l.n, &[(l.xc, 1.0)]),
            senses: vec![Sense::Ge, Sense::Ge, Sense::Eq, Sense::Eq],
            lower,
            upper,
        });
    }
    let dims = StageDims {
        n: (1..=h).map(|t| layout(t, h).n).collect(),
        m: std::iter::once(2).chain(std::iter::repeat_n(4, h - 1)).collect(),
    };
    let model = MultistageRobustLP { dims, xi_dims: vec![1; h - 1], first, stages };
    let supports = match data.variant {
        DemandVariant::Continuous => {
            data.demand_nominal.iter().map(|&v| StageSupport::Box { nominal: vec![v], rho: data.rho }).collect()
        }
        DemandVariant::Integer => INTEGER_DEMAND_BOUNDS[..h - 1]
            .iter()
            .map(|&(l, u)| StageSupport::IntegerBox { lower: vec![l], upper: vec![u] })
            .collect(),
    };
    RobustProblem::new(model, UncertaintySet::new(supports)?)
}

/// Benchmark instance with the standard data.
pub fn standard_problem(stages: usize, variant: DemandVariant) -> Result<RobustProblem, SwcError> {
    build_coc(&InventoryData::standard(stages, variant)?)
}
