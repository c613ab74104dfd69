#![allow(dead_code)]

//! Random fully discrete robust problems and a nested min-max oracle.
//!
//! The oracle never builds a scenario tree: it evaluates
//! `min_x1 c1 x1 + max_ξ1 min_x2 (c2 x2 + max_ξ2 min_x3 ...)` recursively,
//! solving each inner minimization by Kelley cutting planes on the convex
//! value function of the next stage.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swc_lp::{simplex, LpInstance, Sense, SimplexOptions, Status};
use swc_robust::model::{FirstStage, Stage};
use swc_robust::{AffineMap, MultistageRobustLP, RobustProblem, StageDims, StageSupport, UncertaintySet};

pub const X_UPPER: f64 = 5.0;
pub const SLACK_COST: f64 = 20.0;

/// Stage `t >= 2`: rows `T x^{t-1} + W x^t >= h0 + Σ_s ξ_s hs[s]`, cost
/// `c0 + ξ_{t-1} c1`. The last variable is an always-available slack.
#[derive(Clone, Debug)]
pub struct RandomStage {
    pub n: usize,
    pub t: Vec<Vec<f64>>,
    pub w: Vec<Vec<f64>>,
    pub h0: Vec<f64>,
    pub hs: Vec<Vec<f64>>,
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RandomProblem {
    pub n1: usize,
    pub c1: Vec<f64>,
    /// Single row `Σ x1 <= cap`.
    pub cap: f64,
    pub stages: Vec<RandomStage>,
    /// Scalar support values of `ξ^1..ξ^{H-1}`.
    pub support: Vec<Vec<f64>>,
}

fn quarter(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo..hi) * 4.0).round() / 4.0
}

pub fn random_problem(seed: u64, horizon: usize) -> RandomProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = rng.gen_range(1..=3);
    let c1 = (0..n1).map(|_| quarter(&mut rng, -1.0, 3.0)).collect();
    let mut prev = n1;
    let mut stages = Vec::new();
    let mut support = Vec::new();
    for t in 2..=horizon {
        let n = rng.gen_range(1..=2) + 1;
        let m = rng.gen_range(1..=2);
        let mut w = vec![vec![0.0; n]; m];
        let mut tm = vec![vec![0.0; prev]; m];
        for r in 0..m {
            for v in w[r].iter_mut().take(n - 1) {
                *v = quarter(&mut rng, -1.0, 2.0);
            }
            w[r][n - 1] = 1.0;
            for v in tm[r].iter_mut() {
                *v = quarter(&mut rng, -1.0, 1.0);
            }
        }
        let h0 = (0..m).map(|_| quarter(&mut rng, 0.0, 4.0)).collect();
        let hs = (0..m).map(|_| (0..t - 1).map(|_| quarter(&mut rng, -1.0, 1.0)).collect()).collect();
        let mut c0: Vec<f64> = (0..n).map(|_| quarter(&mut rng, -1.0, 3.0)).collect();
        let mut c1s: Vec<f64> = (0..n).map(|_| quarter(&mut rng, -0.5, 0.5)).collect();
        c0[n - 1] = SLACK_COST;
        c1s[n - 1] = 0.0;
        stages.push(RandomStage { n, t: tm, w, h0, hs, c0, c1: c1s });
        let k = rng.gen_range(2..=3);
        let mut vals: Vec<f64> = Vec::new();
        while vals.len() < k {
            let v = quarter(&mut rng, 0.0, 3.0);
            if !vals.contains(&v) {
                vals.push(v);
            }
        }
        support.push(vals);
        prev = n;
    }
    RandomProblem { n1, c1, cap: X_UPPER * n1 as f64 - 1.0, stages, support }
}

impl RandomProblem {
    pub fn horizon(&self) -> usize {
        self.stages.len() + 1
    }

    pub fn to_problem(&self) -> RobustProblem {
        let mut n = vec![self.n1];
        let mut m = vec![1];
        let mut stages = Vec::new();
        for (k, s) in self.stages.iter().enumerate() {
            let t = k + 2;
            let rows = s.w.len();
            let prev = n[k];
            n.push(s.n);
            m.push(rows);
            let trip = |a: &Vec<Vec<f64>>| {
                let mut out = Vec::new();
                for (r, row) in a.iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        if v != 0.0 {
                            out.push((r, c, v));
                        }
                    }
                }
                out
            };
            let mut h_map = AffineMap::constant(rows, 1, s.h0.iter().enumerate().map(|(r, &v)| (r, 0, v)).collect());
            for src in 0..t - 1 {
                h_map = h_map.with_term(src, (0..rows).map(|r| (r, 0, s.hs[r][src])).collect());
            }
            let c_map = AffineMap::constant(s.n, 1, s.c0.iter().enumerate().map(|(j, &v)| (j, 0, v)).collect())
                .with_term(t - 2, s.c1.iter().enumerate().map(|(j, &v)| (j, 0, v)).collect());
            let mut upper = vec![X_UPPER; s.n];
            upper[s.n - 1] = f64::INFINITY;
            stages.push(Stage {
                t_map: AffineMap::constant(rows, prev, trip(&s.t)),
                w_map: AffineMap::constant(rows, s.n, trip(&s.w)),
                h_map,
                c_map,
                senses: vec![Sense::Ge; rows],
                lower: vec![0.0; s.n],
                upper,
            });
        }
        let model = MultistageRobustLP {
            dims: StageDims { n, m },
            xi_dims: vec![1; self.stages.len()],
            first: FirstStage {
                a: (0..self.n1).map(|j| (0, j, 1.0)).collect(),
                h: vec![self.cap],
                c: self.c1.clone(),
                senses: vec![Sense::Le],
                lower: vec![0.0; self.n1],
                upper: vec![X_UPPER; self.n1],
            },
            stages,
        };
        let set = UncertaintySet::new(
            self.support.iter().map(|v| StageSupport::Discrete { values: v.iter().map(|&x| vec![x]).collect() }).collect(),
        )
        .expect("valid support");
        RobustProblem::new(model, set).expect("valid problem")
    }

    /// Robust multistage value by nested min-max.
    pub fn nested_value(&self) -> f64 {
        self.stage_value(1, &[], &[]).0
    }

    /// `min_x c^t x + V_{t+1}(x)` subject to the stage rows, with its
    /// subgradient in `x_prev`.
    fn stage_value(&self, t: usize, x_prev: &[f64], prefix: &[f64]) -> (f64, Vec<f64>) {
        let h = self.horizon();
        let (n, cost, rows): (usize, Vec<f64>, Vec<(Vec<f64>, Sense, f64)>) = if t == 1 {
            (self.n1, self.c1.clone(), vec![(vec![1.0; self.n1], Sense::Le, self.cap)])
        } else {
            let s = &self.stages[t - 2];
            let cost = (0..s.n).map(|j| s.c0[j] + prefix[t - 2] * s.c1[j]).collect();
            let rows = (0..s.w.len())
                .map(|r| {
                    let mut rhs = s.h0[r];
                    for (src, &xi) in prefix.iter().enumerate() {
                        rhs += xi * s.hs[r][src];
                    }
                    for (j, &x) in x_prev.iter().enumerate() {
                        rhs -= s.t[r][j] * x;
                    }
                    (s.w[r].clone(), Sense::Ge, rhs)
                })
                .collect();
            (s.n, cost, rows)
        };
        let slack_last = t > 1;
        let mut cuts: Vec<(Vec<f64>, f64)> = Vec::new();
        for _ in 0..2000 {
            let mut lp = LpInstance::new();
            for j in 0..n {
                let upper = if slack_last && j == n - 1 { f64::INFINITY } else { X_UPPER };
                lp.add_var(0.0, upper, cost[j]);
            }
            let theta = (t < h).then(|| lp.add_var(-1e7, f64::INFINITY, 1.0));
            for (coeffs, sense, rhs) in &rows {
                lp.add_row(coeffs.iter().enumerate().map(|(j, &v)| (j, v)), *sense, *rhs);
            }
            if let Some(th) = theta {
                for (g, alpha) in &cuts {
                    let mut coeffs: Vec<(usize, f64)> = g.iter().enumerate().map(|(j, &v)| (j, -v)).collect();
                    coeffs.push((th, 1.0));
                    lp.add_row(coeffs, Sense::Ge, *alpha);
                }
            }
            let res = simplex::solve(&lp, &SimplexOptions::default()).expect("oracle LP");
            assert_eq!(res.status, Status::Optimal, "oracle subproblem at stage {t}");
            let obj = res.objective.expect("objective");
            let subgrad = || -> Vec<f64> {
                if t == 1 {
                    return Vec::new();
                }
                let s = &self.stages[t - 2];
                (0..x_prev.len()).map(|j| -(0..rows.len()).map(|r| res.duals[r] * s.t[r][j]).sum::<f64>()).collect()
            };
            let Some(th) = theta else {
                return (obj, subgrad());
            };
            let x: Vec<f64> = res.x[..n].to_vec();
            let mut worst = f64::NEG_INFINITY;
            for &xi in &self.support[t - 1] {
                let mut next = prefix.to_vec();
                next.push(xi);
                let (v, g) = self.stage_value(t + 1, &x, &next);
                worst = worst.max(v);
                let alpha = v - g.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
                cuts.push((g, alpha));
            }
            if res.x[th] >= worst - 1e-9 * (1.0 + worst.abs()) {
                return (obj, subgrad());
            }
        }
        panic!("cutting planes did not converge at stage {t}");
    }
}
