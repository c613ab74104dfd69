#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swc_lp::{LpInstance, Sense, Status};

pub struct Enumerated {
    pub status: Status,
    pub objective: Option<f64>,
}

const MAXN: usize = 8;

/// Solves the `n x n` system `a x = b` (augmented rows) in place; `false` when singular.
fn gauss(a: &mut [[f64; MAXN + 1]; MAXN], n: usize, x: &mut [f64; MAXN]) -> bool {
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[i][k].abs() > a[p][k].abs() {
                p = i;
            }
        }
        if a[p][k].abs() < 1e-9 {
            return false;
        }
        a.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..=n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (a[k][n] - s) / a[k][k];
    }
    true
}

/// Best vertex of the polyhedron with every infinite upper bound replaced by `big`.
fn best_vertex(lp: &LpInstance, big: f64) -> Option<f64> {
    let n = lp.num_vars();
    assert!(n <= MAXN);
    // constraints as (a, b, is_equality) meaning a·x <= b or a·x = b
    let mut cons: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    for row in lp.rows() {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] += v;
        }
        match row.sense {
            Sense::Le => cons.push((a, row.rhs, false)),
            Sense::Ge => cons.push((a.iter().map(|v| -v).collect(), -row.rhs, false)),
            Sense::Eq => cons.push((a, row.rhs, true)),
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        cons.push((e.clone(), -lp.lower()[j], false));
        e[j] = 1.0;
        cons.push((e, lp.upper()[j].min(big), false));
    }
    let eqs: Vec<usize> = (0..cons.len()).filter(|&i| cons[i].2).collect();
    let ineqs: Vec<usize> = (0..cons.len()).filter(|&i| !cons[i].2).collect();
    let feasible = |x: &[f64]| {
        cons.iter().all(|(a, b, eq)| {
            let act: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            let tol = 1e-7 * (1.0 + b.abs());
            if *eq { (act - b).abs() <= tol } else { act <= b + tol }
        })
    };
    let mut best: Option<f64> = None;
    let mut choose = |active: &[usize]| {
        let mut a = [[0.0; MAXN + 1]; MAXN];
        for (r, &i) in active.iter().enumerate() {
            a[r][..n].copy_from_slice(&cons[i].0);
            a[r][n] = cons[i].1;
        }
        let mut x = [0.0; MAXN];
        if gauss(&mut a, n, &mut x) {
            let x = &x[..n];
            if feasible(x) {
                let obj = lp.objective_value(x);
                if best.map_or(true, |v| obj < v) {
                    best = Some(obj);
                }
            }
        }
    };
    // Every vertex is defined by n linearly independent active constraints;
    // equalities are checked by `feasible`, so plain n-subsets suffice.
    let all: Vec<usize> = eqs.iter().chain(&ineqs).copied().collect();
    let mut idx: Vec<usize> = (0..n).collect();
    if all.len() < n {
        return None;
    }
    loop {
        let subset: Vec<usize> = idx.iter().map(|&k| all[k]).collect();
        choose(&subset);
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < all.len() - n + i {
                idx[i] += 1;
                for k in i + 1..n {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Basic-feasible-solution enumeration. Requires finite lower bounds so the
/// polyhedron is pointed; unboundedness shows up as an optimum that keeps
/// improving when the artificial box is enlarged.
pub fn enumerate(lp: &LpInstance) -> Enumerated {
    assert!(lp.lower().iter().all(|l| l.is_finite()), "oracle needs finite lower bounds");
    const BIG: f64 = 1e6;
    match best_vertex(lp, BIG) {
        None => Enumerated { status: Status::Infeasible, objective: None },
        Some(v1) => {
            let v2 = best_vertex(lp, 2.0 * BIG).expect("feasible with the larger box");
            if v2 < v1 - 1e-6 * (1.0 + v1.abs()) {
                Enumerated { status: Status::Unbounded, objective: None }
            } else {
                Enumerated { status: Status::Optimal, objective: Some(v1) }
            }
        }
    }
}

/// Small random LP with integer data and finite lower bounds.
pub fn random_lp(seed: u64, max_vars: usize, max_rows: usize) -> LpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_rows);
    let mut lp = LpInstance::new();
    for _ in 0..n {
        let l = if rng.gen_bool(0.6) { 0.0 } else { rng.gen_range(-4..=0) as f64 };
        let u = if rng.gen_bool(0.5) { f64::INFINITY } else { l + rng.gen_range(0..=8) as f64 };
        lp.add_var(l, u, rng.gen_range(-5..=5) as f64);
    }
    for _ in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.7) {
                coeffs.push((j, rng.gen_range(-5..=5) as f64));
            }
        }
        let sense = match rng.gen_range(0..10) {
            0..=4 => Sense::Le,
            5..=8 => Sense::Ge,
            _ => Sense::Eq,
        };
        lp.add_row(coeffs, sense, rng.gen_range(-10..=10) as f64);
    }
    lp
}
