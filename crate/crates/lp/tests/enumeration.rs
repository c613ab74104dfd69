mod common;

use swc_lp::simplex::solve;
use swc_lp::{Pricing, SimplexOptions, Status};

fn check(pricing: Pricing, seeds: std::ops::Range<u64>) {
    let opts = SimplexOptions { pricing, ..Default::default() };
    let mut counts = [0usize; 3];
    for seed in seeds {
        let lp = common::random_lp(seed, 8, 8);
        let oracle = common::enumerate(&lp);
        let res = solve(&lp, &opts).unwrap();
        assert_eq!(res.status, oracle.status, "seed {seed}");
        match oracle.status {
            Status::Optimal => {
                counts[0] += 1;
                let (a, b) = (res.objective.unwrap(), oracle.objective.unwrap());
                assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "seed {seed}: simplex {a} vs vertices {b}");
                assert!(lp.max_violation(&res.x) <= 1e-8, "seed {seed}: infeasible point");
            }
            Status::Infeasible => counts[1] += 1,
            _ => counts[2] += 1,
        }
    }
    // the generator must exercise every outcome
    assert!(counts.iter().all(|&c| c > 0), "outcome counts {counts:?}");
}

#[test]
fn dantzig_matches_vertex_enumeration() {
    check(Pricing::Dantzig, 0..200);
}

#[test]
fn bland_matches_vertex_enumeration() {
    check(Pricing::Bland, 1000..1200);
}
