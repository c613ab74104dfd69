mod common;

use proptest::prelude::*;
use swc_lp::lpfile::{parse_lp, write_lp};
use swc_lp::simplex::solve;
use swc_lp::{LpInstance, SimplexOptions};

fn random_instance(seed: u64) -> LpInstance {
    let mut lp = common::random_lp(seed, 8, 8);
    // exercise free and -inf bounds and awkward names
    if lp.num_vars() > 1 {
        lp.set_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        lp.set_var_name(0, "gamma");
        lp.set_var_name(1, "x[1,2] e");
    }
    lp
}

proptest! {
    #[test]
    fn write_parse_write_is_stable(seed in 0u64..10_000) {
        let lp = random_instance(seed);
        let first = write_lp(&lp);
        let parsed = parse_lp(&first).unwrap();
        prop_assert_eq!(&write_lp(&parsed), &first);
        prop_assert_eq!(parsed.num_vars(), lp.num_vars());
        prop_assert_eq!(parsed.cost(), lp.cost());
        prop_assert_eq!(parsed.lower(), lp.lower());
        prop_assert_eq!(parsed.upper(), lp.upper());
    }

    #[test]
    fn parsed_instance_has_same_optimum(seed in 0u64..10_000) {
        let lp = random_instance(seed);
        let parsed = parse_lp(&write_lp(&lp)).unwrap();
        let a = solve(&lp, &SimplexOptions::default()).unwrap();
        let b = solve(&parsed, &SimplexOptions::default()).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective, b.objective);
    }
}

#[test]
fn non_integral_coefficients_roundtrip_exactly() {
    let mut lp = LpInstance::new();
    let x = lp.add_var(-0.1, 1e-7, 1.0 / 3.0);
    let y = lp.add_var(0.0, 1e300, -2.5e-12);
    lp.add_row([(x, std::f64::consts::PI), (y, -1e21)], swc_lp::Sense::Le, 0.3);
    let back = parse_lp(&write_lp(&lp)).unwrap();
    assert_eq!(back.cost(), lp.cost());
    assert_eq!(back.rows()[0].coeffs, lp.rows()[0].coeffs);
    assert_eq!(back.upper(), lp.upper());
    assert_eq!(back.lower(), lp.lower());
}
