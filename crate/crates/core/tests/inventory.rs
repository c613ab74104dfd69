use swc_robust::builders::deterministic_value;
use swc_robust::inventory::{nominal_demand, standard_problem, DemandVariant, InventoryData, INTEGER_DEMAND_BOUNDS};
use swc_robust::swc_lp::SolverChoice;
use swc_robust::{ScenarioPath, StageSupport};

#[test]
fn nominal_demand_values() {
    assert!((nominal_demand(1) - 75.0).abs() < 1e-12);
    assert!((nominal_demand(2) - 100.0).abs() < 1e-12);
    assert!((nominal_demand(4) - 143.30127).abs() < 1e-4);
}

#[test]
fn two_stage_vertices() {
    let p = standard_problem(2, DemandVariant::Continuous).unwrap();
    assert_eq!(p.set.stage_vertices(1), vec![vec![52.5], vec![97.5]]);
}

#[test]
fn integer_intervals() {
    let p = standard_problem(5, DemandVariant::Integer).unwrap();
    for (s, &(l, u)) in p.set.stages.iter().zip(&INTEGER_DEMAND_BOUNDS) {
        assert_eq!(s, &StageSupport::IntegerBox { lower: vec![l], upper: vec![u] });
    }
    assert_eq!(INTEGER_DEMAND_BOUNDS[0], (53, 97));
    assert_eq!(INTEGER_DEMAND_BOUNDS[2], (88, 163));
}

#[test]
fn bad_data_is_rejected() {
    assert!(InventoryData::standard(1, DemandVariant::Continuous).is_err());
    assert!(InventoryData::standard(6, DemandVariant::Continuous).is_err());
    let mut d = InventoryData::standard(3, DemandVariant::Continuous).unwrap();
    d.rho = 1.5;
    d.cum_lower[0] = 1e9;
    let msg = d.validate().unwrap_err().to_string();
    assert!(msg.contains("rho") && msg.contains("cumulative"), "{msg}");
}

/// One demand of 75: order exactly 75 at unit cost, nothing held or owed.
#[test]
fn single_scenario_orders_the_demand() {
    let p = standard_problem(2, DemandVariant::Continuous).unwrap();
    let s = deterministic_value(&p.model, &ScenarioPath::scalars(&[75.0]), &SolverChoice::default()).unwrap();
    assert!((s.value - 75.0).abs() < 1e-7, "{}", s.value);
    assert!((s.x1[0] - 75.0).abs() < 1e-7);
    // stage cost sits on its max term
    assert!((s.x1[1] - s.x1[0]).abs() < 1e-7);
}

/// The stage-1 cumulative band bounds `s_co^1`, not the first order.
#[test]
fn first_order_is_not_capped_by_the_stage_one_band() {
    let p = standard_problem(2, DemandVariant::Continuous).unwrap();
    let s = deterministic_value(&p.model, &ScenarioPath::scalars(&[100.0]), &SolverChoice::default()).unwrap();
    assert!((s.value - 100.0).abs() < 1e-7, "{}", s.value);
    assert!((47.0 - 1e-9..=94.0 + 1e-9).contains(&s.x1[3]));
}
