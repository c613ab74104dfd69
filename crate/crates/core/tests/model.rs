use proptest::prelude::*;
use swc_lp::Sense;
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::model::{FirstStage, Stage};
use swc_robust::{AffineMap, MultistageRobustLP, ScenarioPath, StageDims, StageSupport, SwcError, UncertaintySet};

fn two_stage(t_map: AffineMap, h_map: AffineMap) -> MultistageRobustLP {
    MultistageRobustLP {
        dims: StageDims { n: vec![2, 1], m: vec![0, 1] },
        xi_dims: vec![2],
        first: FirstStage { a: vec![], h: vec![], c: vec![1.0, 1.0], senses: vec![], lower: vec![0.0; 2], upper: vec![f64::INFINITY; 2] },
        stages: vec![Stage {
            t_map,
            w_map: AffineMap::constant(1, 1, vec![(0, 0, 1.0)]),
            h_map,
            c_map: AffineMap::vector(1, &[(0, 1.0)]),
            senses: vec![Sense::Ge],
            lower: vec![0.0],
            upper: vec![f64::INFINITY],
        }],
    }
}

#[test]
fn constant_maps_ignore_the_path() {
    let map = AffineMap::constant(2, 2, vec![(0, 1, 3.0), (1, 0, -1.0)]);
    let a = map.evaluate(&[5.0, 7.0]);
    let b = map.evaluate(&[0.0, 0.0]);
    assert_eq!(a, b);
    assert_eq!(a.get(0, 1), 3.0);
    assert_eq!(a.get(1, 0), -1.0);
}

#[test]
fn zero_path_returns_base() {
    let map = AffineMap::constant(2, 1, vec![(0, 0, 2.0)]).with_term(0, vec![(0, 0, 4.0), (1, 0, 1.0)]).with_term(1, vec![(1, 0, -3.0)]);
    assert_eq!(map.evaluate_vector(&[0.0, 0.0]), vec![2.0, 0.0]);
    assert_eq!(map.evaluate_vector(&[1.0, 2.0]), vec![6.0, -5.0]);
    assert_eq!(map.evaluate_sparse(&[0.0, 0.0]), vec![(0, 0, 2.0)]);
}

#[test]
fn inventory_balance_rhs_is_minus_demand() {
    let problem = standard_problem(2, DemandVariant::Continuous).unwrap();
    let coeffs = problem.model.evaluate_coefficients(&ScenarioPath::scalars(&[52.5]), 2).unwrap();
    assert!(coeffs.h.contains(&-52.5), "{:?}", coeffs.h);
}

#[test]
fn evaluate_coefficients_checks_stage_and_path() {
    let problem = standard_problem(3, DemandVariant::Continuous).unwrap();
    let path = ScenarioPath::scalars(&[70.0, 100.0]);
    assert!(matches!(problem.model.evaluate_coefficients(&path, 1), Err(SwcError::Domain(_))));
    assert!(matches!(problem.model.evaluate_coefficients(&path, 4), Err(SwcError::Domain(_))));
    let short = ScenarioPath::scalars(&[70.0]);
    assert!(problem.model.evaluate_coefficients(&short, 3).is_err());
    assert!(problem.model.evaluate_coefficients(&path, 3).is_ok());
}

#[test]
fn inventory_models_validate() {
    for stages in 2..=5 {
        for variant in [DemandVariant::Continuous, DemandVariant::Integer] {
            standard_problem(stages, variant).unwrap().model.validate().unwrap();
        }
    }
}

#[test]
fn wrong_shape_is_named() {
    let model = two_stage(AffineMap::constant(1, 3, vec![]), AffineMap::vector(1, &[]));
    let v = model.violations();
    assert!(v.iter().any(|m| m.contains("stage 2") && m.contains("T") && m.contains("1x3") && m.contains("1x2")), "{v:?}");
}

#[test]
fn data_may_not_look_ahead() {
    let ok = two_stage(AffineMap::zeros(1, 2), AffineMap::vector(1, &[]).with_term(1, vec![(0, 0, 1.0)]));
    assert!(ok.violations().is_empty());
    let ahead = two_stage(AffineMap::zeros(1, 2), AffineMap::vector(1, &[]).with_term(2, vec![(0, 0, 1.0)]));
    let v = ahead.violations();
    assert!(v.iter().any(|m| m.contains("uncertainty component 2")), "{v:?}");
    assert!(matches!(ahead.validate(), Err(SwcError::InvalidModel(_))));
}

#[test]
fn short_horizon_and_bad_bounds_are_reported() {
    let mut model = two_stage(AffineMap::zeros(1, 2), AffineMap::vector(1, &[]));
    model.first.lower[0] = 3.0;
    model.first.upper[0] = 1.0;
    assert!(model.violations().iter().any(|m| m.contains("invalid bounds")));
    model.dims.n.truncate(1);
    assert!(model.violations().iter().any(|m| m.contains("horizon")));
}

#[test]
fn box_vertices_match_table() {
    let s = StageSupport::Box { nominal: vec![75.0], rho: 0.3 };
    assert_eq!(s.vertices(), vec![vec![52.5], vec![97.5]]);
    let flat = StageSupport::Box { nominal: vec![75.0, 10.0], rho: 0.0 };
    assert_eq!(flat.vertices(), vec![vec![75.0, 10.0]]);
    let d = StageSupport::Discrete { values: (1..=5).map(|v| vec![v as f64]).collect() };
    assert_eq!(d.vertices().len(), 5);
    assert_eq!(d.vertices()[4], vec![5.0]);
    let grid = StageSupport::IntegerBox { lower: vec![1, 3], upper: vec![2, 3] };
    assert_eq!(grid.vertices(), vec![vec![1.0, 3.0], vec![2.0, 3.0]]);
}

#[test]
fn five_stage_vertex_paths() {
    let problem = standard_problem(5, DemandVariant::Continuous).unwrap();
    let paths = problem.set.vertex_paths();
    assert_eq!(paths.len(), 16);
    assert_eq!(problem.set.vertex_path_count(), 16);
    let first: Vec<f64> = paths[0].realizations.iter().map(|v| v[0]).collect();
    assert!((first[0] - 52.5).abs() < 1e-9 && (first[1] - 70.0).abs() < 1e-9 && (first[2] - 87.5).abs() < 1e-9);
    assert!((first[3] - 100.0 * (1.0 + 0.5 * (std::f64::consts::PI / 3.0).sin()) * 0.7).abs() < 1e-9);
    assert!(paths.iter().all(|p| problem.set.contains(p, 1e-9)));
}

#[test]
fn invalid_supports_are_rejected() {
    assert!(UncertaintySet::new(vec![StageSupport::Box { nominal: vec![1.0], rho: 1.5 }]).is_err());
    assert!(UncertaintySet::new(vec![StageSupport::IntegerBox { lower: vec![3], upper: vec![2] }]).is_err());
    assert!(UncertaintySet::new(vec![StageSupport::Discrete { values: vec![] }]).is_err());
}

proptest! {
    #[test]
    fn evaluation_is_affine(
        a in prop::collection::vec(-10.0f64..10.0, 3),
        b in prop::collection::vec(-10.0f64..10.0, 3),
        alpha in 0.0f64..1.0,
        coeffs in prop::collection::vec(-5.0f64..5.0, 7),
    ) {
        let map = AffineMap::constant(2, 2, vec![(0, 0, coeffs[0]), (1, 1, coeffs[1])])
            .with_term(0, vec![(0, 0, coeffs[2]), (0, 1, coeffs[3])])
            .with_term(1, vec![(1, 0, coeffs[4])])
            .with_term(2, vec![(1, 1, coeffs[5]), (0, 0, coeffs[6])]);
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + (1.0 - alpha) * y).collect();
        let (ea, eb, em) = (map.evaluate(&a), map.evaluate(&b), map.evaluate(&mix));
        for k in 0..4 {
            let want = alpha * ea.data[k] + (1.0 - alpha) * eb.data[k];
            prop_assert!((em.data[k] - want).abs() <= 1e-12 * (1.0 + want.abs()) * 100.0);
        }
    }
}
