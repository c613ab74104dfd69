use swc_robust::config::{RunConfig, SolverKind};
use swc_robust::experiment::DESK_EPSILONS;

#[test]
fn absent_fields_take_defaults() {
    let cfg: RunConfig = serde_json::from_str(r#"{"benchmark": "inventory", "stages": 3}"#).unwrap();
    assert_eq!(cfg.epsilons, DESK_EPSILONS.to_vec());
    assert_eq!(cfg.solver, SolverKind::Builtin);
    assert_eq!(cfg.validation_batches(), 100);
    let p = cfg.problem().unwrap();
    let opts = cfg.experiment_options(&p);
    assert_eq!(opts.n0, p.model.n1());
    assert_eq!(opts.instances, 100);
}

#[test]
fn paper_scale_raises_validation_unless_set() {
    let mut cfg = RunConfig { paper_scale: true, ..Default::default() };
    assert_eq!(cfg.validation_batches(), 1000);
    cfg.validation_batches = Some(7);
    assert_eq!(cfg.validation_batches(), 7);
}

#[test]
fn unknown_fields_and_benchmarks_are_errors() {
    assert!(serde_json::from_str::<RunConfig>(r#"{"epsilon": [0.1]}"#).is_err());
    let cfg = RunConfig { benchmark: Some("warehouse".into()), ..Default::default() };
    assert!(cfg.problem().unwrap_err().to_string().contains("warehouse"));
    assert!(RunConfig::default().problem().is_err());
    let ext = RunConfig { solver: SolverKind::External, solver_cmd: None, ..Default::default() };
    if std::env::var_os("SWC_EXTERNAL_SOLVER").is_none() {
        assert!(ext.solver().is_err());
    }
}
