// How sampled paths share certificates: four paths over {1..5}^2 where
// two paths start with the same first-stage draw.

use swc_robust::builders::build_swc;
use swc_robust::inventory::{standard_problem, DemandVariant};
use swc_robust::{ScenarioPath, ScenarioPrefixTree, SwcError};

pub fn run() -> Result<(), SwcError> {
    let paths: Vec<ScenarioPath> =
        [[3.0, 4.0], [5.0, 2.0], [2.0, 1.0], [5.0, 5.0]].iter().map(|p| ScenarioPath::scalars(p)).collect();
    let tree = ScenarioPrefixTree::build(paths)?;
    println!("nodes per stage: {:?}", tree.node_counts());
    for i in 0..tree.num_paths() {
        println!("path {} {:?} -> nodes {:?}", i + 1, tree.paths[i].realizations, tree.path_to_node[i]);
    }

    // any three-stage model with scalar uncertainty shows the block layout
    let model = standard_problem(3, DemandVariant::Continuous)?.model;
    let (lp, map) = build_swc(&model, &tree)?;
    println!("{} variables; stage-2 blocks {}, stage-3 blocks {}", lp.num_vars(), map.blocks[0].len(), map.blocks[1].len());
    println!("paths 2 and 4 share x2 at {:?}", map.certificate(&tree, 1, 2));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), SwcError> {
    run()
}
