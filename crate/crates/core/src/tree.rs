//! Prefix tree of sampled paths: paths that agree on `ξ^1..ξ^t` share the
//! stage-`t` node and hence the certificate decided after observing it.

use std::collections::HashMap;

use crate::uncertainty::ScenarioPath;
use crate::SwcError;

#[derive(Clone, Debug)]
pub struct TreeNode {
    /// Node index at the previous stage; `None` at stage 1.
    pub parent: Option<usize>,
    /// A path passing through the node.
    pub representative: usize,
}

#[derive(Clone, Debug)]
pub struct ScenarioPrefixTree {
    /// `nodes[t-1]` lists the stage-`t` nodes in order of first appearance.
    pub nodes: Vec<Vec<TreeNode>>,
    /// `path_to_node[i][t-1]` is path `i`'s stage-`t` node.
    pub path_to_node: Vec<Vec<usize>>,
    pub paths: Vec<ScenarioPath>,
    /// Whether equal prefixes were merged.
    pub shared: bool,
}

fn key(xi: &[f64]) -> Vec<u64> {
    // `+ 0.0` folds -0.0 into 0.0 so equal values compare equal
    xi.iter().map(|v| (v + 0.0).to_bits()).collect()
}

impl ScenarioPrefixTree {
    /// Groups paths by exact equality of their prefixes.
    pub fn build(paths: Vec<ScenarioPath>) -> Result<Self, SwcError> {
        Self::assemble(paths, true)
    }

    /// Tree in which every path owns all of its nodes.
    pub fn without_sharing(paths: Vec<ScenarioPath>) -> Result<Self, SwcError> {
        Self::assemble(paths, false)
    }

    fn assemble(paths: Vec<ScenarioPath>, share: bool) -> Result<Self, SwcError> {
        let Some(first) = paths.first() else {
            return Err(SwcError::Domain("scenario tree needs at least one path".into()));
        };
        let stages = first.stages();
        if stages == 0 || paths.iter().any(|p| p.stages() != stages) {
            return Err(SwcError::Domain("paths must share a positive stage count".into()));
        }
        let mut nodes: Vec<Vec<TreeNode>> = vec![Vec::new(); stages];
        let mut path_to_node = vec![Vec::with_capacity(stages); paths.len()];
        let mut index: Vec<HashMap<(Option<usize>, Vec<u64>), usize>> = vec![HashMap::new(); stages];
        for (i, p) in paths.iter().enumerate() {
            let mut parent = None;
            for t in 0..stages {
                let id = if share {
                    *index[t].entry((parent, key(&p.realizations[t]))).or_insert_with(|| {
                        nodes[t].push(TreeNode { parent, representative: i });
                        nodes[t].len() - 1
                    })
                } else {
                    nodes[t].push(TreeNode { parent, representative: i });
                    nodes[t].len() - 1
                };
                path_to_node[i].push(id);
                parent = Some(id);
            }
        }
        Ok(ScenarioPrefixTree { nodes, path_to_node, paths, shared: share })
    }

    /// Number of uncertainty stages, `H - 1`.
    pub fn stages(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_counts(&self) -> Vec<usize> {
        self.nodes.iter().map(Vec::len).collect()
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }

    /// Representative path of stage-`t` node `k`.
    pub fn node_path(&self, t: usize, k: usize) -> &ScenarioPath {
        &self.paths[self.nodes[t - 1][k].representative]
    }

    /// Tree over the listed paths, built with the same sharing rule.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, SwcError> {
        Self::assemble(indices.iter().map(|&i| self.paths[i].clone()).collect(), self.shared)
    }

    /// Path indices grouped by stage-1 node, in node order.
    pub fn stage_one_groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.nodes[0].len()];
        for (i, nodes) in self.path_to_node.iter().enumerate() {
            groups[nodes[0]].push(i);
        }
        groups
    }

    pub fn shares_node(&self, i: usize, j: usize, t: usize) -> bool {
        self.path_to_node[i][t - 1] == self.path_to_node[j][t - 1]
    }
}
