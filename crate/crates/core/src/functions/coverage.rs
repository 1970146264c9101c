use crate::error::{invalid, Result};
use crate::objective::{ComponentOracle, DecomposableObjective, GroundSet};

/// A bipartite graph whose right side is the ground set; each left node
/// becomes one 0/1 coverage component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteDataset {
    left_size: usize,
    right_size: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteDataset {
    /// Validates indices and collapses duplicate edges.
    pub fn new(
        left_size: usize,
        right_size: usize,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if right_size == 0 {
            return Err(invalid("bipartite dataset needs at least one right node"));
        }
        if left_size == 0 {
            return Err(invalid("bipartite dataset needs at least one left node"));
        }
        if let Some(&(u, v)) = edges
            .iter()
            .find(|(u, v)| *u >= left_size || *v >= right_size)
        {
            return Err(invalid(format!(
                "edge ({u},{v}) outside {left_size} left x {right_size} right nodes"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            left_size,
            right_size,
            edges,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted right neighbours of every left node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left_size];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        adj
    }
}

struct Cover {
    neighbours: Vec<usize>,
}

impl ComponentOracle for Cover {
    fn value(&self, members: &[usize]) -> f64 {
        let hit = members
            .iter()
            .any(|e| self.neighbours.binary_search(e).is_ok());
        if hit {
            1.0
        } else {
            0.0
        }
    }
}

/// `F(S)` = number of left nodes adjacent to some element of `S`.
pub fn coverage_objective(data: &BipartiteDataset) -> Result<DecomposableObjective> {
    let components = data
        .adjacency()
        .into_iter()
        .map(|neighbours| Box::new(Cover { neighbours }) as Box<dyn ComponentOracle>)
        .collect();
    DecomposableObjective::new(GroundSet::new(data.right_size)?, components)
}
