use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::union_find::UnionFind;

/// Independence test over subsets of `0..ground_size()` given as bitmasks.
pub trait IndependenceOracle: Send + Sync + Debug {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: u64) -> bool;
}

/// Edge sets without cycles.
#[derive(Debug, Clone)]
pub struct GraphicOracle {
    graph: MultiGraph,
}

impl GraphicOracle {
    pub fn new(graph: MultiGraph) -> Result<Self> {
        if graph.edge_count() > 63 {
            return Err(Error::guard("graphic matroid edge count", 63, graph.edge_count()));
        }
        Ok(GraphicOracle { graph })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }
}

impl IndependenceOracle for GraphicOracle {
    fn ground_size(&self) -> usize {
        self.graph.edge_count()
    }

    fn is_independent(&self, set: u64) -> bool {
        let mut uf = UnionFind::new(self.graph.vertex_count());
        self.graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| set & (1 << i) != 0)
            .all(|(_, e)| uf.union(e.u, e.v))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UniformOracle {
    k: usize,
    n: usize,
}

impl UniformOracle {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::invalid(format!("uniform matroid needs k <= n, got k={k}, n={n}")));
        }
        Ok(UniformOracle { k, n })
    }
}

impl IndependenceOracle for UniformOracle {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: u64) -> bool {
        set.count_ones() as usize <= self.k
    }
}

/// Linear independence of GF(2) column vectors.
#[derive(Debug, Clone)]
pub struct BinaryOracle {
    columns: Vec<u64>,
}

impl BinaryOracle {
    pub fn new(columns: Vec<u64>) -> Self {
        BinaryOracle { columns }
    }
}

impl IndependenceOracle for BinaryOracle {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn is_independent(&self, set: u64) -> bool {
        // Echelon basis indexed by leading bit.
        let mut basis = [0u64; 64];
        for (i, &col) in self.columns.iter().enumerate() {
            if set & (1 << i) == 0 {
                continue;
            }
            let mut v = col;
            while v != 0 {
                let lead = 63 - v.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = v;
                    break;
                }
                v ^= basis[lead];
            }
            if v == 0 {
                return false;
            }
        }
        true
    }
}
