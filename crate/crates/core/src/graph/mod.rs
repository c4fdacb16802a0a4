//! Loopless multigraphs with stable edge identities and their minors.
//!
//! Edges keep their [`EdgeId`] through contraction and deletion of other
//! edges, so weights and rates attached to an edge can follow it into every
//! minor. Vertex labels, on the other hand, are renumbered densely after each
//! contraction and the renumbering map is handed back to the caller.

mod bond;
mod tree;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

pub use bond::{bonds, is_bond, largest_bond, MAX_BOND_VERTICES};
pub use tree::{
    enumerate_spanning_trees, fundamental_cycle, kruskal_mst, Kruskal, SpanningTree,
    MAX_ENUMERATION_EDGES,
};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// A set of edges, ordered by id.
pub type EdgeSubset = BTreeSet<EdgeId>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl EdgeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_owned())
    }
}

impl From<String> for EdgeId {
    fn from(s: String) -> Self {
        EdgeId(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Loopless multigraph. Immutable; minor operations return new values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl MultiGraph {
    /// Builds a graph on `n >= 1` vertices. Loops, out-of-range endpoints and
    /// duplicate edge ids are rejected.
    pub fn new<I, S>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, VertexId, VertexId)>,
        S: Into<EdgeId>,
    {
        if n == 0 {
            return Err(Error::invalid("graph must have at least one vertex"));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (id, u, v) in edges {
            let id = id.into();
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge `{id}` has endpoint outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("edge `{id}` is a loop")));
            }
            if !seen.insert(id.clone()) {
                return Err(Error::invalid(format!("duplicate edge id `{id}`")));
            }
            out.push(Edge { id, u, v });
        }
        Ok(MultiGraph { n, edges: out })
    }

    /// Builds a graph with edge ids `e0, e1, ...` in the order given.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let width = if pairs.len() > 10 { 2 } else { 1 };
        MultiGraph::new(
            n,
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (format!("e{i:0width$}"), u, v)),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.iter().map(|e| &e.id)
    }

    /// Position of an edge in [`MultiGraph::edges`].
    pub fn position(&self, id: &EdgeId) -> Option<usize> {
        self.edges.iter().position(|e| &e.id == id)
    }

    pub(crate) fn require(&self, id: &EdgeId) -> Result<usize> {
        self.position(id).ok_or_else(|| Error::UnknownEdge(id.clone()))
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| &e.id == id)
    }

    /// Contracts `e`, merging its endpoints and dropping every edge that
    /// becomes a loop. Returns the minor and the map `old vertex -> new vertex`.
    pub fn contract(&self, e: &EdgeId) -> Result<(MultiGraph, Vec<VertexId>)> {
        let pos = self.require(e)?;
        let Edge { u, v, .. } = self.edges[pos];
        let (keep, gone) = (u.min(v), u.max(v));
        let renumber: Vec<VertexId> = (0..self.n)
            .map(|x| match x.cmp(&gone) {
                std::cmp::Ordering::Less => x,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => x - 1,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|edge| {
                let (a, b) = (renumber[edge.u], renumber[edge.v]);
                (a != b).then(|| Edge {
                    id: edge.id.clone(),
                    u: a,
                    v: b,
                })
            })
            .collect();
        Ok((
            MultiGraph {
                n: self.n - 1,
                edges,
            },
            renumber,
        ))
    }

    /// Contracts a sequence of edges, skipping edges already removed as loops.
    pub fn contract_all<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<MultiGraph> {
        let mut g = self.clone();
        for id in ids {
            if self.position(id).is_none() {
                return Err(Error::UnknownEdge(id.clone()));
            }
            if g.position(id).is_some() {
                g = g.contract(id)?.0;
            }
        }
        Ok(g)
    }

    pub fn delete(&self, e: &EdgeId) -> Result<MultiGraph> {
        let pos = self.require(e)?;
        let mut edges = self.edges.clone();
        edges.remove(pos);
        Ok(MultiGraph { n: self.n, edges })
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        uf.count()
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Resolves a subset of ids to positions, failing on foreign ids.
    pub(crate) fn positions_of(&self, s: &EdgeSubset) -> Result<Vec<usize>> {
        s.iter()
            .map(|id| self.position(id).ok_or(Error::NotSubset))
            .collect()
    }
}

/// Total order on edge ids used to break weight ties in greedy algorithms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Smaller id (as a string) wins.
    #[default]
    Lexicographic,
    ReverseLexicographic,
    /// Listed ids first, in list order; the rest lexicographically after them.
    Explicit(Vec<EdgeId>),
}

impl TieBreak {
    /// Rank of every label; lower rank is processed first on equal weight.
    pub fn ranks_of<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Vec<usize> {
        let labels: Vec<&str> = labels.into_iter().collect();
        let mut order: Vec<usize> = (0..labels.len()).collect();
        match self {
            TieBreak::Lexicographic => order.sort_by(|&a, &b| labels[a].cmp(labels[b])),
            TieBreak::ReverseLexicographic => order.sort_by(|&a, &b| labels[b].cmp(labels[a])),
            TieBreak::Explicit(list) => {
                let key = |i: usize| {
                    list.iter()
                        .position(|id| id.as_str() == labels[i])
                        .unwrap_or(usize::MAX)
                };
                order.sort_by(|&a, &b| key(a).cmp(&key(b)).then(labels[a].cmp(labels[b])));
            }
        }
        let mut ranks = vec![0; labels.len()];
        for (r, i) in order.into_iter().enumerate() {
            ranks[i] = r;
        }
        ranks
    }

    pub fn ranks(&self, g: &MultiGraph) -> Vec<usize> {
        self.ranks_of(g.edge_ids().map(EdgeId::as_str))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn k3() -> MultiGraph {
        MultiGraph::new(3, [("e1", 0, 1), ("e2", 1, 2), ("e3", 0, 2)]).unwrap()
    }

    pub fn k4() -> MultiGraph {
        MultiGraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    pub fn parallel(b: usize) -> MultiGraph {
        MultiGraph::from_pairs(2, &vec![(0, 1); b]).unwrap()
    }

    pub fn path(n: usize) -> MultiGraph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph::from_pairs(n, &pairs).unwrap()
    }

    /// Hubs `tl` (0) and `br` (4) each joined to `c` (1), `bl` (2) and `tr` (3).
    pub fn two_hubs() -> MultiGraph {
        MultiGraph::new(
            5,
            [
                ("tl-tr", 0, 3),
                ("tl-bl", 0, 2),
                ("tl-c", 0, 1),
                ("br-tr", 4, 3),
                ("br-bl", 4, 2),
                ("br-c", 4, 1),
            ],
        )
        .unwrap()
    }

    pub fn ids(xs: &[&str]) -> EdgeSubset {
        xs.iter().map(|&s| EdgeId::from(s)).collect()
    }
}
