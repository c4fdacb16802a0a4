//! Small graph families for exhaustive checks.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::union_find::UnionFind;

/// Vertex permutations are enumerated for canonical forms; beyond this the
/// factorial blows up.
pub const MAX_FAMILY_VERTICES: usize = 7;

type Pairs = Vec<(VertexId, VertexId)>;

fn canonical(n: usize, pairs: &[(VertexId, VertexId)]) -> Pairs {
    let mut best: Option<Pairs> = None;
    for perm in (0..n).permutations(n) {
        let mut relabeled: Pairs = pairs
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    }
    best.unwrap_or_default()
}

fn connected(n: usize, pairs: &[(VertexId, VertexId)]) -> bool {
    let mut uf = UnionFind::new(n);
    for &(u, v) in pairs {
        uf.union(u, v);
    }
    uf.count() == 1
}

fn enumerate(max_vertices: usize, max_edges: usize, simple: bool) -> Result<Vec<MultiGraph>> {
    if max_vertices > MAX_FAMILY_VERTICES {
        return Err(Error::guard("family vertex count", MAX_FAMILY_VERTICES, max_vertices));
    }
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let slots: Pairs = (0..n).tuple_combinations().collect();
        let mut seen = BTreeSet::new();
        for m in n - 1..=max_edges {
            if simple && m > slots.len() {
                break;
            }
            let choices: Box<dyn Iterator<Item = Vec<&(VertexId, VertexId)>>> = if simple {
                Box::new(slots.iter().combinations(m))
            } else {
                Box::new(slots.iter().combinations_with_replacement(m))
            };
            for choice in choices {
                let pairs: Pairs = choice.into_iter().copied().collect();
                if connected(n, &pairs) {
                    seen.insert((m, canonical(n, &pairs)));
                }
            }
        }
        for (_, pairs) in seen {
            out.push(MultiGraph::from_pairs(n, &pairs)?);
        }
    }
    Ok(out)
}

/// One representative per isomorphism class of connected loopless
/// multigraphs with at most the given numbers of vertices and edges, ordered
/// by vertex count, then edge count, then canonical edge list. Edges are
/// named `e0`, `e1`, ... in canonical order.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize) -> Result<Vec<MultiGraph>> {
    enumerate(max_vertices, max_edges, false)
}

/// As [`connected_multigraphs`] without parallel edges.
pub fn connected_simple_graphs(max_vertices: usize, max_edges: usize) -> Result<Vec<MultiGraph>> {
    enumerate(max_vertices, max_edges, true)
}

/// `K_n`.
pub fn complete_graph(n: usize) -> Result<MultiGraph> {
    let pairs: Pairs = (0..n).tuple_combinations().collect();
    MultiGraph::from_pairs(n, &pairs)
}

/// Two vertices joined by `m` parallel edges.
pub fn parallel_edges(m: usize) -> Result<MultiGraph> {
    MultiGraph::from_pairs(2, &vec![(0, 1); m])
}
