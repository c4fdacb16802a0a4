use std::collections::VecDeque;

use itertools::Itertools;

use super::{EdgeId, EdgeSubset, MultiGraph, TieBreak};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Spanning tree enumeration is exponential; refuse larger edge sets.
pub const MAX_ENUMERATION_EDGES: usize = 20;

/// An acyclic edge subset of size `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    edges: EdgeSubset,
}

impl SpanningTree {
    /// Certifies that `edges` is a spanning tree of `g`.
    pub fn new(g: &MultiGraph, edges: EdgeSubset) -> Result<Self> {
        let pos = g.positions_of(&edges)?;
        if pos.len() + 1 != g.vertex_count() || !acyclic(g, &pos) {
            return Err(Error::NotSpanningTree);
        }
        Ok(SpanningTree { edges })
    }

    pub(crate) fn from_positions(g: &MultiGraph, pos: &[usize]) -> Self {
        SpanningTree {
            edges: pos.iter().map(|&p| g.edges()[p].id.clone()).collect(),
        }
    }

    pub fn edges(&self) -> &EdgeSubset {
        &self.edges
    }

    pub fn contains(&self, id: &EdgeId) -> bool {
        self.edges.contains(id)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Total weight, `weights` aligned with `g.edges()`.
    pub fn weight(&self, g: &MultiGraph, weights: &[f64]) -> f64 {
        g.edges()
            .iter()
            .zip(weights)
            .filter(|(e, _)| self.edges.contains(&e.id))
            .map(|(_, w)| w)
            .sum()
    }
}

fn acyclic(g: &MultiGraph, pos: &[usize]) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    pos.iter().all(|&p| {
        let e = &g.edges()[p];
        uf.union(e.u, e.v)
    })
}

/// Reusable Kruskal state for running many greedy passes over one graph.
#[derive(Debug, Clone)]
pub struct Kruskal {
    ranks: Vec<usize>,
    order: Vec<usize>,
    uf: UnionFind,
    chosen: Vec<usize>,
}

impl Kruskal {
    pub fn new(g: &MultiGraph, tie: &TieBreak) -> Self {
        Kruskal {
            ranks: tie.ranks(g),
            order: (0..g.edge_count()).collect(),
            uf: UnionFind::new(g.vertex_count()),
            chosen: Vec::with_capacity(g.vertex_count()),
        }
    }

    /// Greedy pass in `(weight, tie rank)` order. Returns the positions of the
    /// chosen edges, or `None` when `g` is disconnected.
    pub fn run(&mut self, g: &MultiGraph, weights: &[f64]) -> Option<&[usize]> {
        let ranks = &self.ranks;
        self.order
            .sort_unstable_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(ranks[a].cmp(&ranks[b])));
        self.uf.reset();
        self.chosen.clear();
        let target = g.vertex_count() - 1;
        for &p in &self.order {
            if self.chosen.len() == target {
                break;
            }
            let e = &g.edges()[p];
            if self.uf.union(e.u, e.v) {
                self.chosen.push(p);
            }
        }
        (self.chosen.len() == target).then_some(&self.chosen[..])
    }
}

/// Minimum spanning tree by Kruskal's algorithm; `weights` is aligned with
/// `g.edges()` and ties are broken by `tie`.
pub fn kruskal_mst(g: &MultiGraph, weights: &[f64], tie: &TieBreak) -> Result<SpanningTree> {
    if weights.len() != g.edge_count() {
        return Err(Error::MissingSample {
            expected: g.edge_count(),
            actual: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::invalid("edge weights must be finite"));
    }
    let mut k = Kruskal::new(g, tie);
    let pos = k.run(g, weights).ok_or(Error::Disconnected)?;
    Ok(SpanningTree::from_positions(g, pos))
}

/// The unique cycle of `t + e`, including `e`.
pub fn fundamental_cycle(g: &MultiGraph, t: &SpanningTree, e: &EdgeId) -> Result<EdgeSubset> {
    let tree = g.positions_of(t.edges())?;
    if tree.len() + 1 != g.vertex_count() || !acyclic(g, &tree) {
        return Err(Error::NotSpanningTree);
    }
    let target = g.require(e)?;
    if t.contains(e) {
        return Err(Error::EdgeInTree(e.clone()));
    }
    let (start, goal) = (g.edges()[target].u, g.edges()[target].v);

    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &p in &tree {
        let edge = &g.edges()[p];
        adj[edge.u].push(p);
        adj[edge.v].push(p);
    }
    let mut via: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == goal {
            break;
        }
        for &p in &adj[x] {
            let y = g.edges()[p].other(x);
            if !seen[y] {
                seen[y] = true;
                via[y] = Some(p);
                queue.push_back(y);
            }
        }
    }
    let mut cycle = EdgeSubset::new();
    cycle.insert(e.clone());
    let mut x = goal;
    while let Some(p) = via[x] {
        cycle.insert(g.edges()[p].id.clone());
        x = g.edges()[p].other(x);
    }
    Ok(cycle)
}

/// All spanning trees, each once, by testing every `(n-1)`-subset of edges.
pub fn enumerate_spanning_trees(g: &MultiGraph) -> Result<Vec<SpanningTree>> {
    if g.edge_count() > MAX_ENUMERATION_EDGES {
        return Err(Error::guard(
            "edge count for spanning tree enumeration",
            MAX_ENUMERATION_EDGES,
            g.edge_count(),
        ));
    }
    Ok((0..g.edge_count())
        .combinations(g.vertex_count() - 1)
        .filter(|c| acyclic(g, c))
        .map(|c| SpanningTree::from_positions(g, &c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Kirchhoff: number of spanning trees = any cofactor of the Laplacian.
    fn matrix_tree_count(g: &MultiGraph) -> f64 {
        let n = g.vertex_count();
        if n == 1 {
            return 1.0;
        }
        let mut lap = vec![vec![0.0f64; n]; n];
        for e in g.edges() {
            lap[e.u][e.u] += 1.0;
            lap[e.v][e.v] += 1.0;
            lap[e.u][e.v] -= 1.0;
            lap[e.v][e.u] -= 1.0;
        }
        let mut a: Vec<Vec<f64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
        let k = n - 1;
        let mut det = 1.0;
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[pivot][col].abs() < 1e-12 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..k {
                let f = a[r][col] / a[col][col];
                for c in col..k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        det
    }

    #[test]
    fn kruskal_unique_and_tied() {
        let g = k3();
        let t = kruskal_mst(&g, &[1.0, 2.0, 3.0], &TieBreak::default()).unwrap();
        assert_eq!(t.edges(), &ids(&["e1", "e2"]));
        let t = kruskal_mst(&g, &[1.0, 1.0, 1.0], &TieBreak::default()).unwrap();
        assert_eq!(t.edges(), &ids(&["e1", "e2"]));
        let t = kruskal_mst(&g, &[1.0, 1.0, 1.0], &TieBreak::ReverseLexicographic).unwrap();
        assert_eq!(t.edges(), &ids(&["e2", "e3"]));
    }

    #[test]
    fn kruskal_errors() {
        let two = MultiGraph::new(2, Vec::<(EdgeId, usize, usize)>::new()).unwrap();
        assert_eq!(
            kruskal_mst(&two, &[], &TieBreak::default()).unwrap_err(),
            Error::Disconnected
        );
        assert!(kruskal_mst(&k3(), &[1.0, f64::NAN, 1.0], &TieBreak::default()).is_err());
        assert!(kruskal_mst(&k3(), &[1.0], &TieBreak::default()).is_err());
    }

    #[test]
    fn kruskal_matches_exhaustive_minimum_on_two_hubs() {
        let g = two_hubs();
        let trees = enumerate_spanning_trees(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let w: Vec<f64> = (0..g.edge_count()).map(|_| rng.random::<f64>()).collect();
            let t = kruskal_mst(&g, &w, &TieBreak::default()).unwrap();
            let best = trees
                .iter()
                .map(|t| t.weight(&g, &w))
                .fold(f64::INFINITY, f64::min);
            assert!((t.weight(&g, &w) - best).abs() < 1e-12);
        }
    }

    #[test]
    fn single_vertex_tree_is_empty() {
        let g = MultiGraph::new(1, Vec::<(EdgeId, usize, usize)>::new()).unwrap();
        let t = kruskal_mst(&g, &[], &TieBreak::default()).unwrap();
        assert!(t.is_empty());
        assert_eq!(enumerate_spanning_trees(&g).unwrap().len(), 1);
    }

    #[test]
    fn fundamental_cycles() {
        let g = k3();
        let t = SpanningTree::new(&g, ids(&["e1", "e2"])).unwrap();
        assert_eq!(
            fundamental_cycle(&g, &t, &"e3".into()).unwrap(),
            ids(&["e1", "e2", "e3"])
        );
        assert_eq!(
            fundamental_cycle(&g, &t, &"e1".into()).unwrap_err(),
            Error::EdgeInTree("e1".into())
        );

        let par = MultiGraph::new(2, [("a", 0, 1), ("b", 0, 1)]).unwrap();
        let t = SpanningTree::new(&par, ids(&["a"])).unwrap();
        assert_eq!(fundamental_cycle(&par, &t, &"b".into()).unwrap(), ids(&["a", "b"]));

        // Square 0-1-2-3 with diagonal 0-2; tree is the path 0-1-2-3.
        let sq = MultiGraph::new(
            4,
            [("s01", 0, 1), ("s12", 1, 2), ("s23", 2, 3), ("s30", 3, 0), ("d02", 0, 2)],
        )
        .unwrap();
        let t = SpanningTree::new(&sq, ids(&["s01", "s12", "s23"])).unwrap();
        assert_eq!(
            fundamental_cycle(&sq, &t, &"d02".into()).unwrap(),
            ids(&["d02", "s01", "s12"])
        );
        assert_eq!(
            fundamental_cycle(&sq, &t, &"s30".into()).unwrap().len(),
            4
        );
    }

    #[test]
    fn spanning_tree_certification() {
        let g = k3();
        assert!(SpanningTree::new(&g, ids(&["e1"])).is_err());
        assert!(SpanningTree::new(&g, ids(&["e1", "zz"])).is_err());
        let par = MultiGraph::new(3, [("a", 0, 1), ("b", 0, 1), ("c", 1, 2)]).unwrap();
        assert!(SpanningTree::new(&par, ids(&["a", "b"])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_spanning_trees(&k3()).unwrap().len(), 3);
        for b in 1..5 {
            assert_eq!(enumerate_spanning_trees(&parallel(b)).unwrap().len(), b);
        }
        assert_eq!(enumerate_spanning_trees(&path(5)).unwrap().len(), 1);
        for g in [k3(), k4(), two_hubs(), parallel(4), path(4)] {
            let count = enumerate_spanning_trees(&g).unwrap().len() as f64;
            assert!((count - matrix_tree_count(&g)).abs() < 1e-6, "{g:?}");
        }
        assert_eq!(enumerate_spanning_trees(&k4()).unwrap().len(), 16);
    }

    #[test]
    fn enumeration_size_guard() {
        let g = parallel(MAX_ENUMERATION_EDGES + 1);
        assert!(matches!(
            enumerate_spanning_trees(&g),
            Err(Error::SizeGuard { .. })
        ));
    }
}
