use super::{EdgeSubset, MultiGraph};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Bond enumeration walks all `2^(n-1)` vertex bipartitions.
pub const MAX_BOND_VERTICES: usize = 20;

/// True iff `s` is a bond: removing it leaves exactly two components and
/// every edge of `s` runs between them.
pub fn is_bond(g: &MultiGraph, s: &EdgeSubset) -> Result<bool> {
    let cut = g.positions_of(s)?;
    g.require_connected()?;
    let mut in_cut = vec![false; g.edge_count()];
    for &p in &cut {
        in_cut[p] = true;
    }
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, _) in g.edges().iter().zip(&in_cut).filter(|(_, &c)| !c) {
        uf.union(e.u, e.v);
    }
    if uf.count() != 2 {
        return Ok(false);
    }
    Ok(cut.iter().all(|&p| {
        let e = &g.edges()[p];
        !uf.same(e.u, e.v)
    }))
}

/// Vertex bipartitions `(S, V \ S)` with vertex 0 in `S` and both sides
/// inducing connected subgraphs, in increasing order of the mask of `S`.
fn bond_sides(g: &MultiGraph) -> Result<Vec<u32>> {
    let n = g.vertex_count();
    if n > MAX_BOND_VERTICES {
        return Err(Error::guard("vertex count for bond search", MAX_BOND_VERTICES, n));
    }
    g.require_connected()?;
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let connected = |mask: u32| -> bool {
        let mut reach = mask & mask.wrapping_neg();
        loop {
            let mut next = reach;
            let mut bits = reach;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= adj[v] & mask;
            }
            if next == reach {
                return reach == mask;
            }
            reach = next;
        }
    };
    let mut sides = Vec::new();
    // Masks with bit 0 set, excluding the full vertex set.
    for rest in 0..(1u32 << (n - 1)) {
        let s = (rest << 1) | 1;
        if s == full {
            continue;
        }
        if connected(s) && connected(full & !s) {
            sides.push(s);
        }
    }
    Ok(sides)
}

fn cut_of(g: &MultiGraph, side: u32) -> EdgeSubset {
    g.edges()
        .iter()
        .filter(|e| ((side >> e.u) & 1) != ((side >> e.v) & 1))
        .map(|e| e.id.clone())
        .collect()
}

/// Every bond of a connected graph, one per bipartition.
pub fn bonds(g: &MultiGraph) -> Result<Vec<EdgeSubset>> {
    Ok(bond_sides(g)?.into_iter().map(|s| cut_of(g, s)).collect())
}

/// Size of a maximum-cardinality bond and one witness.
///
/// When several bonds share the maximum size the first one in bipartition
/// order is returned. A single-vertex graph has no bond; it reports size 0.
pub fn largest_bond(g: &MultiGraph) -> Result<(usize, EdgeSubset)> {
    let mut best: Option<EdgeSubset> = None;
    for side in bond_sides(g)? {
        let cut = cut_of(g, side);
        if best.as_ref().is_none_or(|b| cut.len() > b.len()) {
            best = Some(cut);
        }
    }
    let best = best.unwrap_or_default();
    Ok((best.len(), best))
}
