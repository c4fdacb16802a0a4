use serde::Serialize;

use super::recursion::{ContractionRecursion, MAX_RECURSION_ITEMS};
use super::{Instance, McEstimate};
use crate::error::{Error, Result};
use crate::graph::{kruskal_mst, EdgeId, SpanningTree, TieBreak};
use crate::union_find::UnionFind;

/// Default refusal threshold for the exact recursion.
pub const DEFAULT_EXACT_EDGE_LIMIT: usize = 12;

/// The non-adaptive optimum: a minimum spanning tree on expected weights and
/// its expected cost.
pub fn opt_tree(inst: &Instance, tie: &TieBreak) -> Result<(SpanningTree, f64)> {
    let g = inst.graph();
    g.require_connected()?;
    let means = inst.means();
    let t = kruskal_mst(g, &means, tie)?;
    let cost = t.weight(g, &means);
    Ok((t, cost))
}

/// SAM's tree: a minimum spanning tree on one sample per edge.
pub fn sam_tree(inst: &Instance, samples: &[f64], tie: &TieBreak) -> Result<SpanningTree> {
    let g = inst.graph();
    if samples.len() != g.edge_count() {
        return Err(Error::MissingSample {
            expected: g.edge_count(),
            actual: samples.len(),
        });
    }
    kruskal_mst(g, samples, tie)
}

/// Probability that `e` carries the smallest sample, `λ_e / Σ λ`.
pub fn first_choice_prob(inst: &Instance, e: &EdgeId) -> Result<f64> {
    let rates = inst.rates()?;
    let p = inst.graph().require(e)?;
    Ok(rates[p] / rates.iter().sum::<f64>())
}

/// Exact `E[w(T^SAM)]` under exponential weights, refusing instances with
/// more than [`DEFAULT_EXACT_EDGE_LIMIT`] edges.
pub fn exact_expected_sam(inst: &Instance) -> Result<f64> {
    exact_expected_sam_with_limit(inst, DEFAULT_EXACT_EDGE_LIMIT)
}

/// Exact expected SAM cost with an explicit edge limit.
///
/// Memoized over contraction minors keyed by the set of contracted edges;
/// the reachable keys are the forests of the graph.
pub fn exact_expected_sam_with_limit(inst: &Instance, edge_limit: usize) -> Result<f64> {
    let g = inst.graph();
    let rates = inst.rates()?;
    let limit = edge_limit.min(MAX_RECURSION_ITEMS);
    if g.edge_count() > limit {
        return Err(Error::guard("edge count for exact recursion", limit, g.edge_count()));
    }
    g.require_connected()?;
    if g.edge_count() + 1 == g.vertex_count() {
        // The only spanning tree; summed like `opt_tree` so alpha is exactly 1.
        return Ok(rates.iter().map(|r| 1.0 / r).sum());
    }
    let mut uf = UnionFind::new(g.vertex_count());
    let edges = g.edges();
    let live = |contracted: u64| {
        uf.reset();
        for (i, e) in edges.iter().enumerate() {
            if contracted & (1 << i) != 0 {
                uf.union(e.u, e.v);
            }
        }
        let mut mask = 0u64;
        for (i, e) in edges.iter().enumerate() {
            if !uf.same(e.u, e.v) {
                mask |= 1 << i;
            }
        }
        mask
    };
    Ok(ContractionRecursion::new(&rates, live).value(0))
}

/// Which `E[SAM]` evaluation to divide by `E[OPT]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    Exact { edge_limit: usize },
    MonteCarlo { samples: u64, seed: u64 },
}

impl AlphaMode {
    pub fn exact() -> Self {
        AlphaMode::Exact {
            edge_limit: DEFAULT_EXACT_EDGE_LIMIT,
        }
    }
}

/// `E[SAM] / E[OPT]`. A single-vertex graph costs nothing either way and
/// reports 1.
pub fn alpha(inst: &Instance, mode: AlphaMode) -> Result<f64> {
    let (_, e_opt) = opt_tree(inst, &TieBreak::default())?;
    let e_sam = match mode {
        AlphaMode::Exact { edge_limit } => exact_expected_sam_with_limit(inst, edge_limit)?,
        AlphaMode::MonteCarlo { samples, seed } => {
            let McEstimate { estimate, .. } =
                super::mc_expected_sam(inst, samples, seed, &TieBreak::default())?;
            estimate
        }
    };
    Ok(ratio(e_sam, e_opt))
}

pub(crate) fn ratio(e_sam: f64, e_opt: f64) -> f64 {
    if e_opt == 0.0 && e_sam == 0.0 {
        1.0
    } else {
        e_sam / e_opt
    }
}

/// Closed form for picking one of `m` items from a single sample each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ItemSelection {
    pub expected_sam: f64,
    pub expected_opt: f64,
    pub alpha: f64,
}

/// `E[SAM] = m / Σλ`, `E[OPT] = 1 / max λ`.
pub fn item_selection_expected_sam(rates: &[f64]) -> Result<ItemSelection> {
    if rates.is_empty() {
        return Err(Error::EmptyRates);
    }
    if rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::invalid("rates must be positive and finite"));
    }
    let expected_sam = rates.len() as f64 / rates.iter().sum::<f64>();
    let expected_opt = 1.0 / rates.iter().copied().fold(f64::MIN, f64::max);
    Ok(ItemSelection {
        expected_sam,
        expected_opt,
        alpha: expected_sam / expected_opt,
    })
}
