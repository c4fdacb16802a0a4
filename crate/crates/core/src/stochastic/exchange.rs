use super::{opt_tree, Instance};
use crate::error::Result;
use crate::graph::{fundamental_cycle, largest_bond, EdgeId, TieBreak};

/// The exchange edge `e*` for some edge `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeEdge {
    pub edge: EdgeId,
    /// Set when `e` is outside `T^OPT` but does not have a strictly larger
    /// mean than every other edge of its fundamental cycle.
    pub tied_with_e: bool,
}

/// `e*` for every edge, in edge order, relative to the `T^OPT` that `tie`
/// selects.
///
/// Edges of `T^OPT` map to themselves. Any other edge maps to the
/// largest-mean edge of its fundamental cycle, excluding itself, with mean
/// ties resolved by `tie`.
pub fn exchange_edges(inst: &Instance, tie: &TieBreak) -> Result<Vec<ExchangeEdge>> {
    let g = inst.graph();
    let (t_opt, _) = opt_tree(inst, tie)?;
    let means = inst.means();
    let ranks = tie.ranks(g);
    g.edges()
        .iter()
        .enumerate()
        .map(|(p, e)| {
            if t_opt.contains(&e.id) {
                return Ok(ExchangeEdge {
                    edge: e.id.clone(),
                    tied_with_e: false,
                });
            }
            let cycle = fundamental_cycle(g, &t_opt, &e.id)?;
            let best = cycle
                .iter()
                .filter(|id| **id != e.id)
                .map(|id| g.position(id).expect("cycle edge"))
                .min_by(|&a, &b| means[b].total_cmp(&means[a]).then(ranks[a].cmp(&ranks[b])))
                .expect("a non-tree edge closes a cycle of length >= 2");
            Ok(ExchangeEdge {
                edge: g.edges()[best].id.clone(),
                tied_with_e: means[p] <= means[best],
            })
        })
        .collect()
}

/// `e*` for a single edge.
pub fn e_star(inst: &Instance, e: &EdgeId, tie: &TieBreak) -> Result<ExchangeEdge> {
    let p = inst.graph().require(e)?;
    Ok(exchange_edges(inst, tie)?.swap_remove(p))
}

/// `Σ_e (1/b − λ_e/λ_{e*})` with `b` the largest bond size; never positive.
pub fn exchange_inequality(inst: &Instance, tie: &TieBreak) -> Result<f64> {
    let (b, _) = largest_bond(inst.graph())?;
    exchange_inequality_with_bond(inst, b, tie)
}

/// As [`exchange_inequality`] with a precomputed largest bond size.
pub fn exchange_inequality_with_bond(inst: &Instance, b: usize, tie: &TieBreak) -> Result<f64> {
    let rates = inst.rates()?;
    let g = inst.graph();
    let stars = exchange_edges(inst, tie)?;
    if b == 0 {
        return Ok(0.0);
    }
    Ok(stars
        .iter()
        .zip(&rates)
        .map(|(s, r)| 1.0 / b as f64 - r / rates[g.position(&s.edge).expect("edge")])
        .sum())
}
