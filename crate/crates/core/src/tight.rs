//! Rate vectors that push SAM's ratio toward the largest bond size.
//!
//! Off-bond edges get rates in strictly decreasing powers of one scale `M`,
//! all dominating the bond. As `M` grows SAM contracts them first with
//! probability approaching one, leaving a two-vertex multigraph whose parallel
//! edges are exactly the bond, where one bond edge has rate `M` and the rest
//! rate 1. That item-selection instance has ratio `b·M/(M+b−1)`.

use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{largest_bond, EdgeId, EdgeSubset, MultiGraph};
use crate::stochastic::{alpha, AlphaMode, Instance, DEFAULT_EXACT_EDGE_LIMIT};

#[derive(Debug, Clone, PartialEq)]
pub struct TightConstruction {
    pub bond_witness: EdgeSubset,
    /// Spanning forest of the two bond sides, breadth-first from the lowest
    /// vertex of each side.
    pub contraction_order: Vec<EdgeId>,
    pub scale: f64,
    /// Aligned with `g.edges()`.
    pub rates: Vec<f64>,
}

impl TightConstruction {
    pub fn instance(&self, g: &MultiGraph) -> Result<Instance> {
        Instance::exponential(g.clone(), &self.rates)
    }
}

/// Off-bond edges split into a breadth-first spanning forest of `G − B` and
/// the remaining chords, both in deterministic order.
fn forest_and_chords(g: &MultiGraph, bond: &EdgeSubset) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (p, e) in g.edges().iter().enumerate() {
        if !bond.contains(&e.id) {
            adj[e.u].push(p);
            adj[e.v].push(p);
        }
    }
    let mut seen = vec![false; n];
    let mut in_forest = vec![false; g.edge_count()];
    let mut forest = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &p in &adj[x] {
                let y = g.edges()[p].other(x);
                if !seen[y] {
                    seen[y] = true;
                    in_forest[p] = true;
                    forest.push(p);
                    queue.push_back(y);
                }
            }
        }
    }
    let chords = (0..g.edge_count())
        .filter(|&p| !in_forest[p] && !bond.contains(&g.edges()[p].id))
        .collect();
    (forest, chords)
}

/// Tiered rates for scale `m_scale > 1`.
///
/// With `f_1, …, f_k` the off-bond edges (forest first, then chords),
/// `λ(f_i) = M^(k−i+2)`; the first bond edge by id gets `M`, every other bond
/// edge gets 1.
pub fn tight_rate_vector(g: &MultiGraph, m_scale: f64) -> Result<TightConstruction> {
    if !(m_scale.is_finite() && m_scale > 1.0) {
        return Err(Error::invalid(format!("scale must be finite and > 1, got {m_scale}")));
    }
    let (_, bond) = largest_bond(g)?;
    let (forest, chords) = forest_and_chords(g, &bond);
    let k = forest.len() + chords.len();
    let mut rates = vec![1.0; g.edge_count()];
    for (i, &p) in forest.iter().chain(&chords).enumerate() {
        rates[p] = m_scale.powi((k - i + 1) as i32);
    }
    if let Some(lead) = bond.iter().next() {
        rates[g.position(lead).expect("bond edge")] = m_scale;
    }
    Ok(TightConstruction {
        contraction_order: forest.iter().map(|&p| g.edges()[p].id.clone()).collect(),
        bond_witness: bond,
        scale: m_scale,
        rates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub scale: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub b: usize,
    pub bond_witness: EdgeSubset,
    /// Sorted by scale.
    pub rows: Vec<SweepRow>,
}

pub fn sweep(g: &MultiGraph, m_list: &[f64]) -> Result<Sweep> {
    sweep_with_limit(g, m_list, DEFAULT_EXACT_EDGE_LIMIT)
}

/// Exact ratio of the tight construction at every scale in `m_list`.
pub fn sweep_with_limit(g: &MultiGraph, m_list: &[f64], edge_limit: usize) -> Result<Sweep> {
    if m_list.is_empty() {
        return Err(Error::invalid("empty scale list"));
    }
    if g.edge_count() > edge_limit {
        return Err(Error::guard("edge count for exact recursion", edge_limit, g.edge_count()));
    }
    let (b, bond_witness) = largest_bond(g)?;
    let mut rows = m_list
        .par_iter()
        .map(|&m| {
            let c = tight_rate_vector(g, m)?;
            let a = alpha(&c.instance(g)?, AlphaMode::Exact { edge_limit })?;
            Ok(SweepRow { scale: m, alpha: a })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.scale.total_cmp(&b.scale));
    Ok(Sweep {
        b,
        bond_witness,
        rows,
    })
}

/// Renders `x` like C's `%.{sig}g`.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

/// Writes `M,alpha,b,graph` rows with 12 significant digits.
pub fn write_sweep_csv<W: Write>(out: W, sweep: &Sweep, graph_name: &str) -> Result<()> {
    let io = |e: csv::Error| Error::invalid(format!("csv write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["M", "alpha", "b", "graph"]).map_err(io)?;
    for row in &sweep.rows {
        w.write_record([
            format_significant(row.scale, 12),
            format_significant(row.alpha, 12),
            sweep.b.to_string(),
            graph_name.to_owned(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::invalid(format!("csv write failed: {e}")))?;
    Ok(())
}
