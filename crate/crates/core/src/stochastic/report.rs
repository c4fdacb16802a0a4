use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    exchange_inequality_with_bond, exact_expected_sam_with_limit, mc_expected_sam, opt_tree,
    sam::ratio, Instance, McEstimate, DEFAULT_EXACT_EDGE_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::{largest_bond, TieBreak};

/// Absolute slack for the exact bound checks.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Agreement threshold between exact and Monte Carlo values, in standard errors.
pub const MC_AGREEMENT_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub pass: bool,
    pub residual: f64,
}

impl LemmaCheck {
    /// Passes when `residual <= 0`.
    pub fn non_positive(residual: f64) -> Self {
        LemmaCheck {
            pass: residual <= 0.0,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub b: usize,
    pub e_opt: f64,
    pub e_sam_exact: Option<f64>,
    pub e_sam_mc: Option<McEstimate>,
    pub alpha: f64,
    pub lemma_checks: BTreeMap<String, LemmaCheck>,
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub exact: bool,
    pub mc_samples: Option<u64>,
    pub seed: u64,
    pub exact_edge_limit: usize,
    pub tie: TieBreak,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            exact: true,
            mc_samples: None,
            seed: 0,
            exact_edge_limit: DEFAULT_EXACT_EDGE_LIMIT,
            tie: TieBreak::default(),
        }
    }
}

/// Assembles the per-instance quantities and bound checks.
///
/// `alpha` uses the exact expectation when it was computed and the Monte
/// Carlo estimate otherwise. The bond and exchange checks only apply to
/// exponential instances; for discrete instances they are omitted.
pub fn analyze(inst: &Instance, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    if !opts.exact && opts.mc_samples.is_none() {
        return Err(Error::invalid("nothing to evaluate: request exact and/or Monte Carlo"));
    }
    let g = inst.graph();
    g.require_connected()?;
    let (b, _) = largest_bond(g)?;
    let (_, e_opt) = opt_tree(inst, &opts.tie)?;
    let e_sam_exact = if opts.exact {
        Some(exact_expected_sam_with_limit(inst, opts.exact_edge_limit)?)
    } else {
        None
    };
    let e_sam_mc = opts
        .mc_samples
        .map(|n| mc_expected_sam(inst, n, opts.seed, &opts.tie))
        .transpose()?;
    let e_sam = e_sam_exact.or(e_sam_mc.map(|m| m.estimate)).expect("one estimate");
    let alpha = ratio(e_sam, e_opt);

    let mut lemma_checks = BTreeMap::new();
    if inst.is_exponential() {
        lemma_checks.insert(
            "bond_upper_bound".to_owned(),
            LemmaCheck::non_positive(alpha - b.max(1) as f64 - BOUND_TOLERANCE),
        );
        lemma_checks.insert(
            "exchange_inequality".to_owned(),
            LemmaCheck::non_positive(exchange_inequality_with_bond(inst, b, &opts.tie)? - BOUND_TOLERANCE),
        );
    }
    if let (Some(exact), Some(mc)) = (e_sam_exact, e_sam_mc) {
        let z = if mc.stderr > 0.0 {
            (exact - mc.estimate).abs() / mc.stderr
        } else if exact == mc.estimate {
            0.0
        } else {
            f64::MAX
        };
        lemma_checks.insert(
            "exact_vs_monte_carlo".to_owned(),
            LemmaCheck::non_positive(z - MC_AGREEMENT_SIGMAS),
        );
    }
    Ok(AnalysisReport {
        b,
        e_opt,
        e_sam_exact,
        e_sam_mc,
        alpha,
        lemma_checks,
    })
}
