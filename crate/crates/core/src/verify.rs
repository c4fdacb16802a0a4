//! Verification suites: exhaustive checks over small graph and matroid
//! families plus randomized rate vectors, each reported as per-check pass
//! counts with the worst residual. A check passes when its residual is `<= 0`.
//! The first failure is kept as a replayable instance file.

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::families::connected_multigraphs;
use crate::graph::{
    enumerate_spanning_trees, fundamental_cycle, is_bond, kruskal_mst, largest_bond, bonds, MultiGraph,
    SpanningTree, TieBreak,
};
use crate::io::{instance_to_json, matroid_instance_to_json, MatroidSource};
use crate::matroid::{alpha_matroid, exact_expected_sam_matroid, ElementSet, MatroidInstance};
use crate::stochastic::recursion::bits;
use crate::stochastic::{
    argmin_frequencies, conditional_expected_sam_mc, exact_expected_sam, exchange_edges,
    exchange_inequality_with_bond, first_choice_prob, log_uniform, mc_expected_sam, opt_tree, task_rng,
    Instance, WeightDistribution, BOUND_TOLERANCE, MC_AGREEMENT_SIGMAS,
};

/// Relative slack for identities between two exact computations.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Graphs,
    Stochastic,
    Matroids,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Graphs, Suite::Stochastic, Suite::Matroids];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Graphs => "graphs",
            Suite::Stochastic => "stochastic",
            Suite::Matroids => "matroids",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Random weight or rate vectors per graph or matroid; `None` uses the
    /// suite default.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Accepted rejection samples per edge for the conditional identity.
    pub conditional_samples: u64,
    /// Draws per instance for the Monte Carlo agreement checks.
    pub mc_samples: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_vertices: 5,
            max_edges: 6,
            trials: None,
            seed: 0,
            conditional_samples: 100_000,
            mc_samples: 1 << 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub checked: u64,
    pub passed: u64,
    pub worst_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub detail: String,
    /// Contents of an instance file that reproduces the failure.
    #[serde(skip)]
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckTally>,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed == c.checked)
    }

    pub fn check(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Default)]
struct Tally {
    checks: Vec<CheckTally>,
    counterexample: Option<Counterexample>,
}

impl Tally {
    fn entry(&mut self, name: &str) -> &mut CheckTally {
        let i = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckTally {
                    name: name.to_owned(),
                    checked: 0,
                    passed: 0,
                    worst_residual: None,
                });
                self.checks.len() - 1
            }
        };
        &mut self.checks[i]
    }

    fn record(&mut self, name: &str, residual: f64, witness: impl FnOnce() -> (String, String)) {
        let entry = self.entry(name);
        entry.checked += 1;
        let pass = residual <= 0.0;
        if pass {
            entry.passed += 1;
        }
        entry.worst_residual = Some(match entry.worst_residual {
            Some(w) if !(residual > w || residual.is_nan()) => w,
            _ => residual,
        });
        if !pass && self.counterexample.is_none() {
            let (detail, file) = witness();
            self.counterexample = Some(Counterexample {
                check: name.to_owned(),
                detail: format!("{detail}; residual {residual:e}"),
                file,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for c in other.checks {
            let entry = self.entry(&c.name);
            entry.checked += c.checked;
            entry.passed += c.passed;
            entry.worst_residual = match (entry.worst_residual, c.worst_residual) {
                (Some(a), Some(b)) => Some(if b > a || b.is_nan() { b } else { a }),
                (a, b) => a.or(b),
            };
        }
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self
    }

    fn into_report(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            checks: self.checks,
            counterexample: self.counterexample,
        }
    }
}

fn merge_all(suite: Suite, parts: Vec<Tally>) -> SuiteReport {
    parts.into_iter().fold(Tally::default(), Tally::merge).into_report(suite)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() - IDENTITY_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// An instance whose weights are the given constants, so weight-level
/// counterexamples replay through the same file format.
fn constant_instance(g: &MultiGraph, weights: &[f64], name: &str) -> String {
    let dists = weights.iter().map(|&w| WeightDistribution::constant(w).expect("finite")).collect();
    instance_to_json(&Instance::new(g.clone(), dists).expect("valid").with_name(name))
}

fn unit_instance(g: &MultiGraph, name: &str) -> String {
    constant_instance(g, &vec![1.0; g.edge_count()], name)
}

fn exponential_file(inst: &Instance, name: &str) -> String {
    instance_to_json(&inst.clone().with_name(name))
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Graphs => graph_suite(opts),
        Suite::Stochastic => stochastic_suite(opts),
        Suite::Matroids => matroid_suite(opts),
    }
}

pub fn graph_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let family = connected_multigraphs(opts.max_vertices, opts.max_edges)?;
    let trials = opts.trials.unwrap_or(20);
    let parts = family
        .par_iter()
        .enumerate()
        .map(|(i, g)| graph_checks(g, trials, opts.seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(Suite::Graphs, parts))
}

fn graph_checks(g: &MultiGraph, trials: usize, seed: u64, index: u64) -> Result<Tally> {
    let mut t = Tally::default();
    let n = g.vertex_count();
    let m = g.edge_count();
    let (b, witness) = largest_bond(g)?;

    if b > 0 {
        t.record("bond_witness_is_bond", flag(is_bond(g, &witness)?), || {
            (format!("witness {witness:?}"), unit_instance(g, "bond witness"))
        });
    }
    let mut some_keeps = false;
    for e in g.edge_ids() {
        let (h, _) = g.contract(e)?;
        let bh = largest_bond(&h)?.0;
        some_keeps |= bh == b;
        t.record("contraction_never_grows_bond", bh as f64 - b as f64, || {
            (format!("contracting {e}: {bh} > {b}"), unit_instance(g, "contraction grows bond"))
        });
        if n > 2 && !witness.contains(e) {
            t.record("contraction_outside_witness_keeps_bond", (b as f64 - bh as f64).abs(), || {
                (format!("contracting {e}: {bh} != {b}"), unit_instance(g, "contraction outside witness"))
            });
        }
    }
    if n > 2 {
        t.record("some_contraction_keeps_bond", flag(some_keeps), || {
            ("every contraction shrinks the largest bond".into(), unit_instance(g, "no bond-preserving edge"))
        });
    }
    t.record("edges_at_most_bond_times_tree", m as f64 - (b * (n - 1)) as f64, || {
        (format!("{m} edges, b = {b}, n = {n}"), unit_instance(g, "edge bound"))
    });

    let trees = enumerate_spanning_trees(g)?;
    let mut rng = task_rng(seed, index);
    for _ in 0..trials {
        // Small integer weights make tied minimum trees common.
        let w: Vec<f64> = (0..m).map(|_| rng.random_range(1..=3) as f64).collect();
        let k = kruskal_mst(g, &w, &TieBreak::default())?.weight(g, &w);
        let best = trees.iter().map(|t| t.weight(g, &w)).fold(f64::INFINITY, f64::min);
        t.record("kruskal_matches_enumeration", (k - best).abs(), || {
            (format!("kruskal {k}, minimum {best}"), constant_instance(g, &w, "kruskal"))
        });
        let msts: Vec<&SpanningTree> = trees.iter().filter(|t| t.weight(g, &w) == best).collect();
        for (t1, t2) in msts.iter().tuple_combinations() {
            for e in g.edge_ids().filter(|e| !t1.contains(e) && !t2.contains(e)) {
                let path_max = |tree: &SpanningTree| -> Result<f64> {
                    Ok(fundamental_cycle(g, tree, e)?
                        .iter()
                        .filter(|f| *f != e)
                        .map(|f| w[g.position(f).expect("edge")])
                        .fold(f64::NEG_INFINITY, f64::max))
                };
                let (f1, f2) = (path_max(t1)?, path_max(t2)?);
                t.record("tied_msts_agree_on_cycle_maximum", (f1 - f2).abs(), || {
                    (format!("edge {e}: {f1} vs {f2}"), constant_instance(g, &w, "tied msts"))
                });
            }
        }
    }
    Ok(t)
}

pub fn stochastic_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let family = connected_multigraphs(opts.max_vertices, opts.max_edges)?;
    let trials = opts.trials.unwrap_or(1000);
    let parts = family
        .par_iter()
        .enumerate()
        .map(|(i, g)| stochastic_checks(g, trials, opts, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(Suite::Stochastic, parts))
}

/// Number of rate vectors per graph for the checks that contract every edge.
const CONTRACTION_TRIALS: usize = 200;
const TIE_TRIALS: usize = 50;
/// Largest graphs on which every edge gets the rejection-sampling check.
const CONDITIONAL_MAX_EDGES: usize = 5;

fn stochastic_checks(g: &MultiGraph, trials: usize, opts: &VerifyOptions, index: u64) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = task_rng(opts.seed, index);
    let m = g.edge_count();
    let (b, _) = largest_bond(g)?;
    let tie = TieBreak::default();

    for trial in 0..trials {
        let rates: Vec<f64> = (0..m).map(|_| log_uniform(&mut rng, 1e-2, 1e2)).collect();
        let inst = Instance::exponential(g.clone(), &rates)?;
        let e_sam = exact_expected_sam(&inst)?;
        let (_, e_opt) = opt_tree(&inst, &tie)?;
        let alpha = if e_opt == 0.0 { 1.0 } else { e_sam / e_opt };
        t.record("bond_upper_bound", alpha - b.max(1) as f64 - BOUND_TOLERANCE, || {
            (format!("alpha {alpha} > b = {b}"), exponential_file(&inst, "bond upper bound"))
        });
        t.record("alpha_at_least_one", 1.0 - alpha - IDENTITY_TOLERANCE, || {
            (format!("alpha {alpha} < 1"), exponential_file(&inst, "alpha below one"))
        });
        let ex = exchange_inequality_with_bond(&inst, b, &tie)?;
        t.record("exchange_inequality", ex - BOUND_TOLERANCE, || {
            (format!("sum {ex} > 0"), exponential_file(&inst, "exchange inequality"))
        });
        if m > 0 {
            let total: f64 = g.edge_ids().map(|e| first_choice_prob(&inst, e)).sum::<Result<f64>>()?;
            t.record("first_choice_probabilities_sum_to_one", relative_gap(total, 1.0), || {
                (format!("sum {total}"), exponential_file(&inst, "first choice"))
            });
        }
        if g.vertex_count() == 2 {
            let closed = m as f64 / rates.iter().sum::<f64>();
            t.record("item_selection_closed_form", relative_gap(e_sam, closed), || {
                (format!("exact {e_sam}, closed form {closed}"), exponential_file(&inst, "item selection"))
            });
        }
        if trial < CONTRACTION_TRIALS {
            let stars = exchange_edges(&inst, &tie)?;
            for (e, star) in g.edge_ids().zip(&stars) {
                let lam = rates[g.position(&star.edge).expect("edge")];
                let (_, minor_opt) = opt_tree(&inst.contract(e)?, &tie)?;
                let gap = (e_opt - 1.0 / lam - minor_opt).abs() - BOUND_TOLERANCE;
                t.record("opt_contraction_identity", gap, || {
                    (format!("edge {e}, e* {}", star.edge), exponential_file(&inst, "opt contraction"))
                });
            }
        }
    }

    // Rates from {1, 2} give tied expected-weight trees; the exchange edge
    // may differ between tie orders but its mean may not.
    for _ in 0..trials.min(TIE_TRIALS) {
        let rates: Vec<f64> = (0..m).map(|_| rng.random_range(1..=2) as f64).collect();
        let inst = Instance::exponential(g.clone(), &rates)?;
        let means = inst.means();
        let fwd = exchange_edges(&inst, &TieBreak::Lexicographic)?;
        let rev = exchange_edges(&inst, &TieBreak::ReverseLexicographic)?;
        for ((e, a), r) in g.edge_ids().zip(&fwd).zip(&rev) {
            let ma = means[g.position(&a.edge).expect("edge")];
            let mr = means[g.position(&r.edge).expect("edge")];
            t.record("exchange_mean_tie_invariance", (ma - mr).abs(), || {
                (format!("edge {e}: {} vs {}", a.edge, r.edge), exponential_file(&inst, "tie invariance"))
            });
        }
    }

    if m > 0 {
        let rates: Vec<f64> = (0..m).map(|_| log_uniform(&mut rng, 1e-2, 1e2)).collect();
        let inst = Instance::exponential(g.clone(), &rates)?;
        let exact = exact_expected_sam(&inst)?;
        let mc = mc_expected_sam(&inst, opts.mc_samples, rng.random(), &tie)?;
        t.record("exact_vs_monte_carlo", sigma_gap(mc.estimate, exact, mc.stderr), || {
            (format!("exact {exact}, estimate {} +- {}", mc.estimate, mc.stderr), exponential_file(&inst, "monte carlo"))
        });
        let freq = argmin_frequencies(&inst, opts.mc_samples, rng.random())?;
        for (e, f) in g.edge_ids().zip(freq) {
            let p = first_choice_prob(&inst, e)?;
            let sd = (p * (1.0 - p) / opts.mc_samples as f64).sqrt();
            t.record("first_choice_matches_frequency", sigma_gap(f, p, sd), || {
                (format!("edge {e}: p {p}, frequency {f}"), exponential_file(&inst, "argmin frequency"))
            });
        }
    }

    if m > 0 && m <= CONDITIONAL_MAX_EDGES && opts.conditional_samples > 0 {
        let rates: Vec<f64> = (0..m).map(|_| log_uniform(&mut rng, 0.5, 2.0)).collect();
        let inst = Instance::exponential(g.clone(), &rates)?;
        for (p, e) in g.edge_ids().enumerate() {
            let target = 1.0 / rates[p] + exact_expected_sam(&inst.contract(e)?)?;
            let mc = conditional_expected_sam_mc(&inst, e, opts.conditional_samples, rng.random(), &tie)?;
            t.record("first_pick_conditional_identity", sigma_gap(mc.estimate, target, mc.stderr), || {
                (
                    format!("edge {e}: target {target}, estimate {} +- {}", mc.estimate, mc.stderr),
                    exponential_file(&inst, "conditional identity"),
                )
            });
        }
    }
    Ok(t)
}

/// Distance in standard errors beyond the agreement threshold; with zero
/// spread the values must agree to rounding.
fn sigma_gap(estimate: f64, target: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        (estimate - target).abs() / stderr - MC_AGREEMENT_SIGMAS
    } else {
        relative_gap(estimate, target)
    }
}

/// Graphic matroids of the graph family, every `U_{k,n}` with `n <= 6`, and
/// the Fano plane.
pub fn registered_matroids(opts: &VerifyOptions) -> Result<Vec<MatroidSource>> {
    let mut out: Vec<MatroidSource> = connected_multigraphs(opts.max_vertices, opts.max_edges)?
        .into_iter()
        .map(MatroidSource::Graphic)
        .collect();
    for n in 1..=6 {
        for k in 0..=n {
            out.push(MatroidSource::Uniform { k, n });
        }
    }
    out.push(MatroidSource::Binary((1..8).collect()));
    Ok(out)
}

pub fn matroid_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let sources = registered_matroids(opts)?;
    let trials = opts.trials.unwrap_or(500);
    let parts = sources
        .par_iter()
        .enumerate()
        .map(|(i, s)| matroid_checks(s, trials, opts.seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(Suite::Matroids, parts))
}

const CROSS_CHECK_TRIALS: usize = 20;
const WEIGHT_TRIALS: usize = 20;

fn matroid_checks(source: &MatroidSource, trials: usize, seed: u64, index: u64) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = task_rng(seed, index);
    let m = source.build()?;
    let n = m.len();
    let ones = vec![1.0; n];
    let file = |rates: &[f64]| matroid_instance_to_json(source, rates);
    let name = source.describe();

    let violation = m.axiom_violation()?;
    t.record("independence_axioms", flag(violation.is_none()), || {
        (format!("{name}: {}", violation.clone().unwrap_or_default()), file(&ones))
    });

    let (c_star, _) = m.largest_cocircuit()?;
    let rank = m.full_rank();
    let loopless = m.loops() == 0;
    if loopless {
        t.record("ground_at_most_rank_times_cocircuit", n as f64 - (rank * c_star) as f64, || {
            (format!("{name}: {n} > {rank} * {c_star}"), file(&ones))
        });
    }
    for e in (0..n).filter(|&e| !m.is_loop(e)) {
        let minor = m.contract_element(e)?.largest_cocircuit()?.0;
        t.record("contraction_never_grows_cocircuit", minor as f64 - c_star as f64, || {
            (format!("{name}: contracting {}: {minor} > {c_star}", m.label(e)), file(&ones))
        });
    }

    let full = m.full_set();
    let mut complements: Vec<ElementSet> = m.hyperplanes()?.iter().map(|h| full & !h).collect();
    complements.sort_unstable();
    t.record("hyperplane_complements_are_cocircuits", flag(complements == m.cocircuits()?), || {
        (format!("{name}: hyperplane complements differ from cocircuits"), file(&ones))
    });

    if let MatroidSource::Graphic(g) = source {
        let mut from_m: Vec<Vec<&str>> = m
            .cocircuits()?
            .into_iter()
            .map(|c| bits(c).map(|i| m.label(i)).collect())
            .collect();
        let bond_list = bonds(g)?;
        let mut from_g: Vec<Vec<&str>> = bond_list.iter().map(|b| b.iter().map(|e| e.as_str()).collect()).collect();
        from_m.sort();
        from_g.sort();
        t.record("graphic_cocircuits_are_bonds", flag(from_m == from_g), || {
            (format!("{name}: cocircuits differ from bonds"), file(&ones))
        });
    }

    let bases = m.bases()?;
    for _ in 0..WEIGHT_TRIALS {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(1..=3) as f64).collect();
        let weight = |s: ElementSet| bits(s).map(|i| w[i]).sum::<f64>();
        let best = bases.iter().map(|&b| weight(b)).fold(f64::INFINITY, f64::min);
        let greedy = weight(m.greedy_min_basis(&w, &TieBreak::default())?);
        t.record("greedy_basis_is_minimum", (greedy - best).abs(), || {
            (format!("{name}: greedy {greedy}, minimum {best}"), file(&w))
        });
        let min_bases: Vec<ElementSet> = bases.iter().copied().filter(|&b| weight(b) == best).collect();
        for (&b1, &b2) in min_bases.iter().tuple_combinations() {
            for e in (0..n).filter(|&e| (b1 | b2) & (1 << e) == 0) {
                let circuit_max = |b: ElementSet| -> Result<f64> {
                    Ok(bits(m.fundamental_circuit(b, e)? & !(1 << e))
                        .map(|i| w[i])
                        .fold(f64::NEG_INFINITY, f64::max))
                };
                let (f1, f2) = (circuit_max(b1)?, circuit_max(b2)?);
                t.record("tied_bases_agree_on_circuit_maximum", (f1 - f2).abs(), || {
                    (format!("{name}: element {}: {f1} vs {f2}", m.label(e)), file(&w))
                });
            }
        }
    }

    if loopless {
        let bound = c_star.max(1) as f64;
        for trial in 0..trials {
            let rates: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-2, 1e2)).collect();
            let inst = MatroidInstance::new(m.clone(), rates.clone())?;
            let alpha = alpha_matroid(&inst)?;
            t.record("cocircuit_upper_bound", alpha - bound - BOUND_TOLERANCE, || {
                (format!("{name}: alpha {alpha} > c* = {c_star}"), file(&rates))
            });
            if let (MatroidSource::Graphic(g), true) = (source, trial < CROSS_CHECK_TRIALS) {
                let via_graph = exact_expected_sam(&Instance::exponential(g.clone(), &rates)?)?;
                let via_matroid = exact_expected_sam_matroid(&inst)?;
                t.record("graphic_sam_matches_graph_sam", relative_gap(via_matroid, via_graph), || {
                    (format!("{name}: matroid {via_matroid}, graph {via_graph}"), file(&rates))
                });
            }
        }
    }
    Ok(t)
}
