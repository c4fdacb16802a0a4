//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines print in order and are not
//! captured. The process fails unless every criterion passes, except the ones
//! listed in `UNATTAINABLE`, which are run as stated and must fail for the
//! documented reason.

use std::io::Write;
use std::process::{Command, ExitCode};
use std::time::Instant;

use bondspan::families::{complete_graph, connected_multigraphs, parallel_edges};
use bondspan::graph::{enumerate_spanning_trees, MultiGraph, TieBreak};
use bondspan::io::{instance_to_json, MatroidSource};
use bondspan::matroid::{alpha_matroid, exact_expected_sam_matroid, MatroidInstance};
use bondspan::stochastic::{
    adaptive_expected_min, alpha, conditional_expected_sam_mc, exact_expected_sam, exchange_edges,
    exchange_inequality_with_bond, log_uniform, mc_expected_sam, task_rng, AlphaMode, Instance,
    WeightDistribution,
};
use bondspan::tight::sweep;
use bondspan::verify::{matroid_suite, VerifyOptions};

/// Expected-failure criteria: the stated target contradicts the model.
/// The symmetric example's SAM cost is M/4 + 1/2 (3.0 at M = 10), not M/2.
const UNATTAINABLE: &[&str] = &["symmetric_example_sam"];

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn line(o: &Outcome) {
    let mut err = std::io::stderr();
    let tag = if o.pass { "PASS" } else { "FAIL" };
    writeln!(err, "[{tag}] {}: {}", o.name, o.detail).ok();
}

/// Largest bond by brute force over edge subsets: `S` is a bond when `G − S`
/// has exactly two components and every edge of `S` runs between them.
fn brute_force_largest_bond(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut best = 0;
    for s in 0u32..(1 << m) {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for (i, e) in g.edges().iter().enumerate() {
            if s & (1 << i) == 0 {
                let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
                parent[a] = b;
            }
        }
        let roots: std::collections::BTreeSet<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let crossing = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| s & (1 << i) != 0)
            .all(|(_, e)| find(&mut parent, e.u) != find(&mut parent, e.v));
        if roots.len() == 2 && crossing {
            best = best.max(s.count_ones() as usize);
        }
    }
    best
}

/// `E[OPT]` as the cheapest expected-weight spanning tree by enumeration.
fn opt_by_enumeration(inst: &Instance) -> f64 {
    let g = inst.graph();
    let means = inst.means();
    enumerate_spanning_trees(g)
        .unwrap()
        .iter()
        .map(|t| t.weight(g, &means))
        .fold(f64::INFINITY, f64::min)
}

fn rates(rng: &mut impl rand::Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..m).map(|_| log_uniform(rng, lo, hi)).collect()
}

fn bond_bound_and_exchange() -> Vec<Outcome> {
    let start = Instant::now();
    let family = connected_multigraphs(5, 6).unwrap();
    let (mut checked, mut bound_fail, mut ex_fail) = (0u64, 0u64, 0u64);
    let (mut worst_bound, mut worst_ex) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (i, g) in family.iter().enumerate() {
        let b = brute_force_largest_bond(g);
        let mut rng = task_rng(1, i as u64);
        for _ in 0..1000 {
            let r = rates(&mut rng, g.edge_count(), 1e-2, 1e2);
            let inst = Instance::exponential(g.clone(), &r).unwrap();
            let a = alpha(&inst, AlphaMode::exact()).unwrap();
            // A single vertex has b = 0 and reports alpha = 1.
            let residual = a - b.max(1) as f64;
            worst_bound = worst_bound.max(residual);
            bound_fail += u64::from(residual > 1e-9);
            let ex = exchange_inequality_with_bond(&inst, b, &TieBreak::default()).unwrap();
            worst_ex = worst_ex.max(ex);
            ex_fail += u64::from(ex > 1e-9);
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    vec![
        Outcome {
            name: "bond_upper_bound_exhaustive",
            pass: bound_fail == 0 && secs < 120.0,
            detail: format!(
                "{} graphs x 1000 rate vectors = {checked} instances, {bound_fail} over b + 1e-9, \
                 worst alpha - b = {worst_bound:.3e}, {secs:.1}s (limit 120s)",
                family.len()
            ),
        },
        Outcome {
            name: "exchange_inequality_exhaustive",
            pass: ex_fail == 0,
            detail: format!("{checked} instances, {ex_fail} over 1e-9, largest sum = {worst_ex:.3e}"),
        },
    ]
}

fn tightness() -> Outcome {
    let scales = [10.0, 100.0, 1000.0, 1e4];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g) in [("K4", complete_graph(4).unwrap()), ("4 parallel edges", parallel_edges(4).unwrap())] {
        let b = brute_force_largest_bond(&g);
        let s = sweep(&g, &scales).unwrap();
        let last = s.rows.last().unwrap().alpha;
        let bounded = s.rows.iter().all(|r| r.alpha <= b as f64 + 1e-9);
        pass &= s.b == b && last >= b as f64 - 0.1 && bounded;
        let alphas: Vec<String> = s.rows.iter().map(|r| format!("{:.4}", r.alpha)).collect();
        parts.push(format!("{name} b={b} alpha=[{}]", alphas.join(", ")));
    }
    Outcome {
        name: "tight_rates_approach_bond",
        pass,
        detail: format!("{}; need alpha(1e4) >= b - 0.1 and alpha <= b", parts.join("; ")),
    }
}

fn item_selection() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut heavy = Vec::new();
    let mut pass = true;
    for m in 2..=6 {
        let g = parallel_edges(m).unwrap();
        let mut rng = task_rng(3, m as u64);
        for _ in 0..100 {
            let r = rates(&mut rng, m, 1e-2, 1e2);
            let exact = exact_expected_sam(&Instance::exponential(g.clone(), &r).unwrap()).unwrap();
            let closed = m as f64 / r.iter().sum::<f64>();
            worst = worst.max((exact - closed).abs());
        }
        let mut r = vec![1.0; m];
        r[0] = 1e4;
        let a = alpha(&Instance::exponential(g.clone(), &r).unwrap(), AlphaMode::exact()).unwrap();
        pass &= a >= m as f64 - 0.01;
        heavy.push(format!("m={m}: {a:.4}"));
    }
    pass &= worst <= 1e-12;
    Outcome {
        name: "item_selection_closed_form",
        pass,
        detail: format!("max |exact - m/sum| = {worst:.2e} (limit 1e-12); alpha at K=1e4: {}", heavy.join(", ")),
    }
}

fn conditional_identity() -> Outcome {
    let family = connected_multigraphs(6, 5).unwrap();
    let (mut checked, mut failed, mut worst) = (0, 0, f64::NEG_INFINITY);
    for (i, g) in family.iter().enumerate().filter(|(_, g)| g.edge_count() > 0) {
        let mut rng = task_rng(4, i as u64);
        let r = rates(&mut rng, g.edge_count(), 0.5, 2.0);
        let inst = Instance::exponential(g.clone(), &r).unwrap();
        for (p, e) in g.edge_ids().enumerate() {
            let target = 1.0 / r[p] + exact_expected_sam(&inst.contract(e).unwrap()).unwrap();
            let seed = (i as u64) << 8 | p as u64;
            let mc = conditional_expected_sam_mc(&inst, e, 100_000, seed, &TieBreak::default()).unwrap();
            let z = (mc.estimate - target).abs() / mc.stderr;
            worst = worst.max(z);
            failed += usize::from(z > 4.0);
            checked += 1;
        }
    }
    Outcome {
        name: "first_pick_conditional_identity",
        pass: failed == 0,
        detail: format!(
            "{} graphs, {checked} edges, 1e5 accepted samples each, {failed} beyond 4 stderr, worst {worst:.2} stderr",
            family.len() - 1
        ),
    }
}

fn opt_contraction() -> Outcome {
    let family = connected_multigraphs(5, 6).unwrap();
    let (mut checked, mut worst) = (0u64, 0.0f64);
    for (i, g) in family.iter().enumerate() {
        let mut rng = task_rng(5, i as u64);
        for _ in 0..200 {
            let r = rates(&mut rng, g.edge_count(), 1e-2, 1e2);
            let inst = Instance::exponential(g.clone(), &r).unwrap();
            let opt = opt_by_enumeration(&inst);
            let stars = exchange_edges(&inst, &TieBreak::default()).unwrap();
            for (e, star) in g.edge_ids().zip(&stars) {
                let lam = r[g.position(&star.edge).unwrap()];
                let minor = opt_by_enumeration(&inst.contract(e).unwrap());
                worst = worst.max((opt - 1.0 / lam - minor).abs());
                checked += 1;
            }
        }
    }
    Outcome {
        name: "opt_contraction_identity",
        pass: worst <= 1e-9,
        detail: format!("{checked} (edge, rate vector) pairs, max |E[OPT] - 1/rate(e*) - E[OPT minor]| = {worst:.2e}"),
    }
}

fn two_edge_instance(stochastic: WeightDistribution) -> Instance {
    let g = MultiGraph::new(2, [("fixed", 0, 1), ("random", 0, 1)]).unwrap();
    Instance::new(g, vec![WeightDistribution::constant(1.0).unwrap(), stochastic]).unwrap()
}

fn separation_examples() -> Vec<Outcome> {
    let m = 10.0;
    let heavy = two_edge_instance(WeightDistribution::discrete(vec![(0.0, 1.0 - 1.0 / m), (m * m, 1.0 / m)]).unwrap());
    let adaptive = adaptive_expected_min(&heavy).unwrap();
    let opt = opt_by_enumeration(&heavy);
    let mc = mc_expected_sam(&heavy, 1_000_000, 7, &TieBreak::default()).unwrap();
    let z = (mc.estimate - 9.1).abs() / mc.stderr;
    let first = Outcome {
        name: "heavy_tail_example",
        pass: (adaptive - 0.1).abs() < 1e-12 && (opt - 1.0).abs() < 1e-12 && z <= 3.0,
        detail: format!(
            "adaptive {adaptive}, OPT {opt}, SAM {:.4} +- {:.4} ({z:.2} stderr from 9.1, limit 3)",
            mc.estimate, mc.stderr
        ),
    };

    let symmetric = two_edge_instance(WeightDistribution::discrete(vec![(0.0, 0.5), (m, 0.5)]).unwrap());
    let opt = opt_by_enumeration(&symmetric);
    let mc = mc_expected_sam(&symmetric, 1_000_000, 8, &TieBreak::default()).unwrap();
    let z = (mc.estimate - m / 2.0).abs() / mc.stderr;
    let z_model = (mc.estimate - (m / 4.0 + 0.5)).abs() / mc.stderr;
    let second = Outcome {
        name: "symmetric_example_sam",
        pass: (opt - 1.0).abs() < 1e-12 && z <= 3.0,
        detail: format!(
            "OPT {opt}, SAM {:.4} +- {:.4}: {z:.1} stderr from the stated 5.0 (limit 3); \
             {z_model:.2} stderr from M/4 + 1/2 = 3.0",
            mc.estimate, mc.stderr
        ),
    };
    vec![first, second]
}

fn matroids() -> Outcome {
    let mut sources: Vec<(MatroidSource, usize)> = connected_multigraphs(5, 6)
        .unwrap()
        .into_iter()
        .filter(|g| g.edge_count() > 0)
        .map(|g| {
            let b = brute_force_largest_bond(&g);
            (MatroidSource::Graphic(g), b)
        })
        .collect();
    for n in 1..=6 {
        for k in 1..=n {
            sources.push((MatroidSource::Uniform { k, n }, n - k + 1));
        }
    }
    let (mut checked, mut over, mut worst_gap) = (0u64, 0u64, 0.0f64);
    for (i, (source, c_star)) in sources.iter().enumerate() {
        let m = source.build().unwrap();
        let mut rng = task_rng(9, i as u64);
        for _ in 0..500 {
            let r = rates(&mut rng, m.len(), 1e-2, 1e2);
            let inst = MatroidInstance::new(m.clone(), r.clone()).unwrap();
            over += u64::from(alpha_matroid(&inst).unwrap() > *c_star as f64 + 1e-9);
            checked += 1;
            if let MatroidSource::Graphic(g) = source {
                let graph = exact_expected_sam(&Instance::exponential(g.clone(), &r).unwrap()).unwrap();
                let matroid = exact_expected_sam_matroid(&inst).unwrap();
                worst_gap = worst_gap.max((graph - matroid).abs() / graph.abs().max(1.0));
            }
        }
    }
    let suite = matroid_suite(&VerifyOptions::default()).unwrap();
    let lemma_names = [
        "contraction_never_grows_cocircuit",
        "ground_at_most_rank_times_cocircuit",
        "tied_bases_agree_on_circuit_maximum",
        "graphic_cocircuits_are_bonds",
        "hyperplane_complements_are_cocircuits",
        "independence_axioms",
    ];
    let lemmas: Vec<String> = lemma_names
        .iter()
        .map(|n| {
            let c = suite.check(n).unwrap();
            format!("{n} {}/{}", c.passed, c.checked)
        })
        .collect();
    let lemmas_ok = lemma_names.iter().all(|n| {
        let c = suite.check(n).unwrap();
        c.checked > 0 && c.passed == c.checked
    });
    Outcome {
        name: "matroid_cocircuit_bound",
        pass: over == 0 && worst_gap <= 1e-12 && lemmas_ok,
        detail: format!(
            "{} matroids x 500 = {checked} instances, {over} over c* + 1e-9; graphic vs graph E[SAM] \
             max relative gap {worst_gap:.1e}; {}",
            sources.len(),
            lemmas.join(", ")
        ),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let g = complete_graph(4).unwrap();
    let inst = Instance::exponential(g, &[0.5, 1.0, 2.0, 4.0, 1.5, 3.0]).unwrap().with_name("k4");
    let input = dir.path().join("k4.json");
    std::fs::write(&input, instance_to_json(&inst)).unwrap();
    let run = |out: &str| {
        let path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_bondspan"))
            .args(["analyze", "--exact", "--mc-samples", "100000", "--seed", "42", "--output"])
            .arg(&path)
            .arg(&input)
            .status()
            .unwrap();
        (status.success(), std::fs::read(path).unwrap_or_default())
    };
    let (ok1, a) = run("first.json");
    let (ok2, b) = run("second.json");
    Outcome {
        name: "analyze_is_deterministic",
        pass: ok1 && ok2 && !a.is_empty() && a == b,
        detail: format!("two runs, {} and {} bytes, identical: {}", a.len(), b.len(), a == b),
    }
}

fn main() -> ExitCode {
    let mut outcomes = bond_bound_and_exchange();
    let (exchange, first) = (outcomes.pop().unwrap(), outcomes.pop().unwrap());
    outcomes = vec![first, tightness(), item_selection(), conditional_identity(), opt_contraction(), exchange];
    outcomes.extend(separation_examples());
    outcomes.push(matroids());
    outcomes.push(determinism());

    for o in &outcomes {
        line(o);
    }
    let unexpected: Vec<&str> = outcomes
        .iter()
        .filter(|o| o.pass == UNATTAINABLE.contains(&o.name))
        .map(|o| o.name)
        .collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let mut err = std::io::stderr();
    writeln!(
        err,
        "{passed}/{} criteria pass; known unattainable: {}",
        outcomes.len(),
        UNATTAINABLE.join(", ")
    )
    .ok();
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        writeln!(err, "unexpected outcome for: {}", unexpected.join(", ")).ok();
        ExitCode::FAILURE
    }
}
