//! Monte Carlo estimation of SAM's expected cost.
//!
//! Draws are split into fixed-size tasks. Task `t` owns the ChaCha stream
//! `t` under the caller's seed, so the per-task statistics do not depend on
//! how rayon schedules the tasks, and the task results are merged in task
//! order. The same `(seed, n)` therefore gives bit-identical output on any
//! number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Instance;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Kruskal, TieBreak};

/// Draws per independent RNG stream.
pub const DRAWS_PER_TASK: u64 = 1 << 14;

/// Sample mean with its standard error (sample sd / √n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

/// Streaming mean/variance (Welford), mergeable with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        self.mean += d * other.n as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// RNG for task `task` of a run seeded with `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

fn run_tasks<F>(n: u64, seed: u64, per_task: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng, u64, &mut Moments) + Sync,
{
    let tasks = n.div_ceil(DRAWS_PER_TASK);
    let parts: Vec<Moments> = (0..tasks)
        .into_par_iter()
        .map(|t| {
            let draws = DRAWS_PER_TASK.min(n - t * DRAWS_PER_TASK);
            let mut rng = task_rng(seed, t);
            let mut m = Moments::default();
            per_task(&mut rng, draws, &mut m);
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    McEstimate {
        estimate: total.mean(),
        stderr: total.stderr(),
        n_samples: total.count(),
        seed,
    }
}

/// Estimates `E[w(T^SAM(w̃))]` from `n` draws of independent samples `w̃`
/// and true weights `w`.
pub fn mc_expected_sam(inst: &Instance, n: u64, seed: u64, tie: &TieBreak) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one draw"));
    }
    let g = inst.graph();
    g.require_connected()?;
    let kruskal = Kruskal::new(g, tie);
    Ok(run_tasks(n, seed, |rng, draws, acc| {
        let mut k = kruskal.clone();
        let mut samples = vec![0.0; g.edge_count()];
        for _ in 0..draws {
            inst.sample_into(rng, &mut samples);
            let tree = k.run(g, &samples).expect("connected");
            let cost: f64 = tree.iter().map(|&p| inst.dists()[p].sample(rng)).sum();
            acc.push(cost);
        }
    }))
}

/// Estimates `E[w(T^SAM) | e has the strictly smallest sample]` by rejection:
/// sample vectors are redrawn until `e` is the strict minimum, and `n` is the
/// number of accepted draws.
pub fn conditional_expected_sam_mc(
    inst: &Instance,
    e: &EdgeId,
    n: u64,
    seed: u64,
    tie: &TieBreak,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one draw"));
    }
    inst.rates()?;
    let g = inst.graph();
    let target = g.require(e)?;
    g.require_connected()?;
    let kruskal = Kruskal::new(g, tie);
    Ok(run_tasks(n, seed, |rng, draws, acc| {
        let mut k = kruskal.clone();
        let mut samples = vec![0.0; g.edge_count()];
        for _ in 0..draws {
            loop {
                let lead = inst.dists()[target].sample(rng);
                samples[target] = lead;
                let accepted = (0..g.edge_count())
                    .filter(|&p| p != target)
                    .all(|p| {
                        samples[p] = inst.dists()[p].sample(rng);
                        samples[p] > lead
                    });
                if accepted {
                    break;
                }
            }
            let tree = k.run(g, &samples).expect("connected");
            let cost: f64 = tree.iter().map(|&p| inst.dists()[p].sample(rng)).sum();
            acc.push(cost);
        }
    }))
}

/// Empirical frequency with which each edge carries the smallest sample,
/// with ties going to the lowest position.
pub fn argmin_frequencies(inst: &Instance, n: u64, seed: u64) -> Result<Vec<f64>> {
    let m = inst.graph().edge_count();
    if m == 0 || n == 0 {
        return Err(Error::invalid("need at least one edge and one draw"));
    }
    let tasks = n.div_ceil(DRAWS_PER_TASK);
    let counts: Vec<Vec<u64>> = (0..tasks)
        .into_par_iter()
        .map(|t| {
            let draws = DRAWS_PER_TASK.min(n - t * DRAWS_PER_TASK);
            let mut rng = task_rng(seed, t);
            let mut samples = vec![0.0; m];
            let mut counts = vec![0u64; m];
            for _ in 0..draws {
                inst.sample_into(&mut rng, &mut samples);
                let best = (0..m)
                    .min_by(|&a, &b| samples[a].total_cmp(&samples[b]))
                    .expect("non-empty");
                counts[best] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; m];
    for c in counts {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    Ok(total.into_iter().map(|c| c as f64 / n as f64).collect())
}

/// Uniform draw on a log scale in `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}
