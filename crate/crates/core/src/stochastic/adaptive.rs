use super::{Instance, WeightDistribution};
use crate::error::{Error, Result};
use crate::graph::{Kruskal, TieBreak};

/// Joint atom combinations enumerated by [`adaptive_expected_min`].
pub const MAX_JOINT_OUTCOMES: usize = 1 << 20;

/// `E[min_T w(T)]` for discrete weights, by enumerating every joint outcome.
pub fn adaptive_expected_min(inst: &Instance) -> Result<f64> {
    let g = inst.graph();
    let atoms: Vec<&[(f64, f64)]> = inst
        .dists()
        .iter()
        .map(|d| match d {
            WeightDistribution::Discrete { atoms } => Ok(atoms.as_slice()),
            WeightDistribution::Exponential { .. } => Err(Error::NotDiscrete),
        })
        .collect::<Result<_>>()?;
    let outcomes = atoms
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.len()))
        .unwrap_or(usize::MAX);
    if outcomes > MAX_JOINT_OUTCOMES {
        return Err(Error::guard("joint outcome count", MAX_JOINT_OUTCOMES, outcomes));
    }
    g.require_connected()?;

    let mut kruskal = Kruskal::new(g, &TieBreak::default());
    let mut index = vec![0usize; atoms.len()];
    let mut weights = vec![0.0; atoms.len()];
    let mut total = 0.0;
    loop {
        let mut prob = 1.0;
        for (i, a) in atoms.iter().enumerate() {
            let (v, p) = a[index[i]];
            weights[i] = v;
            prob *= p;
        }
        if prob > 0.0 {
            let tree = kruskal.run(g, &weights).expect("connected");
            total += prob * tree.iter().map(|&p| weights[p]).sum::<f64>();
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == atoms.len() {
                return Ok(total);
            }
            index[i] += 1;
            if index[i] < atoms[i].len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}
