use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a discrete distribution.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightDistribution {
    /// Exponential with rate `λ > 0`; mean `1/λ`.
    Exponential { rate: f64 },
    /// Finitely many `(value, probability)` atoms.
    Discrete { atoms: Vec<(f64, f64)> },
}

impl WeightDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        let d = WeightDistribution::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let d = WeightDistribution::Discrete { atoms };
        d.validate()?;
        Ok(d)
    }

    /// Point mass at `value`.
    pub fn constant(value: f64) -> Result<Self> {
        Self::discrete(vec![(value, 1.0)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightDistribution::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(Error::invalid(format!(
                        "exponential rate must be positive and finite, got {rate}"
                    )));
                }
            }
            WeightDistribution::Discrete { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::invalid("discrete distribution has no atoms"));
                }
                for &(v, p) in atoms {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::invalid(format!(
                            "atom value must be finite and non-negative, got {v}"
                        )));
                    }
                    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                        return Err(Error::invalid(format!(
                            "atom probability must lie in [0, 1], got {p}"
                        )));
                    }
                }
                let total: f64 = atoms.iter().map(|a| a.1).sum();
                if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "atom probabilities sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            WeightDistribution::Exponential { rate } => 1.0 / rate,
            WeightDistribution::Discrete { atoms } => atoms.iter().map(|(v, p)| v * p).sum(),
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match self {
            WeightDistribution::Exponential { rate } => Some(*rate),
            WeightDistribution::Discrete { .. } => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WeightDistribution::Exponential { rate } => rng.sample::<f64, _>(Exp1) / rate,
            WeightDistribution::Discrete { atoms } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(v, p) in atoms {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                // Rounding left `acc` just below 1.
                atoms.iter().rev().find(|a| a.1 > 0.0).map_or(atoms[0].0, |a| a.0)
            }
        }
    }
}
