use rand::Rng;

use super::WeightDistribution;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};

/// A graph with an independent weight distribution on every edge.
///
/// `dists[i]` belongs to `graph.edges()[i]`. Per-edge vectors used elsewhere
/// in this module (rates, samples, weights) follow the same alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    graph: MultiGraph,
    dists: Vec<WeightDistribution>,
}

impl Instance {
    pub fn new(graph: MultiGraph, dists: Vec<WeightDistribution>) -> Result<Self> {
        if dists.len() != graph.edge_count() {
            return Err(Error::invalid(format!(
                "{} distributions for {} edges",
                dists.len(),
                graph.edge_count()
            )));
        }
        for d in &dists {
            d.validate()?;
        }
        Ok(Instance {
            name: String::new(),
            graph,
            dists,
        })
    }

    /// Exponential weights with the given rates.
    pub fn exponential(graph: MultiGraph, rates: &[f64]) -> Result<Self> {
        let dists = rates
            .iter()
            .map(|&r| WeightDistribution::exponential(r))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(graph, dists)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn dists(&self) -> &[WeightDistribution] {
        &self.dists
    }

    pub fn dist(&self, id: &EdgeId) -> Option<&WeightDistribution> {
        self.graph.position(id).map(|p| &self.dists[p])
    }

    pub fn is_exponential(&self) -> bool {
        self.dists.iter().all(|d| d.rate().is_some())
    }

    /// Rate vector; fails if any edge is not exponential.
    pub fn rates(&self) -> Result<Vec<f64>> {
        self.dists
            .iter()
            .map(|d| d.rate().ok_or(Error::NonExponential))
            .collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.dists.iter().map(WeightDistribution::mean).collect()
    }

    /// `G/e` with every surviving edge keeping its distribution.
    pub fn contract(&self, e: &EdgeId) -> Result<Instance> {
        let (graph, _) = self.graph.contract(e)?;
        let dists = graph
            .edge_ids()
            .map(|id| self.dists[self.graph.position(id).expect("minor edge")].clone())
            .collect();
        Ok(Instance {
            name: self.name.clone(),
            graph,
            dists,
        })
    }

    /// Fills `out` with one independent draw per edge.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for (w, d) in out.iter_mut().zip(&self.dists) {
            *w = d.sample(rng);
        }
    }
}
