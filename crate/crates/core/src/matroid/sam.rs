use super::{ElementSet, Matroid};
use crate::error::{Error, Result};
use crate::graph::TieBreak;
use crate::stochastic::recursion::{bits, ContractionRecursion, MAX_RECURSION_ITEMS};
use crate::stochastic::sam::{ratio, DEFAULT_EXACT_EDGE_LIMIT};

/// A loopless matroid with an exponential rate per element.
#[derive(Debug, Clone)]
pub struct MatroidInstance {
    matroid: Matroid,
    rates: Vec<f64>,
}

impl MatroidInstance {
    pub fn new(matroid: Matroid, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != matroid.len() {
            return Err(Error::invalid(format!(
                "{} rates for {} elements",
                rates.len(),
                matroid.len()
            )));
        }
        if let Some(i) = rates.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::invalid(format!("rate of element {i} must be positive and finite")));
        }
        if let Some(i) = (0..matroid.len()).find(|&i| matroid.is_loop(i)) {
            return Err(Error::Loop(i));
        }
        Ok(MatroidInstance { matroid, rates })
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn means(&self) -> Vec<f64> {
        self.rates.iter().map(|r| 1.0 / r).collect()
    }

    /// Greedy basis on the means and its expected weight.
    pub fn opt_basis(&self, tie: &TieBreak) -> Result<(ElementSet, f64)> {
        let means = self.means();
        let basis = self.matroid.greedy_min_basis(&means, tie)?;
        Ok((basis, bits(basis).map(|i| means[i]).sum()))
    }
}

pub fn exact_expected_sam_matroid(inst: &MatroidInstance) -> Result<f64> {
    exact_expected_sam_matroid_with_limit(inst, DEFAULT_EXACT_EDGE_LIMIT)
}

/// Same recursion as for graphs, with the live elements after contracting
/// `C` being those `x` for which `C + x` is still independent.
pub fn exact_expected_sam_matroid_with_limit(inst: &MatroidInstance, limit: usize) -> Result<f64> {
    let m = &inst.matroid;
    let limit = limit.min(MAX_RECURSION_ITEMS);
    if m.len() > limit {
        return Err(Error::guard("ground set for exact recursion", limit, m.len()));
    }
    let live = |contracted: u64| {
        (0..m.len())
            .filter(|&i| contracted & (1 << i) == 0 && m.is_independent(contracted | (1 << i)))
            .fold(0, |acc, i| acc | (1 << i))
    };
    Ok(ContractionRecursion::new(&inst.rates, live).value(0))
}

/// `E[SAM] / E[OPT]` over the matroid; rank 0 reports 1.
pub fn alpha_matroid(inst: &MatroidInstance) -> Result<f64> {
    let (_, e_opt) = inst.opt_basis(&TieBreak::default())?;
    Ok(ratio(exact_expected_sam_matroid(inst)?, e_opt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use crate::stochastic::{alpha, exact_expected_sam, AlphaMode, Instance};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn item_selection_closed_form() {
        let rates = vec![3.0, 0.5, 1.25, 2.0];
        let inst = MatroidInstance::new(Matroid::uniform(1, 4).unwrap(), rates.clone()).unwrap();
        let expected = 4.0 / rates.iter().sum::<f64>();
        assert!(close(exact_expected_sam_matroid(&inst).unwrap(), expected, 1e-12));
    }

    #[test]
    fn free_matroid_alpha_is_one() {
        let rates = vec![1.0, 2.0, 4.0];
        let inst = MatroidInstance::new(Matroid::uniform(3, 3).unwrap(), rates).unwrap();
        assert!(close(exact_expected_sam_matroid(&inst).unwrap(), 1.75, 1e-12));
        assert!(close(alpha_matroid(&inst).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn u13_heavy_rate() {
        let k = 1e3;
        let inst = MatroidInstance::new(Matroid::uniform(1, 3).unwrap(), vec![k, 1.0, 1.0]).unwrap();
        let a = alpha_matroid(&inst).unwrap();
        assert!(close(a, 3.0 * k / (k + 2.0), 1e-12));
        assert!(a < 3.0);
    }

    #[test]
    fn graphic_matches_graph_module() {
        let g = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (0, 3), (1, 3)]).unwrap();
        let rates = [0.7, 2.0, 1.3, 5.0, 0.25, 1.0];
        let graph_inst = Instance::exponential(g.clone(), &rates).unwrap();
        let inst = MatroidInstance::new(Matroid::graphic(&g).unwrap(), rates.to_vec()).unwrap();
        let a = exact_expected_sam(&graph_inst).unwrap();
        let b = exact_expected_sam_matroid(&inst).unwrap();
        assert!(close(a, b, 1e-12), "{a} vs {b}");
        let k3 = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = [1.0, 3.0, 0.5];
        let ga = alpha(&Instance::exponential(k3.clone(), &r).unwrap(), AlphaMode::exact()).unwrap();
        let ma = alpha_matroid(&MatroidInstance::new(Matroid::graphic(&k3).unwrap(), r.to_vec()).unwrap()).unwrap();
        assert!(close(ga, ma, 1e-12));
    }

    #[test]
    fn rank_zero_and_rejections() {
        let m = Matroid::uniform(0, 0).unwrap();
        let inst = MatroidInstance::new(m, vec![]).unwrap();
        assert_eq!(alpha_matroid(&inst).unwrap(), 1.0);
        assert_eq!(
            MatroidInstance::new(Matroid::uniform(0, 1).unwrap(), vec![1.0]).unwrap_err(),
            Error::Loop(0)
        );
        assert!(MatroidInstance::new(Matroid::uniform(1, 2).unwrap(), vec![1.0]).is_err());
        assert!(MatroidInstance::new(Matroid::uniform(1, 1).unwrap(), vec![0.0]).is_err());
        let big = MatroidInstance::new(Matroid::uniform(2, 13).unwrap(), vec![1.0; 13]).unwrap();
        assert!(matches!(exact_expected_sam_matroid(&big), Err(Error::SizeGuard { .. })));
    }
}
