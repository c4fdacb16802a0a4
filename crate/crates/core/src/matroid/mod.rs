//! Matroids given by independence oracles, with contraction minors and the
//! enumeration-based structure (bases, circuits, cocircuits, hyperplanes)
//! needed to carry the bond bound over to cocircuits.
//!
//! Subsets of the ground set are `u64` bitmasks over local element indices.
//! A [`Matroid`] is a minor of a base oracle: it remembers which base
//! elements survive and which were contracted, so repeated contraction never
//! rebuilds the oracle.

mod oracle;
mod sam;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, TieBreak};
use crate::stochastic::recursion::bits;

pub use oracle::{BinaryOracle, GraphicOracle, IndependenceOracle, UniformOracle};
pub use sam::{alpha_matroid, exact_expected_sam_matroid, exact_expected_sam_matroid_with_limit, MatroidInstance};

/// Bitmask over local element indices.
pub type ElementSet = u64;

/// Exhaustive enumeration (bases, circuits, cocircuits, flats) refuses
/// larger ground sets.
pub const MAX_ENUMERATION_ELEMENTS: usize = 14;

#[derive(Clone)]
pub struct Matroid {
    base: Arc<dyn IndependenceOracle>,
    labels: Arc<Vec<String>>,
    /// Base indices of the surviving elements, in local order.
    elements: Vec<usize>,
    /// Base mask of contracted elements; always independent in the base.
    contracted: u64,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("base", &self.base)
            .field("ground", &self.labels())
            .field("contracted", &self.contracted)
            .finish()
    }
}

impl Matroid {
    pub fn from_oracle(oracle: Arc<dyn IndependenceOracle>, labels: Vec<String>) -> Result<Self> {
        let n = oracle.ground_size();
        if labels.len() != n {
            return Err(Error::invalid(format!("{} labels for {n} elements", labels.len())));
        }
        if n > 63 {
            return Err(Error::guard("matroid ground set", 63, n));
        }
        Ok(Matroid {
            base: oracle,
            labels: Arc::new(labels),
            elements: (0..n).collect(),
            contracted: 0,
        })
    }

    /// Cycle matroid of `g`; elements are the edges in edge order.
    pub fn graphic(g: &MultiGraph) -> Result<Self> {
        let labels = g.edge_ids().map(|e| e.0.clone()).collect();
        Matroid::from_oracle(Arc::new(GraphicOracle::new(g.clone())?), labels)
    }

    /// `U_{k,n}`: every set of at most `k` elements is independent.
    pub fn uniform(k: usize, n: usize) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Matroid::from_oracle(Arc::new(UniformOracle::new(k, n)?), labels)
    }

    /// Column matroid of 0/1 vectors over GF(2), given as bitmasks.
    pub fn binary(columns: Vec<u64>) -> Result<Self> {
        let labels = (0..columns.len()).map(|i| i.to_string()).collect();
        Matroid::from_oracle(Arc::new(BinaryOracle::new(columns)), labels)
    }

    /// The Fano plane: seven non-zero vectors of GF(2)^3.
    pub fn fano() -> Self {
        Matroid::binary((1..8).collect()).expect("seven columns")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn full_set(&self) -> ElementSet {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[self.elements[i]]
    }

    pub fn labels(&self) -> Vec<&str> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    pub fn base_oracle(&self) -> &Arc<dyn IndependenceOracle> {
        &self.base
    }

    fn to_base(&self, set: ElementSet) -> u64 {
        bits(set).fold(self.contracted, |acc, i| acc | (1 << self.elements[i]))
    }

    fn check(&self, set: ElementSet) -> Result<()> {
        let foreign = set & !self.full_set();
        if foreign != 0 {
            return Err(Error::UnknownElement(foreign.trailing_zeros() as usize));
        }
        Ok(())
    }

    /// Independence of a subset; bits outside the ground set make it dependent.
    pub fn is_independent(&self, set: ElementSet) -> bool {
        set & !self.full_set() == 0 && self.base.is_independent(self.to_base(set))
    }

    /// Size of a maximal independent subset of `set`, grown greedily.
    pub fn rank(&self, set: ElementSet) -> Result<usize> {
        self.check(set)?;
        Ok(self.rank_unchecked(set))
    }

    fn rank_unchecked(&self, set: ElementSet) -> usize {
        let mut grown = 0;
        for i in bits(set) {
            if self.is_independent(grown | (1 << i)) {
                grown |= 1 << i;
            }
        }
        grown.count_ones() as usize
    }

    pub fn full_rank(&self) -> usize {
        self.rank_unchecked(self.full_set())
    }

    pub fn closure(&self, set: ElementSet) -> Result<ElementSet> {
        let r = self.rank(set)?;
        Ok((0..self.len())
            .filter(|&i| self.rank_unchecked(set | (1 << i)) == r)
            .fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn is_loop(&self, i: usize) -> bool {
        !self.is_independent(1 << i)
    }

    pub fn loops(&self) -> ElementSet {
        (0..self.len())
            .filter(|&i| self.is_loop(i))
            .fold(0, |acc, i| acc | (1 << i))
    }

    fn restrict(&self, keep: impl Fn(usize) -> bool, contracted: u64) -> Matroid {
        Matroid {
            base: self.base.clone(),
            labels: self.labels.clone(),
            elements: (0..self.len())
                .filter(|&i| keep(i))
                .map(|i| self.elements[i])
                .collect(),
            contracted,
        }
    }

    /// `M/e` on the ground set minus `e`, with any new loops removed.
    pub fn contract_element(&self, e: usize) -> Result<Matroid> {
        if e >= self.len() {
            return Err(Error::UnknownElement(e));
        }
        if self.is_loop(e) {
            return Err(Error::Loop(e));
        }
        let contracted = self.contracted | (1 << self.elements[e]);
        let minor = self.restrict(|i| i != e, contracted);
        let loops = minor.loops();
        Ok(minor.restrict(|i| loops & (1 << i) == 0, contracted))
    }

    /// `M \ e`.
    pub fn delete_element(&self, e: usize) -> Result<Matroid> {
        if e >= self.len() {
            return Err(Error::UnknownElement(e));
        }
        Ok(self.restrict(|i| i != e, self.contracted))
    }

    fn guard(&self) -> Result<()> {
        if self.len() > MAX_ENUMERATION_ELEMENTS {
            return Err(Error::guard(
                "matroid ground set for enumeration",
                MAX_ENUMERATION_ELEMENTS,
                self.len(),
            ));
        }
        Ok(())
    }

    fn subsets(&self) -> impl Iterator<Item = ElementSet> {
        0..=self.full_set()
    }

    pub fn bases(&self) -> Result<Vec<ElementSet>> {
        self.guard()?;
        let r = self.full_rank() as u32;
        Ok(self
            .subsets()
            .filter(|s| s.count_ones() == r && self.is_independent(*s))
            .collect())
    }

    /// Minimal dependent sets.
    pub fn circuits(&self) -> Result<Vec<ElementSet>> {
        self.guard()?;
        Ok(self
            .subsets()
            .filter(|&s| {
                s != 0
                    && !self.is_independent(s)
                    && bits(s).all(|i| self.is_independent(s & !(1 << i)))
            })
            .collect())
    }

    /// Minimal sets meeting every basis, in increasing mask order.
    pub fn cocircuits(&self) -> Result<Vec<ElementSet>> {
        let bases = self.bases()?;
        let mut by_size: Vec<ElementSet> = self
            .subsets()
            .filter(|&x| x != 0 && bases.iter().all(|b| b & x != 0))
            .collect();
        by_size.sort_by_key(|x| (x.count_ones(), *x));
        let mut minimal: Vec<ElementSet> = Vec::new();
        for x in by_size {
            if minimal.iter().all(|c| c & x != *c) {
                minimal.push(x);
            }
        }
        minimal.sort_unstable();
        Ok(minimal)
    }

    /// Size of a largest cocircuit and the first one found; 0 for rank 0.
    pub fn largest_cocircuit(&self) -> Result<(usize, ElementSet)> {
        let mut best = (0, 0);
        for c in self.cocircuits()? {
            let size = c.count_ones() as usize;
            if size > best.0 {
                best = (size, c);
            }
        }
        Ok(best)
    }

    /// Flats of rank `r(M) − 1`.
    pub fn hyperplanes(&self) -> Result<Vec<ElementSet>> {
        self.guard()?;
        let r = self.full_rank();
        if r == 0 {
            return Ok(Vec::new());
        }
        Ok(self
            .subsets()
            .filter(|&x| self.rank_unchecked(x) == r - 1 && self.closure(x).ok() == Some(x))
            .collect())
    }

    /// The unique circuit in `basis + e`.
    pub fn fundamental_circuit(&self, basis: ElementSet, e: usize) -> Result<ElementSet> {
        self.check(basis | (1 << e))?;
        if basis & (1 << e) != 0 {
            return Err(Error::invalid(format!("element {e} is in the basis")));
        }
        if !self.is_independent(basis) || self.rank_unchecked(basis) != self.full_rank() {
            return Err(Error::invalid("not a basis"));
        }
        let with_e = basis | (1 << e);
        Ok(bits(basis)
            .filter(|&x| self.is_independent(with_e & !(1 << x)))
            .fold(1 << e, |acc, x| acc | (1 << x)))
    }

    /// Greedy minimum-weight basis; `weights` is aligned with local indices
    /// and ties go to the lower rank under `tie` applied to the labels.
    pub fn greedy_min_basis(&self, weights: &[f64], tie: &TieBreak) -> Result<ElementSet> {
        if weights.len() != self.len() {
            return Err(Error::MissingSample {
                expected: self.len(),
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        let ranks = tie.ranks_of(self.labels());
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(ranks[a].cmp(&ranks[b])));
        let mut basis = 0;
        for i in order {
            if self.is_independent(basis | (1 << i)) {
                basis |= 1 << i;
            }
        }
        Ok(basis)
    }

    /// Exhaustive check of the three independence axioms; returns a
    /// description of the first violation.
    pub fn axiom_violation(&self) -> Result<Option<String>> {
        self.guard()?;
        if !self.is_independent(0) {
            return Ok(Some("empty set is dependent".into()));
        }
        let independent: Vec<ElementSet> = self.subsets().filter(|&s| self.is_independent(s)).collect();
        for &j in &independent {
            for i in bits(j) {
                if !self.is_independent(j & !(1 << i)) {
                    return Ok(Some(format!("{j:#b} independent but {:#b} is not", j & !(1 << i))));
                }
            }
        }
        for &i in &independent {
            for &j in &independent {
                if i.count_ones() < j.count_ones()
                    && !bits(j & !i).any(|e| self.is_independent(i | (1 << e)))
                {
                    return Ok(Some(format!("exchange fails for {i:#b} and {j:#b}")));
                }
            }
        }
        Ok(None)
    }
}

pub fn set_size(s: ElementSet) -> usize {
    s.count_ones() as usize
}
