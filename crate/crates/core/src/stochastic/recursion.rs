use std::collections::HashMap;

/// Bitmask state spaces above this size switch from a dense table to a map.
const DENSE_MEMO_BITS: usize = 20;

/// Hard ceiling imposed by the `u64` state key.
pub(crate) const MAX_RECURSION_ITEMS: usize = 63;

enum Memo {
    Dense(Vec<f64>),
    Sparse(HashMap<u64, f64>),
}

impl Memo {
    fn new(items: usize) -> Self {
        if items <= DENSE_MEMO_BITS {
            Memo::Dense(vec![f64::NAN; 1 << items])
        } else {
            Memo::Sparse(HashMap::new())
        }
    }

    fn get(&self, key: u64) -> Option<f64> {
        match self {
            Memo::Dense(v) => Some(v[key as usize]).filter(|x| !x.is_nan()),
            Memo::Sparse(m) => m.get(&key).copied(),
        }
    }

    fn put(&mut self, key: u64, value: f64) {
        match self {
            Memo::Dense(v) => v[key as usize] = value,
            Memo::Sparse(m) => {
                m.insert(key, value);
            }
        }
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// Expected SAM cost under exponential weights by conditioning on the first
/// item the greedy pass picks:
///
/// `E[SAM(C)] = Σ_{x live} (λ_x / Λ) (1/λ_x + E[SAM(C + x)])`, `Λ = Σ_{live} λ`,
///
/// where `C` is the set of contracted items and `live(C)` the items that are
/// still non-loops after contracting `C`. No live items means cost 0.
pub(crate) struct ContractionRecursion<'a, F> {
    rates: &'a [f64],
    live: F,
    memo: Memo,
}

impl<'a, F: FnMut(u64) -> u64> ContractionRecursion<'a, F> {
    pub(crate) fn new(rates: &'a [f64], live: F) -> Self {
        debug_assert!(rates.len() <= MAX_RECURSION_ITEMS);
        ContractionRecursion {
            rates,
            live,
            memo: Memo::new(rates.len()),
        }
    }

    pub(crate) fn value(&mut self, contracted: u64) -> f64 {
        if let Some(v) = self.memo.get(contracted) {
            return v;
        }
        let live = (self.live)(contracted);
        let v = if live == 0 {
            0.0
        } else {
            let total: f64 = bits(live).map(|i| self.rates[i]).sum();
            // (λ_x/Λ)(1/λ_x) summed over live items is |live|/Λ; dividing
            // once at the end keeps symmetric cases exact.
            let mut acc = live.count_ones() as f64;
            for i in bits(live) {
                acc += self.rates[i] * self.value(contracted | (1 << i));
            }
            acc / total
        };
        self.memo.put(contracted, v);
        v
    }
}
