//! Search problem definition: database size, marked set and oracle.
//!
//! Indices are 0-based, `[0, n)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{GroverError, Result};
use crate::rng;
use crate::scalar::Scalar;

/// A database of `n` items of which the indices in `marked` are the targets.
///
/// The marked set is sorted and deduplicated; a bit array mirrors it for
/// constant-time oracle queries.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct SearchInstance {
    n: usize,
    marked: Vec<usize>,
    seed: Option<u64>,
    #[serde(skip)]
    bits: Vec<u64>,
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    marked: Vec<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

impl TryFrom<RawInstance> for SearchInstance {
    type Error = GroverError;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let mut inst = SearchInstance::new(raw.n, &raw.marked)?;
        inst.seed = raw.seed;
        Ok(inst)
    }
}

impl PartialEq for SearchInstance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.marked == other.marked && self.seed == other.seed
    }
}

impl Eq for SearchInstance {}

impl SearchInstance {
    pub fn new(n: usize, marked: &[usize]) -> Result<Self> {
        if n < 2 {
            return Err(GroverError::SizeTooSmall { n, min: 2 });
        }
        if marked.is_empty() {
            return Err(GroverError::EmptyMarkedSet);
        }
        if let Some(&index) = marked.iter().find(|&&i| i >= n) {
            return Err(GroverError::IndexOutOfRange { index, n });
        }
        let mut sorted = marked.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut bits = vec![0u64; n.div_ceil(64)];
        for &i in &sorted {
            bits[i / 64] |= 1 << (i % 64);
        }
        Ok(SearchInstance {
            n,
            marked: sorted,
            seed: None,
            bits,
        })
    }

    /// Uniformly random `ell`-subset of `[0, n)`, a pure function of `(n, ell, seed)`.
    pub fn random(n: usize, ell: usize, seed: u64) -> Result<Self> {
        if ell == 0 || ell > n {
            return Err(GroverError::EllOutOfRange { ell, n });
        }
        let mut generator = rng::seeded(seed);
        let marked = rand::seq::index::sample(&mut generator, n, ell).into_vec();
        let mut inst = SearchInstance::new(n, &marked)?;
        inst.seed = Some(seed);
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of targets, `ell`.
    pub fn ell(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Membership test without bounds checking against `n`.
    #[inline]
    pub fn is_marked(&self, index: usize) -> bool {
        self.bits
            .get(index / 64)
            .is_some_and(|w| w >> (index % 64) & 1 == 1)
    }

    /// The oracle `f`: 1 on marked indices, 0 elsewhere.
    pub fn oracle(&self, index: usize) -> Result<u8> {
        if index >= self.n {
            return Err(GroverError::IndexOutOfRange { index, n: self.n });
        }
        Ok(self.is_marked(index) as u8)
    }
}

/// Expected number of sequential oracle queries until the first hit when the
/// `ell` targets sit in a uniformly random order: `(n + 1) / (ell + 1)`.
pub fn classical_expected_queries_exact(n: usize, ell: usize) -> Result<Ratio<u64>> {
    if ell == 0 || ell > n {
        return Err(GroverError::EllOutOfRange { ell, n });
    }
    Ok(Ratio::new(n as u64 + 1, ell as u64 + 1))
}

pub fn classical_expected_queries<T: Scalar>(n: usize, ell: usize) -> Result<T> {
    let exact = classical_expected_queries_exact(n, ell)?;
    Ok(T::from_count(*exact.numer() as usize) / T::from_count(*exact.denom() as usize))
}
