use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bin boundaries `b_1 < ... < b_{m+1}`; bin `j` (0-based) is `[b_j, b_{j+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinSpec {
    boundaries: Vec<i64>,
}

impl BinSpec {
    pub fn new(boundaries: Vec<i64>) -> Result<Self> {
        if boundaries.len() < 2 || boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadBins(boundaries));
        }
        Ok(BinSpec { boundaries })
    }

    /// `k` bins of width one starting at `first`.
    pub fn unit(first: i64, k: usize) -> Result<Self> {
        Self::new((0..=k as i64).map(|d| first + d).collect())
    }

    /// Bins `[lo, lo + width)`, `[lo + width, lo + 2 width)`, ...
    pub fn uniform(lo: i64, width: i64, m: usize) -> Result<Self> {
        Self::new((0..=m as i64).map(|d| lo + d * width).collect())
    }

    pub fn num_bins(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[i64] {
        &self.boundaries
    }

    /// Inclusive value range of bin `j`.
    pub fn interval(&self, j: usize) -> (i64, i64) {
        (self.boundaries[j], self.boundaries[j + 1] - 1)
    }

    /// Inclusive range covered by all bins.
    pub fn span(&self) -> (i64, i64) {
        (self.boundaries[0], self.boundaries[self.num_bins()] - 1)
    }

    pub fn bin_of(&self, v: i64) -> Option<usize> {
        let (lo, hi) = self.span();
        if v < lo || v > hi {
            return None;
        }
        Some(self.boundaries.partition_point(|b| *b <= v) - 1)
    }
}
