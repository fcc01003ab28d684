//! Counter-based per-row sampling streams.
//!
//! Each matrix row owns an independent stream keyed by `(seed, row)`; the
//! k-th draw is a pure function of `(seed, row, k)`. Replaying a row —
//! at a later timestep, for a different event pattern, or on a different
//! thread — always yields the same gaps and weights, which is what makes
//! the regenerated matrix a fixed function of its spec rather than of the
//! call history.

use crate::error::{Error, Result};
use crate::rng::{bounded_1_to, mix64, stream_at, GOLDEN_GAMMA};

/// Deterministic draw stream for one `(seed, row)` pair.
#[derive(Debug, Clone)]
pub struct RowSampler {
    key: u64,
    counter: u64,
}

impl RowSampler {
    /// Key derivation: `key = mix64(seed ^ (row * GOLDEN_GAMMA))`.
    pub fn new(seed: u64, row: u64) -> Self {
        Self {
            key: mix64(seed ^ row.wrapping_mul(GOLDEN_GAMMA)),
            counter: 0,
        }
    }

    /// Number of draws consumed so far.
    #[inline]
    pub fn draws(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        stream_at(self.key, self.counter)
    }

    /// Uniform integer in `[1, bound]` via multiply-shift.
    #[inline]
    pub fn next_gap(&mut self, bound: u64) -> u64 {
        bounded_1_to(self.next_u64(), bound)
    }

    /// Advances the counter without computing the draws. Event kernels use
    /// this to skip weight draws for inactive targets at zero cost while
    /// keeping all later draws identical.
    #[inline]
    pub fn skip(&mut self, n: u64) {
        self.counter += n;
    }
}

/// Gap sampling by inverting the geometric CDF: `ceil(ln u / ln(1 - p))`,
/// clamped to at least 1. Kept for the sampler-cost benchmark; the
/// production path uses the bounded uniform draw instead.
pub fn geometric_gap(p: f64, u: f64) -> Result<u64> {
    if !(0.0..1.0).contains(&p) || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "geometric gap needs 0 < p < 1, got {p}"
        )));
    }
    if !(0.0..1.0).contains(&u) || u <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "geometric gap needs u in (0, 1), got {u}"
        )));
    }
    let gap = (u.ln() / (1.0 - p).ln()).ceil();
    Ok((gap as u64).max(1))
}
