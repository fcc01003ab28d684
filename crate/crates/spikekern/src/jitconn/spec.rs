use serde::{Deserialize, Serialize};

use super::sampler::RowSampler;
use crate::error::{Error, Result};

/// Weight distribution of a procedurally regenerated matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDist {
    /// Every stored edge carries the same value.
    Homo { w: f64 },
    /// Per-edge uniform on `[low, high)`.
    Uniform { low: f64, high: f64 },
    /// Per-edge normal with mean `mu` and standard deviation `sigma`.
    Normal { mu: f64, sigma: f64 },
}

impl WeightDist {
    /// Stream words consumed per weight draw. Fixed per distribution so that
    /// skipping an inactive target advances the counter by a known amount.
    #[inline]
    pub fn draw_cost(&self) -> u64 {
        match self {
            WeightDist::Homo { .. } => 0,
            WeightDist::Uniform { .. } => 1,
            WeightDist::Normal { .. } => 2,
        }
    }

    /// Draws one weight from the row stream.
    #[inline]
    pub fn draw(&self, sampler: &mut RowSampler) -> f64 {
        match *self {
            WeightDist::Homo { w } => w,
            WeightDist::Uniform { low, high } => {
                low + (high - low) * crate::rng::unit_f64(sampler.next_u64())
            }
            WeightDist::Normal { mu, sigma } => {
                let u1 = crate::rng::unit_f64_open_low(sampler.next_u64());
                let u2 = crate::rng::unit_f64(sampler.next_u64());
                mu + sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            }
        }
    }
}

/// A fixed-probability random matrix described by scalars only.
///
/// The matrix is never stored: row contents are regenerated on demand from
/// `(seed, row)`. Persistent operator state is exactly these fields, so the
/// footprint is independent of `n_rows * n_cols`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitConnSpec {
    pub n_rows: usize,
    pub n_cols: usize,
    pub prob: f64,
    pub dist: WeightDist,
    pub seed: u64,
}

impl JitConnSpec {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        prob: f64,
        dist: WeightDist,
        seed: u64,
    ) -> Result<Self> {
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "connection probability must be in (0, 1], got {prob}"
            )));
        }
        match dist {
            WeightDist::Uniform { low, high } if low > high => {
                return Err(Error::InvalidParameter(format!(
                    "uniform weight bounds inverted: [{low}, {high}]"
                )));
            }
            WeightDist::Normal { sigma, .. } if sigma < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "normal weight sigma must be >= 0, got {sigma}"
                )));
            }
            _ => {}
        }
        let spec = Self {
            n_rows,
            n_cols,
            prob,
            dist,
            seed,
        };
        if spec.gap_bound() == 1 && prob < 1.0 {
            // With K = 1 every candidate position is taken: the realized
            // matrix is fully dense and the effective probability is 1.
            eprintln!(
                "warning: prob = {prob} gives gap bound K = 1; the regenerated \
                 matrix is fully dense (effective probability 1)"
            );
        }
        Ok(spec)
    }

    /// Gap bound `K = max(1, floor(2/p - 1))`: inter-target distances are
    /// drawn uniformly from `[1, K]`, giving mean gap `(K + 1) / 2`.
    #[inline]
    pub fn gap_bound(&self) -> u64 {
        let k = (2.0 / self.prob - 1.0).floor() as u64;
        k.max(1)
    }

    /// Realized connection probability `2 / (K + 1)`.
    ///
    /// Equals `prob` exactly when `2/prob - 1` is an integer; otherwise the
    /// floor in the gap bound biases the density slightly upward.
    pub fn effective_prob(&self) -> f64 {
        2.0 / (self.gap_bound() as f64 + 1.0)
    }

    /// Expected nonzero count of the realized matrix.
    pub fn expected_nnz(&self) -> f64 {
        self.n_rows as f64 * self.n_cols as f64 * self.effective_prob()
    }

    /// Persistent operator state in bytes: the scalar fields only.
    ///
    /// Constant by construction — compare with `CsrMatrix::state_bytes`,
    /// which grows with the nonzero count.
    pub fn state_bytes(&self) -> u64 {
        // n_rows, n_cols, prob, seed, dist tag + two f64 parameter slots
        8 + 8 + 8 + 8 + 1 + 16
    }
}
