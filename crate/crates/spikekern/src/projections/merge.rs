//! Automatic sharing of synapse state across projections.
//!
//! Projections whose dynamics are indistinguishable share one trace array:
//! post-aligned projections merge on (post population, tau, output model),
//! pre-aligned ones on (pre population, delay, tau). Merging is exact for
//! exponential synapses — the shared trace is the sum the separate traces
//! would have produced.

use std::collections::HashMap;

use crate::dynamics::{expon_decay, ExponSynState, SynOutput};
use crate::error::{Error, Result};

/// Hashable identity of the output model (bit-exact parameter match).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutKey {
    Coba { e_rev_bits: u64 },
    Cuba,
}

impl From<SynOutput> for OutKey {
    fn from(out: SynOutput) -> Self {
        match out {
            SynOutput::Coba { e_rev } => OutKey::Coba {
                e_rev_bits: e_rev.to_bits(),
            },
            SynOutput::Cuba => OutKey::Cuba,
        }
    }
}

/// Merge identity of a projection's synapse state. Time constants compare
/// by bit pattern: parameters that parse to the same double share state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MergeKey {
    AlignPost {
        post: usize,
        tau_bits: u64,
        out: OutKey,
    },
    AlignPre {
        pre: usize,
        delay_steps: usize,
        tau_bits: u64,
    },
}

/// Handle into the registry's state table.
pub type SynHandle = usize;

/// Owns every shared synapse trace in a network and drives their decay
/// exactly once per step, no matter how many projections share each state.
#[derive(Debug, Default)]
pub struct MergeRegistry {
    by_key: HashMap<MergeKey, SynHandle>,
    states: Vec<ExponSynState>,
    decay_calls: u64,
}

impl MergeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the handle for `key`, creating the state on first sight.
    /// The `created` flag is false on reuse. Reuse with a mismatched size
    /// is a merge-contract violation.
    pub fn insert(&mut self, key: MergeKey, size: usize, tau: f64) -> Result<(SynHandle, bool)> {
        if tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "synapse tau must be > 0, got {tau}"
            )));
        }
        if let Some(&h) = self.by_key.get(&key) {
            let state = &self.states[h];
            if state.len() != size {
                return Err(Error::MergeContract(format!(
                    "projections share {key:?} but disagree on state size: {} vs {size}",
                    state.len()
                )));
            }
            debug_assert_eq!(state.tau_decay.to_bits(), tau.to_bits());
            return Ok((h, false));
        }
        let h = self.states.len();
        self.states.push(ExponSynState::new(size, tau));
        self.by_key.insert(key, h);
        Ok((h, true))
    }

    /// Creates a state that is never shared (merging disabled): no key is
    /// registered, so later inserts cannot find it.
    pub fn insert_unshared(&mut self, size: usize, tau: f64) -> Result<SynHandle> {
        if tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "synapse tau must be > 0, got {tau}"
            )));
        }
        let h = self.states.len();
        self.states.push(ExponSynState::new(size, tau));
        Ok(h)
    }

    pub fn state(&self, h: SynHandle) -> &ExponSynState {
        &self.states[h]
    }

    pub fn state_mut(&mut self, h: SynHandle) -> &mut ExponSynState {
        &mut self.states[h]
    }

    /// Decays every shared state once. Called by the scheduler at the start
    /// of each step; projections themselves never decay shared state.
    pub fn decay_all(&mut self, dt: f64) {
        for s in &mut self.states {
            expon_decay(s, dt);
        }
        self.decay_calls += 1;
    }

    /// Number of decay sweeps so far (one per step when driven correctly).
    pub fn decay_calls(&self) -> u64 {
        self.decay_calls
    }

    pub fn group_count(&self) -> usize {
        self.states.len()
    }

    /// Total synapse scalars across all shared states.
    pub fn total_scalars(&self) -> usize {
        self.states.iter().map(ExponSynState::len).sum()
    }

    pub fn state_bytes(&self) -> u64 {
        8 * self.total_scalars() as u64
    }

    pub fn handles(&self) -> impl Iterator<Item = SynHandle> {
        0..self.states.len()
    }
}
