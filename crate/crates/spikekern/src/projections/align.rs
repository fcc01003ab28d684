use crate::dynamics::{expon_decay, expon_increment, syn_output, ExponSynState, SynOutput};
use crate::error::{Error, Result};
use crate::spike::SpikeVector;

use super::comm::Comm;
use super::merge::{MergeKey, OutKey};

/// Which population the projection's synapse state aligns with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    /// State sized by the presynaptic population; weights applied by the
    /// communication step on the real-valued trace.
    AlignPre,
    /// State sized by the postsynaptic population; weights enter through
    /// the event-driven communication step.
    AlignPost,
}

/// One synaptic pathway between two populations.
#[derive(Debug, Clone)]
pub struct ProjectionSpec {
    pub pre: usize,
    pub post: usize,
    pub comm: Comm,
    pub delay_steps: usize,
    /// Synaptic decay time constant, ms, homogeneous across the projection.
    pub syn_tau: f64,
    pub out: SynOutput,
    pub mode: AlignMode,
}

impl ProjectionSpec {
    /// Checks communication shape against the population sizes.
    pub fn validate(&self, pre_size: usize, post_size: usize) -> Result<()> {
        if self.syn_tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "projection syn_tau must be > 0, got {}",
                self.syn_tau
            )));
        }
        if self.comm.pre_size() != pre_size {
            return Err(Error::dim(
                "projection comm rows",
                pre_size,
                self.comm.pre_size(),
            ));
        }
        if self.comm.post_size() != post_size {
            return Err(Error::dim(
                "projection comm cols",
                post_size,
                self.comm.post_size(),
            ));
        }
        Ok(())
    }

    pub fn merge_key(&self) -> MergeKey {
        match self.mode {
            AlignMode::AlignPost => MergeKey::AlignPost {
                post: self.post,
                tau_bits: self.syn_tau.to_bits(),
                out: OutKey::from(self.out),
            },
            AlignMode::AlignPre => MergeKey::AlignPre {
                pre: self.pre,
                delay_steps: self.delay_steps,
                tau_bits: self.syn_tau.to_bits(),
            },
        }
    }

    /// Length of the shared state this projection uses.
    pub fn shared_len(&self) -> usize {
        match self.mode {
            AlignMode::AlignPost => self.comm.post_size(),
            AlignMode::AlignPre => self.comm.pre_size(),
        }
    }
}

fn check_shared(proj: &ProjectionSpec, shared: &ExponSynState) -> Result<()> {
    if shared.len() != proj.shared_len() {
        return Err(Error::dim(
            "projection shared state",
            proj.shared_len(),
            shared.len(),
        ));
    }
    if shared.tau_decay.to_bits() != proj.syn_tau.to_bits() {
        return Err(Error::MergeContract(format!(
            "projection tau {} does not match shared state tau {}",
            proj.syn_tau, shared.tau_decay
        )));
    }
    Ok(())
}

/// Post-aligned accumulation: event communication of the delayed spikes,
/// added onto the shared post-sized trace. Decay is not performed here —
/// the scheduler decays each shared state exactly once per step.
pub fn align_post_accumulate(
    proj: &ProjectionSpec,
    shared: &mut ExponSynState,
    delayed_spikes: &SpikeVector,
) -> Result<()> {
    check_shared(proj, shared)?;
    let increments = proj.comm.apply_events(delayed_spikes)?;
    expon_increment(shared, &increments)
}

/// Pre-aligned accumulation: unit increment per delayed presynaptic spike
/// on the shared pre-sized trace. Shared across every projection with the
/// same (pre, delay, tau), so the caller invokes it once per shared state.
pub fn align_pre_accumulate(
    shared: &mut ExponSynState,
    delayed_spikes: &SpikeVector,
) -> Result<()> {
    if delayed_spikes.len() != shared.len() {
        return Err(Error::dim(
            "align_pre_accumulate",
            shared.len(),
            delayed_spikes.len(),
        ));
    }
    for i in delayed_spikes.iter_active() {
        shared.g[i] += 1.0;
    }
    Ok(())
}

/// Output current of a pre-aligned projection: communicate the real-valued
/// pre trace, then apply the synaptic output model.
pub fn align_pre_output(
    proj: &ProjectionSpec,
    shared: &ExponSynState,
    post_v: &[f64],
) -> Result<Vec<f64>> {
    check_shared(proj, shared)?;
    let g_post = proj.comm.apply(&shared.g)?;
    syn_output(&g_post, post_v, proj.out)
}

/// Complete single-projection post-aligned step: decay once, accumulate,
/// output. For a projection that owns its state exclusively; networks use
/// the registry-driven phases instead.
pub fn align_post_step(
    proj: &ProjectionSpec,
    shared: &mut ExponSynState,
    delayed_spikes: &SpikeVector,
    post_v: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    check_shared(proj, shared)?;
    expon_decay(shared, dt);
    align_post_accumulate(proj, shared, delayed_spikes)?;
    syn_output(&shared.g, post_v, proj.out)
}

/// Complete single-projection pre-aligned step; see [`align_post_step`].
pub fn align_pre_step(
    proj: &ProjectionSpec,
    shared: &mut ExponSynState,
    delayed_spikes: &SpikeVector,
    post_v: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    check_shared(proj, shared)?;
    expon_decay(shared, dt);
    align_pre_accumulate(shared, delayed_spikes)?;
    align_pre_output(proj, shared, post_v)
}
