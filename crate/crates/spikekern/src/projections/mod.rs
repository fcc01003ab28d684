//! Delay lines and reduced synaptic projections.
//!
//! A projection decomposes into delay, communication, synaptic dynamics,
//! and output. For exponential synapses with one time constant per
//! projection, the synapse state collapses to one trace per presynaptic
//! neuron (pre-aligned) or per postsynaptic neuron (post-aligned) — an
//! exact reduction, not an approximation. Projections with identical
//! dynamics additionally share a single state array via [`MergeRegistry`].

mod align;
mod comm;
mod delay;
mod merge;

pub use align::{
    align_post_accumulate, align_post_step, align_pre_accumulate, align_pre_output,
    align_pre_step, AlignMode, ProjectionSpec,
};
pub use comm::Comm;
pub use delay::DelayBuffer;
pub use merge::{MergeKey, MergeRegistry, OutKey, SynHandle};
