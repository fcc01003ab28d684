//! Per-population neuron and synapse state updates.
//!
//! All linear subsystems advance by exponential Euler — multiplication with
//! `exp(-dt/tau)` factors — which solves the decay exactly at step
//! boundaries. Units are mV and ms with a dimensionless resistance
//! multiplier: inputs carry whatever units make `r * current` a voltage.

mod gif;
mod lif;
mod surrogate;
mod synapse;

pub use gif::{gif_step, GifParams, GifState};
pub use lif::{lif_step, LifParams, LifState};
pub use surrogate::surrogate_relu_grad;
pub use synapse::{expon_decay, expon_increment, syn_output, ExponSynState, SynOutput};
