//! Event-driven kernels for spiking neural network simulation.
//!
//! The crate is organized around two operator families:
//!
//! * [`sparse`] — CSR connectivity storage plus dense, sparse, and
//!   event-driven matrix-vector products. The event-driven product touches
//!   only the entries selected by active spikes.
//! * [`jitconn`] — matrix-vector products against fixed-probability random
//!   matrices that are regenerated procedurally from a few scalars on every
//!   call. Connectivity is never stored, so operator state is O(1) in the
//!   matrix size.
//!
//! On top of the kernels sit [`dynamics`] (LIF/GIF neurons and exponential
//! synapses), [`projections`] (delay lines and the pre/post-aligned synapse
//! state reduction with automatic merging), [`network`] (declarative network
//! construction and the step-driven engine), and [`reservoir`] (an echo-state
//! network trained online with recursive least squares or offline with ridge
//! regression).
//!
//! [`bench`] and [`cli`] provide the microbenchmark harness and the command
//! line entry point used by the `spikekern` binary. Runnable walkthroughs of
//! each capability live in the crate's `examples/` directory.

pub mod bench;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod jitconn;
pub mod network;
pub mod projections;
pub mod reservoir;
pub mod rng;
pub mod sparse;
pub mod spike;

pub use error::{Error, Result};
pub use spike::SpikeVector;
