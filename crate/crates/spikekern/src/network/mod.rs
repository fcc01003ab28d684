//! Declarative network construction and the step-driven simulation engine.
//!
//! A [`NetworkConfig`] lists populations, projections, inputs, and
//! monitors; [`simulate`] builds and runs it. Per-step order: read delayed
//! spikes, decay shared synapse states once, projection accumulation and
//! currents, neuron updates, delay writes, monitors. Every random draw
//! derives from the master seed, so a config determines its raster
//! bit-exactly.

mod config;
mod ei;
mod engine;
mod output;

pub use config::{
    AlignModeCfg, CommCfg, InputCfg, InputKind, ModelCfg, MonitorCfg, MonitorSignal,
    NetworkConfig, PopulationCfg, ProjectionCfg, Sampled, VInit,
};
pub use ei::{build_ei_net, EiComm, EI_INPUT_CURRENT, EI_WEIGHT_EXC, EI_WEIGHT_INH};
pub use engine::{
    simulate, MonitorTrace, Network, PopModel, Population, RunManifest, SimulationResult,
    StateBytes, Timing,
};
pub use output::{manifest_json, write_monitor_csv, write_raster};
