//! CSR connectivity storage and the dense / sparse / event-driven
//! matrix-vector product family.
//!
//! Matrices are stored pre-major for projection use: row `i` lists the
//! targets of source neuron `i`. The scatter orientation (`transpose =
//! true`) therefore computes postsynaptic accumulation from presynaptic
//! events; the gather orientation (`transpose = false`) computes
//! `y = M v` directly.

mod csr;
mod io;
mod matvec;
pub mod probe;

pub use csr::{CsrMatrix, DenseMatrix, Weights};
pub use io::{load_edge_list, read_csr, write_csr, CSR_MAGIC};
pub use matvec::{
    csrmv, csrmv_probed, dense_matvec, event_csrmv, event_csrmv_par, event_csrmv_probed,
    event_csrmv_weight_grad, WeightGrad,
};
