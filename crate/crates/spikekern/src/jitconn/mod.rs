//! Matrix-vector products with procedurally regenerated connectivity.
//!
//! A [`JitConnSpec`] describes a fixed-probability random matrix with a few
//! scalars (shape, probability, weight distribution, seed). Products
//! regenerate row contents on the fly: the distance between consecutive
//! targets within a row is drawn uniformly from `[1, K]` with
//! `K = max(1, floor(2/p - 1))`, whose mean `(K + 1)/2` realizes the
//! requested density, and weights are drawn per target from the same
//! counter-based stream. Nothing about the matrix is ever stored, so
//! operator state does not grow with the matrix.

mod matvec;
mod sampler;
mod spec;

pub use matvec::{
    jitconn_event_matvec, jitconn_event_matvec_probed, jitconn_matvec, jitconn_matvec_par,
    materialize, row_targets, RowTargets, MATERIALIZE_NNZ_LIMIT,
};
pub use sampler::{geometric_gap, RowSampler};
pub use spec::{JitConnSpec, WeightDist};
