//! Echo-state reservoir with regenerated weights and readout training.
//!
//! The reservoir state updates as
//! `x(t) = (1 - alpha) x(t-1) + alpha tanh(W_in u(t) + W_rec x(t-1))`
//! with both weight matrices served by the JIT connectivity kernels: the
//! seeds and distribution parameters in [`ReservoirParams`] are the entire
//! persistent weight storage. The linear readout trains online with
//! recursive least squares ([`force_update`]) or offline with
//! [`ridge_fit`]; with zero initial weights the two coincide (RLS with
//! `P0 = I/delta` solves ridge with `lambda = delta` exactly).

mod esn;
mod ridge;
mod rls;
mod tasks;

pub use esn::{readout, reservoir_step, ReservoirParams, ReservoirState};
pub use ridge::ridge_fit;
pub use rls::{force_update, RlsState};
pub use tasks::{nrmse, sine_target, train_memory, train_sine, TaskOutcome, TrainMethod};
