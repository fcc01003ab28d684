use crate::error::{Error, Result};
use crate::jitconn::{jitconn_event_matvec, jitconn_matvec, JitConnSpec};
use crate::sparse::{csrmv, event_csrmv, CsrMatrix, DenseMatrix};
use crate::spike::SpikeVector;

/// Communication matrix of a projection, stored pre-major: rows index the
/// presynaptic population, columns the postsynaptic one. Projection
/// products therefore run in the transpose (scatter) orientation.
#[derive(Debug, Clone)]
pub enum Comm {
    Dense(DenseMatrix),
    Sparse(CsrMatrix),
    JitConn(JitConnSpec),
}

impl Comm {
    pub fn pre_size(&self) -> usize {
        match self {
            Comm::Dense(m) => m.n_rows(),
            Comm::Sparse(m) => m.n_rows(),
            Comm::JitConn(s) => s.n_rows,
        }
    }

    pub fn post_size(&self) -> usize {
        match self {
            Comm::Dense(m) => m.n_cols(),
            Comm::Sparse(m) => m.n_cols(),
            Comm::JitConn(s) => s.n_cols,
        }
    }

    /// Event path: postsynaptic accumulation of presynaptic spikes
    /// (`Mᵀ · cast(events)`, computed event-driven where the format allows).
    pub fn apply_events(&self, events: &SpikeVector) -> Result<Vec<f64>> {
        match self {
            Comm::Dense(m) => {
                if events.len() != m.n_rows() {
                    return Err(Error::dim("Comm::apply_events", m.n_rows(), events.len()));
                }
                let mut y = vec![0.0; m.n_cols()];
                for r in events.iter_active() {
                    for (c, out) in y.iter_mut().enumerate() {
                        *out += m.get(r, c);
                    }
                }
                Ok(y)
            }
            Comm::Sparse(m) => event_csrmv(m, events, true),
            Comm::JitConn(s) => jitconn_event_matvec(s, events, true),
        }
    }

    /// Real-valued path used by pre-aligned projections: `Mᵀ · trace`.
    pub fn apply(&self, trace: &[f64]) -> Result<Vec<f64>> {
        match self {
            Comm::Dense(m) => {
                if trace.len() != m.n_rows() {
                    return Err(Error::dim("Comm::apply", m.n_rows(), trace.len()));
                }
                let mut y = vec![0.0; m.n_cols()];
                for (r, &x) in trace.iter().enumerate() {
                    let row = m.row(r);
                    for (out, &w) in y.iter_mut().zip(row) {
                        *out += w * x;
                    }
                }
                Ok(y)
            }
            Comm::Sparse(m) => csrmv(m, trace, true),
            Comm::JitConn(s) => jitconn_matvec(s, trace, true),
        }
    }

    /// Analytic storage footprint of the connectivity itself.
    pub fn state_bytes(&self) -> u64 {
        match self {
            Comm::Dense(m) => m.state_bytes(),
            Comm::Sparse(m) => m.state_bytes(),
            Comm::JitConn(s) => s.state_bytes(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jitconn::materialize;
    use crate::jitconn::WeightDist;

    #[test]
    fn event_and_real_paths_agree_across_formats() {
        let spec = JitConnSpec::new(
            12,
            9,
            0.4,
            WeightDist::Uniform {
                low: 0.1,
                high: 1.0,
            },
            42,
        )
        .unwrap();
        let sparse = materialize(&spec).unwrap();
        let dense = sparse.densify();
        let comms = [
            Comm::Dense(dense),
            Comm::Sparse(sparse),
            Comm::JitConn(spec),
        ];
        let events = SpikeVector::from_active(12, &[0, 3, 11]).unwrap();
        let cast = events.to_f64();
        let reference = comms[0].apply_events(&events).unwrap();
        for comm in &comms {
            let ev = comm.apply_events(&events).unwrap();
            let real = comm.apply(&cast).unwrap();
            for ((a, b), c) in ev.iter().zip(&real).zip(&reference) {
                assert!((a - b).abs() < 1e-12);
                assert!((a - c).abs() < 1e-12);
            }
        }
    }
}
