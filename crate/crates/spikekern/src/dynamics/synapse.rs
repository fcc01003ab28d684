use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponentially decaying conductance trace, one value per target neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponSynState {
    pub g: Vec<f64>,
    /// Decay time constant, ms.
    pub tau_decay: f64,
}

impl ExponSynState {
    pub fn new(len: usize, tau_decay: f64) -> Self {
        Self {
            g: vec![0.0; len],
            tau_decay,
        }
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }
}

/// Multiplies the trace by `exp(-dt/tau)`, the exact inter-spike solution.
pub fn expon_decay(state: &mut ExponSynState, dt: f64) {
    let factor = (-dt / state.tau_decay).exp();
    for g in &mut state.g {
        *g *= factor;
    }
}

/// Adds per-target increments (the output of a communication kernel applied
/// to spikes, already carrying the synaptic weights).
pub fn expon_increment(state: &mut ExponSynState, increments: &[f64]) -> Result<()> {
    if increments.len() != state.g.len() {
        return Err(Error::dim("expon_increment", state.g.len(), increments.len()));
    }
    for (g, inc) in state.g.iter_mut().zip(increments) {
        *g += inc;
    }
    Ok(())
}

/// Synaptic output model: how a conductance becomes a current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynOutput {
    /// Conductance-based: `i = g * (e_rev - v)`.
    Coba { e_rev: f64 },
    /// Current-based: `i = g`.
    Cuba,
}

/// Converts conductances to currents given the postsynaptic voltages.
pub fn syn_output(g: &[f64], v: &[f64], out: SynOutput) -> Result<Vec<f64>> {
    match out {
        SynOutput::Coba { e_rev } => {
            if g.len() != v.len() {
                return Err(Error::dim("syn_output", g.len(), v.len()));
            }
            Ok(g.iter().zip(v).map(|(gi, vi)| gi * (e_rev - vi)).collect())
        }
        SynOutput::Cuba => Ok(g.to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_one_tau_is_inverse_e() {
        let mut s = ExponSynState {
            g: vec![1.0],
            tau_decay: 5.0,
        };
        expon_decay(&mut s, 5.0);
        assert!((s.g[0] - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn vanishing_step_leaves_trace_unchanged() {
        let mut s = ExponSynState {
            g: vec![1.0],
            tau_decay: 5.0,
        };
        expon_decay(&mut s, 1e-6);
        assert!((s.g[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn chained_decays_equal_single_decay() {
        let mut chained = ExponSynState {
            g: vec![2.0],
            tau_decay: 7.0,
        };
        for _ in 0..100 {
            expon_decay(&mut chained, 0.13);
        }
        let mut single = ExponSynState {
            g: vec![2.0],
            tau_decay: 7.0,
        };
        expon_decay(&mut single, 13.0);
        assert!(
            (chained.g[0] - single.g[0]).abs() <= 1e-12 * single.g[0].abs(),
            "{} vs {}",
            chained.g[0],
            single.g[0]
        );
    }

    #[test]
    fn increments_add_and_compose() {
        let mut s = ExponSynState::new(3, 5.0);
        expon_increment(&mut s, &[0.6, 0.0, 0.6]).unwrap();
        assert_eq!(s.g, vec![0.6, 0.0, 0.6]);
        // increment(a) then increment(b) == increment(a + b); exactly
        // representable values so the check can be exact.
        let mut ab = ExponSynState::new(2, 5.0);
        expon_increment(&mut ab, &[0.125, 0.25]).unwrap();
        expon_increment(&mut ab, &[0.375, 0.5]).unwrap();
        let mut sum = ExponSynState::new(2, 5.0);
        expon_increment(&mut sum, &[0.5, 0.75]).unwrap();
        assert_eq!(ab.g, sum.g);
        assert!(expon_increment(&mut sum, &[1.0]).is_err());
    }

    #[test]
    fn recursive_trace_matches_per_spike_exponential_sum() {
        // Feeding a spike train through the decay+increment recursion equals
        // the explicit sum of exp(-(t - t_k)/tau) over past spikes.
        let tau = 5.0;
        let dt = 0.1;
        let steps = 10_000;
        let mut s = ExponSynState::new(1, tau);
        let mut spike_times: Vec<f64> = Vec::new();
        let mut rng = crate::rng::SplitMix64::new(8);
        for k in 0..steps {
            let t = (k + 1) as f64 * dt;
            expon_decay(&mut s, dt);
            if rng.next_f64() < 0.02 {
                expon_increment(&mut s, &[1.0]).unwrap();
                spike_times.push(t);
            }
            let explicit: f64 = spike_times.iter().map(|tk| (-(t - tk) / tau).exp()).sum();
            assert!(
                (s.g[0] - explicit).abs() < 1e-10,
                "step {k}: {} vs {explicit}",
                s.g[0]
            );
        }
    }

    #[test]
    fn coba_output_signs_and_reversal() {
        // At the reversal potential the current vanishes.
        let i = syn_output(&[0.6], &[0.0], SynOutput::Coba { e_rev: 0.0 }).unwrap();
        assert_eq!(i[0], 0.0);
        // Excitatory: E = 0 mV, V = -60 mV, g = 0.6 -> 36.
        let i = syn_output(&[0.6], &[-60.0], SynOutput::Coba { e_rev: 0.0 }).unwrap();
        assert!((i[0] - 36.0).abs() < 1e-12);
        // Inhibitory: E = -80 mV below V = -60 mV gives negative current.
        let i = syn_output(&[0.5], &[-60.0], SynOutput::Coba { e_rev: -80.0 }).unwrap();
        assert!(i[0] < 0.0);
        // Current-based output passes the conductance through.
        let i = syn_output(&[0.25, 0.5], &[-60.0, -50.0], SynOutput::Cuba).unwrap();
        assert_eq!(i, vec![0.25, 0.5]);
    }
}
