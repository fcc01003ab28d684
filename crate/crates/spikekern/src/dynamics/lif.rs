use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spike::SpikeVector;

/// Leaky integrate-and-fire parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifParams {
    pub v_rest: f64,
    pub v_reset: f64,
    pub v_th: f64,
    /// Membrane time constant, ms.
    pub tau: f64,
    /// Refractory period, ms.
    pub tau_ref: f64,
    /// Input resistance multiplier.
    pub r: f64,
}

impl LifParams {
    pub fn validate(&self) -> Result<()> {
        if self.tau <= 0.0 {
            return Err(Error::InvalidParameter("LIF tau must be > 0".into()));
        }
        if self.tau_ref < 0.0 {
            return Err(Error::InvalidParameter("LIF tau_ref must be >= 0".into()));
        }
        if self.v_reset > self.v_th {
            return Err(Error::InvalidParameter(
                "LIF v_reset must not exceed v_th".into(),
            ));
        }
        Ok(())
    }
}

/// Per-neuron LIF state.
#[derive(Debug, Clone)]
pub struct LifState {
    pub v: Vec<f64>,
    /// Absolute time at which refractoriness ends, ms.
    pub ref_until: Vec<f64>,
    pub spike: SpikeVector,
}

impl LifState {
    pub fn new(v: Vec<f64>) -> Self {
        let n = v.len();
        Self {
            v,
            ref_until: vec![f64::NEG_INFINITY; n],
            spike: SpikeVector::silent(n),
        }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }
}

/// One exponential-Euler step at time `t`.
///
/// Non-refractory neurons integrate
/// `v <- v_rest + r*i + (v - v_rest - r*i) * exp(-dt/tau)`
/// (exact for the linear membrane equation with the input held over the
/// step), spike on `v > v_th` (strict), reset to `v_reset`, and become
/// refractory until `t + tau_ref`. Refractory neurons hold `v_reset` and
/// cannot spike.
pub fn lif_step(
    state: &mut LifState,
    params: &LifParams,
    input_current: &[f64],
    t: f64,
    dt: f64,
) -> Result<()> {
    if dt <= 0.0 {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    if input_current.len() != state.v.len() {
        return Err(Error::dim("lif_step input", state.v.len(), input_current.len()));
    }
    let decay = (-dt / params.tau).exp();
    for i in 0..state.v.len() {
        if t < state.ref_until[i] {
            state.v[i] = params.v_reset;
            state.spike.set(i, false);
            continue;
        }
        let drive = params.v_rest + params.r * input_current[i];
        let v = drive + (state.v[i] - drive) * decay;
        if v > params.v_th {
            state.v[i] = params.v_reset;
            state.ref_until[i] = t + params.tau_ref;
            state.spike.set(i, true);
        } else {
            state.v[i] = v;
            state.spike.set(i, false);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> LifParams {
        LifParams {
            v_rest: -60.0,
            v_reset: -60.0,
            v_th: -50.0,
            tau: 20.0,
            tau_ref: 5.0,
            r: 1.0,
        }
    }

    #[test]
    fn resting_state_is_a_fixed_point() {
        let p = params();
        let mut s = LifState::new(vec![p.v_rest; 4]);
        lif_step(&mut s, &p, &[0.0; 4], 0.0, 0.1).unwrap();
        assert!(s.v.iter().all(|&v| (v - p.v_rest).abs() < 1e-15));
        assert!(!s.spike.any());
    }

    #[test]
    fn first_spike_time_matches_closed_form() {
        let p = params();
        let dt = 0.01;
        let i_ext = 15.0; // r*i = 15 > v_th - v_rest = 10
        let t_star = -p.tau * (1.0 - (p.v_th - p.v_rest) / (p.r * i_ext)).ln();
        let mut s = LifState::new(vec![p.v_rest]);
        let mut spike_time = None;
        for step in 0..100_000 {
            let t = step as f64 * dt;
            lif_step(&mut s, &p, &[i_ext], t, dt).unwrap();
            if s.spike.get(0) {
                spike_time = Some(t + dt);
                break;
            }
        }
        let t_spike = spike_time.expect("neuron must spike");
        assert!(
            (t_spike - t_star).abs() <= dt,
            "spike at {t_spike}, closed form {t_star}"
        );
    }

    #[test]
    fn suprathreshold_entry_spikes_then_stays_silent_for_tau_ref() {
        let p = params();
        let dt = 0.1;
        let mut s = LifState::new(vec![p.v_th + 0.1]);
        lif_step(&mut s, &p, &[0.0], 0.0, dt).unwrap();
        assert!(s.spike.get(0));
        assert_eq!(s.v[0], p.v_reset);
        // Strong drive cannot make it spike during the refractory window.
        let steps_in_ref = (p.tau_ref / dt) as usize;
        for k in 1..steps_in_ref {
            let t = k as f64 * dt;
            lif_step(&mut s, &p, &[1000.0], t, dt).unwrap();
            assert!(!s.spike.get(0), "spiked at t={t} inside refractory window");
            assert_eq!(s.v[0], p.v_reset);
        }
    }

    #[test]
    fn free_decay_matches_exact_solution_for_any_partition() {
        let p = params();
        let v0 = -52.0;
        // One big step vs many small ones: exponential Euler is exact for
        // the linear equation, so both land on the analytic solution.
        let total = 7.3;
        let exact = p.v_rest + (v0 - p.v_rest) * (-total / p.tau).exp();

        let mut one = LifState::new(vec![v0]);
        lif_step(&mut one, &p, &[0.0], 0.0, total).unwrap();
        assert!((one.v[0] - exact).abs() < 1e-12);

        let mut many = LifState::new(vec![v0]);
        let n = 73;
        let dt = total / n as f64;
        let mut prev = v0;
        for k in 0..n {
            lif_step(&mut many, &p, &[0.0], k as f64 * dt, dt).unwrap();
            assert!(many.v[0] < prev, "decay must be monotone toward rest");
            prev = many.v[0];
        }
        assert!((many.v[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_dt_and_bad_lengths() {
        let p = params();
        let mut s = LifState::new(vec![p.v_rest]);
        assert!(lif_step(&mut s, &p, &[0.0], 0.0, 0.0).is_err());
        assert!(lif_step(&mut s, &p, &[0.0, 1.0], 0.0, 0.1).is_err());
    }
}
