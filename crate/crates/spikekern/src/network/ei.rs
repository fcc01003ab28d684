//! Built-in excitatory/inhibitory balance network.
//!
//! 3200·scale excitatory and 800·scale inhibitory leaky neurons, fully
//! random connectivity with probability `80 / total` so the expected
//! in-degree stays at 80 across scales. Excitatory synapses: weight 0.6,
//! tau 5 ms, reversal 0 mV. Inhibitory: weight 6.7, tau 10 ms, reversal
//! -80 mV. Every neuron receives a constant driving current of 20.

use crate::error::{Error, Result};
use crate::jitconn::WeightDist;

use super::config::{
    AlignModeCfg, CommCfg, InputCfg, InputKind, ModelCfg, MonitorCfg, MonitorSignal,
    NetworkConfig, PopulationCfg, ProjectionCfg, VInit,
};
use crate::dynamics::SynOutput;

/// How the four projections communicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EiComm {
    /// Regenerate connectivity procedurally on every step.
    JitConn,
    /// Materialize the same implied matrices to CSR at build time.
    Sparse,
}

pub const EI_WEIGHT_EXC: f64 = 0.6;
pub const EI_WEIGHT_INH: f64 = 6.7;
pub const EI_INPUT_CURRENT: f64 = 20.0;

/// Builds the EI-net config at the given scale. `scale = 1` is 4000
/// neurons with connection probability 0.02; in-degree stays at 80 as the
/// scale grows. Tiny scales that push `80 / n` past 1 clamp to full
/// connectivity with a warning.
pub fn build_ei_net(scale: f64, comm: EiComm, seed: u64) -> Result<NetworkConfig> {
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "EI net scale must be > 0, got {scale}"
        )));
    }
    let num_exc = (3200.0 * scale) as usize;
    let num_inh = (800.0 * scale) as usize;
    if num_exc == 0 || num_inh == 0 {
        return Err(Error::InvalidParameter(format!(
            "EI net scale {scale} yields an empty population"
        )));
    }
    let num = num_exc + num_inh;
    let mut p = 80.0 / num as f64;
    if p > 1.0 {
        eprintln!(
            "warning: EI net scale {scale} gives connection probability {p:.3} > 1; \
             clamping to full connectivity"
        );
        p = 1.0;
    }

    let lif = ModelCfg::Lif {
        v_rest: -60.0,
        v_reset: -60.0,
        v_th: -50.0,
        tau: 20.0,
        tau_ref: 5.0,
        r: 1.0,
    };
    let v_init = VInit::Normal {
        mean: -55.0,
        std: 2.0,
    };
    let materialize = comm == EiComm::Sparse;
    let jit = |w: f64| CommCfg::Jit {
        prob: p,
        dist: WeightDist::Homo { w },
        seed: None,
        materialize,
    };
    let proj = |pre: &str, post: &str, w: f64, tau: f64, e_rev: f64| ProjectionCfg {
        pre: pre.into(),
        post: post.into(),
        mode: AlignModeCfg::AlignPost,
        delay_steps: 0,
        syn_tau: tau,
        out: SynOutput::Coba { e_rev },
        comm: jit(w),
    };

    Ok(NetworkConfig {
        dt: 0.1,
        duration: 100.0,
        seed,
        populations: vec![
            PopulationCfg {
                id: "exc".into(),
                size: num_exc,
                v_init,
                model: lif.clone(),
            },
            PopulationCfg {
                id: "inh".into(),
                size: num_inh,
                v_init,
                model: lif,
            },
        ],
        projections: vec![
            proj("exc", "exc", EI_WEIGHT_EXC, 5.0, 0.0),
            proj("exc", "inh", EI_WEIGHT_EXC, 5.0, 0.0),
            proj("inh", "exc", EI_WEIGHT_INH, 10.0, -80.0),
            proj("inh", "inh", EI_WEIGHT_INH, 10.0, -80.0),
        ],
        inputs: vec![
            InputCfg {
                target: "exc".into(),
                kind: InputKind::Constant {
                    value: EI_INPUT_CURRENT,
                },
            },
            InputCfg {
                target: "inh".into(),
                kind: InputKind::Constant {
                    value: EI_INPUT_CURRENT,
                },
            },
        ],
        monitors: vec![
            MonitorCfg {
                target: "exc".into(),
                signal: MonitorSignal::Rate,
                indices: None,
            },
            MonitorCfg {
                target: "inh".into(),
                signal: MonitorSignal::Rate,
                indices: None,
            },
        ],
        merge_projections: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_one_is_4000_neurons_at_p_002() {
        let cfg = build_ei_net(1.0, EiComm::JitConn, 7).unwrap();
        let total: usize = cfg.populations.iter().map(|p| p.size).sum();
        assert_eq!(total, 4000);
        match &cfg.projections[0].comm {
            CommCfg::Jit { prob, .. } => assert!((prob - 0.02).abs() < 1e-15),
            _ => panic!("expected jit comm"),
        }
    }

    #[test]
    fn scale_ten_is_40000_neurons_at_p_0002() {
        let cfg = build_ei_net(10.0, EiComm::JitConn, 7).unwrap();
        let total: usize = cfg.populations.iter().map(|p| p.size).sum();
        assert_eq!(total, 40_000);
        match &cfg.projections[0].comm {
            CommCfg::Jit { prob, .. } => assert!((prob - 0.002).abs() < 1e-15),
            _ => panic!("expected jit comm"),
        }
    }

    #[test]
    fn tiny_scale_clamps_probability() {
        let cfg = build_ei_net(0.01, EiComm::JitConn, 7).unwrap();
        let total: usize = cfg.populations.iter().map(|p| p.size).sum();
        assert_eq!(total, 40);
        match &cfg.projections[0].comm {
            CommCfg::Jit { prob, .. } => assert_eq!(*prob, 1.0),
            _ => panic!("expected jit comm"),
        }
    }

    #[test]
    fn zero_population_scale_is_rejected() {
        assert!(build_ei_net(0.0001, EiComm::JitConn, 7).is_err());
        assert!(build_ei_net(-1.0, EiComm::JitConn, 7).is_err());
    }
}
