//! Declarative network description.
//!
//! Configs are a key-value tree serialized as TOML with sections `dt`,
//! `duration`, `seed`, `populations[]`, `projections[]`, `inputs[]`, and
//! `monitors[]`. The schema is documented in the README and kept stable.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::SynOutput;
use crate::error::{Error, Result};
use crate::jitconn::WeightDist;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Step size, ms.
    pub dt: f64,
    /// Simulated time, ms.
    pub duration: f64,
    /// Master seed; every random draw in the run derives from it.
    pub seed: u64,
    pub populations: Vec<PopulationCfg>,
    #[serde(default)]
    pub projections: Vec<ProjectionCfg>,
    #[serde(default)]
    pub inputs: Vec<InputCfg>,
    #[serde(default)]
    pub monitors: Vec<MonitorCfg>,
    /// Share synapse state across projections with identical dynamics.
    /// Disabling keeps one state per projection (for comparison runs).
    #[serde(default = "default_true")]
    pub merge_projections: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PopulationCfg {
    pub id: String,
    pub size: usize,
    pub v_init: VInit,
    #[serde(flatten)]
    pub model: ModelCfg,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VInit {
    Const { value: f64 },
    Normal { mean: f64, std: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelCfg {
    Lif {
        v_rest: f64,
        v_reset: f64,
        v_th: f64,
        tau: f64,
        tau_ref: f64,
        #[serde(default = "default_r")]
        r: f64,
    },
    Gif {
        a1: f64,
        a2: f64,
        tau_i1: f64,
        tau_i2: Sampled,
        tau_v: f64,
        v_rest: f64,
        v_th: f64,
        #[serde(default = "default_r")]
        r: f64,
    },
}

fn default_r() -> f64 {
    1.0
}

/// A per-neuron parameter: one value for all, or sampled uniformly from
/// the master seed stream.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampled {
    Const { value: f64 },
    Uniform { low: f64, high: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionCfg {
    pub pre: String,
    pub post: String,
    pub mode: AlignModeCfg,
    #[serde(default)]
    pub delay_steps: usize,
    /// Synaptic decay time constant, ms.
    pub syn_tau: f64,
    pub out: SynOutput,
    pub comm: CommCfg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignModeCfg {
    AlignPre,
    AlignPost,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommCfg {
    /// Procedurally regenerated connectivity. `seed` defaults to a value
    /// derived from the master seed and the projection index. With
    /// `materialize = true` the implied matrix is expanded to CSR at build
    /// time (identical pattern, stored explicitly).
    Jit {
        prob: f64,
        dist: WeightDist,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        materialize: bool,
    },
    /// Explicit sparse connectivity, inline or from a file. `path` accepts
    /// the binary CSR container or a text edge list.
    Sparse {
        #[serde(default)]
        path: Option<String>,
        #[serde(default)]
        edges: Option<Vec<(usize, usize, f64)>>,
    },
    /// Explicit dense connectivity (row-major, pre x post).
    Dense { rows: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputCfg {
    pub target: String,
    #[serde(flatten)]
    pub kind: InputKind,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputKind {
    /// Constant current into every neuron of the target.
    Constant { value: f64 },
    /// Independent per-neuron Bernoulli(rate * dt) spike train injected as
    /// a current pulse of `amplitude` (default 1) on spike steps.
    Poisson {
        rate_hz: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
}

fn default_amplitude() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonitorCfg {
    pub target: String,
    pub signal: MonitorSignal,
    /// Neuron subset for `v` monitors; defaults to the whole population.
    #[serde(default)]
    pub indices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonitorSignal {
    Spikes,
    V,
    Rate,
}

impl NetworkConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: NetworkConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("TOML parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn population_index(&self, id: &str) -> Option<usize> {
        self.populations.iter().position(|p| p.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dt <= 0.0 {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.duration < 0.0 {
            return Err(Error::InvalidConfig("duration must be >= 0".into()));
        }
        let mut seen = HashSet::new();
        for p in &self.populations {
            if !seen.insert(p.id.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate population id '{}'", p.id)));
            }
            if p.size == 0 {
                return Err(Error::InvalidConfig(format!("population '{}' has size 0", p.id)));
            }
            match &p.model {
                ModelCfg::Lif { tau, tau_ref, v_reset, v_th, .. } => {
                    if *tau <= 0.0 || *tau_ref < 0.0 || v_reset > v_th {
                        return Err(Error::InvalidConfig(format!(
                            "population '{}' has invalid LIF parameters",
                            p.id
                        )));
                    }
                }
                ModelCfg::Gif { tau_i1, tau_i2, tau_v, .. } => {
                    if *tau_i1 <= 0.0 || *tau_v <= 0.0 {
                        return Err(Error::InvalidConfig(format!(
                            "population '{}' has invalid GIF time constants",
                            p.id
                        )));
                    }
                    if let Sampled::Uniform { low, high } = tau_i2 {
                        if *low <= 0.0 || low > high {
                            return Err(Error::InvalidConfig(format!(
                                "population '{}' has invalid tau_i2 range",
                                p.id
                            )));
                        }
                    }
                }
            }
            if let VInit::Normal { std, .. } = p.v_init {
                if std < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "population '{}' has negative v_init std",
                        p.id
                    )));
                }
            }
        }
        for (j, proj) in self.projections.iter().enumerate() {
            for id in [&proj.pre, &proj.post] {
                if self.population_index(id).is_none() {
                    return Err(Error::InvalidConfig(format!(
                        "projection {j} references unknown population '{id}'"
                    )));
                }
            }
            if proj.syn_tau <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "projection {j} has non-positive syn_tau"
                )));
            }
            if let CommCfg::Jit { prob, .. } = &proj.comm {
                if !(*prob > 0.0 && *prob <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "projection {j} has connection probability {prob} outside (0, 1]"
                    )));
                }
            }
            if let CommCfg::Sparse { path, edges } = &proj.comm {
                if path.is_some() == edges.is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "projection {j}: sparse comm needs exactly one of path/edges"
                    )));
                }
            }
        }
        for inp in &self.inputs {
            if self.population_index(&inp.target).is_none() {
                return Err(Error::InvalidConfig(format!(
                    "input targets unknown population '{}'",
                    inp.target
                )));
            }
            if let InputKind::Poisson { rate_hz, .. } = inp.kind {
                if rate_hz < 0.0 {
                    return Err(Error::InvalidConfig("negative Poisson rate".into()));
                }
            }
        }
        for mon in &self.monitors {
            let Some(idx) = self.population_index(&mon.target) else {
                return Err(Error::InvalidConfig(format!(
                    "monitor targets unknown population '{}'",
                    mon.target
                )));
            };
            if let Some(indices) = &mon.indices {
                let size = self.populations[idx].size;
                if indices.iter().any(|&i| i >= size) {
                    return Err(Error::InvalidConfig(format!(
                        "monitor on '{}' selects out-of-range neurons",
                        mon.target
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
dt = 0.1
duration = 10.0
seed = 7

[[populations]]
id = "a"
size = 8
v_init = { kind = "normal", mean = -55.0, std = 2.0 }
model = "lif"
v_rest = -60.0
v_reset = -60.0
v_th = -50.0
tau = 20.0
tau_ref = 5.0

[[populations]]
id = "b"
size = 4
v_init = { kind = "const", value = 0.0 }
model = "gif"
a1 = 0.0
a2 = -0.6
tau_i1 = 10.0
tau_i2 = { kind = "uniform", low = 100.0, high = 3000.0 }
tau_v = 25.0
v_rest = 0.0
v_th = 16.0

[[projections]]
pre = "a"
post = "b"
mode = "align_post"
delay_steps = 2
syn_tau = 5.0
out = { kind = "coba", e_rev = 0.0 }
comm = { kind = "jit", prob = 0.5, dist = { kind = "homo", w = 0.6 } }

[[inputs]]
target = "a"
kind = "poisson"
rate_hz = 20.0

[[monitors]]
target = "a"
signal = "rate"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = NetworkConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.populations.len(), 2);
        assert_eq!(cfg.projections.len(), 1);
        assert!(cfg.merge_projections);
        let text = cfg.to_toml_string();
        let back = NetworkConfig::from_toml_str(&text).unwrap();
        assert_eq!(back.populations[1].id, "b");
        assert!(matches!(back.populations[1].model, ModelCfg::Gif { .. }));
    }

    #[test]
    fn rejects_unknown_population_reference() {
        let broken = SAMPLE.replace("post = \"b\"", "post = \"zzz\"");
        assert!(NetworkConfig::from_toml_str(&broken).is_err());
    }

    #[test]
    fn rejects_bad_probability() {
        let broken = SAMPLE.replace("prob = 0.5", "prob = 1.5");
        assert!(NetworkConfig::from_toml_str(&broken).is_err());
    }

    #[test]
    fn rejects_nonpositive_dt() {
        let broken = SAMPLE.replace("dt = 0.1", "dt = 0.0");
        assert!(NetworkConfig::from_toml_str(&broken).is_err());
    }
}
