use std::time::Instant;

use serde::Serialize;

use crate::dynamics::{
    gif_step, lif_step, syn_output, GifParams, GifState, LifParams, LifState, SynOutput,
};
use crate::error::{Error, Result};
use crate::jitconn::{materialize, JitConnSpec};
use crate::projections::{
    align_post_accumulate, align_pre_accumulate, align_pre_output, AlignMode, Comm, DelayBuffer,
    MergeRegistry, ProjectionSpec, SynHandle,
};
use crate::rng::{derive_seed, SplitMix64};
use crate::sparse::{load_edge_list, read_csr, CsrMatrix, DenseMatrix};
use crate::spike::SpikeVector;

use super::config::{
    AlignModeCfg, CommCfg, InputKind, ModelCfg, MonitorCfg, MonitorSignal, NetworkConfig, Sampled,
    VInit,
};

// Seed derivation slots: population k -> k, projection j -> PROJ_SLOT + j,
// input i -> INPUT_SLOT + i. Recorded in the run manifest.
const PROJ_SLOT: u64 = 1 << 32;
const INPUT_SLOT: u64 = 2 << 32;

/// One population's model, parameters, and live state.
pub enum PopModel {
    Lif { params: LifParams, state: LifState },
    Gif { params: GifParams, state: GifState },
}

pub struct Population {
    pub id: String,
    /// Base of this population's global neuron ids.
    pub offset: u32,
    pub model: PopModel,
}

impl Population {
    pub fn len(&self) -> usize {
        match &self.model {
            PopModel::Lif { state, .. } => state.len(),
            PopModel::Gif { state, .. } => state.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn v(&self) -> &[f64] {
        match &self.model {
            PopModel::Lif { state, .. } => &state.v,
            PopModel::Gif { state, .. } => &state.v,
        }
    }

    pub fn spike(&self) -> &SpikeVector {
        match &self.model {
            PopModel::Lif { state, .. } => &state.spike,
            PopModel::Gif { state, .. } => &state.spike,
        }
    }

    fn step(&mut self, input: &[f64], t: f64, dt: f64) -> Result<()> {
        match &mut self.model {
            PopModel::Lif { params, state } => lif_step(state, params, input, t, dt),
            PopModel::Gif { params, state } => gif_step(state, params, input, dt),
        }
    }

    /// Dynamical state bytes: doubles plus one byte per spike flag.
    fn state_bytes(&self) -> u64 {
        let n = self.len() as u64;
        match &self.model {
            PopModel::Lif { .. } => n * (8 + 8 + 1),
            PopModel::Gif { .. } => n * (8 + 8 + 8 + 1),
        }
    }
}

struct BuiltProjection {
    spec: ProjectionSpec,
    handle: SynHandle,
}

struct BuiltInput {
    target: usize,
    kind: InputKind,
    rng: SplitMix64,
}

struct BuiltMonitor {
    target: usize,
    signal: MonitorSignal,
    indices: Vec<usize>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

/// Per-phase wall-clock of a run, nanoseconds.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timing {
    pub build_ns: u64,
    pub run_ns: u64,
    pub projection_ns: u64,
    pub neuron_ns: u64,
    pub monitor_ns: u64,
}

/// Analytic state accounting, bytes per component.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StateBytes {
    pub neuron: u64,
    pub synapse: u64,
    pub comm: u64,
    pub delay: u64,
}

impl StateBytes {
    pub fn total(&self) -> u64 {
        self.neuron + self.synapse + self.comm + self.delay
    }
}

/// Resolved seeds and derived quantities of a run, serializable to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub master_seed: u64,
    pub dt: f64,
    pub duration: f64,
    pub steps: u64,
    pub merge_projections: bool,
    pub merge_groups: usize,
    pub synapse_scalars: usize,
    pub populations: Vec<PopManifest>,
    pub projections: Vec<ProjManifest>,
    pub inputs: Vec<InputManifest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PopManifest {
    pub id: String,
    pub size: usize,
    pub model: String,
    pub init_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjManifest {
    pub pre: String,
    pub post: String,
    pub mode: String,
    pub comm: String,
    pub jit_seed: Option<u64>,
    pub delay_steps: usize,
    pub syn_tau: f64,
    pub shared_handle: usize,
    pub created_state: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputManifest {
    pub target: String,
    pub kind: String,
    pub seed: u64,
}

/// One monitored signal: a named per-step column.
#[derive(Debug, Clone)]
pub struct MonitorTrace {
    pub name: String,
    pub values: Vec<f64>,
}

/// Everything a run produces.
pub struct SimulationResult {
    pub steps: u64,
    pub dt: f64,
    /// `(step, global neuron id)` for every spike, in emission order.
    pub raster: Vec<(u32, u32)>,
    pub traces: Vec<MonitorTrace>,
    pub timing: Timing,
    pub state_bytes: StateBytes,
    pub manifest: RunManifest,
    /// Mean rate in Hz per population over the whole run.
    pub pop_rates: Vec<(String, f64)>,
}

/// A built network, ready to step.
pub struct Network {
    dt: f64,
    duration: f64,
    pops: Vec<Population>,
    delays: Vec<DelayBuffer>,
    projections: Vec<BuiltProjection>,
    registry: MergeRegistry,
    /// Unique pre-aligned states with their spike source (pre, delay).
    pre_groups: Vec<(SynHandle, usize, usize)>,
    /// Unique post-aligned states with their target and output model.
    post_groups: Vec<(SynHandle, usize, SynOutput)>,
    inputs: Vec<BuiltInput>,
    monitors: Vec<BuiltMonitor>,
    manifest: RunManifest,
}

impl Network {
    pub fn build(cfg: &NetworkConfig) -> Result<Self> {
        cfg.validate()?;
        let master = cfg.seed;

        let mut pops = Vec::with_capacity(cfg.populations.len());
        let mut pop_manifests = Vec::new();
        let mut offset = 0u32;
        for (k, pc) in cfg.populations.iter().enumerate() {
            let init_seed = derive_seed(master, k as u64);
            let mut rng = SplitMix64::new(init_seed);
            let v: Vec<f64> = (0..pc.size)
                .map(|_| match pc.v_init {
                    VInit::Const { value } => value,
                    VInit::Normal { mean, std } => mean + std * rng.next_normal(),
                })
                .collect();
            let model = match &pc.model {
                ModelCfg::Lif {
                    v_rest,
                    v_reset,
                    v_th,
                    tau,
                    tau_ref,
                    r,
                } => {
                    let params = LifParams {
                        v_rest: *v_rest,
                        v_reset: *v_reset,
                        v_th: *v_th,
                        tau: *tau,
                        tau_ref: *tau_ref,
                        r: *r,
                    };
                    params.validate()?;
                    PopModel::Lif {
                        params,
                        state: LifState::new(v),
                    }
                }
                ModelCfg::Gif {
                    a1,
                    a2,
                    tau_i1,
                    tau_i2,
                    tau_v,
                    v_rest,
                    v_th,
                    r,
                } => {
                    // tau_i2 draws follow the v_init draws on the same stream.
                    let tau_i2: Vec<f64> = (0..pc.size)
                        .map(|_| match tau_i2 {
                            Sampled::Const { value } => *value,
                            Sampled::Uniform { low, high } => low + (high - low) * rng.next_f64(),
                        })
                        .collect();
                    let params = GifParams {
                        a1: *a1,
                        a2: *a2,
                        tau_i1: *tau_i1,
                        tau_i2,
                        tau_v: *tau_v,
                        v_rest: *v_rest,
                        v_th: *v_th,
                        r: *r,
                    };
                    params.validate(pc.size)?;
                    PopModel::Gif {
                        params,
                        state: GifState::new(v),
                    }
                }
            };
            pop_manifests.push(PopManifest {
                id: pc.id.clone(),
                size: pc.size,
                model: match pc.model {
                    ModelCfg::Lif { .. } => "lif".into(),
                    ModelCfg::Gif { .. } => "gif".into(),
                },
                init_seed,
            });
            pops.push(Population {
                id: pc.id.clone(),
                offset,
                model,
            });
            offset = offset
                .checked_add(pc.size as u32)
                .ok_or_else(|| Error::InvalidConfig("total neuron count exceeds u32".into()))?;
        }

        let mut registry = MergeRegistry::new();
        let mut projections = Vec::new();
        let mut proj_manifests = Vec::new();
        let mut pre_groups = Vec::new();
        let mut post_groups = Vec::new();
        for (j, pc) in cfg.projections.iter().enumerate() {
            let pre = cfg.population_index(&pc.pre).expect("validated");
            let post = cfg.population_index(&pc.post).expect("validated");
            let (pre_size, post_size) = (pops[pre].len(), pops[post].len());
            let mut jit_seed = None;
            let comm = match &pc.comm {
                CommCfg::Jit {
                    prob,
                    dist,
                    seed,
                    materialize: mat,
                } => {
                    let s = seed.unwrap_or_else(|| derive_seed(master, PROJ_SLOT + j as u64));
                    jit_seed = Some(s);
                    let spec = JitConnSpec::new(pre_size, post_size, *prob, *dist, s)?;
                    if *mat {
                        Comm::Sparse(materialize(&spec)?)
                    } else {
                        Comm::JitConn(spec)
                    }
                }
                CommCfg::Sparse { path, edges } => {
                    let m = match (path, edges) {
                        (Some(p), None) => load_sparse(std::path::Path::new(p), pre_size, post_size)?,
                        (None, Some(es)) => CsrMatrix::from_entries(pre_size, post_size, es)?,
                        _ => unreachable!("validated"),
                    };
                    Comm::Sparse(m)
                }
                CommCfg::Dense { rows } => Comm::Dense(DenseMatrix::from_rows(rows.clone())?),
            };
            let mode = match pc.mode {
                AlignModeCfg::AlignPre => AlignMode::AlignPre,
                AlignModeCfg::AlignPost => AlignMode::AlignPost,
            };
            let spec = ProjectionSpec {
                pre,
                post,
                comm,
                delay_steps: pc.delay_steps,
                syn_tau: pc.syn_tau,
                out: pc.out,
                mode,
            };
            spec.validate(pre_size, post_size)?;
            let (handle, created) = if cfg.merge_projections {
                registry.insert(spec.merge_key(), spec.shared_len(), spec.syn_tau)?
            } else {
                (registry.insert_unshared(spec.shared_len(), spec.syn_tau)?, true)
            };
            if created {
                match mode {
                    AlignMode::AlignPre => pre_groups.push((handle, pre, pc.delay_steps)),
                    AlignMode::AlignPost => post_groups.push((handle, post, pc.out)),
                }
            }
            proj_manifests.push(ProjManifest {
                pre: pc.pre.clone(),
                post: pc.post.clone(),
                mode: match mode {
                    AlignMode::AlignPre => "align_pre".into(),
                    AlignMode::AlignPost => "align_post".into(),
                },
                comm: match &spec.comm {
                    Comm::Dense(_) => "dense".into(),
                    Comm::Sparse(_) => "sparse".into(),
                    Comm::JitConn(_) => "jitconn".into(),
                },
                jit_seed,
                delay_steps: pc.delay_steps,
                syn_tau: pc.syn_tau,
                shared_handle: handle,
                created_state: created,
            });
            projections.push(BuiltProjection { spec, handle });
        }

        let delays: Vec<DelayBuffer> = pops
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let max_d = projections
                    .iter()
                    .filter(|bp| bp.spec.pre == k)
                    .map(|bp| bp.spec.delay_steps)
                    .max()
                    .unwrap_or(0);
                DelayBuffer::new(max_d, p.len())
            })
            .collect();

        let mut inputs = Vec::new();
        let mut input_manifests = Vec::new();
        for (i, ic) in cfg.inputs.iter().enumerate() {
            let target = cfg.population_index(&ic.target).expect("validated");
            let seed = derive_seed(master, INPUT_SLOT + i as u64);
            input_manifests.push(InputManifest {
                target: ic.target.clone(),
                kind: match ic.kind {
                    InputKind::Constant { .. } => "constant".into(),
                    InputKind::Poisson { .. } => "poisson".into(),
                },
                seed,
            });
            inputs.push(BuiltInput {
                target,
                kind: ic.kind,
                rng: SplitMix64::new(seed),
            });
        }

        let monitors = cfg
            .monitors
            .iter()
            .map(|mc: &MonitorCfg| {
                let target = cfg.population_index(&mc.target).expect("validated");
                let (indices, names) = match mc.signal {
                    MonitorSignal::Spikes => (Vec::new(), vec![format!("{}.spikes", mc.target)]),
                    MonitorSignal::Rate => (Vec::new(), vec![format!("{}.rate", mc.target)]),
                    MonitorSignal::V => {
                        let idx = mc
                            .indices
                            .clone()
                            .unwrap_or_else(|| (0..pops[target].len()).collect());
                        let names = idx.iter().map(|i| format!("{}.v[{i}]", mc.target)).collect();
                        (idx, names)
                    }
                };
                let columns = vec![Vec::new(); names.len()];
                BuiltMonitor {
                    target,
                    signal: mc.signal,
                    indices,
                    names,
                    columns,
                }
            })
            .collect();

        let steps = (cfg.duration / cfg.dt).round() as u64;
        let manifest = RunManifest {
            master_seed: master,
            dt: cfg.dt,
            duration: cfg.duration,
            steps,
            merge_projections: cfg.merge_projections,
            merge_groups: registry.group_count(),
            synapse_scalars: registry.total_scalars(),
            populations: pop_manifests,
            projections: proj_manifests,
            inputs: input_manifests,
        };

        Ok(Network {
            dt: cfg.dt,
            duration: cfg.duration,
            pops,
            delays,
            projections,
            registry,
            pre_groups,
            post_groups,
            inputs,
            monitors,
            manifest,
        })
    }

    pub fn populations(&self) -> &[Population] {
        &self.pops
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    pub fn merge_group_count(&self) -> usize {
        self.registry.group_count()
    }

    pub fn synapse_scalar_count(&self) -> usize {
        self.registry.total_scalars()
    }

    /// Analytic per-component byte tally (exact scalar counts, not RSS).
    pub fn state_byte_count(&self) -> StateBytes {
        StateBytes {
            neuron: self.pops.iter().map(Population::state_bytes).sum(),
            synapse: self.registry.state_bytes(),
            comm: self
                .projections
                .iter()
                .map(|bp| bp.spec.comm.state_bytes())
                .sum(),
            delay: self.delays.iter().map(DelayBuffer::state_bytes).sum(),
        }
    }

    /// Runs the full duration and collects spikes, traces, and timing.
    pub fn run(&mut self) -> Result<SimulationResult> {
        let steps = (self.duration / self.dt).round() as u64;
        let mut raster: Vec<(u32, u32)> = Vec::new();
        let mut timing = Timing::default();
        let run_start = Instant::now();
        let dt_s = self.dt / 1000.0;

        let mut currents: Vec<Vec<f64>> = self.pops.iter().map(|p| vec![0.0; p.len()]).collect();
        for step in 0..steps {
            let t = step as f64 * self.dt;
            for c in &mut currents {
                c.iter_mut().for_each(|x| *x = 0.0);
            }

            let phase = Instant::now();
            // Shared synapse states decay exactly once per step.
            self.registry.decay_all(self.dt);

            // Pre-aligned traces: one unit-increment pass per shared state.
            for &(h, pre, delay) in &self.pre_groups {
                let spikes = self.delays[pre].read(delay)?;
                align_pre_accumulate(self.registry.state_mut(h), spikes)?;
            }

            // Post-aligned accumulation per projection (event communication).
            for bp in &self.projections {
                if bp.spec.mode == AlignMode::AlignPost {
                    let spikes = self.delays[bp.spec.pre].read(bp.spec.delay_steps)?;
                    align_post_accumulate(&bp.spec, self.registry.state_mut(bp.handle), spikes)?;
                }
            }

            // Currents: once per post-aligned shared state ...
            for &(h, post, out) in &self.post_groups {
                let i = syn_output(&self.registry.state(h).g, self.pops[post].v(), out)?;
                for (acc, x) in currents[post].iter_mut().zip(&i) {
                    *acc += x;
                }
            }
            // ... and once per pre-aligned projection (communication step).
            for bp in &self.projections {
                if bp.spec.mode == AlignMode::AlignPre {
                    let i = align_pre_output(
                        &bp.spec,
                        self.registry.state(bp.handle),
                        self.pops[bp.spec.post].v(),
                    )?;
                    for (acc, x) in currents[bp.spec.post].iter_mut().zip(&i) {
                        *acc += x;
                    }
                }
            }
            timing.projection_ns += phase.elapsed().as_nanos() as u64;

            for inp in &mut self.inputs {
                let c = &mut currents[inp.target];
                match inp.kind {
                    InputKind::Constant { value } => c.iter_mut().for_each(|x| *x += value),
                    InputKind::Poisson { rate_hz, amplitude } => {
                        let p = rate_hz * dt_s;
                        for x in c.iter_mut() {
                            if inp.rng.next_f64() < p {
                                *x += amplitude;
                            }
                        }
                    }
                }
            }

            let phase = Instant::now();
            for (k, pop) in self.pops.iter_mut().enumerate() {
                pop.step(&currents[k], t, self.dt)?;
                if pop.v().iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        step,
                        what: format!("membrane potential in population '{}'", pop.id),
                    });
                }
            }
            timing.neuron_ns += phase.elapsed().as_nanos() as u64;

            let phase = Instant::now();
            for (k, pop) in self.pops.iter().enumerate() {
                let spikes = pop.spike();
                self.delays[k].write(spikes)?;
                let base = pop.offset;
                for i in spikes.iter_active() {
                    raster.push((step as u32, base + i as u32));
                }
            }
            for mon in &mut self.monitors {
                let pop = &self.pops[mon.target];
                match mon.signal {
                    MonitorSignal::Spikes => {
                        mon.columns[0].push(pop.spike().count_active() as f64);
                    }
                    MonitorSignal::Rate => {
                        let rate = pop.spike().count_active() as f64 / (pop.len() as f64 * dt_s);
                        mon.columns[0].push(rate);
                    }
                    MonitorSignal::V => {
                        let v = pop.v();
                        for (col, &i) in mon.columns.iter_mut().zip(&mon.indices) {
                            col.push(v[i]);
                        }
                    }
                }
            }
            timing.monitor_ns += phase.elapsed().as_nanos() as u64;
        }
        timing.run_ns = run_start.elapsed().as_nanos() as u64;

        let duration_s = (steps as f64 * self.dt / 1000.0).max(f64::MIN_POSITIVE);
        let pop_rates = self
            .pops
            .iter()
            .map(|p| {
                let count = raster
                    .iter()
                    .filter(|&&(_, id)| {
                        id >= p.offset && (id as usize) < p.offset as usize + p.len()
                    })
                    .count();
                (
                    p.id.clone(),
                    count as f64 / (p.len() as f64 * duration_s),
                )
            })
            .collect();

        let traces = self
            .monitors
            .iter()
            .flat_map(|m| {
                m.names
                    .iter()
                    .zip(&m.columns)
                    .map(|(n, c)| MonitorTrace {
                        name: n.clone(),
                        values: c.clone(),
                    })
            })
            .collect();

        Ok(SimulationResult {
            steps,
            dt: self.dt,
            raster,
            traces,
            timing,
            state_bytes: self.state_byte_count(),
            manifest: self.manifest.clone(),
            pop_rates,
        })
    }
}

fn load_sparse(path: &std::path::Path, pre: usize, post: usize) -> Result<CsrMatrix> {
    let m = if path.extension().is_some_and(|e| e == "spkcsr") {
        let mut f = std::fs::File::open(path)?;
        read_csr(&mut f)?
    } else {
        load_edge_list(path, Some((pre, post)))?
    };
    if m.n_rows() != pre || m.n_cols() != post {
        return Err(Error::InvalidConfig(format!(
            "sparse comm from {} is {}x{}, expected {pre}x{post}",
            path.display(),
            m.n_rows(),
            m.n_cols()
        )));
    }
    Ok(m)
}

/// Builds and runs a network in one call.
pub fn simulate(cfg: &NetworkConfig) -> Result<SimulationResult> {
    let build_start = Instant::now();
    let mut net = Network::build(cfg)?;
    let build_ns = build_start.elapsed().as_nanos() as u64;
    let mut result = net.run()?;
    result.timing.build_ns = build_ns;
    Ok(result)
}
