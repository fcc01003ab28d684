use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jitconn::{jitconn_matvec, JitConnSpec, WeightDist};
use crate::rng::derive_seed;

/// Echo-state reservoir with procedurally regenerated weights.
///
/// Input weights are uniform on `[-input_scale, input_scale]`; recurrent
/// weights are normal with sigma `rho / sqrt(n_res * p_rec)`, which places
/// the spectral radius of the sparse Gaussian matrix near `rho`.
#[derive(Debug, Clone)]
pub struct ReservoirParams {
    pub n_in: usize,
    pub n_res: usize,
    pub n_out: usize,
    /// Leak rate in (0, 1].
    pub alpha: f64,
    /// Spectral radius target of the recurrent matrix.
    pub rho: f64,
    /// Input weight half-range `s`.
    pub input_scale: f64,
    pub p_in: f64,
    pub p_rec: f64,
    pub seed: u64,
}

impl ReservoirParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "leak rate must be in (0, 1], got {}",
                self.alpha
            )));
        }
        if self.n_in == 0 || self.n_res == 0 || self.n_out == 0 {
            return Err(Error::InvalidParameter("reservoir sizes must be nonzero".into()));
        }
        for (name, p) in [("p_in", self.p_in), ("p_rec", self.p_rec)] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must be in (0, 1], got {p}")));
            }
        }
        Ok(())
    }

    /// `sigma = rho / sqrt(n_res * p_rec)`.
    pub fn sigma_rec(&self) -> f64 {
        self.rho / (self.n_res as f64 * self.p_rec).sqrt()
    }

    /// Input weight matrix spec (`n_res x n_in`, rows gather the input).
    pub fn w_in_spec(&self) -> Result<JitConnSpec> {
        JitConnSpec::new(
            self.n_res,
            self.n_in,
            self.p_in,
            WeightDist::Uniform {
                low: -self.input_scale,
                high: self.input_scale,
            },
            derive_seed(self.seed, 0),
        )
    }

    /// Recurrent weight matrix spec (`n_res x n_res`).
    pub fn w_rec_spec(&self) -> Result<JitConnSpec> {
        JitConnSpec::new(
            self.n_res,
            self.n_res,
            self.p_rec,
            WeightDist::Normal {
                mu: 0.0,
                sigma: self.sigma_rec(),
            },
            derive_seed(self.seed, 1),
        )
    }
}

/// Reservoir activation vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    pub x: Vec<f64>,
}

impl ReservoirState {
    pub fn zeros(n_res: usize) -> Self {
        Self {
            x: vec![0.0; n_res],
        }
    }
}

/// Leaky-tanh update:
/// `x <- (1 - alpha) * x + alpha * tanh(W_in u + W_rec x)`.
///
/// Both products regenerate their weights procedurally; nothing is stored
/// between calls except the state vector itself.
pub fn reservoir_step(
    state: &mut ReservoirState,
    params: &ReservoirParams,
    u: &[f64],
) -> Result<()> {
    if u.len() != params.n_in {
        return Err(Error::dim("reservoir_step input", params.n_in, u.len()));
    }
    if state.x.len() != params.n_res {
        return Err(Error::dim("reservoir_step state", params.n_res, state.x.len()));
    }
    let drive_in = jitconn_matvec(&params.w_in_spec()?, u, false)?;
    let drive_rec = jitconn_matvec(&params.w_rec_spec()?, &state.x, false)?;
    let a = params.alpha;
    for (x, (i, r)) in state.x.iter_mut().zip(drive_in.iter().zip(&drive_rec)) {
        *x = (1.0 - a) * *x + a * (i + r).tanh();
    }
    Ok(())
}

/// Linear readout `y = W_out x`.
pub fn readout(state: &ReservoirState, w_out: &DMatrix<f64>) -> Result<Vec<f64>> {
    if w_out.ncols() != state.x.len() {
        return Err(Error::dim("readout", w_out.ncols(), state.x.len()));
    }
    let mut y = vec![0.0; w_out.nrows()];
    for (r, out) in y.iter_mut().enumerate() {
        *out = state.x.iter().zip(w_out.row(r).iter()).map(|(a, b)| a * b).sum();
    }
    Ok(y)
}
