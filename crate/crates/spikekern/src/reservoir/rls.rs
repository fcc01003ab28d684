use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Recursive-least-squares state for online readout training.
///
/// `p_mat` tracks `(sum_t x xᵀ + delta I)⁻¹`; with `w_out` started at zero
/// the weights after any number of updates equal the ridge solution with
/// regularizer `delta` on the same data.
#[derive(Debug, Clone)]
pub struct RlsState {
    pub p_mat: DMatrix<f64>,
    pub w_out: DMatrix<f64>,
    delta: f64,
}

impl RlsState {
    /// `delta` is the learning-rate parameter: `P` starts at `I / delta`.
    pub fn new(n_res: usize, n_out: usize, delta: f64) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "RLS delta must be > 0, got {delta}"
            )));
        }
        let p_mat = DMatrix::identity(n_res, n_res) / delta;
        // P0 is diagonal positive; the Cholesky check guards the invariant
        // the update must preserve.
        if p_mat.clone().cholesky().is_none() {
            return Err(Error::InvalidParameter("initial P is not positive definite".into()));
        }
        Ok(Self {
            p_mat,
            w_out: DMatrix::zeros(n_out, n_res),
            delta,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Symmetric-positive-definite spot check (used by tests).
    pub fn p_is_spd(&self) -> bool {
        self.p_mat.clone().cholesky().is_some()
    }
}

/// One RLS update with the a-priori error (no forgetting factor):
///
/// ```text
/// k      = P x / (1 + xᵀ P x)
/// P     <- P - k (P x)ᵀ
/// e      = w_out x - target
/// w_out <- w_out - e kᵀ
/// ```
pub fn force_update(rls: &mut RlsState, x: &[f64], target: &[f64]) -> Result<()> {
    let n = rls.p_mat.nrows();
    if x.len() != n {
        return Err(Error::dim("force_update state", n, x.len()));
    }
    if target.len() != rls.w_out.nrows() {
        return Err(Error::dim("force_update target", rls.w_out.nrows(), target.len()));
    }
    let x = DVector::from_column_slice(x);
    let px = &rls.p_mat * &x;
    let denom = 1.0 + x.dot(&px);
    if !denom.is_finite() || denom <= 0.0 {
        return Err(Error::NonFinite {
            step: 0,
            what: format!("RLS gain denominator {denom}"),
        });
    }
    let k = &px / denom;
    rls.p_mat -= &k * px.transpose();
    let y = &rls.w_out * &x;
    for r in 0..rls.w_out.nrows() {
        let e = y[r] - target[r];
        for c in 0..rls.w_out.ncols() {
            rls.w_out[(r, c)] -= e * k[c];
        }
    }
    if rls.w_out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            step: 0,
            what: "RLS weights diverged".into(),
        });
    }
    Ok(())
}
