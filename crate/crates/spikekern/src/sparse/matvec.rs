use rayon::prelude::*;

use super::csr::{CsrMatrix, DenseMatrix, Weights};
use super::probe::{NoProbe, Probe};
use crate::error::{Error, Result};
use crate::spike::SpikeVector;

/// Dense matrix-vector product, the baseline operator.
pub fn dense_matvec(m: &DenseMatrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != m.n_cols() {
        return Err(Error::dim("dense_matvec", m.n_cols(), v.len()));
    }
    let mut y = vec![0.0; m.n_rows()];
    for (r, out) in y.iter_mut().enumerate() {
        *out = m.row(r).iter().zip(v).map(|(a, b)| a * b).sum();
    }
    Ok(y)
}

fn check_input_len(m: &CsrMatrix, len: usize, transpose: bool, context: &'static str) -> Result<()> {
    let expect = if transpose { m.n_rows() } else { m.n_cols() };
    if len != expect {
        return Err(Error::DimensionMismatch {
            context,
            expected: expect,
            got: len,
        });
    }
    Ok(())
}

/// Sparse matrix-vector product `y = M v` (or `Mᵀ v` with `transpose`).
///
/// The non-event baseline: every stored edge is visited regardless of the
/// input values.
pub fn csrmv(m: &CsrMatrix, v: &[f64], transpose: bool) -> Result<Vec<f64>> {
    csrmv_probed(m, v, transpose, &mut NoProbe)
}

pub fn csrmv_probed<P: Probe>(
    m: &CsrMatrix,
    v: &[f64],
    transpose: bool,
    probe: &mut P,
) -> Result<Vec<f64>> {
    check_input_len(m, v.len(), transpose, "csrmv")?;
    let indices = m.indices();
    if transpose {
        let mut y = vec![0.0; m.n_cols()];
        for r in 0..m.n_rows() {
            let x = v[r];
            let range = m.row_range(r);
            probe.weight_reads(range.len() as u64);
            match m.weights() {
                Weights::Homogeneous(w) => {
                    let wx = w * x;
                    for &c in &indices[range] {
                        y[c as usize] += wx;
                    }
                }
                Weights::PerEdge(ws) => {
                    for j in range {
                        y[indices[j] as usize] += ws[j] * x;
                    }
                }
            }
        }
        Ok(y)
    } else {
        let mut y = vec![0.0; m.n_rows()];
        for (r, out) in y.iter_mut().enumerate() {
            let range = m.row_range(r);
            probe.weight_reads(range.len() as u64);
            *out = match m.weights() {
                Weights::Homogeneous(w) => {
                    let s: f64 = indices[range].iter().map(|&c| v[c as usize]).sum();
                    w * s
                }
                Weights::PerEdge(ws) => range
                    .map(|j| ws[j] * v[indices[j] as usize])
                    .sum(),
            };
        }
        Ok(y)
    }
}

/// Event-driven product: arithmetic identical to [`csrmv`] on the 0/1 cast
/// of `events`, but entries whose event bit is false are skipped entirely.
///
/// Scatter orientation (`transpose = true`, pre-major storage): for each
/// active row the row's edges are accumulated into their targets. Gather
/// orientation sums only the edges whose source column carries an event.
pub fn event_csrmv(m: &CsrMatrix, events: &SpikeVector, transpose: bool) -> Result<Vec<f64>> {
    event_csrmv_probed(m, events, transpose, &mut NoProbe)
}

pub fn event_csrmv_probed<P: Probe>(
    m: &CsrMatrix,
    events: &SpikeVector,
    transpose: bool,
    probe: &mut P,
) -> Result<Vec<f64>> {
    check_input_len(m, events.len(), transpose, "event_csrmv")?;
    let indices = m.indices();
    if transpose {
        let mut y = vec![0.0; m.n_cols()];
        for r in events.iter_active() {
            let range = m.row_range(r);
            probe.weight_reads(range.len() as u64);
            match m.weights() {
                Weights::Homogeneous(w) => {
                    for &c in &indices[range] {
                        y[c as usize] += w;
                    }
                }
                Weights::PerEdge(ws) => {
                    for j in range {
                        y[indices[j] as usize] += ws[j];
                    }
                }
            }
        }
        Ok(y)
    } else {
        let bits = events.as_slice();
        let mut y = vec![0.0; m.n_rows()];
        for (r, out) in y.iter_mut().enumerate() {
            *out = event_gather_row(m, bits, r, probe);
        }
        Ok(y)
    }
}

#[inline]
fn event_gather_row<P: Probe>(m: &CsrMatrix, bits: &[bool], r: usize, probe: &mut P) -> f64 {
    let indices = m.indices();
    match m.weights() {
        Weights::Homogeneous(w) => {
            let mut hits = 0u64;
            for &c in &indices[m.row_range(r)] {
                hits += bits[c as usize] as u64;
            }
            probe.weight_reads(hits);
            *w * hits as f64
        }
        Weights::PerEdge(ws) => {
            let mut acc = 0.0;
            let mut hits = 0u64;
            for j in m.row_range(r) {
                if bits[indices[j] as usize] {
                    acc += ws[j];
                    hits += 1;
                }
            }
            probe.weight_reads(hits);
            acc
        }
    }
}

/// Row-parallel event gather. Scatter orientation falls back to the
/// sequential kernel; deterministic results are guaranteed sequentially
/// only, gather stays deterministic because rows are independent.
pub fn event_csrmv_par(m: &CsrMatrix, events: &SpikeVector, transpose: bool) -> Result<Vec<f64>> {
    check_input_len(m, events.len(), transpose, "event_csrmv")?;
    if transpose {
        return event_csrmv(m, events, transpose);
    }
    let bits = events.as_slice();
    let y: Vec<f64> = (0..m.n_rows())
        .into_par_iter()
        .map(|r| event_gather_row(m, bits, r, &mut NoProbe))
        .collect();
    Ok(y)
}

/// Gradient of the weights under `cotangent · event_csrmv(m, events)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightGrad {
    /// Sum over all active edges of the cotangent at their targets.
    Homogeneous(f64),
    /// Per-edge: active-source indicator times cotangent at the edge target.
    PerEdge(Vec<f64>),
}

/// Reverse-mode weight gradient of the event product.
///
/// For edge `j` of row `i`: in gather orientation the source is the column
/// and the target is the row; in scatter orientation the source is the row
/// and the target is the column. `cotangent` must match the output length
/// of the corresponding `event_csrmv` call.
pub fn event_csrmv_weight_grad(
    m: &CsrMatrix,
    events: &SpikeVector,
    cotangent: &[f64],
    transpose: bool,
) -> Result<WeightGrad> {
    check_input_len(m, events.len(), transpose, "event_csrmv_weight_grad")?;
    let out_len = if transpose { m.n_cols() } else { m.n_rows() };
    if cotangent.len() != out_len {
        return Err(Error::dim(
            "event_csrmv_weight_grad cotangent",
            out_len,
            cotangent.len(),
        ));
    }
    let indices = m.indices();
    let mut per_edge = match m.weights() {
        Weights::PerEdge(_) => Some(vec![0.0; m.nnz()]),
        Weights::Homogeneous(_) => None,
    };
    let mut homo = 0.0;
    for r in 0..m.n_rows() {
        for j in m.row_range(r) {
            let c = indices[j] as usize;
            let (source_active, target) = if transpose {
                (events.get(r), c)
            } else {
                (events.get(c), r)
            };
            if source_active {
                match &mut per_edge {
                    Some(g) => g[j] = cotangent[target],
                    None => homo += cotangent[target],
                }
            }
        }
    }
    Ok(match per_edge {
        Some(g) => WeightGrad::PerEdge(g),
        None => WeightGrad::Homogeneous(homo),
    })
}
