use rayon::prelude::*;

use super::sampler::RowSampler;
use super::spec::{JitConnSpec, WeightDist};
use crate::error::{Error, Result};
use crate::sparse::probe::{NoProbe, Probe};
use crate::sparse::{CsrMatrix, Weights};
use crate::spike::SpikeVector;

/// Upper bound on materialized nonzeros; [`materialize`] is a testing
/// oracle, production paths regenerate rows instead.
pub const MATERIALIZE_NNZ_LIMIT: u64 = 100_000_000;

/// Iterator over the `(column, weight)` targets of one regenerated row.
///
/// Targets are strictly increasing: the first is `gap - 1` for a gap drawn
/// from `U[1, K]` (so `prob = 1`, where `K = 1`, starts at column 0 and
/// covers every column), and each subsequent target advances by an
/// independent `U[1, K]` gap. The weight for a target is drawn from the same
/// row stream immediately after its gap.
pub struct RowTargets {
    sampler: RowSampler,
    dist: WeightDist,
    gap_bound: u64,
    n_cols: u64,
    pos: u64,
}

impl RowTargets {
    fn new(spec: &JitConnSpec, row: usize) -> Self {
        let mut sampler = RowSampler::new(spec.seed, row as u64);
        let gap_bound = spec.gap_bound();
        let pos = sampler.next_gap(gap_bound) - 1;
        Self {
            sampler,
            dist: spec.dist,
            gap_bound,
            n_cols: spec.n_cols as u64,
            pos,
        }
    }
}

impl Iterator for RowTargets {
    type Item = (usize, f64);

    #[inline]
    fn next(&mut self) -> Option<(usize, f64)> {
        if self.pos >= self.n_cols {
            return None;
        }
        let col = self.pos as usize;
        let w = self.dist.draw(&mut self.sampler);
        self.pos += self.sampler.next_gap(self.gap_bound);
        Some((col, w))
    }
}

/// The targets of row `row` implied by `spec`.
pub fn row_targets(spec: &JitConnSpec, row: usize) -> RowTargets {
    debug_assert!(row < spec.n_rows);
    RowTargets::new(spec, row)
}

/// Materializes the implied matrix as canonical CSR. Testing oracle only;
/// guarded so an oversized spec cannot exhaust memory.
pub fn materialize(spec: &JitConnSpec) -> Result<CsrMatrix> {
    let estimated = spec.expected_nnz().ceil() as u64;
    if estimated > MATERIALIZE_NNZ_LIMIT {
        return Err(Error::SizeGuard {
            estimated,
            limit: MATERIALIZE_NNZ_LIMIT,
        });
    }
    let mut indptr = Vec::with_capacity(spec.n_rows + 1);
    indptr.push(0u32);
    let mut indices = Vec::new();
    let mut weights = match spec.dist {
        WeightDist::Homo { .. } => None,
        _ => Some(Vec::new()),
    };
    for r in 0..spec.n_rows {
        for (c, w) in row_targets(spec, r) {
            indices.push(c as u32);
            if let Some(ws) = &mut weights {
                ws.push(w);
            }
        }
        indptr.push(indices.len() as u32);
    }
    let weights = match (weights, spec.dist) {
        (None, WeightDist::Homo { w }) => Weights::Homogeneous(w),
        (Some(ws), _) => Weights::PerEdge(ws),
        _ => unreachable!(),
    };
    CsrMatrix::from_parts(spec.n_rows, spec.n_cols, indptr, indices, weights)
}

fn check_input_len(spec: &JitConnSpec, len: usize, transpose: bool, ctx: &'static str) -> Result<()> {
    let expect = if transpose { spec.n_rows } else { spec.n_cols };
    if len != expect {
        return Err(Error::DimensionMismatch {
            context: ctx,
            expected: expect,
            got: len,
        });
    }
    Ok(())
}

/// `y = J v` (gather) or `y = Jᵀ v` (scatter) against the regenerated
/// matrix. Identical output on every call with the same spec.
pub fn jitconn_matvec(spec: &JitConnSpec, v: &[f64], transpose: bool) -> Result<Vec<f64>> {
    check_input_len(spec, v.len(), transpose, "jitconn_matvec")?;
    if transpose {
        let mut y = vec![0.0; spec.n_cols];
        for r in 0..spec.n_rows {
            let x = v[r];
            for (c, w) in row_targets(spec, r) {
                y[c] += w * x;
            }
        }
        Ok(y)
    } else {
        let mut y = vec![0.0; spec.n_rows];
        for (r, out) in y.iter_mut().enumerate() {
            *out = row_targets(spec, r).map(|(c, w)| w * v[c]).sum();
        }
        Ok(y)
    }
}

/// Row-parallel gather product. Rows own independent streams, so the
/// parallel gather is bit-identical to the sequential one; the scatter
/// orientation falls back to sequential execution.
pub fn jitconn_matvec_par(spec: &JitConnSpec, v: &[f64], transpose: bool) -> Result<Vec<f64>> {
    check_input_len(spec, v.len(), transpose, "jitconn_matvec")?;
    if transpose {
        return jitconn_matvec(spec, v, transpose);
    }
    let y: Vec<f64> = (0..spec.n_rows)
        .into_par_iter()
        .map(|r| row_targets(spec, r).map(|(c, w)| w * v[c]).sum())
        .collect();
    Ok(y)
}

/// Event-driven product over the regenerated matrix.
///
/// Scatter orientation regenerates only the rows whose event bit is set;
/// gather orientation walks every row's gap chain but skips the weight draw
/// for targets without an event (the counter is advanced, not mixed).
pub fn jitconn_event_matvec(
    spec: &JitConnSpec,
    events: &SpikeVector,
    transpose: bool,
) -> Result<Vec<f64>> {
    jitconn_event_matvec_probed(spec, events, transpose, &mut NoProbe)
}

pub fn jitconn_event_matvec_probed<P: Probe>(
    spec: &JitConnSpec,
    events: &SpikeVector,
    transpose: bool,
    probe: &mut P,
) -> Result<Vec<f64>> {
    check_input_len(spec, events.len(), transpose, "jitconn_event_matvec")?;
    let draw_cost = spec.dist.draw_cost();
    if transpose {
        let mut y = vec![0.0; spec.n_cols];
        for r in events.iter_active() {
            for (c, w) in row_targets(spec, r) {
                probe.weight_draws(draw_cost);
                y[c] += w;
            }
        }
        Ok(y)
    } else {
        let bits = events.as_slice();
        let gap_bound = spec.gap_bound();
        let n_cols = spec.n_cols as u64;
        let mut y = vec![0.0; spec.n_rows];
        for (r, out) in y.iter_mut().enumerate() {
            let mut sampler = RowSampler::new(spec.seed, r as u64);
            let mut pos = sampler.next_gap(gap_bound) - 1;
            let mut acc = 0.0;
            while pos < n_cols {
                if bits[pos as usize] {
                    acc += spec.dist.draw(&mut sampler);
                    probe.weight_draws(draw_cost);
                } else {
                    sampler.skip(draw_cost);
                }
                pos += sampler.next_gap(gap_bound);
            }
            *out = acc;
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::sparse::probe::CountingProbe;
    use crate::sparse::csrmv;

    fn assert_close(a: &[f64], b: &[f64], rel: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            let scale = x.abs().max(y.abs()).max(1.0);
            assert!((x - y).abs() <= rel * scale, "mismatch {x} vs {y}");
        }
    }

    fn random_spec(rng: &mut SplitMix64, max_dim: usize) -> JitConnSpec {
        let n_rows = 1 + (rng.next_u64() as usize % max_dim);
        let n_cols = 1 + (rng.next_u64() as usize % max_dim);
        let prob = [1.0, 0.5, 0.25, 0.1, 0.05][(rng.next_u64() % 5) as usize];
        let dist = match rng.next_u64() % 3 {
            0 => WeightDist::Homo { w: 1.5 },
            1 => WeightDist::Uniform {
                low: -0.5,
                high: 1.0,
            },
            _ => WeightDist::Normal {
                mu: 0.1,
                sigma: 0.8,
            },
        };
        JitConnSpec::new(n_rows, n_cols, prob, dist, rng.next_u64()).unwrap()
    }

    #[test]
    fn full_probability_emits_every_column_once() {
        let spec = JitConnSpec::new(3, 7, 1.0, WeightDist::Homo { w: 2.0 }, 9).unwrap();
        for r in 0..3 {
            let cols: Vec<usize> = row_targets(&spec, r).map(|(c, _)| c).collect();
            assert_eq!(cols, (0..7).collect::<Vec<_>>());
        }
    }

    #[test]
    fn row_stream_replays_identically() {
        let spec = JitConnSpec::new(10, 1000, 0.1, WeightDist::Normal { mu: 0.0, sigma: 1.0 }, 3)
            .unwrap();
        let a: Vec<(usize, f64)> = row_targets(&spec, 4).collect();
        let b: Vec<(usize, f64)> = row_targets(&spec, 4).collect();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        // strictly increasing targets
        for w in a.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn empirical_mean_gap_matches_analytic() {
        let spec =
            JitConnSpec::new(1000, 100_000, 0.1, WeightDist::Homo { w: 1.0 }, 77).unwrap();
        assert_eq!(spec.gap_bound(), 19);
        let mut gaps = 0u64;
        let mut count = 0u64;
        for r in 0..1000 {
            let cols: Vec<usize> = row_targets(&spec, r).map(|(c, _)| c).collect();
            for w in cols.windows(2) {
                gaps += (w[1] - w[0]) as u64;
                count += 1;
            }
        }
        let mean = gaps as f64 / count as f64;
        let expect = (spec.gap_bound() as f64 + 1.0) / 2.0; // = 10 = 1/p
        assert!(
            (mean - expect).abs() / expect < 0.01,
            "mean gap {mean} vs {expect}"
        );
    }

    #[test]
    fn materialize_full_probability_is_dense_homogeneous() {
        let spec = JitConnSpec::new(4, 5, 1.0, WeightDist::Homo { w: 0.25 }, 1).unwrap();
        let m = materialize(&spec).unwrap();
        let d = m.densify();
        for r in 0..4 {
            for c in 0..5 {
                assert_eq!(d.get(r, c), 0.25);
            }
        }
    }

    #[test]
    fn materialize_is_bit_stable() {
        let spec = JitConnSpec::new(50, 60, 0.1, WeightDist::Normal { mu: 0.0, sigma: 1.0 }, 5)
            .unwrap();
        assert_eq!(materialize(&spec).unwrap(), materialize(&spec).unwrap());
    }

    #[test]
    fn materialize_guard_rejects_huge_specs() {
        let spec =
            JitConnSpec::new(1_000_000, 1_000_000, 0.5, WeightDist::Homo { w: 1.0 }, 0).unwrap();
        assert!(matches!(
            materialize(&spec),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn matvec_zero_vector_gives_zero() {
        let spec = JitConnSpec::new(30, 40, 0.2, WeightDist::Uniform { low: 0.0, high: 1.0 }, 2)
            .unwrap();
        let y = jitconn_matvec(&spec, &vec![0.0; 40], false).unwrap();
        assert!(y.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn matvec_full_probability_homogeneous_row_sum() {
        let spec = JitConnSpec::new(6, 4, 1.0, WeightDist::Homo { w: 0.5 }, 11).unwrap();
        let v = [1.0, 2.0, 3.0, 4.0];
        let y = jitconn_matvec(&spec, &v, false).unwrap();
        let expect = 0.5 * v.iter().sum::<f64>();
        for x in y {
            assert!((x - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn matvec_matches_materialization_oracle() {
        let mut rng = SplitMix64::new(2025);
        for _ in 0..300 {
            let spec = random_spec(&mut rng, 64);
            let m = materialize(&spec).unwrap();
            let v: Vec<f64> = (0..spec.n_cols).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let y = jitconn_matvec(&spec, &v, false).unwrap();
            assert_close(&y, &csrmv(&m, &v, false).unwrap(), 1e-12);

            let vt: Vec<f64> = (0..spec.n_rows).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
            let yt = jitconn_matvec(&spec, &vt, true).unwrap();
            assert_close(&yt, &csrmv(&m, &vt, true).unwrap(), 1e-12);

            let yp = jitconn_matvec_par(&spec, &v, false).unwrap();
            assert_eq!(y, yp);
        }
    }

    #[test]
    fn event_matvec_matches_oracle_across_densities() {
        let mut rng = SplitMix64::new(99);
        for case in 0..300 {
            let spec = random_spec(&mut rng, 64);
            let m = materialize(&spec).unwrap();
            let density = [0.001, 0.01, 0.1, 0.5][case % 4];
            let transpose = case % 2 == 0;
            let len = if transpose { spec.n_rows } else { spec.n_cols };
            let events = SpikeVector::from_bools(
                (0..len).map(|_| rng.next_f64() < density).collect(),
            );
            let y = jitconn_event_matvec(&spec, &events, transpose).unwrap();
            let oracle = csrmv(&m, &events.to_f64(), transpose).unwrap();
            assert_close(&y, &oracle, 1e-12);
        }
    }

    #[test]
    fn event_matvec_no_events_makes_no_weight_draws() {
        let spec = JitConnSpec::new(40, 50, 0.2, WeightDist::Normal { mu: 0.0, sigma: 1.0 }, 8)
            .unwrap();
        for &transpose in &[true, false] {
            let len = if transpose { 40 } else { 50 };
            let mut probe = CountingProbe::default();
            let y = jitconn_event_matvec_probed(&spec, &SpikeVector::silent(len), transpose, &mut probe)
                .unwrap();
            assert!(y.iter().all(|&x| x == 0.0));
            assert_eq!(probe.weight_draws, 0);
        }
    }

    #[test]
    fn event_single_event_selects_matrix_row() {
        let spec = JitConnSpec::new(20, 30, 0.3, WeightDist::Uniform { low: 0.5, high: 1.5 }, 6)
            .unwrap();
        let dense = materialize(&spec).unwrap().densify();
        for r in [0usize, 7, 19] {
            let e = SpikeVector::from_active(20, &[r]).unwrap();
            let y = jitconn_event_matvec(&spec, &e, true).unwrap();
            let expect: Vec<f64> = (0..30).map(|c| dense.get(r, c)).collect();
            assert_eq!(y, expect);
        }
    }

    #[test]
    fn connectivity_is_independent_of_event_pattern() {
        // Reconstructing the matrix from single-event probes gives exactly
        // the directly materialized matrix: J does not depend on inputs.
        let spec = JitConnSpec::new(25, 35, 0.2, WeightDist::Uniform { low: 0.5, high: 1.5 }, 13)
            .unwrap();
        let direct = materialize(&spec).unwrap().densify();
        for r in 0..25 {
            let e = SpikeVector::from_active(25, &[r]).unwrap();
            let probe_row = jitconn_event_matvec(&spec, &e, true).unwrap();
            for c in 0..35 {
                assert_eq!(probe_row[c], direct.get(r, c), "row {r} col {c}");
            }
        }
    }

    #[test]
    fn repeated_calls_are_bit_identical() {
        let mut rng = SplitMix64::new(5);
        let spec = JitConnSpec::new(64, 64, 0.1, WeightDist::Normal { mu: 0.0, sigma: 1.0 }, 21)
            .unwrap();
        let v: Vec<f64> = (0..64).map(|_| rng.next_f64()).collect();
        let first = jitconn_matvec(&spec, &v, false).unwrap();
        for _ in 0..100 {
            assert_eq!(jitconn_matvec(&spec, &v, false).unwrap(), first);
        }
    }

    #[test]
    fn weight_moments_match_distribution() {
        // Uniform bounds and normal (mu, sigma) recovered from >= 1e5 draws.
        let n = 400;
        let uniform = JitConnSpec::new(
            n,
            n,
            1.0,
            WeightDist::Uniform {
                low: -0.5,
                high: 1.5,
            },
            3,
        )
        .unwrap();
        let m = materialize(&uniform).unwrap();
        let ws = match m.weights() {
            Weights::PerEdge(ws) => ws.clone(),
            _ => unreachable!(),
        };
        assert!(ws.len() >= 100_000);
        let mean = ws.iter().sum::<f64>() / ws.len() as f64;
        let expect_mean = 0.5;
        let sd_of_mean = (2.0 / 12.0f64).sqrt() / (ws.len() as f64).sqrt();
        assert!((mean - expect_mean).abs() < 4.0 * sd_of_mean);
        let (min, max) = ws
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), &w| (lo.min(w), hi.max(w)));
        assert!(min >= -0.5 && max < 1.5);

        let normal = JitConnSpec::new(
            n,
            n,
            1.0,
            WeightDist::Normal {
                mu: 0.3,
                sigma: 0.7,
            },
            4,
        )
        .unwrap();
        let m = materialize(&normal).unwrap();
        let ws = match m.weights() {
            Weights::PerEdge(ws) => ws.clone(),
            _ => unreachable!(),
        };
        let len = ws.len() as f64;
        let mean = ws.iter().sum::<f64>() / len;
        let var = ws.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / len;
        assert!((mean - 0.3).abs() < 4.0 * 0.7 / len.sqrt());
        // variance of the sample variance ~ 2 sigma^4 / n
        assert!((var - 0.49).abs() < 4.0 * (2.0f64 / len).sqrt() * 0.49);
    }
}
