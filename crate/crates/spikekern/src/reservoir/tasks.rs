//! Desk-scale training tasks.
//!
//! Two synthetic tasks exercise the full training machinery:
//!
//! * `sine` — autonomous generation of a sum of three incommensurate
//!   sinusoids. The readout is trained with teacher forcing (the input is
//!   the previous target sample); at test time the reservoir runs closed
//!   loop on its own predictions.
//! * `memory` — regress the input sample from `delay` steps ago out of the
//!   reservoir state, driven by a seeded random input stream.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

use super::esn::{readout, reservoir_step, ReservoirParams, ReservoirState};
use super::ridge::ridge_fit;
use super::rls::{force_update, RlsState};

/// Sum of three sinusoids with pairwise-irrational frequency ratios
/// (periods 80, 80/sqrt(2), 80/sqrt(5) steps), normalized to [-1, 1].
pub fn sine_target(step: u64) -> f64 {
    let t = step as f64;
    let w1 = std::f64::consts::TAU / 80.0;
    let w2 = w1 * std::f64::consts::SQRT_2;
    let w3 = w1 * 5.0f64.sqrt();
    ((w1 * t).sin() + (w2 * t).sin() + (w3 * t).sin()) / 3.0
}

/// Root-mean-square error normalized by the target's standard deviation.
pub fn nrmse(pred: &[f64], target: &[f64]) -> f64 {
    assert_eq!(pred.len(), target.len());
    let n = target.len() as f64;
    let mean_t = target.iter().sum::<f64>() / n;
    let var_t = target.iter().map(|t| (t - mean_t) * (t - mean_t)).sum::<f64>() / n;
    let mse = pred
        .iter()
        .zip(target)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n;
    (mse / var_t.max(f64::MIN_POSITIVE)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainMethod {
    /// Online recursive least squares; `delta` is the learning rate
    /// (initial `P = I / delta`).
    Force { delta: f64 },
    /// Offline ridge regression on the collected state trajectory.
    Ridge { lambda: f64 },
}

/// Result of a training run.
pub struct TaskOutcome {
    /// Per-step absolute readout error during the training phase.
    pub train_errors: Vec<f64>,
    /// Normalized RMSE over the held-out test window.
    pub test_nrmse: f64,
    pub w_out: DMatrix<f64>,
    /// Collected training trajectory (after washout), one row per step.
    pub states: DMatrix<f64>,
    /// Matching training targets, one row per step.
    pub targets: DMatrix<f64>,
}

/// Trains the sinusoid-generation task and evaluates it autonomously.
pub fn train_sine(
    params: &ReservoirParams,
    method: TrainMethod,
    washout: usize,
    train_steps: usize,
    test_steps: usize,
) -> Result<TaskOutcome> {
    params.validate()?;
    if params.n_in != 1 || params.n_out != 1 {
        return Err(Error::InvalidParameter(
            "sine task requires n_in = n_out = 1".into(),
        ));
    }
    let mut state = ReservoirState::zeros(params.n_res);
    let mut rls = RlsState::new(params.n_res, 1, force_delta(method))?;
    let mut rows = Vec::with_capacity(train_steps);
    let mut targets = Vec::with_capacity(train_steps);
    let mut train_errors = Vec::new();

    // Teacher forcing: input is the previous target sample.
    for step in 0..(washout + train_steps) as u64 {
        let u = if step == 0 { 0.0 } else { sine_target(step - 1) };
        reservoir_step(&mut state, params, &[u])?;
        if (step as usize) < washout {
            continue;
        }
        let target = sine_target(step);
        if let TrainMethod::Force { .. } = method {
            let y = readout(&state, &rls.w_out)?[0];
            train_errors.push((y - target).abs());
            force_update(&mut rls, &state.x, &[target])?;
        }
        rows.push(state.x.clone());
        targets.push(target);
    }

    let states_m = DMatrix::from_fn(rows.len(), params.n_res, |r, c| rows[r][c]);
    let targets_m = DMatrix::from_fn(targets.len(), 1, |r, _| targets[r]);
    let w_out = match method {
        TrainMethod::Force { .. } => rls.w_out.clone(),
        TrainMethod::Ridge { lambda } => ridge_fit(&states_m, &targets_m, lambda)?,
    };

    // Autonomous continuation: feed back the model's own prediction.
    let mut prediction = targets.last().copied().unwrap_or(0.0);
    let mut preds = Vec::with_capacity(test_steps);
    let mut truth = Vec::with_capacity(test_steps);
    let t0 = (washout + train_steps) as u64;
    for step in 0..test_steps as u64 {
        reservoir_step(&mut state, params, &[prediction])?;
        prediction = readout(&state, &w_out)?[0];
        preds.push(prediction);
        truth.push(sine_target(t0 + step));
    }

    Ok(TaskOutcome {
        train_errors,
        test_nrmse: nrmse(&preds, &truth),
        w_out,
        states: states_m,
        targets: targets_m,
    })
}

/// Trains the delayed-memory regression task: target is the input from
/// `delay` steps ago.
pub fn train_memory(
    params: &ReservoirParams,
    method: TrainMethod,
    delay: usize,
    washout: usize,
    train_steps: usize,
    test_steps: usize,
) -> Result<TaskOutcome> {
    params.validate()?;
    if params.n_in != 1 || params.n_out != 1 {
        return Err(Error::InvalidParameter(
            "memory task requires n_in = n_out = 1".into(),
        ));
    }
    if washout <= delay {
        return Err(Error::InvalidParameter(
            "washout must exceed the recall delay".into(),
        ));
    }
    let mut input_rng = SplitMix64::new(crate::rng::derive_seed(params.seed, 100));
    let total = washout + train_steps + test_steps;
    let inputs: Vec<f64> = (0..total).map(|_| input_rng.next_f64() * 2.0 - 1.0).collect();

    let mut state = ReservoirState::zeros(params.n_res);
    let mut rls = RlsState::new(params.n_res, 1, force_delta(method))?;
    let mut rows = Vec::new();
    let mut targets = Vec::new();
    let mut train_errors = Vec::new();
    let mut preds = Vec::new();
    let mut truth = Vec::new();

    for step in 0..total {
        reservoir_step(&mut state, params, &[inputs[step]])?;
        if step < washout {
            continue;
        }
        let target = inputs[step - delay];
        if step < washout + train_steps {
            if let TrainMethod::Force { .. } = method {
                let y = readout(&state, &rls.w_out)?[0];
                train_errors.push((y - target).abs());
                force_update(&mut rls, &state.x, &[target])?;
            }
            rows.push(state.x.clone());
            targets.push(target);
        } else {
            // Test phase: keep the state, evaluate once weights are final.
            preds.push(state.x.clone());
            truth.push(target);
        }
    }

    let states_m = DMatrix::from_fn(rows.len(), params.n_res, |r, c| rows[r][c]);
    let targets_m = DMatrix::from_fn(targets.len(), 1, |r, _| targets[r]);
    let w_out = match method {
        TrainMethod::Force { .. } => rls.w_out.clone(),
        TrainMethod::Ridge { lambda } => ridge_fit(&states_m, &targets_m, lambda)?,
    };
    let pred_values: Vec<f64> = preds
        .iter()
        .map(|x| {
            readout(
                &ReservoirState { x: x.clone() },
                &w_out,
            )
            .map(|y| y[0])
        })
        .collect::<Result<_>>()?;

    Ok(TaskOutcome {
        train_errors,
        test_nrmse: nrmse(&pred_values, &truth),
        w_out,
        states: states_m,
        targets: targets_m,
    })
}

fn force_delta(method: TrainMethod) -> f64 {
    match method {
        TrainMethod::Force { delta } => delta,
        TrainMethod::Ridge { .. } => 0.1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nrmse_zero_for_exact_prediction_and_one_for_mean() {
        let target: Vec<f64> = (0..100).map(|k| sine_target(k)).collect();
        assert_eq!(nrmse(&target, &target), 0.0);
        let mean = target.iter().sum::<f64>() / 100.0;
        let mean_pred = vec![mean; 100];
        assert!((nrmse(&mean_pred, &target) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sine_target_is_bounded_and_aperiodic() {
        let v: Vec<f64> = (0..10_000).map(sine_target).collect();
        assert!(v.iter().all(|x| x.abs() <= 1.0));
        // no exact repetition of the first sample's neighborhood
        let close = v
            .windows(2)
            .skip(1)
            .filter(|w| (w[0] - v[0]).abs() < 1e-9 && (w[1] - v[1]).abs() < 1e-9)
            .count();
        assert_eq!(close, 0);
    }
}
