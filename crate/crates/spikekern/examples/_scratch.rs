use spikekern::reservoir::*;
use spikekern::rng::SplitMix64;

fn sine3(step: u64, base: f64) -> f64 {
    let t = step as f64;
    let w1 = std::f64::consts::TAU / base;
    let w2 = w1 * std::f64::consts::SQRT_2;
    let w3 = w1 * 5.0f64.sqrt();
    ((w1 * t).sin() + (w2 * t).sin() + (w3 * t).sin()) / 3.0
}

fn trial(rho: f64, alpha: f64, s: f64, p_rec: f64, noise: f64, base: f64, train: usize, seed: u64) -> f64 {
    let params = ReservoirParams {
        n_in: 1, n_res: 400, n_out: 1,
        alpha, rho, input_scale: s,
        p_in: 1.0, p_rec, seed,
    };
    let washout = 200;
    let mut state = ReservoirState::zeros(params.n_res);
    let mut rls = RlsState::new(params.n_res, 1, 0.1).unwrap();
    let mut nrng = SplitMix64::new(777);
    let mut feedback = 0.0;
    for step in 0..(washout + train) as u64 {
        let u = if (step as usize) < washout {
            if step == 0 { 0.0 } else { sine3(step - 1, base) }
        } else { feedback };
        reservoir_step(&mut state, &params, &[u]).unwrap();
        if noise > 0.0 {
            for x in state.x.iter_mut() { *x += noise * (nrng.next_f64() * 2.0 - 1.0); }
        }
        if (step as usize) >= washout {
            let target = sine3(step, base);
            force_update(&mut rls, &state.x, &[target]).unwrap();
            feedback = readout(&state, &rls.w_out).unwrap()[0];
        } else {
            feedback = sine3(step, base);
        }
    }
    let w = rls.w_out.clone();
    let mut prev = feedback;
    let t0 = (washout + train) as u64;
    let mut preds = Vec::new();
    let mut truth = Vec::new();
    for k in 0..1000u64 {
        reservoir_step(&mut state, &params, &[prev]).unwrap();
        prev = readout(&state, &w).unwrap()[0];
        preds.push(prev);
        truth.push(sine3(t0 + k, base));
    }
    nrmse(&preds, &truth)
}

fn main() {
    for base in [30.0, 48.0] {
        for rho in [1.0, 1.2] {
            for alpha in [0.6, 0.9] {
                for s in [1.0, 2.0] {
                    for noise in [0.0, 0.02] {
                        let n = trial(rho, alpha, s, 0.05, noise, base, 2000, 42);
                        println!("base={base} rho={rho} a={alpha} s={s} noise={noise}: NRMSE={n:.4}");
                    }
                }
            }
        }
    }
}
