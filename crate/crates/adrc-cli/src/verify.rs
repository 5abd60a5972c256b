//! `adrc verify`: randomized oracle-equivalence and table-agreement suites.

use adrc_core::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub struct VerifyReport {
    pub lines: Vec<String>,
    pub failed: bool,
}

fn check(lines: &mut Vec<String>, failed: &mut bool, name: &str, n: usize, count: usize, dev: f64, tol: f64) {
    let status = if dev <= tol { "PASS" } else { "FAIL" };
    if dev > tol {
        *failed = true;
    }
    lines.push(format!(
        "{status} {name} n={n} trials={count} max_dev={dev:.3e} tol={tol:.0e}"
    ));
}

fn coeff_dev(got: &[f64], want: &[f64], anchor: f64) -> f64 {
    let scale = want.iter().fold(anchor, |m, x| m.max(x.abs()));
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-5 * scale))
        .fold(0.0, f64::max)
}

/// Run all checks for one order. `inject_fault` corrupts a feedback
/// coefficient before the first equivalence trial so the harness can
/// demonstrate a detection.
pub fn run(n: usize, trials: usize, seed: u64, inject_fault: bool) -> VerifyReport {
    let mut lines = Vec::new();
    let mut failed = false;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // TF form against the state-space oracle on random designs and inputs.
    let mut worst_eq = 0.0f64;
    for trial in 0..trials {
        let b0 = rng.gen_range(0.1..10.0);
        let omega_cl = rng.gen_range(0.5..5.0);
        let k_eso = rng.gen_range(1.0..15.0);
        let t = rng.gen_range(0.001..0.1);
        let plant = PlantSpec::new(n, b0).unwrap();
        let k = controller_gains(n, omega_cl).unwrap();
        let tuning = DiscreteTuning::from_bandwidth(t, omega_cl, k_eso).unwrap();
        let l = observer_gains_dt(n, &tuning).unwrap();
        let mut coeffs = discrete_tf_general(&plant, &k, &l, t).unwrap();
        if inject_fault && trial == 0 {
            coeffs.beta[0] *= 1.0 + 1e-6;
        }
        let mut tf = TfController::new(&coeffs, None).unwrap();
        let mats = DiscreteObserverMatrices::new(&plant, &l, t).unwrap();
        let mut ss = SsController::from_matrices(&mats, &k, &l, b0);
        let mut dev = 0.0f64;
        let mut peak = 0.0f64;
        for _ in 0..2000 {
            let r = rng.gen_range(-1.0..1.0);
            let y = rng.gen_range(-1.0..1.0);
            let u_tf = tf.step(r, y).unwrap();
            let u_ss = ss.step(r, y).unwrap();
            dev = dev.max((u_tf - u_ss).abs());
            peak = peak.max(u_ss.abs());
        }
        worst_eq = worst_eq.max(dev / peak.max(1.0));
    }
    check(&mut lines, &mut failed, "tf-ss-equivalence", n, trials, worst_eq, 1e-9);

    // Closed-form tables against the matrix/resolvent path.
    let tuples = 10 * trials;
    let mut worst_ct = 0.0f64;
    for _ in 0..tuples {
        let plant = PlantSpec::new(n, rng.gen_range(0.1..10.0)).unwrap();
        let tuning =
            ContinuousTuning::new(rng.gen_range(0.1..100.0), rng.gen_range(1.0..25.0)).unwrap();
        let table = continuous_tf_bandwidth(&plant, &tuning).unwrap();
        let gains = GainSet::bandwidth(n, &tuning).unwrap();
        let general = continuous_tf_general(&plant, &gains).unwrap();
        worst_ct = worst_ct
            .max(coeff_dev(&[table.k_int, table.k_ff], &[general.k_int, general.k_ff], 0.0))
            .max(coeff_dev(&table.alpha, &general.alpha, 1.0))
            .max(coeff_dev(&table.beta, &general.beta, 1.0))
            .max(coeff_dev(&table.gamma, &general.gamma, 1.0));
    }
    check(&mut lines, &mut failed, "continuous-table-match", n, tuples, worst_ct, 1e-12);

    let mut worst_dt = 0.0f64;
    for _ in 0..tuples {
        let b0 = rng.gen_range(0.1..10.0);
        let omega_cl = rng.gen_range(0.1..10.0);
        let t = rng.gen_range(0.001..0.5) / omega_cl;
        let k_eso = rng.gen_range(1.0..25.0);
        let plant = PlantSpec::new(n, b0).unwrap();
        let table = discrete_tf_bandwidth(&plant, omega_cl, k_eso, t).unwrap();
        let tuning = DiscreteTuning::from_bandwidth(t, omega_cl, k_eso).unwrap();
        let l = observer_gains_dt(n, &tuning).unwrap();
        let k = controller_gains(n, omega_cl).unwrap();
        let general = discrete_tf_general(&plant, &k, &l, t).unwrap();
        worst_dt = worst_dt
            .max(coeff_dev(&table.alpha, &general.alpha, 1.0))
            .max(coeff_dev(&table.beta, &general.beta, 0.0))
            .max(coeff_dev(&table.gamma, &general.gamma, 0.0));
    }
    check(&mut lines, &mut failed, "discrete-table-match", n, tuples, worst_dt, 1e-10);

    VerifyReport { lines, failed }
}
