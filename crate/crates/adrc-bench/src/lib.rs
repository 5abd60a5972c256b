//! Shared fixtures for the benchmark targets.

use adrc_core::*;

pub struct Fixture {
    pub plant: PlantSpec,
    pub k: Vec<f64>,
    pub l_ct: Vec<f64>,
    pub l_dt: Vec<f64>,
    pub sample_time: f64,
    pub coeffs: DiscreteAdrcTf,
}

pub fn fixture(n: usize) -> Fixture {
    let omega_cl = 2.0;
    let k_eso = 6.0;
    let sample_time = 0.005;
    let plant = PlantSpec::new(n, 1.4).unwrap();
    let k = controller_gains(n, omega_cl).unwrap();
    let ct = ContinuousTuning::new(omega_cl, k_eso).unwrap();
    let l_ct = observer_gains_ct(n, &ct).unwrap();
    let dt = DiscreteTuning::from_bandwidth(sample_time, omega_cl, k_eso).unwrap();
    let l_dt = observer_gains_dt(n, &dt).unwrap();
    let coeffs = discrete_tf_general(&plant, &k, &l_dt, sample_time).unwrap();
    Fixture { plant, k, l_ct, l_dt, sample_time, coeffs }
}
