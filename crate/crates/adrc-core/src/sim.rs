//! Discrete-time closed-loop simulation.
//!
//! An arbitrary LTI plant is realized in controllable canonical form,
//! discretized ZOH-exactly through the matrix exponential, and driven by
//! either controller form under piecewise-constant reference and input
//! disturbance profiles with seeded Gaussian measurement noise.
//!
//! Loop timing follows the current-observer convention: the measurement
//! `y(k)` is taken first, the controller consumes it at the same instant,
//! and `u(k)` is held over `[k, k+1)`.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::freq::RationalTf;
use crate::poly;
use crate::runtime::Controller;

/// Plant output magnitude beyond which a run is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// Default simulation sample time for a bandwidth-parameterized design,
/// `2 pi / (200 k_eso omega_cl)`: two hundred samples per observer time
/// constant keeps the observer poles well inside the Nyquist range.
pub fn default_sample_time(omega_cl: f64, k_eso: f64) -> f64 {
    2.0 * std::f64::consts::PI / (200.0 * k_eso * omega_cl)
}

/// Continuous-time state-space plant, controllable canonical realization.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiPlant {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub d: f64,
}

impl LtiPlant {
    /// Frequency response of the realization, `c^T (j w I - A)^-1 b + d`,
    /// computed through the resolvent polynomials.
    pub fn response(&self, omega: f64) -> num_complex::Complex64 {
        use num_complex::Complex64;
        let m = self.a.nrows();
        if m == 0 {
            return Complex64::new(self.d, 0.0);
        }
        let r = crate::resolvent::resolvent_polynomials(&self.a);
        let s = Complex64::new(0.0, omega);
        let det = poly::eval(&r.charpoly, s);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, bi) in r.adjugate.iter().enumerate() {
            let bv = bi * &self.b;
            let contraction: f64 = self.c.iter().zip(bv.iter()).map(|(c, v)| c * v).sum();
            acc += s.powu(i as u32) * contraction;
        }
        acc / det + self.d
    }
}

/// ZOH-discretized plant at a fixed sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePlant {
    pub a_d: DMatrix<f64>,
    pub b_d: DVector<f64>,
    pub c: DVector<f64>,
    pub d: f64,
    pub sample_time: f64,
}

/// Controllable canonical realization of a proper transfer function.
pub fn plant_from_tf(tf: &RationalTf) -> Result<LtiPlant> {
    let num = tf.num();
    let den = tf.den();
    if num.len() > den.len() {
        return Err(Error::ImproperTf);
    }
    let m = den.len() - 1;
    let lead = den[m];
    let den_n: Vec<f64> = den.iter().map(|c| c / lead).collect();
    let mut num_n = vec![0.0; m + 1];
    for (i, &c) in num.iter().enumerate() {
        num_n[i] = c / lead;
    }
    let d = num_n[m];

    let mut a = DMatrix::zeros(m, m);
    for i in 0..m.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    if m > 0 {
        for j in 0..m {
            a[(m - 1, j)] = -den_n[j];
        }
    }
    let mut b = DVector::zeros(m);
    if m > 0 {
        b[m - 1] = 1.0;
    }
    let c = DVector::from_fn(m, |i, _| num_n[i] - d * den_n[i]);
    Ok(LtiPlant { a, b, c, d })
}

/// Exact ZOH discretization through the exponential of the augmented
/// `[[A, b], [0, 0]]` block (scaling and squaring).
pub fn zoh_discretize_plant(plant: &LtiPlant, sample_time: f64) -> Result<DiscretePlant> {
    if !sample_time.is_finite() || sample_time <= 0.0 {
        return Err(Error::InvalidSampleTime(sample_time));
    }
    let m = plant.a.nrows();
    let mut augmented = DMatrix::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            augmented[(i, j)] = plant.a[(i, j)] * sample_time;
        }
        augmented[(i, m)] = plant.b[i] * sample_time;
    }
    let phi = augmented.exp();
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::MatrixExpOverflow);
    }
    let a_d = DMatrix::from_fn(m, m, |i, j| phi[(i, j)]);
    let b_d = DVector::from_fn(m, |i, _| phi[(i, m)]);
    Ok(DiscretePlant { a_d, b_d, c: plant.c.clone(), d: plant.d, sample_time })
}

/// Piecewise-constant profile segment: `value` holds from time `at` until
/// the next segment (0 before the first segment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub at: f64,
    pub value: f64,
}

/// Value of a profile at time `t`; segments must be sorted by `at`.
pub fn profile_value(profile: &[Segment], t: f64) -> f64 {
    let idx = profile.partition_point(|seg| seg.at <= t);
    if idx == 0 {
        0.0
    } else {
        profile[idx - 1].value
    }
}

/// Simulation scenario. `input_limits`, when set, saturate the plant input
/// (actuator model) independently of any controller-internal clamping.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sample_time: f64,
    pub steps: usize,
    pub r_profile: Vec<Segment>,
    pub d_profile: Vec<Segment>,
    pub noise_sigma: f64,
    pub seed: u64,
    pub input_limits: Option<(f64, f64)>,
}

impl Scenario {
    pub fn step(sample_time: f64, steps: usize, amplitude: f64) -> Self {
        Scenario {
            sample_time,
            steps,
            r_profile: vec![Segment { at: 0.0, value: amplitude }],
            d_profile: vec![],
            noise_sigma: 0.0,
            seed: 0,
            input_limits: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.sample_time.is_finite() || self.sample_time <= 0.0 {
            return Err(Error::InvalidSampleTime(self.sample_time));
        }
        if self.steps < 1 {
            return Err(Error::InvalidOrder(0));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(Error::NonFiniteInput);
        }
        if let Some((lo, hi)) = self.input_limits {
            let ordered = lo < hi;
            if !ordered {
                return Err(Error::InvalidLimits);
            }
        }
        for profile in [&self.r_profile, &self.d_profile] {
            if profile.windows(2).any(|w| w[0].at > w[1].at) {
                return Err(Error::NonFiniteInput);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub r: f64,
    pub y: f64,
    pub u: f64,
    pub d: f64,
    pub noise: f64,
}

/// Per-step record of a closed-loop run. `diverged_at` carries the step
/// index at which `|y|` left the divergence bound; rows stop there.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub rows: Vec<TraceRow>,
    pub diverged_at: Option<usize>,
}

impl SimTrace {
    /// CSV emission: header `t,r,y,u,d,n`, 17 significant digits, LF.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(b"t,r,y,u,d,n\n")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                g17(row.t),
                g17(row.r),
                g17(row.y),
                g17(row.u),
                g17(row.d),
                g17(row.noise)
            )?;
        }
        Ok(())
    }
}

/// Run the loop: `y(k) = c^T x(k) + n(k)`, `u(k) = step(r(k), y(k))`, then
/// the plant advances with `sat(u(k)) + d(k)` held over the interval.
pub fn run_closed_loop(
    plant: &DiscretePlant,
    controller: &mut dyn Controller,
    scenario: &Scenario,
) -> Result<SimTrace> {
    scenario.validate()?;
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
    if !rel(plant.sample_time, scenario.sample_time) {
        return Err(Error::InvalidSampleTime(plant.sample_time));
    }
    if !rel(controller.sample_time(), scenario.sample_time) {
        return Err(Error::InvalidSampleTime(controller.sample_time()));
    }
    if plant.d != 0.0 {
        return Err(Error::DirectFeedthrough);
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(scenario.seed);
    let noise_dist = if scenario.noise_sigma > 0.0 {
        Some(Normal::new(0.0, scenario.noise_sigma).expect("validated sigma"))
    } else {
        None
    };

    let mut x = DVector::<f64>::zeros(plant.a_d.nrows());
    let mut x_next = x.clone();
    let mut rows = Vec::with_capacity(scenario.steps);
    let mut diverged_at = None;

    for k in 0..scenario.steps {
        let t = k as f64 * scenario.sample_time;
        let r = profile_value(&scenario.r_profile, t);
        let d = profile_value(&scenario.d_profile, t);
        let noise = noise_dist.as_ref().map_or(0.0, |dist| dist.sample(&mut rng));
        let y = self_dot(&plant.c, &x) + noise;
        if !y.is_finite() || y.abs() > DIVERGENCE_LIMIT {
            diverged_at = Some(k);
            break;
        }
        let u = controller.step(r, y)?;
        let u_applied = match scenario.input_limits {
            Some((lo, hi)) => u.clamp(lo, hi),
            None => u,
        };
        x_next.gemv(1.0, &plant.a_d, &x, 0.0);
        x_next.axpy(u_applied + d, &plant.b_d, 1.0);
        std::mem::swap(&mut x, &mut x_next);
        rows.push(TraceRow { t, r, y, u, d, noise });
    }

    Ok(SimTrace { rows, diverged_at })
}

fn self_dot(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Step-response metrics measured against the final reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMetrics {
    /// Peak excursion beyond the final reference, percent of step size.
    pub overshoot_pct: f64,
    /// Time from the step to the last entry into the 2% band, `None` if the
    /// trace never settles.
    pub settling_time: Option<f64>,
    /// Total variation of the control signal.
    pub control_effort: f64,
    pub peak_control: f64,
}

pub fn metrics(trace: &SimTrace) -> Result<StepMetrics> {
    if let Some(step) = trace.diverged_at {
        return Err(Error::DivergedTrace { step });
    }
    if trace.rows.is_empty() {
        return Err(Error::NoStepFound);
    }
    let r0 = trace.rows[0].r;
    let (step_index, base) = if r0 != 0.0 {
        (0, 0.0)
    } else {
        let idx = trace
            .rows
            .iter()
            .position(|row| row.r != r0)
            .ok_or(Error::NoStepFound)?;
        (idx, r0)
    };
    let target = trace.rows[trace.rows.len() - 1].r;
    let step_size = target - base;
    if step_size == 0.0 {
        return Err(Error::NoStepFound);
    }
    let direction = step_size.signum();

    let mut overshoot = 0.0f64;
    for row in &trace.rows[step_index..] {
        overshoot = overshoot.max((row.y - target) * direction / step_size.abs() * 100.0);
    }

    let band = 0.02 * step_size.abs();
    let mut settled_from = None;
    for (i, row) in trace.rows.iter().enumerate().skip(step_index) {
        if (row.y - target).abs() <= band {
            if settled_from.is_none() {
                settled_from = Some(i);
            }
        } else {
            settled_from = None;
        }
    }
    let dt = if trace.rows.len() > 1 {
        trace.rows[1].t - trace.rows[0].t
    } else {
        0.0
    };
    let settling_time = settled_from.map(|i| (i - step_index) as f64 * dt);

    let control_effort = trace
        .rows
        .windows(2)
        .map(|w| (w[1].u - w[0].u).abs())
        .sum();
    let peak_control = trace.rows.iter().fold(0.0f64, |m, row| m.max(row.u.abs()));

    Ok(StepMetrics { overshoot_pct: overshoot, settling_time, control_effort, peak_control })
}
