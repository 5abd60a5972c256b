//! Step-by-step execution of the discrete control law.
//!
//! Two interchangeable forms: the transfer-function controller with a
//! clamped accumulator (the production structure), and the state-space
//! current-observer controller that serves as its reference oracle. With
//! clamping disabled, both produce the same control sequence.

use nalgebra::{DMatrix, DVector};

use crate::design::{GainSet, PlantSpec};
use crate::discrete::{DiscreteAdrcTf, DiscreteObserverMatrices};
use crate::error::{Error, Result};

/// Common stepping interface so the simulation harness can drive either
/// controller form.
pub trait Controller {
    /// Consume one reference/measurement pair, produce one control sample.
    fn step(&mut self, r: f64, y: f64) -> Result<f64>;
    /// Zero all internal state, keeping configuration (limits included).
    fn reset(&mut self);
    fn sample_time(&self) -> f64;
}

/// Transfer-function controller: prefilter, incremental feedback filter and
/// a clamped accumulator.
///
/// Per step: `r_f = C_PF(r)`, `e = r_f - y`, `du = dC_FB(e)`,
/// `u = clamp(accumulator + du)`; the clamped value is what is stored, so
/// the integrator cannot wind up beyond the limits. The prefilter path is
/// open loop on `r` and carries no windup logic.
#[derive(Debug, Clone)]
pub struct TfController {
    n: usize,
    sample_time: f64,
    gamma: Vec<f64>,
    pf_den: Vec<f64>,
    beta: Vec<f64>,
    alpha: Vec<f64>,
    limits: Option<(f64, f64)>,
    // Delay lines: n+1 past references, n past prefilter outputs, n past
    // errors, n past feedback increments.
    r_hist: Vec<f64>,
    rf_hist: Vec<f64>,
    e_hist: Vec<f64>,
    v_hist: Vec<f64>,
    accumulator: f64,
}

impl TfController {
    pub fn new(coeffs: &DiscreteAdrcTf, limits: Option<(f64, f64)>) -> Result<Self> {
        if let Some((lo, hi)) = limits {
            let ordered = lo.is_finite() && hi.is_finite() && lo < hi;
            if !ordered {
                return Err(Error::InvalidLimits);
            }
        }
        if coeffs.beta[0] == 0.0 {
            return Err(Error::NormalizationFailure);
        }
        let n = coeffs.n;
        // beta_i / beta_0 precomputed so the hot path stays at one multiply
        // per stored coefficient.
        let pf_den: Vec<f64> = coeffs.beta[1..].iter().map(|b| b / coeffs.beta[0]).collect();
        Ok(TfController {
            n,
            sample_time: coeffs.sample_time,
            gamma: coeffs.gamma.clone(),
            pf_den,
            beta: coeffs.beta.clone(),
            alpha: coeffs.alpha.clone(),
            limits,
            r_hist: vec![0.0; n + 1],
            rf_hist: vec![0.0; n],
            e_hist: vec![0.0; n],
            v_hist: vec![0.0; n],
            accumulator: 0.0,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Static multiply count of one step: one multiply per stored
    /// coefficient, 4n + 3 in total.
    pub fn multiplies_per_step(&self) -> usize {
        self.gamma.len() + self.pf_den.len() + self.beta.len() + self.alpha.len()
    }

    pub fn accumulator(&self) -> f64 {
        self.accumulator
    }

    pub fn limits(&self) -> Option<(f64, f64)> {
        self.limits
    }
}

impl Controller for TfController {
    fn step(&mut self, r: f64, y: f64) -> Result<f64> {
        if !r.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteInput);
        }

        let mut rf = self.gamma[0] * r;
        for i in 1..self.gamma.len() {
            rf += self.gamma[i] * self.r_hist[i - 1];
        }
        for (c, past) in self.pf_den.iter().zip(&self.rf_hist) {
            rf -= c * past;
        }

        let e = rf - y;
        let mut du = self.beta[0] * e;
        for i in 1..self.beta.len() {
            du += self.beta[i] * self.e_hist[i - 1];
        }
        for (c, past) in self.alpha.iter().zip(&self.v_hist) {
            du -= c * past;
        }

        let mut u = self.accumulator + du;
        if let Some((lo, hi)) = self.limits {
            u = u.clamp(lo, hi);
        }
        self.accumulator = u;

        shift_in(&mut self.r_hist, r);
        shift_in(&mut self.rf_hist, rf);
        shift_in(&mut self.e_hist, e);
        shift_in(&mut self.v_hist, du);
        Ok(u)
    }

    fn reset(&mut self) {
        self.r_hist.iter_mut().for_each(|x| *x = 0.0);
        self.rf_hist.iter_mut().for_each(|x| *x = 0.0);
        self.e_hist.iter_mut().for_each(|x| *x = 0.0);
        self.v_hist.iter_mut().for_each(|x| *x = 0.0);
        self.accumulator = 0.0;
    }

    fn sample_time(&self) -> f64 {
        self.sample_time
    }
}

fn shift_in(line: &mut [f64], value: f64) {
    if line.is_empty() {
        return;
    }
    line.rotate_right(1);
    line[0] = value;
}

/// State-space controller: current observer plus static feedback.
///
/// Per step the estimate is advanced with the stored previous output and
/// the fresh measurement, then `u = (1/b0)(k1 r - k^T x_hat)` with the
/// trailing 1 on the disturbance estimate.
#[derive(Debug, Clone)]
pub struct SsController {
    a_eso: DMatrix<f64>,
    b_eso: DVector<f64>,
    l: DVector<f64>,
    k: Vec<f64>,
    inv_b0: f64,
    sample_time: f64,
    x_hat: DVector<f64>,
    u_prev: f64,
    scratch: DVector<f64>,
}

impl SsController {
    pub fn new(plant: &PlantSpec, gains: &GainSet, l_discrete: &[f64], sample_time: f64) -> Result<Self> {
        if gains.order() != plant.order() {
            return Err(Error::DimensionMismatch {
                expected: plant.order(),
                actual: gains.order(),
            });
        }
        let mats = DiscreteObserverMatrices::new(plant, l_discrete, sample_time)?;
        Ok(Self::from_matrices(&mats, gains.k(), l_discrete, plant.critical_gain()))
    }

    pub fn from_matrices(
        mats: &DiscreteObserverMatrices,
        k: &[f64],
        l_discrete: &[f64],
        b0: f64,
    ) -> Self {
        let m = k.len() + 1;
        SsController {
            a_eso: mats.a_eso.clone(),
            b_eso: mats.b_eso.clone(),
            l: DVector::from_column_slice(l_discrete),
            k: k.to_vec(),
            inv_b0: 1.0 / b0,
            sample_time: mats.sample_time,
            x_hat: DVector::zeros(m),
            u_prev: 0.0,
            scratch: DVector::zeros(m),
        }
    }

    /// Multiplies on the step path: the dense observer update plus the
    /// feedback law, (n+1)^2 + 2(n+1) + n + 2.
    pub fn multiplies_per_step(&self) -> usize {
        let m = self.x_hat.len();
        m * m + 2 * m + self.k.len() + 2
    }

    pub fn state_estimate(&self) -> &DVector<f64> {
        &self.x_hat
    }
}

impl Controller for SsController {
    fn step(&mut self, r: f64, y: f64) -> Result<f64> {
        if !r.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        // x_hat(k) = A_eso x_hat(k-1) + b_eso u(k-1) + l y(k)
        self.scratch.gemv(1.0, &self.a_eso, &self.x_hat, 0.0);
        self.scratch.axpy(self.u_prev, &self.b_eso, 1.0);
        self.scratch.axpy(y, &self.l, 1.0);
        std::mem::swap(&mut self.x_hat, &mut self.scratch);

        let mut fb = self.k[0] * r;
        for (ki, xi) in self.k.iter().zip(self.x_hat.iter()) {
            fb -= ki * xi;
        }
        fb -= self.x_hat[self.x_hat.len() - 1];
        let u = self.inv_b0 * fb;
        self.u_prev = u;
        Ok(u)
    }

    fn reset(&mut self) {
        self.x_hat.fill(0.0);
        self.u_prev = 0.0;
    }

    fn sample_time(&self) -> f64 {
        self.sample_time
    }
}
