//! Continuous-time ADRC design.
//!
//! Bandwidth-parameterized controller/observer gains for the disturbed
//! integrator-chain model, and the realizable three-block transfer-function
//! representation (feedback controller, reference prefilter, reference
//! feedforward). Coefficients come either from the closed-form tables for
//! first- and second-order designs or from a generic matrix/resolvent
//! derivation that works for any gains.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, Rat, RatMat};

/// Maximum order accepted by the generic matrix path. Higher orders are
/// numerically fragile in monomial basis and outside practical use.
pub const MAX_ORDER: usize = 5;

/// The ADRC design model: an n-th order integrator chain with critical gain
/// b0. Everything else about the true plant is treated as disturbance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantSpec {
    n: usize,
    b0: f64,
}

impl PlantSpec {
    pub fn new(n: usize, b0: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOrder(n));
        }
        if !b0.is_finite() || b0 == 0.0 {
            return Err(Error::InvalidCriticalGain(b0));
        }
        Ok(PlantSpec { n, b0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn critical_gain(&self) -> f64 {
        self.b0
    }
}

/// Continuous tuning parameters: desired closed-loop bandwidth and the
/// relative observer bandwidth factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousTuning {
    omega_cl: f64,
    k_eso: f64,
}

impl ContinuousTuning {
    pub fn new(omega_cl: f64, k_eso: f64) -> Result<Self> {
        if !omega_cl.is_finite() || omega_cl <= 0.0 {
            return Err(Error::InvalidBandwidth(omega_cl));
        }
        if !k_eso.is_finite() || k_eso <= 0.0 {
            return Err(Error::InvalidObserverFactor(k_eso));
        }
        Ok(ContinuousTuning { omega_cl, k_eso })
    }

    pub fn omega_cl(&self) -> f64 {
        self.omega_cl
    }

    pub fn k_eso(&self) -> f64 {
        self.k_eso
    }

    /// Observer pole location, `-k_eso * omega_cl`.
    pub fn observer_pole(&self) -> f64 {
        -self.k_eso * self.omega_cl
    }
}

/// Controller gains `k[1..n]` and observer gains `l[1..n+1]`. The trailing 1
/// on the extended state is implicit and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSet {
    k: Vec<f64>,
    l: Vec<f64>,
}

impl GainSet {
    /// Build from explicit gains. Gains must be finite and strictly
    /// positive; the design assumes non-zero controller and observer gains.
    pub fn from_gains(k: Vec<f64>, l: Vec<f64>) -> Result<Self> {
        if l.len() != k.len() + 1 {
            return Err(Error::DimensionMismatch { expected: k.len() + 1, actual: l.len() });
        }
        if k.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        if k.iter().chain(&l).any(|&g| !g.is_finite() || g <= 0.0) {
            return Err(Error::InvalidGains);
        }
        Ok(GainSet { k, l })
    }

    /// Bandwidth parameterization: all controller poles at `-omega_cl`, all
    /// observer poles at `-k_eso * omega_cl`.
    pub fn bandwidth(n: usize, tuning: &ContinuousTuning) -> Result<Self> {
        let k = controller_gains(n, tuning.omega_cl)?;
        let l = observer_gains_ct(n, tuning)?;
        Ok(GainSet { k, l })
    }

    pub fn order(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn l(&self) -> &[f64] {
        &self.l
    }
}

/// Controller gains from pole placement at `-omega_cl`:
/// `k_i = n! / ((n-i+1)! (i-1)!) * omega_cl^(n-i+1)`.
pub fn controller_gains(n: usize, omega_cl: f64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if !omega_cl.is_finite() || omega_cl <= 0.0 {
        return Err(Error::InvalidBandwidth(omega_cl));
    }
    Ok((1..=n)
        .map(|i| binomial(n, n - i + 1) * omega_cl.powi((n - i + 1) as i32))
        .collect())
}

/// Observer gains from pole placement at `-k_eso * omega_cl`:
/// `l_i = (n+1)! / ((n+1-i)! i!) * (k_eso omega_cl)^i`.
pub fn observer_gains_ct(n: usize, tuning: &ContinuousTuning) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    let pole = tuning.k_eso * tuning.omega_cl;
    Ok((1..=n + 1).map(|i| binomial(n + 1, i) * pole.powi(i as i32)).collect())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Integrator-chain system matrices and the closed-loop controller/observer
/// matrix `A_cl = A - l c^T - (1/b0) b k^T` (with the implicit trailing 1
/// appended to k). The last column of `A_cl` is identically zero, which is
/// what puts the integrator into the feedback controller.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub a_cl: DMatrix<f64>,
}

pub fn build_system_matrices(plant: &PlantSpec, gains: &GainSet) -> Result<SystemMatrices> {
    if gains.order() != plant.n {
        return Err(Error::DimensionMismatch { expected: plant.n, actual: gains.order() });
    }
    Ok(assemble_matrices(plant.n, plant.b0, gains.k(), gains.l()))
}

/// Raw assembly without gain validation; test code uses this for degenerate
/// gain sets the public constructor rejects.
pub(crate) fn assemble_matrices(n: usize, b0: f64, k: &[f64], l: &[f64]) -> SystemMatrices {
    let m = n + 1;
    let mut a = DMatrix::zeros(m, m);
    for i in 0..n {
        a[(i, i + 1)] = 1.0;
    }
    let mut b = DVector::zeros(m);
    b[n - 1] = b0;
    let mut c = DVector::zeros(m);
    c[0] = 1.0;

    let mut a_cl = a.clone();
    for (i, li) in l.iter().enumerate() {
        a_cl[(i, 0)] -= li;
    }
    // (1/b0) b k^T only touches row n-1, where b holds b0; the trailing 1
    // on the extended state rides along implicitly.
    for (j, kj) in k.iter().chain(std::iter::once(&1.0)).enumerate() {
        a_cl[(n - 1, j)] -= kj;
    }
    SystemMatrices { a, b, c, a_cl }
}

/// Coefficients of the realizable continuous-time controller:
///
/// ```text
/// C_FB(s) = K_I / s * (1 + sum beta_i s^i) / (1 + sum alpha_i s^i)
/// C_PF(s) = (1 + sum gamma_i s^i) / (1 + sum beta_i s^i)
/// C_FF(s) = K_FF * s^n / (1 + sum alpha_i s^i)
/// ```
///
/// with `K_FF = K_I / l_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousAdrcTf {
    pub n: usize,
    pub k_int: f64,
    pub k_ff: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// Generic matrix/resolvent derivation of the controller coefficients,
/// valid for any gain set with 1 <= n <= 5.
///
/// `C_FB` comes from `k^T adj(sI - A_cl) l / (b0 det(sI - A_cl))`; the
/// origin pole contributed by the rank-deficient `A_cl` is cancelled, both
/// polynomials are normalized to constant term 1, and the feedforward and
/// prefilter blocks are extracted from the same resolvent. The whole
/// pipeline runs in exact rational arithmetic, so the structural identities
/// (origin pole, feedforward cancellation, prefilter denominator equal to
/// the feedback numerator) are checked exactly rather than to a tolerance.
pub fn continuous_tf_general(plant: &PlantSpec, gains: &GainSet) -> Result<ContinuousAdrcTf> {
    if gains.order() != plant.n {
        return Err(Error::DimensionMismatch { expected: plant.n, actual: gains.order() });
    }
    if plant.n > MAX_ORDER {
        return Err(Error::UnsupportedOrder(plant.n));
    }
    let n = plant.n;
    let m = n + 1;

    // A_cl in exact arithmetic.
    let b0 = exact::rat(plant.b0);
    let k: Vec<Rat> = gains.k().iter().map(|&x| exact::rat(x)).collect();
    let l: Vec<Rat> = gains.l().iter().map(|&x| exact::rat(x)).collect();
    let mut k_full = k.clone();
    k_full.push(exact::rat_int(1));

    let mut a_cl = RatMat::zeros(m);
    for i in 0..n {
        a_cl.set(i, i + 1, exact::rat_int(1));
    }
    for (i, li) in l.iter().enumerate() {
        let v = a_cl.at(i, 0) - li;
        a_cl.set(i, 0, v);
    }
    for (j, kj) in k_full.iter().enumerate() {
        let v = a_cl.at(n - 1, j) - kj;
        a_cl.set(n - 1, j, v);
    }

    let (d, b_adj) = exact::faddeev_leverrier(&a_cl);

    // Structural origin pole: A_cl's last column is zero, so d[0] = 0.
    if !d[0].is_zero() {
        return Err(Error::DegenerateGains);
    }
    if d[1].is_zero() {
        return Err(Error::DegenerateGains);
    }

    // Feedback numerator q(s) = k^T adj(sI - A_cl) l, degree n.
    let q: Vec<Rat> = b_adj.iter().map(|bi| exact::dot(&k_full, &bi.mat_vec(&l))).collect();
    if q[0].is_zero() {
        return Err(Error::NormalizationFailure);
    }

    // Feedforward cancellation: C_FF = k1 s^{n+1} / (b0 d(s)) collapses to
    // an n-th order high-pass iff q(0) = k1 l_{n+1}, which also makes
    // K_FF l_{n+1} = K_I.
    if q[0] != &k[0] * &l[n] {
        return Err(Error::NormalizationFailure);
    }

    // Prefilter numerator p(s) = k1 (d(s) - s^{n+1} - (1/b0) k^T adj(sI-A_cl) b),
    // whose denominator (= q) must share its constant term.
    let mut b_vec = vec![Rat::zero(); m];
    b_vec[n - 1] = b0.clone();
    let mut p: Vec<Rat> = (0..m + 1)
        .map(|i| {
            let mut v = d[i].clone();
            if i == m {
                v -= exact::rat_int(1);
            }
            if i < m {
                v -= exact::dot(&k_full, &b_adj[i].mat_vec(&b_vec)) / &b0;
            }
            v * &k[0]
        })
        .collect();
    if p[m] != Rat::zero() {
        return Err(Error::NormalizationFailure);
    }
    p.truncate(m);
    if p[0] != q[0] {
        return Err(Error::NormalizationFailure);
    }

    let k_int = &q[0] / (&b0 * &d[1]);
    let k_ff = &k[0] / (&b0 * &d[1]);
    let alpha: Vec<f64> = (1..=n).map(|i| exact::to_f64(&(&d[i + 1] / &d[1]))).collect();
    let beta: Vec<f64> = (1..=n).map(|i| exact::to_f64(&(&q[i] / &q[0]))).collect();
    let gamma: Vec<f64> = (1..=n).map(|i| exact::to_f64(&(&p[i] / &p[0]))).collect();

    Ok(ContinuousAdrcTf {
        n,
        k_int: exact::to_f64(&k_int),
        k_ff: exact::to_f64(&k_ff),
        alpha,
        beta,
        gamma,
    })
}

/// Closed-form coefficients under bandwidth parameterization, straight from
/// the first- and second-order tables. Orders above 2 fall back to the
/// generic matrix path with bandwidth gains.
pub fn continuous_tf_bandwidth(plant: &PlantSpec, tuning: &ContinuousTuning) -> Result<ContinuousAdrcTf> {
    let b0 = plant.b0;
    let w = tuning.omega_cl;
    let k = tuning.k_eso;
    match plant.n {
        1 => {
            let denom = 1.0 + 2.0 * k;
            Ok(ContinuousAdrcTf {
                n: 1,
                k_int: (1.0 / b0) * k * k * w * w / denom,
                k_ff: (1.0 / b0) / denom,
                alpha: vec![1.0 / (w * denom)],
                beta: vec![(2.0 + k) / (k * w)],
                gamma: vec![2.0 / (k * w)],
            })
        }
        2 => {
            let denom = 1.0 + 6.0 * k + 3.0 * k * k;
            Ok(ContinuousAdrcTf {
                n: 2,
                k_int: (1.0 / b0) * k.powi(3) * w.powi(3) / denom,
                k_ff: (1.0 / b0) / denom,
                alpha: vec![(2.0 + 3.0 * k) / (w * denom), 1.0 / (w * w * denom)],
                beta: vec![(3.0 / k + 2.0) / w, (3.0 / (k * k) + 6.0 / k + 1.0) / (w * w)],
                gamma: vec![3.0 / (k * w), 3.0 / (k * k * w * w)],
            })
        }
        n if n <= MAX_ORDER => {
            let gains = GainSet::bandwidth(n, tuning)?;
            continuous_tf_general(plant, &gains)
        }
        n => Err(Error::UnsupportedOrder(n)),
    }
}
