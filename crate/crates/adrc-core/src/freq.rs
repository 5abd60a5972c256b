//! Frequency-domain analysis.
//!
//! Rational transfer functions over `s` or `z^-1`, conversion of the
//! controller coefficient sets into rational blocks, the gang-of-six
//! closed-loop transfer functions, closed-form poles/zeros of the feedback
//! controller, and crossover-based estimation of the critical gain
//! parameter from plant magnitude data.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::design::ContinuousAdrcTf;
use crate::discrete::DiscreteAdrcTf;
use crate::error::{Error, Result};
use crate::poly;

/// Evaluation domain of a rational transfer function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Coefficients over ascending powers of `s`.
    Continuous,
    /// Coefficients over ascending powers of `z^-1` at the given sample time.
    Discrete { sample_time: f64 },
}

/// Rational transfer function with ascending coefficient sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTf {
    num: Vec<f64>,
    den: Vec<f64>,
    domain: Domain,
}

impl RationalTf {
    pub fn new(num: Vec<f64>, den: Vec<f64>, domain: Domain) -> Result<Self> {
        let num = poly::trim(num);
        let den = poly::trim(den);
        if den.iter().all(|&c| c == 0.0) {
            return Err(Error::AlgebraicDegeneracy);
        }
        Ok(RationalTf { num, den, domain })
    }

    pub fn continuous(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        Self::new(num, den, Domain::Continuous)
    }

    pub fn discrete(num: Vec<f64>, den: Vec<f64>, sample_time: f64) -> Result<Self> {
        if !sample_time.is_finite() || sample_time <= 0.0 {
            return Err(Error::InvalidSampleTime(sample_time));
        }
        Self::new(num, den, Domain::Discrete { sample_time })
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Degree of the numerator minus degree of the denominator.
    pub fn relative_degree(&self) -> isize {
        self.num.len() as isize - self.den.len() as isize
    }

    /// Complex gain at angular frequency `omega`: Horner evaluation at
    /// `s = j omega` (continuous) or `z^-1 = exp(-j omega T)` (discrete).
    pub fn response(&self, omega: f64) -> Result<Complex64> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::NonFiniteInput);
        }
        let x = match self.domain {
            Domain::Continuous => Complex64::new(0.0, omega),
            Domain::Discrete { sample_time } => {
                if omega >= std::f64::consts::PI / sample_time {
                    return Err(Error::NonFiniteInput);
                }
                Complex64::from_polar(1.0, -omega * sample_time)
            }
        };
        let den = poly::eval(&self.den, x);
        if den.norm() < 1e-300 {
            return Err(Error::PoleHit);
        }
        Ok(poly::eval(&self.num, x) / den)
    }

    pub fn magnitude_db(&self, omega: f64) -> Result<f64> {
        Ok(20.0 * self.response(omega)?.norm().log10())
    }

    pub fn phase_deg(&self, omega: f64) -> Result<f64> {
        Ok(self.response(omega)?.arg().to_degrees())
    }

    fn same_domain(&self, other: &RationalTf) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::AlgebraicDegeneracy);
        }
        Ok(())
    }

    /// Product, by polynomial multiplication; no cancellation is attempted.
    pub fn mul(&self, other: &RationalTf) -> Result<RationalTf> {
        self.same_domain(other)?;
        RationalTf::new(
            poly::mul(&self.num, &other.num),
            poly::mul(&self.den, &other.den),
            self.domain,
        )
    }

    /// Sum over the common denominator; no cancellation is attempted.
    pub fn add(&self, other: &RationalTf) -> Result<RationalTf> {
        self.same_domain(other)?;
        RationalTf::new(
            poly::add(
                &poly::mul(&self.num, &other.den),
                &poly::mul(&other.num, &self.den),
            ),
            poly::mul(&self.den, &other.den),
            self.domain,
        )
    }

    pub fn neg(&self) -> RationalTf {
        RationalTf {
            num: poly::scale(&self.num, -1.0),
            den: self.den.clone(),
            domain: self.domain,
        }
    }

    /// Numerator roots paired with denominator roots closer than
    /// `rel_tol * max(1, |root|)`; a nonempty result flags factors that a
    /// symbolic treatment would have cancelled.
    pub fn near_cancellations(&self, rel_tol: f64) -> Vec<(Complex64, Complex64)> {
        let zeros = poly_roots(&self.num);
        let poles = poly_roots(&self.den);
        let mut pairs = Vec::new();
        for &z in &zeros {
            for &p in &poles {
                if (z - p).norm() <= rel_tol * p.norm().max(1.0) {
                    pairs.push((z, p));
                }
            }
        }
        pairs
    }
}

/// The three continuous controller blocks as rational functions.
#[derive(Debug, Clone)]
pub struct ControllerTfs {
    pub feedback: RationalTf,
    pub prefilter: RationalTf,
    pub feedforward: RationalTf,
}

/// Expand the coefficient set into rational blocks:
/// `C_FB = K_I (1 + sum beta s^i) / (s (1 + sum alpha s^i))`,
/// `C_PF = (1 + sum gamma s^i) / (1 + sum beta s^i)`,
/// `C_FF = K_FF s^n / (1 + sum alpha s^i)`.
pub fn continuous_controller_tfs(tf: &ContinuousAdrcTf) -> ControllerTfs {
    let one_beta: Vec<f64> = std::iter::once(1.0).chain(tf.beta.iter().copied()).collect();
    let one_alpha: Vec<f64> = std::iter::once(1.0).chain(tf.alpha.iter().copied()).collect();
    let one_gamma: Vec<f64> = std::iter::once(1.0).chain(tf.gamma.iter().copied()).collect();

    let mut fb_den = vec![0.0];
    fb_den.extend(&one_alpha);
    let mut ff_num = vec![0.0; tf.n];
    ff_num.push(tf.k_ff);

    ControllerTfs {
        feedback: RationalTf {
            num: poly::scale(&one_beta, tf.k_int),
            den: fb_den,
            domain: Domain::Continuous,
        },
        prefilter: RationalTf { num: one_gamma, den: one_beta, domain: Domain::Continuous },
        feedforward: RationalTf { num: ff_num, den: one_alpha, domain: Domain::Continuous },
    }
}

/// Discrete feedback controller including the accumulator,
/// `C_FB(z) = (sum beta_i z^-i) / ((1 + sum alpha_i z^-i)(1 - z^-1))`.
pub fn discrete_feedback_tf(tf: &DiscreteAdrcTf) -> RationalTf {
    let mut one_alpha = vec![1.0];
    one_alpha.extend(&tf.alpha);
    RationalTf {
        num: tf.beta.clone(),
        den: poly::mul(&one_alpha, &[1.0, -1.0]),
        domain: Domain::Discrete { sample_time: tf.sample_time },
    }
}

/// Discrete reference prefilter,
/// `C_PF(z) = (sum gamma_i z^-i) / (1 + sum (beta_i/beta_0) z^-i)`.
pub fn discrete_prefilter_tf(tf: &DiscreteAdrcTf) -> RationalTf {
    let mut den = vec![1.0];
    den.extend(tf.beta[1..].iter().map(|b| b / tf.beta[0]));
    RationalTf { num: tf.gamma.clone(), den, domain: Domain::Discrete { sample_time: tf.sample_time } }
}

/// The six closed-loop transfer functions of the two-degree-of-freedom
/// loop, from reference, input disturbance and measurement noise to plant
/// output and control signal.
#[derive(Debug, Clone)]
pub struct GangOfSix {
    pub g_yr: RationalTf,
    pub g_yd: RationalTf,
    pub g_yn: RationalTf,
    pub g_ur: RationalTf,
    pub g_ud: RationalTf,
    pub g_un: RationalTf,
}

impl GangOfSix {
    pub fn entries(&self) -> [(&'static str, &RationalTf); 6] {
        [
            ("G_yr", &self.g_yr),
            ("G_yd", &self.g_yd),
            ("G_yn", &self.g_yn),
            ("G_ur", &self.g_ur),
            ("G_ud", &self.g_ud),
            ("G_un", &self.g_un),
        ]
    }
}

/// Assemble the gang of six by polynomial arithmetic:
///
/// ```text
/// G_yr = P (C_FF + C_FB C_PF) / (1 + P C_FB)    G_yd = P / (1 + P C_FB)
/// G_yn = 1 / (1 + P C_FB)                       G_ur = (C_FF + C_FB C_PF) / (1 + P C_FB)
/// G_ud = -P C_FB / (1 + P C_FB)                 G_un = -C_FB / (1 + P C_FB)
/// ```
///
/// Common factors are left in place; evaluation is unaffected and
/// [`RationalTf::near_cancellations`] reports them on request.
pub fn gang_of_six(plant: &RationalTf, controller: &ControllerTfs) -> Result<GangOfSix> {
    if plant.domain != Domain::Continuous {
        return Err(Error::AlgebraicDegeneracy);
    }
    if plant.relative_degree() > 0 {
        return Err(Error::ImproperTf);
    }
    let loop_tf = plant.mul(&controller.feedback)?;
    // 1 + L, then its reciprocal as the sensitivity.
    let one = RationalTf::continuous(vec![1.0], vec![1.0])?;
    let one_plus = one.add(&loop_tf)?;
    if one_plus.num.iter().all(|&c| c == 0.0) {
        return Err(Error::AlgebraicDegeneracy);
    }
    let sensitivity = RationalTf::new(one_plus.den.clone(), one_plus.num.clone(), Domain::Continuous)?;

    let two_dof = controller.feedforward.add(&controller.feedback.mul(&controller.prefilter)?)?;

    Ok(GangOfSix {
        g_yr: plant.mul(&two_dof)?.mul(&sensitivity)?,
        g_yd: plant.mul(&sensitivity)?,
        g_yn: sensitivity.clone(),
        g_ur: two_dof.mul(&sensitivity)?,
        g_ud: loop_tf.mul(&sensitivity)?.neg(),
        g_un: controller.feedback.mul(&sensitivity)?.neg(),
    })
}

/// Poles, zeros and per-conjugate-pole-pair damping ratios of the feedback
/// controller. `damping[i] = -Re(s)/|s|` for the i-th strictly complex pole
/// pair; the integrator pole at the origin and real poles carry no entry.
#[derive(Debug, Clone)]
pub struct PoleZeroSet {
    pub poles: Vec<Complex64>,
    pub zeros: Vec<Complex64>,
    pub damping: Vec<f64>,
}

/// Closed-form poles and zeros of `C_FB` under bandwidth parameterization.
///
/// First order: real pole at `-omega_cl (1 + 2 k_eso)` and real zero at
/// `-k_eso omega_cl / (2 + k_eso)` next to the integrator. Second order:
/// the conjugate pole pair
/// `omega_cl [-(1 + 3/2 k_eso) +- j sqrt(3 k_eso + 3/4 k_eso^2)]` and the
/// conjugate zero pair
/// `k_eso omega_cl / (3 + 6 k_eso + k_eso^2) [-(3/2 + k_eso) +- j sqrt(3/4 + 3 k_eso)]`.
pub fn fb_poles_zeros(n: usize, omega_cl: f64, k_eso: f64) -> Result<PoleZeroSet> {
    crate::design::ContinuousTuning::new(omega_cl, k_eso)?;
    let w = omega_cl;
    let k = k_eso;
    match n {
        1 => Ok(PoleZeroSet {
            poles: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(-w * (1.0 + 2.0 * k), 0.0),
            ],
            zeros: vec![Complex64::new(-k * w / (2.0 + k), 0.0)],
            damping: vec![],
        }),
        2 => {
            let re_p = -w * (1.0 + 1.5 * k);
            let im_p = w * (3.0 * k + 0.75 * k * k).sqrt();
            let scale_z = k * w / (3.0 + 6.0 * k + k * k);
            let re_z = -scale_z * (1.5 + k);
            let im_z = scale_z * (0.75 + 3.0 * k).sqrt();
            let pole = Complex64::new(re_p, im_p);
            Ok(PoleZeroSet {
                poles: vec![Complex64::new(0.0, 0.0), pole, pole.conj()],
                zeros: vec![Complex64::new(re_z, im_z), Complex64::new(re_z, -im_z)],
                damping: vec![-re_p / pole.norm()],
            })
        }
        n => Err(Error::UnsupportedOrder(n)),
    }
}

/// Roots of an ascending-coefficient polynomial: closed forms up to degree
/// 2, companion-matrix eigenvalues above.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c = poly::trim(coeffs.to_vec());
    let deg = c.len() - 1;
    match deg {
        0 => vec![],
        1 => vec![Complex64::new(-c[0] / c[1], 0.0)],
        2 => {
            let (a, b, c0) = (c[2], c[1], c[0]);
            let disc = Complex64::new(b * b - 4.0 * a * c0, 0.0).sqrt();
            vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
        }
        _ => {
            let lead = c[deg];
            let mut companion = DMatrix::<f64>::zeros(deg, deg);
            for i in 1..deg {
                companion[(i, i - 1)] = 1.0;
            }
            for i in 0..deg {
                companion[(i, deg - 1)] = -c[i] / lead;
            }
            companion.complex_eigenvalues().iter().copied().collect()
        }
    }
}

/// Estimate the critical gain parameter from the plant's high-frequency
/// magnitude asymptote.
///
/// Samples `|P(j omega)|` over one decade starting two decades above the
/// largest num/den root magnitude, fits a straight line to the dB data,
/// rejects the fit if the slope deviates from `-20 n` dB/decade by more
/// than 1 dB/decade, and intersects the `-20 n` asymptote with the 0 dB
/// axis: `b0 = omega_x^n`.
pub fn estimate_b0_crossover(plant: &RationalTf, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if plant.relative_degree() >= 0 {
        return Err(Error::ImproperTf);
    }
    let max_root = poly_roots(&plant.den)
        .iter()
        .chain(poly_roots(&plant.num).iter())
        .fold(1.0f64, |m, r| m.max(r.norm()));
    let lo = 100.0 * max_root;
    let hi = 10.0 * lo;

    const SAMPLES: usize = 50;
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    let mut sum_xx = 0.0;
    let mut sum_xy = 0.0;
    let mut mags = [0.0; SAMPLES];
    let mut logs = [0.0; SAMPLES];
    for i in 0..SAMPLES {
        let omega = lo * (hi / lo).powf(i as f64 / (SAMPLES - 1) as f64);
        let mag_db = plant.magnitude_db(omega)?;
        let log_w = omega.log10();
        mags[i] = mag_db;
        logs[i] = log_w;
        sum_x += log_w;
        sum_y += mag_db;
        sum_xx += log_w * log_w;
        sum_xy += log_w * mag_db;
    }
    let count = SAMPLES as f64;
    let slope = (count * sum_xy - sum_x * sum_y) / (count * sum_xx - sum_x * sum_x);
    let target = -20.0 * n as f64;
    if (slope - target).abs() > 1.0 {
        return Err(Error::WrongRelativeDegree { measured_db_per_decade: slope });
    }

    // Intercept of the ideal -20n dB/decade asymptote through the data:
    // mag_db(omega) = a - 20 n log10(omega), crossover at a = 0 dB.
    let a = (0..SAMPLES).map(|i| mags[i] - target * logs[i]).sum::<f64>() / count;
    Ok(10f64.powf(a / 20.0))
}
