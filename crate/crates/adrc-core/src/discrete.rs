//! Discrete-time ADRC design.
//!
//! ZOH discretization of the integrator chain, current-observer gains
//! placing all observer poles at `z_eso`, the exact two-block discrete
//! transfer-function representation, and the accumulator factoring that
//! pulls `1/(1 - z^-1)` out of the feedback controller.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::design::PlantSpec;
use crate::error::{Error, Result};
use crate::exact::{self, Rat, RatMat};

/// Relative tolerance for the root-at-one test before accumulator
/// factoring. Below it, factoring refuses rather than silently
/// distributing the error.
pub const ROOT_AT_ONE_TOL: f64 = 1e-8;

/// Discrete tuning: sample time and the observer pole location in the
/// z-plane, `z_eso = exp(-k_eso * omega_cl * T)` under bandwidth
/// parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteTuning {
    sample_time: f64,
    z_eso: f64,
}

impl DiscreteTuning {
    pub fn new(sample_time: f64, z_eso: f64) -> Result<Self> {
        if !sample_time.is_finite() || sample_time <= 0.0 {
            return Err(Error::InvalidSampleTime(sample_time));
        }
        if !z_eso.is_finite() || !(0.0..1.0).contains(&z_eso) {
            return Err(Error::InvalidObserverPole(z_eso));
        }
        Ok(DiscreteTuning { sample_time, z_eso })
    }

    /// Exact exponential mapping of the continuous observer pole.
    pub fn from_bandwidth(sample_time: f64, omega_cl: f64, k_eso: f64) -> Result<Self> {
        let ct = crate::design::ContinuousTuning::new(omega_cl, k_eso)?;
        Self::new(sample_time, (ct.observer_pole() * sample_time).exp())
    }

    pub fn sample_time(&self) -> f64 {
        self.sample_time
    }

    pub fn z_eso(&self) -> f64 {
        self.z_eso
    }
}

/// ZOH discretization of the integrator chain. `A` is nilpotent, so the
/// exponential series terminates and the result is exact:
/// `A_d[r][c] = T^(c-r)/(c-r)!` on and above the diagonal, and
/// `b_d[r] = b0 T^(n-r)/(n-r)!` for the chain rows, 0 in the extended row.
pub fn zoh_integrator_chain(plant: &PlantSpec, sample_time: f64) -> Result<(DMatrix<f64>, DVector<f64>)> {
    if !sample_time.is_finite() || sample_time <= 0.0 {
        return Err(Error::InvalidSampleTime(sample_time));
    }
    let n = plant.order();
    let m = n + 1;
    let a_d = DMatrix::from_fn(m, m, |r, c| {
        if c >= r {
            sample_time.powi((c - r) as i32) / factorial(c - r)
        } else {
            0.0
        }
    });
    let b_d = DVector::from_fn(m, |r, _| {
        if r < n {
            plant.critical_gain() * sample_time.powi((n - r) as i32) / factorial(n - r)
        } else {
            0.0
        }
    });
    Ok((a_d, b_d))
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Current-observer matrices `A_eso = A_d - l c^T A_d` and
/// `b_eso = b_d - l c^T b_d`; `c` selects the first state.
pub fn current_observer_matrices(
    a_d: &DMatrix<f64>,
    b_d: &DVector<f64>,
    l: &[f64],
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let m = a_d.nrows();
    if a_d.ncols() != m || b_d.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: b_d.len() });
    }
    if l.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: l.len() });
    }
    let mut a_eso = a_d.clone();
    for i in 0..m {
        for j in 0..m {
            a_eso[(i, j)] -= l[i] * a_d[(0, j)];
        }
    }
    let mut b_eso = b_d.clone();
    for i in 0..m {
        b_eso[i] -= l[i] * b_d[0];
    }
    Ok((a_eso, b_eso))
}

/// Discrete observer gains placing all eigenvalues of `A_eso` at `z_eso`.
///
/// First- and second-order designs use the closed-form table; orders 3..=5
/// solve the coefficient-matching system `det(zI - A_eso) = (z - z_eso)^(n+1)`
/// exactly (the determinant is affine in `l` for the current-observer
/// structure).
pub fn observer_gains_dt(n: usize, tuning: &DiscreteTuning) -> Result<Vec<f64>> {
    let t = tuning.sample_time;
    let z = tuning.z_eso;
    match n {
        0 => Err(Error::InvalidOrder(0)),
        1 => Ok(vec![1.0 - z * z, (1.0 - z) * (1.0 - z) / t]),
        2 => Ok(vec![
            1.0 - z.powi(3),
            3.0 / (2.0 * t) * (1.0 - z) * (1.0 - z) * (1.0 + z),
            (1.0 - z).powi(3) / (t * t),
        ]),
        n if n <= crate::design::MAX_ORDER => observer_gains_dt_matched(n, tuning),
        n => Err(Error::UnsupportedOrder(n)),
    }
}

/// Coefficient-matching path, valid for any 1 <= n <= 5. Exposed separately
/// so the closed forms can be cross-checked against it.
pub fn observer_gains_dt_matched(n: usize, tuning: &DiscreteTuning) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    if n > crate::design::MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    let m = n + 1;
    // det(zI - A_d + l w^T) = det(zI - A_d) + w^T adj(zI - A_d) l with
    // w^T = c^T A_d; matching against (z - z_eso)^(n+1) is linear in l.
    let plant = PlantSpec::new(n, 1.0)?;
    let (a_d, _) = zoh_integrator_chain(&plant, tuning.sample_time)?;
    let rows: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a_d[(i, j)]).collect()).collect();
    let a_rat = RatMat::from_f64_rows(&rows);
    let (_, b_adj) = exact::faddeev_leverrier(&a_rat);

    let w: Vec<Rat> = (0..m).map(|j| a_rat.at(0, j).clone()).collect();
    let mut system = RatMat::zeros(m);
    for (i, bi) in b_adj.iter().enumerate() {
        for j in 0..m {
            let mut acc = Rat::zero();
            for (r, wr) in w.iter().enumerate() {
                acc += wr * bi.at(r, j);
            }
            system.set(i, j, acc);
        }
    }

    let target = rat_binomial_power(&(-exact::rat(tuning.z_eso)), m);
    let base = rat_binomial_power(&exact::rat_int(-1), m);
    let rhs: Vec<Rat> = (0..m).map(|i| &target[i] - &base[i]).collect();

    let l = exact::solve(&system, &rhs).ok_or(Error::IllConditioned)?;
    Ok(l.iter().map(exact::to_f64).collect())
}

/// Coefficients of `(x + root)^m` in exact arithmetic, ascending.
fn rat_binomial_power(root: &Rat, m: usize) -> Vec<Rat> {
    let mut out = vec![exact::rat_int(1)];
    for _ in 0..m {
        let mut next = vec![Rat::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i] += c * root;
            next[i + 1] += c;
        }
        out = next;
    }
    out
}

/// ZOH observer matrices bundled with their sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteObserverMatrices {
    pub a_d: DMatrix<f64>,
    pub b_d: DVector<f64>,
    pub a_eso: DMatrix<f64>,
    pub b_eso: DVector<f64>,
    pub sample_time: f64,
}

impl DiscreteObserverMatrices {
    pub fn new(plant: &PlantSpec, l: &[f64], sample_time: f64) -> Result<Self> {
        let (a_d, b_d) = zoh_integrator_chain(plant, sample_time)?;
        let (a_eso, b_eso) = current_observer_matrices(&a_d, &b_d, l)?;
        Ok(DiscreteObserverMatrices { a_d, b_d, a_eso, b_eso, sample_time })
    }
}

/// Coefficients of the two-block discrete controller with factored
/// accumulator:
///
/// ```text
/// C_FB(z) = (sum beta_i z^-i) / (1 + sum alpha_i z^-i) * 1/(1 - z^-1)
/// C_PF(z) = (sum gamma_i z^-i) / (1 + sum (beta_i/beta_0) z^-i)
/// ```
///
/// `alpha_tilde` keeps the unfactored denominator coefficients for
/// inspection; the runtime consumes only the factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteAdrcTf {
    pub n: usize,
    pub sample_time: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub alpha_tilde: Vec<f64>,
}

impl DiscreteAdrcTf {
    fn validate(self) -> Result<Self> {
        if self.beta[0] == 0.0 {
            return Err(Error::NormalizationFailure);
        }
        let drive: f64 = self.beta.iter().sum();
        if drive == 0.0 {
            return Err(Error::DegenerateGains);
        }
        Ok(self)
    }
}

/// Factor the accumulator out of an unfactored feedback denominator:
/// `alpha_i = 1 + sum_{j<=i} alpha_tilde_j`, defined when the polynomial
/// `1 + sum alpha_tilde_i z^-i` has a root at z = 1.
pub fn factor_accumulator(alpha_tilde: &[f64]) -> Result<Vec<f64>> {
    if alpha_tilde.is_empty() {
        return Err(Error::InvalidOrder(0));
    }
    let residual = 1.0 + alpha_tilde.iter().sum::<f64>();
    let max_coeff = crate::poly::max_abs(alpha_tilde).max(1.0);
    if residual.abs() > ROOT_AT_ONE_TOL * max_coeff {
        return Err(Error::NotAnIntegrator);
    }
    let n = alpha_tilde.len() - 1;
    let mut alpha = Vec::with_capacity(n);
    let mut partial = 1.0;
    for &at in &alpha_tilde[..n] {
        partial += at;
        alpha.push(partial);
    }
    Ok(alpha)
}

/// Generic matrix derivation of the discrete controller coefficients from
/// arbitrary controller gains `k` and discrete observer gains `l`.
///
/// Uses `Phi_eso = z (zI - M)^-1` with `M = A_eso - (1/b0) b_eso k^T`, so
/// `C_FB(z) = (1/b0) z k^T adj(zI - M) l / det(zI - M)` and the prefilter
/// follows from `(k1/b0)(1 - z^-1 k^T Phi_eso b_eso / b0)`. The resolvent
/// and all contractions run in exact rational arithmetic.
pub fn discrete_tf_general(
    plant: &PlantSpec,
    k: &[f64],
    l: &[f64],
    sample_time: f64,
) -> Result<DiscreteAdrcTf> {
    let n = plant.order();
    if n > crate::design::MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    if k.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: k.len() });
    }
    if l.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, actual: l.len() });
    }
    if k.iter().chain(l).any(|g| !g.is_finite()) {
        return Err(Error::InvalidGains);
    }
    let m = n + 1;
    let (a_d, b_d) = zoh_integrator_chain(plant, sample_time)?;
    let (a_eso, b_eso) = current_observer_matrices(&a_d, &b_d, l)?;

    let b0 = exact::rat(plant.critical_gain());
    let mut k_full: Vec<Rat> = k.iter().map(|&x| exact::rat(x)).collect();
    k_full.push(exact::rat_int(1));
    let l_rat: Vec<Rat> = l.iter().map(|&x| exact::rat(x)).collect();
    let b_eso_rat: Vec<Rat> = (0..m).map(|i| exact::rat(b_eso[i])).collect();

    let mut m_mat = RatMat::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let v = exact::rat(a_eso[(i, j)]) - &b_eso_rat[i] * &k_full[j] / &b0;
            m_mat.set(i, j, v);
        }
    }

    let (d, b_adj) = exact::faddeev_leverrier(&m_mat);

    // Unfactored denominator, powers of z^-1: alpha_tilde_j = d[m - j].
    let alpha_tilde: Vec<f64> = (1..=m).map(|j| exact::to_f64(&d[m - j])).collect();

    // Feedback numerator q(z) = k^T adj(zI - M) l, ascending powers of z.
    let q: Vec<Rat> = b_adj.iter().map(|bi| exact::dot(&k_full, &bi.mat_vec(&l_rat))).collect();
    if q[n].is_zero() {
        return Err(Error::NormalizationFailure);
    }
    let beta: Vec<f64> = (0..=n).map(|j| exact::to_f64(&(&q[n - j] / &b0))).collect();

    // Prefilter numerator p(z) = k1 (d(z) - (1/b0) k^T adj(zI - M) b_eso),
    // degree n+1; gamma_j = p[n+1-j] / (b0 beta_0) = p[n+1-j] / q[n].
    let k1 = &k_full[0];
    let p: Vec<Rat> = (0..=m)
        .map(|i| {
            let mut v = d[i].clone();
            if i < m {
                v -= exact::dot(&k_full, &b_adj[i].mat_vec(&b_eso_rat)) / &b0;
            }
            v * k1
        })
        .collect();
    let gamma: Vec<f64> = (0..=m).map(|j| exact::to_f64(&(&p[m - j] / &q[n]))).collect();

    let alpha = factor_accumulator(&alpha_tilde)?;
    DiscreteAdrcTf { n, sample_time, alpha, beta, gamma, alpha_tilde }.validate()
}

/// Closed-form discrete coefficients under bandwidth parameterization,
/// straight from the first- and second-order tables, with
/// `z_eso = exp(-k_eso omega_cl T)`.
pub fn discrete_tf_bandwidth(
    plant: &PlantSpec,
    omega_cl: f64,
    k_eso: f64,
    sample_time: f64,
) -> Result<DiscreteAdrcTf> {
    let tuning = DiscreteTuning::from_bandwidth(sample_time, omega_cl, k_eso)?;
    let b0 = plant.critical_gain();
    let t = sample_time;
    let w = omega_cl;
    let z = tuning.z_eso();
    let (alpha, beta, gamma) = match plant.order() {
        1 => {
            let denom = t * w * (1.0 - z * z) + (1.0 - z) * (1.0 - z);
            (
                vec![(t * w - 1.0) * z * z],
                vec![
                    denom / (b0 * t),
                    (-2.0 * t * w * z * (1.0 - z) - (1.0 - z) * (1.0 - z)) / (b0 * t),
                ],
                vec![
                    t * w / denom,
                    -2.0 * t * w * z / denom,
                    t * w * z * z / denom,
                ],
            )
        }
        2 => {
            let denom = t * t * w * w * (1.0 - z.powi(3))
                + 3.0 * t * w * (1.0 - z - z * z + z.powi(3))
                + (1.0 - z).powi(3);
            (
                vec![
                    0.5 * (t * t * w * w * z.powi(3)
                        + t * w * (1.0 + 3.0 * z + 3.0 * z * z - 3.0 * z.powi(3))
                        + (1.0 - 3.0 * z - 3.0 * z * z + z.powi(3))),
                    z.powi(3) / 2.0 * (t * t * w * w - 4.0 * t * w + 2.0),
                ],
                vec![
                    denom / (b0 * t * t),
                    (-3.0 * t * t * w * w * z * (1.0 - z * z)
                        - 4.0 * t * w * (1.0 - 3.0 * z * z + 2.0 * z.powi(3))
                        - 2.0 * (1.0 - z).powi(3))
                        / (b0 * t * t),
                    (3.0 * t * t * w * w * z * z * (1.0 - z)
                        + t * w * (1.0 + 3.0 * z - 9.0 * z * z + 5.0 * z.powi(3))
                        + (1.0 - z).powi(3))
                        / (b0 * t * t),
                ],
                vec![
                    t * t * w * w / denom,
                    -3.0 * t * t * w * w * z / denom,
                    3.0 * t * t * w * w * z * z / denom,
                    -t * t * w * w * z.powi(3) / denom,
                ],
            )
        }
        n => return Err(Error::UnsupportedOrder(n)),
    };
    // Reconstruct the unfactored denominator from the factored one:
    // alpha_tilde_1 = alpha_1 - 1, alpha_tilde_i = alpha_i - alpha_{i-1},
    // alpha_tilde_{n+1} = -alpha_n.
    let n = plant.order();
    let mut alpha_tilde = Vec::with_capacity(n + 1);
    let mut prev = 1.0;
    for &a in &alpha {
        alpha_tilde.push(a - prev);
        prev = a;
    }
    alpha_tilde.push(-prev);
    DiscreteAdrcTf { n, sample_time, alpha, beta, gamma, alpha_tilde }.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1.0),
            "got {got}, want {want}"
        );
    }

    #[test]
    fn zoh_chain_first_order() {
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let (a_d, b_d) = zoh_integrator_chain(&plant, 0.1).unwrap();
        assert_eq!(a_d, dmatrix![1.0, 0.1; 0.0, 1.0]);
        assert_eq!(b_d.as_slice(), &[0.1, 0.0]);
    }

    #[test]
    fn zoh_chain_second_order() {
        let plant = PlantSpec::new(2, 1.0).unwrap();
        let (_, b_d) = zoh_integrator_chain(&plant, 1.0).unwrap();
        assert_eq!(b_d.as_slice(), &[0.5, 1.0, 0.0]);
    }

    #[test]
    fn zoh_chain_vanishing_sample_time() {
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let (a_d, b_d) = zoh_integrator_chain(&plant, 1e-12).unwrap();
        assert!((a_d - DMatrix::<f64>::identity(2, 2)).norm() <= 1e-12);
        assert!(b_d.norm() <= 1e-12);
        assert!(zoh_integrator_chain(&plant, 0.0).is_err());
        assert!(zoh_integrator_chain(&plant, -0.1).is_err());
    }

    #[test]
    fn observer_gains_table_first_order() {
        let z = (-0.5f64).exp();
        let tuning = DiscreteTuning::new(0.1, z).unwrap();
        let l = observer_gains_dt(1, &tuning).unwrap();
        assert_close(l[0], 0.6321205588285577, 1e-12);
        assert_close(l[1], 1.5481812174617549, 1e-12);
    }

    #[test]
    fn observer_gains_deadbeat() {
        let tuning = DiscreteTuning::new(0.25, 0.0).unwrap();
        let l = observer_gains_dt(1, &tuning).unwrap();
        assert_eq!(l, vec![1.0, 4.0]);
    }

    /// Pole placement per the design equation: the characteristic
    /// polynomial of A_eso must equal (z - z_eso)^(n+1) coefficientwise.
    /// Raw eigenvalues are not usable as an oracle here: an (n+1)-fold
    /// root spreads by O(eps^(1/(n+1))) under the unavoidable f64 rounding
    /// of the gains, so the roots of even the exactly computed polynomial
    /// sit ~1e-6 (n = 2) from z_eso.
    fn assert_poles_placed(n: usize, l: &[f64], sample_time: f64, z_eso: f64) {
        let plant = PlantSpec::new(n, 1.0).unwrap();
        let mats = DiscreteObserverMatrices::new(&plant, l, sample_time).unwrap();
        let r = crate::resolvent::resolvent_polynomials(&mats.a_eso);
        let expected = crate::poly::binomial_power(-z_eso, n + 1);
        let scale = crate::poly::max_abs(&expected);
        for (got, want) in r.charpoly.iter().zip(&expected) {
            assert!(
                (got - want).abs() <= 1e-12 * scale,
                "n={n}: charpoly {got} vs {want}"
            );
        }
        // Eigenvalues with the defect-aware spread bound; above n = 2 the
        // bound exceeds any useful resolution, so the determinant identity
        // is the only check.
        if n <= 2 {
            let spread = 10.0 * (1e-16f64).powf(1.0 / (n as f64 + 1.0));
            for ev in mats.a_eso.complex_eigenvalues().iter() {
                assert!(
                    (ev - nalgebra::Complex::new(z_eso, 0.0)).norm() <= spread,
                    "n={n} eigenvalue {ev} vs {z_eso}"
                );
            }
        }
    }

    #[test]
    fn observer_gains_place_eigenvalues() {
        // Closed-form second-order gains, checked against the design
        // equation on the resulting A_eso.
        let tuning = DiscreteTuning::new(0.1, 0.5).unwrap();
        let l = observer_gains_dt(2, &tuning).unwrap();
        assert_close(l[0], 0.875, 1e-12);
        assert_close(l[1], 5.625, 1e-12);
        assert_close(l[2], 12.5, 1e-12);
        assert_poles_placed(2, &l, 0.1, 0.5);
    }

    #[test]
    fn closed_forms_match_coefficient_matching() {
        for n in 1..=2 {
            let tuning = DiscreteTuning::new(0.05, 0.7).unwrap();
            let table = observer_gains_dt(n, &tuning).unwrap();
            let matched = observer_gains_dt_matched(n, &tuning).unwrap();
            for (a, b) in table.iter().zip(&matched) {
                assert_close(*a, *b, 1e-12);
            }
        }
    }

    #[test]
    fn matched_gains_up_to_order_five() {
        for n in 3..=5 {
            let tuning = DiscreteTuning::new(0.02, 0.6).unwrap();
            let l = observer_gains_dt(n, &tuning).unwrap();
            assert_poles_placed(n, &l, 0.02, 0.6);
        }
        assert!(observer_gains_dt(6, &DiscreteTuning::new(0.02, 0.6).unwrap()).is_err());
    }

    #[test]
    fn observer_matrices_zero_gains_are_identity_map() {
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let (a_d, b_d) = zoh_integrator_chain(&plant, 0.1).unwrap();
        let (a_eso, b_eso) = current_observer_matrices(&a_d, &b_d, &[0.0, 0.0]).unwrap();
        assert_eq!(a_eso, a_d);
        assert_eq!(b_eso, b_d);
    }

    #[test]
    fn observer_matrices_first_order_values() {
        let z = (-0.5f64).exp();
        let t = 0.1;
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let tuning = DiscreteTuning::new(t, z).unwrap();
        let l = observer_gains_dt(1, &tuning).unwrap();
        let mats = DiscreteObserverMatrices::new(&plant, &l, t).unwrap();
        // Frozen from the current-observer matrix arithmetic; eigenvalues
        // double-checked below.
        assert_close(mats.a_eso[(0, 0)], 0.36787944117144233, 1e-12);
        assert_close(mats.a_eso[(0, 1)], 0.03678794411714424, 1e-12);
        assert_close(mats.a_eso[(1, 0)], -1.5481812174617549, 1e-12);
        assert_close(mats.a_eso[(1, 1)], 0.8451818782538245, 1e-12);
        assert_close(mats.b_eso[0], 0.03678794411714424, 1e-12);
        assert_close(mats.b_eso[1], -0.15481812174617549, 1e-12);
        for ev in mats.a_eso.complex_eigenvalues().iter() {
            assert!((ev - nalgebra::Complex::new(z, 0.0)).norm() <= 1e-8);
        }
    }

    #[test]
    fn deadbeat_clears_first_observer_row() {
        let t = 0.1;
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let mats = DiscreteObserverMatrices::new(&plant, &[1.0, 1.0 / t], t).unwrap();
        assert_eq!(mats.a_eso[(0, 0)], 0.0);
        assert_eq!(mats.a_eso[(0, 1)], 0.0);
    }

    #[test]
    fn factor_accumulator_examples() {
        assert_eq!(factor_accumulator(&[-1.5, 0.5]).unwrap(), vec![-0.5]);
        assert_eq!(factor_accumulator(&[-1.0]).unwrap(), Vec::<f64>::new());
        assert_eq!(factor_accumulator(&[-0.5, 0.5]), Err(Error::NotAnIntegrator));
    }

    proptest! {
        /// Factoring reconstruction: (1 + sum alpha_i z^-i)(1 - z^-1) equals the
        /// unfactored denominator for arbitrary integrator polynomials.
        #[test]
        fn factoring_reconstructs_denominator(
            head in proptest::collection::vec(-1.0f64..1.0, 1..5),
        ) {
            let mut alpha_tilde = head.clone();
            alpha_tilde.push(-(1.0 + head.iter().sum::<f64>()));
            let alpha = factor_accumulator(&alpha_tilde).unwrap();
            let mut factored = vec![1.0];
            factored.extend(&alpha);
            let product = crate::poly::mul(&factored, &[1.0, -1.0]);
            let mut unfactored = vec![1.0];
            unfactored.extend(&alpha_tilde);
            for (a, b) in product.iter().zip(&unfactored) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn general_path_first_order_example() {
        // omega_cl = 1, k_eso = 5, T = 0.1, b0 = 1; expected values frozen
        // from the first-order general-terms closed forms evaluated with
        // the designed observer gains.
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let tuning = DiscreteTuning::from_bandwidth(0.1, 1.0, 5.0).unwrap();
        let l = observer_gains_dt(1, &tuning).unwrap();
        let tf = discrete_tf_general(&plant, &[1.0], &l, 0.1).unwrap();
        assert_close(tf.alpha[0], -0.33109149705429813, 1e-10);
        assert_close(tf.beta[0], 2.1803017762903125, 1e-10);
        assert_close(tf.beta[1], -2.025483654544137, 1e-10);
        assert_close(tf.gamma[0], 0.4586521053527994, 1e-10);
        assert_close(tf.gamma[1], -0.5563731280764432, 1e-10);
        assert_close(tf.gamma[2], 0.16872868020929332, 1e-10);
        // beta_0 is k1 l1 + l2 exactly for n = 1.
        assert_close(tf.beta[0], l[0] + l[1], 1e-14);
    }

    #[test]
    fn deadbeat_kills_the_lag_coefficient() {
        // Closed form: alpha_1 = (T omega_cl - 1) z_eso^2 = 0 at z_eso = 0.
        let plant = PlantSpec::new(1, 1.0).unwrap();
        let tuning = DiscreteTuning::new(0.1, 0.0).unwrap();
        let l = observer_gains_dt(1, &tuning).unwrap();
        let tf = discrete_tf_general(&plant, &[1.0], &l, 0.1).unwrap();
        assert!(tf.alpha[0].abs() <= 1e-12);
    }

    #[test]
    fn bandwidth_tables_match_matrix_path() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let n = if rng.gen_bool(0.5) { 1 } else { 2 };
            let b0 = rng.gen_range(0.1..10.0);
            let omega_cl = rng.gen_range(0.1..10.0);
            let wt = rng.gen_range(0.001..0.5);
            let t = wt / omega_cl;
            let k_eso = rng.gen_range(1.0..25.0);
            let plant = PlantSpec::new(n, b0).unwrap();
            let table = discrete_tf_bandwidth(&plant, omega_cl, k_eso, t).unwrap();
            let tuning = DiscreteTuning::from_bandwidth(t, omega_cl, k_eso).unwrap();
            let l = observer_gains_dt(n, &tuning).unwrap();
            let k = crate::design::controller_gains(n, omega_cl).unwrap();
            let general = discrete_tf_general(&plant, &k, &l, t).unwrap();
            // Coefficients suppressed by z_eso^3 (down to ~5e-17 at the
            // corner of the sampled ranges) sit at the cancellation floor
            // that the f64-rounded gains impose on any derivation, so the
            // relative measure is floored at 1e-5 of the vector scale.
            // The alpha scale anchors at the denominator's implicit
            // leading 1: for n = 1 the single stored coefficient can itself
            // be z_eso^2-suppressed.
            for (anchor, got, want) in [
                (1.0, &table.alpha, &general.alpha),
                (0.0, &table.beta, &general.beta),
                (0.0, &table.gamma, &general.gamma),
            ] {
                let scale = crate::poly::max_abs(want).max(anchor);
                for (a, b) in got.iter().zip(want.iter()) {
                    worst = worst.max((a - b).abs() / b.abs().max(1e-5 * scale));
                }
            }
        }
        assert!(worst <= 1e-10, "worst relative deviation {worst:.3e}");
    }

    #[test]
    fn second_order_example_against_table() {
        let plant = PlantSpec::new(2, 1.0).unwrap();
        let table = discrete_tf_bandwidth(&plant, 1.0, 5.0, 0.1).unwrap();
        let tuning = DiscreteTuning::from_bandwidth(0.1, 1.0, 5.0).unwrap();
        let l = observer_gains_dt(2, &tuning).unwrap();
        let general = discrete_tf_general(&plant, &[1.0, 2.0], &l, 0.1).unwrap();
        for (a, b) in table.alpha.iter().zip(&general.alpha) {
            assert_close(*a, *b, 1e-10);
        }
        for (a, b) in table.beta.iter().zip(&general.beta) {
            assert_close(*a, *b, 1e-10);
        }
        for (a, b) in table.gamma.iter().zip(&general.gamma) {
            assert_close(*a, *b, 1e-10);
        }
        // alpha_2 closed form: (z^3/2)(T^2 w^2 - 4 T w + 2).
        let z = (-0.5f64).exp();
        assert_close(table.alpha[1], z.powi(3) / 2.0 * (0.01 - 0.4 + 2.0), 1e-12);
    }

    #[test]
    fn tuning_validation() {
        assert!(DiscreteTuning::new(0.0, 0.5).is_err());
        assert!(DiscreteTuning::new(0.1, 1.0).is_err());
        assert!(DiscreteTuning::new(0.1, -0.1).is_err());
    }
}
