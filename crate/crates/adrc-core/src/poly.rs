//! Polynomial helpers over ascending coefficient sequences.
//!
//! `c[i]` is the coefficient of the i-th power throughout; the variable is
//! `s`, `z` or `z^-1` depending on the caller's domain.

use num_complex::Complex64;

/// Multiply two polynomials.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Add two polynomials.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, &bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    out
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|&c| c * s).collect()
}

/// Drop trailing (highest-power) zero coefficients, keeping at least one.
pub fn trim(mut a: Vec<f64>) -> Vec<f64> {
    while a.len() > 1 && a[a.len() - 1] == 0.0 {
        a.pop();
    }
    a
}

/// Horner evaluation at a complex point.
pub fn eval(c: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        acc = acc * x + ci;
    }
    acc
}

/// Coefficients of `(x + root)^m`, built by repeated multiplication.
pub fn binomial_power(root: f64, m: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..m {
        out = mul(&out, &[root, 1.0]);
    }
    out
}

pub fn max_abs(c: &[f64]) -> f64 {
    c.iter().fold(0.0, |m, &x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mul_and_add() {
        // (1 + s)(1 - s) = 1 - s^2
        assert_eq!(mul(&[1.0, 1.0], &[1.0, -1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(add(&[1.0], &[0.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn binomial_against_pascal() {
        assert_eq!(binomial_power(1.0, 2), vec![1.0, 2.0, 1.0]);
        assert_eq!(binomial_power(2.0, 3), vec![8.0, 12.0, 6.0, 1.0]);
    }

    #[test]
    fn eval_integrator_denominator() {
        let v = eval(&[0.0, 1.0], Complex64::new(0.0, 1.0));
        assert_eq!(v, Complex64::new(0.0, 1.0));
    }

    proptest! {
        #[test]
        fn eval_distributes_over_mul(
            a in proptest::collection::vec(-10.0f64..10.0, 1..5),
            b in proptest::collection::vec(-10.0f64..10.0, 1..5),
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            let x = Complex64::new(re, im);
            let lhs = eval(&mul(&a, &b), x);
            let rhs = eval(&a, x) * eval(&b, x);
            prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
