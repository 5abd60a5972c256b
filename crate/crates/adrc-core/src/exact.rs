//! Exact rational linear algebra for the resolvent and design paths.
//!
//! Every f64 input is an exact rational, so running the Faddeev-LeVerrier
//! recursion and the coefficient contractions over `BigRational` removes all
//! intermediate cancellation error; results are rounded to f64 once, at the
//! boundary. Matrices here are at most (n+1)x(n+1) with n <= 5, so the cost
//! is negligible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite input")
}

pub fn rat_int(i: i64) -> Rat {
    BigRational::from_integer(BigInt::from(i))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational within f64 range")
}

/// Dense square rational matrix, row major.
#[derive(Clone)]
pub struct RatMat {
    pub dim: usize,
    pub data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(dim: usize) -> Self {
        RatMat { dim, data: vec![Rat::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = rat_int(1);
        }
        m
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, &v) in row.iter().enumerate() {
                m.data[i * dim + j] = rat(v);
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        let d = self.dim;
        assert_eq!(d, other.dim);
        let mut out = RatMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let t = aik * other.at(k, j);
                    let cur = out.at(i, j) + t;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn add_scaled_identity(&mut self, c: &Rat) {
        let d = self.dim;
        for i in 0..d {
            let v = self.at(i, i) + c;
            self.set(i, i, v);
        }
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for i in 0..self.dim {
            t += self.at(i, i);
        }
        t
    }

    pub fn mat_vec(&self, v: &[Rat]) -> Vec<Rat> {
        let d = self.dim;
        assert_eq!(v.len(), d);
        (0..d)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += self.at(i, j) * vj;
                }
                acc
            })
            .collect()
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Faddeev-LeVerrier recursion.
///
/// Returns the characteristic polynomial `d` of `det(xI - M)` in ascending
/// powers (`d[dim]` = 1) and the adjugate coefficient matrices `B[0..dim]`
/// with `adj(xI - M) = sum_i B[i] x^i`.
pub fn faddeev_leverrier(m: &RatMat) -> (Vec<Rat>, Vec<RatMat>) {
    let dim = m.dim;
    let mut d = vec![Rat::zero(); dim + 1];
    d[dim] = rat_int(1);
    let mut b = vec![RatMat::zeros(dim); dim];
    b[dim - 1] = RatMat::identity(dim);
    for j in (1..dim).rev() {
        let mb = m.mul(&b[j]);
        d[j] = -mb.trace() / rat_int((dim - j) as i64);
        let mut next = mb;
        next.add_scaled_identity(&d[j]);
        b[j - 1] = next;
    }
    d[0] = -m.mul(&b[0]).trace() / rat_int(dim as i64);
    (d, b)
}

/// Exact Gaussian elimination; `None` when the matrix is singular.
#[allow(clippy::needless_range_loop)] // two rows of `m` are indexed at once
pub fn solve(a: &RatMat, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let d = a.dim;
    assert_eq!(rhs.len(), d);
    let mut m: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rat> = (0..d).map(|j| a.at(i, j).clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();

    for col in 0..d {
        let pivot = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for r in col + 1..d {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..=d {
                let v = &m[r][c] - &factor * &m[col][c];
                m[r][c] = v;
            }
        }
    }

    let mut x = vec![Rat::zero(); d];
    for row in (0..d).rev() {
        let mut acc = m[row][d].clone();
        for c in row + 1..d {
            acc -= &m[row][c] * &x[c];
        }
        x[row] = acc / &m[row][row];
    }
    Some(x)
}
