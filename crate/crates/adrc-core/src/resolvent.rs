//! Characteristic polynomial and adjugate of `sI - M` via Faddeev-LeVerrier.

use nalgebra::DMatrix;

use crate::exact;

/// Polynomial resolvent of a square matrix `M`:
/// `det(sI - M) = sum_i charpoly[i] s^i` (monic) and
/// `adj(sI - M) = sum_i adjugate[i] s^i`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub charpoly: Vec<f64>,
    pub adjugate: Vec<DMatrix<f64>>,
}

/// Run the Faddeev-LeVerrier recursion on `M`.
///
/// The recursion is evaluated in exact rational arithmetic (each f64 entry
/// is an exact rational) and rounded once at the end, so the returned
/// coefficients are correctly rounded values of the exact polynomials.
///
/// Panics if `M` is not square or is empty.
pub fn resolvent_polynomials(m: &DMatrix<f64>) -> Resolvent {
    assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
    assert!(m.nrows() >= 1, "matrix must be at least 1x1");
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    let rm = exact::RatMat::from_f64_rows(&rows);
    let (d, b) = exact::faddeev_leverrier(&rm);
    Resolvent {
        charpoly: d.iter().map(exact::to_f64).collect(),
        adjugate: b
            .iter()
            .map(|bi| {
                DMatrix::from_fn(rm.dim, rm.dim, |i, j| exact::to_f64(bi.at(i, j)))
            })
            .collect(),
    }
}
