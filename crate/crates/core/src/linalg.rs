//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// `|v><v|`
pub fn projector(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// Re tr(A B) for Hermitian arguments.
pub fn trace_product(a: &CMat, b: &CMat) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().iter().copied().sum()
}

pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Largest |A - A^dagger| entry.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitize(a).symmetric_eigen();
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn eigvalsh(a: &CMat) -> Vec<f64> {
    eigh(a).0
}

pub fn min_eigenvalue(a: &CMat) -> f64 {
    eigvalsh(a).first().copied().unwrap_or(0.0)
}

/// Sum of singular values of a Hermitian matrix.
pub fn trace_norm(a: &CMat) -> f64 {
    eigvalsh(a).iter().map(|v| v.abs()).sum()
}

/// Rescales a ket so its first non-negligible amplitude is real and positive.
pub fn fix_phase(v: &mut CVec) {
    if let Some(first) = v.iter().find(|a| a.norm() > 1e-12).copied() {
        let phase = first.conj() / first.norm();
        for a in v.iter_mut() {
            *a *= phase;
        }
    }
}

/// Eigenvector of the largest eigenvalue. Ties go to the lowest eigen-index
/// returned by the decomposition after sorting, then the phase is fixed.
pub fn top_eigenvector(a: &CMat) -> (f64, CVec) {
    let (values, vectors) = eigh(a);
    let n = values.len();
    let top = values[n - 1];
    // first (in sorted order) among those tied with the maximum
    let k = (0..n).find(|&i| (values[i] - top).abs() < 1e-12).unwrap_or(n - 1);
    let mut v: CVec = vectors.column(k).into_owned();
    fix_phase(&mut v);
    (top, v)
}

/// Apply `f` to the eigenvalues of a Hermitian matrix.
pub fn spectral_map(a: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = eigh(a);
    let diag = CMat::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(f(v), 0.0)),
    ));
    &vectors * diag * vectors.adjoint()
}

/// Nearest PSD matrix in Frobenius norm.
pub fn psd_projection(a: &CMat) -> CMat {
    spectral_map(a, |v| v.max(0.0))
}

pub fn inverse_sqrt(a: &CMat) -> CMat {
    spectral_map(a, |v| 1.0 / v.max(1e-300).sqrt())
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_of_pauli_z_is_two() {
        let z = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!((trace_norm(&z) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn top_eigenvector_has_positive_first_amplitude() {
        let y = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (val, v) = top_eigenvector(&y);
        assert!((val - 1.0).abs() < 1e-12);
        assert!(v[0].im.abs() < 1e-12 && v[0].re > 0.0);
        let yv = &y * &v;
        assert!((yv - &v).norm() < 1e-10);
    }

    #[test]
    fn inverse_sqrt_squares_to_inverse() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let s = inverse_sqrt(&a);
        let prod = &s * &a * &s;
        assert!(max_abs_diff(&prod, &identity(2)) < 1e-10);
    }
}
