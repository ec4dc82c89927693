//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, plus
//! spectral matrix functions built on it.
//!
//! Dimensions never exceed ~16 here, so O(n^3) sweeps with a tight
//! off-diagonal stopping norm are both simple and accurate to ~1e-14.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{fl, tol_t, Scalar};
use crate::tol::Tolerances;
use num_complex::Complex;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; ties are broken by lexicographic
/// comparison of the phase-normalized eigenvector entries, so the
/// decomposition of a given matrix is deterministic.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose columns are the eigenvectors, in eigenvalue order.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// V diag(f(lambda)) V†.
    pub fn spectral_map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for j in 0..n {
            let fv = f(self.eigenvalues[j]);
            for i in 0..n {
                scaled.set(i, j, v.get(i, j) * Complex::new(fv, T::zero()));
            }
        }
        scaled.matmul(&v.adjoint())
    }

    /// V diag(lambda) V†.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.spectral_map(|x| x)
    }

    /// Eigenvector column as an amplitude vector.
    pub fn eigenvector(&self, index: usize) -> Vec<Complex<T>> {
        (0..self.eigenvalues.len())
            .map(|i| self.eigenvectors.get(i, index))
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix (checked within the central
/// Hermitian tolerance; fails otherwise).
pub fn hermitian_eigen<T: Scalar>(m: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    let tol = Tolerances::global();
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermitian_deviation();
    if dev > tol_t(tol.hermitian) {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.hermitian,
        });
    }
    Ok(jacobi(&m.hermitize(), tol_t(tol.jacobi_off_diagonal)))
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut sum = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum = sum + a.get(p, q).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi on a Hermitian matrix. Each rotation zeroes one off-diagonal
/// pair with a unitary U = diag(w, 1) . R(theta) in the (p, q) plane, where w
/// is the phase of a_pq and R the classical symmetric-case rotation.
fn jacobi<T: Scalar>(m: &ComplexMatrix<T>, stop: T) -> EigenDecomposition<T> {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = {
        let f = a.frobenius_norm();
        if f > T::one() {
            f
        } else {
            T::one()
        }
    };
    let threshold = stop * scale;
    let half = fl::<T>(0.5);

    for _sweep in 0..200 {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= threshold * fl(1e-2) {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let w = apq / Complex::new(mag, T::zero());
                let tau = (aqq - app) / (mag + mag);
                let t = if tau.is_zero() {
                    T::one()
                } else {
                    let s = if tau > T::zero() { T::one() } else { -T::one() };
                    s / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                let u_pp = w * Complex::new(c, T::zero());
                let u_pq = w * Complex::new(s, T::zero());
                let u_qp = Complex::new(-s, T::zero());
                let u_qq = Complex::new(c, T::zero());

                // columns: A <- A U, V <- V U
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * u_pp + aiq * u_qp);
                    a.set(i, q, aip * u_pq + aiq * u_qq);
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * u_pp + viq * u_qp);
                    v.set(i, q, vip * u_pq + viq * u_qq);
                }
                // rows: A <- U† A
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * u_pp.conj() + aqj * u_qp.conj());
                    a.set(q, j, apj * u_pq.conj() + aqj * u_qq.conj());
                }
                // keep the working matrix exactly Hermitian at the pivot
                let fixed = (a.get(p, q) + a.get(q, p).conj()) * Complex::new(half, T::zero());
                a.set(p, q, fixed);
                a.set(q, p, fixed.conj());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigenvalues: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    let columns: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| phase_normalize((0..n).map(|i| v.get(i, j)).collect()))
        .collect();
    order.sort_by(|&i, &j| {
        eigenvalues[j]
            .partial_cmp(&eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| lex_compare(&columns[i], &columns[j]))
    });

    let sorted_values: Vec<T> = order.iter().map(|&i| eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::<T>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, dst, columns[src][i]);
        }
    }
    EigenDecomposition {
        eigenvalues: sorted_values,
        eigenvectors: vectors,
    }
}

/// Rotate a global phase so the first entry of non-negligible modulus is real
/// and positive.
fn phase_normalize<T: Scalar>(mut column: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let cut = tol_t::<T>(1e-12);
    if let Some(pivot) = column.iter().find(|c| c.norm() > cut) {
        let phase = pivot.conj() / Complex::new(pivot.norm(), T::zero());
        for c in column.iter_mut() {
            *c = *c * phase;
        }
    }
    column
}

fn lex_compare<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x
            .re
            .partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
        {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// V diag(f(lambda)) V† with f(lambda) = log2(lambda) on the support
/// (lambda > zero_tol) and 0 on the kernel; the caller owns kernel semantics.
///
/// Fails on an eigenvalue below -zero_tol.
pub fn matrix_log2_on_support<T: Scalar>(
    m: &ComplexMatrix<T>,
    zero_tol: T,
) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigen(m)?;
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -zero_tol) {
        return Err(Error::NegativeEigenvalue(bad.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(eig.spectral_map(|l| if l > zero_tol { l.log2() } else { T::zero() }))
}
