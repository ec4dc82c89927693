//! Dense complex matrices for small dimensions (d <= 16): products, adjoints,
//! tensor products, partial trace and partial transpose.
//!
//! Composite indexing is row-major with factor 0 most significant: the basis
//! label of a two-qubit system reads `i0 * 2 + i1`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;
use std::ops::{Add, Mul, Sub};

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Build from row-major data; checks the entry count and that every
    /// component is finite.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Build entry-by-entry from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex::new(v, T::zero()));
        }
        m
    }

    /// Rank-1 projector |k><k| on a d-dimensional space.
    pub fn basis_projector(dim: usize, k: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m.set(k, k, Complex::new(T::one(), T::zero()));
        m
    }

    /// Matrix unit |i><j| on a d-dimensional space.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m.set(i, j, Complex::new(T::one(), T::zero()));
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose A†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| *c * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch in matrix addition"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch in matrix subtraction"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix multiplication"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// A v for a column vector v.
    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Kronecker product with index convention (i_a*rows_b + i_b, j_a*cols_b + j_b).
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out.set(
                            ia * other.rows + ib,
                            ja * other.cols + jb,
                            a * other.get(ib, jb),
                        );
                    }
                }
            }
        }
        out
    }

    /// (A + A†)/2; cheap guard against Hermiticity drift in Kraus sums.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        let half = Complex::new(T::from_f64(0.5).unwrap(), T::zero());
        self.add(&self.adjoint()).scale(half)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_entry_modulus(&self) -> T {
        self.data
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Max entry modulus of A - B.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.sub(other).max_entry_modulus()
    }

    /// Max entry modulus of A - A†.
    pub fn hermitian_deviation(&self) -> T {
        self.sub(&self.adjoint()).max_entry_modulus()
    }

    pub fn is_hermitian(&self, tolerance: T) -> bool {
        self.is_square() && self.hermitian_deviation() <= tolerance
    }

    /// Max entry modulus of U†U - I.
    pub fn unitary_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tolerance: T) -> bool {
        self.unitary_deviation() <= tolerance
    }

    /// Reduced matrix on the kept factors; traces out the rest.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !self.is_square() || self.rows != total {
            return Err(Error::DimensionMismatch(format!(
                "partial trace of a {}x{} matrix over factors {:?}",
                self.rows, self.cols, dims
            )));
        }
        if keep.iter().any(|&f| f >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "kept factor out of range for {} factors",
                dims.len()
            )));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&f| dims[f]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&f| dims[f]).collect();
        let keep_total: usize = keep_dims.iter().product();
        let traced_total: usize = traced_dims.iter().product();

        let compose = |k: usize, t: usize| -> usize {
            let kf = decode_index(k, &keep_dims);
            let tf = decode_index(t, &traced_dims);
            let mut full = vec![0usize; dims.len()];
            for (pos, &f) in keep.iter().enumerate() {
                full[f] = kf[pos];
            }
            for (pos, &f) in traced.iter().enumerate() {
                full[f] = tf[pos];
            }
            encode_index(&full, dims)
        };

        let mut out = Self::zeros(keep_total, keep_total);
        for i in 0..keep_total {
            for j in 0..keep_total {
                let mut sum = Complex::new(T::zero(), T::zero());
                for t in 0..traced_total {
                    sum = sum + self.get(compose(i, t), compose(j, t));
                }
                out.set(i, j, sum);
            }
        }
        Ok(out)
    }

    /// Transpose the listed tensor factors, leaving the rest untouched.
    pub fn partial_transpose(&self, dims: &[usize], factors: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !self.is_square() || self.rows != total {
            return Err(Error::DimensionMismatch(format!(
                "partial transpose of a {}x{} matrix over factors {:?}",
                self.rows, self.cols, dims
            )));
        }
        if factors.iter().any(|&f| f >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "transposed factor out of range for {} factors",
                dims.len()
            )));
        }
        let mut out = Self::zeros(total, total);
        for i in 0..total {
            let mut fi = decode_index(i, dims);
            for j in 0..total {
                let mut fj = decode_index(j, dims);
                for &f in factors {
                    std::mem::swap(&mut fi[f], &mut fj[f]);
                }
                let oi = encode_index(&fi, dims);
                let oj = encode_index(&fj, dims);
                out.set(oi, oj, self.get(i, j));
                // restore fi for the next j
                for &f in factors {
                    std::mem::swap(&mut fi[f], &mut fj[f]);
                }
            }
        }
        Ok(out)
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, other: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(other)
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, other: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix::add(self, other)
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, other: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix::sub(self, other)
    }
}

/// Split a composite index into per-factor indices (factor 0 most significant).
pub fn decode_index(index: usize, dims: &[usize]) -> Vec<usize> {
    let mut rem = index;
    let mut out = vec![0usize; dims.len()];
    for f in (0..dims.len()).rev() {
        out[f] = rem % dims[f];
        rem /= dims[f];
    }
    out
}

/// Inverse of [`decode_index`].
pub fn encode_index(factors: &[usize], dims: &[usize]) -> usize {
    let mut index = 0usize;
    for (f, &d) in dims.iter().enumerate() {
        debug_assert!(factors[f] < d);
        index = index * d + factors[f];
    }
    index
}
