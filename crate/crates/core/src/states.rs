//! Validated quantum states over a composite dimension structure.

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::{fl, tol_t, Scalar};
use crate::tol::Tolerances;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Normalized pure state |psi> over tensor factors `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
    dims: Vec<usize>,
}

impl<T: Scalar> PureState<T> {
    /// Validates unit norm within the central tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if amplitudes.len() != total || total == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for factor dimensions {:?}",
                amplitudes.len(),
                dims
            )));
        }
        let norm = norm_of(&amplitudes);
        let dev = (norm - T::one()).abs();
        if dev > tol_t(Tolerances::global().pure_norm) {
            return Err(Error::InvalidPureState(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>, dims: Vec<usize>) -> Result<Self> {
        let norm = norm_of(&amplitudes);
        if norm <= tol_t(1e-12) {
            return Err(Error::InvalidParameter(
                "cannot normalize a (near-)zero amplitude vector".into(),
            ));
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        Self::new(amplitudes.into_iter().map(|a| a * inv).collect(), dims)
    }

    /// Computational basis state |index> in composite row-major labeling.
    pub fn basis(dims: &[usize], index: usize) -> Self {
        let total: usize = dims.iter().product();
        assert!(index < total, "basis label out of range");
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); total];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self {
            amplitudes,
            dims: dims.to_vec(),
        }
    }

    /// Single-qubit |+> or |->.
    pub fn qubit_plus_minus(sign: bool) -> Self {
        let s = fl::<T>(1.0) / fl::<T>(2.0).sqrt();
        let second = if sign { s } else { -s };
        Self {
            amplitudes: vec![Complex::new(s, T::zero()), Complex::new(second, T::zero())],
            dims: vec![2],
        }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { amplitudes, dims }
    }

    /// Outer product |psi><psi| as a rank-1 density matrix.
    pub fn to_density(&self) -> DensityMatrix<T> {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityMatrix::from_trusted(m, self.dims.clone())
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm_of<T: Scalar>(amplitudes: &[Complex<T>]) -> T {
    amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// Validated density matrix over tensor factors `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
    dims: Vec<usize>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positive semidefiniteness within
    /// the central tolerances.
    pub fn new(matrix: ComplexMatrix<T>, dims: Vec<usize>) -> Result<Self> {
        let tol = Tolerances::global();
        let total: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != total || total == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for factor dimensions {:?}",
                matrix.rows(),
                matrix.cols(),
                dims
            )));
        }
        let herm = matrix.hermitian_deviation();
        if herm > tol_t(tol.hermitian) {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {:.3e})",
                herm.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let trace_dev = (matrix.trace() - Complex::new(T::one(), T::zero())).norm();
        if trace_dev > tol_t(tol.trace_one) {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace deviates from 1 by {:.3e}",
                trace_dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let eig = hermitian_eigen(&matrix)?;
        let min = *eig
            .eigenvalues
            .last()
            .expect("non-empty spectrum");
        if min < -tol_t::<T>(tol.psd) {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                min.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Construction from internal operations whose output is valid by
    /// construction (channel application, dephasing, partial trace).
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>, dims: Vec<usize>) -> Self {
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Reduced state on the kept factors.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        let reduced = self.matrix.partial_trace(&self.dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims = keep.iter().map(|&f| self.dims[f]).collect();
        Ok(DensityMatrix::from_trusted(reduced, dims))
    }

    /// Same state viewed with a different factor split of equal total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<DensityMatrix<T>> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view a dimension-{} state with factors {:?}",
                self.dim(),
                dims
            )));
        }
        Ok(DensityMatrix::from_trusted(self.matrix.clone(), dims))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix::from_trusted(self.matrix.tensor(&other.matrix), dims)
    }

    /// Convex combination of states on identical factor structures.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        let mut total = T::zero();
        for (w, part) in parts {
            if part.dims != first.dims {
                return Err(Error::DimensionMismatch(
                    "mixture parts have different factor structures".into(),
                ));
            }
            if *w < T::zero() {
                return Err(Error::InvalidProbabilities("negative weight".into()));
            }
            total = total + *w;
            acc = acc.add(&part.matrix.scale_real(*w));
        }
        if (total - T::one()).abs() > tol_t(Tolerances::global().probability_sum) {
            return Err(Error::InvalidProbabilities(format!(
                "weights sum to {}",
                total
            )));
        }
        Ok(DensityMatrix::from_trusted(acc, first.dims.clone()))
    }
}

/// Dimensions of a bipartite split A|B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidParameter(format!(
                "bipartite factors must be at least 2, got {}x{}",
                d_a, d_b
            )));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn as_vec(&self) -> Vec<usize> {
        vec![self.d_a, self.d_b]
    }

    pub fn check_state<T: Scalar>(&self, rho: &DensityMatrix<T>) -> Result<()> {
        if rho.dim() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} does not match bipartite {}x{}",
                rho.dim(),
                self.d_a,
                self.d_b
            )));
        }
        Ok(())
    }
}

/// Diagonal state from a probability table over composite basis labels.
pub fn classical_state<T: Scalar>(probabilities: &[T], dims: &[usize]) -> Result<DensityMatrix<T>> {
    let total: usize = dims.iter().product();
    if probabilities.len() != total {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for factor dimensions {:?}",
            probabilities.len(),
            dims
        )));
    }
    if probabilities.iter().any(|&p| p < T::zero()) {
        return Err(Error::InvalidProbabilities("negative entry".into()));
    }
    let sum = probabilities.iter().fold(T::zero(), |a, &b| a + b);
    if (sum - T::one()).abs() > tol_t(Tolerances::global().probability_sum) {
        return Err(Error::InvalidProbabilities(format!("entries sum to {}", sum)));
    }
    Ok(DensityMatrix::from_trusted(
        ComplexMatrix::diag_real(probabilities),
        dims.to_vec(),
    ))
}

/// Maximally entangled |Phi_d> = sum_a |a>|a> / sqrt(d) on dims [d, d].
pub fn max_entangled<T: Scalar>(d: usize) -> Result<PureState<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "maximally entangled state needs d >= 2, got {}",
            d
        )));
    }
    let amp = T::one() / fl::<T>(d as f64).sqrt();
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); d * d];
    for a in 0..d {
        amplitudes[a * d + a] = Complex::new(amp, T::zero());
    }
    PureState::new(amplitudes, vec![d, d])
}

/// Haar-random pure state: normalized vector of standard Gaussian components.
/// Deterministic for a fixed seed.
pub fn random_pure<T: Scalar>(dims: &[usize], seed: u64) -> PureState<T> {
    let total: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let amplitudes: Vec<Complex<T>> = (0..total)
            .map(|_| Complex::new(T::standard_normal(&mut rng), T::standard_normal(&mut rng)))
            .collect();
        if let Ok(state) = PureState::normalized(amplitudes, dims.to_vec()) {
            return state;
        }
    }
}

/// Mixture of `rank` seeded random pure states with seeded random weights.
pub fn random_density<T: Scalar>(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix<T>> {
    let total: usize = dims.iter().product();
    if rank == 0 || rank > total {
        return Err(Error::InvalidParameter(format!(
            "rank {} out of range for dimension {}",
            rank, total
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut weights: Vec<T> = (0..rank)
        .map(|_| T::standard_normal(&mut rng).abs() + fl(1e-3))
        .collect();
    let sum = weights.iter().fold(T::zero(), |a, &b| a + b);
    for w in weights.iter_mut() {
        *w = *w / sum;
    }
    let parts: Vec<DensityMatrix<T>> = (0..rank)
        .map(|k| random_pure(dims, seed.wrapping_add(1 + k as u64)).to_density())
        .collect();
    let refs: Vec<(T, &DensityMatrix<T>)> = weights
        .iter()
        .copied()
        .zip(parts.iter())
        .collect();
    DensityMatrix::mixture(&refs)
}
