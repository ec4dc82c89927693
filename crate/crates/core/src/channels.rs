//! Quantum operations as Kraus lists, the dephasing (einselection) map, the
//! named channels used throughout, and the classical/nonclassical unitary
//! classifier.

use crate::error::{Error, Result};
use crate::matrix::{decode_index, ComplexMatrix};
use crate::scalar::{cx, fl, tol_t, Scalar};
use crate::states::DensityMatrix;
use crate::tol::Tolerances;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Common gate matrices.
pub mod gates {
    use super::*;

    pub fn pauli_x<T: Scalar>() -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(2, 2, vec![cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)])
    }

    pub fn pauli_y<T: Scalar>() -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(2, 2, vec![cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)])
    }

    pub fn pauli_z<T: Scalar>() -> ComplexMatrix<T> {
        ComplexMatrix::from_raw(2, 2, vec![cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)])
    }

    pub fn hadamard<T: Scalar>() -> ComplexMatrix<T> {
        let s = fl::<T>(1.0) / fl::<T>(2.0).sqrt();
        ComplexMatrix::from_raw(
            2,
            2,
            vec![
                Complex::new(s, T::zero()),
                Complex::new(s, T::zero()),
                Complex::new(s, T::zero()),
                Complex::new(-s, T::zero()),
            ],
        )
    }

    /// diag(1, e^{i phi}).
    pub fn phase<T: Scalar>(phi: T) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::identity(2);
        m.set(1, 1, Complex::new(phi.cos(), phi.sin()));
        m
    }

    /// S gate, diag(1, i).
    pub fn s_gate<T: Scalar>() -> ComplexMatrix<T> {
        phase(T::FRAC_PI_2())
    }

    /// T gate, diag(1, e^{i pi/4}).
    pub fn t_gate<T: Scalar>() -> ComplexMatrix<T> {
        phase(T::FRAC_PI_4())
    }

    /// CNOT with factor 0 as control: |c t> -> |c, t xor c>.
    pub fn cnot<T: Scalar>() -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(4, 4);
        let one = cx(1.0, 0.0);
        m.set(0, 0, one);
        m.set(1, 1, one);
        m.set(2, 3, one);
        m.set(3, 2, one);
        m
    }

    /// CNOT controlled in the |+->-basis: (H x 1) CNOT (H x 1).
    pub fn rotated_cnot<T: Scalar>() -> ComplexMatrix<T> {
        let hi = hadamard::<T>().tensor(&ComplexMatrix::identity(2));
        hi.matmul(&cnot()).matmul(&hi)
    }

    pub fn swap<T: Scalar>() -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(4, 4);
        let one = cx(1.0, 0.0);
        m.set(0, 0, one);
        m.set(1, 2, one);
        m.set(2, 1, one);
        m.set(3, 3, one);
        m
    }

    /// Weyl shift X_d: |k> -> |k+1 mod d>.
    pub fn weyl_shift<T: Scalar>(d: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            m.set((k + 1) % d, k, cx(1.0, 0.0));
        }
        m
    }

    /// Weyl clock Z_d: |k> -> e^{2 pi i k / d} |k>.
    pub fn weyl_clock<T: Scalar>(d: usize) -> ComplexMatrix<T> {
        let mut m = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            let angle = fl::<T>(2.0) * T::PI() * fl(k as f64) / fl(d as f64);
            m.set(k, k, Complex::new(angle.cos(), angle.sin()));
        }
        m
    }
}

/// Completely positive trace-preserving map as a finite Kraus list. Input and
/// output dimensions are equal.
#[derive(Debug, Clone)]
pub struct QuantumChannel<T> {
    kraus: Vec<ComplexMatrix<T>>,
    dims: Vec<usize>,
}

impl<T: Scalar> QuantumChannel<T> {
    /// Validates shapes and trace preservation (sum K†K = I).
    pub fn new(kraus: Vec<ComplexMatrix<T>>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if kraus.is_empty() || total == 0 {
            return Err(Error::InvalidParameter("empty Kraus list".into()));
        }
        for k in &kraus {
            if k.rows() != total || k.cols() != total {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {}x{} for dimension {}",
                    k.rows(),
                    k.cols(),
                    total
                )));
            }
        }
        let ch = Self { kraus, dims };
        let dev = ch.completeness_deviation();
        if dev > tol_t(Tolerances::global().completeness) {
            return Err(Error::NotTracePreserving(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Max entry modulus of sum K†K - I.
    pub fn completeness_deviation(&self) -> T {
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            acc = acc.add(&k.adjoint().matmul(k));
        }
        acc.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// The unitary if this channel is a single unitary Kraus operator.
    pub fn as_unitary(&self) -> Option<&ComplexMatrix<T>> {
        if self.kraus.len() == 1
            && self.kraus[0].is_unitary(tol_t(Tolerances::global().unitary))
        {
            Some(&self.kraus[0])
        } else {
            None
        }
    }

    /// Same channel viewed with a different factor split of equal total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot view a dimension-{} channel with factors {:?}",
                self.dim(),
                dims
            )));
        }
        Ok(Self {
            kraus: self.kraus.clone(),
            dims,
        })
    }

    /// sum K rho K† on a validated state.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "channel on dimension {} applied to state of dimension {}",
                self.dim(),
                rho.dim()
            )));
        }
        let out = self.apply_matrix(rho.matrix()).hermitize();
        Ok(DensityMatrix::from_trusted(out, self.dims.clone()))
    }

    /// sum K m K† on an arbitrary matrix (the channel as a linear map).
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(m.rows(), self.dim(), "dimension mismatch in channel application");
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            acc = acc.add(&k.matmul(m).matmul(&k.adjoint()));
        }
        acc
    }

    /// Composition a.compose(b) applies b first: (a o b)(rho) = a(b(rho)).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.dims != inner.dims {
            return Err(Error::DimensionMismatch(format!(
                "composition of channels over {:?} and {:?}",
                self.dims, inner.dims
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a.matmul(b));
            }
        }
        let ch = Self {
            kraus,
            dims: self.dims.clone(),
        };
        // keep Kraus lists bounded: d*d operators always suffice
        if ch.kraus.len() > ch.dim() * ch.dim() {
            ch.canonical()
        } else {
            Ok(ch)
        }
    }

    /// Tensor product channel {A_i (x) B_j}.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.tensor(b));
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { kraus, dims }
    }

    /// Choi matrix (channel (x) identity applied to |Phi_d><Phi_d|), computed
    /// as sum of vec(K) outer products / d.
    pub fn choi_matrix(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        let dd = d * d;
        let mut choi = ComplexMatrix::zeros(dd, dd);
        let norm = Complex::new(T::one() / fl(d as f64), T::zero());
        for k in &self.kraus {
            // vec(K)[(i, j)] = K_ij with composite index i*d + j (out, in-copy)
            let v: Vec<Complex<T>> = (0..dd).map(|x| k.get(x / d, x % d)).collect();
            for i in 0..dd {
                for j in 0..dd {
                    let val = choi.get(i, j) + v[i] * v[j].conj() * norm;
                    choi.set(i, j, val);
                }
            }
        }
        choi
    }

    /// Rebuild a minimal Kraus list from the Choi eigendecomposition; the
    /// channel action is unchanged.
    pub fn canonical(&self) -> Result<Self> {
        let d = self.dim();
        let eig = crate::eigen::hermitian_eigen(&self.choi_matrix())?;
        let cut = tol_t::<T>(1e-12);
        let scale = fl::<T>(d as f64);
        let mut kraus = Vec::new();
        for (m, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam <= cut {
                continue;
            }
            let coeff = (lam * scale).sqrt();
            let col = eig.eigenvector(m);
            kraus.push(ComplexMatrix::from_fn(d, d, |i, j| {
                col[i * d + j] * Complex::new(coeff, T::zero())
            }));
        }
        Self::new(kraus, self.dims.clone())
    }

    /// Max deviation from [channel, other] = 0 over the matrix-unit spanning set.
    pub fn commutator_deviation(&self, other: &Self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let e = ComplexMatrix::matrix_unit(d, i, j);
                let ab = self.apply_matrix(&other.apply_matrix(&e));
                let ba = other.apply_matrix(&self.apply_matrix(&e));
                let dev = ab.max_abs_diff(&ba);
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// Max action difference against another channel over the matrix-unit
    /// spanning set.
    pub fn action_deviation(&self, other: &Self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let e = ComplexMatrix::matrix_unit(d, i, j);
                let dev = self.apply_matrix(&e).max_abs_diff(&other.apply_matrix(&e));
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// A dephasing specification: which tensor factors are dephased, and in which
/// orthonormal basis (computational unless a rotation is attached).
#[derive(Debug, Clone)]
pub struct Einselection<T> {
    dims: Vec<usize>,
    dephased: Vec<usize>,
    rotations: Vec<Option<ComplexMatrix<T>>>,
}

impl<T: Scalar> Einselection<T> {
    /// Dephase every factor (full einselection).
    pub fn full(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            dephased: (0..dims.len()).collect(),
            rotations: vec![None; dims.len()],
        }
    }

    /// Dephase only the listed factors.
    pub fn on_factors(dims: &[usize], factors: &[usize]) -> Result<Self> {
        let mut dephased = factors.to_vec();
        dephased.sort_unstable();
        dephased.dedup();
        if dephased.iter().any(|&f| f >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "dephased factor out of range for {} factors",
                dims.len()
            )));
        }
        if dephased.is_empty() {
            return Err(Error::InvalidParameter(
                "einselection must dephase at least one factor".into(),
            ));
        }
        Ok(Self {
            dims: dims.to_vec(),
            dephased,
            rotations: vec![None; dims.len()],
        })
    }

    /// One-sided einselection on a single factor (e.g. factor 1 = Bob's side).
    pub fn one_sided(dims: &[usize], factor: usize) -> Result<Self> {
        Self::on_factors(dims, &[factor])
    }

    /// Dephase factor `factor` in the basis given by the columns of `rotation`.
    pub fn with_rotation(mut self, factor: usize, rotation: ComplexMatrix<T>) -> Result<Self> {
        if !self.dephased.contains(&factor) {
            return Err(Error::InvalidParameter(format!(
                "factor {} is not dephased",
                factor
            )));
        }
        if rotation.rows() != self.dims[factor] || rotation.cols() != self.dims[factor] {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} rotation for a dimension-{} factor",
                rotation.rows(),
                rotation.cols(),
                self.dims[factor]
            )));
        }
        let dev = rotation.unitary_deviation();
        if dev > tol_t(Tolerances::global().unitary) {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
                tolerance: Tolerances::global().unitary,
            });
        }
        self.rotations[factor] = Some(rotation);
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dephased_factors(&self) -> &[usize] {
        &self.dephased
    }

    pub fn is_full(&self) -> bool {
        self.dephased.len() == self.dims.len()
    }

    /// Tensor product of the per-factor basis rotations (identity where absent).
    pub fn basis_matrix(&self) -> ComplexMatrix<T> {
        let mut b = ComplexMatrix::identity(1);
        for (f, &d) in self.dims.iter().enumerate() {
            let factor = match &self.rotations[f] {
                Some(r) => r.clone(),
                None => ComplexMatrix::identity(d),
            };
            b = b.tensor(&factor);
        }
        b
    }

    fn has_rotations(&self) -> bool {
        self.rotations.iter().any(|r| r.is_some())
    }

    /// Gamma(m) = sum Pi m Pi: erase matrix elements between different
    /// einselected labels on the dephased factors.
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(m.rows(), self.dim(), "dimension mismatch in dephasing");
        if self.has_rotations() {
            let b = self.basis_matrix();
            let rotated = b.adjoint().matmul(m).matmul(&b);
            let erased = self.erase_off_blocks(&rotated);
            b.matmul(&erased).matmul(&b.adjoint())
        } else {
            self.erase_off_blocks(m)
        }
    }

    fn erase_off_blocks(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            let fi = decode_index(i, &self.dims);
            for j in 0..d {
                let fj = decode_index(j, &self.dims);
                if self.dephased.iter().all(|&f| fi[f] == fj[f]) {
                    out.set(i, j, m.get(i, j));
                }
            }
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "einselection on dimension {} applied to state of dimension {}",
                self.dim(),
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_trusted(
            self.apply_matrix(rho.matrix()),
            rho.dims().to_vec(),
        ))
    }

    /// Is rho a fixed point of this dephasing?
    pub fn is_classical_state(&self, rho: &DensityMatrix<T>, tolerance: T) -> bool {
        self.apply_matrix(rho.matrix()).max_abs_diff(rho.matrix()) <= tolerance
    }

    /// The rank-1-per-label projector Kraus list of the dephasing channel.
    pub fn projectors(&self) -> Vec<ComplexMatrix<T>> {
        let labels: Vec<usize> = self.dephased.iter().map(|&f| self.dims[f]).collect();
        let count: usize = labels.iter().product();
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            let assignment = decode_index(idx, &labels);
            let mut proj = ComplexMatrix::identity(1);
            for (f, &d) in self.dims.iter().enumerate() {
                let factor = match self.dephased.iter().position(|&g| g == f) {
                    Some(pos) => {
                        let k = assignment[pos];
                        match &self.rotations[f] {
                            Some(r) => {
                                // |u_k><u_k| from column k of the rotation
                                ComplexMatrix::from_fn(d, d, |i, j| {
                                    r.get(i, k) * r.get(j, k).conj()
                                })
                            }
                            None => ComplexMatrix::basis_projector(d, k),
                        }
                    }
                    None => ComplexMatrix::identity(d),
                };
                proj = proj.tensor(&factor);
            }
            out.push(proj);
        }
        out
    }

    /// The dephasing as a quantum channel.
    pub fn as_channel(&self) -> QuantumChannel<T> {
        QuantumChannel {
            kraus: self.projectors(),
            dims: self.dims.clone(),
        }
    }
}

/// Outcome of the unitary dichotomy test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryClass {
    /// Phase-decorated permutation of the einselected basis; W = 0.
    Classical,
    /// Any other unitary; W is infinite.
    Nonclassical,
}

/// Classify a unitary against a full einselection: Classical iff every column
/// of U, expressed in the einselected basis, has exactly one entry of modulus
/// 1 (a permutation with phases).
pub fn classify_unitary<T: Scalar>(
    u: &ComplexMatrix<T>,
    einselection: &Einselection<T>,
) -> Result<UnitaryClass> {
    let tol = Tolerances::global();
    if !einselection.is_full() {
        return Err(Error::Unsupported(
            "the unitary dichotomy applies to full einselection only".into(),
        ));
    }
    if u.rows() != einselection.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} unitary for einselection dimension {}",
            u.rows(),
            u.cols(),
            einselection.dim()
        )));
    }
    let dev = u.unitary_deviation();
    if dev > tol_t(tol.unitary) {
        return Err(Error::NotUnitary {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.unitary,
        });
    }
    let in_basis = if einselection.has_rotations() {
        let b = einselection.basis_matrix();
        b.adjoint().matmul(u).matmul(&b)
    } else {
        u.clone()
    };
    let cut = tol_t::<T>(tol.classify_unitary);
    let n = in_basis.rows();
    for j in 0..n {
        let mut unit_entries = 0usize;
        for i in 0..n {
            if (in_basis.get(i, j).norm() - T::one()).abs() <= cut {
                unit_entries += 1;
            }
        }
        if unit_entries != 1 {
            return Ok(UnitaryClass::Nonclassical);
        }
    }
    Ok(UnitaryClass::Classical)
}

/// Identity channel.
pub fn identity_channel<T: Scalar>(dims: &[usize]) -> QuantumChannel<T> {
    let d: usize = dims.iter().product();
    QuantumChannel {
        kraus: vec![ComplexMatrix::identity(d)],
        dims: dims.to_vec(),
    }
}

/// Channel with a single unitary Kraus operator.
pub fn unitary_channel<T: Scalar>(u: ComplexMatrix<T>, dims: &[usize]) -> Result<QuantumChannel<T>> {
    let dev = u.unitary_deviation();
    if dev > tol_t(Tolerances::global().unitary) {
        return Err(Error::NotUnitary {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
            tolerance: Tolerances::global().unitary,
        });
    }
    QuantumChannel::new(vec![u], dims.to_vec())
}

/// The dephasing channel of an einselection.
pub fn dephasing<T: Scalar>(einselection: &Einselection<T>) -> QuantumChannel<T> {
    einselection.as_channel()
}

/// Depolarising channel rho -> mu rho + (1 - mu) I/d, realized by the Weyl
/// (generalized Pauli) Kraus set and exact on all inputs.
pub fn depolarizing<T: Scalar>(dims: &[usize], mu: T) -> Result<QuantumChannel<T>> {
    if mu < T::zero() || mu > T::one() {
        return Err(Error::InvalidParameter(format!(
            "depolarizing parameter {} outside [0, 1]",
            mu
        )));
    }
    let d: usize = dims.iter().product();
    let dd = fl::<T>((d * d) as f64);
    let uniform = (T::one() - mu) / dd;
    let shift = gates::weyl_shift::<T>(d);
    let clock = gates::weyl_clock::<T>(d);
    let mut kraus = Vec::with_capacity(d * d);
    let mut xa = ComplexMatrix::identity(d);
    for a in 0..d {
        let mut w = xa.clone();
        for b in 0..d {
            let weight = if a == 0 && b == 0 { mu + uniform } else { uniform };
            kraus.push(w.scale_real(weight.sqrt()));
            if b + 1 < d {
                w = w.matmul(&clock);
            }
        }
        if a + 1 < d {
            xa = shift.matmul(&xa);
        }
    }
    QuantumChannel::new(kraus, dims.to_vec())
}

/// Amplitude damping: F1 = |0><0| + sqrt(1-gamma)|1><1|, F2 = sqrt(gamma)|0><1|.
pub fn amplitude_damping<T: Scalar>(gamma: T) -> Result<QuantumChannel<T>> {
    if gamma < T::zero() || gamma > T::one() {
        return Err(Error::InvalidParameter(format!(
            "damping parameter {} outside [0, 1]",
            gamma
        )));
    }
    let mut f1 = ComplexMatrix::zeros(2, 2);
    f1.set(0, 0, cx(1.0, 0.0));
    f1.set(1, 1, Complex::new((T::one() - gamma).sqrt(), T::zero()));
    let mut f2 = ComplexMatrix::zeros(2, 2);
    f2.set(0, 1, Complex::new(gamma.sqrt(), T::zero()));
    QuantumChannel::new(vec![f1, f2], vec![2])
}

/// Single-qubit Pauli channel with probabilities (p_I, p_X, p_Y, p_Z).
pub fn pauli_channel<T: Scalar>(probabilities: &[T]) -> Result<QuantumChannel<T>> {
    if probabilities.len() != 4 {
        return Err(Error::InvalidProbabilities(
            "expected four Pauli probabilities".into(),
        ));
    }
    if probabilities.iter().any(|&p| p < T::zero()) {
        return Err(Error::InvalidProbabilities("negative entry".into()));
    }
    let sum = probabilities.iter().fold(T::zero(), |a, &b| a + b);
    if (sum - T::one()).abs() > tol_t(Tolerances::global().probability_sum) {
        return Err(Error::InvalidProbabilities(format!("entries sum to {}", sum)));
    }
    let ops = [
        ComplexMatrix::identity(2),
        gates::pauli_x(),
        gates::pauli_y(),
        gates::pauli_z(),
    ];
    let kraus = probabilities
        .iter()
        .zip(ops.iter())
        .filter(|(&p, _)| p > T::zero())
        .map(|(&p, op)| op.scale_real(p.sqrt()))
        .collect();
    QuantumChannel::new(kraus, vec![2])
}

pub fn bit_flip<T: Scalar>(p: T) -> Result<QuantumChannel<T>> {
    pauli_channel(&[T::one() - p, p, T::zero(), T::zero()])
}

pub fn phase_flip<T: Scalar>(p: T) -> Result<QuantumChannel<T>> {
    pauli_channel(&[T::one() - p, T::zero(), T::zero(), p])
}

/// Phase damping with Kraus diag(1, sqrt(1-lambda)) and diag(0, sqrt(lambda)).
pub fn phase_damping<T: Scalar>(lambda: T) -> Result<QuantumChannel<T>> {
    if lambda < T::zero() || lambda > T::one() {
        return Err(Error::InvalidParameter(format!(
            "damping parameter {} outside [0, 1]",
            lambda
        )));
    }
    let k0 = ComplexMatrix::diag_real(&[T::one(), (T::one() - lambda).sqrt()]);
    let k1 = ComplexMatrix::diag_real(&[T::zero(), lambda.sqrt()]);
    QuantumChannel::new(vec![k0, k1], vec![2])
}

pub fn hadamard_channel<T: Scalar>() -> QuantumChannel<T> {
    unitary_channel(gates::hadamard(), &[2]).expect("Hadamard is unitary")
}

pub fn cnot_channel<T: Scalar>() -> QuantumChannel<T> {
    unitary_channel(gates::cnot(), &[2, 2]).expect("CNOT is unitary")
}

pub fn rotated_cnot_channel<T: Scalar>() -> QuantumChannel<T> {
    unitary_channel(gates::rotated_cnot(), &[2, 2]).expect("rotated CNOT is unitary")
}

/// The local single-qubit map with Kraus E1 = |0><0|, E2 = |+><1|, which
/// drives |1> into a state non-orthogonal to |0>.
pub fn discord_map_local<T: Scalar>() -> QuantumChannel<T> {
    let mut e1 = ComplexMatrix::zeros(2, 2);
    e1.set(0, 0, cx(1.0, 0.0));
    let s = fl::<T>(1.0) / fl::<T>(2.0).sqrt();
    let mut e2 = ComplexMatrix::zeros(2, 2);
    e2.set(0, 1, Complex::new(s, T::zero()));
    e2.set(1, 1, Complex::new(s, T::zero()));
    QuantumChannel::new(vec![e1, e2], vec![2]).expect("discord map is trace preserving")
}

/// The two-qubit discord-generating map 1 (x) Omega_B.
pub fn discord_map<T: Scalar>() -> QuantumChannel<T> {
    identity_channel(&[2]).tensor(&discord_map_local())
}

/// Classical channel from a column-stochastic matrix t (row-major, d x d,
/// t[i][j] = P(i | j)), realized as Kraus {sqrt(t_ij) |i><j|}.
pub fn classical_channel<T: Scalar>(t: &[T], dims: &[usize]) -> Result<QuantumChannel<T>> {
    let d: usize = dims.iter().product();
    if t.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {}x{} stochastic matrix",
            t.len(),
            d,
            d
        )));
    }
    let tol = tol_t(Tolerances::global().probability_sum);
    for j in 0..d {
        let mut col = T::zero();
        for i in 0..d {
            let v = t[i * d + j];
            if v < T::zero() {
                return Err(Error::InvalidProbabilities("negative entry".into()));
            }
            col = col + v;
        }
        if (col - T::one()).abs() > tol {
            return Err(Error::InvalidProbabilities(format!(
                "column {} sums to {}",
                j, col
            )));
        }
    }
    let mut kraus = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = t[i * d + j];
            if v > T::zero() {
                kraus.push(ComplexMatrix::matrix_unit(d, i, j).scale_real(v.sqrt()));
            }
        }
    }
    QuantumChannel::new(kraus, dims.to_vec())
}

/// Convex mixture of channels over identical factor structures.
pub fn mixture_channel<T: Scalar>(parts: &[(T, QuantumChannel<T>)]) -> Result<QuantumChannel<T>> {
    let (_, first) = parts
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
    let mut total = T::zero();
    let mut kraus = Vec::new();
    for (w, ch) in parts {
        if ch.dims != first.dims {
            return Err(Error::DimensionMismatch(
                "mixture parts have different factor structures".into(),
            ));
        }
        if *w < T::zero() {
            return Err(Error::InvalidProbabilities("negative weight".into()));
        }
        total = total + *w;
        let root = w.sqrt();
        for k in &ch.kraus {
            kraus.push(k.scale_real(root));
        }
    }
    if (total - T::one()).abs() > tol_t(Tolerances::global().probability_sum) {
        return Err(Error::InvalidProbabilities(format!(
            "weights sum to {}",
            total
        )));
    }
    QuantumChannel::new(kraus, first.dims.clone())
}

/// Random CPTP channel with `kraus_count` operators via a seeded Stinespring
/// isometry (Gram-Schmidt on a Gaussian matrix). Deterministic per seed.
pub fn random_channel<T: Scalar>(
    dims: &[usize],
    kraus_count: usize,
    seed: u64,
) -> Result<QuantumChannel<T>> {
    if kraus_count == 0 {
        return Err(Error::InvalidParameter("need at least one Kraus operator".into()));
    }
    let d: usize = dims.iter().product();
    let rows = d * kraus_count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1));
    // columns of v: orthonormal images of the input basis
    let mut v: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
    while v.len() < d {
        let mut col: Vec<Complex<T>> = (0..rows)
            .map(|_| Complex::new(T::standard_normal(&mut rng), T::standard_normal(&mut rng)))
            .collect();
        for prev in &v {
            let overlap: Complex<T> = prev.iter().zip(&col).map(|(p, c)| p.conj() * *c).sum();
            for (c, p) in col.iter_mut().zip(prev) {
                *c = *c - overlap * *p;
            }
        }
        let norm = col
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if norm < fl(1e-6) {
            continue; // essentially impossible; redraw
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        for c in col.iter_mut() {
            *c = *c * inv;
        }
        v.push(col);
    }
    let kraus: Vec<ComplexMatrix<T>> = (0..kraus_count)
        .map(|i| ComplexMatrix::from_fn(d, d, |r, c| v[c][r * kraus_count + i]))
        .collect();
    QuantumChannel::new(kraus, dims.to_vec())
}
