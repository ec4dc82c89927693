//! Von Neumann entropy, extended-real quantum relative entropy, conditional
//! entropy and discord quantities. All logarithms are base 2.

use crate::channels::Einselection;
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::optimizer::{maximize, Objective, OptimizerConfig};
use crate::scalar::{fl, tol_t, Scalar};
use crate::states::{BipartiteDims, DensityMatrix};
use crate::tol::Tolerances;
use num_complex::Complex;
use std::fmt;

/// A relative-entropy result: finite, or +infinity with a witness explaining
/// the kernel overlap that caused the divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedNonNegative<T> {
    Finite(T),
    Infinite(KernelWitness<T>),
}

/// Evidence of divergence: an eigenvalue of sigma below tolerance carrying
/// rho-weight above tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelWitness<T> {
    /// Position in sigma's descending spectrum.
    pub eigenvector_index: usize,
    pub sigma_eigenvalue: T,
    pub rho_weight: T,
}

impl<T: Scalar> ExtendedNonNegative<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedNonNegative::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            ExtendedNonNegative::Finite(v) => Some(*v),
            ExtendedNonNegative::Infinite(_) => None,
        }
    }

    pub fn expect_finite(&self, context: &str) -> T {
        self.finite()
            .unwrap_or_else(|| panic!("unexpected infinite value: {context}"))
    }

    /// Numeric value with +inf for the infinite case.
    pub fn to_float(&self) -> T {
        match self {
            ExtendedNonNegative::Finite(v) => *v,
            ExtendedNonNegative::Infinite(_) => T::infinity(),
        }
    }
}

impl<T: Scalar> fmt::Display for ExtendedNonNegative<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNonNegative::Finite(v) => write!(f, "{}", v),
            ExtendedNonNegative::Infinite(w) => write!(
                f,
                "infinite (sigma eigenvalue {:.3e} at index {} carries rho-weight {:.3e})",
                w.sigma_eigenvalue, w.eigenvector_index, w.rho_weight
            ),
        }
    }
}

fn clamp_nonnegative<T: Scalar>(v: T) -> T {
    debug_assert!(
        v > -tol_t::<T>(Tolerances::global().entropy_clamp),
        "entropy fell below the clamp window"
    );
    if v < T::zero() {
        T::zero()
    } else {
        v
    }
}

/// Von Neumann entropy S(rho) = -Tr[rho log2 rho], in [0, log2 d].
pub fn von_neumann<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(entropy_of_spectrum(
        &hermitian_eigen(rho.matrix())?.eigenvalues,
    ))
}

fn entropy_of_spectrum<T: Scalar>(eigenvalues: &[T]) -> T {
    let cut = tol_t::<T>(Tolerances::global().zero_eigenvalue);
    let s = eigenvalues
        .iter()
        .filter(|&&l| l > cut)
        .fold(T::zero(), |acc, &l| acc - l * l.log2());
    clamp_nonnegative(s)
}

/// Quantum relative entropy S(rho || sigma) = Tr[rho (log2 rho - log2 sigma)],
/// computed in sigma's eigenbasis. Infinite when sigma's kernel carries
/// rho-weight above tolerance.
pub fn relative_entropy<T: Scalar>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<ExtendedNonNegative<T>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let tol = Tolerances::global();
    let kernel_cut = tol_t::<T>(tol.kernel_sigma);
    let weight_cut = tol_t::<T>(tol.kernel_rho_weight);

    let sig = hermitian_eigen(sigma.matrix())?;
    let n = sigma.dim();

    // rho-weight in each sigma eigenvector
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let v = sig.eigenvector(i);
        let rv = rho.matrix().matvec(&v);
        let w: Complex<T> = v.iter().zip(&rv).map(|(a, b)| a.conj() * *b).sum();
        weights.push(if w.re < T::zero() { T::zero() } else { w.re });
    }

    // divergence check: kernel of sigma overlapping the support of rho
    let mut witness: Option<KernelWitness<T>> = None;
    for (i, (&s, &w)) in sig.eigenvalues.iter().zip(&weights).enumerate() {
        if s <= kernel_cut && w > weight_cut {
            let better = match &witness {
                None => true,
                Some(prev) => w > prev.rho_weight,
            };
            if better {
                witness = Some(KernelWitness {
                    eigenvector_index: i,
                    sigma_eigenvalue: s,
                    rho_weight: w,
                });
            }
        }
    }
    if let Some(w) = witness {
        return Ok(ExtendedNonNegative::Infinite(w));
    }

    let tr_rho_log_sigma = sig
        .eigenvalues
        .iter()
        .zip(&weights)
        .filter(|(&s, _)| s > kernel_cut)
        .fold(T::zero(), |acc, (&s, &w)| acc + w * s.log2());

    let rho_eig = hermitian_eigen(rho.matrix())?;
    let cut = tol_t::<T>(tol.zero_eigenvalue);
    let tr_rho_log_rho = rho_eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > cut)
        .fold(T::zero(), |acc, &l| acc + l * l.log2());

    Ok(ExtendedNonNegative::Finite(clamp_nonnegative(
        tr_rho_log_rho - tr_rho_log_sigma,
    )))
}

/// Conditional entropy S(A|B) = S(rho_AB) - S(rho_B); may be negative.
pub fn conditional_entropy<T: Scalar>(rho: &DensityMatrix<T>, dims: BipartiteDims) -> Result<T> {
    dims.check_state(rho)?;
    let joint = entropy_of_spectrum(&hermitian_eigen(rho.matrix())?.eigenvalues);
    let rho_b = rho.matrix().partial_trace(&dims.as_vec(), &[1])?;
    let marginal = entropy_of_spectrum(&hermitian_eigen(&rho_b)?.eigenvalues);
    Ok(joint - marginal)
}

/// Einselected relative entropy of discord Q_g(rho) = S(rho || Gamma(rho)).
/// Always finite and equal to S(Gamma rho) - S(rho).
pub fn q_g<T: Scalar>(
    rho: &DensityMatrix<T>,
    gamma: &Einselection<T>,
) -> Result<ExtendedNonNegative<T>> {
    if rho.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "einselection on dimension {} for state of dimension {}",
            gamma.dim(),
            rho.dim()
        )));
    }
    relative_entropy(rho, &gamma.apply(rho)?)
}

fn check_one_sided_on_b<T: Scalar>(dims: BipartiteDims, gamma_b: &Einselection<T>) -> Result<()> {
    if gamma_b.dims() != dims.as_vec().as_slice() || gamma_b.dephased_factors() != [1] {
        return Err(Error::InvalidParameter(
            "einselection must act on factor B of the bipartite split only".into(),
        ));
    }
    Ok(())
}

/// Zurek discord Q_z = S(A|B) after one-sided dephasing minus S(A|B) before:
/// the measurement branches of Gamma_B realize the projective outcomes.
pub fn zurek_discord<T: Scalar>(
    rho: &DensityMatrix<T>,
    dims: BipartiteDims,
    gamma_b: &Einselection<T>,
) -> Result<T> {
    dims.check_state(rho)?;
    check_one_sided_on_b(dims, gamma_b)?;
    let dephased = DensityMatrix::from_trusted(
        gamma_b.apply_matrix(rho.matrix()),
        dims.as_vec(),
    );
    let viewed = rho.with_dims(dims.as_vec())?;
    Ok(conditional_entropy(&dephased, dims)? - conditional_entropy(&viewed, dims)?)
}

/// Discord minimized over rank-1 projective measurement bases on a qubit B.
#[derive(Debug, Clone)]
pub struct DiscordReport<T> {
    /// Q_z in the computational basis.
    pub zurek_value: T,
    /// Minimum over measurement bases (two Bloch angles, multistart).
    pub minimized_value: T,
    /// Basis achieving the minimum, as a 2x2 unitary of basis columns.
    pub optimal_measurement_basis: ComplexMatrix<T>,
    /// S(A|B) of the input state.
    pub conditional_before: T,
    /// S(A|B) after dephasing in the optimal basis.
    pub conditional_after: T,
}

/// Measurement basis on the Bloch sphere: columns cos(t/2)|0> + e^{i p} sin(t/2)|1>
/// and its orthogonal complement.
pub fn bloch_basis<T: Scalar>(theta: T, phi: T) -> ComplexMatrix<T> {
    let half = fl::<T>(0.5);
    let c = (theta * half).cos();
    let s = (theta * half).sin();
    let e_pos = Complex::new(phi.cos(), phi.sin());
    let e_neg = Complex::new(phi.cos(), -phi.sin());
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex::new(c, T::zero()));
    m.set(1, 0, e_pos * Complex::new(s, T::zero()));
    m.set(0, 1, e_neg.scale(-s));
    m.set(1, 1, Complex::new(c, T::zero()));
    m
}

/// Minimize the Zurek discord over projective measurement bases on B (d_B = 2)
/// with the default optimizer configuration.
pub fn discord_min<T: Scalar>(rho: &DensityMatrix<T>, dims: BipartiteDims) -> Result<DiscordReport<T>> {
    discord_min_with_config(rho, dims, &OptimizerConfig::with_seed(17))
}

pub fn discord_min_with_config<T: Scalar>(
    rho: &DensityMatrix<T>,
    dims: BipartiteDims,
    config: &OptimizerConfig<T>,
) -> Result<DiscordReport<T>> {
    dims.check_state(rho)?;
    if dims.d_b != 2 {
        return Err(Error::Unsupported(format!(
            "discord minimization requires a qubit on the measurement side (d_B = {})",
            dims.d_b
        )));
    }

    let dims_vec = dims.as_vec();
    let computational = Einselection::one_sided(&dims_vec, 1)?;
    let zurek_value = zurek_discord(rho, dims, &computational)?;
    let conditional_before = conditional_entropy(&rho.with_dims(dims_vec.clone())?, dims)?;

    let q_of = |theta: T, phi: T| -> T {
        let gamma = Einselection::one_sided(&dims_vec, 1)
            .and_then(|g| g.with_rotation(1, bloch_basis(theta, phi)))
            .expect("Bloch basis is unitary");
        zurek_discord(rho, dims, &gamma).expect("validated inputs")
    };

    let mut cfg = config.clone();
    // measurement-basis candidates: Z, X and Y bases
    cfg.seeded_candidates = vec![
        vec![T::zero(), T::zero()],
        vec![T::FRAC_PI_2(), T::zero()],
        vec![T::FRAC_PI_2(), T::FRAC_PI_2()],
    ];
    let result = maximize(|x| Objective::Finite(-q_of(x[0], x[1])), 2, &cfg)?;
    let minimized_value = -result
        .best_value
        .finite()
        .expect("discord objective is finite");
    let (theta, phi) = (result.best_parameters[0], result.best_parameters[1]);
    let basis = bloch_basis(theta, phi);

    let optimal_gamma =
        Einselection::one_sided(&dims_vec, 1)?.with_rotation(1, basis.clone())?;
    let conditional_after = conditional_entropy(
        &DensityMatrix::from_trusted(optimal_gamma.apply_matrix(rho.matrix()), dims_vec),
        dims,
    )?;

    Ok(DiscordReport {
        zurek_value,
        minimized_value,
        optimal_measurement_basis: basis,
        conditional_before,
        conditional_after,
    })
}
