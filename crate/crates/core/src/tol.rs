//! Central tolerance record. Every numerical threshold in the crate lives
//! here; the CLI can override the whole record at startup (OPQ_TOLERANCE_FILE).

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// All numerical tolerances, in one place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max deviation from A = A† accepted as Hermitian.
    pub hermitian: f64,
    /// Max deviation from U†U = I accepted as unitary.
    pub unitary: f64,
    /// Max deviation of Tr(rho) from 1.
    pub trace_one: f64,
    /// Most negative eigenvalue accepted as positive semidefinite.
    pub psd: f64,
    /// Max deviation of sum K†K from I accepted as trace preserving.
    pub completeness: f64,
    /// Eigenvalues at or below this count as zero for spectral log/entropy.
    pub zero_eigenvalue: f64,
    /// Sigma-eigenvalue below this counts as kernel in relative entropy.
    pub kernel_sigma: f64,
    /// Rho-weight above this inside sigma's kernel makes the entropy infinite.
    pub kernel_rho_weight: f64,
    /// Max deviation of a pure-state norm from 1.
    pub pure_norm: f64,
    /// Max deviation of a probability table sum from 1.
    pub probability_sum: f64,
    /// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
    pub jacobi_off_diagonal: f64,
    /// Negative entropy values within this of zero are clamped to zero.
    pub entropy_clamp: f64,
    /// Modulus-one detection threshold for the unitary classifier.
    pub classify_unitary: f64,
    /// Max commutator deviation on a spanning set accepted as commuting.
    pub commutation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            unitary: 1e-10,
            trace_one: 1e-10,
            psd: 1e-10,
            completeness: 1e-10,
            zero_eigenvalue: 1e-12,
            kernel_sigma: 1e-10,
            kernel_rho_weight: 1e-8,
            pure_norm: 1e-12,
            probability_sum: 1e-12,
            jacobi_off_diagonal: 1e-14,
            entropy_clamp: 1e-9,
            classify_unitary: 1e-10,
            commutation: 1e-10,
        }
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

impl Tolerances {
    /// Process-wide tolerance record (defaults unless [`Tolerances::install`] ran).
    pub fn global() -> &'static Tolerances {
        GLOBAL.get_or_init(Tolerances::default)
    }

    /// Install a custom record for the whole process. Fails if one is already
    /// in effect (reproducibility: tolerances must not change mid-run).
    pub fn install(t: Tolerances) -> Result<(), Tolerances> {
        GLOBAL.set(t)
    }
}
