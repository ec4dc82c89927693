//! Superdense-coding capacity, the discord/capacity identity for channels
//! commuting with one-sided dephasing, the PPT entanglement boundary, and the
//! dense-coding sweep that produces figure data.

use crate::channels::{depolarizing, Einselection, QuantumChannel};
use crate::eigen::hermitian_eigen;
use crate::entropy::{conditional_entropy, zurek_discord};
use crate::error::{Error, Result};
use crate::scalar::{fl, tol_t, Scalar};
use crate::states::{BipartiteDims, DensityMatrix, max_entangled};
use crate::tol::Tolerances;

/// Superdense-coding capacity F = log2(d_A) - S(A|B), reported raw (it can
/// sit below log2(d_A); the operational value is [`operational_capacity`]).
pub fn sdc_capacity<T: Scalar>(rho: &DensityMatrix<T>, dims: BipartiteDims) -> Result<T> {
    dims.check_state(rho)?;
    let viewed = rho.with_dims(dims.as_vec())?;
    Ok(fl::<T>(dims.d_a as f64).log2() - conditional_entropy(&viewed, dims)?)
}

/// max(F, log2 d_A): ignoring the shared state always conveys log2(d_A) bits.
pub fn operational_capacity<T: Scalar>(f: T, d_a: usize) -> T {
    let floor = fl::<T>(d_a as f64).log2();
    if f > floor {
        f
    } else {
        floor
    }
}

/// Both sides of the discord/capacity identity for a channel commuting with
/// one-sided dephasing, evaluated on the maximally entangled input.
#[derive(Debug, Clone, Copy)]
pub struct CapacityGap<T> {
    /// Zurek discord of the channel output (left-hand side).
    pub q_z: T,
    /// Capacity with the entangled input.
    pub f_q: T,
    /// Capacity with the dephased (classically correlated) input.
    pub f_c: T,
    /// |q_z - (f_q - f_c)|.
    pub residual: T,
}

/// Check the identity Q_z(Omega |Phi_d>) = F(Omega |Phi_d>) - F(Omega Gamma |Phi_d>).
/// Rejects channels that do not commute with the one-sided dephasing.
pub fn discord_capacity_gap<T: Scalar>(
    ch: &QuantumChannel<T>,
    d: usize,
    gamma_b: &Einselection<T>,
) -> Result<CapacityGap<T>> {
    let dims = BipartiteDims::new(d, d)?;
    if ch.dim() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} for a {}x{} system",
            ch.dim(),
            d,
            d
        )));
    }
    if gamma_b.dims() != dims.as_vec().as_slice() || gamma_b.dephased_factors() != [1] {
        return Err(Error::InvalidParameter(
            "einselection must dephase factor B only".into(),
        ));
    }
    let commutator = ch.commutator_deviation(&gamma_b.as_channel());
    if commutator > tol_t(Tolerances::global().commutation) {
        return Err(Error::InvalidParameter(format!(
            "channel does not commute with the dephasing (deviation {:.3e})",
            commutator.to_f64().unwrap_or(f64::NAN)
        )));
    }

    let phi = max_entangled::<T>(d)?.to_density();
    let rho_q = ch.apply(&phi)?.with_dims(dims.as_vec())?;
    let rho_c = ch.apply(&gamma_b.apply(&phi)?)?.with_dims(dims.as_vec())?;

    let q_z = zurek_discord(&rho_q, dims, gamma_b)?;
    let f_q = sdc_capacity(&rho_q, dims)?;
    let f_c = sdc_capacity(&rho_c, dims)?;
    Ok(CapacityGap {
        q_z,
        f_q,
        f_c,
        residual: (q_z - (f_q - f_c)).abs(),
    })
}

/// Minimum eigenvalue of the partial transpose over B; negative iff entangled
/// (conclusive for two qubits).
pub fn ppt_min_eigenvalue<T: Scalar>(rho: &DensityMatrix<T>, dims: BipartiteDims) -> Result<T> {
    if dims.d_a != 2 || dims.d_b != 2 {
        return Err(Error::Unsupported(format!(
            "PPT is conclusive for 2x2 only; got {}x{}",
            dims.d_a, dims.d_b
        )));
    }
    dims.check_state(rho)?;
    let pt = rho.matrix().partial_transpose(&dims.as_vec(), &[1])?;
    let eig = hermitian_eigen(&pt)?;
    Ok(*eig.eigenvalues.last().expect("non-empty spectrum"))
}

/// One row of the dense-coding sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow<T> {
    pub mu: T,
    pub f_q: T,
    pub f_c: T,
    /// f_q - f_c; equals q_z on this family.
    pub discord_gap: T,
    pub q_z: T,
    pub ppt_min_eigenvalue: T,
}

/// Per-mu capacities, discord and PPT eigenvalue for the depolarized
/// maximally entangled pair and its dephased counterpart (d = 2).
pub fn dense_coding_sweep<T: Scalar>(mu_grid: &[T]) -> Result<Vec<SweepRow<T>>> {
    let dims = BipartiteDims::new(2, 2)?;
    let gamma_b = Einselection::one_sided(&[2, 2], 1)?;
    let phi = max_entangled::<T>(2)?.to_density();
    let phi_c = gamma_b.apply(&phi)?;

    let mut rows = Vec::with_capacity(mu_grid.len());
    for &mu in mu_grid {
        if mu < T::zero() || mu > T::one() {
            return Err(Error::InvalidParameter(format!(
                "sweep parameter {} outside [0, 1]",
                mu
            )));
        }
        let lambda = depolarizing::<T>(&[2, 2], mu)?;
        let rho_q = lambda.apply(&phi)?;
        let rho_c = lambda.apply(&phi_c)?;
        let f_q = sdc_capacity(&rho_q, dims)?;
        let f_c = sdc_capacity(&rho_c, dims)?;
        rows.push(SweepRow {
            mu,
            f_q,
            f_c,
            discord_gap: f_q - f_c,
            q_z: zurek_discord(&rho_q, dims, &gamma_b)?,
            ppt_min_eigenvalue: ppt_min_eigenvalue(&rho_q, dims)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{discord_map, identity_channel, dephasing};
    use crate::states::{classical_state, random_density};

    fn bell() -> DensityMatrix<f64> {
        max_entangled::<f64>(2).unwrap().to_density()
    }

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    #[test]
    fn sdc_capacity_examples() {
        assert!((sdc_capacity(&bell(), dims22()).unwrap() - 2.0).abs() < 1e-10);

        let gb = Einselection::one_sided(&[2, 2], 1).unwrap();
        let dephased = gb.apply(&bell()).unwrap();
        assert!((sdc_capacity(&dephased, dims22()).unwrap() - 1.0).abs() < 1e-10);

        let mixed = classical_state::<f64>(&[0.25; 4], &[2, 2]).unwrap();
        assert!(sdc_capacity(&mixed, dims22()).unwrap().abs() < 1e-10);
    }

    #[test]
    fn operational_capacity_floors_at_log_da() {
        assert_eq!(operational_capacity(0.25, 2), 1.0);
        assert_eq!(operational_capacity(1.75, 2), 1.75);
    }

    #[test]
    fn capacity_gap_for_identity_channel() {
        let gb = Einselection::one_sided(&[2, 2], 1).unwrap();
        let gap = discord_capacity_gap(&identity_channel::<f64>(&[2, 2]), 2, &gb).unwrap();
        assert!((gap.q_z - 1.0).abs() < 1e-10);
        assert!((gap.f_q - 2.0).abs() < 1e-10);
        assert!((gap.f_c - 1.0).abs() < 1e-10);
        assert!(gap.residual < 1e-10);
    }

    #[test]
    fn capacity_gap_for_dephasing_itself() {
        let gb = Einselection::<f64>::one_sided(&[2, 2], 1).unwrap();
        let gap = discord_capacity_gap(&dephasing(&gb), 2, &gb).unwrap();
        assert!(gap.q_z.abs() < 1e-10);
        assert!((gap.f_q - gap.f_c).abs() < 1e-10);
        assert!(gap.residual < 1e-10);
    }

    #[test]
    fn capacity_gap_for_depolarizing_family() {
        let gb = Einselection::one_sided(&[2, 2], 1).unwrap();
        for &mu in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let lambda = depolarizing::<f64>(&[2, 2], mu).unwrap();
            let gap = discord_capacity_gap(&lambda, 2, &gb).unwrap();
            assert!(gap.residual < 1e-9, "mu={mu}: residual {}", gap.residual);
        }
    }

    #[test]
    fn capacity_gap_rejects_noncommuting_channel() {
        let gb = Einselection::one_sided(&[2, 2], 1).unwrap();
        assert!(matches!(
            discord_capacity_gap(&discord_map::<f64>(), 2, &gb),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn ppt_examples() {
        // Bell projector: partial transpose is SWAP/2 with eigenvalue -1/2
        assert!((ppt_min_eigenvalue(&bell(), dims22()).unwrap() + 0.5).abs() < 1e-10);

        // isotropic family: min eigenvalue (1 - 3 mu)/4
        for &mu in &[0.0, 0.2, 1.0 / 3.0, 0.6, 1.0] {
            let rho = depolarizing::<f64>(&[2, 2], mu)
                .unwrap()
                .apply(&bell())
                .unwrap();
            let got = ppt_min_eigenvalue(&rho, dims22()).unwrap();
            assert!((got - (1.0 - 3.0 * mu) / 4.0).abs() < 1e-10, "mu={mu}");
        }

        // product states stay PPT
        for seed in 0..5 {
            let a = random_density::<f64>(&[2], 2, seed).unwrap();
            let b = random_density::<f64>(&[2], 2, seed + 50).unwrap();
            assert!(ppt_min_eigenvalue(&a.tensor(&b), dims22()).unwrap() > -1e-12);
        }

        let big = random_density::<f64>(&[2, 3], 2, 0).unwrap();
        assert!(ppt_min_eigenvalue(&big, BipartiteDims::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn dense_coding_sweep_endpoints_and_identity() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let rows = dense_coding_sweep(&grid).unwrap();

        let last = rows.last().unwrap();
        assert!((last.f_q - 2.0).abs() < 1e-9);
        assert!((last.f_c - 1.0).abs() < 1e-9);
        assert!((last.discord_gap - 1.0).abs() < 1e-9);

        let first = &rows[0];
        assert!(first.f_q.abs() < 1e-9);
        assert!(first.f_c.abs() < 1e-9);

        for row in &rows {
            assert!((row.discord_gap - row.q_z).abs() < 1e-9, "mu={}", row.mu);
            assert!(row.f_q >= row.f_c - 1e-9, "mu={}", row.mu);
            assert!((row.discord_gap - (row.f_q - row.f_c)).abs() < 1e-10);
        }
    }

    #[test]
    fn sweep_rejects_out_of_range() {
        assert!(dense_coding_sweep(&[0.5, 1.2]).is_err());
    }
}
