//! The nonclassicality measure W of a quantum operation: the relative entropy
//! between the two orderings of the operation and the dephasing map, maximized
//! over pure inputs, together with its split into distinguishing and
//! generating power, the unitary shortcut, and regularized ratios of infinite
//! values.

use crate::channels::{classify_unitary, depolarizing, unitary_channel, Einselection, QuantumChannel, UnitaryClass};
use crate::entropy::{relative_entropy, ExtendedNonNegative};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::optimizer::{
    maximize, params_to_pure_state, pure_state_candidates, Objective, OptimResult, OptimizerConfig,
};
use crate::scalar::{fl, Scalar};
use crate::states::{DensityMatrix, PureState};
use num_complex::Complex;

/// S(Omega(Gamma(rho)) || Gamma(Omega(rho))): the quantity whose supremum over
/// states is W. Argument order matters; the dephased branch is the second one.
pub fn integrand<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    rho: &DensityMatrix<T>,
) -> Result<ExtendedNonNegative<T>> {
    check_dims(ch, gamma, rho)?;
    let omega_gamma = ch.apply(&gamma.apply(rho)?)?;
    let gamma_omega = gamma.apply(&ch.apply(rho)?)?;
    relative_entropy(&omega_gamma, &gamma_omega)
}

/// The two contributions at a state:
/// distinguishing = S(Gamma Omega Gamma rho || Gamma Omega rho),
/// generating     = S(Omega Gamma rho || Gamma Omega Gamma rho).
/// Their sum equals [`integrand`] pointwise.
pub fn decomposition_terms<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    rho: &DensityMatrix<T>,
) -> Result<(ExtendedNonNegative<T>, ExtendedNonNegative<T>)> {
    check_dims(ch, gamma, rho)?;
    let omega_gamma = ch.apply(&gamma.apply(rho)?)?;
    let gamma_omega = gamma.apply(&ch.apply(rho)?)?;
    let classicalized = gamma.apply(&omega_gamma)?;
    let distinguishing = relative_entropy(&classicalized, &gamma_omega)?;
    let generating = relative_entropy(&omega_gamma, &classicalized)?;
    Ok((distinguishing, generating))
}

fn check_dims<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    rho: &DensityMatrix<T>,
) -> Result<()> {
    if ch.dims() != gamma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "channel over {:?} with einselection over {:?}",
            ch.dims(),
            gamma.dims()
        )));
    }
    if rho.dim() != ch.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for a channel of dimension {}",
            rho.dim(),
            ch.dim()
        )));
    }
    Ok(())
}

/// One maximized quantity: its best value, the input state achieving it, and
/// per-start diagnostics.
#[derive(Debug, Clone)]
pub struct PowerEstimate<T> {
    pub value: ExtendedNonNegative<T>,
    pub witness: PureState<T>,
    /// Best value of each optimizer start, in start order.
    pub per_start: Vec<T>,
    pub converged: bool,
    pub evaluations: usize,
}

/// Full report: W plus the separately maximized distinguishing and generating
/// powers. All values are certified lower bounds of the suprema.
#[derive(Debug, Clone)]
pub struct QuantumnessReport<T> {
    pub w: PowerEstimate<T>,
    pub distinguishing: PowerEstimate<T>,
    pub generating: PowerEstimate<T>,
    /// True when the unitary dichotomy settled the value without optimization.
    pub unitary_shortcut: bool,
}

/// Maximize the integrand (and each decomposition term separately) over pure
/// states. Runs the unitary shortcut first when the channel is a unitary under
/// full einselection; any infinite evaluation short-circuits with a witness.
pub fn quantumness<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    config: &OptimizerConfig<T>,
) -> Result<QuantumnessReport<T>> {
    let probe = PureState::basis(gamma.dims(), 0).to_density();
    check_dims(ch, gamma, &probe)?;

    if gamma.is_full() {
        if let Some(u) = ch.as_unitary() {
            match unitary_quantumness(u, gamma)? {
                UnitaryQuantumness::Classical => {
                    let zero = |witness: PureState<T>| PowerEstimate {
                        value: ExtendedNonNegative::Finite(T::zero()),
                        witness,
                        per_start: Vec::new(),
                        converged: true,
                        evaluations: 0,
                    };
                    let basis0 = PureState::basis(gamma.dims(), 0);
                    return Ok(QuantumnessReport {
                        w: zero(basis0.clone()),
                        distinguishing: zero(basis0.clone()),
                        generating: zero(basis0),
                        unitary_shortcut: true,
                    });
                }
                UnitaryQuantumness::Nonclassical { witness } => {
                    let rho = witness.to_density();
                    let w_value = integrand(ch, gamma, &rho)?;
                    let (dist_value, _) = decomposition_terms(ch, gamma, &rho)?;
                    let generating = maximize_term(ch, gamma, config, Term::Generating)?;
                    return Ok(QuantumnessReport {
                        w: PowerEstimate {
                            value: w_value,
                            witness: witness.clone(),
                            per_start: Vec::new(),
                            converged: true,
                            evaluations: 1,
                        },
                        distinguishing: PowerEstimate {
                            value: dist_value,
                            witness,
                            per_start: Vec::new(),
                            converged: true,
                            evaluations: 1,
                        },
                        generating,
                        unitary_shortcut: true,
                    });
                }
            }
        }
    }

    let mut w = maximize_term(ch, gamma, config, Term::Whole)?;
    let distinguishing = maximize_term(ch, gamma, config, Term::Distinguishing)?;
    let generating = maximize_term(ch, gamma, config, Term::Generating)?;

    // W dominates each term pointwise, so each term's witness is also a
    // candidate input for W; fold them in to keep the report consistent.
    for candidate in [&distinguishing.witness, &generating.witness] {
        let at = integrand(ch, gamma, &candidate.to_density())?;
        let improves = match (&w.value, &at) {
            (ExtendedNonNegative::Finite(_), ExtendedNonNegative::Infinite(_)) => true,
            (ExtendedNonNegative::Finite(cur), ExtendedNonNegative::Finite(new)) => new > cur,
            (ExtendedNonNegative::Infinite(_), _) => false,
        };
        if improves {
            w.value = at;
            w.witness = candidate.clone();
        }
    }

    Ok(QuantumnessReport {
        w,
        distinguishing,
        generating,
        unitary_shortcut: false,
    })
}

#[derive(Clone, Copy)]
enum Term {
    Whole,
    Distinguishing,
    Generating,
}

fn term_value<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    rho: &DensityMatrix<T>,
    term: Term,
) -> Result<ExtendedNonNegative<T>> {
    let omega_gamma = ch.apply(&gamma.apply(rho)?)?;
    match term {
        Term::Whole => relative_entropy(&omega_gamma, &gamma.apply(&ch.apply(rho)?)?),
        Term::Distinguishing => relative_entropy(
            &gamma.apply(&omega_gamma)?,
            &gamma.apply(&ch.apply(rho)?)?,
        ),
        Term::Generating => relative_entropy(&omega_gamma, &gamma.apply(&omega_gamma)?),
    }
}

/// Maximum generating power: the supremum of the second decomposition term,
/// equal to W(Omega o Gamma).
pub fn max_generating_power<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    config: &OptimizerConfig<T>,
) -> Result<PowerEstimate<T>> {
    let probe = PureState::basis(gamma.dims(), 0).to_density();
    check_dims(ch, gamma, &probe)?;
    maximize_term(ch, gamma, config, Term::Generating)
}

/// Maximum distinguishing power: the supremum of the first decomposition term,
/// equal to W(Gamma o Omega).
pub fn max_distinguishing_power<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    config: &OptimizerConfig<T>,
) -> Result<PowerEstimate<T>> {
    let probe = PureState::basis(gamma.dims(), 0).to_density();
    check_dims(ch, gamma, &probe)?;
    maximize_term(ch, gamma, config, Term::Distinguishing)
}

fn maximize_term<T: Scalar>(
    ch: &QuantumChannel<T>,
    gamma: &Einselection<T>,
    config: &OptimizerConfig<T>,
    term: Term,
) -> Result<PowerEstimate<T>> {
    let dims = gamma.dims().to_vec();
    let d = gamma.dim();
    let eval = |psi: &PureState<T>| -> ExtendedNonNegative<T> {
        term_value(ch, gamma, &psi.to_density(), term).expect("dimensions validated")
    };

    let mut cfg = config.clone();
    let mut candidates = pure_state_candidates::<T>(d);
    candidates.extend(config.seeded_candidates.iter().cloned());
    cfg.seeded_candidates = candidates;

    let objective = |x: &[T]| -> Objective<T> {
        let psi = params_to_pure_state(x, &dims).expect("parameter length fixed by search");
        match eval(&psi) {
            ExtendedNonNegative::Finite(v) => Objective::Finite(v),
            ExtendedNonNegative::Infinite(_) => Objective::Infinite,
        }
    };

    let result: OptimResult<T> = maximize(objective, 2 * d, &cfg)?;
    let witness = params_to_pure_state(&result.best_parameters, &dims)?;
    let value = match result.best_value {
        // re-evaluate to recover the kernel witness detail
        Objective::Infinite => eval(&witness),
        Objective::Finite(v) => ExtendedNonNegative::Finite(v),
    };
    Ok(PowerEstimate {
        value,
        witness,
        per_start: result.per_start,
        converged: result.converged,
        evaluations: result.evaluations,
    })
}

/// Outcome of the unitary dichotomy with a witness for the infinite case.
#[derive(Debug, Clone)]
pub enum UnitaryQuantumness<T> {
    /// Phase-decorated permutation of the einselected basis: W = 0.
    Classical,
    /// W is infinite; the integrand diverges at the witness state.
    Nonclassical { witness: PureState<T> },
}

/// Dichotomy shortcut for unitary operations under full einselection: W is 0
/// for phase-decorated permutations of the einselected basis and infinite
/// otherwise, with a witness built as the preimage of a classical basis state.
pub fn unitary_quantumness<T: Scalar>(
    u: &ComplexMatrix<T>,
    gamma: &Einselection<T>,
) -> Result<UnitaryQuantumness<T>> {
    match classify_unitary(u, gamma)? {
        UnitaryClass::Classical => Ok(UnitaryQuantumness::Classical),
        UnitaryClass::Nonclassical => {
            let b = gamma.basis_matrix();
            let in_basis = b.adjoint().matmul(u).matmul(&b);
            let n = in_basis.rows();
            // the most spread row has the largest kernel overlap
            let mut best_row = 0usize;
            let mut best_max = T::infinity();
            for i in 0..n {
                let row_max = (0..n)
                    .map(|j| in_basis.get(i, j).norm())
                    .fold(T::zero(), |a, v| if v > a { v } else { a });
                if row_max < best_max {
                    best_max = row_max;
                    best_row = i;
                }
            }
            // conj of row j: U' applied to it lands exactly on |j>
            let in_einselected: Vec<Complex<T>> =
                (0..n).map(|k| in_basis.get(best_row, k).conj()).collect();
            let amplitudes = b.matvec(&in_einselected);
            let witness = PureState::new(amplitudes, gamma.dims().to_vec())?;
            Ok(UnitaryQuantumness::Nonclassical { witness })
        }
    }
}

/// One row of a regularized-ratio table.
#[derive(Debug, Clone, Copy)]
pub struct RatioRow<T> {
    pub mu: T,
    pub w1: T,
    pub w2: T,
    pub ratio: T,
}

/// Ratio of two infinite quantumness values through the depolarizing
/// regulator, with an extrapolated mu -> 1 estimate.
#[derive(Debug, Clone)]
pub struct RegularizedRatio<T> {
    pub rows: Vec<RatioRow<T>>,
    /// Aitken-accelerated limit estimate (last ratio when too few points).
    pub estimate: T,
    /// False when the ratio differences are not contracting along the schedule.
    pub converged: bool,
}

/// Default regulator schedule.
pub fn default_mu_schedule<T: Scalar>() -> Vec<T> {
    vec![fl(0.9), fl(0.99), fl(0.999)]
}

/// Compare two nonclassical unitaries via W(Lambda_mu o U1) / W(Lambda_mu o U2)
/// along a schedule of mu values approaching 1.
pub fn regularized_ratio<T: Scalar>(
    u1: &ComplexMatrix<T>,
    u2: &ComplexMatrix<T>,
    gamma: &Einselection<T>,
    schedule: &[T],
    config: &OptimizerConfig<T>,
) -> Result<RegularizedRatio<T>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty regulator schedule".into()));
    }
    for &mu in schedule {
        if mu < T::zero() || mu >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "regulator schedule must stay inside [0, 1); got {}",
                mu
            )));
        }
    }
    for (label, u) in [("first", u1), ("second", u2)] {
        if let UnitaryClass::Classical = classify_unitary(u, gamma)? {
            return Err(Error::InvalidParameter(format!(
                "{label} unitary is classical (W = 0); the regularized ratio is degenerate"
            )));
        }
    }

    let dims = gamma.dims().to_vec();
    let mut rows = Vec::with_capacity(schedule.len());
    for &mu in schedule {
        let w_of = |u: &ComplexMatrix<T>| -> Result<T> {
            let ch = depolarizing(&dims, mu)?.compose(&unitary_channel(u.clone(), &dims)?)?;
            let estimate = maximize_term(&ch, gamma, config, Term::Whole)?;
            estimate.value.finite().ok_or_else(|| {
                Error::Unsupported(format!("W(Lambda_{mu} o U) diverged unexpectedly"))
            })
        };
        let w1 = w_of(u1)?;
        let w2 = w_of(u2)?;
        rows.push(RatioRow {
            mu,
            w1,
            w2,
            ratio: w1 / w2,
        });
    }

    let (estimate, converged) = extrapolate(&rows);
    Ok(RegularizedRatio {
        rows,
        estimate,
        converged,
    })
}

fn extrapolate<T: Scalar>(rows: &[RatioRow<T>]) -> (T, bool) {
    let n = rows.len();
    let last = rows[n - 1].ratio;
    if n < 3 {
        return (last, n >= 2 && (rows[n - 1].ratio - rows[n - 2].ratio).abs() < fl(1e-3));
    }
    let (r1, r2, r3) = (rows[n - 3].ratio, rows[n - 2].ratio, last);
    let (d1, d2) = (r2 - r1, r3 - r2);
    let converged = d2.abs() <= d1.abs() + fl(1e-9);
    let denom = d2 - d1;
    if denom.abs() < fl::<T>(1e-12) * (T::one() + r3.abs()) {
        (r3, converged)
    } else {
        (r3 - d2 * d2 / denom, converged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        amplitude_damping, bit_flip, classical_channel, dephasing, discord_map, gates,
        hadamard_channel, identity_channel, mixture_channel, random_channel,
    };
    use crate::entropy::q_g;
    use crate::states::{classical_state, random_density, random_pure};

    fn quick_config() -> OptimizerConfig<f64> {
        OptimizerConfig {
            starts: 6,
            max_iterations: 400,
            ..OptimizerConfig::with_seed(7)
        }
    }

    #[test]
    fn integrand_examples() {
        let gamma = Einselection::full(&[2, 2]);
        let ch = discord_map::<f64>();

        // |psi> x |1> reaches the supremum W = 1
        let one = PureState::<f64>::basis(&[2], 1);
        for seed in [0u64, 1, 2] {
            let psi = random_pure::<f64>(&[2], seed);
            let rho = psi.tensor(&one).to_density();
            let v = integrand(&ch, &gamma, &rho).unwrap().expect_finite("discord map");
            assert!((v - 1.0).abs() < 1e-9, "seed {seed}: {v}");
        }

        // classical channels have zero integrand everywhere
        let gamma1 = Einselection::full(&[2]);
        let theta = bit_flip::<f64>(0.3).unwrap();
        for seed in 0..10 {
            let rho = random_pure::<f64>(&[2], seed).to_density();
            let v = integrand(&theta, &gamma1, &rho).unwrap().expect_finite("classical");
            assert!(v < 1e-10);
        }

        // Hadamard at |+> diverges
        let h = hadamard_channel::<f64>();
        let plus = PureState::<f64>::qubit_plus_minus(true).to_density();
        assert!(integrand(&h, &gamma1, &plus).unwrap().is_infinite());
    }

    #[test]
    fn decomposition_examples() {
        let gamma = Einselection::full(&[2, 2]);
        let ch = discord_map::<f64>();

        // classical input: distinguishing vanishes
        let rho_c = classical_state(&[0.5, 0.0, 0.0, 0.5], &[2, 2]).unwrap();
        let (dist, _) = decomposition_terms(&ch, &gamma, &rho_c).unwrap();
        assert!(dist.expect_finite("classical input") < 1e-10);

        // |11>: (distinguishing, generating) = (0, 1)
        let one_one = PureState::<f64>::basis(&[2, 2], 3).to_density();
        let (dist, gen) = decomposition_terms(&ch, &gamma, &one_one).unwrap();
        assert!(dist.expect_finite("discord map") < 1e-10);
        assert!((gen.expect_finite("discord map") - 1.0).abs() < 1e-9);
    }

    #[test]
    fn decomposition_sums_to_integrand_on_random_pairs() {
        for seed in 0..25u64 {
            let dims: &[usize] = if seed % 2 == 0 { &[2] } else { &[2, 2] };
            let ch = random_channel::<f64>(dims, 2 + (seed % 3) as usize, seed).unwrap();
            let gamma = Einselection::full(dims);
            let rho = random_density::<f64>(dims, dims.iter().product(), seed + 40).unwrap();
            let whole = integrand(&ch, &gamma, &rho).unwrap().expect_finite("random");
            let (dist, gen) = decomposition_terms(&ch, &gamma, &rho).unwrap();
            let sum = dist.expect_finite("t") + gen.expect_finite("t");
            assert!((whole - sum).abs() < 1e-9, "seed {seed}: {whole} vs {sum}");
        }
    }

    #[test]
    fn quantumness_of_amplitude_damping_vanishes() {
        let gamma = Einselection::full(&[2]);
        let ch = amplitude_damping::<f64>(0.3).unwrap();
        let report = quantumness(&ch, &gamma, &quick_config()).unwrap();
        assert!(report.w.value.expect_finite("classical channel") < 1e-8);
        assert!(!report.unitary_shortcut);
    }

    #[test]
    fn quantumness_of_discord_map_is_one() {
        let gamma = Einselection::full(&[2, 2]);
        let report = quantumness(&discord_map::<f64>(), &gamma, &quick_config()).unwrap();
        let w = report.w.value.expect_finite("discord map");
        assert!((w - 1.0).abs() < 1e-6, "W = {w}");
        // composed purely of generating power
        let gen = report.generating.value.expect_finite("generating");
        assert!((gen - 1.0).abs() < 1e-6);
        let dist = report.distinguishing.value.expect_finite("distinguishing");
        assert!(dist < 1e-8);
    }

    #[test]
    fn sandwich_matches_direct_computation() {
        // H o Xi_gamma o H at gamma = 0.75: direct oracle from the |0> input
        let gamma_full = Einselection::full(&[2]);
        let h = hadamard_channel::<f64>();
        let ch = h
            .compose(&amplitude_damping(0.75).unwrap())
            .unwrap()
            .compose(&h)
            .unwrap();
        let zero = PureState::<f64>::basis(&[2], 0).to_density();
        let out = ch.apply(&zero).unwrap();
        let oracle = q_g(&out, &gamma_full).unwrap().expect_finite("oracle");
        let report = quantumness(&ch, &gamma_full, &quick_config()).unwrap();
        let w = report.w.value.expect_finite("sandwich");
        assert!((w - oracle).abs() < 1e-8, "W = {w}, oracle = {oracle}");
        assert!((w - 0.528).abs() < 1e-3);
    }

    #[test]
    fn quantumness_report_invariants() {
        let gamma = Einselection::full(&[2, 2]);
        let ch = discord_map::<f64>();
        let report = quantumness(&ch, &gamma, &quick_config()).unwrap();

        // w >= each term evaluated at its own witness
        for est in [&report.distinguishing, &report.generating] {
            let at = integrand(&ch, &gamma, &est.witness.to_density()).unwrap();
            assert!(
                report.w.value.to_float() >= at.to_float() - 1e-8,
                "W does not dominate a term witness"
            );
        }

        // w >= q_g of the channel output at seeded classical inputs
        for k in 0..4 {
            let rho_c = PureState::<f64>::basis(&[2, 2], k).to_density();
            let bound = q_g(&ch.apply(&rho_c).unwrap(), &gamma)
                .unwrap()
                .expect_finite("qg");
            assert!(report.w.value.to_float() >= bound - 1e-8);
        }
    }

    #[test]
    fn unitary_shortcut_classical_and_nonclassical() {
        let gamma = Einselection::full(&[2]);
        let x = crate::channels::unitary_channel(gates::pauli_x::<f64>(), &[2]).unwrap();
        let report = quantumness(&x, &gamma, &quick_config()).unwrap();
        assert!(report.unitary_shortcut);
        assert_eq!(report.w.value.expect_finite("Pauli X"), 0.0);

        let h = hadamard_channel::<f64>();
        let report = quantumness(&h, &gamma, &quick_config()).unwrap();
        assert!(report.unitary_shortcut);
        assert!(report.w.value.is_infinite());
        assert!(report.distinguishing.value.is_infinite());
        // generating power of H maxes out at 1 = log2(2)
        let gen = report.generating.value.expect_finite("generating");
        assert!((gen - 1.0).abs() < 1e-6, "generating = {gen}");
    }

    #[test]
    fn unitary_witness_examples() {
        let gamma = Einselection::full(&[2]);
        match unitary_quantumness(&gates::hadamard::<f64>(), &gamma).unwrap() {
            UnitaryQuantumness::Nonclassical { witness } => {
                // witness is |+> or |->
                let a = witness.amplitudes();
                assert!((a[0].norm() - a[1].norm()).abs() < 1e-12);
                let rho = witness.to_density();
                assert!(integrand(&hadamard_channel(), &gamma, &rho)
                    .unwrap()
                    .is_infinite());
            }
            UnitaryQuantumness::Classical => panic!("H must be nonclassical"),
        }

        for u in [gates::pauli_x::<f64>(), gates::pauli_z(), gates::phase(0.77)] {
            assert!(matches!(
                unitary_quantumness(&u, &gamma).unwrap(),
                UnitaryQuantumness::Classical
            ));
        }
        let gamma4 = Einselection::full(&[2, 2]);
        assert!(matches!(
            unitary_quantumness(&gates::cnot::<f64>(), &gamma4).unwrap(),
            UnitaryQuantumness::Classical
        ));
        assert!(matches!(
            unitary_quantumness(&gates::rotated_cnot::<f64>(), &gamma4).unwrap(),
            UnitaryQuantumness::Nonclassical { .. }
        ));
    }

    #[test]
    fn infinite_short_circuit_for_nonunitary_channels() {
        // Gamma o H is not unitary but still has infinite distinguishing power
        let gamma = Einselection::full(&[2]);
        let ch = dephasing(&gamma).compose(&hadamard_channel()).unwrap();
        let report = quantumness(&ch, &gamma, &quick_config()).unwrap();
        assert!(!report.unitary_shortcut);
        assert!(report.w.value.is_infinite());
    }

    #[test]
    fn pointwise_extremality_p1() {
        let gamma = Einselection::full(&[2, 2]);
        let ch = discord_map::<f64>();
        for seed in 0..10u64 {
            let rho = random_density::<f64>(&[2, 2], 3, seed).unwrap();
            let mixed = integrand(&ch, &gamma, &rho).unwrap().to_float();
            let eig = crate::eigen::hermitian_eigen(rho.matrix()).unwrap();
            let mut best = f64::NEG_INFINITY;
            for (j, &l) in eig.eigenvalues.iter().enumerate() {
                if l < 1e-12 {
                    continue;
                }
                let psi = PureState::new(eig.eigenvector(j), vec![2, 2]).unwrap();
                best = best.max(integrand(&ch, &gamma, &psi.to_density()).unwrap().to_float());
            }
            assert!(mixed <= best + 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn pointwise_monotonicity_p2() {
        let gamma = Einselection::full(&[2]);
        let ch = amplitude_damping::<f64>(0.4).unwrap();
        let sandwich = hadamard_channel::<f64>()
            .compose(&ch)
            .unwrap()
            .compose(&hadamard_channel())
            .unwrap();
        let theta = classical_channel::<f64>(&[0.8, 0.25, 0.2, 0.75], &[2]).unwrap();
        for seed in 0..10u64 {
            let rho = random_pure::<f64>(&[2], seed).to_density();
            let plain = integrand(&sandwich, &gamma, &rho).unwrap().to_float();
            let after = integrand(&theta.compose(&sandwich).unwrap(), &gamma, &rho)
                .unwrap()
                .to_float();
            assert!(after <= plain + 1e-9, "post-composition grew at seed {seed}");

            // pre-composition evaluates the integrand at the mapped state
            let pre = integrand(&sandwich.compose(&theta).unwrap(), &gamma, &rho)
                .unwrap()
                .to_float();
            let mapped = integrand(&sandwich, &gamma, &theta.apply(&rho).unwrap())
                .unwrap()
                .to_float();
            assert!((pre - mapped).abs() < 1e-9);
        }
    }

    #[test]
    fn classical_mixtures_have_zero_integrand_p3() {
        let gamma = Einselection::full(&[2, 2]);
        let t1 = classical_channel::<f64>(&[0.9, 0.4, 0.1, 0.6], &[2]).unwrap();
        let t2 = classical_channel::<f64>(&[0.3, 0.5, 0.7, 0.5], &[2]).unwrap();
        let gb = dephasing(&Einselection::full(&[2]));
        let mixed = mixture_channel(&[
            (0.6, t1.tensor(&t2)),
            (0.4, gb.compose(&t2).unwrap().tensor(&t1)),
        ])
        .unwrap();
        for seed in 0..10u64 {
            let rho = random_density::<f64>(&[2, 2], 4, seed).unwrap();
            let v = integrand(&mixed, &gamma, &rho).unwrap().expect_finite("mixture");
            assert!(v < 1e-9, "seed {seed}: {v}");
        }
    }

    #[test]
    fn generating_power_bounded_by_log_dim() {
        for seed in 0..10u64 {
            let ch = random_channel::<f64>(&[2, 2], 2, seed).unwrap();
            let gamma = Einselection::full(&[2, 2]);
            let rho = random_pure::<f64>(&[2, 2], seed).to_density();
            let (_, gen) = decomposition_terms(&ch, &gamma, &rho).unwrap();
            assert!(gen.to_float() <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn integrand_at_classical_input_equals_q_g_of_output() {
        for seed in 0..10u64 {
            let ch = random_channel::<f64>(&[2, 2], 3, seed).unwrap();
            let gamma = Einselection::full(&[2, 2]);
            let p = [0.4, 0.3, 0.2, 0.1];
            let rho_c = classical_state(&p, &[2, 2]).unwrap();
            let lhs = integrand(&ch, &gamma, &rho_c).unwrap().to_float();
            let rhs = q_g(&ch.apply(&rho_c).unwrap(), &gamma).unwrap().to_float();
            assert!((lhs - rhs).abs() < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn regularized_ratio_self_is_one() {
        let gamma = Einselection::full(&[2]);
        let h = gates::hadamard::<f64>();
        let cfg = quick_config();
        let r = regularized_ratio(&h, &h, &gamma, &[0.9, 0.95], &cfg).unwrap();
        for row in &r.rows {
            assert!((row.ratio - 1.0).abs() < 1e-9);
        }
        assert!((r.estimate - 1.0).abs() < 1e-6);
    }

    #[test]
    fn regularized_ratio_local_hadamard_vs_rotated_cnot() {
        // both regularized sequences stay finite and positive; the table is
        // numerical (no closed form exists)
        let gamma = Einselection::full(&[2, 2]);
        let h1 = gates::hadamard::<f64>().tensor(&ComplexMatrix::identity(2));
        let rc = gates::rotated_cnot::<f64>();
        let cfg = OptimizerConfig {
            starts: 2,
            max_iterations: 500,
            ..OptimizerConfig::with_seed(3)
        };
        let r = regularized_ratio(&h1, &rc, &gamma, &[0.9, 0.99], &cfg).unwrap();
        let mut last_w1 = 0.0;
        for row in &r.rows {
            assert!(row.w1 > 0.0 && row.w1.is_finite());
            assert!(row.w2 > 0.0 && row.w2.is_finite());
            assert!(row.ratio > 0.0);
            // distinguishing power grows toward the unitary limit
            assert!(row.w1 > last_w1);
            last_w1 = row.w1;
        }
        assert!(r.estimate.is_finite());
    }

    #[test]
    fn classical_unitaries_have_vanishing_integrand() {
        // permutation-with-phases unitaries: integrand is zero at seeded states
        let gamma2 = Einselection::full(&[2]);
        let gamma4 = Einselection::full(&[2, 2]);
        let mut xz = gates::pauli_x::<f64>().matmul(&gates::phase(0.3));
        xz = xz.matmul(&gates::pauli_z());
        let cases: Vec<(ComplexMatrix<f64>, &Einselection<f64>)> = vec![
            (gates::pauli_x(), &gamma2),
            (gates::pauli_z(), &gamma2),
            (gates::s_gate(), &gamma2),
            (xz, &gamma2),
            (gates::cnot(), &gamma4),
            (gates::swap(), &gamma4),
        ];
        for (u, gamma) in cases {
            assert!(matches!(
                crate::channels::classify_unitary(&u, gamma).unwrap(),
                crate::channels::UnitaryClass::Classical
            ));
            let dims = gamma.dims().to_vec();
            let ch = crate::channels::unitary_channel(u, &dims).unwrap();
            for seed in 0..50u64 {
                let rho = random_pure::<f64>(&dims, 7000 + seed).to_density();
                let v = integrand(&ch, gamma, &rho).unwrap().expect_finite("classical");
                assert!(v < 1e-10, "seed {seed}: {v}");
            }
        }
    }

    #[test]
    fn regularized_ratio_rejects_bad_inputs() {
        let gamma = Einselection::full(&[2]);
        let h = gates::hadamard::<f64>();
        let cfg = quick_config();
        // mu = 1 is not a regulator
        assert!(regularized_ratio(&h, &h, &gamma, &[0.9, 1.0], &cfg).is_err());
        // classical unitaries make the ratio degenerate
        let x = gates::pauli_x::<f64>();
        assert!(regularized_ratio(&x, &h, &gamma, &[0.9], &cfg).is_err());
    }

    #[test]
    fn identity_channel_everything_zero() {
        let gamma = Einselection::full(&[2]);
        let report = quantumness(&identity_channel::<f64>(&[2]), &gamma, &quick_config()).unwrap();
        assert_eq!(report.w.value.expect_finite("identity"), 0.0);
        assert!(report.unitary_shortcut);
    }
}
