//! Deterministic multistart Nelder-Mead maximization.
//!
//! Objectives are extended-real: an evaluation may come back infinite, in
//! which case the search short-circuits and reports the parameter vector as a
//! witness. Gradient-free by design; the objectives here have infinite
//! plateaus and kernel cliffs where finite differences are undefined.

use crate::error::{Error, Result};
use crate::scalar::{fl, tol_t, Scalar};
use crate::states::PureState;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Extended-real objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Objective<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Objective::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            Objective::Finite(v) => Some(*v),
            Objective::Infinite => None,
        }
    }
}

/// Multistart configuration. Deterministic: identical configs give identical
/// results.
#[derive(Debug, Clone)]
pub struct OptimizerConfig<T> {
    /// Number of random initial simplices.
    pub starts: usize,
    /// Nelder-Mead iteration cap per start.
    pub max_iterations: usize,
    /// Value-spread convergence threshold for a simplex.
    pub simplex_tolerance: T,
    /// Seed for the random start points.
    pub seed: u64,
    /// Extra start points evaluated before the random ones (e.g. classical
    /// basis states).
    pub seeded_candidates: Vec<Vec<T>>,
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iterations: 2000,
            simplex_tolerance: tol_t(1e-10),
            seed: 0,
            seeded_candidates: Vec::new(),
        }
    }
}

impl<T: Scalar> OptimizerConfig<T> {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::InvalidParameter("optimizer needs at least one start".into()));
        }
        if self.simplex_tolerance <= T::zero() {
            return Err(Error::InvalidParameter("simplex tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Result of a multistart maximization.
#[derive(Debug, Clone)]
pub struct OptimResult<T> {
    pub best_value: Objective<T>,
    pub best_parameters: Vec<T>,
    /// Best finite value reached by each start, in start order (candidates
    /// first, then random starts). Truncated if an infinite evaluation
    /// short-circuited the search.
    pub per_start: Vec<T>,
    /// Whether the winning start converged within its iteration budget.
    pub converged: bool,
    pub evaluations: usize,
}

enum RunOutcome<T> {
    Finite {
        value: T,
        parameters: Vec<T>,
        converged: bool,
    },
    Infinite {
        parameters: Vec<T>,
    },
}

/// Maximize `f` over R^dim from `starts` seeded simplices plus all seeded
/// candidates. The first infinite evaluation stops the search immediately and
/// is reported with its parameter vector as witness.
pub fn maximize<T: Scalar>(
    f: impl Fn(&[T]) -> Objective<T>,
    dim: usize,
    config: &OptimizerConfig<T>,
) -> Result<OptimResult<T>> {
    config.validate()?;
    if dim == 0 {
        return Err(Error::InvalidParameter("zero-dimensional search space".into()));
    }

    let mut evaluations = 0usize;
    let mut per_start: Vec<T> = Vec::new();
    let mut best: Option<(T, Vec<T>, bool)> = None;

    let start_points = config
        .seeded_candidates
        .iter()
        .cloned()
        .chain((0..config.starts).map(|s| random_point(dim, config.seed, s as u64)));

    for x0 in start_points {
        if x0.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "seeded candidate of length {} in a {}-dimensional search",
                x0.len(),
                dim
            )));
        }
        match nelder_mead(&f, x0, config, &mut evaluations) {
            RunOutcome::Infinite { parameters } => {
                return Ok(OptimResult {
                    best_value: Objective::Infinite,
                    best_parameters: parameters,
                    per_start,
                    converged: true,
                    evaluations,
                });
            }
            RunOutcome::Finite {
                value,
                parameters,
                converged,
            } => {
                per_start.push(value);
                let improved = match &best {
                    None => true,
                    Some((bv, _, _)) => value > *bv,
                };
                if improved {
                    best = Some((value, parameters, converged));
                }
            }
        }
    }

    let (value, parameters, converged) = best.expect("at least one start ran");
    Ok(OptimResult {
        best_value: Objective::Finite(value),
        best_parameters: parameters,
        per_start,
        converged,
        evaluations,
    })
}

/// Random start point in [-1, 1]^dim depending only on (seed, start index),
/// so prefixes are stable as `starts` grows.
fn random_point<T: Scalar>(dim: usize, seed: u64, start: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ start.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..dim)
        .map(|_| fl::<T>(rng.gen_range(-1.0..1.0)))
        .collect()
}

/// One Nelder-Mead descent on -f. Coefficients: reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5.
fn nelder_mead<T: Scalar>(
    f: &impl Fn(&[T]) -> Objective<T>,
    x0: Vec<T>,
    config: &OptimizerConfig<T>,
    evaluations: &mut usize,
) -> RunOutcome<T> {
    let n = x0.len();
    let half = fl::<T>(0.5);
    let two = fl::<T>(2.0);
    let step = half;

    // negated objective: minimize g = -f
    macro_rules! eval {
        ($x:expr) => {{
            *evaluations += 1;
            match f($x) {
                Objective::Infinite => {
                    return RunOutcome::Infinite {
                        parameters: $x.to_vec(),
                    }
                }
                Objective::Finite(v) => -v,
            }
        }};
    }

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    let g0 = eval!(&x0);
    simplex.push((x0.clone(), g0));
    for i in 0..n {
        let mut v = x0.clone();
        v[i] = v[i] + step;
        let g = eval!(&v);
        simplex.push((v, g));
    }

    let mut converged = false;
    for _ in 0..config.max_iterations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= config.simplex_tolerance {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![T::zero(); n];
        for (v, _) in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c = *c + *x;
            }
        }
        let inv = T::one() / fl(n as f64);
        for c in centroid.iter_mut() {
            *c = *c * inv;
        }

        let worst = simplex[n].clone();
        let reflected: Vec<T> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(&c, &w)| c + (c - w))
            .collect();
        let g_r = eval!(&reflected);

        if g_r < simplex[0].1 {
            // try expanding
            let expanded: Vec<T> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(&c, &w)| c + two * (c - w))
                .collect();
            let g_e = eval!(&expanded);
            simplex[n] = if g_e < g_r {
                (expanded, g_e)
            } else {
                (reflected, g_r)
            };
        } else if g_r < simplex[n - 1].1 {
            simplex[n] = (reflected, g_r);
        } else {
            let contracted: Vec<T> = if g_r < worst.1 {
                // outside contraction
                centroid
                    .iter()
                    .zip(&reflected)
                    .map(|(&c, &r)| c + half * (r - c))
                    .collect()
            } else {
                // inside contraction
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(&c, &w)| c + half * (w - c))
                    .collect()
            };
            let g_c = eval!(&contracted);
            if g_c < worst.1.min(g_r) {
                simplex[n] = (contracted, g_c);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<T> = best
                        .iter()
                        .zip(&entry.0)
                        .map(|(&b, &x)| b + half * (x - b))
                        .collect();
                    let g = eval!(&shrunk);
                    *entry = (shrunk, g);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    RunOutcome::Finite {
        value: -simplex[0].1,
        parameters: simplex[0].0.clone(),
        converged,
    }
}

/// Interpret a real vector of length 2d as d complex amplitudes and normalize
/// to a pure state. A (near-)zero vector falls back to the first basis state,
/// the deterministic re-seed.
pub fn params_to_pure_state<T: Scalar>(x: &[T], dims: &[usize]) -> Result<PureState<T>> {
    let d: usize = dims.iter().product();
    if x.len() != 2 * d {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters for a dimension-{} pure state",
            x.len(),
            d
        )));
    }
    let amplitudes: Vec<Complex<T>> = (0..d).map(|i| Complex::new(x[2 * i], x[2 * i + 1])).collect();
    let norm_sq = amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    if norm_sq.sqrt() <= tol_t(1e-12) {
        return Ok(PureState::basis(dims, 0));
    }
    PureState::normalized(amplitudes, dims.to_vec())
}

/// Parameter vector of a basis state under [`params_to_pure_state`].
pub fn basis_state_params<T: Scalar>(dim: usize, index: usize) -> Vec<T> {
    let mut x = vec![T::zero(); 2 * dim];
    x[2 * index] = T::one();
    x
}

/// Default seeded candidates for pure-state searches: all computational basis
/// states, |+-> patterns for a single qubit, and the +-1/2 amplitude patterns
/// for two qubits (where the relevant optima live).
pub fn pure_state_candidates<T: Scalar>(dim: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = (0..dim).map(|k| basis_state_params(dim, k)).collect();
    if dim == 2 {
        for sign in [1.0, -1.0] {
            let mut x = vec![T::zero(); 4];
            x[0] = T::one();
            x[2] = fl(sign);
            out.push(x);
        }
    }
    if dim == 4 {
        for pattern in 0..8u32 {
            let mut x = vec![T::zero(); 8];
            x[0] = T::one();
            for bit in 0..3 {
                let sign = if pattern >> bit & 1 == 1 { -1.0 } else { 1.0 };
                x[2 * (bit + 1)] = fl(sign);
            }
            out.push(x);
        }
    }
    out
}
