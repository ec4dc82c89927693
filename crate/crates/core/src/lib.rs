//! Nonclassicality of quantum operations.
//!
//! A quantum operation is classical when it commutes with the completely
//! dephasing (einselection) map. This crate measures how far an operation is
//! from that set: the relative entropy between the two orderings of the
//! operation and the dephasing, maximized over input states. The measure
//! splits exactly into a generating power (making nonclassical states from
//! classical ones) and a distinguishing power (letting a classical observer
//! tell a state from its dephased version). On top of that sit discord
//! quantities, the superdense-coding capacity identity and the optimization
//! machinery used to evaluate the suprema.
//!
//! The numerical core is generic over the real scalar type; the `*64` aliases
//! below are the double-precision instantiations used by the CLI and tests.

pub mod channels;
pub mod eigen;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod optimizer;
pub mod protocols;
pub mod quantumness;
pub mod scalar;
pub mod states;
pub mod tol;

pub use channels::{Einselection, QuantumChannel, UnitaryClass};
pub use eigen::EigenDecomposition;
pub use entropy::{DiscordReport, ExtendedNonNegative, KernelWitness};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use optimizer::{Objective, OptimResult, OptimizerConfig};
pub use protocols::{CapacityGap, SweepRow};
pub use quantumness::{PowerEstimate, QuantumnessReport, RegularizedRatio, UnitaryQuantumness};
pub use scalar::Scalar;
pub use states::{BipartiteDims, DensityMatrix, PureState};
pub use tol::Tolerances;

/// Complex number at working precision.
pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix64 = ComplexMatrix<f64>;
pub type Pure64 = PureState<f64>;
pub type Density64 = DensityMatrix<f64>;
pub type Channel64 = QuantumChannel<f64>;
pub type Einselection64 = Einselection<f64>;
pub type Report64 = QuantumnessReport<f64>;
pub type Config64 = OptimizerConfig<f64>;
