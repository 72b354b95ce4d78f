//! Quench dynamics of the infinite anisotropic XY spin chain.
//!
//! The transverse field is switched from `a` to zero at `t = 0`. From the
//! dispersion integrals of the free-fermion solution this crate builds the
//! nearest-neighbour two-qubit state at any later time, and measures its
//! entanglement (negativity, logarithmic negativity, concurrence) and its
//! quantum work-deficit. The [`scan`] module sweeps the initial field,
//! detects entanglement death and revival, and tests the rule that the area
//! under the work-deficit curve predicts revival.
//!
//! Module map:
//!
//! * [`kernels`]: dispersion relation and the correlator integrals.
//! * [`state`]: assembly and validation of the two-site density matrix.
//! * [`measures`]: entropies, entanglement measures, work-deficit.
//! * [`scan`]: field sweeps, revival detection, area/threshold analysis.
//! * [`oracle`]: independent cross-checks (momentum sums, exact
//!   diagonalization, exhaustive basis grid).
//! * [`exec`]: parallel or sequential evaluation of independent grid points.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod kernels;
pub mod measures;
pub mod oracle;
pub mod quadrature;
pub mod scan;
pub mod simplex;
pub mod state;

pub use error::{Error, Result};
pub use exec::Exec;
pub use kernels::{correlators, CorrelatorSet, ModelParams, QuadratureSpec};
pub use measures::{DeficitVariant, MeasurementBasis, OptimizerSpec};
pub use state::TwoQubitState;

/// Crate version, recorded in run manifests and cache keys.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Complex scalar used for density matrices.
pub type C64 = num_complex::Complex64;
