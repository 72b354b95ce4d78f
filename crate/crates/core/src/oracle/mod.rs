//! Independent cross-checks for the main pipeline.
//!
//! * [`ring_correlators`]: the correlator integrals as finite momentum sums,
//!   written from the untransformed integrands.
//! * [`ed_quench`]: exact diagonalization of a small periodic ring.
//! * [`qwd_grid_oracle`]: exhaustive basis grid for the work-deficit.

mod ed;
mod grid;
mod ring;

pub use ed::{ed_quench, Boundary, EdQuench, EdResult, EdSpec};
pub use grid::qwd_grid_oracle;
pub use ring::{ring_correlators, RingSpec};
