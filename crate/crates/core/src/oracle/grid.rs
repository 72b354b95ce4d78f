use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measures::{
    clocc_objective_unchecked, finish_deficit, parties_to_search, state_entropy, DeficitVariant,
    MeasurementBasis,
};
use crate::state::{validate_state, TwoQubitState};

/// Exhaustive minimum of the work-deficit objective over the uniform grid
/// `θ = πi/n_theta`, `φ = 2πj/n_phi`. No refinement.
///
/// `θ = π` is left out: it gives the same two projectors as `θ = 0`.
pub fn qwd_grid_oracle(
    rho: &TwoQubitState,
    variant: DeficitVariant,
    n_theta: usize,
    n_phi: usize,
) -> Result<(f64, MeasurementBasis)> {
    if n_theta < 1 || n_phi < 1 {
        return Err(Error::InvalidParameter(format!(
            "grid must be at least 1x1, got {n_theta}x{n_phi}"
        )));
    }
    let report = validate_state(rho);
    if !report.passed() {
        return Err(Error::InvalidState(format!("failed {:?}", report.failures())));
    }
    let m = rho.matrix();
    let mut best = (f64::INFINITY, MeasurementBasis::COMPUTATIONAL);
    for &party in parties_to_search(rho) {
        for i in 0..n_theta {
            let theta = PI * i as f64 / n_theta as f64;
            for j in 0..n_phi {
                let basis = MeasurementBasis {
                    theta,
                    phi: 2.0 * PI * j as f64 / n_phi as f64,
                };
                let v = clocc_objective_unchecked(m, &basis, party, variant);
                if v < best.0 {
                    best = (v, basis);
                }
            }
        }
    }
    Ok((finish_deficit(best.0, state_entropy(rho), variant)?, best.1))
}
