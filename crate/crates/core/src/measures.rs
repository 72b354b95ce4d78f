//! Entanglement and work-deficit of two-qubit states.
//!
//! Entropies are in bits. The work-deficit is minimized over projective
//! measurements on one qubit, parametrized by the Bloch angles of
//! [`MeasurementBasis`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{self, SimplexOptions};
use crate::state::{
    hermitian_eigenvalues2, hermitian_function4, kron, pauli_y, validate_state, TwoQubitState, HERMITIAN_SLACK,
    PSD_SLACK, TRACE_SLACK,
};
use crate::C64;

/// Eigenvalues below this are treated as exactly zero in entropies.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// Orthonormal qubit basis `|i1> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`,
/// `|i2> = −e^{−iφ} sin(θ/2)|0> + cos(θ/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub const COMPUTATIONAL: Self = Self {
        theta: 0.0,
        phi: 0.0,
    };

    /// Folds arbitrary angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)` without
    /// changing the projectors.
    pub fn new(theta: f64, phi: f64) -> Self {
        let two_pi = 2.0 * PI;
        let mut theta = theta.rem_euclid(two_pi);
        let mut phi = phi;
        if theta > PI {
            theta = two_pi - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(two_pi);
        if phi >= two_pi {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [
            [C64::new(c, 0.0), e * s],
            [-e.conj() * s, C64::new(c, 0.0)],
        ]
    }

    pub fn projectors(&self) -> [Matrix2<C64>; 2] {
        self.vectors()
            .map(|v| Matrix2::from_fn(|r, c| v[r] * v[c].conj()))
    }
}

/// Which qubit is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Party {
    First,
    Second,
}

/// How the post-measurement entropy entering the local yield is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeficitVariant {
    /// Sum of the two single-site entropies of the dephased state.
    #[default]
    LocalSum,
    /// Entropy of the dephased two-qubit state (one-way deficit).
    GlobalDephased,
}

impl DeficitVariant {
    pub const ALL: [DeficitVariant; 2] = [DeficitVariant::LocalSum, DeficitVariant::GlobalDephased];

    pub fn as_str(&self) -> &'static str {
        match self {
            DeficitVariant::LocalSum => "local-sum",
            DeficitVariant::GlobalDephased => "global-dephased",
        }
    }
}

impl fmt::Display for DeficitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DeficitVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local-sum" => Ok(DeficitVariant::LocalSum),
            "global-dephased" => Ok(DeficitVariant::GlobalDephased),
            other => Err(Error::InvalidParameter(format!(
                "unknown deficit variant '{other}' (expected local-sum or global-dephased)"
            ))),
        }
    }
}

/// Two-stage basis search: the grid `θ = πi/grid_theta`,
/// `φ = 2πj/grid_phi`, then simplex refinement from its best cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSpec {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            x_tol: 1e-6,
            f_tol: 1e-10,
            max_iter: 1000,
        }
    }
}

impl OptimizerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid_theta < 1 || self.grid_phi < 1 {
            return Err(Error::InvalidParameter(format!(
                "optimizer grid must be at least 1x1, got {}x{}",
                self.grid_theta, self.grid_phi
            )));
        }
        if !(self.x_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "optimizer tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of [`work_deficit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkDeficit {
    /// Deficit in qubits.
    pub value: f64,
    pub basis: MeasurementBasis,
    pub party: Party,
    /// Best objective seen on the coarse grid (before subtracting `S(ρ)`).
    pub grid_objective: f64,
    /// Final objective (never above `grid_objective`).
    pub objective: f64,
    pub refined: bool,
}

fn ensure_valid(rho: &TwoQubitState) -> Result<()> {
    let r = validate_state(rho);
    if r.passed() {
        Ok(())
    } else {
        Err(Error::InvalidState(format!(
            "failed {:?} (min eigenvalue {:.3e}, trace deviation {:.3e})",
            r.failures(),
            r.min_eigenvalue,
            r.trace_deviation
        )))
    }
}

/// Shannon entropy (bits) of a spectrum, with tiny eigenvalues dropped.
pub fn entropy_of_spectrum(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > EIGEN_FLOOR)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits of a density matrix of dimension at most 4.
pub fn von_neumann_entropy(rho: &DMatrix<C64>) -> Result<f64> {
    let n = rho.nrows();
    if n == 0 || n > 4 || rho.ncols() != n {
        return Err(Error::InvalidState(format!(
            "expected a square matrix of dimension 1..=4, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
    if herm > HERMITIAN_SLACK || trace_dev > TRACE_SLACK {
        return Err(Error::InvalidState(format!(
            "not a density matrix (hermiticity dev {herm:.2e}, trace dev {trace_dev:.2e})"
        )));
    }
    let eigs = rho.clone().symmetric_eigenvalues();
    if eigs.iter().any(|&l| l < -PSD_SLACK) {
        return Err(Error::InvalidState("negative eigenvalue".into()));
    }
    Ok(entropy_of_spectrum(eigs.as_slice()))
}

pub(crate) fn entropy4(m: &Matrix4<C64>) -> f64 {
    entropy_of_spectrum(&crate::state::hermitian_eigenvalues4(m))
}

fn entropy2(m: &Matrix2<C64>) -> f64 {
    entropy_of_spectrum(&hermitian_eigenvalues2(m))
}

/// Negativity via an eigensolve of the explicit partial transpose.
pub fn negativity_eigen(rho: &TwoQubitState) -> f64 {
    let pt = rho.partial_transpose_first();
    crate::state::hermitian_eigenvalues4(&pt)
        .iter()
        .map(|&l| (-l).max(0.0))
        .sum()
}

/// Closed-form negativity for X-form states: the partial transpose splits
/// into the `{00, 11}` and `{01, 10}` blocks with the corners exchanged.
pub fn negativity_x_form(rho: &TwoQubitState) -> f64 {
    let d = |i: usize| rho.entry(i, i).re;
    let block = |a: f64, b: f64, off: f64| {
        let lo = 0.5 * (a + b) - (0.25 * (a - b) * (a - b) + off * off).sqrt();
        (-lo).max(0.0)
    };
    block(d(0), d(3), rho.entry(1, 2).norm()) + block(d(1), d(2), rho.entry(0, 3).norm())
}

/// Sum of the absolute values of the negative eigenvalues of `ρ^{T1}`.
pub fn negativity(rho: &TwoQubitState) -> Result<f64> {
    ensure_valid(rho)?;
    if rho.is_x_form(0.0) {
        Ok(negativity_x_form(rho))
    } else {
        Ok(negativity_eigen(rho))
    }
}

/// `log2(2N + 1)` in ebits.
pub fn log_negativity(rho: &TwoQubitState) -> Result<f64> {
    Ok((2.0 * negativity(rho)? + 1.0).log2())
}

/// Wootters concurrence; closed form for X-form states.
pub fn concurrence(rho: &TwoQubitState) -> Result<f64> {
    ensure_valid(rho)?;
    if rho.is_x_form(0.0) {
        Ok(concurrence_x_form(rho))
    } else {
        Ok(concurrence_wootters(rho))
    }
}

/// Wootters concurrence from the spectrum of `√ρ ρ̃ √ρ`.
pub fn concurrence_wootters(rho: &TwoQubitState) -> f64 {
    let m = rho.matrix();
    let sqrt_rho = hermitian_function4(m, |l| l.max(0.0).sqrt());
    let yy = kron(&pauli_y(), &pauli_y());
    let flipped = yy * m.conjugate() * yy;
    let prod = sqrt_rho * flipped * sqrt_rho;
    let mut roots: Vec<f64> = crate::state::hermitian_eigenvalues4(&prod)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

/// Closed-form concurrence of an X-form state.
pub fn concurrence_x_form(rho: &TwoQubitState) -> f64 {
    let d = |i: usize| rho.entry(i, i).re.max(0.0);
    let a = rho.entry(1, 2).norm() - (d(0) * d(3)).sqrt();
    let b = rho.entry(0, 3).norm() - (d(1) * d(2)).sqrt();
    2.0 * a.max(b).max(0.0)
}

fn local_projector(p: &Matrix2<C64>, party: Party) -> Matrix4<C64> {
    match party {
        Party::First => kron(p, &Matrix2::identity()),
        Party::Second => kron(&Matrix2::identity(), p),
    }
}

/// Pinches `rho` in `basis` on one party: `Σ_k P_k ρ P_k`.
pub fn dephase(rho: &TwoQubitState, basis: &MeasurementBasis, party: Party) -> TwoQubitState {
    let m = rho.matrix();
    let out = basis
        .projectors()
        .iter()
        .map(|p| {
            let big = local_projector(p, party);
            big * m * big
        })
        .fold(Matrix4::zeros(), |acc, x| acc + x);
    TwoQubitState::from_matrix_unchecked(out)
}

/// Conditional (unnormalized) states of the unmeasured qubit,
/// `A_k = <i_k| ρ |i_k>` taken on the measured qubit.
fn conditional_blocks(m: &Matrix4<C64>, basis: &MeasurementBasis, party: Party) -> [Matrix2<C64>; 2] {
    basis.vectors().map(|v| {
        Matrix2::from_fn(|x, y| {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..2 {
                for c in 0..2 {
                    let (r, col) = match party {
                        Party::Second => (2 * x + b, 2 * y + c),
                        Party::First => (2 * b + x, 2 * c + y),
                    };
                    acc += v[b].conj() * m[(r, col)] * v[c];
                }
            }
            acc
        })
    })
}

/// Objective without input validation; the inner loop of the optimizer.
pub(crate) fn clocc_objective_unchecked(
    m: &Matrix4<C64>,
    basis: &MeasurementBasis,
    party: Party,
    variant: DeficitVariant,
) -> f64 {
    let [a1, a2] = conditional_blocks(m, basis, party);
    match variant {
        // The dephased state is block diagonal with blocks A_1, A_2.
        DeficitVariant::GlobalDephased => {
            let mut eigs = [0.0; 4];
            eigs[..2].copy_from_slice(&hermitian_eigenvalues2(&a1));
            eigs[2..].copy_from_slice(&hermitian_eigenvalues2(&a2));
            entropy_of_spectrum(&eigs)
        }
        // Unmeasured marginal is A_1 + A_2; measured marginal is diag(tr A_1, tr A_2).
        DeficitVariant::LocalSum => {
            entropy2(&(a1 + a2)) + entropy_of_spectrum(&[a1.trace().re, a2.trace().re])
        }
    }
}

/// Post-measurement entropy (bits) entering the local yield.
pub fn clocc_objective(
    rho: &TwoQubitState,
    basis: &MeasurementBasis,
    party: Party,
    variant: DeficitVariant,
) -> Result<f64> {
    ensure_valid(rho)?;
    Ok(clocc_objective_unchecked(rho.matrix(), basis, party, variant))
}

/// `S(ρ)` in bits.
pub fn state_entropy(rho: &TwoQubitState) -> f64 {
    entropy4(rho.matrix())
}

/// Parties whose measurement must be searched: one suffices for
/// swap-symmetric states.
pub fn parties_to_search(rho: &TwoQubitState) -> &'static [Party] {
    if rho.swapped().max_abs_diff(rho) <= 1e-13 {
        &[Party::Second]
    } else {
        &[Party::Second, Party::First]
    }
}

pub(crate) fn finish_deficit(objective: f64, entropy: f64, variant: DeficitVariant) -> Result<f64> {
    let raw = objective - entropy;
    match variant {
        DeficitVariant::LocalSum => Ok(raw),
        DeficitVariant::GlobalDephased if raw >= -1e-9 => Ok(raw.max(0.0)),
        DeficitVariant::GlobalDephased => Err(Error::OptimizerFailure(format!(
            "dephasing lowered the entropy by {:.3e}",
            -raw
        ))),
    }
}

/// Work-deficit `Δ = min_basis objective − S(ρ)` with its minimizing basis.
pub fn work_deficit(
    rho: &TwoQubitState,
    variant: DeficitVariant,
    opt: &OptimizerSpec,
) -> Result<WorkDeficit> {
    ensure_valid(rho)?;
    opt.validate()?;
    let m = rho.matrix();
    let entropy = state_entropy(rho);

    let d_theta = PI / opt.grid_theta as f64;
    let d_phi = 2.0 * PI / opt.grid_phi as f64;

    let mut best: Option<(f64, Party, f64, f64)> = None;
    for &party in parties_to_search(rho) {
        for i in 0..opt.grid_theta {
            let theta = i as f64 * d_theta;
            for j in 0..opt.grid_phi {
                let phi = j as f64 * d_phi;
                let v = clocc_objective_unchecked(m, &MeasurementBasis { theta, phi }, party, variant);
                if best.is_none_or(|b| v < b.0) {
                    best = Some((v, party, theta, phi));
                }
            }
        }
    }
    let (grid_objective, party, theta0, phi0) =
        best.ok_or_else(|| Error::OptimizerFailure("empty search grid".into()))?;

    let refined = simplex::minimize(
        |x: &[f64; 2]| {
            clocc_objective_unchecked(m, &MeasurementBasis { theta: x[0], phi: x[1] }, party, variant)
        },
        [theta0, phi0],
        [d_theta, d_phi],
        &SimplexOptions {
            x_tol: opt.x_tol,
            f_tol: opt.f_tol,
            max_iter: opt.max_iter,
        },
    );

    let use_refined = refined.value.is_finite() && refined.value < grid_objective;
    let (objective, basis) = if use_refined {
        (refined.value, MeasurementBasis::new(refined.x[0], refined.x[1]))
    } else {
        (grid_objective, MeasurementBasis::new(theta0, phi0))
    };
    Ok(WorkDeficit {
        value: finish_deficit(objective, entropy, variant)?,
        basis,
        party,
        grid_objective,
        objective,
        refined: use_refined,
    })
}
