//! The nearest-neighbour two-qubit density matrix.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with `|0>` the `σz = +1` state and
//! the first tensor factor belonging to site 1.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::CorrelatorSet;
use crate::C64;

pub const TRACE_SLACK: f64 = 1e-12;
pub const HERMITIAN_SLACK: f64 = 1e-12;
pub const PSD_SLACK: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn pauli_x() -> Matrix2<C64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Matrix2<C64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Matrix2<C64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues4(m: &Matrix4<C64>) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let ev = h.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(f64::total_cmp);
    out
}

/// Applies `f` to the spectrum of a Hermitian matrix.
///
/// Works on the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose
/// matrix functions keep the same block shape. nalgebra's complex
/// eigenvectors are not reliable enough to use directly.
pub fn hermitian_function4(m: &Matrix4<C64>, f: impl Fn(f64) -> f64) -> Matrix4<C64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let emb = SMatrix::<f64, 8, 8>::from_fn(|r, c| {
        let z = h[(r % 4, c % 4)];
        match (r < 4, c < 4) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = emb.symmetric_eigen();
    let fd = SMatrix::<f64, 8, 8>::from_diagonal(&eig.eigenvalues.map(f));
    let out = eig.eigenvectors * fd * eig.eigenvectors.transpose();
    Matrix4::from_fn(|r, c| C64::new(out[(r, c)], out[(r + 4, c)]))
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues2(m: &Matrix2<C64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - r, mean + r]
}

/// A two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    matrix: Matrix4<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    pub trace_ok: bool,
    pub hermitian_ok: bool,
    pub psd_ok: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.trace_ok && self.hermitian_ok && self.psd_ok
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.trace_ok {
            out.push("trace");
        }
        if !self.hermitian_ok {
            out.push("hermiticity");
        }
        if !self.psd_ok {
            out.push("positivity");
        }
        out
    }
}

impl TwoQubitState {
    /// Wraps a matrix without any checks.
    pub fn from_matrix_unchecked(matrix: Matrix4<C64>) -> Self {
        Self { matrix }
    }

    /// Wraps a matrix, rejecting it unless it passes [`validate_state`].
    pub fn from_matrix(matrix: Matrix4<C64>) -> Result<Self> {
        let state = Self { matrix };
        let report = validate_state(&state);
        if !report.passed() {
            return Err(Error::InvalidState(format!(
                "failed {:?} (trace dev {:.2e}, hermiticity dev {:.2e}, min eigenvalue {:.2e})",
                report.failures(),
                report.trace_deviation,
                report.hermiticity_deviation,
                report.min_eigenvalue
            )));
        }
        Ok(state)
    }

    /// Projector onto a normalized pure state.
    pub fn pure(amplitudes: [C64; 4]) -> Self {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Self {
            matrix: Matrix4::from_fn(|r, c| v[r] * v[c].conj()),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Matrix4::identity() * C64::new(0.25, 0.0),
        }
    }

    /// `(|00> + |11>)/√2`.
    pub fn bell_phi_plus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::pure([h, ZERO, ZERO, h])
    }

    /// `½(|00><00| + |11><11|)`.
    pub fn classically_correlated() -> Self {
        Self::diagonal([0.5, 0.0, 0.0, 0.5])
    }

    pub fn diagonal(p: [f64; 4]) -> Self {
        Self {
            matrix: Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| C64::new(p[i], 0.0))),
        }
    }

    /// `ρ1 ⊗ ρ2`.
    pub fn product(first: &Matrix2<C64>, second: &Matrix2<C64>) -> Self {
        Self {
            matrix: kron(first, second),
        }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.matrix)
    }

    /// State of site 1.
    pub fn reduced_first(&self) -> Matrix2<C64> {
        let m = &self.matrix;
        Matrix2::from_fn(|r, c| m[(2 * r, 2 * c)] + m[(2 * r + 1, 2 * c + 1)])
    }

    /// State of site 2.
    pub fn reduced_second(&self) -> Matrix2<C64> {
        let m = &self.matrix;
        Matrix2::from_fn(|r, c| m[(r, c)] + m[(2 + r, 2 + c)])
    }

    /// Exchanges the two sites.
    pub fn swapped(&self) -> Self {
        let sw = |i: usize| (i % 2) * 2 + i / 2;
        Self {
            matrix: Matrix4::from_fn(|r, c| self.matrix[(sw(r), sw(c))]),
        }
    }

    /// Partial transpose on site 1.
    pub fn partial_transpose_first(&self) -> Matrix4<C64> {
        Matrix4::from_fn(|r, c| {
            let (a, b) = (r / 2, r % 2);
            let (ap, bp) = (c / 2, c % 2);
            self.matrix[(2 * ap + b, 2 * a + bp)]
        })
    }

    /// Whether only the diagonal and anti-diagonal are populated.
    pub fn is_x_form(&self, tol: f64) -> bool {
        (0..4).all(|r| {
            (0..4).all(|c| r == c || r + c == 3 || self.matrix[(r, c)].norm() <= tol)
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.matrix - other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `<σz σz>` from the free-fermion (Wick) contraction of the other correlators.
pub fn lzz_from_wick(g_plus: f64, g_minus: f64, s: f64, mz: f64) -> f64 {
    mz * mz - g_plus * g_minus + s * s
}

/// Builds the state `¼[I + Mz(σz⊗I + I⊗σz) + s(σx⊗σy + σy⊗σx) + Σ l_jj σj⊗σj]`.
pub fn assemble_state(c: &CorrelatorSet) -> Result<TwoQubitState> {
    let m = assemble_unchecked(c);
    let report = validate_state(&m);
    if !report.passed() {
        return Err(Error::NonPhysicalState(format!(
            "assembled state fails {:?}: min eigenvalue {:.3e}, trace deviation {:.3e} (correlators {:?})",
            report.failures(),
            report.min_eigenvalue,
            report.trace_deviation,
            c
        )));
    }
    Ok(m)
}

/// [`assemble_state`] without the physicality check.
pub fn assemble_unchecked(c: &CorrelatorSet) -> TwoQubitState {
    let r = |x: f64| C64::new(x, 0.0);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = r((1.0 + 2.0 * c.mz + c.l_zz) / 4.0);
    m[(1, 1)] = r((1.0 - c.l_zz) / 4.0);
    m[(2, 2)] = r((1.0 - c.l_zz) / 4.0);
    m[(3, 3)] = r((1.0 - 2.0 * c.mz + c.l_zz) / 4.0);
    m[(1, 2)] = r((c.g_minus + c.g_plus) / 4.0);
    m[(2, 1)] = m[(1, 2)];
    m[(0, 3)] = C64::new((c.g_minus - c.g_plus) / 4.0, -c.s / 2.0);
    m[(3, 0)] = m[(0, 3)].conj();
    TwoQubitState::from_matrix_unchecked(m)
}

pub fn validate_state(rho: &TwoQubitState) -> ValidationReport {
    let m = rho.matrix();
    let trace_deviation = (m.trace() - ONE).norm();
    let hermiticity_deviation = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min_eigenvalue = rho.eigenvalues()[0];
    ValidationReport {
        trace_deviation,
        hermiticity_deviation,
        min_eigenvalue,
        trace_ok: trace_deviation <= TRACE_SLACK,
        hermitian_ok: hermiticity_deviation <= HERMITIAN_SLACK,
        psd_ok: min_eigenvalue >= -PSD_SLACK,
    }
}
