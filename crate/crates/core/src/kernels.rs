//! Dispersion relation and the nearest-neighbour correlator integrals of the
//! quenched XY chain.
//!
//! All quantities are dimensionless: the field is `a_tilde = a/J` and time is
//! `t_tilde = J t / hbar`. After the quench the chain evolves under the
//! zero-field Hamiltonian, so every time dependence enters through the
//! zero-field dispersion `Λ(0)`.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
pub use crate::quadrature::QuadratureSpec;
use crate::state::lzz_from_wick;

/// Below this value of `Λ(a)` the integrands are replaced by their limit.
const GAP_FLOOR: f64 = 1e-12;

/// Physical configuration of the quench: anisotropy and initial field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    gamma: f64,
    a_tilde: f64,
}

#[derive(Deserialize)]
struct RawParams {
    gamma: f64,
    a_tilde: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.gamma, raw.a_tilde)
    }
}

impl ModelParams {
    pub fn new(gamma: f64, a_tilde: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "anisotropy gamma must be finite and nonzero (gamma != 0), got {gamma}"
            )));
        }
        if !a_tilde.is_finite() || a_tilde < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "initial field a_tilde must be finite and >= 0, got {a_tilde}"
            )));
        }
        Ok(Self { gamma, a_tilde })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a_tilde(&self) -> f64 {
        self.a_tilde
    }

    pub fn with_field(&self, a_tilde: f64) -> Result<Self> {
        Self::new(self.gamma, a_tilde)
    }
}

/// Nearest-neighbour Pauli correlators and magnetization at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelatorSet {
    /// `<σx σx>`, the `i' = -1` correlator.
    pub g_minus: f64,
    /// `<σy σy>`, the `i' = +1` correlator.
    pub g_plus: f64,
    /// `<σx σy> = <σy σx>`.
    pub s: f64,
    /// `<σz>` on either site.
    pub mz: f64,
    /// `<σz σz>`.
    pub l_zz: f64,
}

impl CorrelatorSet {
    pub fn as_array(&self) -> [f64; 5] {
        [self.g_minus, self.g_plus, self.s, self.mz, self.l_zz]
    }

    /// Largest absolute difference over the five entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn within_bounds(&self, slack: f64) -> bool {
        self.as_array().iter().all(|v| v.abs() <= 1.0 + slack)
    }
}

/// `Λ(x) = sqrt(γ² sin²φ + (x − cos φ)²)`.
pub fn dispersion(x: f64, phi: f64, gamma: f64) -> f64 {
    let s = phi.sin();
    (gamma * gamma * s * s + (x - phi.cos()).powi(2)).sqrt()
}

fn check_time(t_tilde: f64) -> Result<()> {
    if !t_tilde.is_finite() || t_tilde < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time t_tilde must be finite and >= 0, got {t_tilde}"
        )));
    }
    Ok(())
}

/// Integrands (already divided by π) for `[g(-1), g(+1), s, Mz]` at angle `phi`.
///
/// Written in a cancellation-free form: `a − cos φ` is evaluated as
/// `(a − 1) + 2 sin²(φ/2)` and every `1 − cos(2Λ(0)t)` as `2 sin²(Λ(0)t)`.
#[inline]
pub fn integrands(phi: f64, t_tilde: f64, params: &ModelParams) -> [f64; 4] {
    let gamma = params.gamma;
    let a = params.a_tilde;
    let (s, c) = phi.sin_cos();
    let s2 = s * s;
    let g2s2 = gamma * gamma * s2;

    let half = (0.5 * phi).sin();
    let detune = (a - 1.0) + 2.0 * half * half; // a - cos φ
    let lam_a = (g2s2 + detune * detune).sqrt();
    if lam_a < GAP_FLOOR {
        // Only reachable at a = 1, φ → 0, where every numerator is O(φ²).
        return [0.0; 4];
    }
    let lam0_sq = g2s2 + c * c;
    let lam0 = lam0_sq.sqrt();
    let (sin_w, cos_w) = (lam0 * t_tilde).sin_cos();
    let q = sin_w * sin_w;
    let sin_2w = 2.0 * sin_w * cos_w;

    let denom = FRAC_1_PI / (lam_a * lam0_sq);
    // Shared numerator of Mz and of the cos φ term of g.
    let mz_num = lam0_sq * detune - 2.0 * a * g2s2 * q;
    let odd_num = gamma * s2 * (lam0_sq - 2.0 * a * c * q);

    let mz = mz_num * denom;
    let g_minus = (-odd_num + c * mz_num) * denom;
    let g_plus = (odd_num + c * mz_num) * denom;
    let s_xy = -gamma * a * s2 * sin_2w * FRAC_1_PI / (lam_a * lam0);
    [g_minus, g_plus, s_xy, mz]
}

fn integrate_component(
    idx: usize,
    t_tilde: f64,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_time(t_tilde)?;
    let r = integrate(|phi| [integrands(phi, t_tilde, params)[idx]], 0.0, PI, quad)?;
    Ok(r.value[0])
}

/// `g(i', t)`: `<σx σx>` for `i' = -1`, `<σy σy>` for `i' = +1`.
pub fn g_corr(
    i_prime: i32,
    t_tilde: f64,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let idx = match i_prime {
        -1 => 0,
        1 => 1,
        other => {
            return Err(Error::InvalidParameter(format!(
                "i_prime must be -1 or +1, got {other}"
            )))
        }
    };
    integrate_component(idx, t_tilde, params, quad)
}

/// `s(t) = <σx σy>`.
pub fn s_corr(t_tilde: f64, params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    integrate_component(2, t_tilde, params, quad)
}

/// Transverse magnetization `Mz(t) = <σz>`.
pub fn magnetization_z(t_tilde: f64, params: &ModelParams, quad: &QuadratureSpec) -> Result<f64> {
    integrate_component(3, t_tilde, params, quad)
}

/// All correlators at time `t_tilde`, refined jointly.
pub fn correlators(
    t_tilde: f64,
    params: &ModelParams,
    quad: &QuadratureSpec,
) -> Result<CorrelatorSet> {
    check_time(t_tilde)?;
    let r = integrate(|phi| integrands(phi, t_tilde, params), 0.0, PI, quad)?;
    let [g_minus, g_plus, s, mz] = r.value;
    Ok(CorrelatorSet {
        g_minus,
        g_plus,
        s,
        mz,
        l_zz: lzz_from_wick(g_plus, g_minus, s, mz),
    })
}
