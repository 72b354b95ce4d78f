use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{dispersion, CorrelatorSet, ModelParams};
use crate::state::lzz_from_wick;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub n_modes: usize,
}

impl RingSpec {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 8 {
            return Err(Error::InvalidParameter(format!(
                "ring needs at least 8 modes, got {n_modes}"
            )));
        }
        Ok(Self { n_modes })
    }
}

impl Default for RingSpec {
    fn default() -> Self {
        Self { n_modes: 8192 }
    }
}

/// Correlators as midpoint sums over `φ_k = π(k − ½)/n`.
///
/// The integrands are the textbook ones, with `1 + cos` and `c − a`
/// left unexpanded, so this shares no algebra with [`crate::kernels`].
pub fn ring_correlators(t_tilde: f64, params: &ModelParams, ring: RingSpec) -> CorrelatorSet {
    let g = params.gamma();
    let a = params.a_tilde();
    let n = ring.n_modes.max(8);
    let mut acc = [0.0f64; 4];
    for k in 1..=n {
        let p = PI * (k as f64 - 0.5) / n as f64;
        let (s, c) = p.sin_cos();
        let la = dispersion(a, p, g);
        let l0 = dispersion(0.0, p, g);
        let cw = (2.0 * l0 * t_tilde).cos();
        let base = g * g * s * s + (c - a) * c;
        let w = 1.0 / (la * l0 * l0);
        let t2 = c * w * (base * c - a * g * g * s * s * cw);
        for (slot, ip) in [(0usize, -1.0f64), (1, 1.0)] {
            let t1 = g * (ip * p).sin() * s * w * (base + a * c * cw);
            acc[slot] += t1 - t2;
        }
        acc[2] += -g * a * s * s * (2.0 * t_tilde * l0).sin() / (la * l0);
        acc[3] += w * (cw * g * g * a * s * s - c * ((c - a) * c + g * g * s * s));
    }
    let [g_minus, g_plus, s, mz] = acc.map(|v| v / n as f64);
    CorrelatorSet {
        g_minus,
        g_plus,
        s,
        mz,
        l_zz: lzz_from_wick(g_plus, g_minus, s, mz),
    }
}
