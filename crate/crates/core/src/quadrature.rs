//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)`. The integrator is
//! vector-valued so several integrands sharing expensive subexpressions can
//! be refined together; every component must meet its own tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_814_284_810,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for `XGK[1], XGK[3], .., XGK[9]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub abs_error: [f64; N],
    pub subdivisions: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
    /// Largest error relative to its component's tolerance share.
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
fn gk21<const N: usize, F>(f: &F, lo: f64, hi: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let abs_half = half.abs();

    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];

    let fc = f(center);
    let mut res_g = [0.0; N];
    let mut res_k = [0.0; N];
    let mut res_abs = [0.0; N];
    for c in 0..N {
        res_k[c] = WGK[10] * fc[c];
        res_abs[c] = res_k[c].abs();
    }

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let sum = f1[c] + f2[c];
            res_k[c] += WGK[j] * sum;
            res_abs[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                res_g[c] += WG[j / 2] * sum;
            }
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        let mean = 0.5 * res_k[c];
        let mut res_asc = WGK[10] * (fc[c] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        let res_asc = res_asc * abs_half;
        let res_abs = res_abs[c] * abs_half;
        value[c] = res_k[c] * half;

        // QUADPACK error scaling.
        let mut err = ((res_k[c] - res_g[c]) * half).abs();
        if res_asc != 0.0 && err != 0.0 {
            err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
        }
        let floor = 50.0 * f64::EPSILON * res_abs;
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(floor);
        }
        error[c] = err;
    }
    (value, error)
}

/// Integrates a vector-valued `f` over `[lo, hi]`.
pub fn integrate<const N: usize, F>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [f64; N],
{
    spec.validate()?;
    let mut heap = BinaryHeap::with_capacity(spec.max_subdivisions + 1);
    let (v0, e0) = gk21(&f, lo, hi);
    let mut total = v0;
    let mut total_err = e0;
    let mut evaluations = 21;
    let mut subdivisions = 0;

    let priority = |err: &[f64; N], total: &[f64; N]| -> f64 {
        (0..N)
            .map(|c| err[c] / spec.target(total[c]))
            .fold(0.0, f64::max)
    };
    heap.push(Panel {
        lo,
        hi,
        value: v0,
        error: e0,
        priority: priority(&e0, &v0),
    });

    let converged =
        |t: &[f64; N], e: &[f64; N]| (0..N).all(|c| e[c] <= spec.target(t[c]));

    while !converged(&total, &total_err) {
        if subdivisions >= spec.max_subdivisions {
            let worst = (0..N)
                .max_by(|&a, &b| {
                    (total_err[a] / spec.target(total[a]))
                        .total_cmp(&(total_err[b] / spec.target(total[b])))
                })
                .unwrap_or(0);
            return Err(Error::QuadratureFailure {
                value: total[worst],
                error: total_err[worst],
                subdivisions,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        let (vl, el) = gk21(&f, worst.lo, mid);
        let (vr, er) = gk21(&f, mid, worst.hi);
        evaluations += 42;
        subdivisions += 1;
        for c in 0..N {
            total[c] += vl[c] + vr[c] - worst.value[c];
            total_err[c] += el[c] + er[c] - worst.error[c];
        }
        for (a, b, v, e) in [(worst.lo, mid, vl, el), (mid, worst.hi, vr, er)] {
            heap.push(Panel {
                lo: a,
                hi: b,
                value: v,
                error: e,
                priority: priority(&e, &total),
            });
        }
    }

    // Re-sum in panel order so the result does not carry running-sum drift.
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = [0.0; N];
    let mut abs_error = [0.0; N];
    for p in &panels {
        for c in 0..N {
            value[c] += p.value[c];
            abs_error[c] += p.error[c];
        }
    }
    Ok(QuadResult {
        value,
        abs_error,
        subdivisions,
        evaluations,
    })
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let r = integrate(|x| [f(x)], lo, hi, spec)?;
    Ok((r.value[0], r.abs_error[0]))
}
