//! Field sweeps, death/revival detection and the area threshold rule.
//!
//! A [`CorrelationCurve`] holds the measures along the initial field at one
//! time. [`detect_revival`] classifies it. The area under its work-deficit
//! curve, compared with the smallest area seen at a revival time, gives the
//! scale factor whose sign is the revival prediction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kernels::{correlators, CorrelatorSet, ModelParams};
use crate::measures::{concurrence, log_negativity, work_deficit, DeficitVariant, OptimizerSpec};
use crate::quadrature::QuadratureSpec;
use crate::state::assemble_state;

pub const DEFAULT_EPS_ENT: f64 = 1e-4;
pub const DEFAULT_MAX_SPACING: f64 = 0.02;
/// Upper end of the area integral.
pub const AREA_FIELD_MAX: f64 = 2.0;
pub const AREA_TOLERANCE: f64 = 1e-4;
/// Refinement stops here even if the doubling test has not passed.
pub const AREA_MAX_POINTS: usize = 6401;

/// Everything one pipeline evaluation needs besides the grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub variant: DeficitVariant,
    pub quad: QuadratureSpec,
    pub opt: OptimizerSpec,
}

/// Measures at one `(γ, t, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMeasures {
    pub correlators: CorrelatorSet,
    pub ln: f64,
    pub qwd: f64,
    pub concurrence: f64,
}

/// kernels → state → measures at a single grid point.
pub fn evaluate_point(t_tilde: f64, params: &ModelParams, cfg: &PipelineConfig) -> Result<PointMeasures> {
    let run = || -> Result<PointMeasures> {
        let c = correlators(t_tilde, params, &cfg.quad)?;
        let rho = assemble_state(&c)?;
        Ok(PointMeasures {
            correlators: c,
            ln: log_negativity(&rho)?,
            qwd: work_deficit(&rho, cfg.variant, &cfg.opt)?.value,
            concurrence: concurrence(&rho)?,
        })
    };
    run().map_err(|e| Error::AtGridPoint {
        gamma: params.gamma(),
        t_tilde,
        a_tilde: params.a_tilde(),
        source: Box::new(e),
    })
}

/// `n` points from `lo` to `hi` inclusive, computed as `lo + i·step` so
/// that shared points of nested grids are bit-identical.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 points on a nonempty interval, got {n} on [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect())
}

/// Grid from `lo` with spacing `step` up to `hi` (included when it lands
/// within a rounding error of a grid point).
pub fn stepped_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad grid lo={lo} hi={hi} step={step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub a_tilde: f64,
    pub ln: f64,
    pub qwd: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub gamma: f64,
    pub t_tilde: f64,
    pub samples: Vec<CurveSample>,
}

impl CorrelationCurve {
    pub fn fields(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.a_tilde).collect()
    }

    pub fn max_spacing(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[1].a_tilde - w[0].a_tilde)
            .fold(0.0, f64::max)
    }
}

fn check_field_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty field grid".into()));
    }
    if grid.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(Error::InvalidParameter("field grid values must be finite and >= 0".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("field grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Full pipeline at every field of `grid`, in grid order.
pub fn sweep_field(
    t_tilde: f64,
    gamma: f64,
    grid: &[f64],
    cfg: &PipelineConfig,
    exec: Exec,
) -> Result<CorrelationCurve> {
    check_field_grid(grid)?;
    let base = ModelParams::new(gamma, grid[0])?;
    let samples = exec.try_map(grid, |&a| {
        let m = evaluate_point(t_tilde, &base.with_field(a)?, cfg)?;
        Ok(CurveSample {
            a_tilde: a,
            ln: m.ln,
            qwd: m.qwd,
            concurrence: m.concurrence,
        })
    })?;
    Ok(CorrelationCurve {
        gamma,
        t_tilde,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NoDeath,
    DeathNoRevival,
    DeathWithRevival,
}

impl Classification {
    /// Entanglement is present at the top of the field range.
    pub fn entangled_at_high_field(self) -> bool {
        self != Classification::DeathNoRevival
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevivalReport {
    pub death_field: Option<f64>,
    pub revival_field: Option<f64>,
    pub classification: Classification,
}

fn crossing(a0: f64, y0: f64, a1: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        return 0.5 * (a0 + a1);
    }
    let f = ((level - y0) / (y1 - y0)).clamp(0.0, 1.0);
    a0 + f * (a1 - a0)
}

/// Classifies the logarithmic negativity along the field.
///
/// A transition counts only when the new side holds for two consecutive
/// samples; crossing fields are linear interpolations at `eps_ent`.
pub fn detect_revival(curve: &CorrelationCurve, eps_ent: f64, max_spacing: f64) -> Result<RevivalReport> {
    if !(eps_ent > 0.0) {
        return Err(Error::InvalidParameter(format!("eps_ent must be positive, got {eps_ent}")));
    }
    let spacing = curve.max_spacing();
    if spacing > max_spacing * (1.0 + 1e-9) {
        return Err(Error::InsufficientResolution {
            spacing,
            max: max_spacing,
        });
    }
    let s = &curve.samples;
    let above: Vec<bool> = s.iter().map(|x| x.ln > eps_ent).collect();
    let held = |i: usize, v: bool| i + 1 < above.len() && above[i] == v && above[i + 1] == v;

    let mut death = None;
    let mut revival = None;
    let mut seen_above = false;
    for i in 1..s.len() {
        seen_above |= above[i - 1];
        if death.is_none() {
            if seen_above && above[i - 1] && held(i, false) {
                death = Some(crossing(s[i - 1].a_tilde, s[i - 1].ln, s[i].a_tilde, s[i].ln, eps_ent));
            }
        } else if !above[i - 1] && held(i, true) {
            revival = Some(crossing(s[i - 1].a_tilde, s[i - 1].ln, s[i].a_tilde, s[i].ln, eps_ent));
            break;
        }
    }
    let classification = match (death, revival) {
        (None, _) => Classification::NoDeath,
        (Some(_), None) => Classification::DeathNoRevival,
        (Some(_), Some(_)) => Classification::DeathWithRevival,
    };
    Ok(RevivalReport {
        death_field: death,
        revival_field: revival,
        classification,
    })
}

/// Composite trapezoidal rule on sorted abscissae.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Area under the work-deficit curve with its refinement record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub area: f64,
    pub points: usize,
    /// Change caused by the last doubling.
    pub last_change: f64,
    pub converged: bool,
    /// `(a, qwd)` at the finest level, for reuse.
    pub samples: Vec<(f64, f64)>,
}

/// Trapezoidal area over `[0, 2]` of `f`, doubling the resolution until
/// two successive estimates differ by less than [`AREA_TOLERANCE`].
/// `seed` may supply already known values on the starting grid.
pub fn refine_area<F>(resolution: usize, seed: Option<&[(f64, f64)]>, exec: Exec, f: F) -> Result<AreaEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    if resolution < 101 {
        return Err(Error::InvalidParameter(format!(
            "area resolution must be at least 101 points, got {resolution}"
        )));
    }
    let grid = uniform_grid(0.0, AREA_FIELD_MAX, resolution)?;
    let mut ys = match seed {
        Some(seed) if seed.len() == grid.len() && seed.iter().zip(&grid).all(|(s, a)| s.0 == *a) => {
            seed.iter().map(|s| s.1).collect()
        }
        _ => exec.try_map(&grid, |&a| f(a))?,
    };
    let mut xs = grid;
    let mut area = trapezoid(&xs, &ys);
    loop {
        let n = 2 * xs.len() - 1;
        if n > AREA_MAX_POINTS {
            return Ok(AreaEstimate {
                area,
                points: xs.len(),
                last_change: f64::NAN,
                converged: false,
                samples: xs.into_iter().zip(ys).collect(),
            });
        }
        let fine = uniform_grid(0.0, AREA_FIELD_MAX, n)?;
        let mids: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
        let new = exec.try_map(&mids, |&a| f(a))?;
        let mut fy = Vec::with_capacity(n);
        for (i, y) in ys.iter().enumerate() {
            fy.push(*y);
            if i < new.len() {
                fy.push(new[i]);
            }
        }
        let fine_area = trapezoid(&fine, &fy);
        let change = (fine_area - area).abs();
        xs = fine;
        ys = fy;
        area = fine_area;
        if change < AREA_TOLERANCE {
            return Ok(AreaEstimate {
                area,
                points: xs.len(),
                last_change: change,
                converged: true,
                samples: xs.into_iter().zip(ys).collect(),
            });
        }
    }
}

/// Area under the work-deficit curve over `a ∈ [0, 2]` at one time.
pub fn area_qwd(
    t_tilde: f64,
    gamma: f64,
    resolution: usize,
    cfg: &PipelineConfig,
    exec: Exec,
) -> Result<AreaEstimate> {
    let base = ModelParams::new(gamma, 0.0)?;
    refine_area(resolution, None, exec, |a| {
        Ok(evaluate_point(t_tilde, &base.with_field(a)?, cfg)?.qwd)
    })
}

/// Smallest area among revival times and the time that witnesses it.
pub fn calibrate_a_min(entries: &[(f64, f64, bool)]) -> Result<(f64, f64)> {
    entries
        .iter()
        .filter(|e| e.2)
        .map(|e| (e.1, e.0))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .ok_or(Error::NoRevivalInGrid)
}

/// `(area − a_min) / m`.
pub fn scale_factor(area: f64, a_min: f64, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::NonpositiveScale(m));
    }
    Ok((area - a_min) / m)
}

pub fn predict_revival(scale_factor_value: f64) -> bool {
    scale_factor_value >= 0.0
}

/// Per-time result of a time scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeResult {
    pub t_tilde: f64,
    pub curve: CorrelationCurve,
    pub report: RevivalReport,
    pub area: AreaEstimate,
}

/// Settings of a time scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub pipeline: PipelineConfig,
    /// Points on `[0, 2]` for curves and the starting area grid.
    pub field_points: usize,
    pub eps_ent: f64,
    pub max_spacing: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            field_points: 201,
            eps_ent: DEFAULT_EPS_ENT,
            max_spacing: DEFAULT_MAX_SPACING,
        }
    }
}

/// Curve, classification and area at each time. The whole `t × a` grid is
/// handed to `exec` at once; areas refine from the curve samples.
pub fn scan_times(gamma: f64, times: &[f64], cfg: &ScanConfig, exec: Exec) -> Result<Vec<TimeResult>> {
    let base = ModelParams::new(gamma, 0.0)?;
    let grid = uniform_grid(0.0, AREA_FIELD_MAX, cfg.field_points)?;
    let jobs: Vec<(usize, f64)> = times
        .iter()
        .enumerate()
        .flat_map(|(i, _)| grid.iter().map(move |&a| (i, a)))
        .collect();
    let all = exec.try_map(&jobs, |&(i, a)| evaluate_point(times[i], &base.with_field(a)?, &cfg.pipeline))?;

    let mut out = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let row = &all[i * grid.len()..(i + 1) * grid.len()];
        let curve = CorrelationCurve {
            gamma,
            t_tilde: t,
            samples: grid
                .iter()
                .zip(row)
                .map(|(&a, m)| CurveSample {
                    a_tilde: a,
                    ln: m.ln,
                    qwd: m.qwd,
                    concurrence: m.concurrence,
                })
                .collect(),
        };
        let report = detect_revival(&curve, cfg.eps_ent, cfg.max_spacing)?;
        let seed: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.a_tilde, s.qwd)).collect();
        let area = refine_area(cfg.field_points, Some(&seed), exec, |a| {
            Ok(evaluate_point(t, &base.with_field(a)?, &cfg.pipeline)?.qwd)
        })?;
        out.push(TimeResult {
            t_tilde: t,
            curve,
            report,
            area,
        });
    }
    Ok(out)
}

/// How the scaling parameter `M` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalePolicy {
    /// `M = a_min`.
    #[default]
    AMin,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEntry {
    pub t_tilde: f64,
    pub area: f64,
    pub scale_factor: f64,
    pub classification: Classification,
    pub revival_detected: bool,
    pub revival_predicted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaSeries {
    pub gamma: f64,
    pub a_min: f64,
    pub witness_t: f64,
    pub m: f64,
    pub entries: Vec<AreaEntry>,
}

/// Calibrates `a_min` on the revival times of `points` and scores every
/// time. `points` holds `(t, area, classification)` in time order.
pub fn build_area_series(
    gamma: f64,
    points: &[(f64, f64, Classification)],
    policy: ScalePolicy,
) -> Result<AreaSeries> {
    let flagged: Vec<(f64, f64, bool)> = points
        .iter()
        .map(|p| (p.0, p.1, p.2 == Classification::DeathWithRevival))
        .collect();
    let (a_min, witness_t) = calibrate_a_min(&flagged)?;
    let m = match policy {
        ScalePolicy::AMin => a_min,
        ScalePolicy::Fixed(m) => m,
    };
    let entries = points
        .iter()
        .map(|&(t, area, classification)| {
            let sf = scale_factor(area, a_min, m)?;
            Ok(AreaEntry {
                t_tilde: t,
                area,
                scale_factor: sf,
                classification,
                revival_detected: classification == Classification::DeathWithRevival,
                revival_predicted: predict_revival(sf),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AreaSeries {
        gamma,
        a_min,
        witness_t,
        m,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub t_tilde: f64,
    pub classification: Classification,
    pub scale_factor: f64,
    pub boundary_adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub gamma: f64,
    pub a_min: f64,
    pub witness_t: f64,
    pub n_times: usize,
    /// Fraction of times where `S ≥ 0` matches entanglement being present
    /// at high field (revival, or no death at all).
    pub agreement: f64,
    /// Same, restricted to times where entanglement dies.
    pub death_only_agreement: f64,
    pub disagreements: Vec<Disagreement>,
    pub all_disagreements_at_boundary: bool,
    /// No-revival times whose area reaches a witnessed revival area.
    pub monotone_violations: Vec<Disagreement>,
    pub monotone_violations_off_boundary: usize,
    /// Number of sign changes of the detected class along time.
    pub detected_alternations: usize,
    pub predicted_alternations: usize,
}

impl AgreementReport {
    pub fn passes(&self, min_agreement: f64) -> bool {
        self.agreement >= min_agreement
            && self.all_disagreements_at_boundary
            && self.monotone_violations_off_boundary == 0
    }
}

fn alternations(flags: impl Iterator<Item = bool>) -> usize {
    let v: Vec<bool> = flags.collect();
    v.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Compares predicted against detected revival on an [`AreaSeries`].
///
/// A time is boundary adjacent when a neighbouring time has the other
/// detected class.
pub fn verify_threshold(series: &AreaSeries) -> AgreementReport {
    let e = &series.entries;
    let positive: Vec<bool> = e.iter().map(|x| x.classification.entangled_at_high_field()).collect();
    let adjacent = |i: usize| {
        (i > 0 && positive[i - 1] != positive[i]) || (i + 1 < e.len() && positive[i + 1] != positive[i])
    };
    let mut disagreements = Vec::new();
    let mut monotone = Vec::new();
    let (mut dead, mut dead_ok) = (0usize, 0usize);
    for (i, x) in e.iter().enumerate() {
        let d = Disagreement {
            t_tilde: x.t_tilde,
            classification: x.classification,
            scale_factor: x.scale_factor,
            boundary_adjacent: adjacent(i),
        };
        let agree = x.revival_predicted == positive[i];
        if !agree {
            disagreements.push(d);
        }
        if x.classification != Classification::NoDeath {
            dead += 1;
            dead_ok += agree as usize;
        }
        if x.classification == Classification::DeathNoRevival && x.area >= series.a_min {
            monotone.push(d);
        }
    }
    let n = e.len();
    AgreementReport {
        gamma: series.gamma,
        a_min: series.a_min,
        witness_t: series.witness_t,
        n_times: n,
        agreement: if n == 0 { 1.0 } else { (n - disagreements.len()) as f64 / n as f64 },
        death_only_agreement: if dead == 0 { 1.0 } else { dead_ok as f64 / dead as f64 },
        all_disagreements_at_boundary: disagreements.iter().all(|d| d.boundary_adjacent),
        monotone_violations_off_boundary: monotone.iter().filter(|d| !d.boundary_adjacent).count(),
        disagreements,
        monotone_violations: monotone,
        detected_alternations: alternations(positive.iter().copied()),
        predicted_alternations: alternations(e.iter().map(|x| x.revival_predicted)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn curve(ln: &[f64]) -> CorrelationCurve {
        CorrelationCurve {
            gamma: 0.5,
            t_tilde: 1.0,
            samples: ln
                .iter()
                .enumerate()
                .map(|(i, &l)| CurveSample {
                    a_tilde: 0.01 * i as f64,
                    ln: l,
                    qwd: 0.0,
                    concurrence: 0.0,
                })
                .collect(),
        }
    }

    fn classify(ln: &[f64]) -> RevivalReport {
        detect_revival(&curve(ln), DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&[0.1; 10]).classification, Classification::NoDeath);
        let r = classify(&[0.3, 0.2, 0.1, 0.0, 0.0, 0.0]);
        assert_eq!(r.classification, Classification::DeathNoRevival);
        assert!(r.revival_field.is_none());
        let r = classify(&[0.2, 0.1, 0.0, 0.0, 0.0, 0.05, 0.1, 0.2]);
        assert_eq!(r.classification, Classification::DeathWithRevival);
        // Crossings of 1e-4, interpolated on the bracketing segments.
        assert_abs_diff_eq!(r.death_field.unwrap(), 0.01 + 0.01 * (0.1 - 1e-4) / 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.revival_field.unwrap(), 0.04 + 0.01 * (1e-4 / 0.05), epsilon = 1e-15);
    }

    #[test]
    fn single_sample_flickers_are_ignored() {
        let r = classify(&[0.2, 0.0, 0.2, 0.2, 0.0, 0.0, 0.0]);
        assert_eq!(r.classification, Classification::DeathNoRevival);
        assert_abs_diff_eq!(r.death_field.unwrap(), 0.04 - 0.01 * 1e-4 / 0.2, epsilon = 1e-12);
        let r = classify(&[0.2, 0.0, 0.0, 0.1, 0.0, 0.0]);
        assert_eq!(r.classification, Classification::DeathNoRevival);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let mut c = curve(&[0.1, 0.1]);
        c.samples[1].a_tilde = 0.05;
        assert!(matches!(
            detect_revival(&c, DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING),
            Err(Error::InsufficientResolution { .. })
        ));
    }

    #[test]
    fn area_examples() {
        let zero = refine_area(101, None, Exec::Sequential, |_| Ok(0.0)).unwrap();
        assert_eq!(zero.area, 0.0);
        let c = refine_area(101, None, Exec::Sequential, |_| Ok(0.37)).unwrap();
        assert_abs_diff_eq!(c.area, 0.74, epsilon = 1e-13);
        assert!(c.converged);
        assert!(refine_area(50, None, Exec::Sequential, |_| Ok(0.0)).is_err());
    }

    #[test]
    fn area_refines_until_stable() {
        let f = |a: f64| Ok((20.0 * a).sin().abs());
        let r = refine_area(101, None, Exec::Sequential, f).unwrap();
        assert!(r.converged && r.points > 101);
        let exact = {
            // ∫_0^2 |sin 20a| da = (12·2 + (1 − cos(40 − 12π)))/20
            let full = 12.0 * 2.0 / 20.0;
            full + (1.0 - (40.0 - 12.0 * std::f64::consts::PI).cos()) / 20.0
        };
        assert!((r.area - exact).abs() < 1e-3);
    }

    #[test]
    fn trapezoid_is_additive() {
        let xs = uniform_grid(0.0, 2.0, 201).unwrap();
        let ys: Vec<f64> = xs.iter().map(|a| (3.0 * a).cos().powi(2) + a).collect();
        let whole = trapezoid(&xs, &ys);
        let split = trapezoid(&xs[..101], &ys[..101]) + trapezoid(&xs[100..], &ys[100..]);
        assert!((whole - split).abs() < 1e-10);
    }

    #[test]
    fn nested_grids_share_points_exactly() {
        let coarse = uniform_grid(0.0, 2.0, 201).unwrap();
        let fine = uniform_grid(0.0, 2.0, 401).unwrap();
        for (i, a) in coarse.iter().enumerate() {
            assert!((fine[2 * i] - a).abs() < 1e-15);
        }
        assert_eq!(stepped_grid(0.0, 10.0, 0.25).unwrap().len(), 41);
        assert_eq!(*stepped_grid(0.0, 10.0, 0.25).unwrap().last().unwrap(), 10.0);
    }

    #[test]
    fn calibration_examples() {
        let e = [(0.0, 3.0, true), (1.0, 5.0, true), (2.0, 1.0, false)];
        assert_eq!(calibrate_a_min(&e).unwrap(), (3.0, 0.0));
        assert_eq!(calibrate_a_min(&[(0.0, 1.0, false)]), Err(Error::NoRevivalInGrid));
        assert_eq!(calibrate_a_min(&[]), Err(Error::NoRevivalInGrid));
    }

    #[test]
    fn scale_factor_examples() {
        assert_eq!(scale_factor(3.0, 3.0, 3.0).unwrap(), 0.0);
        assert_eq!(scale_factor(6.0, 3.0, 3.0).unwrap(), 1.0);
        assert_eq!(scale_factor(1.5, 3.0, 3.0).unwrap(), -0.5);
        assert_eq!(scale_factor(1.0, 1.0, 0.0), Err(Error::NonpositiveScale(0.0)));
        assert!(predict_revival(0.0));
        assert!(!predict_revival(-1e-3));
        assert!(predict_revival(2.7));
    }

    use Classification::*;

    #[test]
    fn exact_threshold_data_agrees() {
        let pts = [
            (0.0, 2.0, DeathNoRevival),
            (0.25, 3.0, DeathWithRevival),
            (0.5, 4.0, DeathWithRevival),
            (0.75, 1.0, DeathNoRevival),
            (1.0, 3.5, NoDeath),
        ];
        let s = build_area_series(0.5, &pts, ScalePolicy::AMin).unwrap();
        assert_eq!(s.a_min, 3.0);
        assert_eq!(s.witness_t, 0.25);
        let r = verify_threshold(&s);
        assert_eq!(r.agreement, 1.0);
        assert!(r.passes(0.95));
        assert_eq!(r.detected_alternations, 3);
    }

    #[test]
    fn violations_are_reported_with_adjacency() {
        let pts = [
            (0.0, 3.0, DeathWithRevival),
            (0.25, 3.5, DeathNoRevival),
            (0.5, 1.0, DeathNoRevival),
            (0.75, 1.0, DeathNoRevival),
            (1.0, 4.0, DeathNoRevival),
            (1.25, 1.0, DeathNoRevival),
        ];
        let r = verify_threshold(&build_area_series(0.5, &pts, ScalePolicy::AMin).unwrap());
        assert_eq!(r.disagreements.len(), 2);
        assert!(r.disagreements[0].boundary_adjacent);
        assert!(!r.disagreements[1].boundary_adjacent);
        assert_eq!(r.monotone_violations_off_boundary, 1);
        assert!(!r.passes(0.0));
    }

    proptest! {
        #[test]
        fn scale_choice_never_changes_predictions(
            areas in proptest::collection::vec(0.0..5.0f64, 2..20),
            m in 0.01..10.0f64,
        ) {
            let pts: Vec<_> = areas
                .iter()
                .enumerate()
                .map(|(i, &a)| (i as f64, a, if i % 3 == 0 { DeathWithRevival } else { DeathNoRevival }))
                .collect();
            let a = build_area_series(0.5, &pts, ScalePolicy::AMin).unwrap();
            let b = build_area_series(0.5, &pts, ScalePolicy::Fixed(m)).unwrap();
            for (x, y) in a.entries.iter().zip(&b.entries) {
                prop_assert_eq!(x.revival_predicted, y.revival_predicted);
            }
        }

        #[test]
        fn revival_follows_death(ln in proptest::collection::vec(prop_oneof![Just(0.0), 0.0..0.5f64], 2..60)) {
            let r = classify(&ln);
            match r.classification {
                NoDeath => prop_assert!(r.death_field.is_none()),
                DeathNoRevival => prop_assert!(r.death_field.is_some() && r.revival_field.is_none()),
                DeathWithRevival => prop_assert!(r.revival_field.unwrap() > r.death_field.unwrap()),
            }
        }
    }
}
