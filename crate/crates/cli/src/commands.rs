//! The `curve`, `heatmap`, `area` and `predict` subcommands.

use std::time::Instant;

use serde_json::json;
use xyquench::scan::{
    build_area_series, evaluate_point, scan_times, stepped_grid, verify_threshold, Classification,
    CurveSample, PipelineConfig, ScalePolicy, ScanConfig, DEFAULT_MAX_SPACING,
};
use xyquench::{Exec, ModelParams};

use crate::cache::Cache;
use crate::config::{AreaArgs, CommonArgs, Physics, PredictArgs, Settings};
use crate::error::{CliError, CliResult};
use crate::output::{emit, render_csv, Cell};

struct Run {
    settings: Settings,
    exec: Exec,
    cache: Cache,
    started: Instant,
}

impl Run {
    fn new(args: &CommonArgs, m: Option<f64>, area_min: Option<f64>) -> CliResult<Self> {
        let settings = Settings::resolve(args, m, area_min)?;
        Ok(Self {
            exec: Exec::with_jobs(settings.execution.jobs),
            cache: Cache::new(settings.execution.cache_dir.clone()),
            settings,
            started: Instant::now(),
        })
    }

    fn p(&self) -> &Physics {
        &self.settings.physics
    }

    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            variant: self.p().variant,
            quad: self.p().quad,
            opt: self.p().opt,
        }
    }

    fn finish(self, command: &str, csv: &str, extras: &[(&str, serde_json::Value)]) -> CliResult<()> {
        emit(command, &self.settings, csv, extras, self.cache.stats(), self.started.elapsed())
    }

    /// Field sweeps at each time, served from the cache where possible and
    /// otherwise evaluated as one flat batch.
    fn rows(&self, times: &[f64], grid: &[f64]) -> CliResult<Vec<Vec<CurveSample>>> {
        let cfg = self.pipeline();
        let key = |t: f64| {
            json!({
                "op": "curve-row",
                "version": xyquench::VERSION,
                "gamma": self.p().gamma,
                "t": t,
                "grid": grid,
                "pipeline": cfg,
            })
        };
        let mut rows: Vec<Option<Vec<CurveSample>>> = times
            .iter()
            .map(|&t| {
                self.cache
                    .get(&key(t))
                    .filter(|v| v.len() == 3 * grid.len())
                    .map(|v| unpack_row(grid, &v))
            })
            .collect();
        let missing: Vec<usize> = (0..times.len()).filter(|&i| rows[i].is_none()).collect();
        if !missing.is_empty() {
            let base = ModelParams::new(self.p().gamma, 0.0)?;
            let jobs: Vec<(usize, f64)> = missing
                .iter()
                .flat_map(|&i| grid.iter().map(move |&a| (i, a)))
                .collect();
            let vals = self
                .exec
                .try_map(&jobs, |&(i, a)| evaluate_point(times[i], &base.with_field(a)?, &cfg))?;
            for (k, &i) in missing.iter().enumerate() {
                let row: Vec<CurveSample> = grid
                    .iter()
                    .zip(&vals[k * grid.len()..(k + 1) * grid.len()])
                    .map(|(&a, m)| CurveSample {
                        a_tilde: a,
                        ln: m.ln,
                        qwd: m.qwd,
                        concurrence: m.concurrence,
                    })
                    .collect();
                let flat: Vec<f64> = row.iter().flat_map(|s| [s.ln, s.qwd, s.concurrence]).collect();
                self.cache.put(&key(times[i]), &flat);
                rows[i] = Some(row);
            }
        }
        Ok(rows.into_iter().map(|r| r.expect("every row filled")).collect())
    }

    /// Classification and area per time, cached per time.
    fn time_results(&self, times: &[f64]) -> CliResult<Vec<TimeSummary>> {
        let scan = ScanConfig {
            pipeline: self.pipeline(),
            field_points: self.p().area_points()?,
            eps_ent: self.p().eps_ent,
            max_spacing: DEFAULT_MAX_SPACING,
        };
        let key = |t: f64| {
            json!({
                "op": "time-scan",
                "version": xyquench::VERSION,
                "gamma": self.p().gamma,
                "t": t,
                "scan": scan,
            })
        };
        let mut out: Vec<Option<TimeSummary>> = times
            .iter()
            .map(|&t| self.cache.get(&key(t)).and_then(|v| TimeSummary::unpack(t, &v)))
            .collect();
        let missing: Vec<f64> = times
            .iter()
            .zip(&out)
            .filter(|(_, o)| o.is_none())
            .map(|(&t, _)| t)
            .collect();
        if !missing.is_empty() {
            let fresh = scan_times(self.p().gamma, &missing, &scan, self.exec)?;
            let mut it = fresh.into_iter();
            for (i, slot) in out.iter_mut().enumerate() {
                if slot.is_none() {
                    let r = it.next().expect("one result per missing time");
                    let s = TimeSummary {
                        t_tilde: times[i],
                        classification: r.report.classification,
                        death_field: r.report.death_field,
                        revival_field: r.report.revival_field,
                        area: r.area.area,
                        area_points: r.area.points,
                        area_converged: r.area.converged,
                    };
                    self.cache.put(&key(times[i]), &s.pack());
                    *slot = Some(s);
                }
            }
        }
        Ok(out.into_iter().map(|o| o.expect("every time filled")).collect())
    }
}

fn unpack_row(grid: &[f64], v: &[f64]) -> Vec<CurveSample> {
    grid.iter()
        .zip(v.chunks_exact(3))
        .map(|(&a, c)| CurveSample {
            a_tilde: a,
            ln: c[0],
            qwd: c[1],
            concurrence: c[2],
        })
        .collect()
}

#[derive(Debug, Clone, serde::Serialize)]
struct TimeSummary {
    t_tilde: f64,
    classification: Classification,
    death_field: Option<f64>,
    revival_field: Option<f64>,
    area: f64,
    area_points: usize,
    area_converged: bool,
}

impl TimeSummary {
    fn pack(&self) -> Vec<f64> {
        let code = match self.classification {
            Classification::NoDeath => 0.0,
            Classification::DeathNoRevival => 1.0,
            Classification::DeathWithRevival => 2.0,
        };
        vec![
            code,
            self.death_field.unwrap_or(f64::NAN),
            self.revival_field.unwrap_or(f64::NAN),
            self.area,
            self.area_points as f64,
            self.area_converged as u8 as f64,
        ]
    }

    fn unpack(t_tilde: f64, v: &[f64]) -> Option<Self> {
        let [code, death, revival, area, points, conv] = v.try_into().ok()?;
        let classification = match code as u8 {
            0 => Classification::NoDeath,
            1 => Classification::DeathNoRevival,
            2 => Classification::DeathWithRevival,
            _ => return None,
        };
        let opt = |x: f64| (!x.is_nan()).then_some(x);
        Some(Self {
            t_tilde,
            classification,
            death_field: opt(death),
            revival_field: opt(revival),
            area,
            area_points: points as usize,
            area_converged: conv != 0.0,
        })
    }
}

fn field_grid(p: &Physics) -> CliResult<Vec<f64>> {
    Ok(stepped_grid(p.a_min, p.a_max, p.a_step)?)
}

fn time_grid(p: &Physics) -> CliResult<Vec<f64>> {
    Ok(stepped_grid(p.t_min, p.t_max, p.t_step)?)
}

pub fn curve(args: &CommonArgs) -> CliResult<()> {
    let run = Run::new(args, None, None)?;
    let t = run.p().t.unwrap_or(1.0);
    let grid = field_grid(run.p())?;
    let row = run.rows(&[t], &grid)?.remove(0);
    let rows: Vec<Vec<Cell>> = row
        .iter()
        .map(|s| vec![Cell::Num(s.a_tilde), Cell::Num(s.ln), Cell::Num(s.qwd), Cell::Num(s.concurrence)])
        .collect();
    let csv = render_csv(&["a_tilde", "ln_ebits", "qwd_qubits", "concurrence"], &rows);
    run.finish("curve", &csv, &[])
}

pub fn heatmap(args: &CommonArgs) -> CliResult<()> {
    let run = Run::new(args, None, None)?;
    let times = time_grid(run.p())?;
    let grid = field_grid(run.p())?;
    let data = run.rows(&times, &grid)?;
    let rows: Vec<Vec<Cell>> = times
        .iter()
        .zip(&data)
        .flat_map(|(&t, row)| {
            row.iter()
                .map(move |s| vec![Cell::Num(t), Cell::Num(s.a_tilde), Cell::Num(s.ln), Cell::Num(s.qwd)])
        })
        .collect();
    let csv = render_csv(&["t_tilde", "a_tilde", "ln_ebits", "qwd_qubits"], &rows);
    run.finish("heatmap", &csv, &[])
}

fn policy(m: Option<f64>) -> ScalePolicy {
    m.map_or(ScalePolicy::AMin, ScalePolicy::Fixed)
}

pub fn area(args: &AreaArgs) -> CliResult<()> {
    let run = Run::new(&args.common, args.m, None)?;
    let times = time_grid(run.p())?;
    let summaries = run.time_results(&times)?;
    let points: Vec<_> = summaries.iter().map(|s| (s.t_tilde, s.area, s.classification)).collect();
    let series = build_area_series(run.p().gamma, &points, policy(run.p().m))?;
    let report = verify_threshold(&series);
    let rows: Vec<Vec<Cell>> = series
        .entries
        .iter()
        .map(|e| {
            vec![
                Cell::Num(e.t_tilde),
                Cell::Num(e.area),
                Cell::Num(e.scale_factor),
                Cell::Flag(e.revival_detected),
                Cell::Flag(e.revival_predicted),
            ]
        })
        .collect();
    let csv = render_csv(
        &["t_tilde", "area", "scale_factor", "revival_detected", "revival_predicted"],
        &rows,
    );
    let summary = json!({ "agreement": report, "m": series.m, "times": summaries });
    run.finish("area", &csv, &[("agreement", summary)])
}

pub fn predict(args: &PredictArgs) -> CliResult<()> {
    let run = Run::new(&args.common, args.m, args.area_min)?;
    let times = match run.p().t {
        Some(t) => vec![t],
        None => time_grid(run.p())?,
    };
    let (a_min, source, witness) = match run.p().area_min {
        Some(a) if a > 0.0 => (a, "given", None),
        Some(a) => {
            return Err(CliError::Param(format!("--area-min must be positive, got {a}")));
        }
        None => {
            let cal = run.time_results(&time_grid(run.p())?)?;
            let pts: Vec<_> = cal.iter().map(|s| (s.t_tilde, s.area, s.classification)).collect();
            let s = build_area_series(run.p().gamma, &pts, ScalePolicy::AMin)?;
            (s.a_min, "calibrated", Some(s.witness_t))
        }
    };
    let m = run.p().m.unwrap_or(a_min);
    let summaries = run.time_results(&times)?;
    let mut rows = Vec::with_capacity(times.len());
    for s in &summaries {
        let sf = xyquench::scan::scale_factor(s.area, a_min, m)?;
        rows.push(vec![
            Cell::Num(s.t_tilde),
            Cell::Num(s.area),
            Cell::Num(sf),
            Cell::Flag(xyquench::scan::predict_revival(sf)),
        ]);
    }
    let csv = render_csv(&["t_tilde", "area", "scale_factor", "revival_predicted"], &rows);
    let calib = json!({ "a_min": a_min, "source": source, "witness_t": witness, "m": m });
    run.finish("predict", &csv, &[("calibration", calib)])
}
