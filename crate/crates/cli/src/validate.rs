//! `validate` suites: oracle comparisons and invariant sweeps.

use serde::Serialize;
use serde_json::json;
use xyquench::measures::{concurrence, log_negativity, negativity, work_deficit};
use xyquench::oracle::{ed_quench, qwd_grid_oracle, ring_correlators, EdSpec, RingSpec};
use xyquench::scan::{detect_revival, CorrelationCurve, CurveSample};
use xyquench::state::{assemble_state, assemble_unchecked, validate_state};
use xyquench::{correlators, DeficitVariant, Exec, ModelParams, OptimizerSpec, QuadratureSpec, TwoQubitState};

use crate::config::{Suite, ValidateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{pretty, write_file};

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub metrics: serde_json::Value,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, failures: Vec<String>, metrics: serde_json::Value) -> Self {
        Self {
            name,
            passed: failures.is_empty(),
            metrics,
            failures,
        }
    }
}

/// The `(γ, a, t)` sweep shared by the ring and PSD suites.
pub fn sweep_grid() -> Vec<(f64, f64, f64)> {
    let gammas = [0.2, 0.4, 0.5, 0.6, 0.8, 1.0];
    let mut out = Vec::new();
    for g in gammas {
        for i in 0..=20 {
            for k in 0..=20 {
                out.push((g, 0.1 * i as f64, 0.5 * k as f64));
            }
        }
    }
    out
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn trivial() -> SuiteReport {
    let mut f = Vec::new();
    let opt = OptimizerSpec::default();
    let bell = TwoQubitState::bell_phi_plus();
    let mixed = TwoQubitState::maximally_mixed();
    let cc = TwoQubitState::classically_correlated();
    let near = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol;
    let val = |r: xyquench::Result<f64>| r.unwrap_or(f64::NAN);
    let qwd = |s: &TwoQubitState, v| work_deficit(s, v, &opt).map(|w| w.value).unwrap_or(f64::NAN);

    let bell_ln = val(log_negativity(&bell));
    check(&mut f, near(bell_ln, 1.0, 1e-10), || format!("Bell LN {bell_ln}"));
    let bell_n = val(negativity(&bell));
    check(&mut f, near(bell_n, 0.5, 1e-10), || format!("Bell negativity {bell_n}"));
    let bell_c = val(concurrence(&bell));
    check(&mut f, near(bell_c, 1.0, 1e-10), || format!("Bell concurrence {bell_c}"));
    let bg = qwd(&bell, DeficitVariant::GlobalDephased);
    check(&mut f, near(bg, 1.0, 1e-4), || format!("Bell QWD global-dephased {bg}"));
    let bl = qwd(&bell, DeficitVariant::LocalSum);
    check(&mut f, near(bl, 2.0, 1e-4), || format!("Bell QWD local-sum {bl}"));
    for v in DeficitVariant::ALL {
        let m = qwd(&mixed, v);
        check(&mut f, near(m, 0.0, 1e-9), || format!("I/4 QWD {v} {m}"));
    }
    let ml = val(log_negativity(&mixed));
    check(&mut f, near(ml, 0.0, 1e-9), || format!("I/4 LN {ml}"));
    let cl = val(log_negativity(&cc));
    check(&mut f, near(cl, 0.0, 1e-12), || format!("classical LN {cl}"));
    let cg = qwd(&cc, DeficitVariant::GlobalDephased);
    check(&mut f, near(cg, 0.0, 1e-4), || format!("classical QWD global-dephased {cg}"));

    let synthetic = CorrelationCurve {
        gamma: 0.5,
        t_tilde: 0.0,
        samples: [0.2, 0.1, 0.0, 0.0, 0.0, 0.1, 0.2]
            .iter()
            .enumerate()
            .map(|(i, &ln)| CurveSample {
                a_tilde: 0.01 * i as f64,
                ln,
                qwd: 0.0,
                concurrence: 0.0,
            })
            .collect(),
    };
    let rep = detect_revival(&synthetic, 1e-4, 0.02);
    check(
        &mut f,
        matches!(rep, Ok(r) if r.classification == xyquench::scan::Classification::DeathWithRevival),
        || "synthetic revival curve misclassified".into(),
    );
    SuiteReport::new("trivial", f, json!({}))
}

fn ring(exec: Exec) -> SuiteReport {
    let quad = QuadratureSpec::default();
    let grid = sweep_grid();
    let diffs = exec.map(&grid, |&(g, a, t)| -> Result<f64, String> {
        let p = ModelParams::new(g, a).map_err(|e| e.to_string())?;
        let k = correlators(t, &p, &quad).map_err(|e| e.to_string())?;
        Ok(ring_correlators(t, &p, RingSpec::default()).max_abs_diff(&k))
    });
    let mut f = Vec::new();
    let mut worst: f64 = 0.0;
    for (pt, d) in grid.iter().zip(diffs) {
        match d {
            Ok(d) => {
                worst = worst.max(d);
                check(&mut f, d <= 1e-6, || format!("{pt:?}: deviation {d:.3e}"));
            }
            Err(e) => f.push(format!("{pt:?}: {e}")),
        }
    }
    SuiteReport::new("ring", f, json!({ "points": grid.len(), "max_deviation": worst, "tolerance": 1e-6 }))
}

fn state_psd(exec: Exec) -> SuiteReport {
    let quad = QuadratureSpec::default();
    let grid = sweep_grid();
    let reports = exec.map(&grid, |&(g, a, t)| {
        let p = ModelParams::new(g, a).map_err(|e| e.to_string())?;
        let c = correlators(t, &p, &quad).map_err(|e| e.to_string())?;
        Ok::<_, String>(validate_state(&assemble_unchecked(&c)))
    });
    let mut f = Vec::new();
    let (mut min_eig, mut max_trace): (f64, f64) = (f64::INFINITY, 0.0);
    for (pt, r) in grid.iter().zip(reports) {
        match r {
            Ok(r) => {
                min_eig = min_eig.min(r.min_eigenvalue);
                max_trace = max_trace.max(r.trace_deviation);
                check(&mut f, r.passed(), || format!("{pt:?}: {:?}", r.failures()));
            }
            Err(e) => f.push(format!("{pt:?}: {e}")),
        }
    }
    SuiteReport::new(
        "state-psd",
        f,
        json!({ "points": grid.len(), "min_eigenvalue": min_eig, "max_trace_deviation": max_trace }),
    )
}

fn ed() -> SuiteReport {
    let mut f = Vec::new();
    let mut devs = Vec::new();
    let result = (|| -> xyquench::Result<()> {
        let p = ModelParams::new(0.5, 0.8)?;
        let inf = assemble_state(&correlators(1.0, &p, &QuadratureSpec::default())?)?;
        for n in [8, 10, 12] {
            let r = ed_quench(1.0, &p, EdSpec::new(n)?)?;
            devs.push((n, r.averaged.max_abs_diff(&inf), r.degenerate));
        }
        Ok(())
    })();
    if let Err(e) = result {
        f.push(e.to_string());
    }
    for w in devs.windows(2) {
        check(&mut f, w[1].1 < w[0].1, || {
            format!("deviation did not drop from n={} to n={}", w[0].0, w[1].0)
        });
    }
    let metrics: Vec<_> = devs
        .iter()
        .map(|(n, d, deg)| json!({ "n_sites": n, "max_entry_deviation": d, "degenerate": deg }))
        .collect();
    SuiteReport::new("ed", f, json!({ "point": [0.5, 0.8, 1.0], "sizes": metrics }))
}

fn optimizer(exec: Exec) -> SuiteReport {
    // Deterministic spread of pipeline states.
    let pts: Vec<(f64, f64, f64)> = (0..40)
        .map(|i| {
            let x = i as f64;
            (0.2 + 0.8 * ((x * 0.618_034) % 1.0), 2.0 * ((x * 0.414_214) % 1.0), 10.0 * ((x * 0.732_051) % 1.0))
        })
        .collect();
    let opt = OptimizerSpec::default();
    let out = exec.map(&pts, |&(g, a, t)| -> Result<Vec<(f64, f64)>, String> {
        let p = ModelParams::new(g, a).map_err(|e| e.to_string())?;
        let c = correlators(t, &p, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
        let rho = assemble_state(&c).map_err(|e| e.to_string())?;
        DeficitVariant::ALL
            .iter()
            .map(|&v| {
                let w = work_deficit(&rho, v, &opt).map_err(|e| e.to_string())?;
                let (g, _) = qwd_grid_oracle(&rho, v, 256, 512).map_err(|e| e.to_string())?;
                Ok((w.value, g))
            })
            .collect()
    });
    let mut f = Vec::new();
    let mut worst_above: f64 = f64::NEG_INFINITY;
    let mut worst_below: f64 = f64::NEG_INFINITY;
    for (pt, r) in pts.iter().zip(out) {
        match r {
            Ok(pairs) => {
                for (w, g) in pairs {
                    worst_above = worst_above.max(w - g);
                    worst_below = worst_below.max(g - w);
                    check(&mut f, w <= g + 1e-9 && w >= g - 1e-4, || {
                        format!("{pt:?}: optimizer {w} vs grid {g}")
                    });
                }
            }
            Err(e) => f.push(format!("{pt:?}: {e}")),
        }
    }
    SuiteReport::new(
        "optimizer",
        f,
        json!({ "states": pts.len(), "max_optimizer_excess": worst_above, "max_grid_excess": worst_below }),
    )
}

pub fn run(args: &ValidateArgs) -> CliResult<()> {
    let exec = Exec::with_jobs(args.jobs);
    let selected: Vec<Suite> = match args.suite {
        Suite::All => vec![Suite::Trivial, Suite::Ring, Suite::StatePsd, Suite::Ed, Suite::Optimizer],
        s => vec![s],
    };
    let reports: Vec<SuiteReport> = selected
        .iter()
        .map(|s| match s {
            Suite::Trivial => trivial(),
            Suite::Ring => ring(exec),
            Suite::StatePsd => state_psd(exec),
            Suite::Ed => ed(),
            Suite::Optimizer => optimizer(exec),
            Suite::All => unreachable!("expanded above"),
        })
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let doc = json!({ "passed": passed, "suites": reports, "version": xyquench::VERSION });
    let body = pretty(&doc);
    match &args.out {
        Some(p) => write_file(p, &body)?,
        None => print!("{}", String::from_utf8_lossy(&body)),
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
        Err(CliError::Validation(format!("suites failed: {}", failed.join(", "))))
    }
}
