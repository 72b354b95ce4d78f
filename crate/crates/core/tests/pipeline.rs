//! End-to-end checks of kernels → state → measures → scan against the
//! oracles.

use proptest::prelude::*;
use xyquench::measures::{concurrence, log_negativity, work_deficit};
use xyquench::oracle::{ed_quench, ring_correlators, EdQuench, EdSpec, RingSpec};
use xyquench::scan::{
    area_qwd, build_area_series, detect_revival, scan_times, sweep_field, uniform_grid, Classification,
    PipelineConfig, ScalePolicy, ScanConfig, DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING,
};
use xyquench::state::{assemble_state, validate_state};
use xyquench::{correlators, DeficitVariant, Exec, ModelParams, OptimizerSpec, QuadratureSpec};

fn gd() -> PipelineConfig {
    PipelineConfig {
        variant: DeficitVariant::GlobalDephased,
        ..Default::default()
    }
}

#[test]
fn initial_curve_matches_static_ground_state() {
    let grid = uniform_grid(0.0, 2.0, 11).unwrap();
    for cfg in [PipelineConfig::default(), gd()] {
        let curve = sweep_field(0.0, 0.5, &grid, &cfg, Exec::Sequential).unwrap();
        for s in &curve.samples {
            let p = ModelParams::new(0.5, s.a_tilde).unwrap();
            let rho = assemble_state(&ring_correlators(0.0, &p, RingSpec::default())).unwrap();
            let ln = log_negativity(&rho).unwrap();
            let qwd = work_deficit(&rho, cfg.variant, &OptimizerSpec::default()).unwrap().value;
            assert!((s.ln - ln).abs() < 1e-6, "a={} ln {} vs {}", s.a_tilde, s.ln, ln);
            assert!((s.qwd - qwd).abs() < 1e-6, "a={} qwd {} vs {}", s.a_tilde, s.qwd, qwd);
        }
    }
}

#[test]
fn revival_and_no_revival_times_at_gamma_half() {
    let grid = uniform_grid(0.0, 2.0, 201).unwrap();
    let classify = |t: f64| {
        let c = sweep_field(t, 0.5, &grid, &PipelineConfig::default(), Exec::Parallel).unwrap();
        detect_revival(&c, DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING).unwrap()
    };
    let r = classify(1.0);
    assert_eq!(r.classification, Classification::DeathWithRevival);
    let (d, v) = (r.death_field.unwrap(), r.revival_field.unwrap());
    assert!(0.6 < d && d < v && v < 1.4, "{d} {v}");
    assert_eq!(classify(2.5).classification, Classification::DeathNoRevival);
}

#[test]
fn halving_the_field_spacing_keeps_classifications() {
    let coarse = uniform_grid(0.0, 2.0, 201).unwrap();
    let fine = uniform_grid(0.0, 2.0, 401).unwrap();
    for t in [1.0, 2.5, 4.0] {
        let a = sweep_field(t, 0.5, &coarse, &PipelineConfig::default(), Exec::Parallel).unwrap();
        let b = sweep_field(t, 0.5, &fine, &PipelineConfig::default(), Exec::Parallel).unwrap();
        let ra = detect_revival(&a, DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING).unwrap();
        let rb = detect_revival(&b, DEFAULT_EPS_ENT, DEFAULT_MAX_SPACING).unwrap();
        assert_eq!(ra.classification, rb.classification, "t={t}");
    }
}

#[test]
fn revival_time_has_larger_area() {
    let revival = area_qwd(1.25, 0.4, 201, &gd(), Exec::Parallel).unwrap();
    let none = area_qwd(3.0, 0.4, 201, &gd(), Exec::Parallel).unwrap();
    assert!(revival.converged && none.converged);
    assert!(revival.area > none.area, "{} vs {}", revival.area, none.area);
}

#[test]
fn calibrated_minimum_area_fixture() {
    // The revival times of the γ = 0.5 scan on t ∈ [0, 10], step 0.25.
    let times = [0.75, 1.0, 1.25, 1.5, 4.0, 4.25];
    let cfg = ScanConfig {
        pipeline: gd(),
        ..Default::default()
    };
    let res = scan_times(0.5, &times, &cfg, Exec::Parallel).unwrap();
    assert!(res.iter().all(|r| r.report.classification == Classification::DeathWithRevival));
    let pts: Vec<_> = res.iter().map(|r| (r.t_tilde, r.area.area, r.report.classification)).collect();
    let s = build_area_series(0.5, &pts, ScalePolicy::AMin).unwrap();
    assert_eq!(s.witness_t, 4.25);
    assert!((s.a_min - 0.153_945_737_606).abs() < 1e-6, "{}", s.a_min);
}

#[test]
fn sequential_and_parallel_sweeps_agree_bitwise() {
    let grid = uniform_grid(0.0, 2.0, 41).unwrap();
    let a = sweep_field(3.3, 0.7, &grid, &gd(), Exec::Sequential).unwrap();
    let b = sweep_field(3.3, 0.7, &grid, &gd(), Exec::Parallel).unwrap();
    let c = sweep_field(3.3, 0.7, &grid, &gd(), Exec::ParallelWith { jobs: 3 }).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn ed_magnetization_approaches_infinite_chain() {
    let p = ModelParams::new(0.5, 0.8).unwrap();
    let mz = correlators(1.0, &p, &QuadratureSpec::default()).unwrap().mz;
    let devs: Vec<f64> = [6, 8, 10]
        .iter()
        .map(|&n| {
            let r = ed_quench(1.0, &p, EdSpec::new(n).unwrap()).unwrap();
            // <σz> on site 0 = ρ00 + ρ11 − ρ22 − ρ33.
            let m = r.averaged.matrix();
            let site0 = (m[(0, 0)] + m[(1, 1)] - m[(2, 2)] - m[(3, 3)]).re;
            (site0 - mz).abs()
        })
        .collect();
    assert!(devs[2] < devs[0], "{devs:?}");
}

#[test]
fn ed_zero_field_has_no_dynamics() {
    let p = ModelParams::new(0.9, 0.0).unwrap();
    let q = EdQuench::new(&p, EdSpec::new(8).unwrap()).unwrap();
    let r0 = q.state_at(0.0).averaged;
    assert!(q.state_at(6.0).averaged.max_abs_diff(&r0) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_states_are_physical(g in 0.1..1.0f64, a in 0.0..3.0f64, t in 0.0..10.0f64) {
        let p = ModelParams::new(g, a).unwrap();
        let c = correlators(t, &p, &QuadratureSpec::default()).unwrap();
        prop_assert!(c.within_bounds(1e-9));
        let rho = assemble_state(&c).unwrap();
        let rep = validate_state(&rho);
        prop_assert!(rep.trace_deviation <= 1e-12);
        prop_assert!(rep.min_eigenvalue >= -1e-8);
        prop_assert!(log_negativity(&rho).unwrap() >= 0.0);
        let conc = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&conc));
        let w = work_deficit(&rho, DeficitVariant::GlobalDephased, &OptimizerSpec::default()).unwrap();
        prop_assert!(w.value >= 0.0 && w.value <= 1.0 + 1e-9);
    }

    #[test]
    fn zero_field_is_stationary(g in 0.1..1.0f64, t in 0.0..10.0f64) {
        let p = ModelParams::new(g, 0.0).unwrap();
        let q = QuadratureSpec::default();
        let d = correlators(t, &p, &q).unwrap().max_abs_diff(&correlators(0.0, &p, &q).unwrap());
        prop_assert!(d < 1e-8);
    }
}
