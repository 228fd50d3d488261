use mempart_core::engine::{compute_trace, EngineSettings};
use mempart_core::partition::{partition_of, run_table1};
use mempart_core::{
    classify, is_nonmonotonic, table1_scenarios, ClassifierControl, FrequencySpec, MemoryPartition,
    PhaseProfile, ScenarioConfig, TimeGrid,
};

fn row(id: char) -> ScenarioConfig {
    table1_scenarios()
        .into_iter()
        .find(|r| r.id == id)
        .unwrap()
        .scenario
}

fn past_slowest_echo() -> ClassifierControl {
    // z(ω, −15) echoes at τ = 15
    ClassifierControl::new(1e-3, TimeGrid::uniform(20.0, 0.01).unwrap()).unwrap()
}

#[test]
fn all_sixteen_presets_reproduce_past_slowest_echo() {
    let outcomes = run_table1(&past_slowest_echo(), &EngineSettings::default());
    for o in &outcomes {
        let got = o.computed.as_ref().map(|c| c.partition.to_string());
        assert!(
            o.passed,
            "row {} ({}): expected {}, got {:?}",
            o.id, o.summary, o.expected, got
        );
    }
    assert_eq!(outcomes.len(), 16);
}

#[test]
fn default_grid_ends_before_slow_local_echo() {
    let outcomes = run_table1(&ClassifierControl::default(), &EngineSettings::default());
    for o in &outcomes {
        let got = o.computed.as_ref().unwrap().partition;
        match o.id {
            'l' => assert_eq!(got.to_string(), "1010"),
            'm' => assert_eq!(got.to_string(), "1001"),
            _ => assert!(o.passed, "row {}", o.id),
        }
    }
    let trace = compute_trace(&row('l'), &EngineSettings::default()).unwrap();
    let k2 = &trace.magnitudes()[1];
    assert!(k2.iter().skip(800).all(|&m| m < 1e-5));
}

#[test]
fn swapping_photons_swaps_local_flags() {
    let ctl = ClassifierControl::default();
    for r in table1_scenarios() {
        // row k's mixture is symmetric too; all presets have symmetric frequency specs
        let p = classify(&r.scenario, &ctl).unwrap();
        let q = classify(&r.scenario.swapped(), &ctl).unwrap();
        assert_eq!(q, p.swapped(), "row {}", r.id);
    }
    assert_eq!(
        classify(&row('b'), &ctl).unwrap().swapped(),
        classify(&row('c'), &ctl).unwrap()
    );
}

#[test]
fn row_b_is_stable_across_thresholds() {
    let expected: MemoryPartition = "1000".parse().unwrap();
    for eps in [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2] {
        let ctl = ClassifierControl::new(eps, TimeGrid::default_classification()).unwrap();
        assert_eq!(
            classify(&row('b'), &ctl).unwrap(),
            expected,
            "threshold {eps}"
        );
    }
}

#[test]
fn row_b_small_nonlocal_revival_is_resolved_below_its_height() {
    // The nonlocal functions of row b revive by about 6.75e-4.
    let below = ClassifierControl::new(5e-4, TimeGrid::default_classification()).unwrap();
    assert_eq!(classify(&row('b'), &below).unwrap().to_string(), "1011");
    let above = ClassifierControl::new(7e-4, TimeGrid::default_classification()).unwrap();
    assert_eq!(classify(&row('b'), &above).unwrap().to_string(), "1000");
}

#[test]
fn large_threshold_hides_genuine_revival() {
    let ctl = ClassifierControl::new(0.6, TimeGrid::default_classification()).unwrap();
    assert_eq!(classify(&row('b'), &ctl).unwrap().to_string(), "0000");
}

#[test]
fn rescaling_preserves_monotonicity_at_matching_threshold() {
    let eps = ClassifierControl::default().revival_threshold;
    for r in table1_scenarios() {
        let trace = compute_trace(&r.scenario, &EngineSettings::default()).unwrap();
        let initial = trace.sets[0];
        let rescaled: Vec<_> = trace
            .sets
            .iter()
            .map(|s| s.rescaled(&initial).unwrap())
            .collect();
        let raw = trace.magnitudes();
        let start = initial.magnitudes();
        for k in 0..4 {
            let series: Vec<f64> = rescaled.iter().map(|s| s.magnitudes()[k]).collect();
            assert_eq!(
                is_nonmonotonic(&series, eps / start[k]),
                is_nonmonotonic(&raw[k], eps),
                "row {} function {k}",
                r.id
            );
        }
    }
}

#[test]
fn rescaling_with_fixed_threshold_lifts_row_b_nonlocal_revival() {
    let eps = ClassifierControl::default().revival_threshold;
    let trace = compute_trace(&row('b'), &EngineSettings::default()).unwrap();
    let initial = trace.sets[0];
    let rescaled: Vec<_> = trace
        .sets
        .iter()
        .map(|s| s.rescaled(&initial).unwrap())
        .collect();
    assert_eq!(partition_of(&trace.sets, eps).to_string(), "1000");
    assert_eq!(partition_of(&rescaled, eps).to_string(), "1011");
}

#[test]
fn oscillation_carrier_does_not_change_partitions() {
    let ctl = past_slowest_echo();
    for r in table1_scenarios() {
        let mut cfg = r.scenario.clone();
        let comps = cfg.freq.components.clone();
        cfg.freq = FrequencySpec::from_eta(comps, 20.0).unwrap();
        assert_eq!(classify(&cfg, &ctl).unwrap(), r.expected, "row {}", r.id);
    }
}

#[test]
fn constant_offsets_do_not_change_partitions() {
    let ctl = ClassifierControl::default();
    for id in ['a', 'b', 'g', 'j', 'k'] {
        let mut cfg = row(id);
        if cfg.phase2 == PhaseProfile::Constant(0.0) {
            cfg.phase2 = PhaseProfile::Constant(0.9);
        }
        if cfg.phase1 == PhaseProfile::Constant(0.0) {
            cfg.phase1 = PhaseProfile::Constant(-1.3);
        }
        let expected = table1_scenarios()
            .into_iter()
            .find(|r| r.id == id)
            .unwrap()
            .expected;
        assert_eq!(classify(&cfg, &ctl).unwrap(), expected, "row {id}");
    }
}
