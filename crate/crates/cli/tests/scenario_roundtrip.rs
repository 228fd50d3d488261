use mempart_cli::ScenarioFile;
use mempart_core::engine::EngineMode;
use mempart_core::{GaussianComponent, PhaseProfile};
use num_complex::Complex64;
use proptest::prelude::*;

fn phase() -> impl Strategy<Value = PhaseProfile> {
    prop_oneof![
        (-10.0..10.0f64).prop_map(PhaseProfile::Constant),
        (-40.0..40.0f64).prop_map(PhaseProfile::Zigzag),
        (-10.0..10.0f64).prop_map(PhaseProfile::Parabola),
    ]
}

fn components() -> impl Strategy<Value = Vec<GaussianComponent>> {
    prop::collection::vec((0.1..1.0f64, -1.0..=1.0f64), 1..4).prop_map(|raw| {
        let total: f64 = raw.iter().map(|r| r.0).sum();
        raw.into_iter()
            .map(|(w, k)| GaussianComponent {
                weight: w / total,
                k,
            })
            .collect()
    })
}

fn amplitudes() -> impl Strategy<Value = [Complex64; 4]> {
    prop::collection::vec(-1.0..1.0f64, 8)
        .prop_filter("non-zero", |v| v.iter().any(|x| x.abs() > 0.1))
        .prop_map(|v| {
            let z: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1]));
            let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            z.map(|c| c / n)
        })
}

prop_compose! {
    fn scenario()(
        eta in -30.0..30.0f64,
        components in components(),
        phase1 in phase(),
        phase2 in phase(),
        amplitudes in amplitudes(),
        tau_max in 0.5..30.0f64,
        step in 0.005..0.5f64,
        threshold in 1e-6..1.0f64,
        mode in prop_oneof![
            Just(EngineMode::Analytic),
            Just(EngineMode::Oracle),
            Just(EngineMode::CrossCheck)
        ],
        max_terms in 1u32..200,
        nodes in 8usize..400,
        nodes_2d in 8usize..400,
    ) -> ScenarioFile {
        ScenarioFile {
            eta, components, phase1, phase2, amplitudes, tau_max, step, threshold,
            mode, max_terms, nodes, nodes_2d,
        }
    }
}

proptest! {
    #[test]
    fn serialized_files_parse_back_identically(f in scenario()) {
        prop_assume!(f.config(None, None).is_ok());
        let text = f.to_text();
        let parsed = ScenarioFile::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&parsed, &f);
        prop_assert_eq!(parsed.to_text(), text);
        prop_assert_eq!(parsed.config(None, None).unwrap(), f.config(None, None).unwrap());
    }

    #[test]
    fn arbitrary_text_never_panics(lines in prop::collection::vec("[a-z0-9._ =#,-]{0,30}", 0..12)) {
        let text = lines.join("\n");
        if let Err(e) = ScenarioFile::parse(&text) {
            prop_assert!(e.line >= 1 && e.column >= 1);
            prop_assert!(e.line <= lines.len() + 1);
        }
    }

    #[test]
    fn unknown_keys_are_rejected(f in scenario(), key in "[a-z]{1,8}(\\.[a-z_]{1,8}){0,2}") {
        prop_assume!(f.config(None, None).is_ok());
        let known = f.to_text().lines().any(|l| l.starts_with(&format!("{key} ")));
        prop_assume!(!known && !key.starts_with("phase") && key != "freq.eta");
        let text = format!("{}{key} = 1\n", f.to_text());
        let e = ScenarioFile::parse(&text).unwrap_err();
        prop_assert_eq!(e.line, text.lines().count());
    }
}
