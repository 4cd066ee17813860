use landscape_cli::config::{ExperimentConfig, ModelSpec, Operation, RenderSpec, Scan2dParams};
use landscape_cli::emit::{
    emit_scan_csv, emit_scan_json, parse_scan_csv, scan_csv_string, Document, Provenance, ScanBody,
};
use landscape_core::testbed::sombrero_loss;
use landscape_core::{scan_2d, Direction, GridSpec, Interval, ParameterVector, Scan2DResult};

fn sombrero_scan(rx: usize, ry: usize) -> (Scan2DResult, u64) {
    let model = sombrero_loss(3, 2.0).unwrap();
    let origin = ParameterVector::new(vec![0.3, -0.2, 0.1]).unwrap();
    let dx = Direction::from_vec(vec![1.0, 0.5, 0.0]).unwrap();
    let dy = Direction::from_vec(vec![0.0, 0.3, 2.0]).unwrap();
    let grid = GridSpec::new(
        Interval::new(-4.0, 3.0).unwrap(),
        Interval::new(-1.0, 5.0).unwrap(),
        rx,
        ry,
    );
    let scan = scan_2d(&model, &origin, &dx, &dy, grid).unwrap();
    (scan, model.eval_count())
}

fn config() -> ExperimentConfig {
    ExperimentConfig {
        model: ModelSpec::Sombrero { dim: 3, nu: 2.0 },
        operation: Operation::Scan2d(Scan2dParams::default()),
        seed: 11,
        out: None,
        formats: vec![landscape_cli::Format::Json],
        render: RenderSpec::default(),
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (scan, evals) = sombrero_scan(7, 5);
    let prov = Provenance::new(&config(), evals).unwrap();
    let path = dir.path().join("scan.json");
    emit_scan_json(&scan, &[], "scan2d", &prov, &path).unwrap();

    let doc: Document<ScanBody> =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.spec_version, landscape_cli::SPEC_VERSION);
    assert_eq!(doc.seed, 11);
    assert_eq!(doc.eval_count, 35);
    assert_eq!(doc.model, ModelSpec::Sombrero { dim: 3, nu: 2.0 });
    assert_eq!(doc.body.values.len(), 7 * 5);
    assert_eq!(doc.body.shape, vec![7, 5]);
    for (a, b) in doc.body.values.iter().zip(&scan.values) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    assert_eq!(doc.body.directions[1].norm, scan.dir_y.norm());
    let back = doc.body.to_2d().unwrap();
    assert_eq!(back, scan);
}

#[test]
fn json_keys_in_stable_order() {
    let (scan, evals) = sombrero_scan(3, 3);
    let prov = Provenance::new(&config(), evals).unwrap();
    let text = landscape_cli::emit::to_json_string(&Document::new(
        "scan2d",
        &prov,
        ScanBody::from_2d(&scan, &[]),
    ));
    let keys: Vec<usize> = [
        "\"spec_version\"",
        "\"kind\"",
        "\"model\"",
        "\"seed\"",
        "\"eval_count\"",
        "\"origin\"",
        "\"directions\"",
        "\"axes\"",
        "\"values\"",
        "\"config\"",
    ]
    .iter()
    .map(|k| text.find(k).unwrap_or_else(|| panic!("{k} missing")))
    .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{keys:?}");
}

#[test]
fn csv_layout_and_reingest() {
    let dir = tempfile::tempdir().unwrap();
    let (scan, _) = sombrero_scan(6, 4);
    let path = dir.path().join("scan.csv");
    emit_scan_csv(&scan, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 6 * 4 + 1);
    assert_eq!(text.lines().next(), Some("t1,t2,value"));

    let rows = parse_scan_csv(&text).unwrap();
    assert_eq!(rows[0][0], scan.ts_x[0]);
    assert_eq!(rows[0][1], scan.ts_y[0]);
    assert_eq!(rows[0][0], -4.0);
    assert_eq!(rows[0][1], -1.0);
    for (k, row) in rows.iter().enumerate() {
        let (i, j) = (k / 4, k % 4);
        assert_eq!(row[0].to_bits(), scan.ts_x[i].to_bits());
        assert_eq!(row[1].to_bits(), scan.ts_y[j].to_bits());
        assert_eq!(row[2].to_bits(), scan.value(i, j).to_bits());
    }
    assert_eq!(scan_csv_string(&scan), text);
}

#[test]
fn config_round_trips() {
    let texts = [
        r#"{"model":{"kind":"sombrero","dim":4},"operation":{"op":"scan2d","range":[-10,10],"res_x":20,"res_y":20}}"#,
        r#"{"model":{"kind":"qaoa","graph":{"source":"random","n_vertices":8,"weights":"integer-set","seed":3},"layers":2},
            "operation":{"op":"hessian","method":"spsa","repetitions":50},"seed":4,"formats":["json","csv"]}"#,
        r#"{"model":{"kind":"qcbm","n_qubits":4,"target":{"source":"bars-and-stripes"},"shots":500},
            "operation":{"op":"optimize","optimizer":"spsa","starts":4},"render":{"colormap":"magma","contours":true}}"#,
        r#"{"model":{"kind":"pauli","n_qubits":2,"hamiltonian":"0.5*ZZ - 0.2*XI"},"operation":{"op":"neb","from":[0,0,0,0,0,0,0,0],"to":[1,1,1,1,1,1,1,1]}}"#,
        r#"{"model":{"kind":"quadratic","curvatures":[1,2]},"operation":{"op":"pca-scan","optimize":{"starts":3}},"out":"somewhere"}"#,
        r#"{"model":{"kind":"constant","dim":2,"value":1.5},"operation":{"op":"eigen-ratio-scan"}}"#,
        r#"{"model":{"kind":"sombrero","dim":4},"operation":{"op":"autoneb","from":[1,0,0,0],"to":[0,0,0,0],"neb":{"cycles":2}}}"#,
        r#"{"model":{"kind":"sombrero","dim":4},"operation":{"op":"scan1d","to":[1,2,3,4],"wrap":false}}"#,
        r#"{"model":{"kind":"sombrero","dim":4},"operation":{"op":"demo","name":"sombrero-pipeline"}}"#,
    ];
    for t in texts {
        let cfg = ExperimentConfig::from_json(t).unwrap();
        let again = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again, "{t}");
        assert_eq!(cfg.to_json(), again.to_json());
    }
}

#[test]
fn config_errors_name_the_field() {
    let e = ExperimentConfig::from_json(r#"{"model":{"kind":"sombrero","dim":4},"operation":{"op":"scan2d","resx":3}}"#)
        .unwrap_err();
    assert!(e.to_string().contains("resx"), "{e}");
    assert_eq!(e.exit_code(), 1);
    let e = ExperimentConfig::from_json(r#"{"operation":{"op":"scan2d"}}"#).unwrap_err();
    assert!(e.to_string().contains("model"), "{e}");
}

#[test]
fn provenance_inlines_files_and_drops_out() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, "n 3\n0 1 1\n1 2 2\n# comment\n0 2 1\n").unwrap();
    let cfg = ExperimentConfig {
        model: ModelSpec::Qaoa {
            graph: landscape_cli::config::GraphSpec::File { path: graph },
            layers: 1,
        },
        operation: Operation::Scan2d(Scan2dParams::default()),
        seed: 0,
        out: Some(dir.path().to_path_buf()),
        formats: vec![landscape_cli::Format::Json],
        render: RenderSpec::default(),
    };
    let p = cfg.provenance().unwrap();
    assert!(p.out.is_none());
    match &p.model {
        ModelSpec::Qaoa {
            graph: landscape_cli::config::GraphSpec::Inline { graph },
            ..
        } => assert_eq!(graph.edges().len(), 3),
        other => panic!("{other:?}"),
    }
    // The inlined descriptor builds the same loss.
    let a = cfg.model.build(0).unwrap();
    let b = p.model.build(0).unwrap();
    assert_eq!(a.evaluate_slice(&[0.3, 0.7]).unwrap(), b.evaluate_slice(&[0.3, 0.7]).unwrap());
}

mod roundtrip {
    use landscape_cli::config::{
        ExperimentConfig, Format, ModelSpec, Operation, OptimizeParams, OptimizerKind, RenderSpec,
        Scan2dParams,
    };
    use proptest::prelude::*;

    fn finite() -> impl Strategy<Value = f64> {
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
    }

    fn model() -> impl Strategy<Value = ModelSpec> {
        prop_oneof![
            (1usize..64, finite()).prop_map(|(dim, nu)| ModelSpec::Sombrero { dim, nu }),
            prop::collection::vec(finite(), 1..6).prop_map(|curvatures| ModelSpec::Quadratic { curvatures }),
            (1usize..64, finite()).prop_map(|(dim, value)| ModelSpec::Constant { dim, value }),
        ]
    }

    fn operation() -> impl Strategy<Value = Operation> {
        prop_oneof![
            (
                prop::option::of(prop::collection::vec(finite(), 1..5)),
                finite(),
                prop::option::of([finite(), finite()]),
                2usize..500,
                2usize..500,
            )
                .prop_map(|(origin, norm, range, res_x, res_y)| {
                    Operation::Scan2d(Scan2dParams {
                        origin,
                        norm,
                        range,
                        res_x,
                        res_y,
                        ..Scan2dParams::default()
                    })
                }),
            (any::<bool>(), 0usize..1000, finite(), [finite(), finite()]).prop_map(
                |(spsa, iterations, learning_rate, init_range)| {
                    Operation::Optimize(OptimizeParams {
                        optimizer: if spsa { OptimizerKind::Spsa } else { OptimizerKind::GradientDescent },
                        iterations,
                        learning_rate,
                        init_range,
                        ..OptimizeParams::default()
                    })
                }
            ),
        ]
    }

    proptest! {
        #[test]
        fn config_survives_its_file_form(
            model in model(),
            operation in operation(),
            seed in any::<u64>(),
            formats in prop::sample::subsequence(vec![Format::Json, Format::Csv, Format::Svg], 1..=3),
            contours in any::<bool>(),
            width in 1u32..4000,
        ) {
            let cfg = ExperimentConfig {
                model,
                operation,
                seed,
                out: None,
                formats,
                render: RenderSpec { contours, width, ..RenderSpec::default() },
            };
            let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
            prop_assert_eq!(&back, &cfg);
        }
    }
}
