use std::fs;
use std::path::Path;

use ecoc::harness::commands::{evaluate_bundle, train_bundle};
use ecoc::harness::ingest::{encode_pgm, GrayImage, PIXEL_SCALE};
use ecoc::harness::{
    load_csv, load_image_dir, parse_csv, parse_pgm, CodeGenerator, CodeMethod, CodeSource, DatasetSource,
    ExperimentConfig, ModelBundle, SyntheticSpec,
};
use ecoc::network::{costs, TrainConfig};
use ecoc::evaluator::encode_labels;
use proptest::prelude::*;

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        dataset: DatasetSource::Synthetic(SyntheticSpec {
            class_count: 6,
            dim: 10,
            samples_per_class: 5,
            ..SyntheticSpec::default()
        }),
        pca_components: Some(8),
        code: CodeSource::Generator(CodeGenerator { length: Some(15), ..CodeGenerator::new(CodeMethod::Bch) }),
        train: TrainConfig { epochs: 20, hidden_dim: 8, ..TrainConfig::default() },
        ..ExperimentConfig::default()
    }
}

fn write_image(dir: &Path, name: &str, width: usize, height: usize, fill: u8) {
    let image = GrayImage { width, height, pixels: (0..width * height).map(|i| fill.wrapping_add(i as u8)).collect() };
    fs::write(dir.join(name), encode_pgm(&image)).unwrap();
}

#[test]
fn csv_file_loads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    fs::write(&path, "f0,f1,label\n0.5,1,0\n2,-3e-1,1\n1,1,2\n").unwrap();
    let data = load_csv(&path).unwrap();
    assert_eq!((data.len(), data.dim(), data.class_count()), (3, 2, 3));
    assert_eq!(data.features()[1], vec![2.0, -0.3]);
    let missing = load_csv(&dir.path().join("none.csv")).unwrap_err();
    assert_eq!(missing.category(), "io-error");
}

#[test]
fn csv_errors_name_the_line() {
    let err = parse_csv("f0,label\n1,0\nx,1\n").unwrap_err();
    assert_eq!(err.category(), "parse-error");
    assert!(err.to_string().contains('3'), "{err}");
    assert_eq!(parse_csv("f0,label\n1,0\n1,2\n").unwrap_err().category(), "parse-error");
    assert_eq!(parse_csv("f0,label\nNaN,0\n").unwrap_err().category(), "parse-error");
}

#[test]
fn image_directory_loads_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    for (class, fill) in [("b_second", 100u8), ("a_first", 10)] {
        let sub = dir.path().join(class);
        fs::create_dir(&sub).unwrap();
        write_image(&sub, "1.pgm", 4, 3, fill);
        write_image(&sub, "2.pgm", 4, 3, fill + 1);
    }
    let data = load_image_dir(dir.path()).unwrap();
    assert_eq!((data.len(), data.dim(), data.class_count()), (4, 12, 2));
    assert_eq!(data.labels(), [0, 0, 1, 1]);
    assert_eq!(data.features()[0][0], 10.0 / PIXEL_SCALE);

    write_image(&dir.path().join("a_first"), "3.pgm", 3, 4, 0);
    let err = load_image_dir(dir.path()).unwrap_err();
    assert_eq!(err.category(), "inconsistent-images");
    assert!(err.to_string().contains("3.pgm"), "{err}");

    fs::write(dir.path().join("a_first").join("3.pgm"), b"P2\n1 1\n255\n0\n").unwrap();
    let err = load_image_dir(dir.path()).unwrap_err();
    assert!(err.to_string().contains("3.pgm"), "{err}");
}

#[test]
fn bundle_round_trip_preserves_costs() {
    let config = small_config();
    let (bundle, trace) = train_bundle(&config).unwrap();
    assert_eq!(trace.rows.len(), 20);
    let decoded = ModelBundle::decode(&bundle.encode()).unwrap();
    assert_eq!(decoded, bundle);

    let data = config.load_dataset().unwrap();
    let inputs: Vec<Vec<f64>> = data.features().iter().map(|x| decoded.prepare(x).unwrap()).collect();
    let targets = encode_labels(&decoded.matrix, data.labels()).unwrap();
    let (e, e_bar) = costs(&decoded.network, &inputs, &targets).unwrap();
    let last = trace.last().unwrap();
    assert!((e - last.standard_cost).abs() <= 1e-10, "{e} vs {}", last.standard_cost);
    assert!((e_bar - last.weighted_cost).abs() <= 1e-10);

    let outcome = evaluate_bundle(&decoded, &data, 25.0).unwrap();
    assert_eq!(outcome, evaluate_bundle(&bundle, &data, 25.0).unwrap());
    assert_eq!(outcome.metrics.total, data.len());
}

#[test]
fn training_is_deterministic() {
    let a = train_bundle(&small_config()).unwrap();
    let b = train_bundle(&small_config()).unwrap();
    assert_eq!(a.0.encode(), b.0.encode());
    assert_eq!(a.1.to_csv(), b.1.to_csv());
}

#[test]
fn damaged_bundles_are_rejected() {
    let bytes = train_bundle(&small_config()).unwrap().0.encode();
    for cut in [0, 4, 8, bytes.len() / 2, bytes.len() - 1] {
        assert!(ModelBundle::decode(&bytes[..cut]).is_err());
    }
    let mut extra = bytes.clone();
    extra.push(0);
    assert!(ModelBundle::decode(&extra).is_err());
    let mut wrong_magic = bytes;
    wrong_magic[0] ^= 1;
    assert!(ModelBundle::decode(&wrong_magic).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parsers_are_total(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_pgm(&bytes);
        let _ = ModelBundle::decode(&bytes);
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_csv(&text);
        let _ = text.parse::<ecoc::codebook::CodeMatrix>();
        let _ = ExperimentConfig::from_json(&text);
    }

    #[test]
    fn pgm_round_trip(width in 1usize..8, height in 1usize..8, seed in any::<u8>()) {
        let image = GrayImage { width, height, pixels: (0..width * height).map(|i| seed.wrapping_mul(i as u8)).collect() };
        prop_assert_eq!(parse_pgm(&encode_pgm(&image)).unwrap(), image);
    }
}
