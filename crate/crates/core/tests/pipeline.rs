//! Load, relabel, select, evaluate: the library pipeline on synthetic records.

use std::io::Write;

use nidsbench::batch::{BatchLearner, NaiveBayesLearner, TreeLearner};
use nidsbench::dataset::{kdd99_schema, load_dataset, read_kdd_records, write_kdd_records, Dataset};
use nidsbench::eval::{cross_validate, prequential_run};
use nidsbench::preprocess::{apply_variant, select_attributes, AttackCategoryMap, PreprocessVariant, SelectionSpec, DEFAULT_SELECTION};
use nidsbench::stream::{HoeffdingConfig, HoeffdingTree, OzaBoost, OzaBoostConfig, StreamModel};
use nidsbench::{Error, Execution, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LABELS: [&str; 5] = ["normal", "smurf", "portsweep", "warezclient", "rootkit"];

fn records(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for _ in 0..n {
        let label = [0, 0, 0, 1, 1, 2, 3, 4][rng.gen_range(0..8)];
        let mut f: Vec<String> = (0..41).map(|_| rng.gen_range(0..4).to_string()).collect();
        f[1] = ["tcp", "udp", "icmp"][rng.gen_range(0..3)].into();
        f[2] = ["http", "ftp_data", "private"][label % 3].into();
        f[3] = "SF".into();
        f[4] = (label * 400 + rng.gen_range(0..150)).to_string();
        f[28] = format!("{:.2}", rng.gen_range(0.0..1.0));
        text.push_str(&format!("{},{}.\n", f.join(","), LABELS[label]));
    }
    text
}

fn raw(n: usize, seed: u64) -> Dataset {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(records(n, seed).as_bytes()).unwrap();
    load_dataset(file.path(), kdd99_schema()).unwrap()
}

fn prepared(n: usize, variant: PreprocessVariant) -> Dataset {
    let ds = apply_variant(&raw(n, 1), variant, &AttackCategoryMap::kdd99()).unwrap();
    select_attributes(&ds, &SelectionSpec::new(DEFAULT_SELECTION.to_vec()).unwrap()).unwrap()
}

#[test]
fn written_records_read_back_identically() {
    let ds = raw(300, 2);
    let mut buf = Vec::new();
    write_kdd_records(&ds, &mut buf).unwrap();
    let again = read_kdd_records(buf.as_slice(), kdd99_schema(), "memory".as_ref()).unwrap();
    assert_eq!(again.len(), ds.len());
    for (a, b) in ds.instances().iter().zip(again.instances()) {
        assert_eq!(a.values, b.values);
        assert_eq!(ds.schema().class_labels()[a.label], again.schema().class_labels()[b.label]);
    }
}

#[test]
fn selection_and_variant_shape_the_data() {
    let ds = prepared(500, PreprocessVariant::V1);
    assert_eq!(ds.schema().len(), 12);
    assert_eq!(ds.schema().attribute(1).name, "protocol_type");
    assert_eq!(ds.schema().class_labels(), ["normal", "dos", "probe", "u2r", "r2l"]);
    let counts = ds.class_counts();
    assert_eq!(counts.iter().sum::<usize>(), 500);
    assert!(counts.iter().all(|&c| c > 0), "{counts:?}");
    assert!(ds.provenance().iter().any(|p| p.contains("v1")));
}

#[test]
fn cross_validation_is_the_same_sequential_and_parallel() -> Result<()> {
    let ds = prepared(1200, PreprocessVariant::V1);
    type Factory = fn() -> Result<Box<dyn BatchLearner>>;
    let factories: [Factory; 2] = [|| Ok(Box::new(NaiveBayesLearner)), || Ok(Box::new(TreeLearner::default()))];
    for factory in factories {
        let seq = cross_validate(&ds, factory, 10, 1, Execution::Sequential)?;
        let par = cross_validate(&ds, factory, 10, 1, Execution::Parallel)?;
        assert_eq!(seq.confusion, par.confusion);
        assert_eq!(seq.fold_accuracies, par.fold_accuracies);
        assert!(seq.accuracy > 0.95, "{}", seq.accuracy);
    }
    Ok(())
}

#[test]
fn ensemble_stream_run_is_reproducible() -> Result<()> {
    let ds = prepared(3000, PreprocessVariant::V2);
    let run = || -> Result<_> {
        let schema = ds.schema().clone();
        let mut ens = OzaBoost::new(2, &OzaBoostConfig::default(), || {
            Ok(Box::new(HoeffdingTree::new(&schema, HoeffdingConfig::default())?) as Box<dyn StreamModel>)
        })?;
        prequential_run(ds.instances(), &mut ens, 0.95, ds.schema().class_labels())
    };
    let (a, b) = (run()?, run()?);
    assert_eq!(a.to_csv(1), b.to_csv(1));
    assert_eq!(a.len(), 3000);
    assert!(a.cumulative_accuracy() > 0.9, "{}", a.cumulative_accuracy());
    Ok(())
}

#[test]
fn unknown_attack_label_is_rejected_under_v1() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    let record = records(1, 3);
    let line = record.rsplit_once(',').map(|(head, _)| format!("{head},mailbomb.\n")).unwrap();
    file.write_all(line.as_bytes()).unwrap();
    let ds = load_dataset(file.path(), kdd99_schema()).unwrap();
    let err = apply_variant(&ds, PreprocessVariant::V1, &AttackCategoryMap::kdd99()).unwrap_err();
    assert!(matches!(err, Error::UnknownLabel(_)));
    assert!(apply_variant(&ds, PreprocessVariant::V3, &AttackCategoryMap::kdd99()).is_ok());
}
