//! Benchmarks for the hot paths: classical combination, circuit
//! simulation, shot sampling, and classifier training/inference.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qdst::circuit::{compile_rule_circuit, prepare_tree, sample};
use qdst::classifier::{fit_gmm, ClassifierModel, Dataset, EmOptions};
use qdst::dst::{combine_conjunctive, combine_rule, conjunctive_fold, Frame, MassFunction};
use qdst::rule::{lower, RuleExpr};
use qdst::Backend;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("e{i}")).collect::<Vec<_>>()).unwrap()
}

fn random_mass(rng: &mut ChaCha8Rng, frame: &Frame) -> MassFunction {
    let mut values: Vec<f64> = (0..frame.num_subsets())
        .map(|_| rng.gen_range(0.0..1.0))
        .collect();
    let sum: f64 = values.iter().sum();
    for value in &mut values {
        *value /= sum;
    }
    let correction = 1.0 - values.iter().sum::<f64>();
    values[0] += correction;
    MassFunction::new(frame.clone(), values).unwrap()
}

/// A seeded two-cluster-per-class dataset shaped like a small real table.
fn synthetic_dataset(attributes: usize, classes: usize, rows_per_class: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe7c);
    let mut csv = String::new();
    for a in 0..attributes {
        csv.push_str(&format!("f{a},"));
    }
    csv.push_str("label\n");
    for class in 0..classes {
        for row in 0..rows_per_class {
            for a in 0..attributes {
                let center = 6.0 * class as f64 + a as f64 + if row % 2 == 0 { 0.0 } else { 1.5 };
                csv.push_str(&format!("{:.4},", center + rng.gen_range(-1.0..1.0)));
            }
            csv.push_str(&format!("c{class}\n"));
        }
    }
    Dataset::from_csv_reader(csv.as_bytes()).unwrap()
}

fn bench_combination(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let frame3 = frame(3);
    let sources: Vec<MassFunction> = (0..4).map(|_| random_mass(&mut rng, &frame3)).collect();
    let refs: Vec<&MassFunction> = sources.iter().collect();

    let mut group = c.benchmark_group("combine");
    group.bench_function("conjunctive_4_sources_3_elements", |b| {
        b.iter(|| combine_conjunctive(black_box(&refs)).unwrap())
    });
    group.bench_function("conjunctive_fold_4_sources_3_elements", |b| {
        b.iter(|| conjunctive_fold(black_box(&refs)).unwrap())
    });
    let expr = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
    let named: Vec<(String, MassFunction)> = sources[..3]
        .iter()
        .enumerate()
        .map(|(i, mass)| (format!("m{}", i + 1), mass.clone()))
        .collect();
    group.bench_function("customized_rule_3_sources_3_elements", |b| {
        b.iter(|| combine_rule(black_box(&expr), black_box(&named)).unwrap())
    });
    group.finish();
}

fn bench_simulation(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let frame3 = frame(3);
    let expr = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
    let plan = lower(&expr);
    let preparations: Vec<_> = (0..3)
        .map(|_| prepare_tree(&random_mass(&mut rng, &frame3)))
        .collect();
    // 6 registers × 3 elements = 18 qubits
    let circuit = compile_rule_circuit(&plan, 3, &preparations).unwrap();

    let mut group = c.benchmark_group("simulate");
    group.sample_size(20);
    group.bench_function("customized_rule_18_qubits", |b| {
        b.iter(|| black_box(&circuit).output_distribution().unwrap())
    });
    let mass = random_mass(&mut rng, &frame3);
    group.bench_function("prepare_tree_3_qubits", |b| {
        b.iter(|| prepare_tree(black_box(&mass)).simulate().unwrap())
    });
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let distribution = [0.647, 0.143, 0.185, 0.025];
    c.bench_function("sample_1024_shots_4_categories", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            sample(black_box(&distribution), 1024, seed).unwrap()
        })
    });
}

fn bench_classifier(c: &mut Criterion) {
    let data = synthetic_dataset(4, 3, 50);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let column: Vec<f64> = (0..50).map(|_| rng.gen_range(-1.0..1.0)).collect();

    let mut group = c.benchmark_group("classifier");
    group.sample_size(20);
    group.bench_function("fit_gmm_3_components_50_samples", |b| {
        b.iter(|| fit_gmm(black_box(&column), 3, EmOptions::default()).unwrap())
    });
    group.bench_function("train_4_attributes_3_classes", |b| {
        b.iter(|| ClassifierModel::train(black_box(&data), 3).unwrap())
    });
    let model = ClassifierModel::train(&data, 3).unwrap();
    let point = data.samples()[0].clone();
    group.bench_function("classify_exact_15_qubits", |b| {
        b.iter(|| model.classify(black_box(&point), Backend::Exact).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_combination,
    bench_simulation,
    bench_sampling,
    bench_classifier
);
criterion_main!(benches);
