//! Train/test evaluation over stratified splits.
//!
//! For every requested training fraction the dataset is split per class —
//! each class contributes `round(fraction · class_size)` rows (at least 1,
//! at most all) to the training set, the rest to the test set; a fraction of
//! exactly 1 trains and tests on the full dataset. Splits, and the shot
//! seeds used inside them, are derived from one master seed through a
//! keyed mixing chain, so a whole evaluation is reproducible from the
//! master seed alone and no two (fraction, repeat) cells share a stream.
//!
//! A test point whose fused mass collapses entirely onto the empty set has
//! no pignistic decision; it is counted as misclassified and logged.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classifier::{Backend, ClassifierModel, Dataset};
use crate::error::{Error, Result};

/// Observation mode for a whole evaluation; per-point seeds are derived
/// internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalBackend {
    Exact,
    Shots { shots: u64 },
}

/// Evaluation controls.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Training fractions to sweep, each in (0, 1].
    pub fractions: Vec<f64>,
    /// Independent splits per fraction.
    pub repeats: usize,
    /// Mixture size per (attribute, class) fit.
    pub components: usize,
    pub backend: EvalBackend,
    /// Master seed; every split and every shot draw derives from it.
    pub seed: u64,
}

/// One (fraction, repeat) cell: the split seed it used and the accuracy it
/// reached.
#[derive(Debug, Clone)]
pub struct RepeatResult {
    pub fraction: f64,
    pub repeat: usize,
    pub seed: u64,
    pub accuracy: f64,
}

/// Accuracy distribution across one fraction's repeats (sample standard
/// deviation; 0 for a single repeat).
#[derive(Debug, Clone)]
pub struct FractionSummary {
    pub fraction: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub repeats: usize,
}

/// Everything an evaluation produced.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub runs: Vec<RepeatResult>,
    pub summaries: Vec<FractionSummary>,
}

impl EvalReport {
    /// Renders the report as CSV: one block of per-repeat rows, a blank
    /// line, then one summary row per fraction. Fixed six-decimal floats
    /// keep repeated runs byte-comparable.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,repeat,seed,accuracy\n");
        for run in &self.runs {
            out.push_str(&format!(
                "{:.6},{},{},{:.6}\n",
                run.fraction, run.repeat, run.seed, run.accuracy
            ));
        }
        out.push('\n');
        out.push_str("fraction,mean,std,repeats\n");
        for summary in &self.summaries {
            out.push_str(&format!(
                "{:.6},{:.6},{:.6},{}\n",
                summary.fraction, summary.mean, summary.std_dev, summary.repeats
            ));
        }
        out
    }
}

/// Mixes tag words into a master seed, giving independent derived seeds for
/// independent purposes. The chain applies a bijective 64-bit finalizer
/// between words, so distinct tag sequences give unrelated outputs.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = mix(master);
    for &tag in tags {
        state = mix(state ^ mix(tag.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    state
}

/// 64-bit finalizer (splitmix64's output stage): bijective, avalanching.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const TAG_SPLIT: u64 = 1;
const TAG_SHOTS: u64 = 2;

/// Stratified train/test split. Every class contributes
/// `round(fraction · class_size)` rows — clamped to at least 1 and at most
/// all — to the training side; the remainder tests. A fraction of exactly 1
/// returns the full row set on both sides. Row order within each side
/// follows the seeded per-class shuffles, so one seed fixes the split
/// completely.
pub fn stratified_split(
    data: &Dataset,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::FractionRange(fraction));
    }
    if fraction == 1.0 {
        let all: Vec<usize> = (0..data.len()).collect();
        return Ok((all.clone(), all));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in 0..data.classes().len() {
        let mut rows = data.class_rows(class);
        let take = ((fraction * rows.len() as f64).round() as usize).clamp(1, rows.len());
        rows.shuffle(&mut rng);
        train.extend_from_slice(&rows[..take]);
        test.extend_from_slice(&rows[take..]);
    }
    Ok((train, test))
}

/// Runs the full sweep: for every fraction and repeat, split, train,
/// classify the test side, and aggregate accuracies.
pub fn evaluate(data: &Dataset, options: &EvalOptions) -> Result<EvalReport> {
    if options.fractions.is_empty() || options.repeats == 0 {
        return Err(Error::EmptyEvaluation);
    }
    for &fraction in &options.fractions {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::FractionRange(fraction));
        }
        // a fraction must leave every class enough training rows to fit its
        // mixtures; this is a property of the sizes, not of any draw
        for (class, label) in data.classes().iter().enumerate() {
            let size = data.class_rows(class).len();
            let take = if fraction == 1.0 {
                size
            } else {
                ((fraction * size as f64).round() as usize).clamp(1, size)
            };
            if take < options.components {
                return Err(Error::SplitTooSmall {
                    fraction,
                    class: label.clone(),
                    got: take,
                    need: options.components,
                });
            }
        }
    }

    let mut runs = Vec::with_capacity(options.fractions.len() * options.repeats);
    let mut summaries = Vec::with_capacity(options.fractions.len());
    for (fraction_index, &fraction) in options.fractions.iter().enumerate() {
        let mut accuracies = Vec::with_capacity(options.repeats);
        for repeat in 0..options.repeats {
            let split_seed = derive_seed(
                options.seed,
                &[TAG_SPLIT, fraction_index as u64, repeat as u64],
            );
            let (train_rows, test_rows) = stratified_split(data, fraction, split_seed)?;
            let model = ClassifierModel::train(&data.select(&train_rows), options.components)?;
            let accuracy = run_split(data, &model, &test_rows, options.backend, split_seed)?;
            accuracies.push(accuracy);
            runs.push(RepeatResult {
                fraction,
                repeat,
                seed: split_seed,
                accuracy,
            });
        }
        summaries.push(summarize(fraction, &accuracies));
    }
    Ok(EvalReport { runs, summaries })
}

fn run_split(
    data: &Dataset,
    model: &ClassifierModel,
    test_rows: &[usize],
    backend: EvalBackend,
    split_seed: u64,
) -> Result<f64> {
    if test_rows.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut correct = 0usize;
    for (position, &row) in test_rows.iter().enumerate() {
        let (point, truth) = data.row(row);
        let point_backend = match backend {
            EvalBackend::Exact => Backend::Exact,
            EvalBackend::Shots { shots } => Backend::Shots {
                shots,
                seed: derive_seed(split_seed, &[TAG_SHOTS, position as u64]),
            },
        };
        match model.classify(point, point_backend) {
            Ok(outcome) => {
                if outcome.class_index == truth {
                    correct += 1;
                }
            }
            // all fused mass on the empty set: no decision exists, so the
            // point scores as a miss
            Err(Error::TotalConflict { .. }) => {
                log::warn!("test row {row}: fused mass is pure conflict; counted incorrect");
            }
            Err(other) => return Err(other),
        }
    }
    Ok(correct as f64 / test_rows.len() as f64)
}

fn summarize(fraction: f64, accuracies: &[f64]) -> FractionSummary {
    let n = accuracies.len();
    let mean = accuracies.iter().sum::<f64>() / n as f64;
    let std_dev = if n > 1 {
        let ss: f64 = accuracies.iter().map(|a| (a - mean) * (a - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    FractionSummary {
        fraction,
        mean,
        std_dev,
        repeats: n,
    }
}
