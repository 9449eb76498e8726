//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across frames, masses, rules, circuits and
/// the classifier. Variants carry enough structure for callers to match on;
/// the CLI mostly just prints them.
#[derive(Debug, Error)]
pub enum Error {
    // ---- frames and mass functions ----
    #[error("frame must contain at least one element")]
    EmptyFrame,
    #[error("frame supports at most {max} elements, got {got}")]
    FrameTooLarge { got: usize, max: usize },
    #[error(
        "invalid frame element label {0:?} (labels must be non-empty and must not contain commas)"
    )]
    InvalidElementLabel(String),
    #[error("frame element `{0}` appears more than once")]
    DuplicateElement(String),
    #[error("unknown frame element `{0}`")]
    UnknownElement(String),
    #[error("subset label `{0}` names the same element twice")]
    DuplicateSubsetElement(String),
    #[error("mass function over {elements} elements needs {expected} entries, got {got}")]
    MassLength {
        elements: usize,
        expected: usize,
        got: usize,
    },
    #[error("mass for subset index {index} is negative ({value})")]
    NegativeMass { index: usize, value: f64 },
    #[error("mass entries sum to {sum:.12}, expected 1 within {tolerance:e}")]
    MassSum { sum: f64, tolerance: f64 },
    #[error("mass functions are defined over different frames")]
    FrameMismatch,
    #[error("combination needs at least {min} mass functions, got {got}")]
    TooFewSources { got: usize, min: usize },
    #[error("exhaustive combination would enumerate 2^{bits} tuples, over the 2^{cap} cap")]
    EnumerationTooLarge { bits: usize, cap: usize },
    #[error("possibility value {value} for element index {index} is outside [0, 1]")]
    PossibilityRange { index: usize, value: f64 },
    #[error("possibility assignment must cover at least one element")]
    EmptyPossibility,

    // ---- rule DSL ----
    #[error("rule syntax error at byte {position}: {message}")]
    RuleSyntax { position: usize, message: String },
    #[error("rule references `{0}` but no source with that name was provided")]
    UnboundVariable(String),
    #[error("source name `{0}` was provided more than once")]
    DuplicateSource(String),

    // ---- circuits and simulation ----
    #[error("{gate} gate touches qubit {qubit}, but the circuit has width {width}")]
    QubitOutOfRange {
        gate: &'static str,
        qubit: usize,
        width: usize,
    },
    #[error("{gate} gate uses qubit {qubit} more than once")]
    OverlappingQubits { gate: &'static str, qubit: usize },
    #[error("{gate} gate needs at least one control qubit")]
    MissingControls { gate: &'static str },
    #[error("circuit width {width} exceeds the simulator cap of {cap} qubits")]
    WidthOverCap { width: usize, cap: usize },
    #[error("output register {start}..{end} does not fit a width-{width} circuit")]
    BadOutputRegister {
        start: usize,
        end: usize,
        width: usize,
    },
    #[error("preparation for source {index} has width {got}, expected {expected}")]
    PreparationWidth {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("expected {expected} preparation circuits (one per rule variable), got {got}")]
    PreparationCount { expected: usize, got: usize },
    #[error("shot sampling needs a distribution summing to 1 within {tolerance:e}; got {sum:.12}")]
    InvalidDistribution { sum: f64, tolerance: f64 },
    #[error("shot count must be at least 1")]
    ZeroShots,

    // ---- classifier ----
    #[error("mixture needs at least one component")]
    ZeroComponents,
    #[error("gaussian mixture fit needs at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("expected {expected} attribute values, got {got}")]
    AttributeCount { expected: usize, got: usize },
    #[error("class label `{0}` does not appear in the model frame")]
    UnknownClass(String),
    #[error("fused mass places all weight on the empty set; no decision is possible")]
    TotalConflict { mass: Vec<f64> },
    #[error("dataset row {row}: {message}")]
    Dataset { row: usize, message: String },
    #[error("dataset needs at least one attribute column plus a label column")]
    DatasetShape,
    #[error("training fraction {fraction} leaves class `{class}` with {got} samples, need {need}")]
    SplitTooSmall {
        fraction: f64,
        class: String,
        got: usize,
        need: usize,
    },
    #[error("evaluation needs at least one fraction and one repeat")]
    EmptyEvaluation,
    #[error("fraction {0} is outside (0, 1]")]
    FractionRange(f64),

    // ---- files ----
    #[error("malformed mass file: {0}")]
    MassFile(String),
    #[error("malformed model file: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
