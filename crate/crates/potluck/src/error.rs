//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // -- simplex geometry ---------------------------------------------------
    #[error("{kind} coordinate {index} = {value} is outside [0, 1]")]
    CoordOutOfRange {
        kind: &'static str,
        index: usize,
        value: f64,
    },
    #[error("weights sum to {sum}, expected 1 within {tol}")]
    MassNotOne { sum: f64, tol: f64 },
    #[error("coordinate sum {sum} exceeds 1")]
    CoordSumExceedsOne { sum: f64 },
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("player index {index} out of range: system has players 0..={d}")]
    PlayerOutOfRange { index: usize, d: usize },
    #[error("step index must be >= 1")]
    ZeroStep,
    #[error("cumulative weight must be positive, got {sum}")]
    NonPositiveCumWeight { sum: f64 },
    #[error("weight must be nonnegative, got {value} at step {step}")]
    NegativeWeight { value: f64, step: u64 },

    // -- expressions --------------------------------------------------------
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("reward {player}: {source}")]
    RewardEval {
        player: usize,
        #[source]
        source: EvalError,
    },

    // -- reward system / Q* grid --------------------------------------------
    #[error("reward system for d = {d} needs {} expressions, got {got}", d + 1)]
    RewardCount { d: usize, got: usize },
    #[error("grid resolution {resolution} must lie in (0, 1)")]
    BadResolution { resolution: f64 },
    #[error("dimension d = {d} exceeds the grid search guard (d <= 6)")]
    DimensionTooLarge { d: usize },
    #[error("simplex grid would hold ~{points:.3e} points (> 1e8); coarsen the resolution")]
    GridTooLarge { points: f64 },

    // -- potential ----------------------------------------------------------
    #[error("potential construction is only supported for d = 1 (got d = {d}); use the integrability check for d >= 2")]
    PotentialUnsupportedDim { d: usize },
    #[error("potential table needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("finite-difference step {h} cannot stay inside the simplex at coordinate {coord}")]
    StepLeavesSimplex { h: f64, coord: usize },
    #[error("integrability check needs d >= 2, got d = {d}")]
    IntegrabilityNeedsD2 { d: usize },
    #[error("potential evaluated for d = {expected}, point has d = {got}")]
    PotentialDimMismatch { expected: usize, got: usize },

    // -- strategies ---------------------------------------------------------
    #[error("sequence strategy exhausted: step {step} requested, only {len} choices supplied")]
    SequenceExhausted { step: u64, len: usize },

    // -- engine -------------------------------------------------------------
    #[error("horizon must be >= 1")]
    ZeroHorizon,
    #[error("record stride must be >= 1")]
    ZeroStride,
    #[error("step {step}, player {player}: {source}")]
    RewardEvalAtStep {
        step: u64,
        player: usize,
        #[source]
        source: EvalError,
    },
    #[error("custom weight list holds {len} entries, horizon needs {needed}")]
    WeightsExhausted { needed: u64, len: usize },
    #[error("weighted run with zero initial weight requires an explicit x0")]
    WeightedNeedsX0,
    #[error("weight sequence failed validation ({failed}); pass --force to run anyway")]
    WeightsRejected { failed: String },
    #[error("weight validation needs horizon >= 100, got {horizon}")]
    ValidationHorizonTooShort { horizon: u64 },

    // -- analysis -----------------------------------------------------------
    #[error("series must be nonempty")]
    EmptySeries,
    #[error("series lengths differ: a has {a_len}, b has {b_len}")]
    SeriesLengthMismatch { a_len: usize, b_len: usize },
    #[error("b[{index}] = {value} must be positive")]
    NonPositiveDenominator { index: usize, value: f64 },
    #[error("b must be nondecreasing: b[{index}] = {value} < b[{}] = {prev}", index - 1)]
    DecreasingDenominator { index: usize, value: f64, prev: f64 },
    #[error("diagnostic needs a series of length >= {min}, got {got}")]
    SeriesTooShort { min: usize, got: usize },
    #[error("tail fraction {fraction} must lie in (0, 1]")]
    BadTailFraction { fraction: f64 },
    #[error("tail selection is empty")]
    EmptyTail,
    #[error("payoff decomposition needs a stride-1 trajectory (got stride {stride})")]
    NeedsFullTrajectory { stride: u64 },

    // -- scenario / CLI -----------------------------------------------------
    #[error("scenario {path}: {message}")]
    ScenarioInvalid { path: PathBuf, message: String },
    #[error("cannot read {path}: {source}")]
    FileRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    FileWrite {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("unknown sweep parameter path {path:?} (supported: strategy.p, weights.kind)")]
    UnknownSweepParam { path: String },
    #[error("bad grid spec {spec:?}: {message}")]
    BadGridSpec { spec: String, message: String },
    #[error("{message}")]
    Cli { message: String },
}

impl Error {
    /// Short machine-readable code, stable across message rewording.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            CoordOutOfRange { .. } => "coord_out_of_range",
            MassNotOne { .. } => "mass_not_one",
            CoordSumExceedsOne { .. } => "coord_sum_exceeds_one",
            DimensionMismatch { .. } => "dimension_mismatch",
            PlayerOutOfRange { .. } => "player_out_of_range",
            ZeroStep => "zero_step",
            NonPositiveCumWeight { .. } => "non_positive_cum_weight",
            NegativeWeight { .. } => "negative_weight",
            Parse(_) => "expr_parse",
            Eval(_) => "expr_eval",
            RewardEval { .. } => "reward_eval",
            RewardCount { .. } => "reward_count",
            BadResolution { .. } => "bad_resolution",
            DimensionTooLarge { .. } => "dimension_too_large",
            GridTooLarge { .. } => "grid_too_large",
            PotentialUnsupportedDim { .. } => "potential_unsupported_dim",
            TooFewNodes { .. } => "too_few_nodes",
            StepLeavesSimplex { .. } => "step_leaves_simplex",
            IntegrabilityNeedsD2 { .. } => "integrability_needs_d2",
            PotentialDimMismatch { .. } => "potential_dim_mismatch",
            SequenceExhausted { .. } => "sequence_exhausted",
            ZeroHorizon => "zero_horizon",
            ZeroStride => "zero_stride",
            RewardEvalAtStep { .. } => "reward_eval_at_step",
            WeightsExhausted { .. } => "weights_exhausted",
            WeightedNeedsX0 => "weighted_needs_x0",
            WeightsRejected { .. } => "weights_rejected",
            ValidationHorizonTooShort { .. } => "validation_horizon_too_short",
            EmptySeries => "empty_series",
            SeriesLengthMismatch { .. } => "series_length_mismatch",
            NonPositiveDenominator { .. } => "non_positive_denominator",
            DecreasingDenominator { .. } => "decreasing_denominator",
            SeriesTooShort { .. } => "series_too_short",
            BadTailFraction { .. } => "bad_tail_fraction",
            EmptyTail => "empty_tail",
            NeedsFullTrajectory { .. } => "needs_full_trajectory",
            ScenarioInvalid { .. } => "scenario_invalid",
            FileRead { .. } => "file_read",
            FileWrite { .. } => "file_write",
            Json { .. } => "json",
            UnknownSweepParam { .. } => "unknown_sweep_param",
            BadGridSpec { .. } => "bad_grid_spec",
            Cli { .. } => "cli",
        }
    }

    /// True for configuration/validation rejections (CLI exit code 2);
    /// everything else is a runtime error (exit code 1).
    pub fn is_validation(&self) -> bool {
        use Error::*;
        matches!(
            self,
            CoordOutOfRange { .. }
                | MassNotOne { .. }
                | CoordSumExceedsOne { .. }
                | DimensionMismatch { .. }
                | PlayerOutOfRange { .. }
                | ZeroStep
                | NonPositiveCumWeight { .. }
                | NegativeWeight { .. }
                | Parse(_)
                | RewardCount { .. }
                | BadResolution { .. }
                | DimensionTooLarge { .. }
                | GridTooLarge { .. }
                | PotentialUnsupportedDim { .. }
                | TooFewNodes { .. }
                | IntegrabilityNeedsD2 { .. }
                | ZeroHorizon
                | ZeroStride
                | WeightsExhausted { .. }
                | WeightedNeedsX0
                | WeightsRejected { .. }
                | ValidationHorizonTooShort { .. }
                | ScenarioInvalid { .. }
                | UnknownSweepParam { .. }
                | BadGridSpec { .. }
                | Cli { .. }
        )
    }
}
