//! Scenario files: the JSON schema the CLI and examples consume, its
//! validation into an engine [`Scenario`], and reproducibility metadata.
//!
//! The scenario hash is computed over a canonical form (parsed reward
//! expressions pretty-printed, defaults resolved, sequence files inlined)
//! so it changes exactly when something semantically relevant changes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{Scenario, WeightReport, WeightSequence, MAX_POWER_EXPONENT};
use crate::error::{Error, Result};
use crate::reward::RewardSystem;
use crate::simplex::DistPoint;
use crate::strategy::{Strategy, GENERATOR_NAME};

/// On-disk scenario document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub d: usize,
    pub rewards: Vec<String>,
    pub strategy: StrategySpec,
    pub horizon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_stride: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategySpec {
    Greedy,
    Iid {
        p: Vec<f64>,
    },
    RoundRobin,
    Constant {
        i: usize,
    },
    /// One player index per line in the referenced file, resolved relative
    /// to the scenario file.
    Sequence {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant,
    Power { theta: f64 },
    Geometric { r: f64 },
    Custom { values: Vec<f64> },
}

/// A scenario together with its file form and canonical hash.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub scenario: Scenario,
    pub hash: String,
}

/// Read and validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario> {
    let text = fs::read_to_string(path).map_err(|source| Error::FileRead {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    build_scenario(file, path)
}

/// Validate a scenario document into a runnable [`Scenario`]; `origin` is
/// used for error messages and to resolve sequence paths.
pub fn build_scenario(file: ScenarioFile, origin: &Path) -> Result<LoadedScenario> {
    let invalid = |message: String| Error::ScenarioInvalid {
        path: origin.to_path_buf(),
        message,
    };

    if file.horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if matches!(file.record_stride, Some(0)) {
        return Err(Error::ZeroStride);
    }

    let rewards =
        RewardSystem::parse(file.d, &file.rewards).map_err(|e| invalid(format!("rewards: {e}")))?;

    let strategy = match &file.strategy {
        StrategySpec::Greedy => Strategy::Greedy,
        StrategySpec::RoundRobin => Strategy::RoundRobin,
        StrategySpec::Iid { p } => {
            let p = DistPoint::new(p.clone()).map_err(|e| invalid(format!("strategy.p: {e}")))?;
            if p.d() != file.d {
                return Err(invalid(format!(
                    "strategy.p has {} entries, expected {}",
                    p.d() + 1,
                    file.d + 1
                )));
            }
            Strategy::Iid(p)
        }
        StrategySpec::Constant { i } => {
            if *i > file.d {
                return Err(invalid(format!(
                    "strategy.i = {i} out of range for d = {}",
                    file.d
                )));
            }
            Strategy::Constant(*i)
        }
        StrategySpec::Sequence { path } => {
            let resolved = if path.is_absolute() {
                path.clone()
            } else {
                origin.parent().unwrap_or(Path::new(".")).join(path)
            };
            Strategy::Sequence(read_choice_file(&resolved, file.d)?)
        }
    };

    let x0 = match &file.x0 {
        None => None,
        Some(raw) => {
            let p = DistPoint::new(raw.clone()).map_err(|e| invalid(format!("x0: {e}")))?;
            if p.d() != file.d {
                return Err(invalid(format!(
                    "x0 has {} entries, expected {}",
                    p.d() + 1,
                    file.d + 1
                )));
            }
            Some(p)
        }
    };

    let weights = match &file.weights {
        None => None,
        Some(WeightSpec::Constant) => Some(WeightSequence::Constant),
        Some(WeightSpec::Power { theta }) => {
            if !theta.is_finite() || theta.abs() > MAX_POWER_EXPONENT {
                return Err(invalid(format!(
                    "weights.theta = {theta} must be finite with |theta| <= {MAX_POWER_EXPONENT}"
                )));
            }
            Some(WeightSequence::Power { theta: *theta })
        }
        Some(WeightSpec::Geometric { r }) => {
            if !r.is_finite() || *r <= 0.0 {
                return Err(invalid(format!(
                    "weights.r = {r} must be positive and finite"
                )));
            }
            Some(WeightSequence::Geometric { ratio: *r })
        }
        Some(WeightSpec::Custom { values }) => {
            if values.is_empty() {
                return Err(invalid("weights.values must be nonempty".into()));
            }
            if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(invalid(format!(
                    "weights.values must be finite and nonnegative, found {bad}"
                )));
            }
            Some(WeightSequence::Custom(values.clone()))
        }
    };

    let mut scenario = Scenario::new(rewards, strategy, file.horizon).with_seed(file.seed);
    if let Some(x0) = x0 {
        scenario = scenario.with_x0(x0);
    }
    if let Some(w) = weights {
        scenario = scenario.with_weights(w);
    }
    if let Some(stride) = file.record_stride {
        scenario = scenario.with_record_stride(stride);
    }

    let hash = scenario_hash(&file, &scenario);
    Ok(LoadedScenario {
        file,
        scenario,
        hash,
    })
}

fn read_choice_file(path: &Path, d: usize) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(|source| Error::FileRead {
        path: path.to_path_buf(),
        source,
    })?;
    let mut choices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let index: usize = line.parse().map_err(|_| Error::ScenarioInvalid {
            path: path.to_path_buf(),
            message: format!("line {}: {line:?} is not a player index", lineno + 1),
        })?;
        if index > d {
            return Err(Error::ScenarioInvalid {
                path: path.to_path_buf(),
                message: format!(
                    "line {}: index {index} out of range for d = {d}",
                    lineno + 1
                ),
            });
        }
        choices.push(index);
    }
    Ok(choices)
}

/// Canonical form hashed into the scenario id: parsed rewards re-printed,
/// defaults resolved, sequence choices inlined.
#[derive(Serialize)]
struct Canonical<'a> {
    d: usize,
    rewards: Vec<String>,
    strategy: CanonicalStrategy<'a>,
    horizon: u64,
    x0: Vec<f64>,
    seed: u64,
    weights: Option<&'a WeightSequence2<'a>>,
    record_stride: u64,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CanonicalStrategy<'a> {
    Greedy,
    Iid { p: &'a [f64] },
    RoundRobin,
    Constant { i: usize },
    Sequence { choices: &'a [usize] },
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WeightSequence2<'a> {
    Constant,
    Power { theta: f64 },
    Geometric { ratio: f64 },
    Custom { values: &'a [f64] },
}

fn scenario_hash(file: &ScenarioFile, scenario: &Scenario) -> String {
    let weights_canon = scenario.weights.as_ref().map(|w| match w {
        WeightSequence::Constant => WeightSequence2::Constant,
        WeightSequence::Power { theta } => WeightSequence2::Power { theta: *theta },
        WeightSequence::Geometric { ratio } => WeightSequence2::Geometric { ratio: *ratio },
        WeightSequence::Custom(values) => WeightSequence2::Custom { values },
    });
    let x0 = scenario
        .x0
        .clone()
        .unwrap_or_else(|| DistPoint::uniform(file.d));
    let canonical = Canonical {
        d: file.d,
        rewards: scenario
            .rewards
            .exprs()
            .iter()
            .map(|e| e.to_string())
            .collect(),
        strategy: match &scenario.strategy {
            Strategy::Greedy => CanonicalStrategy::Greedy,
            Strategy::Iid(p) => CanonicalStrategy::Iid { p: p.weights() },
            Strategy::RoundRobin => CanonicalStrategy::RoundRobin,
            Strategy::Constant(i) => CanonicalStrategy::Constant { i: *i },
            Strategy::Sequence(choices) => CanonicalStrategy::Sequence { choices },
        },
        horizon: scenario.horizon,
        x0: x0.weights().to_vec(),
        seed: scenario.seed,
        weights: weights_canon.as_ref(),
        record_stride: scenario.stride(),
    };
    let json = serde_json::to_string(&canonical).expect("canonical form serializes");
    hash_json(&json)
}

/// Hex SHA-256 of a canonical JSON string.
pub fn hash_json(json: &str) -> String {
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Reproducibility metadata emitted next to every output artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub scenario_hash: String,
    pub seed: u64,
    pub generator: &'static str,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_validation: Option<WeightReport>,
}

impl RunMetadata {
    pub fn new(
        scenario_hash: String,
        seed: u64,
        wall_time_s: f64,
        weight_validation: Option<WeightReport>,
    ) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_hash,
            seed,
            generator: GENERATOR_NAME,
            wall_time_s,
            weight_validation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_file() -> ScenarioFile {
        ScenarioFile {
            d: 1,
            rewards: vec!["1*u1".into(), "2*(1-u1)".into()],
            strategy: StrategySpec::Greedy,
            horizon: 1000,
            x0: None,
            seed: 42,
            weights: None,
            record_stride: None,
        }
    }

    #[test]
    fn builds_a_valid_scenario() {
        let loaded = build_scenario(linear_file(), Path::new("test.json")).unwrap();
        assert_eq!(loaded.scenario.horizon, 1000);
        assert_eq!(loaded.scenario.seed, 42);
        assert_eq!(loaded.hash.len(), 64);
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{
            "d": 1,
            "rewards": ["1*u1", "2*(1-u1)"],
            "strategy": {"kind": "iid", "p": [0.5, 0.5]},
            "horizon": 200000,
            "seed": 42,
            "weights": {"kind": "power", "theta": 0.5}
        }"#;
        let file: ScenarioFile = serde_json::from_str(json).unwrap();
        assert_eq!(file.strategy, StrategySpec::Iid { p: vec![0.5, 0.5] });
        let loaded = build_scenario(file, Path::new("m.json")).unwrap();
        assert!(matches!(
            loaded.scenario.weights,
            Some(WeightSequence::Power { theta }) if theta == 0.5
        ));
    }

    #[test]
    fn unknown_fields_rejected() {
        let json = r#"{"d": 1, "rewards": ["0", "0"], "strategy": {"kind": "greedy"},
                       "horizon": 10, "seed": 1, "typo_field": true}"#;
        assert!(serde_json::from_str::<ScenarioFile>(json).is_err());
    }

    #[test]
    fn semantic_hash_ignores_formatting() {
        let a = build_scenario(linear_file(), Path::new("a.json")).unwrap();
        let mut spaced = linear_file();
        spaced.rewards = vec!["1 * u1".into(), "2*(1 - u1)".into()];
        let b = build_scenario(spaced, Path::new("b.json")).unwrap();
        assert_eq!(a.hash, b.hash);

        // resolved defaults hash like their explicit forms
        let mut explicit = linear_file();
        explicit.x0 = Some(vec![0.5, 0.5]);
        explicit.record_stride = Some(1);
        let c = build_scenario(explicit, Path::new("c.json")).unwrap();
        assert_eq!(a.hash, c.hash);
    }

    #[test]
    fn semantic_changes_move_the_hash() {
        let base = build_scenario(linear_file(), Path::new("a.json")).unwrap();
        for edit in [
            |f: &mut ScenarioFile| f.seed = 43,
            |f: &mut ScenarioFile| f.horizon = 1001,
            |f: &mut ScenarioFile| f.rewards[0] = "1.5*u1".into(),
            |f: &mut ScenarioFile| f.strategy = StrategySpec::RoundRobin,
            |f: &mut ScenarioFile| f.x0 = Some(vec![0.25, 0.75]),
            |f: &mut ScenarioFile| f.weights = Some(WeightSpec::Constant),
        ] {
            let mut file = linear_file();
            edit(&mut file);
            let changed = build_scenario(file, Path::new("a.json")).unwrap();
            assert_ne!(base.hash, changed.hash);
        }
    }

    #[test]
    fn invalid_pieces_are_rejected_with_context() {
        let mut bad = linear_file();
        bad.rewards = vec!["1*u1".into(), "2*(1-u3)".into()];
        let err = build_scenario(bad, Path::new("bad.json")).unwrap_err();
        assert!(err.to_string().contains("rewards"));
        assert!(err.is_validation());

        let mut bad = linear_file();
        bad.x0 = Some(vec![0.5, 0.6]);
        assert!(build_scenario(bad, Path::new("bad.json")).is_err());

        let mut bad = linear_file();
        bad.strategy = StrategySpec::Constant { i: 7 };
        assert!(build_scenario(bad, Path::new("bad.json")).is_err());

        let mut bad = linear_file();
        bad.weights = Some(WeightSpec::Geometric { r: -1.0 });
        assert!(build_scenario(bad, Path::new("bad.json")).is_err());

        let mut bad = linear_file();
        bad.weights = Some(WeightSpec::Custom {
            values: vec![1.0, -2.0],
        });
        assert!(build_scenario(bad, Path::new("bad.json")).is_err());
    }

    #[test]
    fn sequence_files_resolve_and_validate() {
        let dir = tempfile::tempdir().unwrap();
        let seq_path = dir.path().join("choices.txt");
        fs::write(&seq_path, "# warmup\n1\n0\n1\n\n0\n").unwrap();
        let scenario_path = dir.path().join("scenario.json");

        let mut file = linear_file();
        file.strategy = StrategySpec::Sequence {
            path: PathBuf::from("choices.txt"),
        };
        file.horizon = 4;
        let loaded = build_scenario(file, &scenario_path).unwrap();
        assert_eq!(
            loaded.scenario.strategy,
            Strategy::Sequence(vec![1, 0, 1, 0])
        );

        fs::write(&seq_path, "2\n").unwrap();
        let mut file = linear_file();
        file.strategy = StrategySpec::Sequence {
            path: PathBuf::from("choices.txt"),
        };
        assert!(build_scenario(file, &scenario_path).is_err());
    }
}
