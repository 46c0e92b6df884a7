//! Command implementations behind the `potluck` binary: load a scenario,
//! drive the engine or the diagnostics, and emit CSV/JSON artifacts with
//! reproducibility metadata. Output files are written atomically
//! (temp file + rename).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{abel_identity_residual, kronecker_check, KroneckerDiagnostic, SeriesPair};
use crate::engine::{validate_weights, Trajectory};
use crate::error::{Error, Result};
use crate::potential::{
    build_potential_1d, check_integrability, grad_condition_residual, IntegrabilityReport,
};
use crate::reward::QStarResult;
use crate::scenario::{
    build_scenario, hash_json, load_scenario, RunMetadata, ScenarioFile, StrategySpec, WeightSpec,
};
use crate::simplex::SimplexPoint;

/// Gradient residual / asymmetry below which `check-potential` passes.
pub const RESIDUAL_THRESHOLD: f64 = 1e-4;
/// Sample points for the residual and integrability probes.
pub const CHECK_SAMPLES: usize = 200;
/// Tolerance handed to the Kronecker tail check.
pub const KRONECKER_EPS: f64 = 1e-4;

/// Result of `run`: file locations plus the terminal state.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub csv_path: PathBuf,
    pub meta_path: PathBuf,
    pub horizon: u64,
    pub avg_final: f64,
    pub bar_final: Vec<f64>,
    pub metadata: RunMetadata,
}

/// Run a scenario file and write the trajectory CSV plus a metadata
/// sidecar (`<out>.meta.json`).
pub fn cmd_run(scenario_path: &Path, out_path: &Path, force: bool) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut loaded = load_scenario(scenario_path)?;
    loaded.scenario.force = force;

    let weight_validation = match &loaded.scenario.weights {
        Some(w) if loaded.scenario.horizon >= 100 => {
            Some(validate_weights(w, loaded.scenario.horizon)?)
        }
        _ => None,
    };

    let trajectory = loaded.scenario.run()?;
    let mut csv = Vec::new();
    trajectory
        .write_csv(&mut csv)
        .map_err(|source| Error::FileWrite {
            path: out_path.to_path_buf(),
            source,
        })?;
    write_atomic(out_path, &csv)?;

    let metadata = RunMetadata::new(
        loaded.hash.clone(),
        loaded.scenario.seed,
        start.elapsed().as_secs_f64(),
        weight_validation,
    );
    let meta_path = sidecar_path(out_path);
    write_json(&meta_path, &metadata)?;

    Ok(RunOutcome {
        csv_path: out_path.to_path_buf(),
        meta_path,
        horizon: trajectory.horizon,
        avg_final: trajectory.avg_final,
        bar_final: trajectory.bar_final.weights().to_vec(),
        metadata,
    })
}

/// `qstar` output printed to standard output as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct QStarOutput {
    pub q_star: f64,
    pub argmax: Vec<f64>,
    pub resolution: f64,
    pub refined: bool,
    pub metadata: RunMetadata,
}

/// Maximize the scenario's mean payoff over the simplex.
pub fn cmd_qstar(scenario_path: &Path, resolution: f64, refine: usize) -> Result<QStarOutput> {
    let start = Instant::now();
    let loaded = load_scenario(scenario_path)?;
    let QStarResult {
        value,
        argmax,
        grid_resolution,
        refined,
    } = loaded.scenario.rewards.q_star(resolution, refine)?;
    Ok(QStarOutput {
        q_star: value,
        argmax: argmax.weights().to_vec(),
        resolution: grid_resolution,
        refined,
        metadata: RunMetadata::new(
            loaded.hash,
            loaded.scenario.seed,
            start.elapsed().as_secs_f64(),
            None,
        ),
    })
}

/// `check-potential` output: a gradient-residual report for `d = 1`, an
/// integrability report for `d >= 2`.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PotentialCheckOutput {
    GradientResidual {
        nodes: usize,
        h: f64,
        sample_points: usize,
        max_residual: f64,
        threshold: f64,
        pass: bool,
        metadata: RunMetadata,
    },
    Integrability {
        #[serde(flatten)]
        report: IntegrabilityReport,
        threshold: f64,
        pass: bool,
        metadata: RunMetadata,
    },
}

impl PotentialCheckOutput {
    pub fn pass(&self) -> bool {
        match self {
            PotentialCheckOutput::GradientResidual { pass, .. } => *pass,
            PotentialCheckOutput::Integrability { pass, .. } => *pass,
        }
    }
}

/// For `d = 1`, build the potential and report the worst gradient-condition
/// residual over sampled points; for `d >= 2`, report the worst Jacobian
/// asymmetry. Passes when the figure stays below [`RESIDUAL_THRESHOLD`].
pub fn cmd_check_potential(
    scenario_path: &Path,
    nodes: usize,
    h: f64,
) -> Result<PotentialCheckOutput> {
    let start = Instant::now();
    let loaded = load_scenario(scenario_path)?;
    let f = &loaded.scenario.rewards;
    let seed = loaded.scenario.seed;

    if f.d() == 1 {
        let phi = build_potential_1d(f, nodes)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_residual: f64 = 0.0;
        let mut points: Vec<f64> = vec![0.0, 1.0];
        points.extend((0..CHECK_SAMPLES).map(|_| rng.random::<f64>()));
        for x in &points {
            let v = SimplexPoint::new(vec![*x]).expect("unit interval");
            let res = grad_condition_residual(f, &phi, &v, h)?;
            max_residual = max_residual.max(res[0].abs());
        }
        let pass = max_residual <= RESIDUAL_THRESHOLD;
        Ok(PotentialCheckOutput::GradientResidual {
            nodes,
            h,
            sample_points: points.len(),
            max_residual,
            threshold: RESIDUAL_THRESHOLD,
            pass,
            metadata: RunMetadata::new(loaded.hash, seed, start.elapsed().as_secs_f64(), None),
        })
    } else {
        let report = check_integrability(f, CHECK_SAMPLES, h, seed)?;
        let pass = report.max_asymmetry <= RESIDUAL_THRESHOLD;
        Ok(PotentialCheckOutput::Integrability {
            report,
            threshold: RESIDUAL_THRESHOLD,
            pass,
            metadata: RunMetadata::new(loaded.hash, seed, start.elapsed().as_secs_f64(), None),
        })
    }
}

/// Series source for the `kronecker` command.
#[derive(Debug, Clone)]
pub enum KroneckerPreset {
    Alternating,
    Harmonic,
    /// CSV file of `a,b` rows.
    Custom(PathBuf),
}

#[derive(Debug, Clone, Serialize)]
pub struct KroneckerOutput {
    pub preset: String,
    pub len: usize,
    pub abel_residual: f64,
    pub diagnostic: KroneckerDiagnostic,
    pub metadata: RunMetadata,
}

/// Run the summation-by-parts identity and the Kronecker tail check on a
/// preset or custom series. `len` applies to the presets; custom files are
/// used whole.
pub fn cmd_kronecker(preset: &KroneckerPreset, len: usize) -> Result<KroneckerOutput> {
    let start = Instant::now();
    let (series, name) = match preset {
        KroneckerPreset::Alternating => (SeriesPair::alternating(len), "alternating".to_string()),
        KroneckerPreset::Harmonic => (SeriesPair::harmonic(len), "harmonic".to_string()),
        KroneckerPreset::Custom(path) => {
            (read_series_csv(path)?, format!("custom:{}", path.display()))
        }
    };
    let abel_residual = abel_identity_residual(&series);
    let diagnostic = kronecker_check(&series, KRONECKER_EPS)?;
    let hash = hash_json(&format!("{{\"preset\":{name:?},\"n\":{}}}", series.len()));
    Ok(KroneckerOutput {
        preset: name,
        len: series.len(),
        abel_residual,
        diagnostic,
        metadata: RunMetadata::new(hash, 0, start.elapsed().as_secs_f64(), None),
    })
}

fn read_series_csv(path: &Path) -> Result<SeriesPair> {
    let text = fs::read_to_string(path).map_err(|source| Error::FileRead {
        path: path.to_path_buf(),
        source,
    })?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_pair = || -> Option<(f64, f64)> {
            let (x, y) = line.split_once(',')?;
            Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
        };
        match parse_pair() {
            Some((x, y)) => {
                a.push(x);
                b.push(y);
            }
            // a single header line is fine; anything later is malformed
            None if lineno == 0 => continue,
            None => {
                return Err(Error::ScenarioInvalid {
                    path: path.to_path_buf(),
                    message: format!("line {}: expected `a,b`, got {line:?}", lineno + 1),
                })
            }
        }
    }
    SeriesPair::new(a, b)
}

/// Which scenario field a sweep varies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepParam {
    /// `strategy.p`: the i.i.d. probability of player 1 (requires `d = 1`).
    StrategyP,
    /// `weights.kind`: categorical list such as
    /// `constant,power:0.5,geometric:2`.
    WeightsKind,
}

impl SweepParam {
    pub fn parse(path: &str) -> Result<Self> {
        match path {
            "strategy.p" => Ok(SweepParam::StrategyP),
            "weights.kind" => Ok(SweepParam::WeightsKind),
            other => Err(Error::UnknownSweepParam {
                path: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Grid value: the probability for `strategy.p`, the kind label for
    /// `weights.kind`.
    pub p: String,
    pub a_final: f64,
    /// `q` at the i.i.d. distribution for `strategy.p` sweeps, `q` at the
    /// final empirical state otherwise.
    pub q_p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Row index with the largest `a_final`.
    pub best_index: usize,
    pub summary_path: PathBuf,
    pub meta_path: PathBuf,
    pub threads: usize,
}

/// Run one scenario per grid value in parallel (seeds derived as
/// `seed + index`) and write `summary.csv` to `out_dir`. The
/// `POTLUCK_THREADS` environment variable caps the worker count.
pub fn cmd_sweep(
    scenario_path: &Path,
    param_path: &str,
    grid: &str,
    out_dir: &Path,
) -> Result<SweepOutcome> {
    let start = Instant::now();
    let param = SweepParam::parse(param_path)?;
    let base = load_scenario(scenario_path)?;

    let jobs: Vec<(String, ScenarioFile)> = match &param {
        SweepParam::StrategyP => {
            if base.file.d != 1 {
                return Err(Error::ScenarioInvalid {
                    path: scenario_path.to_path_buf(),
                    message: format!("strategy.p sweeps require d = 1, got d = {}", base.file.d),
                });
            }
            parse_numeric_grid(grid)?
                .into_iter()
                .map(|p| {
                    let mut file = base.file.clone();
                    file.strategy = StrategySpec::Iid {
                        p: vec![1.0 - p, p],
                    };
                    (format!("{p}"), file)
                })
                .collect()
        }
        SweepParam::WeightsKind => parse_kind_grid(grid)?
            .into_iter()
            .map(|(label, spec)| {
                let mut file = base.file.clone();
                file.weights = Some(spec);
                (label, file)
            })
            .collect(),
    };

    let jobs: Vec<(String, ScenarioFile)> = jobs
        .into_iter()
        .enumerate()
        .map(|(i, (label, mut file))| {
            file.seed = base.file.seed.wrapping_add(i as u64);
            // only the terminal state is needed per run
            file.record_stride = Some(file.horizon);
            (label, file)
        })
        .collect();

    let threads = sweep_threads().min(jobs.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<SweepRow>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let row = sweep_job(&jobs[i].0, &jobs[i].1, scenario_path, &param);
                *slots[i].lock().expect("sweep slot") = Some(row);
            });
        }
    });

    let rows = slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("sweep slot").expect("worker ran"))
        .collect::<Result<Vec<SweepRow>>>()?;

    let best_index = rows
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.a_final.total_cmp(&y.a_final))
        .map(|(i, _)| i)
        .expect("grid is nonempty");

    fs::create_dir_all(out_dir).map_err(|source| Error::FileWrite {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let summary_path = out_dir.join("summary.csv");
    let mut csv = String::from("p,A_final,q(p)\n");
    for row in &rows {
        csv.push_str(&format!("{},{},{}\n", row.p, row.a_final, row.q_p));
    }
    write_atomic(&summary_path, csv.as_bytes())?;

    let metadata = RunMetadata::new(
        base.hash,
        base.file.seed,
        start.elapsed().as_secs_f64(),
        None,
    );
    let meta_path = sidecar_path(&summary_path);
    write_json(&meta_path, &metadata)?;

    Ok(SweepOutcome {
        rows,
        best_index,
        summary_path,
        meta_path,
        threads,
    })
}

fn sweep_job(
    label: &str,
    file: &ScenarioFile,
    origin: &Path,
    param: &SweepParam,
) -> Result<SweepRow> {
    let loaded = build_scenario(file.clone(), origin)?;
    let trajectory: Trajectory = loaded.scenario.run()?;
    let q_p = match param {
        SweepParam::StrategyP => match &loaded.scenario.strategy {
            crate::strategy::Strategy::Iid(p) => loaded.scenario.rewards.q_value(p)?,
            _ => unreachable!("strategy.p sweep builds iid strategies"),
        },
        SweepParam::WeightsKind => loaded.scenario.rewards.q_value(&trajectory.bar_final)?,
    };
    Ok(SweepRow {
        p: label.to_string(),
        a_final: trajectory.avg_final,
        q_p,
    })
}

/// `start:end:count` inclusive grid.
fn parse_numeric_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |message: &str| Error::BadGridSpec {
        spec: spec.to_string(),
        message: message.to_string(),
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected start:end:count"));
    }
    let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
    let end: f64 = parts[1].parse().map_err(|_| bad("end is not a number"))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| bad("count is not an integer"))?;
    if count == 0 {
        return Err(bad("count must be >= 1"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect())
}

/// Comma list of weight kinds: `constant`, `power:<theta>`,
/// `geometric:<r>`.
fn parse_kind_grid(spec: &str) -> Result<Vec<(String, WeightSpec)>> {
    let bad = |message: String| Error::BadGridSpec {
        spec: spec.to_string(),
        message,
    };
    spec.split(',')
        .map(|item| {
            let item = item.trim();
            let (kind, arg) = match item.split_once(':') {
                Some((k, a)) => (k, Some(a)),
                None => (item, None),
            };
            let weight = match (kind, arg) {
                ("constant", None) => WeightSpec::Constant,
                ("power", Some(a)) => WeightSpec::Power {
                    theta: a
                        .parse()
                        .map_err(|_| bad(format!("bad theta in {item:?}")))?,
                },
                ("geometric", Some(a)) => WeightSpec::Geometric {
                    r: a.parse()
                        .map_err(|_| bad(format!("bad ratio in {item:?}")))?,
                },
                _ => return Err(bad(format!("unknown weight kind {item:?}"))),
            };
            Ok((item.to_string(), weight))
        })
        .collect()
}

fn sweep_threads() -> usize {
    std::env::var("POTLUCK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(std::num::NonZeroUsize::get)
                .unwrap_or(1)
        })
}

/// `<path>.meta.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".meta.json");
    PathBuf::from(os)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Write via a temp file in the destination directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let wrap = |source: std::io::Error| Error::FileWrite {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(bytes).map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}
