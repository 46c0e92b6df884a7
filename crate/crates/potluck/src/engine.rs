//! The simulation loop: iterate strategy choices, update the empirical
//! frequency, and accumulate rewards and running payoff averages.
//!
//! Reward timing is the one place an off-by-one silently corrupts every
//! downstream number: the reward of step `n` is evaluated at the state
//! *before* the step, `r_n = f_{x_n}(bar x_{n-1})`, and only then does the
//! empirical state advance. The recorded trajectory carries `bar_before`
//! so that both the update law and the running average can be recomputed
//! and checked.
//!
//! A run owns a single ChaCha8 generator seeded from the scenario seed;
//! repeated runs of the same scenario are bit-for-bit identical. Weighted
//! runs share the exact same loop (a uniform run is the constant-weight
//! special case), which makes the equivalence testable at the bit level.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reward::RewardSystem;
use crate::simplex::DistPoint;
use crate::strategy::Strategy;

/// Trajectories with horizons above this record every `horizon / 10^5`-th
/// step by default.
const FULL_RECORD_LIMIT: u64 = 100_000;
/// Upper bound accepted for a power-weight exponent (keeps `n^theta` and
/// its partial sums finite over any reasonable horizon).
pub const MAX_POWER_EXPONENT: f64 = 50.0;
/// A weight sequence passes the vanishing-ratio condition only if the tail
/// maximum of `delta_n / S_n` stays below this bound.
pub const RATIO_BOUND: f64 = 0.05;

/// The weight sequence `(delta_n)` of a weighted run.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence {
    /// `delta_n = 1` (reduces to the uniform game).
    Constant,
    /// `delta_n = n^theta`.
    Power { theta: f64 },
    /// `delta_n = ratio^n`.
    Geometric { ratio: f64 },
    /// Explicit list, `delta_n = values[n - 1]`.
    Custom(Vec<f64>),
}

impl WeightSequence {
    /// The raw weight for step `n >= 1`.
    pub fn weight(&self, n: u64) -> Result<f64> {
        debug_assert!(n >= 1);
        match self {
            WeightSequence::Constant => Ok(1.0),
            WeightSequence::Power { theta } => Ok((n as f64).powf(*theta)),
            WeightSequence::Geometric { ratio } => Ok(ratio.powi(n as i32)),
            WeightSequence::Custom(values) => {
                values
                    .get(n as usize - 1)
                    .copied()
                    .ok_or(Error::WeightsExhausted {
                        needed: n,
                        len: values.len(),
                    })
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            WeightSequence::Constant => "constant",
            WeightSequence::Power { .. } => "power",
            WeightSequence::Geometric { .. } => "geometric",
            WeightSequence::Custom(_) => "custom",
        }
    }
}

/// Per-step weight state: the cumulative weight and the update ratio
/// `delta_n / S_n`.
struct WeightStep {
    cum: f64,
    ratio: f64,
}

/// Streams `WeightStep`s. Geometric sequences overflow `f64` quickly, so
/// their ratio is tracked through the recurrence
/// `S_n/delta_n = (S_{n-1}/delta_{n-1}) / r + 1`, which stays finite; the
/// other kinds divide directly.
struct WeightStepper {
    seq: WeightSequence,
    n: u64,
    cum: f64,
    /// `S_n / delta_n` for the geometric recurrence.
    inv_ratio: f64,
}

impl WeightStepper {
    fn new(seq: WeightSequence) -> Self {
        Self {
            seq,
            n: 0,
            cum: 0.0,
            inv_ratio: 0.0,
        }
    }

    fn next(&mut self) -> Result<WeightStep> {
        self.n += 1;
        let delta = self.seq.weight(self.n)?;
        if delta < 0.0 || delta.is_nan() {
            return Err(Error::NegativeWeight {
                value: delta,
                step: self.n,
            });
        }
        self.cum += delta;
        let ratio = match &self.seq {
            WeightSequence::Geometric { ratio: r } if *r > 0.0 => {
                self.inv_ratio = if self.n == 1 {
                    1.0
                } else {
                    self.inv_ratio / r + 1.0
                };
                1.0 / self.inv_ratio
            }
            _ => {
                if self.cum > 0.0 {
                    delta / self.cum
                } else {
                    0.0
                }
            }
        };
        Ok(WeightStep {
            cum: self.cum,
            ratio,
        })
    }
}

/// A complete run description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub rewards: RewardSystem,
    pub strategy: Strategy,
    pub horizon: u64,
    /// Starting distribution; `None` means uniform. Only the first reward
    /// term depends on it (the first observation erases it).
    pub x0: Option<DistPoint>,
    pub seed: u64,
    pub weights: Option<WeightSequence>,
    /// Record every k-th step; `None` picks 1 up to `10^5` steps and
    /// `horizon / 10^5` beyond.
    pub record_stride: Option<u64>,
    /// Run even if the weight sequence fails validation.
    pub force: bool,
}

impl Scenario {
    pub fn new(rewards: RewardSystem, strategy: Strategy, horizon: u64) -> Self {
        Self {
            rewards,
            strategy,
            horizon,
            x0: None,
            seed: 0,
            weights: None,
            record_stride: None,
            force: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_x0(mut self, x0: DistPoint) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn with_weights(mut self, weights: WeightSequence) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_record_stride(mut self, stride: u64) -> Self {
        self.record_stride = Some(stride);
        self
    }

    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    /// Effective record stride.
    pub fn stride(&self) -> u64 {
        self.record_stride.unwrap_or_else(|| {
            if self.horizon <= FULL_RECORD_LIMIT {
                1
            } else {
                (self.horizon / FULL_RECORD_LIMIT).max(1)
            }
        })
    }

    /// Run the scenario: uniform loop without weights, weighted loop with
    /// them. An invalid weight sequence is rejected unless `force` is set.
    pub fn run(&self) -> Result<Trajectory> {
        match &self.weights {
            None => run(self),
            Some(_) => run_weighted(self),
        }
    }
}

/// One recorded step. `bar_before` is the state the reward was evaluated
/// at, i.e. the empirical frequency before the step's update.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    pub n: u64,
    pub choice: usize,
    pub bar_before: DistPoint,
    pub reward: f64,
    pub running_avg: f64,
    pub cum_weight: f64,
}

/// Recorded simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub d: usize,
    pub horizon: u64,
    pub stride: u64,
    /// Every `stride`-th step, plus the final step always.
    pub steps: Vec<TrajectoryStep>,
    pub bar_final: DistPoint,
    pub avg_final: f64,
}

impl Trajectory {
    /// The recorded running-average series.
    pub fn running_avgs(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.running_avg).collect()
    }

    /// CSV with header `n,choice,reward,running_avg,S_n,bar_0,...,bar_d`;
    /// floats as shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "n,choice,reward,running_avg,S_n")?;
        for i in 0..=self.d {
            write!(out, ",bar_{i}")?;
        }
        writeln!(out)?;
        for s in &self.steps {
            write!(
                out,
                "{},{},{},{},{}",
                s.n, s.choice, s.reward, s.running_avg, s.cum_weight
            )?;
            for w in s.bar_before.weights() {
                write!(out, ",{w}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Uniform-mode run: `A_n <- A_{n-1} + (r_n - A_{n-1}) / n`. Any weight
/// field on the scenario is a caller bug; use [`Scenario::run`] to
/// dispatch on it.
pub fn run(sc: &Scenario) -> Result<Trajectory> {
    debug_assert!(sc.weights.is_none(), "uniform run on a weighted scenario");
    run_loop(sc, WeightSequence::Constant, false)
}

/// Weighted-mode run; requires `sc.weights`. The running average becomes
/// `(1/S_n) sum delta_k r_k` and the empirical state uses the weighted
/// update. Fails validation unless the sequence passes
/// [`validate_weights`] or `force` is set.
pub fn run_weighted(sc: &Scenario) -> Result<Trajectory> {
    let weights = sc
        .weights
        .clone()
        .expect("run_weighted called without weights");
    if sc.horizon >= 100 {
        let report = validate_weights(&weights, sc.horizon)?;
        if !report.pass && !sc.force {
            return Err(Error::WeightsRejected {
                failed: report.failed_conditions(),
            });
        }
    }
    if weights.weight(1)? <= 0.0 && sc.x0.is_none() {
        return Err(Error::WeightedNeedsX0);
    }
    run_loop(sc, weights, true)
}

fn run_loop(sc: &Scenario, weights: WeightSequence, weighted: bool) -> Result<Trajectory> {
    if sc.horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let stride = sc.stride();
    if stride == 0 {
        return Err(Error::ZeroStride);
    }
    let d = sc.rewards.d();
    if let Some(x0) = &sc.x0 {
        if x0.d() != d {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: x0.d() + 1,
            });
        }
    }
    if !weighted {
        debug_assert_eq!(weights, WeightSequence::Constant);
    }

    let mut bar = sc.x0.clone().unwrap_or_else(|| DistPoint::uniform(d));
    let mut avg = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let mut stepper = WeightStepper::new(weights);
    let mut steps = Vec::with_capacity((sc.horizon / stride + 1) as usize);

    for n in 1..=sc.horizon {
        let w = stepper.next()?;
        let choice = sc.strategy.choose(n, &bar, &sc.rewards, &mut rng)?;
        let reward = sc.rewards.reward(choice, &bar).map_err(|e| match e {
            Error::RewardEval { player, source } => Error::RewardEvalAtStep {
                step: n,
                player,
                source,
            },
            other => other,
        })?;
        avg += (reward - avg) * w.ratio;
        let next_bar = bar.updated_by_step(choice, w.ratio);
        if n % stride == 0 || n == sc.horizon {
            steps.push(TrajectoryStep {
                n,
                choice,
                bar_before: bar,
                reward,
                running_avg: avg,
                cum_weight: w.cum,
            });
        }
        bar = next_bar;
    }

    Ok(Trajectory {
        d,
        horizon: sc.horizon,
        stride,
        steps,
        bar_final: bar,
        avg_final: avg,
    })
}

/// Direction of the `delta_n / S_n` ratio across the tail window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
}

/// Validation report for a weight sequence against the three admissibility
/// conditions: weights nonnegative, cumulative weight growing, and the
/// ratio `delta_n / S_n` vanishing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightReport {
    pub horizon: u64,
    pub min_weight: f64,
    pub s_half: f64,
    pub s_final: f64,
    /// Max of `delta_n / S_n` over the last 10% of steps.
    pub tail_max_ratio: f64,
    pub tail_trend: Trend,
    pub nonneg_pass: bool,
    pub growth_pass: bool,
    pub vanishing_ratio_pass: bool,
    pub pass: bool,
}

impl WeightReport {
    pub fn failed_conditions(&self) -> String {
        let mut failed: Vec<String> = Vec::new();
        if !self.nonneg_pass {
            failed.push("weights must be nonnegative".into());
        }
        if !self.growth_pass {
            failed.push("cumulative weight must grow".into());
        }
        if !self.vanishing_ratio_pass {
            failed.push(format!(
                "delta_n/S_n must vanish (tail max {:.3}, {:?})",
                self.tail_max_ratio, self.tail_trend
            ));
        }
        failed.join("; ")
    }
}

/// Probe a weight sequence over `horizon >= 100` steps and report each
/// admissibility condition separately. Always returns a report for
/// sequences defined over the whole horizon.
pub fn validate_weights(w: &WeightSequence, horizon: u64) -> Result<WeightReport> {
    if horizon < 100 {
        return Err(Error::ValidationHorizonTooShort { horizon });
    }
    let tail_len = (horizon / 10).max(1);
    let tail_start = horizon - tail_len + 1;
    let half = horizon / 2;

    let mut min_weight = f64::INFINITY;
    let mut s_half = 0.0;
    let mut cum = 0.0;
    let mut inv_ratio = 0.0;
    let mut tail_max_ratio = f64::NEG_INFINITY;
    let mut first_tail_ratio = 0.0;
    let mut last_tail_ratio = 0.0;

    for n in 1..=horizon {
        let delta = w.weight(n)?;
        min_weight = min_weight.min(delta);
        cum += delta;
        let ratio = match w {
            WeightSequence::Geometric { ratio: r } if *r > 0.0 => {
                inv_ratio = if n == 1 { 1.0 } else { inv_ratio / r + 1.0 };
                1.0 / inv_ratio
            }
            _ => {
                if cum > 0.0 {
                    delta / cum
                } else {
                    0.0
                }
            }
        };
        if n == half {
            s_half = cum;
        }
        if n >= tail_start {
            if n == tail_start {
                first_tail_ratio = ratio;
            }
            tail_max_ratio = tail_max_ratio.max(ratio);
            last_tail_ratio = ratio;
        }
    }

    let tail_trend = if last_tail_ratio < first_tail_ratio * 0.99 {
        Trend::Decreasing
    } else if last_tail_ratio > first_tail_ratio * 1.01 {
        Trend::Increasing
    } else {
        Trend::Flat
    };

    let nonneg_pass = min_weight >= 0.0;
    // an overflowed cumulative sum certainly grew
    let growth_pass = cum.is_infinite() || cum > s_half + 1e-9 * s_half.abs().max(1.0);
    let vanishing_ratio_pass = tail_max_ratio <= RATIO_BOUND && tail_trend != Trend::Increasing;

    Ok(WeightReport {
        horizon,
        min_weight,
        s_half,
        s_final: cum,
        tail_max_ratio,
        tail_trend,
        nonneg_pass,
        growth_pass,
        vanishing_ratio_pass,
        pass: nonneg_pass && growth_pass && vanishing_ratio_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Strategy;

    fn linear_family(a: f64, b: f64) -> RewardSystem {
        RewardSystem::parse(1, &[format!("{a}*u1"), format!("{b}*(1-u1)")]).unwrap()
    }

    fn dist(w: &[f64]) -> DistPoint {
        DistPoint::new(w.to_vec()).unwrap()
    }

    #[test]
    fn constant_reward_gives_constant_average() {
        let f = RewardSystem::parse(1, &["5", "0"]).unwrap();
        let sc = Scenario::new(f, Strategy::Constant(0), 1000);
        let t = sc.run().unwrap();
        assert_eq!(t.avg_final, 5.0);
        assert!(t.steps.iter().all(|s| s.running_avg == 5.0));
    }

    #[test]
    fn reward_timing_reads_the_state_before_the_step() {
        // f_0 = u0 with constant(0): r_1 = x0's weight 0.5, r_n = 1 after,
        // so A_n = (0.5 + (n-1)) / n
        let f = RewardSystem::parse(1, &["u0", "0"]).unwrap();
        let sc = Scenario::new(f, Strategy::Constant(0), 4);
        let t = sc.run().unwrap();
        let avgs = t.running_avgs();
        let expect = [0.5, 1.5 / 2.0, 2.5 / 3.0, 3.5 / 4.0];
        for (got, want) in avgs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-15, "{avgs:?}");
        }
        assert_eq!(t.steps[0].bar_before, DistPoint::uniform(1));
        assert_eq!(t.bar_final, dist(&[1.0, 0.0]));
    }

    #[test]
    fn runs_are_deterministic() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Iid(dist(&[0.5, 0.5])), 5000).with_seed(9);
        assert_eq!(sc.run().unwrap(), sc.run().unwrap());
    }

    #[test]
    fn constant_weights_reproduce_the_uniform_run_bit_for_bit() {
        let f = linear_family(1.0, 2.0);
        let plain = Scenario::new(f.clone(), Strategy::Iid(dist(&[0.3, 0.7])), 2000).with_seed(4);
        let weighted = plain.clone().with_weights(WeightSequence::Constant);
        assert_eq!(plain.run().unwrap(), weighted.run().unwrap());
    }

    #[test]
    fn recorded_bars_satisfy_the_update_law_exactly() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Greedy, 500).with_seed(1);
        let t = sc.run().unwrap();
        assert_eq!(t.stride, 1);
        for pair in t.steps.windows(2) {
            let recomputed = pair[0]
                .bar_before
                .updated(pair[0].choice, pair[0].n)
                .unwrap();
            assert_eq!(recomputed, pair[1].bar_before);
        }
        let last = t.steps.last().unwrap();
        assert_eq!(
            last.bar_before.updated(last.choice, last.n).unwrap(),
            t.bar_final
        );
    }

    #[test]
    fn weighted_bars_satisfy_the_update_law_exactly() {
        let f = linear_family(1.0, 2.0);
        let w = WeightSequence::Power { theta: 0.5 };
        let t = Scenario::new(f, Strategy::Greedy, 500)
            .with_weights(w.clone())
            .run()
            .unwrap();
        let mut cum = 0.0;
        let mut bar = DistPoint::uniform(1);
        for step in &t.steps {
            assert_eq!(bar, step.bar_before);
            let delta = w.weight(step.n).unwrap();
            cum += delta;
            assert_eq!(cum, step.cum_weight);
            bar = bar.updated_weighted(step.choice, delta, cum).unwrap();
        }
        assert_eq!(bar, t.bar_final);
    }

    #[test]
    fn running_average_matches_recomputation() {
        let f = RewardSystem::parse(2, &["u0+u1", "2*u2", "u1-u0"]).unwrap();
        for weights in [None, Some(WeightSequence::Power { theta: 0.5 })] {
            let mut sc = Scenario::new(f.clone(), Strategy::RoundRobin, 3000).with_seed(2);
            if let Some(w) = weights {
                sc = sc.with_weights(w);
            }
            let t = sc.run().unwrap();
            let mut prev_cum = 0.0;
            let mut weighted_sum = 0.0;
            for s in &t.steps {
                let delta = s.cum_weight - prev_cum;
                weighted_sum += delta * s.reward;
                let direct = weighted_sum / s.cum_weight;
                assert!(
                    (s.running_avg - direct).abs() < 1e-10,
                    "n={}: {} vs {}",
                    s.n,
                    s.running_avg,
                    direct
                );
                prev_cum = s.cum_weight;
            }
        }
    }

    #[test]
    fn stride_controls_memory() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Greedy, 300_000);
        assert_eq!(sc.stride(), 3);
        let t = sc.run().unwrap();
        assert_eq!(t.steps.len(), 100_000);
        assert_eq!(t.steps.last().unwrap().n, 300_000);
    }

    #[test]
    fn final_step_is_always_recorded() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Greedy, 1001).with_record_stride(10);
        let t = sc.run().unwrap();
        assert_eq!(t.steps.last().unwrap().n, 1001);
        assert_eq!(t.steps.len(), 101);
    }

    #[test]
    fn eval_errors_carry_the_step_number() {
        // constant play of player 1 from x0 = (1, 0): step 1 evaluates at
        // u1 = 0 and passes, step 2 at u1 = 1 divides by zero
        let f = RewardSystem::parse(1, &["0", "1/(u1-1)"]).unwrap();
        let sc = Scenario::new(f, Strategy::Constant(1), 100).with_x0(dist(&[1.0, 0.0]));
        let err = sc.run().unwrap_err();
        assert!(matches!(
            err,
            Error::RewardEvalAtStep {
                step: 2,
                player: 1,
                ..
            }
        ));
    }

    #[test]
    fn weighted_zero_start_requires_x0() {
        let f = linear_family(1.0, 2.0);
        let weights = WeightSequence::Custom(vec![0.0, 0.0, 1.0, 1.0]);
        let sc = Scenario::new(f.clone(), Strategy::Constant(1), 4).with_weights(weights.clone());
        assert!(matches!(sc.run(), Err(Error::WeightedNeedsX0)));

        let sc = Scenario::new(f, Strategy::Constant(1), 4)
            .with_weights(weights)
            .with_x0(dist(&[1.0, 0.0]));
        let t = sc.run().unwrap();
        // state holds at x0 while the cumulative weight is zero, then the
        // first positive weight jumps to the chosen vertex
        assert_eq!(t.steps[0].bar_before, dist(&[1.0, 0.0]));
        assert_eq!(t.steps[2].bar_before, dist(&[1.0, 0.0]));
        assert_eq!(t.steps[3].bar_before, dist(&[0.0, 1.0]));
    }

    #[test]
    fn custom_weights_must_cover_the_horizon() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Constant(0), 10)
            .with_weights(WeightSequence::Custom(vec![1.0; 5]));
        assert!(matches!(
            sc.run(),
            Err(Error::WeightsExhausted { needed: 6, len: 5 })
        ));
    }

    #[test]
    fn geometric_weights_are_rejected_without_force() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Greedy, 1000)
            .with_weights(WeightSequence::Geometric { ratio: 2.0 });
        assert!(matches!(sc.run(), Err(Error::WeightsRejected { .. })));
        let forced = sc.with_force(true);
        let t = forced.run().unwrap();
        // the stable ratio recurrence keeps the state finite even though
        // the raw weights overflow
        assert!(t.bar_final.weights().iter().all(|w| w.is_finite()));
        assert!(t.avg_final.is_finite());
    }

    #[test]
    fn validate_constant_passes_all() {
        let r = validate_weights(&WeightSequence::Constant, 200_000).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.min_weight, 1.0);
        assert_eq!(r.tail_trend, Trend::Decreasing);
        assert!(r.tail_max_ratio < 1e-5);
    }

    #[test]
    fn validate_inverse_sqrt_passes() {
        let r = validate_weights(&WeightSequence::Power { theta: -0.5 }, 1_000_000).unwrap();
        assert!(r.pass, "{r:?}");
        // S_n ~ 2 sqrt(n)
        assert!((r.s_final - 2.0 * 1e3).abs() < 10.0);
    }

    #[test]
    fn validate_geometric_fails_only_the_ratio_condition() {
        let r = validate_weights(&WeightSequence::Geometric { ratio: 2.0 }, 200_000).unwrap();
        assert!(!r.pass);
        assert!(r.nonneg_pass);
        assert!(r.growth_pass, "overflowed sums still grew: {r:?}");
        assert!(!r.vanishing_ratio_pass);
        assert!(
            (r.tail_max_ratio - 0.5).abs() < 0.05,
            "{}",
            r.tail_max_ratio
        );
        assert_eq!(r.tail_trend, Trend::Flat);
    }

    #[test]
    fn validate_flat_tail_fails_growth() {
        let mut values = vec![1.0; 100];
        values.extend(vec![0.0; 900]);
        let r = validate_weights(&WeightSequence::Custom(values), 1000).unwrap();
        assert!(!r.growth_pass);
        assert!(!r.pass);
    }

    #[test]
    fn validation_needs_a_real_horizon() {
        assert!(matches!(
            validate_weights(&WeightSequence::Constant, 50),
            Err(Error::ValidationHorizonTooShort { horizon: 50 })
        ));
    }

    #[test]
    fn csv_layout() {
        let f = linear_family(1.0, 2.0);
        let sc = Scenario::new(f, Strategy::Constant(0), 3);
        let t = sc.run().unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,choice,reward,running_avg,S_n,bar_0,bar_1"
        );
        assert_eq!(lines.clone().count(), 3);
        assert!(lines.next().unwrap().starts_with("1,0,"));
    }
}
