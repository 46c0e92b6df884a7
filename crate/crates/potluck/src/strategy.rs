//! Playing strategies: rules that nominate the next player from the step
//! index, the current empirical state, and the reward system.
//!
//! Deterministic kinds ignore the random source; the i.i.d. kind ignores
//! the state and the rewards. Randomness comes from a seedable portable
//! generator (ChaCha8) owned by the run, so fixed seeds reproduce choices
//! bit for bit.

use rand::Rng;

use crate::error::{Error, Result};
use crate::reward::RewardSystem;
use crate::simplex::DistPoint;

/// Name of the random generator, recorded in run metadata.
pub const GENERATOR_NAME: &str = "chacha8";

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Nominate the player whose current reward is largest (ties go to the
    /// largest index, so for two players this is "player 1 iff f1 >= f0").
    Greedy,
    /// Draw the player i.i.d. from a fixed distribution.
    Iid(DistPoint),
    /// Cycle through the players in index order.
    RoundRobin,
    /// The same player forever.
    Constant(usize),
    /// Replay a fixed list of choices; erroring once exhausted.
    Sequence(Vec<usize>),
}

/// Greedy rule: the largest index among `argmax_i f_i(bar)`.
pub fn greedy_choose(f: &RewardSystem, bar: &DistPoint) -> Result<usize> {
    let mut best_index = 0;
    let mut best_reward = f.reward(0, bar)?;
    for i in 1..=f.d() {
        let r = f.reward(i, bar)?;
        if r >= best_reward {
            best_reward = r;
            best_index = i;
        }
    }
    Ok(best_index)
}

/// Inverse-CDF draw from `p` on a single uniform variate; a draw strictly
/// below the running total selects the index.
pub fn iid_choose<R: Rng + ?Sized>(p: &DistPoint, rng: &mut R) -> usize {
    let x: f64 = rng.random();
    let mut cum = 0.0;
    for (i, &w) in p.weights().iter().enumerate() {
        cum += w;
        if x < cum {
            return i;
        }
    }
    p.d()
}

impl Strategy {
    /// Nominate the player for step `n >= 1`, reading `bar = x_{n-1}`, the
    /// empirical state before the step.
    pub fn choose<R: Rng + ?Sized>(
        &self,
        n: u64,
        bar: &DistPoint,
        f: &RewardSystem,
        rng: &mut R,
    ) -> Result<usize> {
        let d = f.d();
        let choice = match self {
            Strategy::Greedy => greedy_choose(f, bar)?,
            Strategy::Iid(p) => iid_choose(p, rng),
            Strategy::RoundRobin => ((n - 1) % (d as u64 + 1)) as usize,
            Strategy::Constant(i) => *i,
            Strategy::Sequence(choices) => {
                *choices
                    .get(n as usize - 1)
                    .ok_or(Error::SequenceExhausted {
                        step: n,
                        len: choices.len(),
                    })?
            }
        };
        if choice > d {
            return Err(Error::PlayerOutOfRange { index: choice, d });
        }
        Ok(choice)
    }

    /// Short name for metadata and reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::Iid(_) => "iid",
            Strategy::RoundRobin => "round_robin",
            Strategy::Constant(_) => "constant",
            Strategy::Sequence(_) => "sequence",
        }
    }
}
