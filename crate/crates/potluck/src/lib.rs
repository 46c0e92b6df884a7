//! Simulation and numerical verification for empirical-frequency bandit
//! games.
//!
//! `d + 1` players share one slot per round. If player `i` plays at step
//! `n` it earns `f_i` evaluated at the *empirical frequency vector* of all
//! plays so far, so every reward couples the competitive choice ("who
//! plays?") with the cooperative history ("how often has everyone
//! played?"). This crate simulates playing strategies over those
//! dynamics and verifies the surrounding machinery numerically:
//!
//! - [`simplex`]: the probability simplex, its free-coordinate chart, and
//!   the streaming empirical-frequency update (uniform and weighted).
//! - [`expr`]: the arithmetic expression language reward functions are
//!   written in.
//! - [`reward`]: reward systems, the mean payoff `q`, and its maximum `Q*`
//!   located by a deterministic grid sweep with local refinement.
//! - [`potential`]: construction of the scalar potential whose gradient
//!   matches the reward-difference field (`d = 1`), gradient-condition
//!   residuals, and a Jacobian-symmetry integrability probe for `d >= 2`.
//! - [`strategy`]: greedy, i.i.d., round-robin, constant, and replayed
//!   strategies.
//! - [`engine`]: the simulation loop with running payoff averages, the
//!   weighted-game variant, and weight-sequence validation.
//! - [`analysis`]: summation-by-parts and Kronecker-style tail
//!   diagnostics, the payoff-gap telescoping decomposition with its
//!   remainder envelope, the greedy gap function, and a tail-minimum
//!   liminf proxy.
//! - [`scenario`] / [`commands`]: JSON scenario files and the batch
//!   front-end used by the `potluck` binary.
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p potluck --example greedy_vs_iid
//! cargo run --release -p potluck --example qstar_grid
//! cargo run --release -p potluck --example build_potential
//! cargo run --release -p potluck --example kronecker_lemma
//! cargo run --release -p potluck --example weighted_run
//! cargo run --release -p potluck --example strategy_sweep
//! cargo run --release -p potluck --example payoff_decomposition
//! ```
//!
//! # Quick start
//!
//! ```
//! use potluck::{RewardSystem, Scenario, Strategy};
//!
//! // two players: f_0 = x, f_1 = 2(1 - x) in the frequency of player 1
//! let rewards = RewardSystem::parse(1, &["1*u1", "2*(1-u1)"]).unwrap();
//! let trajectory = Scenario::new(rewards, Strategy::Greedy, 10_000)
//!     .with_seed(7)
//!     .run()
//!     .unwrap();
//! // greedy play settles at the tie point 2/3 of the linear family
//! assert!((trajectory.bar_final.weight(1) - 2.0 / 3.0).abs() < 0.01);
//! ```

pub mod analysis;
pub mod commands;
pub mod engine;
pub mod error;
pub mod expr;
pub mod potential;
pub mod reward;
pub mod scenario;
pub mod simplex;
pub mod strategy;

pub use engine::{Scenario, Trajectory, WeightReport, WeightSequence};
pub use error::{Error, Result};
pub use expr::Expr;
pub use potential::Potential;
pub use reward::{QStarResult, RewardSystem};
pub use scenario::{LoadedScenario, RunMetadata, ScenarioFile};
pub use simplex::{DistPoint, SimplexPoint};
pub use strategy::Strategy;
