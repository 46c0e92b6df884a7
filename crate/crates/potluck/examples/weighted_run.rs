//! Weighted games: admissible weight sequences leave the limits of the
//! uniform game untouched, and the validator rejects sequences whose
//! ratio `delta_n / S_n` does not vanish.
//!
//! ```bash
//! cargo run --release -p potluck --example weighted_run
//! ```

use potluck::engine::validate_weights;
use potluck::{Result, RewardSystem, Scenario, Strategy, WeightSequence};

fn main() -> Result<()> {
    let rewards = RewardSystem::parse(1, &["1*u1", "2*(1-u1)"])?;
    let horizon = 200_000;

    let uniform = Scenario::new(rewards.clone(), Strategy::Greedy, horizon).run()?;
    println!(
        "uniform greedy:      bar(1) = {:.6}, payoff rate = {:.6}",
        uniform.bar_final.weight(1),
        uniform.avg_final
    );

    for (label, weights) in [
        ("delta_n = sqrt(n) ", WeightSequence::Power { theta: 0.5 }),
        ("delta_n = n^(-1/2)", WeightSequence::Power { theta: -0.5 }),
    ] {
        let t = Scenario::new(rewards.clone(), Strategy::Greedy, horizon)
            .with_weights(weights)
            .run()?;
        println!(
            "{label}: bar(1) = {:.6}, payoff rate = {:.6}",
            t.bar_final.weight(1),
            t.avg_final
        );
    }

    // geometric weights fail the vanishing-ratio condition
    let geometric = WeightSequence::Geometric { ratio: 2.0 };
    let report = validate_weights(&geometric, horizon)?;
    println!(
        "\ndelta_n = 2^n validation: pass = {}, tail delta_n/S_n = {:.3} ({:?})",
        report.pass, report.tail_max_ratio, report.tail_trend
    );
    let refused = Scenario::new(rewards.clone(), Strategy::Greedy, horizon)
        .with_weights(geometric.clone())
        .run();
    println!("engine without --force: {}", refused.unwrap_err());

    // forced anyway: the state chases the most recent plays instead of
    // averaging, so the empirical frequency keeps bouncing
    let forced = Scenario::new(rewards.clone(), Strategy::Greedy, horizon)
        .with_weights(geometric)
        .with_force(true)
        .run()?;
    let q_star = rewards.q_star(1.0 / 200.0, 3)?.value;
    println!(
        "forced geometric run: bar(1) = {:.6}, payoff rate = {:.6}",
        forced.bar_final.weight(1),
        forced.avg_final
    );
    println!(
        "  -> exceeds Q* = {q_star:.2}: with delta_n/S_n stuck at 1/2 the payoff-rate bound no longer applies"
    );
    Ok(())
}
