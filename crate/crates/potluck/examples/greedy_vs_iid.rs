//! Greedy play versus the optimal i.i.d. strategy on the linear family
//! `f_0(x) = a x`, `f_1(x) = b (1 - x)`.
//!
//! With `a != b` the greedy rule locks the empirical frequency at the tie
//! point `b / (a + b)` and earns `a b / (a + b)`, strictly below the best
//! rate `(a + b) / 4` that drawing the player i.i.d. from (1/2, 1/2)
//! achieves. With `a = b` the two coincide.
//!
//! ```bash
//! cargo run --release -p potluck --example greedy_vs_iid
//! ```

use potluck::{DistPoint, Result, RewardSystem, Scenario, Strategy};

fn report(a: f64, b: f64, horizon: u64) -> Result<()> {
    let rewards = RewardSystem::parse(1, &[format!("{a}*u1"), format!("{b}*(1-u1)")])?;
    let q_star = rewards.q_star(1.0 / 200.0, 3)?;

    let greedy = Scenario::new(rewards.clone(), Strategy::Greedy, horizon).run()?;
    let half = DistPoint::new(vec![0.5, 0.5])?;
    let iid = Scenario::new(rewards.clone(), Strategy::Iid(half.clone()), horizon)
        .with_seed(42)
        .run()?;

    println!("a = {a}, b = {b}  (horizon {horizon})");
    println!(
        "  Q* (grid)           = {:.6} at u = {:?}",
        q_star.value,
        q_star.argmax.weights()
    );
    println!(
        "  greedy: bar(1) -> {:.6} (tie point b/(a+b) = {:.6}), payoff rate {:.6} (ab/(a+b) = {:.6})",
        greedy.bar_final.weight(1),
        b / (a + b),
        greedy.avg_final,
        a * b / (a + b)
    );
    println!(
        "  iid(1/2): payoff rate {:.6} vs q(1/2) = {:.6}",
        iid.avg_final,
        rewards.iid_payoff(&half)?
    );
    let shortfall = q_star.value - greedy.avg_final;
    println!("  greedy shortfall from Q*: {shortfall:.6}\n");
    Ok(())
}

fn main() -> Result<()> {
    // asymmetric rewards: greedy is strictly suboptimal
    report(1.0, 2.0, 200_000)?;
    // symmetric rewards: greedy becomes optimal
    report(1.0, 1.0, 200_000)?;
    Ok(())
}
