//! Sweep the i.i.d. strategy over a probability grid and confirm the
//! empirical payoff peaks where `q` does.
//!
//! Writes `summary.csv` (columns `p,A_final,q(p)`) into a temp directory
//! via the same code path as `potluck sweep`. Worker count follows
//! `POTLUCK_THREADS`, seeds derive as `seed + index`.
//!
//! ```bash
//! cargo run --release -p potluck --example strategy_sweep
//! ```

use std::fs;

use potluck::commands::cmd_sweep;
use potluck::scenario::{ScenarioFile, StrategySpec};
use potluck::Result;

fn main() -> Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let scenario = ScenarioFile {
        d: 1,
        rewards: vec!["1*u1".into(), "2*(1-u1)".into()],
        strategy: StrategySpec::Iid { p: vec![0.5, 0.5] },
        horizon: 100_000,
        x0: None,
        seed: 42,
        weights: None,
        record_stride: None,
    };
    let scenario_path = dir.path().join("iid.json");
    fs::write(
        &scenario_path,
        serde_json::to_string_pretty(&scenario).expect("serializes"),
    )
    .expect("write scenario");

    let outcome = cmd_sweep(
        &scenario_path,
        "strategy.p",
        "0:1:21",
        &dir.path().join("out"),
    )?;

    println!("p      A_final    q(p)");
    for row in &outcome.rows {
        println!("{:<6} {:<10.6} {:.6}", row.p, row.a_final, row.q_p);
    }
    let best = &outcome.rows[outcome.best_index];
    println!(
        "\nempirical best at p = {} with A_final = {:.6} (argmax of q is 0.5, Q* = 0.75)",
        best.p, best.a_final
    );
    println!("summary written to {}", outcome.summary_path.display());
    Ok(())
}
