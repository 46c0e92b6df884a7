//! Locate `Q* = max q` on the simplex by the deterministic grid sweep,
//! watching the value stay monotone as the cell shrinks 10x per round.
//!
//! ```bash
//! cargo run --release -p potluck --example qstar_grid
//! ```

use potluck::{Result, RewardSystem};

fn main() -> Result<()> {
    // three players with coupled rewards
    let rewards = RewardSystem::parse(2, &["u1*u2", "1-u1", "max(u0, u2)"])?;

    println!("refinement rounds vs Q* estimate (base grid 1/50):");
    for refine in 0..=3 {
        let r = rewards.q_star(1.0 / 50.0, refine)?;
        println!(
            "  refine {refine}: Q* = {:.8} at u = [{:.5}, {:.5}, {:.5}] (cell {:.0e})",
            r.value,
            r.argmax.weight(0),
            r.argmax.weight(1),
            r.argmax.weight(2),
            r.grid_resolution
        );
    }

    // sum of squares is maximized at a vertex
    let squares = RewardSystem::parse(2, &["u0", "u1", "u2"])?;
    let r = squares.q_star(1e-3, 0)?;
    println!(
        "\nq(u) = sum u_i^2: Q* = {:.6} at u = {:?}",
        r.value,
        r.argmax.weights()
    );
    Ok(())
}
