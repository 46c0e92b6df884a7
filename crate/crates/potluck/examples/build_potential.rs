//! Build the potential for a two-player game, verify the gradient
//! condition, and probe integrability for a three-player game.
//!
//! For two players the reward-difference field always has an
//! antiderivative; the builder integrates it with composite Simpson and
//! the residual check compares finite differences of the table against
//! the field. For three or more players a potential need not exist: the
//! Jacobian-symmetry probe reports how far a field is from integrable.
//!
//! ```bash
//! cargo run --release -p potluck --example build_potential
//! ```

use potluck::potential::{build_potential_1d, check_integrability, grad_condition_residual};
use potluck::{Result, RewardSystem, SimplexPoint};

fn main() -> Result<()> {
    // f_0 = x, f_1 = 2(1 - x): the potential is 2v - 1.5 v^2 up to a constant
    let rewards = RewardSystem::parse(1, &["1*u1", "2*(1-u1)"])?;
    let phi = build_potential_1d(&rewards, 1001)?;

    println!("tabulated potential vs symbolic 2v - 1.5v^2:");
    for v in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let got = phi.eval(&SimplexPoint::new(vec![v])?)?;
        let want = 2.0 * v - 1.5 * v * v;
        println!(
            "  phi({v:.2}) = {got:.12}   error {:.2e}",
            (got - want).abs()
        );
    }

    let mut max_residual: f64 = 0.0;
    for k in 0..=100 {
        let v = SimplexPoint::new(vec![k as f64 / 100.0])?;
        let res = grad_condition_residual(&rewards, &phi, &v, 1e-5)?;
        max_residual = max_residual.max(res[0].abs());
    }
    println!("max gradient-condition residual over [0,1]: {max_residual:.2e}\n");

    // integrable three-player field: symmetric Jacobian
    let symmetric = RewardSystem::parse(2, &["u0", "u1", "u2"])?;
    let report = check_integrability(&symmetric, 200, 1e-4, 1)?;
    println!(
        "f_i = u_i (integrable): max |J_ij - J_ji| = {:.2e}",
        report.max_asymmetry
    );

    // rotational field: no potential exists and the probe says so
    let curl = RewardSystem::parse(2, &["0", "u2", "0"])?;
    let report = check_integrability(&curl, 200, 1e-4, 1)?;
    println!(
        "f = (0, u2, 0) (rotational): max |J_ij - J_ji| = {:.3} at v = {:?}",
        report.max_asymmetry, report.worst_point
    );
    Ok(())
}
