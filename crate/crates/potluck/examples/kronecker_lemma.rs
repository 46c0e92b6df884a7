//! Exercise the summation-by-parts identity and the Kronecker-style tail
//! diagnostic on three series.
//!
//! The identity `(1/b_n) sum a_k = C_n - (1/b_n) sum C_{k-1} db_k` holds
//! exactly, so its residual measures nothing but rounding. The tail check
//! then asks: do the partial sums `C_n` settle (finite liminf)? If so,
//! the averages `(1/b_n) sum a_k` must dip to zero or below.
//!
//! ```bash
//! cargo run --release -p potluck --example kronecker_lemma
//! ```

use potluck::analysis::{abel_identity_residual, kronecker_check, SeriesPair};
use potluck::Result;

fn show(name: &str, series: &SeriesPair) -> Result<()> {
    let residual = abel_identity_residual(series);
    let diag = kronecker_check(series, 1e-4)?;
    println!("{name} (n = {}):", series.len());
    println!("  summation-by-parts residual: {residual:.2e}");
    println!(
        "  C_n tail range [{:.6}, {:.6}] (oscillation {:.2e}) -> finite liminf: {}",
        diag.c_tail_min, diag.c_tail_max, diag.c_tail_oscillation, diag.hypothesis_finite
    );
    println!(
        "  tail min of (1/b_n) sum a_k: {:.3e} -> consistent: {}\n",
        diag.tail_min_avg, diag.consistent
    );
    Ok(())
}

fn main() -> Result<()> {
    let n = 100_000;

    // C_n -> ln 2 = 0.693147...; the averages hit 0 every other step
    show(
        "alternating a_k = (-1)^(k+1), b_k = k",
        &SeriesPair::alternating(n),
    )?;

    // C_n is the harmonic series: the hypothesis fails, averages stay at 1
    show("harmonic a_k = 1, b_k = k", &SeriesPair::harmonic(n))?;

    // damped alternating numerators: C_n converges and the averages
    // vanish like 1/n
    let a: Vec<f64> = (1..=n)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (k as f64).powf(-0.5)
        })
        .collect();
    let b: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    show(
        "damped a_k = (-1)^(k+1) k^(-1/2), b_k = k",
        &SeriesPair::new(a, b)?,
    )?;
    Ok(())
}
