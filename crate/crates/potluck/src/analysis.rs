//! Numerical diagnostics for the payoff-rate machinery: the summation-by
//! parts identity, the Kronecker-style conclusion, the payoff-gap
//! telescoping decomposition with its remainder envelope, the greedy gap
//! function, and a tail-minimum liminf proxy.

use std::io::{self, Write};

use serde::Serialize;

use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::reward::RewardSystem;
use crate::simplex::DistPoint;

/// Tail oscillation of the partial sums `C_n` below which the finite
/// liminf hypothesis is considered satisfied. Scale-free: logarithmic
/// divergence shows up as a constant ~0.22 oscillation over the last 20%
/// of any horizon, convergent series as a vanishing one.
pub const C_OSCILLATION_BOUND: f64 = 0.1;

/// A numerator series `a` with positive nondecreasing denominators `b`.
#[derive(Debug, Clone)]
pub struct SeriesPair {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl SeriesPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptySeries);
        }
        if a.len() != b.len() {
            return Err(Error::SeriesLengthMismatch {
                a_len: a.len(),
                b_len: b.len(),
            });
        }
        for (index, &value) in b.iter().enumerate() {
            if value <= 0.0 {
                return Err(Error::NonPositiveDenominator { index, value });
            }
            if index > 0 && value < b[index - 1] {
                return Err(Error::DecreasingDenominator {
                    index,
                    value,
                    prev: b[index - 1],
                });
            }
        }
        Ok(Self { a, b })
    }

    /// `a_k = (-1)^{k+1}`, `b_k = k`: the partial sums `C_n` converge to
    /// ln 2 while the averages oscillate to 0.
    pub fn alternating(len: usize) -> Self {
        let a = (1..=len)
            .map(|k| if k % 2 == 1 { 1.0 } else { -1.0 })
            .collect();
        let b = (1..=len).map(|k| k as f64).collect();
        Self { a, b }
    }

    /// `a_k = 1`, `b_k = k`: `C_n` is the harmonic series, so the finite
    /// liminf hypothesis fails while the averages sit at 1.
    pub fn harmonic(len: usize) -> Self {
        Self {
            a: vec![1.0; len],
            b: (1..=len).map(|k| k as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }
}

/// Max over `n` of the residual of the summation-by-parts identity
/// `(1/b_n) sum_{k<=n} a_k = C_n - (1/b_n) sum_{k<=n} C_{k-1} (b_k - b_{k-1})`
/// with `C_n = sum_{k<=n} a_k / b_k`, `C_0 = 0`, `b_0 = 0`.
///
/// The identity is exact algebra, so anything beyond accumulated rounding
/// indicates an implementation bug.
pub fn abel_identity_residual(s: &SeriesPair) -> f64 {
    let mut c = 0.0;
    let mut sum_a = 0.0;
    let mut sum_c_db = 0.0;
    let mut prev_b = 0.0;
    let mut residual: f64 = 0.0;
    for (&a_k, &b_k) in s.a.iter().zip(&s.b) {
        sum_a += a_k;
        sum_c_db += c * (b_k - prev_b);
        c += a_k / b_k;
        prev_b = b_k;
        let lhs = sum_a / b_k;
        let rhs = c - sum_c_db / b_k;
        residual = residual.max((lhs - rhs).abs());
    }
    residual
}

/// Diagnostic for the Kronecker-style conclusion: if the partial sums
/// `C_n = sum a_k / b_k` have a finite liminf, then the tail of
/// `(1/b_n) sum a_k` must dip to 0 or below.
#[derive(Debug, Clone, Serialize)]
pub struct KroneckerDiagnostic {
    pub len: usize,
    /// Range of `C_n` over the last 20% of the series.
    pub c_tail_min: f64,
    pub c_tail_max: f64,
    pub c_tail_oscillation: f64,
    /// Tail oscillation bounded: the finite-liminf hypothesis looks
    /// satisfied.
    pub hypothesis_finite: bool,
    /// Minimum of `(1/b_n) sum_{k<=n} a_k` over the tail window.
    pub tail_min_avg: f64,
    pub eps: f64,
    /// Consistent with the conclusion: either the hypothesis fails or the
    /// tail minimum is below `eps`.
    pub consistent: bool,
}

/// Check the conclusion numerically over the last 20% of the series.
pub fn kronecker_check(s: &SeriesPair, eps: f64) -> Result<KroneckerDiagnostic> {
    let len = s.len();
    if len < 100 {
        return Err(Error::SeriesTooShort { min: 100, got: len });
    }
    let tail_start = len - (len / 5).max(1);

    let mut c = 0.0;
    let mut sum_a = 0.0;
    let mut c_tail_min = f64::INFINITY;
    let mut c_tail_max = f64::NEG_INFINITY;
    let mut tail_min_avg = f64::INFINITY;
    for (k, (&a_k, &b_k)) in s.a.iter().zip(&s.b).enumerate() {
        sum_a += a_k;
        c += a_k / b_k;
        if k >= tail_start {
            c_tail_min = c_tail_min.min(c);
            c_tail_max = c_tail_max.max(c);
            tail_min_avg = tail_min_avg.min(sum_a / b_k);
        }
    }

    let c_tail_oscillation = c_tail_max - c_tail_min;
    let hypothesis_finite = c_tail_oscillation <= C_OSCILLATION_BOUND;
    Ok(KroneckerDiagnostic {
        len,
        c_tail_min,
        c_tail_max,
        c_tail_oscillation,
        hypothesis_finite,
        tail_min_avg,
        eps,
        consistent: !hypothesis_finite || tail_min_avg <= eps,
    })
}

/// Per-step decomposition of the payoff gap along a trajectory.
///
/// `gap_avg[n-1]` is `G_n = (1/n) sum_{k<n} (r_{k+1} - q(bar x_k))`,
/// `telescope_avg[n-1]` is
/// `T_n = (1/n) sum_{k<n} (k+1)(Phi(hat x_{k+1}) - Phi(hat x_k))`, and the
/// remainder is defined as the residual `R_n = T_n - G_n`. When `Phi`
/// solves the gradient condition and its gradient is `L`-Lipschitz, the
/// remainder obeys the envelope `2 L ln(n+1) / n`.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub lipschitz: f64,
    pub gap_avg: Vec<f64>,
    pub telescope_avg: Vec<f64>,
    pub remainder: Vec<f64>,
    pub envelope: Vec<f64>,
    /// `|R_n| <= envelope(n)` for every `n >= 10`.
    pub remainder_within_envelope: bool,
    pub first_envelope_violation: Option<u64>,
    /// `|sum (Phi(hat x_{k+1}) - Phi(hat x_k)) - (Phi(hat x_N) - Phi(hat x_0))|`.
    pub telescoping_residual: f64,
}

impl DecompositionReport {
    pub fn len(&self) -> usize {
        self.gap_avg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gap_avg.is_empty()
    }

    /// CSV with header `n,G_n,T_n,R_n,envelope`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,G_n,T_n,R_n,envelope")?;
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                i + 1,
                self.gap_avg[i],
                self.telescope_avg[i],
                self.remainder[i],
                self.envelope[i]
            )?;
        }
        Ok(())
    }
}

/// Decompose the payoff gap of a stride-1 trajectory against a potential
/// with `lipschitz`-Lipschitz gradient.
pub fn decompose_payoff_gap(
    t: &Trajectory,
    f: &RewardSystem,
    phi: &Potential,
    lipschitz: f64,
) -> Result<DecompositionReport> {
    if t.stride != 1 {
        return Err(Error::NeedsFullTrajectory { stride: t.stride });
    }
    if phi.d() != t.d {
        return Err(Error::PotentialDimMismatch {
            expected: t.d,
            got: phi.d(),
        });
    }
    let n_steps = t.steps.len();
    debug_assert_eq!(n_steps as u64, t.horizon);

    let mut gap_avg = Vec::with_capacity(n_steps);
    let mut telescope_avg = Vec::with_capacity(n_steps);
    let mut remainder = Vec::with_capacity(n_steps);
    let mut envelope = Vec::with_capacity(n_steps);
    let mut within = true;
    let mut first_violation = None;

    let mut gap_sum = 0.0;
    let mut tele_sum = 0.0;
    let mut plain_tele_sum = 0.0;
    let mut phi_prev = phi.eval(&t.steps[0].bar_before.free_coords())?;
    let phi_first = phi_prev;

    for k in 0..n_steps {
        let step = &t.steps[k];
        let bar_next = if k + 1 < n_steps {
            &t.steps[k + 1].bar_before
        } else {
            &t.bar_final
        };
        let phi_next = phi.eval(&bar_next.free_coords())?;

        gap_sum += step.reward - f.q_value(&step.bar_before)?;
        let dphi = phi_next - phi_prev;
        tele_sum += (k + 1) as f64 * dphi;
        plain_tele_sum += dphi;
        phi_prev = phi_next;

        let n = (k + 1) as f64;
        let g_n = gap_sum / n;
        let t_n = tele_sum / n;
        let r_n = t_n - g_n;
        let env = 2.0 * lipschitz * (n + 1.0).ln() / n;
        if k + 1 >= 10 && r_n.abs() > env {
            within = false;
            first_violation.get_or_insert((k + 1) as u64);
        }
        gap_avg.push(g_n);
        telescope_avg.push(t_n);
        remainder.push(r_n);
        envelope.push(env);
    }

    let telescoping_residual = (plain_tele_sum - (phi_prev - phi_first)).abs();

    Ok(DecompositionReport {
        lipschitz,
        gap_avg,
        telescope_avg,
        remainder,
        envelope,
        remainder_within_envelope: within,
        first_envelope_violation: first_violation,
        telescoping_residual,
    })
}

/// The greedy strategy's instantaneous excess over the mean payoff:
/// `max_i f_i(bar) - q(bar)`, nonnegative because the max dominates any
/// convex combination.
pub fn greedy_gap(f: &RewardSystem, bar: &DistPoint) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for i in 0..=f.d() {
        best = best.max(f.reward(i, bar)?);
    }
    Ok(best - f.q_value(bar)?)
}

/// Liminf proxy: the minimum over the final `ceil(tail_fraction * len)`
/// entries. Conservative in the direction the payoff bound needs.
pub fn liminf_estimate(series: &[f64], tail_fraction: f64) -> Result<f64> {
    if series.len() < 10 {
        return Err(Error::SeriesTooShort {
            min: 10,
            got: series.len(),
        });
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::BadTailFraction {
            fraction: tail_fraction,
        });
    }
    let tail_len = (tail_fraction * series.len() as f64).ceil() as usize;
    let tail = &series[series.len() - tail_len.min(series.len())..];
    tail.iter()
        .copied()
        .reduce(f64::min)
        .ok_or(Error::EmptyTail)
}
