//! The reward system `f = (f_0, ..., f_d)`, the mean payoff `q`, and its
//! maximum `Q*` over the simplex.
//!
//! `q(u) = sum_i u_i f_i(u)` is the expected one-step reward when the
//! player is drawn from `u` and the empirical state sits at `u`. `Q*` is
//! found by a deterministic sweep of the regular simplex grid followed by
//! local 10x refinements around the incumbent; determinism (ties broken
//! toward the lexicographically smallest point) keeps the result
//! independent of any partitioning of the sweep.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::simplex::DistPoint;

/// Default grid step for the `Q*` sweep.
pub const DEFAULT_RESOLUTION: f64 = 1.0 / 200.0;
/// Default number of local refinement rounds.
pub const DEFAULT_REFINE_ITERS: usize = 3;
/// Hard cap on grid size before the sweep refuses to run.
const GRID_POINT_GUARD: f64 = 1e8;
/// Largest dimension the grid sweep accepts.
const MAX_GRID_DIM: usize = 6;

/// `d + 1` reward expressions, one per player, over points of the simplex.
#[derive(Debug, Clone)]
pub struct RewardSystem {
    d: usize,
    exprs: Vec<Expr>,
}

/// Result of the `Q*` grid search.
#[derive(Debug, Clone)]
pub struct QStarResult {
    pub value: f64,
    pub argmax: DistPoint,
    /// Grid step of the finest sweep that produced `argmax`.
    pub grid_resolution: f64,
    pub refined: bool,
}

impl RewardSystem {
    /// Parse one expression per player and smoke-check each at the uniform
    /// distribution.
    pub fn parse<S: AsRef<str>>(d: usize, sources: &[S]) -> Result<Self> {
        if sources.len() != d + 1 {
            return Err(Error::RewardCount {
                d,
                got: sources.len(),
            });
        }
        let exprs = sources
            .iter()
            .map(|s| expr::parse(s.as_ref(), d))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let sys = Self { d, exprs };
        let uniform = DistPoint::uniform(d);
        for i in 0..=d {
            sys.reward(i, &uniform)?;
        }
        Ok(sys)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    /// Reward of player `i` at state `u`.
    pub fn reward(&self, i: usize, u: &DistPoint) -> Result<f64> {
        if i > self.d {
            return Err(Error::PlayerOutOfRange {
                index: i,
                d: self.d,
            });
        }
        self.exprs[i]
            .eval(u.weights())
            .map_err(|source| Error::RewardEval { player: i, source })
    }

    /// Mean payoff `q(u) = sum_i u_i f_i(u)`.
    pub fn q_value(&self, u: &DistPoint) -> Result<f64> {
        self.q_slice(u.weights())
    }

    /// Asymptotic payoff rate of the i.i.d. strategy with distribution `p`:
    /// the empirical state converges to `p`, so the rate is `q(p)`.
    pub fn iid_payoff(&self, p: &DistPoint) -> Result<f64> {
        self.q_value(p)
    }

    pub(crate) fn q_slice(&self, u: &[f64]) -> Result<f64> {
        let mut q = 0.0;
        for (i, e) in self.exprs.iter().enumerate() {
            let f_i = e
                .eval(u)
                .map_err(|source| Error::RewardEval { player: i, source })?;
            q += u[i] * f_i;
        }
        Ok(q)
    }

    /// Maximize `q` over the simplex: exhaustive sweep of the regular grid
    /// with step `resolution`, then `refine_iters` rounds of local search
    /// with the cell shrunk 10x around the incumbent.
    pub fn q_star(&self, resolution: f64, refine_iters: usize) -> Result<QStarResult> {
        if !(resolution > 0.0 && resolution < 1.0) {
            return Err(Error::BadResolution { resolution });
        }
        if self.d > MAX_GRID_DIM {
            return Err(Error::DimensionTooLarge { d: self.d });
        }
        let m = (1.0 / resolution).round().max(1.0) as u64;
        let points = grid_point_count(m, self.d);
        if points > GRID_POINT_GUARD {
            return Err(Error::GridTooLarge { points });
        }

        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut scratch = vec![0.0; self.d + 1];
        self.sweep_base(m, 0, m, 0.0, &mut scratch, &mut best)?;
        let (mut best_q, mut best_u) = best.expect("grid holds at least one point");

        let mut res = 1.0 / m as f64;
        let mut refined = false;
        for _ in 0..refine_iters {
            let fine = res / 10.0;
            if (21f64).powi(self.d as i32) > GRID_POINT_GUARD {
                return Err(Error::GridTooLarge {
                    points: (21f64).powi(self.d as i32),
                });
            }
            let center: Vec<f64> = best_u[1..].to_vec();
            let mut offsets = vec![0i64; self.d];
            self.sweep_local(&center, fine, 0, &mut offsets, &mut best_q, &mut best_u)?;
            res = fine;
            refined = true;
        }

        Ok(QStarResult {
            value: best_q,
            argmax: DistPoint::new(best_u)?,
            grid_resolution: res,
            refined,
        })
    }

    fn sweep_base(
        &self,
        m: u64,
        coord: usize,
        remaining: u64,
        partial: f64,
        u: &mut Vec<f64>,
        best: &mut Option<(f64, Vec<f64>)>,
    ) -> Result<()> {
        if coord == self.d {
            u[self.d] = (1.0 - partial).max(0.0);
            self.consider(u, best)?;
            return Ok(());
        }
        for k in 0..=remaining {
            let w = k as f64 / m as f64;
            u[coord] = w;
            self.sweep_base(m, coord + 1, remaining - k, partial + w, u, best)?;
        }
        Ok(())
    }

    fn sweep_local(
        &self,
        center: &[f64],
        step: f64,
        coord: usize,
        offsets: &mut Vec<i64>,
        best_q: &mut f64,
        best_u: &mut Vec<f64>,
    ) -> Result<()> {
        if coord == self.d {
            let mut u = Vec::with_capacity(self.d + 1);
            let mut sum = 0.0;
            for (c, &j) in center.iter().zip(offsets.iter()) {
                let v = c + j as f64 * step;
                if !(0.0..=1.0).contains(&v) {
                    return Ok(());
                }
                u.push(v);
                sum += v;
            }
            if sum > 1.0 {
                return Ok(());
            }
            u.insert(0, 1.0 - sum);
            let mut cand = Some((*best_q, std::mem::take(best_u)));
            self.consider(&u, &mut cand)?;
            let (q, w) = cand.expect("incumbent preserved");
            *best_q = q;
            *best_u = w;
            return Ok(());
        }
        for j in -10..=10 {
            offsets[coord] = j;
            self.sweep_local(center, step, coord + 1, offsets, best_q, best_u)?;
        }
        Ok(())
    }

    fn consider(&self, u: &[f64], best: &mut Option<(f64, Vec<f64>)>) -> Result<()> {
        let q = self.q_slice(u)?;
        let replace = match best {
            None => true,
            Some((bq, bu)) => q > *bq || (q == *bq && lex_less(u, bu)),
        };
        if replace {
            *best = Some((q, u.to_vec()));
        }
        Ok(())
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Number of points of the regular grid: C(m + d, d).
fn grid_point_count(m: u64, d: usize) -> f64 {
    let mut count = 1.0;
    for i in 1..=d as u64 {
        count *= (m + i) as f64 / i as f64;
    }
    count
}
