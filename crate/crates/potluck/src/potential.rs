//! Potential functions on the free-coordinate simplex and the gradient
//! condition that ties them to a reward system.
//!
//! The condition under test is `grad(Phi)(v) = (f_i(tilde v) - f_0(tilde v))`
//! for `i = 1..d`. For `d = 1` the right-hand side always has an
//! antiderivative; [`build_potential_1d`] constructs it by cumulative
//! Simpson quadrature and stores a cubic-Hermite table (node values from
//! the quadrature, node slopes from the field itself, so polynomial fields
//! of degree <= 3 are reproduced exactly). For `d >= 2` no construction is
//! attempted; [`check_integrability`] probes the necessary symmetry of the
//! field Jacobian instead, and scenarios that need a potential supply one
//! as an expression.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::reward::RewardSystem;
use crate::simplex::{DistPoint, SimplexPoint, MASS_TOL};

/// Minimum node count for the tabulated 1-d potential.
pub const MIN_NODES: usize = 101;
/// Default node count.
pub const DEFAULT_NODES: usize = 1001;

/// A scalar function on the free-coordinate simplex.
#[derive(Debug, Clone)]
pub struct Potential {
    d: usize,
    form: Form,
}

#[derive(Debug, Clone)]
enum Form {
    /// Uniform table over [0, 1] with cubic Hermite evaluation between
    /// nodes; `slopes` holds the field values at the nodes.
    Table1d {
        values: Vec<f64>,
        slopes: Vec<f64>,
        spacing: f64,
    },
    /// Closed form, written in the `u` variables and evaluated at `tilde v`.
    Expr(Expr),
}

impl Potential {
    /// Wrap an expression as a potential on the `d`-dimensional chart.
    /// The expression is written in `u0..u{d}` and evaluated at `tilde v`.
    pub fn from_expr(d: usize, expr: Expr) -> Result<Self> {
        if let Some(max) = expr.max_var() {
            if max > d {
                return Err(Error::PlayerOutOfRange { index: max, d });
            }
        }
        Ok(Self {
            d,
            form: Form::Expr(expr),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Node spacing of the tabulated form, if any.
    pub fn node_spacing(&self) -> Option<f64> {
        match &self.form {
            Form::Table1d { spacing, .. } => Some(*spacing),
            Form::Expr(_) => None,
        }
    }

    pub fn eval(&self, v: &SimplexPoint) -> Result<f64> {
        if v.d() != self.d {
            return Err(Error::PotentialDimMismatch {
                expected: self.d,
                got: v.d(),
            });
        }
        match &self.form {
            Form::Table1d {
                values,
                slopes,
                spacing,
            } => {
                let x = v.coords()[0];
                let last = values.len() - 1;
                let cell = ((x / spacing).floor() as usize).min(last - 1);
                let x0 = cell as f64 * spacing;
                let t = ((x - x0) / spacing).clamp(0.0, 1.0);
                let (t2, t3) = (t * t, t * t * t);
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                Ok(h00 * values[cell]
                    + h10 * spacing * slopes[cell]
                    + h01 * values[cell + 1]
                    + h11 * spacing * slopes[cell + 1])
            }
            Form::Expr(expr) => Ok(expr.eval(v.to_dist().weights())?),
        }
    }
}

/// The reward-difference field `(f_i(tilde v) - f_0(tilde v))_{i=1..d}`.
pub fn gradient_field(f: &RewardSystem, v: &SimplexPoint) -> Result<Vec<f64>> {
    let u = v.to_dist();
    let base = f.reward(0, &u)?;
    (1..=f.d()).map(|i| Ok(f.reward(i, &u)? - base)).collect()
}

/// Antiderivative of the reward-difference field for `d = 1`, normalized
/// to `Phi(0) = 0`, by cumulative composite Simpson over `nodes` uniform
/// nodes on [0, 1].
pub fn build_potential_1d(f: &RewardSystem, nodes: usize) -> Result<Potential> {
    if f.d() != 1 {
        return Err(Error::PotentialUnsupportedDim { d: f.d() });
    }
    if nodes < MIN_NODES {
        return Err(Error::TooFewNodes {
            min: MIN_NODES,
            got: nodes,
        });
    }
    let spacing = 1.0 / (nodes - 1) as f64;
    let field = |x: f64| -> Result<f64> {
        let u = DistPoint::new(vec![1.0 - x, x])?;
        Ok(f.reward(1, &u)? - f.reward(0, &u)?)
    };

    let mut values = Vec::with_capacity(nodes);
    let mut slopes = Vec::with_capacity(nodes);
    values.push(0.0);
    let mut g_left = field(0.0)?;
    slopes.push(g_left);
    for j in 0..nodes - 1 {
        let x0 = j as f64 * spacing;
        let x1 = ((j + 1) as f64 * spacing).min(1.0);
        let g_mid = field(0.5 * (x0 + x1))?;
        let g_right = field(x1)?;
        let panel = (x1 - x0) / 6.0 * (g_left + 4.0 * g_mid + g_right);
        values.push(values[j] + panel);
        slopes.push(g_right);
        g_left = g_right;
    }

    Ok(Potential {
        d: 1,
        form: Form::Table1d {
            values,
            slopes,
            spacing,
        },
    })
}

/// Residual of the gradient condition at `v`: finite difference of `phi`
/// minus the reward-difference field, one component per free coordinate.
///
/// Central differences where the stencil stays inside the simplex,
/// second-order one-sided stencils within `h` of the boundary.
pub fn grad_condition_residual(
    f: &RewardSystem,
    phi: &Potential,
    v: &SimplexPoint,
    h: f64,
) -> Result<Vec<f64>> {
    let field = gradient_field(f, v)?;
    let mut residual = Vec::with_capacity(field.len());
    for (idx, field_i) in field.iter().enumerate() {
        let deriv = directional_derivative(phi, v, idx, h)?;
        residual.push(deriv - field_i);
    }
    Ok(residual)
}

fn directional_derivative(phi: &Potential, v: &SimplexPoint, idx: usize, h: f64) -> Result<f64> {
    let at = |delta: f64| shifted(v, idx, delta).map(|p| phi.eval(&p)).transpose();

    if let (Some(plus), Some(minus)) = (at(h)?, at(-h)?) {
        return Ok((plus - minus) / (2.0 * h));
    }
    if let (Some(p1), Some(p2)) = (at(h)?, at(2.0 * h)?) {
        return Ok((-3.0 * phi.eval(v)? + 4.0 * p1 - p2) / (2.0 * h));
    }
    if let (Some(m1), Some(m2)) = (at(-h)?, at(-2.0 * h)?) {
        return Ok((3.0 * phi.eval(v)? - 4.0 * m1 + m2) / (2.0 * h));
    }
    Err(Error::StepLeavesSimplex { h, coord: idx + 1 })
}

/// Shift free coordinate `idx` by `delta`, staying on the chart; `None`
/// when the shifted point leaves it.
fn shifted(v: &SimplexPoint, idx: usize, delta: f64) -> Option<SimplexPoint> {
    let mut coords = v.coords().to_vec();
    let moved = coords[idx] + delta;
    if !(-MASS_TOL..=1.0 + MASS_TOL).contains(&moved) {
        return None;
    }
    coords[idx] = moved.clamp(0.0, 1.0);
    let sum: f64 = coords.iter().sum();
    if sum > 1.0 + MASS_TOL {
        return None;
    }
    Some(SimplexPoint::new(coords).expect("checked bounds"))
}

/// Report of the Jacobian-symmetry probe for `d >= 2`.
#[derive(Debug, Clone, Serialize)]
pub struct IntegrabilityReport {
    /// Largest `|J_ij - J_ji|` observed.
    pub max_asymmetry: f64,
    /// 1-based free-coordinate pair realizing the maximum.
    pub worst_pair: (usize, usize),
    /// Chart coordinates of the worst sample.
    pub worst_point: Vec<f64>,
    pub samples: usize,
    pub h: f64,
}

/// Estimate `J_ij = d(field_i)/d(v_j)` by central differences at `samples`
/// interior points and report the largest asymmetry `|J_ij - J_ji|`.
///
/// A continuously differentiable gradient field has a symmetric Jacobian,
/// so a large asymmetry certifies that no potential exists; a small one is
/// a necessary-condition check only. Sample points are drawn from a
/// generator seeded with `seed` so reports are reproducible.
pub fn check_integrability(
    f: &RewardSystem,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<IntegrabilityReport> {
    let d = f.d();
    if d < 2 {
        return Err(Error::IntegrabilityNeedsD2 { d });
    }
    let margin = 2.0 * h;
    if (d + 1) as f64 * margin >= 0.5 {
        return Err(Error::StepLeavesSimplex { h, coord: 0 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IntegrabilityReport {
        max_asymmetry: 0.0,
        worst_pair: (1, 2),
        worst_point: vec![0.0; d],
        samples,
        h,
    };

    let field_at = |coords: &[f64]| -> Result<Vec<f64>> {
        gradient_field(f, &SimplexPoint::new(coords.to_vec())?)
    };

    for _ in 0..samples {
        let v = interior_sample(&mut rng, d, margin);
        // Jacobian columns: derivative of the whole field in direction j
        let mut jac = vec![vec![0.0; d]; d];
        for j in 0..d {
            let mut plus = v.clone();
            plus[j] += h;
            let mut minus = v.clone();
            minus[j] -= h;
            let fp = field_at(&plus)?;
            let fm = field_at(&minus)?;
            for i in 0..d {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        for (i, row) in jac.iter().enumerate() {
            for j in i + 1..d {
                let asym = (row[j] - jac[j][i]).abs();
                if asym > report.max_asymmetry {
                    report.max_asymmetry = asym;
                    report.worst_pair = (i + 1, j + 1);
                    report.worst_point = v.clone();
                }
            }
        }
    }
    Ok(report)
}

/// Uniform sample of the chart interior with every barycentric coordinate
/// at least `margin`.
fn interior_sample(rng: &mut ChaCha8Rng, d: usize, margin: f64) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut gaps = Vec::with_capacity(d + 1);
    let mut prev = 0.0;
    for &c in &cuts {
        gaps.push(c - prev);
        prev = c;
    }
    gaps.push(1.0 - prev);
    let scale = 1.0 - (d + 1) as f64 * margin;
    // drop the zeroth barycentric coordinate: the rest are the chart coords
    gaps[1..].iter().map(|g| margin + scale * g).collect()
}
