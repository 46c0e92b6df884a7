//! Geometry of the probability simplex and its free-coordinate chart.
//!
//! Two point types live here. [`DistPoint`] is a full probability vector
//! `(u_0, ..., u_d)` over `d + 1` players; [`SimplexPoint`] holds the free
//! coordinates `(v_1, ..., v_d)` with `sum v_i <= 1`, the chart in which
//! potential functions are defined. The two are mutually inverse via
//! [`SimplexPoint::to_dist`] (prepend the complementary mass) and
//! [`DistPoint::free_coords`] (drop coordinate 0).
//!
//! The empirical frequency of a play sequence evolves by the streaming
//! update `bar <- bar + (vertex(i) - bar) / n`; that recursion is the
//! canonical implementation, and the batch average exists only as a test
//! oracle.

use crate::error::{Error, Result};

/// Absolute tolerance on `sum(weights) == 1`.
pub const MASS_TOL: f64 = 1e-12;

/// A point of the probability simplex over `d + 1` players.
///
/// Invariants: every weight lies in `[0, 1]` and the weights sum to 1
/// within [`MASS_TOL`]. Validation never repairs a point: construction
/// either passes or errors.
#[derive(Debug, Clone, PartialEq)]
pub struct DistPoint {
    weights: Vec<f64>,
}

/// Free coordinates `(v_1, ..., v_d)` of a distribution: each in `[0, 1]`,
/// sum at most `1 + MASS_TOL`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl DistPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CoordOutOfRange {
                    kind: "weight",
                    index,
                    value,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::MassNotOne { sum, tol: MASS_TOL });
        }
        Ok(Self { weights })
    }

    /// The uniform distribution over `d + 1` players.
    pub fn uniform(d: usize) -> Self {
        let n = d + 1;
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on player `i` (the indicator of a single play).
    pub fn vertex(i: usize, d: usize) -> Result<Self> {
        if i > d {
            return Err(Error::PlayerOutOfRange { index: i, d });
        }
        let mut weights = vec![0.0; d + 1];
        weights[i] = 1.0;
        Ok(Self { weights })
    }

    /// Number of free coordinates (players minus one).
    pub fn d(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Drop coordinate 0, leaving the free coordinates.
    pub fn free_coords(&self) -> SimplexPoint {
        SimplexPoint {
            coords: self.weights[1..].to_vec(),
        }
    }

    /// Empirical-frequency update after observation `n >= 1` lands on
    /// player `i`: `self + (vertex(i) - self) / n`.
    ///
    /// At `n = 1` the starting distribution is erased exactly; for any
    /// start, the iterate at step `n` equals the batch average of the
    /// first `n` observations.
    pub fn updated(&self, i: usize, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroStep);
        }
        if i > self.d() {
            return Err(Error::PlayerOutOfRange {
                index: i,
                d: self.d(),
            });
        }
        Ok(self.updated_by_step(i, 1.0 / n as f64))
    }

    /// Weighted empirical update: `self + (delta / cum)(vertex(i) - self)`,
    /// where `cum` is the cumulative weight including `delta`.
    pub fn updated_weighted(&self, i: usize, delta: f64, cum: f64) -> Result<Self> {
        if cum <= 0.0 {
            return Err(Error::NonPositiveCumWeight { sum: cum });
        }
        if i > self.d() {
            return Err(Error::PlayerOutOfRange {
                index: i,
                d: self.d(),
            });
        }
        Ok(self.updated_by_step(i, delta / cum))
    }

    /// Shared update kernel; `step` must lie in `[0, 1]`.
    pub(crate) fn updated_by_step(&self, i: usize, step: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&step));
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(j, &w)| {
                let target = if j == i { 1.0 } else { 0.0 };
                w + (target - w) * step
            })
            .collect();
        let out = Self { weights };
        debug_assert!(out.weights.iter().all(|w| (0.0..=1.0).contains(w)));
        out
    }
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        for (index, &value) in coords.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::CoordOutOfRange {
                    kind: "coordinate",
                    // free coordinates are 1-based in the chart
                    index: index + 1,
                    value,
                });
            }
        }
        let sum: f64 = coords.iter().sum();
        if sum > 1.0 + MASS_TOL {
            return Err(Error::CoordSumExceedsOne { sum });
        }
        Ok(Self { coords })
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Prepend the complementary mass `1 - sum(v)`, producing the full
    /// distribution this chart point represents.
    pub fn to_dist(&self) -> DistPoint {
        let sum: f64 = self.coords.iter().sum();
        let mut weights = Vec::with_capacity(self.coords.len() + 1);
        weights.push((1.0 - sum).max(0.0));
        weights.extend_from_slice(&self.coords);
        DistPoint { weights }
    }
}
