use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Uniform frequency grid, in units of γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FrequencyGrid {
    pub const DEFAULT_POINTS: usize = 4001;

    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid(format!("bounds must be finite, got [{min}, {max}]")));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("empty range [{min}, {max}]")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {points}")));
        }
        Ok(Self { min, max, points })
    }

    /// Symmetric window ±(1.5 Ω₁ + 5γ) that covers every sideband.
    pub fn default_for(p: &SystemParams) -> Self {
        let r = (4.0 * p.omega_a * p.omega_a + p.omega_b * p.omega_b).sqrt();
        let omega1 = r + p.omega_b;
        let half = 1.5 * omega1 + 5.0 * p.gamma;
        Self {
            min: -half,
            max: half,
            points: Self::DEFAULT_POINTS,
        }
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    /// Same step, span scaled by `factor` about the centre.
    pub fn widened(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let mid = 0.5 * (self.min + self.max);
        let half = 0.5 * (self.max - self.min) * factor as f64;
        Self {
            min: mid - half,
            max: mid + half,
            points: (self.points - 1) * factor + 1,
        }
    }

    /// Grid nodes. Mirror-image nodes of a grid centred on zero are exact
    /// negatives of each other.
    pub fn values(&self) -> Vec<f64> {
        let mid = 0.5 * (self.min + self.max);
        let half = 0.5 * (self.max - self.min);
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| mid + half * ((2.0 * k as f64 - last) / last))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(FrequencyGrid::new(1.0, 1.0, 10).is_err());
        assert!(FrequencyGrid::new(0.0, 1.0, 1).is_err());
        assert!(FrequencyGrid::new(f64::NAN, 1.0, 10).is_err());
        assert!(FrequencyGrid::new(-1.0, 1.0, 2).is_ok());
    }

    #[test]
    fn symmetric_nodes_are_exact_mirrors() {
        let g = FrequencyGrid::new(-37.1, 37.1, 4001).unwrap();
        let w = g.values();
        assert_eq!(w.len(), 4001);
        assert_eq!(w[2000], 0.0);
        for k in 0..w.len() {
            assert_eq!(w[k], -w[w.len() - 1 - k]);
        }
        assert!((w[0] + 37.1).abs() < 1e-12 && (w[4000] - 37.1).abs() < 1e-12);
    }

    #[test]
    fn widening_keeps_step() {
        let g = FrequencyGrid::new(-10.0, 10.0, 201).unwrap();
        let w = g.widened(4);
        assert_eq!(w.points, 801);
        assert!((w.step() - g.step()).abs() < 1e-15);
        assert_eq!((w.min, w.max), (-40.0, 40.0));
    }

    #[test]
    fn default_window_covers_outer_sidebands() {
        let g = FrequencyGrid::default_for(&SystemParams::new(0.0, 15.0, 11.0));
        let omega1 = (4.0f64 * 225.0 + 121.0).sqrt() + 11.0;
        assert!(g.max > omega1 + 5.0);
        assert_eq!(g.points, 4001);
    }
}
