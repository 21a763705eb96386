use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform grid s_n = t0 + n·K, n = 0..=n_steps, with K = (t_end − t0)/n_steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    t0: f64,
    t_end: f64,
    n_steps: usize,
}

impl GridSpec {
    pub fn new(t0: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !t0.is_finite() || !t_end.is_finite() {
            return Err(Error::Invalid {
                detail: "grid endpoints must be finite",
            });
        }
        if t_end <= t0 {
            return Err(Error::Invalid {
                detail: "grid requires t_end > t0",
            });
        }
        if n_steps == 0 {
            return Err(Error::Invalid {
                detail: "grid requires at least one step",
            });
        }
        Ok(Self { t0, t_end, n_steps })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of steps N; the grid has N + 1 points.
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Step size K.
    pub fn step(&self) -> f64 {
        (self.t_end - self.t0) / self.n_steps as f64
    }

    /// Grid point s_n.
    pub fn point(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|n| self.point(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert!(GridSpec::new(0.0, 0.0, 10).is_err());
        assert!(GridSpec::new(0.0, -1.0, 10).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0).is_err());
        assert!(GridSpec::new(f64::NAN, 1.0, 1).is_err());
    }

    #[test]
    fn points_and_step() {
        let g = GridSpec::new(0.0, 1.0, 4).unwrap();
        assert_eq!(g.step(), 0.25);
        assert_eq!(g.points(), alloc::vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
