//! Discrete sample paths of Wiener and Liu processes on a uniform grid, and
//! the kernel-weighted fractional processes built from them by quadrature.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::{KernelSpec, SingularityPolicy};
use crate::math;

const PI: f64 = core::f64::consts::PI;
const SQRT_SIX: f64 = 2.449_489_742_783_178;

/// A discrete driving path: N increments on a uniform grid.
pub trait SamplePath {
    fn grid(&self) -> &GridSpec;
    fn increments(&self) -> &[f64];

    /// Running sum of increments; the path starts at 0.
    fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.increments().len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        for dx in self.increments() {
            acc += dx;
            out.push(acc);
        }
        out
    }
}

/// Seeded Wiener path: increments are iid Normal(0, K).
///
/// RNG is ChaCha8 seeded from the stated 64-bit seed, with a Box–Muller
/// transform over 53-bit uniforms; regenerating with the same seed
/// reproduces the increments bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerPath {
    grid: GridSpec,
    seed: u64,
    increments: Vec<f64>,
}

impl WienerPath {
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl SamplePath for WienerPath {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn increments(&self) -> &[f64] {
        &self.increments
    }
}

fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    // (0, 1): never 0, so ln() below is safe.
    ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Standard normal draws via Box–Muller; both variates of a pair are used.
pub fn standard_normals(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let u1 = uniform_open01(rng);
        let u2 = uniform_open01(rng);
        let r = math::sqrt(-2.0 * math::ln(u1));
        out.push(r * math::cos(2.0 * PI * u2));
        out.push(r * math::sin(2.0 * PI * u2));
    }
    out.truncate(count);
    out
}

pub fn sample_wiener(grid: &GridSpec, seed: u64) -> WienerPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = math::sqrt(grid.step());
    let increments = standard_normals(&mut rng, grid.n_steps())
        .into_iter()
        .map(|z| z * scale)
        .collect();
    WienerPath { grid: *grid, seed, increments }
}

/// Deterministic Liu path realization at a fixed credibility level.
///
/// A fixed point of the credibility space yields a deterministic path; the
/// scalar fuzzy seed z maps to the level c = 1/(1 + exp(−πz/(σ√6))) through
/// the normal-fuzzy membership, and each increment is
/// e·K + σ·K·(√6/π)·ln(c/(1−c)).
#[derive(Debug, Clone, PartialEq)]
pub struct LiuPath {
    grid: GridSpec,
    credibility: f64,
    drift: f64,
    diffusion: f64,
    increments: Vec<f64>,
}

impl LiuPath {
    pub fn credibility(&self) -> f64 {
        self.credibility
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }
}

impl SamplePath for LiuPath {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn increments(&self) -> &[f64] {
        &self.increments
    }
}

fn liu_from_logit(grid: &GridSpec, logit: f64, c: f64, e: f64, sigma: f64) -> Result<LiuPath> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain { what: "liu diffusion must be finite and > 0", value: sigma });
    }
    let k = grid.step();
    let dl = e * k + sigma * k * (SQRT_SIX / PI) * logit;
    if !dl.is_finite() {
        return Err(Error::Domain { what: "liu increment is not finite", value: dl });
    }
    Ok(LiuPath {
        grid: *grid,
        credibility: c,
        drift: e,
        diffusion: sigma,
        increments: alloc::vec![dl; grid.n_steps()],
    })
}

/// Liu path from the scalar fuzzy seed z.
pub fn sample_liu(grid: &GridSpec, z: f64, e: f64, sigma: f64) -> Result<LiuPath> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain { what: "liu diffusion must be finite and > 0", value: sigma });
    }
    let logit = PI * z / (sigma * SQRT_SIX);
    let c = 1.0 / (1.0 + math::exp(-logit));
    liu_from_logit(grid, logit, c, e, sigma)
}

/// Liu path at an explicit credibility level c ∈ (0, 1).
pub fn sample_liu_at_credibility(grid: &GridSpec, c: f64, e: f64, sigma: f64) -> Result<LiuPath> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain { what: "credibility level must lie in (0, 1)", value: c });
    }
    liu_from_logit(grid, math::ln(c / (1.0 - c)), c, e, sigma)
}

/// A fractional process sample: values[n] = Σ_{k<n} g_{s_n}(s_k)·Δ_k.
///
/// Left-endpoint quadrature with the observation time tied to the evaluation
/// point s_n; the history is re-weighted at every n, so this is O(N²).
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalProcessSample {
    kernel: KernelSpec,
    grid: GridSpec,
    values: Vec<f64>,
}

impl FractionalProcessSample {
    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn fractional_process(
    kernel: &KernelSpec,
    path: &impl SamplePath,
    policy: &SingularityPolicy,
) -> Result<FractionalProcessSample> {
    let grid = *path.grid();
    let increments = path.increments();
    let mut values = Vec::with_capacity(grid.n_steps() + 1);
    values.push(0.0);
    for n in 1..=grid.n_steps() {
        let here = kernel.at_observed_time(grid.point(n));
        let mut acc = 0.0;
        for (k, dx) in increments.iter().enumerate().take(n) {
            acc += here.value(grid.point(k), policy)? * dx;
        }
        values.push(acc);
    }
    Ok(FractionalProcessSample { kernel: *kernel, grid, values })
}

/// Terminal value J(t_end) only: Σ_k g_{t_end}(s_k)·Δ_k in O(N).
pub fn fractional_terminal(
    kernel: &KernelSpec,
    path: &impl SamplePath,
    policy: &SingularityPolicy,
) -> Result<f64> {
    let grid = path.grid();
    let weights = terminal_weights(kernel, grid, policy)?;
    Ok(weights.iter().zip(path.increments()).map(|(w, dx)| w * dx).sum())
}

/// Kernel weights g_{t_end}(s_k) for k = 0..N−1, reusable across paths that
/// share a grid.
pub fn terminal_weights(
    kernel: &KernelSpec,
    grid: &GridSpec,
    policy: &SingularityPolicy,
) -> Result<Vec<f64>> {
    let here = kernel.at_observed_time(grid.t_end());
    (0..grid.n_steps()).map(|k| here.value(grid.point(k), policy)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::AlphaFunction;

    fn policy() -> SingularityPolicy {
        SingularityPolicy::default()
    }

    #[test]
    fn wiener_is_deterministic_under_seed() {
        let grid = GridSpec::new(0.0, 1.0, 4).unwrap();
        let a = sample_wiener(&grid, 42);
        let b = sample_wiener(&grid, 42);
        assert_eq!(a.increments(), b.increments());
        assert_eq!(a.increments().len(), 4);
        let c = sample_wiener(&grid, 43);
        assert_ne!(a.increments(), c.increments());
    }

    #[test]
    fn wiener_moments_match_grid_variance() {
        let grid = GridSpec::new(0.0, 1000.0, 100_000).unwrap(); // K = 0.01
        let path = sample_wiener(&grid, 7);
        let n = path.increments().len() as f64;
        let mean: f64 = path.increments().iter().sum::<f64>() / n;
        assert!(mean.abs() < 3.0 * (0.01f64 / n).sqrt(), "mean={mean}");
        let var: f64 = path.increments().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!((var - 0.01).abs() < 0.05 * 0.01, "var={var}");
    }

    #[test]
    fn liu_symmetric_credibility_is_pure_drift() {
        let grid = GridSpec::new(0.0, 1.0, 10).unwrap();
        let flat = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        assert!(flat.increments().iter().all(|&dl| dl == 0.0));
        let drifting = sample_liu(&grid, 0.0, 2.0, 1.0).unwrap();
        for &dl in drifting.increments() {
            assert!((dl - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn liu_closed_form_at_three_quarters() {
        let grid = GridSpec::new(0.0, 1.0, 10).unwrap(); // K = 0.1
        let path = sample_liu_at_credibility(&grid, 0.75, 0.0, 1.0).unwrap();
        let expected = 0.1 * (SQRT_SIX / PI) * 3.0f64.ln();
        assert!((path.increments()[0] - expected).abs() < 1e-14);
        // Inverse of the normal-fuzzy credibility distribution
        // Φ(x) = 1/(1 + exp(−πx/(σ√6))) at Φ = 3/4 gives the same number.
        let x = -(1.0f64 / 0.75 - 1.0).ln() * SQRT_SIX / PI;
        assert!((path.increments()[0] - 0.1 * x).abs() < 1e-14);
    }

    #[test]
    fn liu_increments_increase_with_credibility() {
        let grid = GridSpec::new(0.0, 1.0, 5).unwrap();
        let mut last = f64::NEG_INFINITY;
        for i in 1..20 {
            let c = i as f64 / 20.0;
            let dl = sample_liu_at_credibility(&grid, c, 0.3, 0.7).unwrap().increments()[0];
            assert!(dl > last, "c={c}");
            last = dl;
        }
    }

    #[test]
    fn liu_rejects_bad_inputs() {
        let grid = GridSpec::new(0.0, 1.0, 5).unwrap();
        assert!(sample_liu(&grid, 1.0, 0.0, 0.0).is_err());
        assert!(sample_liu(&grid, 1.0, 0.0, -1.0).is_err());
        assert!(sample_liu_at_credibility(&grid, 0.0, 0.0, 1.0).is_err());
        assert!(sample_liu_at_credibility(&grid, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn classical_kernel_reproduces_cumulative_path() {
        let grid = GridSpec::new(0.0, 1.0, 64).unwrap();
        let path = sample_wiener(&grid, 11);
        let kernel =
            KernelSpec::new(AlphaFunction::Constant { value: 1.0 }, 0.0, 0.8).unwrap();
        let sample = fractional_process(&kernel, &path, &policy()).unwrap();
        let cumulative = path.values();
        for (a, b) in sample.values().iter().zip(cumulative.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_increments_give_zero_process() {
        let grid = GridSpec::new(0.0, 1.0, 16).unwrap();
        let path = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        let kernel =
            KernelSpec::new(AlphaFunction::Constant { value: 0.5 }, 0.0, 0.8).unwrap();
        let sample = fractional_process(&kernel, &path, &policy()).unwrap();
        assert!(sample.values().iter().all(|&v| v == 0.0));
        assert_eq!(sample.values()[0], 0.0);
    }

    #[test]
    fn terminal_value_agrees_with_full_process() {
        let grid = GridSpec::new(0.0, 1.0, 32).unwrap();
        let path = sample_wiener(&grid, 3);
        let kernel =
            KernelSpec::new(AlphaFunction::Affine { intercept: 0.6, slope: 0.05 }, 0.2, 0.8)
                .unwrap();
        let full = fractional_process(&kernel, &path, &policy()).unwrap();
        let terminal = fractional_terminal(&kernel, &path, &policy()).unwrap();
        assert!((full.values()[32] - terminal).abs() < 1e-12);
    }
}
