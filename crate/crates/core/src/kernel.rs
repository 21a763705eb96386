//! The generalized fractional kernel and its logarithmic time-derivative.
//!
//! The kernel weighs intrinsic time s against a fixed observed time t:
//!
//! ```text
//! g_t^α(s) = exp((α(s−t) − 1)·ln|t−s| − ρ(s−t)) / Γ(α(s−t))
//! ```
//!
//! combining a variable-order fractal weight with an exponential discount at
//! rate ρ. The drift correction h(s,t) collects the terms produced by
//! differentiating ln g with respect to s; it vanishes in the classical limit
//! α ≡ 1, ρ = 0.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::math;
use crate::special;

/// Parametric C¹ order function α(z) with an analytic derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaFunction {
    Constant { value: f64 },
    Affine { intercept: f64, slope: f64 },
    /// lo + (hi − lo)·σ((z − center)/width) with σ the standard logistic.
    Logistic { lo: f64, hi: f64, center: f64, width: f64 },
}

impl AlphaFunction {
    pub fn value(&self, z: f64) -> f64 {
        match *self {
            AlphaFunction::Constant { value } => value,
            AlphaFunction::Affine { intercept, slope } => intercept + slope * z,
            AlphaFunction::Logistic { lo, hi, center, width } => {
                lo + (hi - lo) * logistic((z - center) / width)
            }
        }
    }

    /// Exact analytic derivative dα/dz.
    pub fn derivative(&self, z: f64) -> f64 {
        match *self {
            AlphaFunction::Constant { .. } => 0.0,
            AlphaFunction::Affine { slope, .. } => slope,
            AlphaFunction::Logistic { lo, hi, center, width } => {
                let sig = logistic((z - center) / width);
                (hi - lo) * sig * (1.0 - sig) / width
            }
        }
    }
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + math::exp(-u))
}

/// What to do when the intrinsic time falls inside the epsilon ball around
/// the observed time (the kernel is singular at s = t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityMode {
    /// Refuse to evaluate.
    Error,
    /// Substitute |t − s| := epsilon and keep going.
    ClampToEpsilon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityPolicy {
    pub epsilon: f64,
    pub mode: SingularityMode,
}

impl Default for SingularityPolicy {
    fn default() -> Self {
        Self { epsilon: 1e-8, mode: SingularityMode::Error }
    }
}

impl SingularityPolicy {
    pub fn new(epsilon: f64, mode: SingularityMode) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::Domain { what: "epsilon must be positive", value: epsilon });
        }
        Ok(Self { epsilon, mode })
    }
}

/// Sign convention for the discount-rate term of h(s,t).
///
/// `Paper` keeps the printed +ρ; `LogDerivative` uses −ρ so that h equals
/// d/ds ln g exactly. The two coincide whenever ρ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HConvention {
    #[default]
    Paper,
    LogDerivative,
}

/// The (α, ρ, observed time) triple defining the kernel, plus the h sign
/// convention used by integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    alpha: AlphaFunction,
    rho: f64,
    observed_time: f64,
    h_convention: HConvention,
}

impl KernelSpec {
    pub fn new(alpha: AlphaFunction, rho: f64, observed_time: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::Domain { what: "rho must be finite and >= 0", value: rho });
        }
        if !observed_time.is_finite() {
            return Err(Error::Domain {
                what: "observed_time must be finite",
                value: observed_time,
            });
        }
        Ok(Self { alpha, rho, observed_time, h_convention: HConvention::default() })
    }

    pub fn with_h_convention(mut self, convention: HConvention) -> Self {
        self.h_convention = convention;
        self
    }

    /// Same kernel evaluated against a different observed time.
    pub fn at_observed_time(&self, observed_time: f64) -> Self {
        Self { observed_time, ..*self }
    }

    pub fn alpha(&self) -> &AlphaFunction {
        &self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn observed_time(&self) -> f64 {
        self.observed_time
    }

    pub fn h_convention(&self) -> HConvention {
        self.h_convention
    }

    /// The effective offset z = s − t after the singularity policy has been
    /// applied. Clamping keeps the sign of the offset (an exact hit counts
    /// as positive).
    fn offset(&self, s: f64, policy: &SingularityPolicy) -> Result<f64> {
        let dz = s - self.observed_time;
        if math::abs(dz) >= policy.epsilon {
            return Ok(dz);
        }
        match policy.mode {
            SingularityMode::Error => {
                Err(Error::Singularity { s, observed_time: self.observed_time })
            }
            SingularityMode::ClampToEpsilon => {
                Ok(if dz < 0.0 { -policy.epsilon } else { policy.epsilon })
            }
        }
    }

    fn order_at(&self, dz: f64) -> Result<f64> {
        let a = self.alpha.value(dz);
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Domain { what: "order function must lie in (0, 1]", value: a });
        }
        Ok(a)
    }

    /// Kernel value g_t^α(s).
    pub fn value(&self, s: f64, policy: &SingularityPolicy) -> Result<f64> {
        let dz = self.offset(s, policy)?;
        let a = self.order_at(dz)?;
        let exponent = (a - 1.0) * math::ln(math::abs(dz)) - self.rho * dz;
        Ok(math::exp(exponent) / special::gamma(a)?)
    }

    /// Drift correction h(s,t).
    ///
    /// The Gamma term is evaluated through the chain rule as ψ(α)·α′ instead
    /// of differencing Γ numerically.
    pub fn h(&self, s: f64, policy: &SingularityPolicy) -> Result<f64> {
        let dz = self.offset(s, policy)?;
        let a = self.order_at(dz)?;
        let da = self.alpha.derivative(dz);
        let rho_term = match self.h_convention {
            HConvention::Paper => self.rho,
            HConvention::LogDerivative => -self.rho,
        };
        Ok(da * math::ln(math::abs(dz)) + (a - 1.0) / dz + rho_term - special::digamma(a)? * da)
    }

    /// Indices of grid points inside the epsilon ball around the observed
    /// time; an empty result means the grid is safe to evaluate.
    pub fn validate_grid(&self, grid: &GridSpec, policy: &SingularityPolicy) -> Vec<usize> {
        (0..=grid.n_steps())
            .filter(|&n| math::abs(grid.point(n) - self.observed_time) < policy.epsilon)
            .collect()
    }

    /// Configuration-time check that the order function stays in (0, 1] at
    /// every offset the grid can produce.
    pub fn validate_alpha_on_grid(&self, grid: &GridSpec) -> Result<()> {
        for n in 0..=grid.n_steps() {
            let a = self.alpha.value(grid.point(n) - self.observed_time);
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Domain {
                    what: "order function leaves (0, 1] on the simulation grid",
                    value: a,
                });
            }
        }
        Ok(())
    }
}
