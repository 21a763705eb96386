//! Deterministic generalized fractional quadrature and the fixed-step Euler
//! scheme for kernel-weighted stochastic, fuzzy, and hybrid equations.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernel::{AlphaFunction, KernelSpec, SingularityPolicy};
use crate::math;
use crate::processes::{sample_liu, sample_wiener, LiuPath, SamplePath, WienerPath};
use crate::special;

/// A deterministic coefficient field (s, x) ↦ ℝⁿ.
pub trait CoefficientField: Send + Sync {
    fn dimension(&self) -> usize;
    fn evaluate(&self, s: f64, x: &[f64], out: &mut [f64]);
}

/// The zero field in n dimensions.
pub struct ZeroField(pub usize);

impl CoefficientField for ZeroField {
    fn dimension(&self) -> usize {
        self.0
    }

    fn evaluate(&self, _s: f64, _x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }
}

/// Componentwise linear field out_i = rate_i · x_i.
pub struct LinearField {
    pub rates: Vec<f64>,
}

impl CoefficientField for LinearField {
    fn dimension(&self) -> usize {
        self.rates.len()
    }

    fn evaluate(&self, _s: f64, x: &[f64], out: &mut [f64]) {
        for ((o, r), xi) in out.iter_mut().zip(&self.rates).zip(x) {
            *o = r * xi;
        }
    }
}

/// Adapter turning a closure into a coefficient field.
pub struct FnField<F> {
    dimension: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64]) + Send + Sync> FnField<F> {
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64]) + Send + Sync> CoefficientField for FnField<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, s: f64, x: &[f64], out: &mut [f64]) {
        (self.f)(s, x, out)
    }
}

/// Drift, diffusion, and fuzzy coefficient fields with their kernels.
pub struct HybridSystem {
    drift: Box<dyn CoefficientField>,
    diffusion: Box<dyn CoefficientField>,
    fuzzy: Box<dyn CoefficientField>,
    kernel_alpha: KernelSpec,
    kernel_beta: KernelSpec,
    kernel_gamma: KernelSpec,
    x0: Vec<f64>,
}

impl HybridSystem {
    pub fn new(
        drift: Box<dyn CoefficientField>,
        diffusion: Box<dyn CoefficientField>,
        fuzzy: Box<dyn CoefficientField>,
        kernel_alpha: KernelSpec,
        kernel_beta: KernelSpec,
        kernel_gamma: KernelSpec,
        x0: Vec<f64>,
    ) -> Result<Self> {
        let n = x0.len();
        if drift.dimension() != n || diffusion.dimension() != n || fuzzy.dimension() != n {
            return Err(Error::Invalid {
                detail: "coefficient fields must share the dimension of x0",
            });
        }
        Ok(Self { drift, diffusion, fuzzy, kernel_alpha, kernel_beta, kernel_gamma, x0 })
    }

    pub fn dimension(&self) -> usize {
        self.x0.len()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn kernel_alpha(&self) -> &KernelSpec {
        &self.kernel_alpha
    }

    pub fn kernel_beta(&self) -> &KernelSpec {
        &self.kernel_beta
    }

    pub fn kernel_gamma(&self) -> &KernelSpec {
        &self.kernel_gamma
    }
}

/// How the kernel's observed time behaves during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationMode {
    /// The observed time stays at the value carried by each kernel spec
    /// while s marches past it.
    #[default]
    FixedObservedTime,
    /// Volterra re-weighting: the observed time is the current right
    /// endpoint, so the whole history is re-weighted each step (O(N²)).
    Volterra,
}

/// Where a trajectory came from, for reproducibility bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub z: Option<f64>,
    pub system: String,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: GridSpec,
    states: Vec<Vec<f64>>,
    provenance: Provenance,
}

impl Trajectory {
    pub fn new(grid: GridSpec, states: Vec<Vec<f64>>, provenance: Provenance) -> Self {
        Self { grid, states, provenance }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn terminal(&self) -> &[f64] {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// Left-endpoint quadrature of ∫ f(s)·g_t(s) ds over the grid window, with
/// t the kernel's observed time at the right endpoint.
///
/// For a constant order a the final cell is integrated analytically
/// (∫ (t−s)^(a−1) ds = K^a/a against the left f and discount values), which
/// keeps the weakly singular tail from dominating the error; for
/// non-constant orders the plain left rectangle is used.
pub fn fractional_integral(
    kernel: &KernelSpec,
    f: impl Fn(f64) -> f64,
    grid: &GridSpec,
    policy: &SingularityPolicy,
) -> Result<f64> {
    let t = kernel.observed_time();
    if (grid.t_end() - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::Invalid {
            detail: "grid must end at the kernel's observed time",
        });
    }
    let k = grid.step();
    let n = grid.n_steps();
    let mut sum = 0.0;
    for i in 0..n.saturating_sub(1) {
        let s = grid.point(i);
        let fs = f(s);
        if !fs.is_finite() {
            return Err(Error::NonFinite { step: i });
        }
        sum += fs * kernel.value(s, policy)? * k;
    }
    let s_last = grid.point(n - 1);
    let f_last = f(s_last);
    if !f_last.is_finite() {
        return Err(Error::NonFinite { step: n - 1 });
    }
    match *kernel.alpha() {
        AlphaFunction::Constant { value: a } => {
            let power_mass = math::powf(k, a) / a;
            let discount = math::exp(-kernel.rho() * (s_last - t));
            sum += f_last * power_mass * discount / special::gamma(a)?;
        }
        _ => {
            sum += f_last * kernel.value(s_last, policy)? * k;
        }
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite { step: n });
    }
    Ok(sum)
}

/// First-order Euler step scheme for the hybrid equation:
///
/// ```text
/// x_{n+1} = x_n + a(s_n,x_n)·gα(s_n)·K + b(s_n,x_n)·gβ(s_n)·ΔW_n
///               + c(s_n,x_n)·gγ(s_n)·ΔL_n
/// ```
pub fn euler_hybrid(
    system: &HybridSystem,
    grid: &GridSpec,
    wiener: &WienerPath,
    liu: &LiuPath,
    policy: &SingularityPolicy,
    mode: IntegrationMode,
) -> Result<Trajectory> {
    if wiener.grid() != grid || liu.grid() != grid {
        return Err(Error::Invalid { detail: "wiener and liu paths must share the grid" });
    }
    for xi in system.x0() {
        if !xi.is_finite() {
            return Err(Error::NonFinite { step: 0 });
        }
    }
    match mode {
        IntegrationMode::FixedObservedTime => euler_hybrid_fixed(system, grid, wiener, liu, policy),
        IntegrationMode::Volterra => euler_hybrid_volterra(system, grid, wiener, liu, policy),
    }
}

fn provenance(system: &str, scheme: &str, wiener: &WienerPath, liu: &LiuPath) -> Provenance {
    Provenance {
        seed: Some(wiener.seed()),
        z: Some(liu.credibility()),
        system: String::from(system),
        scheme: String::from(scheme),
    }
}

fn euler_hybrid_fixed(
    system: &HybridSystem,
    grid: &GridSpec,
    wiener: &WienerPath,
    liu: &LiuPath,
    policy: &SingularityPolicy,
) -> Result<Trajectory> {
    let n = system.dimension();
    let k = grid.step();
    let mut states = Vec::with_capacity(grid.n_steps() + 1);
    states.push(system.x0().to_vec());
    let mut a = alloc::vec![0.0; n];
    let mut b = alloc::vec![0.0; n];
    let mut c = alloc::vec![0.0; n];
    for step in 0..grid.n_steps() {
        let s = grid.point(step);
        let ga = system.kernel_alpha().value(s, policy)?;
        let gb = system.kernel_beta().value(s, policy)?;
        let gc = system.kernel_gamma().value(s, policy)?;
        let x = &states[step];
        system.drift.evaluate(s, x, &mut a);
        system.diffusion.evaluate(s, x, &mut b);
        system.fuzzy.evaluate(s, x, &mut c);
        let dw = wiener.increments()[step];
        let dl = liu.increments()[step];
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let xi = x[i] + a[i] * ga * k + b[i] * gb * dw + c[i] * gc * dl;
            if !xi.is_finite() {
                return Err(Error::NonFinite { step: step + 1 });
            }
            next.push(xi);
        }
        states.push(next);
    }
    Ok(Trajectory::new(*grid, states, provenance("hybrid", "euler_fixed_t", wiener, liu)))
}

fn euler_hybrid_volterra(
    system: &HybridSystem,
    grid: &GridSpec,
    wiener: &WienerPath,
    liu: &LiuPath,
    policy: &SingularityPolicy,
) -> Result<Trajectory> {
    let n = system.dimension();
    let k = grid.step();
    let steps = grid.n_steps();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(system.x0().to_vec());
    // Coefficient evaluations along the already-computed path.
    let mut drift_hist: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut diff_hist: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut fuzzy_hist: Vec<Vec<f64>> = Vec::with_capacity(steps);
    for step in 0..steps {
        let s = grid.point(step);
        let x = &states[step];
        let mut a = alloc::vec![0.0; n];
        let mut b = alloc::vec![0.0; n];
        let mut c = alloc::vec![0.0; n];
        system.drift.evaluate(s, x, &mut a);
        system.diffusion.evaluate(s, x, &mut b);
        system.fuzzy.evaluate(s, x, &mut c);
        drift_hist.push(a);
        diff_hist.push(b);
        fuzzy_hist.push(c);
        // Re-weight the whole history with the observed time at s_{n+1}.
        let t_here = grid.point(step + 1);
        let ka = system.kernel_alpha().at_observed_time(t_here);
        let kb = system.kernel_beta().at_observed_time(t_here);
        let kc = system.kernel_gamma().at_observed_time(t_here);
        let mut next = system.x0().to_vec();
        for past in 0..=step {
            let sp = grid.point(past);
            let ga = ka.value(sp, policy)?;
            let gb = kb.value(sp, policy)?;
            let gc = kc.value(sp, policy)?;
            let dw = wiener.increments()[past];
            let dl = liu.increments()[past];
            for i in 0..n {
                next[i] += drift_hist[past][i] * ga * k
                    + diff_hist[past][i] * gb * dw
                    + fuzzy_hist[past][i] * gc * dl;
            }
        }
        for xi in &next {
            if !xi.is_finite() {
                return Err(Error::NonFinite { step: step + 1 });
            }
        }
        states.push(next);
    }
    Ok(Trajectory::new(*grid, states, provenance("hybrid", "euler_volterra", wiener, liu)))
}

/// Stochastic stock model preset: drift μ(s)·x against the order-α₁ kernel
/// and diffusion σ(s)·x against the order-(1+α₁)/2 kernel, ρ = 0, observed
/// time at the grid's right endpoint, no fuzzy channel.
///
/// The diffusion term is integrated against dW.
pub fn stock_model_stochastic(
    mu: impl Fn(f64) -> f64 + Send + Sync + 'static,
    sigma: impl Fn(f64) -> f64 + Send + Sync + 'static,
    alpha1: f64,
    x0: f64,
    grid: &GridSpec,
    seed: u64,
    policy: &SingularityPolicy,
) -> Result<Trajectory> {
    if !(alpha1 > 0.0 && alpha1 <= 1.0) {
        return Err(Error::Domain { what: "alpha1 must lie in (0, 1]", value: alpha1 });
    }
    let t = grid.t_end();
    let kernel_alpha = KernelSpec::new(AlphaFunction::Constant { value: alpha1 }, 0.0, t)?;
    let kernel_beta =
        KernelSpec::new(AlphaFunction::Constant { value: (1.0 + alpha1) / 2.0 }, 0.0, t)?;
    let system = HybridSystem::new(
        Box::new(FnField::new(1, move |s, x: &[f64], out: &mut [f64]| out[0] = mu(s) * x[0])),
        Box::new(FnField::new(1, move |s, x: &[f64], out: &mut [f64]| out[0] = sigma(s) * x[0])),
        Box::new(ZeroField(1)),
        kernel_alpha,
        kernel_beta,
        kernel_beta,
        alloc::vec![x0],
    )?;
    let wiener = sample_wiener(grid, seed);
    let liu = sample_liu(grid, 0.0, 0.0, 1.0)?;
    euler_hybrid(&system, grid, &wiener, &liu, policy, IntegrationMode::FixedObservedTime)
}

/// Fuzzy stock model preset: classical drift (order-1 kernel, ρ = 0) and a
/// fuzzy diffusion σ(s)·x against the order-β₁ kernel driven by a Liu path.
pub fn stock_model_fuzzy(
    mu: impl Fn(f64) -> f64 + Send + Sync + 'static,
    sigma: impl Fn(f64) -> f64 + Send + Sync + 'static,
    beta1: f64,
    x0: f64,
    grid: &GridSpec,
    z: f64,
    e: f64,
    sigma_liu: f64,
    policy: &SingularityPolicy,
) -> Result<Trajectory> {
    if !(beta1 > 0.0 && beta1 <= 1.0) {
        return Err(Error::Domain { what: "beta1 must lie in (0, 1]", value: beta1 });
    }
    let t = grid.t_end();
    let kernel_alpha = KernelSpec::new(AlphaFunction::Constant { value: 1.0 }, 0.0, t)?;
    let kernel_gamma = KernelSpec::new(AlphaFunction::Constant { value: beta1 }, 0.0, t)?;
    let system = HybridSystem::new(
        Box::new(FnField::new(1, move |s, x: &[f64], out: &mut [f64]| out[0] = mu(s) * x[0])),
        Box::new(ZeroField(1)),
        Box::new(FnField::new(1, move |s, x: &[f64], out: &mut [f64]| out[0] = sigma(s) * x[0])),
        kernel_alpha,
        kernel_alpha,
        kernel_gamma,
        alloc::vec![x0],
    )?;
    let wiener = sample_wiener(grid, 0);
    let liu = sample_liu(grid, z, e, sigma_liu)?;
    euler_hybrid(&system, grid, &wiener, &liu, policy, IntegrationMode::FixedObservedTime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> SingularityPolicy {
        SingularityPolicy::default()
    }

    fn classical_kernel(t: f64) -> KernelSpec {
        KernelSpec::new(AlphaFunction::Constant { value: 1.0 }, 0.0, t).unwrap()
    }

    #[test]
    fn fractional_integral_of_constant_half_order() {
        // Exact: t^a/Γ(a+1) at a = 1/2, t = 1 is 2/√π.
        let kernel = KernelSpec::new(AlphaFunction::Constant { value: 0.5 }, 0.0, 1.0).unwrap();
        let grid = GridSpec::new(0.0, 1.0, 1 << 16).unwrap();
        let got = fractional_integral(&kernel, |_| 1.0, &grid, &policy()).unwrap();
        let exact = 2.0 / core::f64::consts::PI.sqrt();
        assert!((got - exact).abs() < 2e-3, "got={got} exact={exact}");
    }

    #[test]
    fn fractional_integral_classical_is_plain_integral() {
        let kernel = classical_kernel(2.0);
        let grid = GridSpec::new(0.0, 2.0, 1024).unwrap();
        let got = fractional_integral(&kernel, |_| 3.0, &grid, &policy()).unwrap();
        assert!((got - 6.0).abs() < 1e-12, "got={got}");
    }

    #[test]
    fn fractional_integral_power_rule() {
        // Exact: Γ(2)·t^(1+a)/Γ(2+a) at a = 1/2, t = 1.
        let kernel = KernelSpec::new(AlphaFunction::Constant { value: 0.5 }, 0.0, 1.0).unwrap();
        let grid = GridSpec::new(0.0, 1.0, 1 << 16).unwrap();
        let got = fractional_integral(&kernel, |s| s, &grid, &policy()).unwrap();
        let exact = 1.0 / crate::special::gamma(2.5).unwrap();
        assert!((got - exact).abs() < 2e-3, "got={got} exact={exact}");
    }

    #[test]
    fn euler_classical_exponential() {
        let grid = GridSpec::new(0.0, 1.0, 1 << 16).unwrap();
        let kernel = classical_kernel(10.0);
        let system = HybridSystem::new(
            Box::new(LinearField { rates: alloc::vec![1.0] }),
            Box::new(ZeroField(1)),
            Box::new(ZeroField(1)),
            kernel,
            kernel,
            kernel,
            alloc::vec![1.0],
        )
        .unwrap();
        let wiener = sample_wiener(&grid, 1);
        let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        let traj = euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
            IntegrationMode::FixedObservedTime)
        .unwrap();
        assert!((traj.terminal()[0] - core::f64::consts::E).abs() < 1e-3);
    }

    #[test]
    fn euler_pure_additive_noise_is_shifted_wiener() {
        let grid = GridSpec::new(0.0, 1.0, 128).unwrap();
        let kernel = classical_kernel(0.8);
        let system = HybridSystem::new(
            Box::new(ZeroField(1)),
            Box::new(FnField::new(1, |_s, _x: &[f64], out: &mut [f64]| out[0] = 1.0)),
            Box::new(ZeroField(1)),
            kernel,
            kernel,
            kernel,
            alloc::vec![2.5],
        )
        .unwrap();
        let wiener = sample_wiener(&grid, 9);
        let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        let traj = euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
            IntegrationMode::FixedObservedTime)
        .unwrap();
        let w = wiener.values();
        for (state, wn) in traj.states().iter().zip(w.iter()) {
            // Same numbers up to summation order.
            assert!((state[0] - (2.5 + wn)).abs() < 1e-14);
        }
    }

    #[test]
    fn euler_all_zero_coefficients_is_constant() {
        let grid = GridSpec::new(0.0, 1.0, 32).unwrap();
        let kernel = KernelSpec::new(AlphaFunction::Constant { value: 0.6 }, 0.1, 0.8).unwrap();
        let system = HybridSystem::new(
            Box::new(ZeroField(2)),
            Box::new(ZeroField(2)),
            Box::new(ZeroField(2)),
            kernel,
            kernel,
            kernel,
            alloc::vec![1.0, -2.0],
        )
        .unwrap();
        let wiener = sample_wiener(&grid, 5);
        let liu = sample_liu(&grid, 1.0, 0.5, 1.0).unwrap();
        let traj = euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
            IntegrationMode::FixedObservedTime)
        .unwrap();
        for state in traj.states() {
            assert_eq!(state.as_slice(), &[1.0, -2.0]);
        }
    }

    #[test]
    fn volterra_mode_matches_fixed_mode_for_constant_kernel() {
        // With α ≡ 1, ρ = 0 the weights are 1 in both modes.
        let grid = GridSpec::new(0.0, 1.0, 64).unwrap();
        let kernel = classical_kernel(0.8);
        let make = || {
            HybridSystem::new(
                Box::new(ZeroField(1)),
                Box::new(FnField::new(1, |_s, _x: &[f64], out: &mut [f64]| out[0] = 1.0)),
                Box::new(ZeroField(1)),
                kernel,
                kernel,
                kernel,
                alloc::vec![0.0],
            )
            .unwrap()
        };
        let wiener = sample_wiener(&grid, 4);
        let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        let fixed = euler_hybrid(&make(), &grid, &wiener, &liu, &policy(),
            IntegrationMode::FixedObservedTime)
        .unwrap();
        let volterra =
            euler_hybrid(&make(), &grid, &wiener, &liu, &policy(), IntegrationMode::Volterra)
                .unwrap();
        for (a, b) in fixed.states().iter().zip(volterra.states()) {
            assert!((a[0] - b[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_convergence_is_first_order() {
        // b = c = 0, classical kernel: explicit Euler on x' = x over [0, 1].
        let mut errors = Vec::new();
        let mut ns = Vec::new();
        for p in [8u32, 10, 12, 14] {
            let n = 1usize << p;
            let grid = GridSpec::new(0.0, 1.0, n).unwrap();
            let kernel = classical_kernel(10.0);
            let system = HybridSystem::new(
                Box::new(LinearField { rates: alloc::vec![1.0] }),
                Box::new(ZeroField(1)),
                Box::new(ZeroField(1)),
                kernel,
                kernel,
                kernel,
                alloc::vec![1.0],
            )
            .unwrap();
            let wiener = sample_wiener(&grid, 1);
            let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
            let traj = euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
                IntegrationMode::FixedObservedTime)
            .unwrap();
            errors.push((traj.terminal()[0] - core::f64::consts::E).abs().ln());
            ns.push((n as f64).ln());
        }
        let slope = -fit_slope(&ns, &errors);
        assert!((0.8..=1.2).contains(&slope), "slope={slope}");
    }

    fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        num / den
    }

    #[test]
    fn diffusion_scaling_is_linear_at_first_step() {
        let grid = GridSpec::new(0.0, 1.0, 16).unwrap();
        let kernel = KernelSpec::new(AlphaFunction::Constant { value: 0.7 }, 0.0, 0.8).unwrap();
        let run = |lambda: f64| {
            let system = HybridSystem::new(
                Box::new(ZeroField(1)),
                Box::new(FnField::new(1, move |_s, _x: &[f64], out: &mut [f64]| {
                    out[0] = lambda
                })),
                Box::new(ZeroField(1)),
                kernel,
                kernel,
                kernel,
                alloc::vec![0.0],
            )
            .unwrap();
            let wiener = sample_wiener(&grid, 2);
            let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
            euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
                IntegrationMode::FixedObservedTime)
            .unwrap()
        };
        let base = run(1.0);
        let scaled = run(3.0);
        let d_base = base.states()[1][0] - base.states()[0][0];
        let d_scaled = scaled.states()[1][0] - scaled.states()[0][0];
        assert_eq!(d_scaled, 3.0 * d_base);
    }

    #[test]
    fn non_finite_reports_step_index() {
        let grid = GridSpec::new(0.0, 1.0, 8).unwrap();
        let kernel = classical_kernel(10.0);
        let system = HybridSystem::new(
            Box::new(FnField::new(1, |s, _x: &[f64], out: &mut [f64]| {
                out[0] = if s >= 0.5 { f64::NAN } else { 0.0 }
            })),
            Box::new(ZeroField(1)),
            Box::new(ZeroField(1)),
            kernel,
            kernel,
            kernel,
            alloc::vec![1.0],
        )
        .unwrap();
        let wiener = sample_wiener(&grid, 2);
        let liu = sample_liu(&grid, 0.0, 0.0, 1.0).unwrap();
        let err = euler_hybrid(&system, &grid, &wiener, &liu, &policy(),
            IntegrationMode::FixedObservedTime)
        .unwrap_err();
        assert_eq!(err, Error::NonFinite { step: 5 });
    }

    #[test]
    fn stock_stochastic_reduces_to_exponential_growth() {
        let grid = GridSpec::new(0.0, 1.0, 1 << 16).unwrap();
        let traj =
            stock_model_stochastic(|_| 0.5, |_| 0.0, 1.0, 1.0, &grid, 3, &policy()).unwrap();
        assert!((traj.terminal()[0] - 0.5f64.exp()).abs() < 1e-3);
    }

    #[test]
    fn stock_stochastic_is_reproducible_and_finite() {
        let grid = GridSpec::new(0.0, 1.0, 512).unwrap();
        let a = stock_model_stochastic(|_| 0.05, |_| 0.2, 0.6, 1.0, &grid, 7, &policy()).unwrap();
        let b = stock_model_stochastic(|_| 0.05, |_| 0.2, 0.6, 1.0, &grid, 7, &policy()).unwrap();
        assert_eq!(a.states(), b.states());
        assert!(a.states().iter().all(|x| x[0].is_finite()));
    }

    #[test]
    fn stock_fuzzy_reduces_to_ode_at_symmetric_credibility() {
        let grid = GridSpec::new(0.0, 1.0, 4096).unwrap();
        let noisy =
            stock_model_fuzzy(|_| 0.3, |_| 0.1, 0.8, 1.0, &grid, 0.0, 0.0, 1.0, &policy())
                .unwrap();
        let clean =
            stock_model_fuzzy(|_| 0.3, |_| 0.0, 0.8, 1.0, &grid, 0.0, 0.0, 1.0, &policy())
                .unwrap();
        assert_eq!(noisy.states(), clean.states());
        assert!((clean.terminal()[0] - 0.3f64.exp()).abs() < 1e-3);
    }

    #[test]
    fn stock_presets_reject_bad_orders() {
        let grid = GridSpec::new(0.0, 1.0, 8).unwrap();
        assert!(stock_model_stochastic(|_| 0.0, |_| 0.0, 0.0, 1.0, &grid, 1, &policy()).is_err());
        assert!(stock_model_fuzzy(|_| 0.0, |_| 0.0, 1.5, 1.0, &grid, 0.0, 0.0, 1.0, &policy())
            .is_err());
    }
}
