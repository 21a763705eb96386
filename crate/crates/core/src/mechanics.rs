//! Hamilton–Pontryagin mechanics perturbed by Wiener and Liu noise channels
//! and the fractional drift correction −p·h(s,t), with Hamiltonian and
//! metric (Christoffel) reductions and the first-order Euler scheme.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::integrate::{Provenance, Trajectory};
use crate::kernel::{KernelSpec, SingularityPolicy};
use crate::processes::{LiuPath, SamplePath, WienerPath};

type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Box<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// A mechanical system with Lagrangian ½v² − V(q) and two C¹ perturbation
/// scalars feeding the Wiener and Liu channels.
pub struct PotentialSystem {
    dimension: usize,
    potential: ScalarFn,
    grad_potential: GradientFn,
    gamma1: ScalarFn,
    grad_gamma1: GradientFn,
    gamma2: ScalarFn,
    grad_gamma2: GradientFn,
}

impl PotentialSystem {
    pub fn new(
        dimension: usize,
        potential: ScalarFn,
        grad_potential: GradientFn,
        gamma1: ScalarFn,
        grad_gamma1: GradientFn,
        gamma2: ScalarFn,
        grad_gamma2: GradientFn,
    ) -> Self {
        Self { dimension, potential, grad_potential, gamma1, grad_gamma1, gamma2, grad_gamma2 }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn potential(&self, q: &[f64]) -> f64 {
        (self.potential)(q)
    }

    pub fn grad_potential(&self, q: &[f64], out: &mut [f64]) {
        (self.grad_potential)(q, out)
    }

    pub fn gamma1(&self, q: &[f64]) -> f64 {
        (self.gamma1)(q)
    }

    pub fn grad_gamma1(&self, q: &[f64], out: &mut [f64]) {
        (self.grad_gamma1)(q, out)
    }

    pub fn gamma2(&self, q: &[f64]) -> f64 {
        (self.gamma2)(q)
    }

    pub fn grad_gamma2(&self, q: &[f64], out: &mut [f64]) {
        (self.grad_gamma2)(q, out)
    }
}

/// Pendulum system: V = cos q, γ₁ = α₁ sin q, γ₂ = ½α₂q².
pub fn pendulum_preset(alpha1: f64, alpha2: f64) -> PotentialSystem {
    PotentialSystem::new(
        1,
        Box::new(|q: &[f64]| libm::cos(q[0])),
        Box::new(|q: &[f64], out: &mut [f64]| out[0] = -libm::sin(q[0])),
        Box::new(move |q: &[f64]| alpha1 * libm::sin(q[0])),
        Box::new(move |q: &[f64], out: &mut [f64]| out[0] = alpha1 * libm::cos(q[0])),
        Box::new(move |q: &[f64]| 0.5 * alpha2 * q[0] * q[0]),
        Box::new(move |q: &[f64], out: &mut [f64]| out[0] = alpha2 * q[0]),
    )
}

/// Harmonic system: V = ½ω²q², no perturbations unless given.
pub fn harmonic_preset(omega: f64, alpha1: f64, alpha2: f64) -> PotentialSystem {
    let w2 = omega * omega;
    PotentialSystem::new(
        1,
        Box::new(move |q: &[f64]| 0.5 * w2 * q[0] * q[0]),
        Box::new(move |q: &[f64], out: &mut [f64]| out[0] = w2 * q[0]),
        Box::new(move |q: &[f64]| alpha1 * q[0]),
        Box::new(move |_q: &[f64], out: &mut [f64]| out[0] = alpha1),
        Box::new(move |q: &[f64]| alpha2 * q[0]),
        Box::new(move |_q: &[f64], out: &mut [f64]| out[0] = alpha2),
    )
}

/// Free particle: V = 0, no perturbations.
pub fn free_preset(dimension: usize) -> PotentialSystem {
    PotentialSystem::new(
        dimension,
        Box::new(|_q: &[f64]| 0.0),
        Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0)),
        Box::new(|_q: &[f64]| 0.0),
        Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0)),
        Box::new(|_q: &[f64]| 0.0),
        Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0)),
    )
}

/// Configuration, velocity, and momentum of the first-order formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct HPState {
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
}

impl HPState {
    pub fn new(q: Vec<f64>, v: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != v.len() || q.len() != p.len() {
            return Err(Error::Invalid { detail: "q, v, p must share a dimension" });
        }
        Ok(Self { q, v, p })
    }

    /// Legendre-consistency residual max_i |p_i − v_i| for L = ½v² − V.
    pub fn legendre_residual(&self) -> f64 {
        self.p
            .iter()
            .zip(&self.v)
            .map(|(p, v)| libm::fabs(p - v))
            .fold(0.0, f64::max)
    }
}

/// The per-channel coefficient vectors of a momentum (or velocity) update:
/// dq/ds plus the ds, dW, and dL coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsCoefficients {
    pub dq_ds: Vec<f64>,
    pub drift: Vec<f64>,
    pub wiener: Vec<f64>,
    pub liu: Vec<f64>,
}

/// First-order right-hand side: dq = v ds and
/// dp_i = (∂L/∂q^i − p_i·h(s,t)) ds + ∂γ₁/∂q^i dW + ∂γ₂/∂q^i dL,
/// with ∂L/∂q = −∇V for L = ½v² − V.
pub fn hp_rhs(
    system: &PotentialSystem,
    state: &HPState,
    s: f64,
    kernel: &KernelSpec,
    policy: &SingularityPolicy,
) -> Result<RhsCoefficients> {
    let n = system.dimension();
    let h = kernel.h(s, policy)?;
    let mut drift = alloc::vec![0.0; n];
    system.grad_potential(&state.q, &mut drift);
    for (d, p) in drift.iter_mut().zip(&state.p) {
        *d = -*d - p * h;
    }
    let mut wiener = alloc::vec![0.0; n];
    system.grad_gamma1(&state.q, &mut wiener);
    let mut liu = alloc::vec![0.0; n];
    system.grad_gamma2(&state.q, &mut liu);
    Ok(RhsCoefficients { dq_ds: state.v.clone(), drift, wiener, liu })
}

/// Hamiltonian form for H = ½p² + V(q): dq = ∂H/∂p ds = p ds and
/// dp_i = (−∂H/∂q^i − p_i·h) ds + noise; coincides with `hp_rhs` after the
/// Legendre map p = v.
pub fn hamiltonian_rhs(
    system: &PotentialSystem,
    q: &[f64],
    p: &[f64],
    s: f64,
    kernel: &KernelSpec,
    policy: &SingularityPolicy,
) -> Result<RhsCoefficients> {
    let state = HPState::new(q.to_vec(), p.to_vec(), p.to_vec())?;
    hp_rhs(system, &state, s, kernel, policy)
}

/// A metric mechanical system with L = ½ g_ij v^i v^j.
pub struct MetricSystem {
    dimension: usize,
    metric: GradientFn, // writes the n×n row-major matrix
    christoffel: Option<GradientFn>, // writes n³ entries, index [i*n*n + j*n + k]
    fd_step: f64,
    grad_gamma1: GradientFn,
    grad_gamma2: GradientFn,
}

impl MetricSystem {
    pub fn new(dimension: usize, metric: GradientFn) -> Self {
        Self {
            dimension,
            metric,
            christoffel: None,
            fd_step: 1e-5,
            grad_gamma1: Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0)),
            grad_gamma2: Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0)),
        }
    }

    pub fn with_christoffel(mut self, christoffel: GradientFn) -> Self {
        self.christoffel = Some(christoffel);
        self
    }

    pub fn with_fd_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    pub fn with_perturbations(mut self, grad_gamma1: GradientFn, grad_gamma2: GradientFn) -> Self {
        self.grad_gamma1 = grad_gamma1;
        self.grad_gamma2 = grad_gamma2;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn metric_at(&self, q: &[f64]) -> Vec<f64> {
        let n = self.dimension;
        let mut g = alloc::vec![0.0; n * n];
        (self.metric)(q, &mut g);
        g
    }

    /// Inverse metric via Cholesky; fails when g is not SPD.
    pub fn inverse_metric_at(&self, q: &[f64]) -> Result<Vec<f64>> {
        let g = self.metric_at(q);
        let chol = cholesky(&g, self.dimension)?;
        Ok(cholesky_inverse(&chol, self.dimension))
    }

    /// Christoffel symbols of the second kind, analytic when supplied,
    /// otherwise from central differences of the metric with explicit
    /// symmetrization in the lower indices.
    pub fn christoffel_at(&self, q: &[f64]) -> Result<Vec<f64>> {
        let n = self.dimension;
        if let Some(analytic) = &self.christoffel {
            let mut out = alloc::vec![0.0; n * n * n];
            analytic(q, &mut out);
            return Ok(out);
        }
        let partials = self.metric_partials(q);
        let ginv = self.inverse_metric_at(q)?;
        let mut out = alloc::vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        // ∂_j g_lk + ∂_k g_lj − ∂_l g_jk
                        let term = partials[j * n * n + l * n + k]
                            + partials[k * n * n + l * n + j]
                            - partials[l * n * n + j * n + k];
                        acc += ginv[i * n + l] * term;
                    }
                    out[i * n * n + j * n + k] = 0.5 * acc;
                }
            }
        }
        // Symmetrize in the lower indices.
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    let a = out[i * n * n + j * n + k];
                    let b = out[i * n * n + k * n + j];
                    let sym = 0.5 * (a + b);
                    out[i * n * n + j * n + k] = sym;
                    out[i * n * n + k * n + j] = sym;
                }
            }
        }
        Ok(out)
    }

    /// Central-difference partials ∂g_jk/∂q^i, indexed [i*n*n + j*n + k].
    pub fn metric_partials(&self, q: &[f64]) -> Vec<f64> {
        let n = self.dimension;
        let step = self.fd_step;
        let mut out = alloc::vec![0.0; n * n * n];
        let mut plus = q.to_vec();
        let mut minus = q.to_vec();
        for i in 0..n {
            plus[i] += step;
            minus[i] -= step;
            let gp = self.metric_at(&plus);
            let gm = self.metric_at(&minus);
            for jk in 0..n * n {
                out[i * n * n + jk] = (gp[jk] - gm[jk]) / (2.0 * step);
            }
            plus[i] = q[i];
            minus[i] = q[i];
        }
        out
    }

    pub fn grad_gamma1(&self, q: &[f64], out: &mut [f64]) {
        (self.grad_gamma1)(q, out)
    }

    pub fn grad_gamma2(&self, q: &[f64], out: &mut [f64]) {
        (self.grad_gamma2)(q, out)
    }
}

fn cholesky(g: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = g[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::Metric {
                        detail: "metric is not symmetric positive definite",
                    });
                }
                l[i * n + j] = libm::sqrt(sum);
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn cholesky_inverse(l: &[f64], n: usize) -> Vec<f64> {
    // Solve L Lᵀ X = I column by column.
    let mut inv = alloc::vec![0.0; n * n];
    let mut y = alloc::vec![0.0; n];
    for col in 0..n {
        for i in 0..n {
            let mut sum = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                sum -= l[i * n + k] * y[k];
            }
            y[i] = sum / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= l[k * n + i] * inv[k * n + col];
            }
            inv[i * n + col] = sum / l[i * n + i];
        }
    }
    inv
}

/// Which reduction of the metric system to evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricForm {
    /// dq = v, dv^i = (−Γ^i_jk v^j v^k + h v^i) ds + g^{ij}∂γ/∂q^j noise.
    Velocity,
    /// dq^i = g^{ij} p_j, dp_i = (½ ∂g_kl/∂q^i p^k p^l − h p_i) ds
    /// + ∂γ/∂q^i noise, with p^k = g^{kj} p_j.
    Momentum,
}

/// Right-hand side of the metric reduction at (q, v) or (q, p).
pub fn metric_rhs(
    system: &MetricSystem,
    q: &[f64],
    v_or_p: &[f64],
    s: f64,
    kernel: &KernelSpec,
    policy: &SingularityPolicy,
    form: MetricForm,
) -> Result<RhsCoefficients> {
    let n = system.dimension();
    let h = kernel.h(s, policy)?;
    let mut gg1 = alloc::vec![0.0; n];
    system.grad_gamma1(q, &mut gg1);
    let mut gg2 = alloc::vec![0.0; n];
    system.grad_gamma2(q, &mut gg2);
    match form {
        MetricForm::Velocity => {
            let v = v_or_p;
            let christoffel = system.christoffel_at(q)?;
            let ginv = system.inverse_metric_at(q)?;
            let mut drift = alloc::vec![0.0; n];
            for i in 0..n {
                let mut geo = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        geo += christoffel[i * n * n + j * n + k] * v[j] * v[k];
                    }
                }
                drift[i] = -geo + h * v[i];
            }
            let wiener = mat_vec(&ginv, &gg1, n);
            let liu = mat_vec(&ginv, &gg2, n);
            Ok(RhsCoefficients { dq_ds: v.to_vec(), drift, wiener, liu })
        }
        MetricForm::Momentum => {
            let p = v_or_p;
            let ginv = system.inverse_metric_at(q)?;
            let p_up = mat_vec(&ginv, p, n);
            let partials = system.metric_partials(q);
            let mut drift = alloc::vec![0.0; n];
            for i in 0..n {
                let mut quad = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        quad += partials[i * n * n + k * n + l] * p_up[k] * p_up[l];
                    }
                }
                drift[i] = 0.5 * quad - h * p[i];
            }
            Ok(RhsCoefficients { dq_ds: p_up, drift, wiener: gg1, liu: gg2 })
        }
    }
}

fn mat_vec(m: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * x[j]).sum()).collect()
}

/// Either reduction, ready for the Euler scheme.
pub enum MechanicalSystem {
    Potential(PotentialSystem),
    Metric { system: MetricSystem, form: MetricForm },
}

impl MechanicalSystem {
    pub fn dimension(&self) -> usize {
        match self {
            MechanicalSystem::Potential(s) => s.dimension(),
            MechanicalSystem::Metric { system, .. } => system.dimension(),
        }
    }
}

/// Treatment of the h drift term inside the Euler scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeVariant {
    /// Subtract h·p_i, matching the momentum-scaled drift of the continuous
    /// equations.
    #[default]
    MomentumScaled,
    /// Subtract the bare h (no momentum factor). Only meaningful for
    /// potential systems; kept as a reproduction switch for the discrete
    /// scheme as printed.
    Verbatim,
}

/// First-order Euler scheme over (q, p) (or (q, v) for the velocity form):
/// q advances with K·dq/ds, the momentum with K·drift + coefficient-weighted
/// path increments.
pub fn euler_mechanics(
    system: &MechanicalSystem,
    initial: &HPState,
    grid: &GridSpec,
    kernel: &KernelSpec,
    wiener: &WienerPath,
    liu: &LiuPath,
    policy: &SingularityPolicy,
    scheme: SchemeVariant,
) -> Result<Trajectory> {
    if wiener.grid() != grid || liu.grid() != grid {
        return Err(Error::Invalid { detail: "wiener and liu paths must share the grid" });
    }
    let n = system.dimension();
    if initial.q.len() != n {
        return Err(Error::Invalid { detail: "initial state dimension mismatch" });
    }
    for x in initial.q.iter().chain(&initial.p) {
        if !x.is_finite() {
            return Err(Error::NonFinite { step: 0 });
        }
    }
    let k = grid.step();
    let mut q = initial.q.clone();
    let mut p = match system {
        MechanicalSystem::Metric { form: MetricForm::Velocity, .. } => initial.v.clone(),
        _ => initial.p.clone(),
    };
    let mut states = Vec::with_capacity(grid.n_steps() + 1);
    states.push(pack(&q, &p));
    for step in 0..grid.n_steps() {
        let s = grid.point(step);
        let rhs = match system {
            MechanicalSystem::Potential(sys) => {
                let mut rhs = hamiltonian_rhs(sys, &q, &p, s, kernel, policy)?;
                if scheme == SchemeVariant::Verbatim {
                    let h = kernel.h(s, policy)?;
                    for (d, pi) in rhs.drift.iter_mut().zip(&p) {
                        *d += h * pi - h;
                    }
                }
                rhs
            }
            MechanicalSystem::Metric { system: sys, form } => {
                metric_rhs(sys, &q, &p, s, kernel, policy, *form)?
            }
        };
        let dw = wiener.increments()[step];
        let dl = liu.increments()[step];
        for i in 0..n {
            q[i] += k * rhs.dq_ds[i];
            p[i] += k * rhs.drift[i] + rhs.wiener[i] * dw + rhs.liu[i] * dl;
            if !q[i].is_finite() || !p[i].is_finite() {
                return Err(Error::NonFinite { step: step + 1 });
            }
        }
        states.push(pack(&q, &p));
    }
    let provenance = Provenance {
        seed: Some(wiener.seed()),
        z: Some(liu.credibility()),
        system: String::from(match system {
            MechanicalSystem::Potential(_) => "potential",
            MechanicalSystem::Metric { form: MetricForm::Velocity, .. } => "metric_velocity",
            MechanicalSystem::Metric { form: MetricForm::Momentum, .. } => "metric_momentum",
        }),
        scheme: String::from(match scheme {
            SchemeVariant::MomentumScaled => "euler_momentum_scaled_h",
            SchemeVariant::Verbatim => "euler_verbatim_h",
        }),
    };
    Ok(Trajectory::new(*grid, states, provenance))
}

fn pack(q: &[f64], p: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(q.len() + p.len());
    row.extend_from_slice(q);
    row.extend_from_slice(p);
    row
}
