//! Experiment configuration: a TOML schema validated into core types.
//!
//! Parsing is two-phase: a fully optional raw layer (so missing or unknown
//! fields produce errors naming the offending key) followed by semantic
//! validation against the invariants the core types declare.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use fracdyn::kernel::{
    AlphaFunction, HConvention, KernelSpec, SingularityMode, SingularityPolicy,
};
use fracdyn::mechanics::SchemeVariant;
use fracdyn::GridSpec;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub kind: Option<String>,
    pub kernel: Option<RawKernel>,
    pub kernel_beta: Option<RawKernel>,
    pub kernel_gamma: Option<RawKernel>,
    pub grid: Option<RawGrid>,
    pub noise: Option<RawNoise>,
    pub system: Option<RawSystem>,
    pub output: Option<RawOutput>,
    pub ensemble: Option<RawEnsemble>,
    pub volterra: Option<bool>,
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawKernel {
    pub family: Option<String>,
    pub value: Option<f64>,
    pub intercept: Option<f64>,
    pub slope: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub center: Option<f64>,
    pub width: Option<f64>,
    pub rho: Option<f64>,
    pub observed_time: Option<f64>,
    pub h_convention: Option<String>,
    pub policy: Option<RawPolicy>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawPolicy {
    pub epsilon: Option<f64>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub t0: Option<f64>,
    pub t_end: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawNoise {
    pub seed: Option<u64>,
    pub z: Option<f64>,
    pub e: Option<f64>,
    pub sigma_liu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    pub preset: Option<String>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub omega: Option<f64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub eta: Option<f64>,
    pub beta1: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub q0: Option<Vec<f64>>,
    pub p0: Option<Vec<f64>>,
    pub metric: Option<String>,
    pub form: Option<String>,
    pub gamma1_coeff: Option<f64>,
    pub gamma2_coeff: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub dir: Option<PathBuf>,
    pub csv: Option<bool>,
    pub svg: Option<bool>,
    pub per_member: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawEnsemble {
    pub seeds: Option<Vec<u64>>,
    pub z_values: Option<Vec<f64>>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    HybridSde,
    StockStochastic,
    StockFuzzy,
    Hp,
    Hamiltonian,
    Metric,
    Pendulum,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::HybridSde => "hybrid_sde",
            Kind::StockStochastic => "stock_stochastic",
            Kind::StockFuzzy => "stock_fuzzy",
            Kind::Hp => "hp",
            Kind::Hamiltonian => "hamiltonian",
            Kind::Metric => "metric",
            Kind::Pendulum => "pendulum",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    pub seed: u64,
    pub z: f64,
    pub e: f64,
    pub sigma_liu: f64,
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub csv: bool,
    pub svg: bool,
    pub per_member: bool,
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub seeds: Vec<u64>,
    pub z_values: Vec<f64>,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricPreset {
    Euclidean,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricFormChoice {
    Velocity,
    Momentum,
}

#[derive(Debug, Clone)]
pub enum SystemConfig {
    Pendulum { alpha1: f64, alpha2: f64, q0: f64, p0: f64 },
    Harmonic { omega: f64, alpha1: f64, alpha2: f64, q0: f64, p0: f64 },
    Free { q0: Vec<f64>, p0: Vec<f64> },
    HybridLinear { mu: f64, sigma: f64, eta: f64, x0: Vec<f64> },
    StockStochastic { mu: f64, sigma: f64, alpha1: f64, x0: f64 },
    StockFuzzy { mu: f64, sigma: f64, beta1: f64, x0: f64 },
    Metric {
        metric: MetricPreset,
        form: MetricFormChoice,
        q0: Vec<f64>,
        p0: Vec<f64>,
        gamma1_coeff: f64,
        gamma2_coeff: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Config {
    pub kind: Kind,
    pub kernel: Option<KernelSpec>,
    pub kernel_beta: Option<KernelSpec>,
    pub kernel_gamma: Option<KernelSpec>,
    pub policy: SingularityPolicy,
    pub grid: GridSpec,
    pub noise: NoiseConfig,
    pub system: SystemConfig,
    pub output: OutputConfig,
    pub ensemble: Option<EnsembleConfig>,
    pub volterra: bool,
    pub scheme: SchemeVariant,
}

pub fn parse(text: &str) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn missing(field: &str) -> CliError {
    CliError::config(field, "missing")
}

fn build_kernel(raw: &RawKernel, prefix: &str) -> Result<(KernelSpec, SingularityPolicy)> {
    let family = raw
        .family
        .as_deref()
        .ok_or_else(|| missing(&format!("{prefix}.family")))?;
    let alpha = match family {
        "constant" => AlphaFunction::Constant {
            value: raw.value.ok_or_else(|| missing(&format!("{prefix}.value")))?,
        },
        "affine" => AlphaFunction::Affine {
            intercept: raw.intercept.ok_or_else(|| missing(&format!("{prefix}.intercept")))?,
            slope: raw.slope.ok_or_else(|| missing(&format!("{prefix}.slope")))?,
        },
        "logistic" => AlphaFunction::Logistic {
            lo: raw.lo.ok_or_else(|| missing(&format!("{prefix}.lo")))?,
            hi: raw.hi.ok_or_else(|| missing(&format!("{prefix}.hi")))?,
            center: raw.center.ok_or_else(|| missing(&format!("{prefix}.center")))?,
            width: raw.width.ok_or_else(|| missing(&format!("{prefix}.width")))?,
        },
        other => {
            return Err(CliError::config(
                &format!("{prefix}.family"),
                format!("unknown family `{other}` (expected constant|affine|logistic)"),
            ))
        }
    };
    let observed_time = raw
        .observed_time
        .ok_or_else(|| missing(&format!("{prefix}.observed_time")))?;
    let spec = KernelSpec::new(alpha, raw.rho.unwrap_or(0.0), observed_time)
        .map_err(|e| CliError::config(prefix, e))?;
    let spec = match raw.h_convention.as_deref() {
        None | Some("paper") => spec,
        Some("log_derivative") => spec.with_h_convention(HConvention::LogDerivative),
        Some(other) => {
            return Err(CliError::config(
                &format!("{prefix}.h_convention"),
                format!("unknown convention `{other}` (expected paper|log_derivative)"),
            ))
        }
    };
    let policy = match &raw.policy {
        None => SingularityPolicy::default(),
        Some(p) => {
            let mode = match p.mode.as_deref() {
                None | Some("error") => SingularityMode::Error,
                Some("clamp") => SingularityMode::ClampToEpsilon,
                Some(other) => {
                    return Err(CliError::config(
                        &format!("{prefix}.policy.mode"),
                        format!("unknown mode `{other}` (expected error|clamp)"),
                    ))
                }
            };
            SingularityPolicy::new(p.epsilon.unwrap_or(1e-8), mode)
                .map_err(|e| CliError::config(&format!("{prefix}.policy.epsilon"), e))?
        }
    };
    Ok((spec, policy))
}

fn scalar1(field: &str, v: &Option<Vec<f64>>, default: f64) -> Result<f64> {
    match v {
        None => Ok(default),
        Some(values) if values.len() == 1 => Ok(values[0]),
        Some(_) => Err(CliError::config(field, "expected a single value")),
    }
}

pub fn validate(raw: &RawConfig) -> Result<Config> {
    let kind = match raw.kind.as_deref().ok_or_else(|| missing("kind"))? {
        "hybrid_sde" => Kind::HybridSde,
        "stock_stochastic" => Kind::StockStochastic,
        "stock_fuzzy" => Kind::StockFuzzy,
        "hp" => Kind::Hp,
        "hamiltonian" => Kind::Hamiltonian,
        "metric" => Kind::Metric,
        "pendulum" => Kind::Pendulum,
        other => {
            return Err(CliError::config("kind", format!("unknown experiment kind `{other}`")))
        }
    };

    let raw_grid = raw.grid.as_ref().ok_or_else(|| missing("grid"))?;
    let grid = GridSpec::new(
        raw_grid.t0.ok_or_else(|| missing("grid.t0"))?,
        raw_grid.t_end.ok_or_else(|| missing("grid.t_end"))?,
        raw_grid.n.ok_or_else(|| missing("grid.n"))?,
    )
    .map_err(|e| CliError::config("grid", e))?;

    let noise_raw = raw.noise.clone().unwrap_or_default();
    let noise = NoiseConfig {
        seed: noise_raw.seed.unwrap_or(0),
        z: noise_raw.z.unwrap_or(0.0),
        e: noise_raw.e.unwrap_or(0.0),
        sigma_liu: noise_raw.sigma_liu.unwrap_or(1.0),
    };
    if !(noise.sigma_liu > 0.0) {
        return Err(CliError::config("noise.sigma_liu", "must be > 0"));
    }

    let needs_kernel = !matches!(kind, Kind::StockStochastic | Kind::StockFuzzy);
    let mut policy = SingularityPolicy::default();
    let kernel = match (&raw.kernel, needs_kernel) {
        (Some(k), _) => {
            let (spec, pol) = build_kernel(k, "kernel")?;
            policy = pol;
            spec.validate_alpha_on_grid(&grid).map_err(|e| CliError::config("kernel", e))?;
            Some(spec)
        }
        (None, true) => return Err(missing("kernel")),
        (None, false) => None,
    };
    let kernel_beta = match &raw.kernel_beta {
        Some(k) => {
            let (spec, _) = build_kernel(k, "kernel_beta")?;
            spec.validate_alpha_on_grid(&grid)
                .map_err(|e| CliError::config("kernel_beta", e))?;
            Some(spec)
        }
        None => None,
    };
    let kernel_gamma = match &raw.kernel_gamma {
        Some(k) => {
            let (spec, _) = build_kernel(k, "kernel_gamma")?;
            spec.validate_alpha_on_grid(&grid)
                .map_err(|e| CliError::config("kernel_gamma", e))?;
            Some(spec)
        }
        None => None,
    };

    let sys = raw.system.clone().unwrap_or_default();
    let system = match kind {
        Kind::Pendulum => SystemConfig::Pendulum {
            alpha1: sys.alpha1.unwrap_or(0.0),
            alpha2: sys.alpha2.unwrap_or(0.0),
            q0: scalar1("system.q0", &sys.q0, 1.0)?,
            p0: scalar1("system.p0", &sys.p0, 0.0)?,
        },
        Kind::Hp | Kind::Hamiltonian => match sys.preset.as_deref().unwrap_or("pendulum") {
            "pendulum" => SystemConfig::Pendulum {
                alpha1: sys.alpha1.unwrap_or(0.0),
                alpha2: sys.alpha2.unwrap_or(0.0),
                q0: scalar1("system.q0", &sys.q0, 1.0)?,
                p0: scalar1("system.p0", &sys.p0, 0.0)?,
            },
            "harmonic" => SystemConfig::Harmonic {
                omega: sys.omega.unwrap_or(1.0),
                alpha1: sys.alpha1.unwrap_or(0.0),
                alpha2: sys.alpha2.unwrap_or(0.0),
                q0: scalar1("system.q0", &sys.q0, 1.0)?,
                p0: scalar1("system.p0", &sys.p0, 0.0)?,
            },
            "free" => {
                let q0 = sys.q0.clone().ok_or_else(|| missing("system.q0"))?;
                let p0 = sys.p0.clone().ok_or_else(|| missing("system.p0"))?;
                if q0.len() != p0.len() {
                    return Err(CliError::config("system.p0", "dimension mismatch with q0"));
                }
                SystemConfig::Free { q0, p0 }
            }
            other => {
                return Err(CliError::config(
                    "system.preset",
                    format!("unknown preset `{other}` (expected pendulum|harmonic|free)"),
                ))
            }
        },
        Kind::Metric => {
            let metric = match sys.metric.as_deref().ok_or_else(|| missing("system.metric"))? {
                "euclidean" => MetricPreset::Euclidean,
                "polar" => MetricPreset::Polar,
                other => {
                    return Err(CliError::config(
                        "system.metric",
                        format!("unknown metric `{other}` (expected euclidean|polar)"),
                    ))
                }
            };
            let form = match sys.form.as_deref().unwrap_or("velocity") {
                "velocity" => MetricFormChoice::Velocity,
                "momentum" => MetricFormChoice::Momentum,
                other => {
                    return Err(CliError::config(
                        "system.form",
                        format!("unknown form `{other}` (expected velocity|momentum)"),
                    ))
                }
            };
            let q0 = sys.q0.clone().ok_or_else(|| missing("system.q0"))?;
            let p0 = sys.p0.clone().ok_or_else(|| missing("system.p0"))?;
            if q0.len() != p0.len() {
                return Err(CliError::config("system.p0", "dimension mismatch with q0"));
            }
            if metric == MetricPreset::Polar && q0.len() != 2 {
                return Err(CliError::config("system.q0", "polar metric is 2-dimensional"));
            }
            // SPD check at the initial point.
            crate::runner::build_metric_system(metric, q0.len(), 0.0, 0.0)
                .inverse_metric_at(&q0)
                .map_err(|e| CliError::config("system.metric", e))?;
            SystemConfig::Metric {
                metric,
                form,
                q0,
                p0,
                gamma1_coeff: sys.gamma1_coeff.unwrap_or(0.0),
                gamma2_coeff: sys.gamma2_coeff.unwrap_or(0.0),
            }
        }
        Kind::HybridSde => SystemConfig::HybridLinear {
            mu: sys.mu.unwrap_or(0.0),
            sigma: sys.sigma.unwrap_or(0.0),
            eta: sys.eta.unwrap_or(0.0),
            x0: sys.x0.clone().ok_or_else(|| missing("system.x0"))?,
        },
        Kind::StockStochastic => {
            let alpha1 = sys.alpha1.ok_or_else(|| missing("system.alpha1"))?;
            if !(alpha1 > 0.0 && alpha1 <= 1.0) {
                return Err(CliError::config("system.alpha1", "must lie in (0, 1]"));
            }
            SystemConfig::StockStochastic {
                mu: sys.mu.unwrap_or(0.0),
                sigma: sys.sigma.unwrap_or(0.0),
                alpha1,
                x0: scalar1("system.x0", &sys.x0, 1.0)?,
            }
        }
        Kind::StockFuzzy => {
            let beta1 = sys.beta1.ok_or_else(|| missing("system.beta1"))?;
            if !(beta1 > 0.0 && beta1 <= 1.0) {
                return Err(CliError::config("system.beta1", "must lie in (0, 1]"));
            }
            SystemConfig::StockFuzzy {
                mu: sys.mu.unwrap_or(0.0),
                sigma: sys.sigma.unwrap_or(0.0),
                beta1,
                x0: scalar1("system.x0", &sys.x0, 1.0)?,
            }
        }
    };

    let out = raw.output.clone().unwrap_or_default();
    let output = OutputConfig {
        dir: out.dir,
        csv: out.csv.unwrap_or(true),
        svg: out.svg.unwrap_or(false),
        per_member: out.per_member.unwrap_or(false),
    };

    let ensemble = match &raw.ensemble {
        None => None,
        Some(e) => {
            let seeds = e.seeds.clone().unwrap_or_default();
            let z_values = e.z_values.clone().unwrap_or_default();
            let workers = e.workers.unwrap_or(1);
            if workers == 0 {
                return Err(CliError::config("ensemble.workers", "must be >= 1"));
            }
            Some(EnsembleConfig { seeds, z_values, workers })
        }
    };

    let scheme = match raw.scheme.as_deref() {
        None | Some("momentum_scaled") => SchemeVariant::MomentumScaled,
        Some("verbatim") => SchemeVariant::Verbatim,
        Some(other) => {
            return Err(CliError::config(
                "scheme",
                format!("unknown scheme `{other}` (expected momentum_scaled|verbatim)"),
            ))
        }
    };

    Ok(Config {
        kind,
        kernel,
        kernel_beta,
        kernel_gamma,
        policy,
        grid,
        noise,
        system,
        output,
        ensemble,
        volterra: raw.volterra.unwrap_or(false),
        scheme,
    })
}

pub fn load(text: &str) -> Result<Config> {
    validate(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
kind = "pendulum"

[kernel]
family = "constant"
value = 0.6
observed_time = 0.8

[grid]
t0 = 0.0
t_end = 1.0
n = 1024

[system]
alpha1 = 0.1
alpha2 = 0.3
"#;

    #[test]
    fn minimal_pendulum_config_loads() {
        let cfg = load(MINIMAL).unwrap();
        assert_eq!(cfg.kind, Kind::Pendulum);
        assert!(matches!(cfg.system, SystemConfig::Pendulum { alpha1, .. } if alpha1 == 0.1));
        assert_eq!(cfg.grid.n_steps(), 1024);
    }

    #[test]
    fn missing_grid_n_names_the_field() {
        let text = MINIMAL.replace("n = 1024", "");
        let err = load(&text).unwrap_err();
        assert!(err.to_string().contains("grid.n"), "{err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{MINIMAL}\n[bogus]\nx = 1\n");
        assert!(load(&text).is_err());
    }

    #[test]
    fn alpha_out_of_range_on_grid_is_a_config_error() {
        let text = MINIMAL.replace("value = 0.6", "value = 1.5");
        let err = load(&text).unwrap_err();
        assert!(err.to_string().contains("kernel"), "{err}");
    }

    #[test]
    fn raw_config_round_trips_through_toml() {
        let raw = parse(MINIMAL).unwrap();
        let text = toml::to_string(&raw).unwrap();
        let back = parse(&text).unwrap();
        assert_eq!(toml::to_string(&back).unwrap(), text);
    }

    #[test]
    fn stock_models_do_not_require_a_kernel_block() {
        let text = r#"
kind = "stock_stochastic"

[grid]
t0 = 0.0
t_end = 1.0
n = 256

[system]
alpha1 = 0.6
mu = 0.05
sigma = 0.2
"#;
        let cfg = load(text).unwrap();
        assert!(cfg.kernel.is_none());
    }
}
