//! Builds core systems from a validated config and executes single runs and
//! ensemble sweeps with deterministic outputs.

use std::path::{Path, PathBuf};

use fracdyn::integrate::{
    euler_hybrid, stock_model_fuzzy, stock_model_stochastic, FnField, HybridSystem,
    IntegrationMode, Trajectory,
};
use fracdyn::kernel::KernelSpec;
use fracdyn::mechanics::{
    euler_mechanics, free_preset, harmonic_preset, pendulum_preset, HPState, MechanicalSystem,
    MetricForm, MetricSystem,
};
use fracdyn::processes::{sample_liu, sample_wiener};

use crate::config::{Config, Kind, MetricFormChoice, MetricPreset, SystemConfig};
use crate::csv::{self, Field};
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use crate::svg::{self, Series};

/// Metric presets shared by config validation (SPD check at q0) and the
/// runner. Perturbation scalars are γ = c·Σqⁱ so their gradients are the
/// constant vector (c, …, c).
pub fn build_metric_system(
    preset: MetricPreset,
    dimension: usize,
    gamma1_coeff: f64,
    gamma2_coeff: f64,
) -> MetricSystem {
    let system = match preset {
        MetricPreset::Euclidean => MetricSystem::new(
            dimension,
            Box::new(move |_q: &[f64], out: &mut [f64]| {
                out.fill(0.0);
                for i in 0..dimension {
                    out[i * dimension + i] = 1.0;
                }
            }),
        )
        .with_christoffel(Box::new(|_q: &[f64], out: &mut [f64]| out.fill(0.0))),
        MetricPreset::Polar => MetricSystem::new(
            2,
            Box::new(|q: &[f64], out: &mut [f64]| {
                out.copy_from_slice(&[1.0, 0.0, 0.0, q[0] * q[0]]);
            }),
        )
        .with_christoffel(Box::new(|q: &[f64], out: &mut [f64]| {
            let r = q[0];
            out.fill(0.0);
            out[0 * 4 + 1 * 2 + 1] = -r; // Γ^r_θθ
            out[1 * 4 + 0 * 2 + 1] = 1.0 / r; // Γ^θ_rθ
            out[1 * 4 + 1 * 2 + 0] = 1.0 / r; // Γ^θ_θr
        })),
    };
    system.with_perturbations(
        Box::new(move |_q: &[f64], out: &mut [f64]| out.fill(gamma1_coeff)),
        Box::new(move |_q: &[f64], out: &mut [f64]| out.fill(gamma2_coeff)),
    )
}

fn mechanical_system(cfg: &Config) -> Result<(MechanicalSystem, HPState)> {
    match &cfg.system {
        SystemConfig::Pendulum { alpha1, alpha2, q0, p0 } => Ok((
            MechanicalSystem::Potential(pendulum_preset(*alpha1, *alpha2)),
            HPState::new(vec![*q0], vec![*p0], vec![*p0]).map_err(CliError::numeric)?,
        )),
        SystemConfig::Harmonic { omega, alpha1, alpha2, q0, p0 } => Ok((
            MechanicalSystem::Potential(harmonic_preset(*omega, *alpha1, *alpha2)),
            HPState::new(vec![*q0], vec![*p0], vec![*p0]).map_err(CliError::numeric)?,
        )),
        SystemConfig::Free { q0, p0 } => Ok((
            MechanicalSystem::Potential(free_preset(q0.len())),
            HPState::new(q0.clone(), p0.clone(), p0.clone()).map_err(CliError::numeric)?,
        )),
        SystemConfig::Metric { metric, form, q0, p0, gamma1_coeff, gamma2_coeff } => {
            let system = build_metric_system(*metric, q0.len(), *gamma1_coeff, *gamma2_coeff);
            let form = match form {
                MetricFormChoice::Velocity => MetricForm::Velocity,
                MetricFormChoice::Momentum => MetricForm::Momentum,
            };
            Ok((
                MechanicalSystem::Metric { system, form },
                HPState::new(q0.clone(), p0.clone(), p0.clone()).map_err(CliError::numeric)?,
            ))
        }
        _ => Err(CliError::Config("system: not a mechanical system".into())),
    }
}

fn hybrid_system(cfg: &Config) -> Result<HybridSystem> {
    let SystemConfig::HybridLinear { mu, sigma, eta, x0 } = &cfg.system else {
        return Err(CliError::Config("system: not a hybrid SDE system".into()));
    };
    let kernel = cfg.kernel.clone().expect("validated hybrid config carries a kernel");
    let kernel_beta = cfg.kernel_beta.clone().unwrap_or_else(|| kernel.clone());
    let kernel_gamma = cfg.kernel_gamma.clone().unwrap_or_else(|| kernel.clone());
    let n = x0.len();
    let (mu, sigma, eta) = (*mu, *sigma, *eta);
    HybridSystem::new(
        Box::new(FnField::new(n, move |_s, x: &[f64], out: &mut [f64]| {
            for (o, xi) in out.iter_mut().zip(x) {
                *o = mu * xi;
            }
        })),
        Box::new(FnField::new(n, move |_s, x: &[f64], out: &mut [f64]| {
            for (o, xi) in out.iter_mut().zip(x) {
                *o = sigma * xi;
            }
        })),
        Box::new(FnField::new(n, move |_s, x: &[f64], out: &mut [f64]| {
            for (o, xi) in out.iter_mut().zip(x) {
                *o = eta * xi;
            }
        })),
        kernel,
        kernel_beta,
        kernel_gamma,
        x0.clone(),
    )
    .map_err(CliError::numeric)
}

/// One trajectory under the config, with the seed and credibility driver
/// overridable so sweeps can reuse the same machinery.
pub fn simulate(cfg: &Config, seed: u64, z: f64) -> Result<Trajectory> {
    let grid = cfg.grid;
    match cfg.kind {
        Kind::StockStochastic => {
            let SystemConfig::StockStochastic { mu, sigma, alpha1, x0 } = cfg.system else {
                unreachable!("validated kind/system pairing");
            };
            stock_model_stochastic(
                move |_s| mu,
                move |_s| sigma,
                alpha1,
                x0,
                &grid,
                seed,
                &cfg.policy,
            )
            .map_err(CliError::numeric)
        }
        Kind::StockFuzzy => {
            let SystemConfig::StockFuzzy { mu, sigma, beta1, x0 } = cfg.system else {
                unreachable!("validated kind/system pairing");
            };
            stock_model_fuzzy(
                move |_s| mu,
                move |_s| sigma,
                beta1,
                x0,
                &grid,
                z,
                cfg.noise.e,
                cfg.noise.sigma_liu,
                &cfg.policy,
            )
            .map_err(CliError::numeric)
        }
        Kind::HybridSde => {
            let system = hybrid_system(cfg)?;
            let wiener = sample_wiener(&grid, seed);
            let liu =
                sample_liu(&grid, z, cfg.noise.e, cfg.noise.sigma_liu).map_err(CliError::numeric)?;
            let mode = if cfg.volterra {
                IntegrationMode::Volterra
            } else {
                IntegrationMode::FixedObservedTime
            };
            euler_hybrid(&system, &grid, &wiener, &liu, &cfg.policy, mode)
                .map_err(CliError::numeric)
        }
        Kind::Hp | Kind::Hamiltonian | Kind::Pendulum | Kind::Metric => {
            let (system, initial) = mechanical_system(cfg)?;
            let kernel: &KernelSpec =
                cfg.kernel.as_ref().expect("validated mechanical config carries a kernel");
            let wiener = sample_wiener(&grid, seed);
            let liu =
                sample_liu(&grid, z, cfg.noise.e, cfg.noise.sigma_liu).map_err(CliError::numeric)?;
            euler_mechanics(
                &system,
                &initial,
                &grid,
                kernel,
                &wiener,
                &liu,
                &cfg.policy,
                cfg.scheme,
            )
            .map_err(CliError::numeric)
        }
    }
}

fn is_mechanical(kind: Kind) -> bool {
    matches!(kind, Kind::Hp | Kind::Hamiltonian | Kind::Pendulum | Kind::Metric)
}

fn component_header(prefix: &str, dim: usize) -> String {
    if dim == 1 {
        prefix.to_string()
    } else {
        (0..dim).map(|i| format!("{prefix}{}", i + 1)).collect::<Vec<_>>().join(",")
    }
}

struct CsvOut {
    name: &'static str,
    content: String,
}

fn trajectory_csvs(cfg: &Config, trajectory: &Trajectory) -> Vec<CsvOut> {
    let states = trajectory.states();
    let grid = trajectory.grid();
    let mut outs = Vec::new();
    if is_mechanical(cfg.kind) {
        let dim = states[0].len() / 2;
        let qh = component_header("q", dim);
        let ph = component_header("p", dim);
        outs.push(CsvOut {
            name: "trajectory.csv",
            content: csv::render(
                &format!("n,s,{qh},{ph}"),
                states.iter().enumerate().map(|(n, state)| {
                    let mut row = vec![Field::Index(n), Field::Value(grid.point(n))];
                    row.extend(state.iter().map(|&x| Field::Value(x)));
                    row
                }),
            ),
        });
        outs.push(CsvOut {
            name: "series_q.csv",
            content: csv::render(
                &format!("n,{qh}"),
                states.iter().enumerate().map(|(n, state)| {
                    let mut row = vec![Field::Index(n)];
                    row.extend(state[..dim].iter().map(|&x| Field::Value(x)));
                    row
                }),
            ),
        });
        outs.push(CsvOut {
            name: "series_p.csv",
            content: csv::render(
                &format!("n,{ph}"),
                states.iter().enumerate().map(|(n, state)| {
                    let mut row = vec![Field::Index(n)];
                    row.extend(state[dim..].iter().map(|&x| Field::Value(x)));
                    row
                }),
            ),
        });
        outs.push(CsvOut {
            name: "phase.csv",
            content: csv::render(
                &format!("{qh},{ph}"),
                states.iter().map(|state| state.iter().map(|&x| Field::Value(x)).collect()),
            ),
        });
    } else {
        let dim = states[0].len();
        let xh = component_header("x", dim);
        outs.push(CsvOut {
            name: "trajectory.csv",
            content: csv::render(
                &format!("n,s,{xh}"),
                states.iter().enumerate().map(|(n, state)| {
                    let mut row = vec![Field::Index(n), Field::Value(grid.point(n))];
                    row.extend(state.iter().map(|&x| Field::Value(x)));
                    row
                }),
            ),
        });
    }
    outs
}

fn trajectory_svgs(cfg: &Config, trajectory: &Trajectory) -> Vec<(String, String)> {
    let states = trajectory.states();
    let steps: Vec<f64> = (0..states.len()).map(|n| n as f64).collect();
    let mut plots = Vec::new();
    if is_mechanical(cfg.kind) {
        let dim = states[0].len() / 2;
        let q: Vec<f64> = states.iter().map(|s| s[0]).collect();
        let p: Vec<f64> = states.iter().map(|s| s[dim]).collect();
        plots.push((
            "series_q.svg".to_string(),
            svg::line_plot("q vs n", &[Series { x: &steps, y: &q }]),
        ));
        plots.push((
            "series_p.svg".to_string(),
            svg::line_plot("p vs n", &[Series { x: &steps, y: &p }]),
        ));
        plots.push((
            "phase.svg".to_string(),
            svg::line_plot("p vs q", &[Series { x: &q, y: &p }]),
        ));
    } else {
        let s: Vec<f64> =
            (0..states.len()).map(|n| trajectory.grid().point(n)).collect();
        let x: Vec<f64> = states.iter().map(|st| st[0]).collect();
        plots.push((
            "trajectory.svg".to_string(),
            svg::line_plot("x vs s", &[Series { x: &s, y: &x }]),
        ));
    }
    plots
}

/// Execute a single run and write its artifacts under `dir`.
pub fn run(config_text: &str, cfg: &Config, dir: &Path) -> Result<RunManifest> {
    let trajectory = simulate(cfg, cfg.noise.seed, cfg.noise.z)?;
    let mut outputs: Vec<PathBuf> = Vec::new();
    if cfg.output.csv {
        for out in trajectory_csvs(cfg, &trajectory) {
            let path = dir.join(out.name);
            csv::write_file(&path, &out.content)?;
            outputs.push(path);
        }
    }
    if cfg.output.svg {
        for (name, content) in trajectory_svgs(cfg, &trajectory) {
            let path = dir.join(name);
            csv::write_file(&path, &content)?;
            outputs.push(path);
        }
    }
    let manifest = RunManifest::new(config_text.as_bytes(), outputs);
    manifest.write(dir)?;
    Ok(manifest)
}

/// One ensemble member: the varied parameter and the resulting trajectory.
struct Member {
    seed: u64,
    z: f64,
}

/// Execute an ensemble sweep. Members vary either the Wiener seed or the
/// Liu credibility driver; the summary CSV is ordered by member index so it
/// is byte-identical regardless of worker count.
pub fn sweep(config_text: &str, cfg: &Config, dir: &Path) -> Result<RunManifest> {
    let ensemble = cfg
        .ensemble
        .as_ref()
        .ok_or_else(|| CliError::Config("ensemble: missing (required for sweep)".into()))?;
    let members: Vec<Member> = if !ensemble.seeds.is_empty() && ensemble.z_values.is_empty() {
        ensemble.seeds.iter().map(|&seed| Member { seed, z: cfg.noise.z }).collect()
    } else if ensemble.seeds.is_empty() && !ensemble.z_values.is_empty() {
        ensemble.z_values.iter().map(|&z| Member { seed: cfg.noise.seed, z }).collect()
    } else if ensemble.seeds.is_empty() && ensemble.z_values.is_empty() {
        return Err(CliError::Config("ensemble: seeds or z_values must be non-empty".into()));
    } else {
        return Err(CliError::Config(
            "ensemble: provide seeds or z_values, not both".into(),
        ));
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ensemble.workers)
        .build()
        .map_err(|e| CliError::Config(format!("ensemble.workers: {e}")))?;
    let trajectories: Vec<Trajectory> = pool.install(|| {
        use rayon::prelude::*;
        members
            .par_iter()
            .map(|m| simulate(cfg, m.seed, m.z))
            .collect::<Result<Vec<_>>>()
    })?;

    let dim = trajectories[0].terminal().len();
    let xh = component_header("x", dim);
    let summary = csv::render(
        &format!("member,seed,z,{xh}"),
        members.iter().zip(&trajectories).enumerate().map(|(i, (m, t))| {
            let mut row = vec![
                Field::Index(i),
                Field::Text(m.seed.to_string()),
                Field::Value(m.z),
            ];
            row.extend(t.terminal().iter().map(|&x| Field::Value(x)));
            row
        }),
    );
    let mut outputs = Vec::new();
    let summary_path = dir.join("summary.csv");
    csv::write_file(&summary_path, &summary)?;
    outputs.push(summary_path);

    if cfg.output.per_member {
        for (i, t) in trajectories.iter().enumerate() {
            let path = dir.join(format!("member_{i}.csv"));
            let content = csv::render(
                "n,s,x",
                t.states().iter().enumerate().map(|(n, state)| {
                    let mut row = vec![Field::Index(n), Field::Value(t.grid().point(n))];
                    row.extend(state.iter().map(|&x| Field::Value(x)));
                    row
                }),
            );
            csv::write_file(&path, &content)?;
            outputs.push(path);
        }
    }
    let manifest = RunManifest::new(config_text.as_bytes(), outputs);
    manifest.write(dir)?;
    Ok(manifest)
}
