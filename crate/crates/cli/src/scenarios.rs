//! Shipped scenario configs: the fractional pendulum across the
//! {order 0.6, order 1} × {both channels, Liu only, Wiener only} grid.

use crate::config::{self, Config};
use crate::error::{CliError, Result};

pub const SCENARIOS: &[(&str, &str)] = &[
    ("fig1_3", include_str!("../scenarios/fig1_3.toml")),
    ("fig4_6", include_str!("../scenarios/fig4_6.toml")),
    ("fig7_9", include_str!("../scenarios/fig7_9.toml")),
    ("fig10_12", include_str!("../scenarios/fig10_12.toml")),
    ("fig13_15", include_str!("../scenarios/fig13_15.toml")),
    ("fig16_18", include_str!("../scenarios/fig16_18.toml")),
];

pub fn names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|(name, _)| *name).collect()
}

pub fn text(name: &str) -> Result<&'static str> {
    SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| CliError::Config(format!("unknown scenario `{name}`")))
}

pub fn load(name: &str) -> Result<Config> {
    config::load(text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Kind, SystemConfig};
    use fracdyn::kernel::SingularityMode;

    #[test]
    fn all_scenarios_validate() {
        for (name, _) in SCENARIOS {
            let cfg = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.kind, Kind::Pendulum, "{name}");
            assert_eq!(cfg.grid.n_steps(), 1000, "{name}");
            assert_eq!(cfg.noise.z, 15.0, "{name}");
            // The observed time 0.8 sits near the 0.8·n grid point, so the
            // shipped configs must carry a clamp policy.
            assert_eq!(cfg.policy.mode, SingularityMode::ClampToEpsilon, "{name}");
            assert!(matches!(cfg.system, SystemConfig::Pendulum { .. }), "{name}");
        }
    }

    #[test]
    fn unknown_scenario_is_a_config_error() {
        assert_eq!(text("nope").unwrap_err().exit_code(), 2);
    }
}
