use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use twistcolor_core::Limits;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Settings shared by every subcommand. Precedence, lowest first: built-in
/// defaults, `--config` file, `TWISTCOLOR_*` environment, command-line flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub node_budget: u64,
    pub brute_force_cap: u64,
    pub automorphism_cap: usize,
    pub verify: bool,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let limits = Limits::default();
        Self {
            node_budget: limits.node_budget,
            brute_force_cap: limits.brute_force_cap,
            automorphism_cap: limits.automorphism_cap,
            verify: true,
            format: Format::Json,
            seed: 0,
        }
    }
}

/// Values given on the command line or through the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub node_budget: Option<u64>,
    pub brute_force_cap: Option<u64>,
    pub automorphism_cap: Option<usize>,
    pub verify: Option<bool>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> anyhow::Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = overrides.node_budget {
            config.node_budget = v;
        }
        if let Some(v) = overrides.brute_force_cap {
            config.brute_force_cap = v;
        }
        if let Some(v) = overrides.automorphism_cap {
            config.automorphism_cap = v;
        }
        if let Some(v) = overrides.verify {
            config.verify = v;
        }
        if let Some(v) = overrides.format {
            config.format = v;
        }
        if let Some(v) = overrides.seed {
            config.seed = v;
        }
        if config.node_budget == 0 || config.brute_force_cap == 0 || config.automorphism_cap == 0 {
            bail!("search caps must be positive");
        }
        Ok(config)
    }

    pub fn limits(&self) -> Limits {
        Limits {
            node_budget: self.node_budget,
            brute_force_cap: self.brute_force_cap,
            automorphism_cap: self.automorphism_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"seed": 7, "node_budget": 100}"#).unwrap();
        let config = RunConfig::load(Some(&path), &Overrides { seed: Some(9), ..Default::default() }).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.node_budget, 100);
        assert_eq!(config.brute_force_cap, 10_000_000);
    }

    #[test]
    fn zero_caps_are_rejected() {
        let bad = Overrides { node_budget: Some(0), ..Default::default() };
        assert!(RunConfig::load(None, &bad).is_err());
    }
}
