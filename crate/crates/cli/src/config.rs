use std::path::Path;

use serde::Deserialize;

/// Environment variable naming a TOML config file.
pub const CONFIG_ENV: &str = "OABP_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    #[default]
    Human,
    Json,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    /// Field for commands that build objects from scratch (`gen`, `family`).
    pub field: String,
    pub expansion_budget: usize,
    pub grid_budget: u64,
    pub seed: u64,
    /// Largest extension degree tried when a prime field is too small.
    pub max_extension_degree: usize,
    pub output: OutputMode,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            field: "rational".into(),
            expansion_budget: oabp::DEFAULT_TERM_BUDGET,
            grid_budget: oabp::pit::DEFAULT_GRID_BUDGET,
            seed: 0,
            max_extension_degree: 4,
            output: OutputMode::Human,
        }
    }
}

impl CliConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let env_path = std::env::var_os(CONFIG_ENV);
        let path = match (path, &env_path) {
            (Some(p), _) => p,
            (None, Some(p)) => Path::new(p),
            (None, None) => return Ok(CliConfig::default()),
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: CliConfig =
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        if self.expansion_budget == 0 || self.grid_budget == 0 {
            return Err("config: budgets must be positive".into());
        }
        parse_field(&self.field)?;
        Ok(())
    }
}

/// `rational`, `prime:P` or `ext:P:D`.
pub fn parse_field(s: &str) -> Result<oabp::FieldConfig, String> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| {
        t.parse::<u64>()
            .map_err(|_| format!("bad number {t:?} in field {s:?}"))
    };
    match parts.as_slice() {
        ["rational"] | ["Q"] => Ok(oabp::FieldConfig::Rational),
        ["prime", p] => Ok(oabp::FieldConfig::prime(num(p)?)),
        ["ext", p, d] => {
            oabp::FieldConfig::extension(num(p)?, num(d)? as usize).map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "unknown field {s:?}; use rational, prime:P or ext:P:D"
        )),
    }
}
