//! Flat `key = value` scenario files.
//!
//! ```text
//! # dispersive set
//! n1 = 200
//! omega2 = 0.3
//! [grid]
//! t_max = 50
//! n_points = 501
//! [sweep]
//! gamma = 1e-5, 2e-3
//! ```
//!
//! A `[section]` header prefixes the keys that follow with `section.`, so
//! `grid.t_max = 50` at top level is equivalent. `#` and `;` start comments.

use std::collections::BTreeSet;
use std::path::Path;

use thermoduet::{ModelParams, Subsystem};

use crate::error::{CliError, CliResult};

/// Quantity groups that can be emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputGroup {
    Energies,
    Heats,
    Works,
    Balances,
    EffectiveHamiltonianTrace,
}

impl OutputGroup {
    pub const ALL: [OutputGroup; 5] = [
        OutputGroup::Energies,
        OutputGroup::Heats,
        OutputGroup::Works,
        OutputGroup::Balances,
        OutputGroup::EffectiveHamiltonianTrace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputGroup::Energies => "energies",
            OutputGroup::Heats => "heats",
            OutputGroup::Works => "works",
            OutputGroup::Balances => "balances",
            OutputGroup::EffectiveHamiltonianTrace => "effective_hamiltonian_trace",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }
}

/// One swept model parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    /// Window length in units of `1/ω₁`.
    pub t_max: f64,
    pub n_points: usize,
    pub outputs: BTreeSet<OutputGroup>,
    pub roles: Vec<Subsystem>,
    pub sweep: Option<SweepAxis>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            t_max: 50.0,
            n_points: 501,
            outputs: [OutputGroup::Energies, OutputGroup::Heats, OutputGroup::Works, OutputGroup::Balances]
                .into_iter()
                .collect(),
            roles: Subsystem::BOTH.to_vec(),
            sweep: None,
        }
    }
}

/// Model parameters that a sweep may vary.
pub const SWEEPABLE: [&str; 11] =
    ["n1", "n2", "omega1", "omega2", "g1", "g2", "gamma", "temp1", "temp2", "sigma", "seed"];

/// Sets a model parameter by name; integer fields require integral values.
pub fn set_param(p: &mut ModelParams, name: &str, value: f64) -> Result<(), String> {
    let integral = |v: f64| -> Result<u64, String> {
        if v.fract() == 0.0 && v >= 0.0 && v <= u64::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(format!("`{name}` needs a non-negative integer, got {v}"))
        }
    };
    match name {
        "n1" => p.n1 = integral(value)? as usize,
        "n2" => p.n2 = integral(value)? as usize,
        "seed" => p.seed = integral(value)?,
        "omega1" => p.omega1 = value,
        "omega2" => p.omega2 = value,
        "g1" => p.g1 = value,
        "g2" => p.g2 = value,
        "gamma" => p.gamma = value,
        "temp1" => p.temp1 = value,
        "temp2" => p.temp2 = value,
        "sigma" => p.sigma = value,
        _ => return Err(format!("unknown model parameter `{name}`")),
    }
    Ok(())
}

fn parse_float(line: usize, key: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::at(line, Some(key), format!("expected a finite number, got `{v}`")))
}

fn parse_list(line: usize, key: &str, v: &str) -> CliResult<Vec<f64>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_float(line, key, s)).collect()
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = ScenarioConfig::default();
        let mut seen = BTreeSet::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split(['#', ';']).next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::at(line, None, format!("malformed section header `{body}`")))?;
                section = name.trim().to_owned();
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| CliError::at(line, None, format!("expected `key = value`, got `{body}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let key = if section.is_empty() { k.to_owned() } else { format!("{section}.{k}") };
            if !seen.insert(key.clone()) {
                return Err(CliError::at(line, Some(&key), "duplicate key"));
            }
            cfg.apply(line, &key, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, line: usize, key: &str, v: &str) -> CliResult<()> {
        match key {
            "grid.t_max" => self.t_max = parse_float(line, key, v)?,
            "grid.n_points" => {
                self.n_points =
                    v.parse().map_err(|_| CliError::at(line, Some(key), format!("expected an integer, got `{v}`")))?
            }
            "outputs" => {
                let mut set = BTreeSet::new();
                for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let g = OutputGroup::parse(name)
                        .ok_or_else(|| CliError::at(line, Some(key), format!("unknown output group `{name}`")))?;
                    set.insert(g);
                }
                if set.is_empty() {
                    return Err(CliError::at(line, Some(key), "no output group selected"));
                }
                self.outputs = set;
            }
            "roles" => {
                self.roles = match v {
                    "1" => vec![Subsystem::One],
                    "2" => vec![Subsystem::Two],
                    "both" | "1,2" | "1, 2" => Subsystem::BOTH.to_vec(),
                    _ => return Err(CliError::at(line, Some(key), format!("expected 1, 2 or both, got `{v}`"))),
                }
            }
            _ => {
                if let Some(param) = key.strip_prefix("sweep.") {
                    if self.sweep.is_some() {
                        return Err(CliError::at(line, Some(key), "only one sweep axis is supported"));
                    }
                    if !SWEEPABLE.contains(&param) {
                        return Err(CliError::at(line, Some(key), format!("`{param}` is not a model parameter")));
                    }
                    let values = parse_list(line, key, v)?;
                    if values.is_empty() {
                        return Err(CliError::at(line, Some(key), "empty sweep axis"));
                    }
                    self.sweep = Some(SweepAxis { param: param.to_owned(), values });
                } else if SWEEPABLE.contains(&key) {
                    let value = parse_float(line, key, v)?;
                    set_param(&mut self.params, key, value).map_err(|m| CliError::at(line, Some(key), m))?;
                } else {
                    return Err(CliError::at(line, Some(key), "unknown key"));
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> CliResult<()> {
        if self.t_max.is_nan() || self.t_max <= 0.0 {
            return Err(CliError::config(format!("grid.t_max must be > 0, got {}", self.t_max)));
        }
        if self.n_points < 3 {
            return Err(CliError::config(format!("grid.n_points must be at least 3, got {}", self.n_points)));
        }
        self.params.validate().map_err(|e| CliError::config(e.to_string()))
    }

    /// Window length in the model's time units.
    pub fn window(&self) -> f64 {
        self.t_max / self.params.omega1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_flat_keys() {
        let cfg = ScenarioConfig::parse(
            "n1 = 4 # modes\nomega2=0.3\n[grid]\nt_max = 12.5\nn_points = 7\n[sweep]\ngamma = 1e-5, 2e-3\n",
        )
        .unwrap();
        assert_eq!(cfg.params.n1, 4);
        assert_eq!(cfg.params.omega2, 0.3);
        assert_eq!(cfg.t_max, 12.5);
        assert_eq!(cfg.n_points, 7);
        assert_eq!(cfg.sweep, Some(SweepAxis { param: "gamma".into(), values: vec![1e-5, 2e-3] }));
        let flat = ScenarioConfig::parse("grid.t_max = 12.5\ngrid.n_points = 7").unwrap();
        assert_eq!(flat.t_max, 12.5);
    }

    #[test]
    fn reports_line_and_key() {
        let err = ScenarioConfig::parse("n1 = 3\n\ngamma = abc\n").unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("`gamma`"), "{err}");
        let err = ScenarioConfig::parse("colour = 2").unwrap_err().to_string();
        assert!(err.contains("unknown key"), "{err}");
        let err = ScenarioConfig::parse("n1 = 2.5").unwrap_err().to_string();
        assert!(err.contains("integer"), "{err}");
    }

    #[test]
    fn rejects_invalid_values() {
        assert!(ScenarioConfig::parse("[grid]\nn_points = 2").is_err());
        assert!(ScenarioConfig::parse("[grid]\nt_max = 0").is_err());
        assert!(ScenarioConfig::parse("temp1 = -1").is_err());
        assert!(ScenarioConfig::parse("[sweep]\ngamma =").is_err());
        assert!(ScenarioConfig::parse("[sweep]\ngamma = 1\nsigma = 2").is_err());
        assert!(ScenarioConfig::parse("n1 = 2\nn1 = 3").is_err());
        assert!(ScenarioConfig::parse("outputs = heats, colours").is_err());
    }

    #[test]
    fn outputs_and_roles() {
        let cfg = ScenarioConfig::parse("outputs = heats, effective_hamiltonian_trace\nroles = 2").unwrap();
        assert_eq!(cfg.outputs, [OutputGroup::Heats, OutputGroup::EffectiveHamiltonianTrace].into_iter().collect());
        assert_eq!(cfg.roles, vec![Subsystem::Two]);
    }
}
