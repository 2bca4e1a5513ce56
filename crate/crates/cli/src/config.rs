//! `key = value` configuration for the seeker and the service.
//!
//! Blank lines and lines starting with `#` are ignored. List values are
//! comma separated.

use std::time::Duration;

use thiserror::Error;

use seqdb_core::exec::Mode;
use seqdb_core::guess::GuessBounds;
use seqdb_core::seeker::{StageToggles, DEFAULT_MAX_EDITS, DEFAULT_STAGE_BUDGET};
use seqdb_core::transforms::Registry;
use seqdb_core::SeekerConfig;

pub const DEFAULT_RESULT_LIMIT: usize = 20;
pub const DEFAULT_MAIL_MAX_COMMANDS: usize = 10;
pub const DEFAULT_REFERENCE_LIMIT: usize = 3;
pub const DEFAULT_RATE_WINDOW: Duration = Duration::from_secs(3600);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub bounds: GuessBounds,
    pub max_edits: u8,
    pub stage_budget: Duration,
    pub stages: StageToggles,
    /// Subset of the standard registry; `None` keeps all of it.
    pub transforms: Option<Vec<String>>,
    pub result_limit: usize,
    pub mail_max_commands: usize,
    pub reference_limit: usize,
    pub rate_window: Duration,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bounds: GuessBounds::default(),
            max_edits: DEFAULT_MAX_EDITS,
            stage_budget: DEFAULT_STAGE_BUDGET,
            stages: StageToggles::default(),
            transforms: None,
            result_limit: DEFAULT_RESULT_LIMIT,
            mail_max_commands: DEFAULT_MAIL_MAX_COMMANDS,
            reference_limit: DEFAULT_REFERENCE_LIMIT,
            rate_window: DEFAULT_RATE_WINDOW,
        }
    }
}

impl Config {
    pub fn registry(&self) -> Registry {
        let standard = Registry::standard();
        let Some(names) = &self.transforms else {
            return standard;
        };
        let mut r = Registry::empty();
        for n in names {
            // names were checked at parse time
            if let Some(t) = standard.get(n) {
                r.push(t.clone());
            }
        }
        r
    }

    pub fn seeker_config(&self, mode: Mode) -> SeekerConfig {
        SeekerConfig {
            stages: self.stages,
            max_edits: self.max_edits,
            registry: self.registry(),
            bounds: self.bounds,
            stage_budget: self.stage_budget,
            mode,
        }
    }
}

fn number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError {
        line,
        message: format!("{key} needs a non-negative integer, got {value:?}"),
    })
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError { line, message: format!("expected key = value, got {trimmed:?}") });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "max_order" => cfg.bounds.max_order = number(line, key, value)?,
            "max_degree" => cfg.bounds.max_degree = number(line, key, value)?,
            "max_total_degree" => cfg.bounds.max_total_degree = number(line, key, value)?,
            "extrapolate" => cfg.bounds.extrapolate = number(line, key, value)?,
            "max_edits" => {
                let e: u8 = number(line, key, value)?;
                if e > 2 {
                    return Err(ConfigError { line, message: format!("max_edits must be at most 2, got {e}") });
                }
                cfg.max_edits = e;
            }
            "stage_budget_ms" => cfg.stage_budget = Duration::from_millis(number(line, key, value)?),
            "result_limit" => cfg.result_limit = number(line, key, value)?,
            "mail_max_commands" => cfg.mail_max_commands = number(line, key, value)?,
            "reference_limit" => cfg.reference_limit = number(line, key, value)?,
            "rate_window_secs" => cfg.rate_window = Duration::from_secs(number(line, key, value)?),
            "stages" => {
                let mut s = StageToggles { direct: false, fuzzy: false, transforms: false, guesses: false };
                for name in list(value) {
                    match name.as_str() {
                        "direct" => s.direct = true,
                        "fuzzy" => s.fuzzy = true,
                        "transforms" => s.transforms = true,
                        "guesses" => s.guesses = true,
                        _ => return Err(ConfigError { line, message: format!("unknown stage {name:?}") }),
                    }
                }
                cfg.stages = s;
            }
            "transforms" => {
                let standard = Registry::standard();
                let names = list(value);
                if let Some(bad) = names.iter().find(|n| standard.get(n).is_none()) {
                    let known: Vec<&str> = standard.iter().map(|t| t.name).collect();
                    return Err(ConfigError {
                        line,
                        message: format!("unknown transform {bad:?}; known: {}", known.join(", ")),
                    });
                }
                cfg.transforms = Some(names);
            }
            _ => return Err(ConfigError { line, message: format!("unknown key {key:?}") }),
        }
    }
    Ok(cfg)
}
