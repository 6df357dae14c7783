//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use objectivity::{Bath, CollisionConfig, Interaction, LindbladConfig};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given more than once")]
    Duplicate(String),
    #[error("key `{key}`: cannot read `{value}` as {expected}")]
    Type { key: String, value: String, expected: &'static str },
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ConfigError {
    fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Self::Invalid { key: key.to_string(), reason: reason.into() }
    }

    /// The offending key, when there is one.
    pub fn key(&self) -> Option<&str> {
        match self {
            Self::Syntax { .. } => None,
            Self::UnknownKey(k) | Self::Duplicate(k) => Some(k),
            Self::Type { key, .. } | Self::Invalid { key, .. } => Some(key),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Collision,
    Lindblad,
    Nonmarkov,
    Sweep,
}

impl std::str::FromStr for Mode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "collision" => Ok(Self::Collision),
            "lindblad" => Ok(Self::Lindblad),
            "nonmarkov" => Ok(Self::Nonmarkov),
            "sweep" => Ok(Self::Sweep),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Simulation {
    Collision(CollisionConfig),
    /// Markovian or non-Markovian, depending on the bath.
    Lindblad(LindbladConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub simulation: Simulation,
    /// Collision rounds or integration steps between CSV records.
    pub record_every: usize,
    pub sweep: Option<SweepAxis>,
    pub output: Option<PathBuf>,
}

const SHARED_KEYS: &[&str] = &["mode", "n_accessible", "record_every", "output", "sweep_key", "sweep_values"];
const COLLISION_KEYS: &[&str] = &["j_sa_tau1", "j_se_tau2", "beta", "interaction", "steps", "include_free_evolution"];
const LINDBLAD_KEYS: &[&str] = &["jz", "gamma", "nbar", "calj", "t_max", "dt", "bath"];

/// Numeric keys a sweep may vary, for each kind of simulation.
pub const COLLISION_SWEEPABLE: &[&str] = &["n_accessible", "j_sa_tau1", "j_se_tau2", "beta", "steps", "record_every"];
pub const LINDBLAD_SWEEPABLE: &[&str] = &["n_accessible", "jz", "gamma", "nbar", "calj", "t_max", "dt", "record_every"];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            if ![SHARED_KEYS, COLLISION_KEYS, LINDBLAD_KEYS].iter().any(|set| set.contains(&key)) {
                return Err(ConfigError::UnknownKey(key.to_string()));
            }
            let value = value.trim().trim_matches('"').to_string();
            if map.insert(key.to_string(), value).is_some() {
                return Err(ConfigError::Duplicate(key.to_string()));
            }
        }
        Ok(Self(map))
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn has_any<'k>(&self, keys: &[&'k str]) -> Option<&'k str> {
        keys.iter().copied().find(|k| self.0.contains_key(*k))
    }

    fn f64(&self, key: &str, target: &mut f64) -> Result<(), ConfigError> {
        if let Some(v) = self.get(key) {
            *target = parse_f64(key, v)?;
        }
        Ok(())
    }

    fn usize(&self, key: &str, target: &mut usize) -> Result<(), ConfigError> {
        if let Some(v) = self.get(key) {
            *target = v.parse().map_err(|_| type_error(key, v, "a non-negative integer"))?;
        }
        Ok(())
    }
}

fn type_error(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::Type { key: key.to_string(), value: value.to_string(), expected }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = value.parse().map_err(|_| type_error(key, value, "a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::invalid(key, "must be finite"))
    }
}

fn map_library(e: objectivity::Error) -> ConfigError {
    match e {
        objectivity::Error::InvalidConfig { field, reason } => ConfigError::invalid(field, reason),
        other => ConfigError::invalid("mode", other.to_string()),
    }
}

/// Parse a configuration document. `mode` must be present.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    parse_config_for(text, None)
}

/// Parse a configuration document, taking the mode from `mode` when given
/// (the document's own `mode`, if any, must then agree).
pub fn parse_config_for(text: &str, mode: Option<Mode>) -> Result<RunSpec, ConfigError> {
    let entries = Entries::parse(text)?;
    let doc_mode = match entries.get("mode") {
        Some(v) => Some(v.parse::<Mode>().map_err(|_| type_error("mode", v, "collision, lindblad, nonmarkov or sweep"))?),
        None => None,
    };
    let mode = match (mode, doc_mode) {
        (Some(a), Some(b)) if a != b => return Err(ConfigError::invalid("mode", "disagrees with the subcommand")),
        (Some(m), _) | (None, Some(m)) => m,
        (None, None) => return Err(ConfigError::invalid("mode", "missing")),
    };

    let base = match mode {
        Mode::Collision => Mode::Collision,
        Mode::Lindblad => Mode::Lindblad,
        Mode::Nonmarkov => Mode::Nonmarkov,
        Mode::Sweep => match (entries.has_any(LINDBLAD_KEYS), entries.get("bath")) {
            (_, Some("nonmarkov-dephasing")) => Mode::Nonmarkov,
            (Some(_), _) => Mode::Lindblad,
            (None, _) => Mode::Collision,
        },
    };

    if mode != Mode::Sweep {
        if let Some(k) = entries.has_any(&["sweep_key", "sweep_values"]) {
            return Err(ConfigError::invalid(k, "only allowed in sweep mode"));
        }
    }

    let (simulation, record_every) = match base {
        Mode::Collision => {
            if let Some(k) = entries.has_any(LINDBLAD_KEYS) {
                return Err(ConfigError::invalid(k, "not used by collision runs"));
            }
            let mut c = CollisionConfig::default();
            entries.usize("n_accessible", &mut c.n_accessible)?;
            entries.f64("j_sa_tau1", &mut c.j_sa_tau1)?;
            entries.f64("j_se_tau2", &mut c.j_se_tau2)?;
            entries.f64("beta", &mut c.beta)?;
            entries.usize("steps", &mut c.steps)?;
            if let Some(v) = entries.get("interaction") {
                c.interaction = v.parse::<Interaction>().map_err(|_| type_error("interaction", v, "dephasing or thermalising"))?;
            }
            if let Some(v) = entries.get("include_free_evolution") {
                c.include_free_evolution = v.parse().map_err(|_| type_error("include_free_evolution", v, "true or false"))?;
            }
            let mut every = 1;
            entries.usize("record_every", &mut every)?;
            c.validate().map_err(map_library)?;
            (Simulation::Collision(c), every)
        }
        _ => {
            if let Some(k) = entries.has_any(COLLISION_KEYS) {
                return Err(ConfigError::invalid(k, "not used by master-equation runs"));
            }
            let mut c = if base == Mode::Nonmarkov { LindbladConfig::nonmarkov_default() } else { LindbladConfig::default() };
            if let Some(v) = entries.get("bath") {
                c.bath = v.parse::<Bath>().map_err(|_| type_error("bath", v, "dephasing, thermalising or nonmarkov-dephasing"))?;
            }
            match (base, c.bath) {
                (Mode::Nonmarkov, Bath::NonMarkovDephasing) | (Mode::Lindblad, Bath::Dephasing | Bath::Thermalising) => {}
                (Mode::Nonmarkov, _) => return Err(ConfigError::invalid("bath", "nonmarkov runs use nonmarkov-dephasing")),
                _ => return Err(ConfigError::invalid("bath", "use the nonmarkov mode for nonmarkov-dephasing")),
            }
            entries.usize("n_accessible", &mut c.n_accessible)?;
            entries.f64("jz", &mut c.jz)?;
            entries.f64("gamma", &mut c.gamma)?;
            entries.f64("nbar", &mut c.nbar)?;
            entries.f64("t_max", &mut c.t_max)?;
            entries.f64("dt", &mut c.dt)?;
            if let Some(v) = entries.get("calj") {
                c.calj = Some(parse_f64("calj", v)?);
            }
            entries.usize("record_every", &mut c.record_every)?;
            c.validate().map_err(map_library)?;
            let every = c.record_every;
            (Simulation::Lindblad(c), every)
        }
    };

    let sweep = if mode == Mode::Sweep {
        let key = entries.get("sweep_key").ok_or_else(|| ConfigError::invalid("sweep_key", "missing"))?;
        let allowed = if base == Mode::Collision { COLLISION_SWEEPABLE } else { LINDBLAD_SWEEPABLE };
        if !allowed.contains(&key) {
            return Err(ConfigError::invalid("sweep_key", format!("`{key}` is not a numeric field of this run")));
        }
        let raw = entries.get("sweep_values").ok_or_else(|| ConfigError::invalid("sweep_values", "missing"))?;
        let values = raw.split(',').map(|v| parse_f64("sweep_values", v.trim())).collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(ConfigError::invalid("sweep_values", "needs at least one value"));
        }
        Some(SweepAxis { key: key.to_string(), values })
    } else {
        None
    };

    let spec = RunSpec { mode, simulation, record_every, sweep, output: entries.get("output").map(PathBuf::from) };
    if let Some(axis) = &spec.sweep {
        for &v in &axis.values {
            spec.with_value(&axis.key, v)?;
        }
    }
    Ok(spec)
}

impl RunSpec {
    /// Copy with one numeric field replaced, validated.
    pub fn with_value(&self, key: &str, value: f64) -> Result<RunSpec, ConfigError> {
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(ConfigError::invalid(key, format!("{value} is not a count")))
            }
        };
        let mut out = self.clone();
        if key == "record_every" {
            out.record_every = count()?;
        }
        match &mut out.simulation {
            Simulation::Collision(c) => {
                match key {
                    "n_accessible" => c.n_accessible = count()?,
                    "j_sa_tau1" => c.j_sa_tau1 = value,
                    "j_se_tau2" => c.j_se_tau2 = value,
                    "beta" => c.beta = value,
                    "steps" => c.steps = count()?,
                    "record_every" => {}
                    _ => return Err(ConfigError::invalid("sweep_key", format!("`{key}` is not sweepable here"))),
                }
                c.validate().map_err(map_library)?;
            }
            Simulation::Lindblad(c) => {
                match key {
                    "n_accessible" => c.n_accessible = count()?,
                    "jz" => c.jz = value,
                    "gamma" => c.gamma = value,
                    "nbar" => c.nbar = value,
                    "calj" => c.calj = Some(value),
                    "t_max" => c.t_max = value,
                    "dt" => c.dt = value,
                    "record_every" => c.record_every = count()?,
                    _ => return Err(ConfigError::invalid("sweep_key", format!("`{key}` is not sweepable here"))),
                }
                c.validate().map_err(map_library)?;
            }
        }
        if out.record_every == 0 {
            return Err(ConfigError::invalid("record_every", "must be at least 1"));
        }
        Ok(out)
    }
}
