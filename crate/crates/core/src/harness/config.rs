//! Experiment configuration: a flat `key = value` file, one entry per line.
//! Repeated `n` and `p` lines build grids; `#` starts a comment.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Stats,
    Expansion,
    Rho,
    Walk,
    Percolate,
    Scan,
    Oracle,
    Witness,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Stats,
        Experiment::Expansion,
        Experiment::Rho,
        Experiment::Walk,
        Experiment::Percolate,
        Experiment::Scan,
        Experiment::Oracle,
        Experiment::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Stats => "stats",
            Experiment::Expansion => "expansion",
            Experiment::Rho => "rho",
            Experiment::Walk => "walk",
            Experiment::Percolate => "percolate",
            Experiment::Scan => "scan",
            Experiment::Oracle => "oracle",
            Experiment::Witness => "witness",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// An invalid configuration field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_grid: Vec<u32>,
    pub k: u32,
    pub r: Option<u32>,
    pub p_grid: Option<Vec<f64>>,
    pub trials: u64,
    pub master_seed: u64,
    pub output_path: Option<String>,
    pub format: Format,
    /// Threshold knob for the percolation checks.
    pub omega: Option<f64>,
    /// Last step of the walk profile.
    pub t_max: u64,
    /// Whether `stats` computes vertex connectivity.
    pub connectivity: bool,
    /// Root of the witness dumped by `percolate`.
    pub root: Option<u32>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            n_grid: Vec::new(),
            k: 3,
            r: None,
            p_grid: None,
            trials: 1,
            master_seed: 0,
            output_path: None,
            format: Format::Csv,
            omega: None,
            t_max: 100,
            connectivity: true,
            root: None,
        }
    }

    /// Parses the file format. Keys given on the command line are applied
    /// afterwards with [`ExperimentConfig::set`].
    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(format!("line {}", lineno + 1), format!("expected `key = value`, got {line:?}")));
            };
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let file_experiment = pairs.iter().find(|(k, _)| k == "experiment").map(|(_, v)| v.as_str());
        let experiment = match (experiment, file_experiment) {
            (Some(e), _) => e,
            (None, Some(v)) => v.parse().map_err(|m| ConfigError::new("experiment", m))?,
            (None, None) => return Err(ConfigError::new("experiment", "missing")),
        };
        let mut cfg = ExperimentConfig::new(experiment);
        let (mut n_seen, mut p_seen) = (false, false);
        for (key, value) in &pairs {
            match key.as_str() {
                "experiment" => {}
                "n" => {
                    if !n_seen {
                        cfg.n_grid.clear();
                        n_seen = true;
                    }
                    cfg.push(key, value)?;
                }
                "p" => {
                    if !p_seen {
                        cfg.p_grid = None;
                        p_seen = true;
                    }
                    cfg.push(key, value)?;
                }
                _ => cfg.set(key, value)?,
            }
        }
        Ok(cfg)
    }

    /// Appends to a grid (`n`, `p`) or sets a scalar key. Grid values may
    /// also be comma separated.
    pub fn push(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "n" => {
                for part in value.split(',') {
                    self.n_grid.push(parse_field("n", part)?);
                }
            }
            "p" => {
                for part in value.split(',') {
                    self.p_grid.get_or_insert_with(Vec::new).push(parse_field("p", part)?);
                }
            }
            _ => self.set(key, value)?,
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "n" => {
                self.n_grid.clear();
                self.push(key, value)?;
            }
            "p" => {
                self.p_grid = None;
                self.push(key, value)?;
            }
            "k" => self.k = parse_field(key, value)?,
            "r" => self.r = Some(parse_field(key, value)?),
            "trials" => self.trials = parse_field(key, value)?,
            "seed" => self.master_seed = parse_field(key, value)?,
            "out" => self.output_path = Some(value.to_string()),
            "format" => self.format = value.parse().map_err(|m| ConfigError::new(key, m))?,
            "omega" => self.omega = Some(parse_field(key, value)?),
            "t_max" => self.t_max = parse_field(key, value)?,
            "connectivity" => self.connectivity = parse_field(key, value)?,
            "root" => self.root = Some(parse_field(key, value)?),
            _ => return Err(ConfigError::new(key, "unknown key")),
        }
        Ok(())
    }

    /// Checks the fields the chosen experiment needs.
    pub fn validate(&self) -> Result<(), ConfigError> {
        use Experiment::*;
        if self.trials == 0 {
            return Err(ConfigError::new("trials", "must be at least 1"));
        }
        if self.k == 0 {
            return Err(ConfigError::new("k", "must be at least 1"));
        }
        let needs_n = !matches!(self.experiment, Rho);
        if needs_n && self.n_grid.is_empty() {
            return Err(ConfigError::new("n", format!("{} needs at least one n", self.experiment)));
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n == 0) {
            return Err(ConfigError::new("n", format!("{n} is not positive")));
        }
        if matches!(self.experiment, Percolate | Scan | Witness) {
            match self.r {
                None => return Err(ConfigError::new("r", format!("{} needs r", self.experiment))),
                Some(0) => return Err(ConfigError::new("r", "must be at least 1")),
                _ => {}
            }
            let Some(grid) = &self.p_grid else {
                if self.experiment == Scan && self.omega.is_some() {
                    return Ok(());
                }
                return Err(ConfigError::new("p", format!("{} needs at least one p", self.experiment)));
            };
            if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(ConfigError::new("p", "values must lie in [0, 1]"));
            }
            if self.experiment == Scan && grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ConfigError::new("p", "grid must be strictly increasing"));
            }
        }
        if let Some(w) = self.omega {
            if !(w > 1.0) {
                return Err(ConfigError::new("omega", "must exceed 1"));
            }
        }
        Ok(())
    }
}

fn parse_field<T: FromStr>(field: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| ConfigError::new(field, format!("cannot parse {value:?}: {e}")))
}
