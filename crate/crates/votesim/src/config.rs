//! The flat key-value run configuration format and its strict parser.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored. Keys are fixed (unknown keys are errors, not typo
//! tolerance), values are typed, lists are comma-separated. Every field has
//! a default, and the fully merged spec is echoed into output metadata via
//! [`RunSpec::render`], which round-trips through [`parse_config`].

use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use votesim_core::{
    default_altruist_counts, default_support_sizes, EnvironmentParams, GameConfig, RngSeed,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Single game, summary only.
    Run,
    /// Single game with a per-step trace written to the output path.
    Trace,
    /// Monte Carlo sweep over (altruist_count, support_size).
    Sweep,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Run => "run",
            Mode::Trace => "trace",
            Mode::Sweep => "sweep",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "run" => Ok(Mode::Run),
            "trace" => Ok(Mode::Trace),
            "sweep" => Ok(Mode::Sweep),
            other => Err(format!("expected one of run, trace, sweep; got {other:?}")),
        }
    }
}

/// A fully validated run description: model config, sweep axes, replication
/// and seed bookkeeping, and output routing.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub config: GameConfig,
    pub altruist_counts: Vec<u32>,
    pub support_sizes: Vec<u32>,
    pub replications: u32,
    pub master_seed: RngSeed,
    pub output_path: Option<PathBuf>,
    pub workers: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Run,
            config: GameConfig {
                n: 100,
                initial_capital: 40.0,
                env: EnvironmentParams { mu: 0.0, sigma: 12.0 },
                steps: 500,
                altruist_count: 0,
                support_size: 1,
                accept_threshold: 0.5,
            },
            altruist_counts: default_altruist_counts(),
            support_sizes: default_support_sizes(),
            replications: 200,
            master_seed: RngSeed(0),
            workers: std::thread::available_parallelism().map_or(1, |p| p.get()),
            output_path: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value for {key}: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("invalid field {field}: {msg}")]
    Constraint { field: &'static str, msg: String },
}

const KEYS: &[&str] = &[
    "mode",
    "n",
    "initial_capital",
    "mu",
    "sigma",
    "steps",
    "altruist_count",
    "support_size",
    "accept_threshold",
    "altruist_counts",
    "support_sizes",
    "replications",
    "seed",
    "workers",
    "out",
];

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, SpecError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| SpecError::BadValue {
        line,
        key: key.to_string(),
        msg: e.to_string(),
    })
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<u32>, SpecError> {
    value
        .split(',')
        .map(|item| parse_value(line, key, item.trim()))
        .collect()
}

/// Parses a configuration document into a validated [`RunSpec`], applying
/// defaults for absent keys.
pub fn parse_config(text: &str) -> Result<RunSpec, SpecError> {
    let mut spec = RunSpec::default();
    let mut seen: Vec<&str> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(SpecError::Malformed { line, text: content.to_string() });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&canonical) = KEYS.iter().find(|&&k| k == key) else {
            return Err(SpecError::UnknownKey { line, key: key.to_string() });
        };
        if seen.contains(&canonical) {
            return Err(SpecError::DuplicateKey { line, key: key.to_string() });
        }
        seen.push(canonical);

        match canonical {
            "mode" => spec.mode = parse_value(line, key, value)?,
            "n" => spec.config.n = parse_value(line, key, value)?,
            "initial_capital" => spec.config.initial_capital = parse_value(line, key, value)?,
            "mu" => spec.config.env.mu = parse_value(line, key, value)?,
            "sigma" => spec.config.env.sigma = parse_value(line, key, value)?,
            "steps" => spec.config.steps = parse_value(line, key, value)?,
            "altruist_count" => spec.config.altruist_count = parse_value(line, key, value)?,
            "support_size" => spec.config.support_size = parse_value(line, key, value)?,
            "accept_threshold" => spec.config.accept_threshold = parse_value(line, key, value)?,
            "altruist_counts" => spec.altruist_counts = parse_list(line, key, value)?,
            "support_sizes" => spec.support_sizes = parse_list(line, key, value)?,
            "replications" => spec.replications = parse_value(line, key, value)?,
            "seed" => spec.master_seed = RngSeed(parse_value(line, key, value)?),
            "workers" => spec.workers = parse_value(line, key, value)?,
            "out" => spec.output_path = Some(PathBuf::from(value)),
            _ => unreachable!(),
        }
    }

    spec.validate()?;
    Ok(spec)
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        self.config.validate().map_err(|e| {
            let field = match e {
                votesim_core::ConfigError::EmptyPopulation => "n",
                votesim_core::ConfigError::InvalidInitialCapital(_) => "initial_capital",
                votesim_core::ConfigError::InvalidMu(_) => "mu",
                votesim_core::ConfigError::InvalidSigma(_) => "sigma",
                votesim_core::ConfigError::ZeroSteps => "steps",
                votesim_core::ConfigError::AltruistCountOutOfRange { .. } => "altruist_count",
                votesim_core::ConfigError::SupportSizeOutOfRange { .. } => "support_size",
                votesim_core::ConfigError::InvalidAcceptThreshold(_) => "accept_threshold",
            };
            SpecError::Constraint { field, msg: e.to_string() }
        })?;
        if self.replications == 0 {
            return Err(SpecError::Constraint {
                field: "replications",
                msg: "must be at least 1".to_string(),
            });
        }
        if self.workers == 0 {
            return Err(SpecError::Constraint {
                field: "workers",
                msg: "must be at least 1".to_string(),
            });
        }
        if self.mode == Mode::Sweep {
            if self.altruist_counts.is_empty() {
                return Err(SpecError::Constraint {
                    field: "altruist_counts",
                    msg: "must be nonempty in sweep mode".to_string(),
                });
            }
            if self.support_sizes.is_empty() {
                return Err(SpecError::Constraint {
                    field: "support_sizes",
                    msg: "must be nonempty in sweep mode".to_string(),
                });
            }
        }
        Ok(())
    }

    /// Renders the spec back into the configuration format. Floats use Rust's
    /// shortest round-trip formatting, so `parse_config(spec.render())`
    /// reproduces `spec` exactly.
    pub fn render(&self) -> String {
        let join = |xs: &[u32]| {
            xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        };
        let mut out = String::new();
        out.push_str(&format!("mode = {}\n", self.mode.as_str()));
        out.push_str(&format!("n = {}\n", self.config.n));
        out.push_str(&format!("initial_capital = {}\n", self.config.initial_capital));
        out.push_str(&format!("mu = {}\n", self.config.env.mu));
        out.push_str(&format!("sigma = {}\n", self.config.env.sigma));
        out.push_str(&format!("steps = {}\n", self.config.steps));
        out.push_str(&format!("altruist_count = {}\n", self.config.altruist_count));
        out.push_str(&format!("support_size = {}\n", self.config.support_size));
        out.push_str(&format!("accept_threshold = {}\n", self.config.accept_threshold));
        out.push_str(&format!("altruist_counts = {}\n", join(&self.altruist_counts)));
        out.push_str(&format!("support_sizes = {}\n", join(&self.support_sizes)));
        out.push_str(&format!("replications = {}\n", self.replications));
        out.push_str(&format!("seed = {}\n", self.master_seed.0));
        out.push_str(&format!("workers = {}\n", self.workers));
        if let Some(path) = &self.output_path {
            out.push_str(&format!("out = {}\n", path.display()));
        }
        out
    }
}
