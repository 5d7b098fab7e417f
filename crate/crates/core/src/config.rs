use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lang::DEFAULT_DECIDE_LEN;
use crate::rng::DEFAULT_SEED;
use crate::sigma::DEFAULT_ENUMERATION_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Strings per exhaustive scan.
    pub enumeration: u64,
    /// Longest input handed to a membership decider.
    pub decide_len: usize,
    /// Optional hard cap on ancestor-chain steps.
    pub chain_guard: Option<usize>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: DEFAULT_ENUMERATION_BUDGET,
            decide_len: DEFAULT_DECIDE_LEN,
            chain_guard: None,
        }
    }
}

impl Budgets {
    pub fn check(&self) -> Result<()> {
        if self.enumeration == 0 || self.decide_len == 0 || self.chain_guard == Some(0) {
            return Err(Error::Config("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Text => "text",
        })
    }
}

/// Everything a command needs besides its own arguments.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub language: String,
    pub registry_path: Option<PathBuf>,
    pub budgets: Budgets,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(language: impl Into<String>) -> Self {
        RunConfig {
            language: language.into(),
            registry_path: None,
            budgets: Budgets::default(),
            seed: DEFAULT_SEED,
            output: None,
            report: None,
            format: OutputFormat::default(),
        }
    }
}
