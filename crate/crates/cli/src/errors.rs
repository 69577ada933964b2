//! Exit-code classification.
//!
//! Every failure is folded into one of three classes so scripts can branch
//! on the cause: `2` the inputs could not be read or parsed, `3` the
//! configuration or flag values are invalid, `4` the run itself failed
//! (engine error or output write).

use std::fmt;

use ebandsim_core::engine::EngineError;
use ebandsim_core::fs_analytics::AnalyticsError;
use ebandsim_core::ingest::IngestError;
use ebandsim_core::stats::StatsError;
use ebandsim_core::synth::SynthError;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_RUNTIME: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    /// An input file is missing, unreadable, or malformed.
    Input(String),
    /// A configuration value or flag is out of its valid domain.
    Config(String),
    /// The computation or an output write failed.
    Runtime(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::InvalidScenario(_) => CliError::Config(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::InvalidBin(_) | AnalyticsError::InvalidRadii => {
                CliError::Config(e.to_string())
            }
            AnalyticsError::NoStations | AnalyticsError::NonFiniteField { .. } => {
                CliError::Input(e.to_string())
            }
            AnalyticsError::Stats(_) | AnalyticsError::Io(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::InvalidParams(_) => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("write failed: {e}"))
    }
}
