//! Flag resolution: explicit flag, then config file, then built-in default.

use std::path::Path;

use serde::de::DeserializeOwned;
use thiserror::Error;

use masa_core::affine::FieldError;
use masa_core::asymptotics::AsymptoticsError;
use masa_core::suites::SuiteError;
use masa_core::{AlgebraError, WordError};

/// Every key a config file may set.
pub const KNOWN_KEYS: &[&str] = &[
    "format",
    "suite",
    "rank",
    "radius",
    "witness-radius",
    "samples",
    "matrix-samples",
    "seed",
    "field-bound",
    "dims",
    "restarts",
    "output",
    "gen",
    "p",
    "d",
    "check",
    "n",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("cannot access {0}: {1}")]
    Io(String, String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Suite(#[from] SuiteError),
}

#[derive(Debug, Default)]
pub struct Settings {
    table: toml::Table,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Settings, CliError> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(format!("{}: {}", path.display(), e.message())))?;
        if let Some(key) = table.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unknown key {key:?}")));
        }
        Ok(Settings { table })
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => v
                .clone()
                .try_into()
                .map(Some)
                .map_err(|e| CliError::Config(format!("key {key:?}: {e}"))),
        }
    }

    /// The explicit flag if given, else the config value.
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
