//! Global run settings: defaults, an optional `key = value` configuration
//! file, and command-line flags, merged in that order (flags win).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cherrylab::coloring::CopyMode;

use crate::report::Format;
use crate::{CliError, GlobalArgs};

/// Keys the configuration file may set; each mirrors a global flag.
const KNOWN_KEYS: &[&str] =
    &["seed", "mode", "max-resamples", "max-restarts", "threads", "format", "out"];

/// A parsed configuration file: one `key = value` per line, blank lines and
/// `#` comments ignored.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", idx + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {key:?} (known: {})",
                    idx + 1,
                    KNOWN_KEYS.join(", ")
                )));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config key {key}: cannot parse value {raw:?}"))
            }),
        }
    }
}

/// Fully resolved global settings.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    pub mode: CopyMode,
    pub max_resamples: u64,
    pub max_restarts: u32,
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn parse_mode(raw: &str) -> Result<CopyMode, CliError> {
    match raw {
        "proper" => Ok(CopyMode::Proper),
        "rainbow" => Ok(CopyMode::Rainbow),
        other => Err(CliError::Usage(format!(
            "config key mode: expected proper or rainbow, got {other:?}"
        ))),
    }
}

fn parse_format(raw: &str) -> Result<Format, CliError> {
    match raw {
        "json" => Ok(Format::Json),
        "text" => Ok(Format::Text),
        other => Err(CliError::Usage(format!(
            "config key format: expected json or text, got {other:?}"
        ))),
    }
}

/// Merges flags over the configuration file over built-in defaults.
pub fn resolve(globals: &GlobalArgs) -> Result<Resolved, CliError> {
    let config = match &globals.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };

    let seed = match globals.seed {
        Some(s) => s,
        None => config.get::<u64>("seed")?.unwrap_or(0),
    };
    let mode = match globals.mode {
        Some(m) => m.into(),
        None => match config.values.get("mode") {
            Some(raw) => parse_mode(raw)?,
            None => CopyMode::Proper,
        },
    };
    let max_resamples = match globals.max_resamples {
        Some(v) => v,
        None => config.get::<u64>("max-resamples")?.unwrap_or(1_000_000),
    };
    let max_restarts = match globals.max_restarts {
        Some(v) => v,
        None => config.get::<u32>("max-restarts")?.unwrap_or(10),
    };
    let threads = match globals.threads {
        Some(v) => Some(v),
        None => config.get::<usize>("threads")?,
    };
    let format = match globals.format {
        Some(f) => f.into(),
        None => match config.values.get("format") {
            Some(raw) => parse_format(raw)?,
            None => Format::Json,
        },
    };
    let out = match &globals.out {
        Some(p) => Some(p.clone()),
        None => config.get::<PathBuf>("out")?,
    };

    Ok(Resolved { seed, mode, max_resamples, max_restarts, threads, format, out })
}
