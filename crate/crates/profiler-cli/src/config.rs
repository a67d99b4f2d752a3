//! Configuration loading: a single TOML file selecting thresholds,
//! weights, domain substrings, and optional override files for the
//! stop-word list, lexicons, and profile rules. Everything is resolved,
//! parsed, and validated up front; the pipeline only ever sees the frozen
//! [`ScoringConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use profiler_core::cognitive::{Lexicon, LexiconKind, LexiconSet};
use profiler_core::profile::ProfileRules;
use profiler_core::settings::ScoringConfig;
use profiler_core::textprep::StopwordList;
use serde::Deserialize;
use thiserror::Error;

/// The annotated default configuration emitted by `profiler init-config`.
/// Loading it reproduces the built-in defaults exactly.
pub const DEFAULT_CONFIG_TOML: &str = include_str!("../data/default_config.toml");

/// Environment variable consulted when no `--config` flag is given.
pub const CONFIG_ENV_VAR: &str = "PROFILER_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("invalid configuration ({origin}):\n  - {}", problems.join("\n  - "))]
    Invalid {
        origin: String,
        problems: Vec<String>,
    },
}

#[derive(Debug, Deserialize, Default)]
struct ConfigFile {
    stopwords: Option<PathBuf>,
    profile_rules: Option<PathBuf>,
    lexicons: Option<LexiconPaths>,
    threat: Option<ThreatSection>,
    cognitive: Option<CognitiveSection>,
    thresholds: Option<ThresholdsSection>,
    model_weights: Option<WeightsSection>,
}

#[derive(Debug, Deserialize, Default)]
struct LexiconPaths {
    scarcity: Option<PathBuf>,
    consistency: Option<PathBuf>,
    monetary: Option<PathBuf>,
}

#[derive(Debug, Deserialize, Default)]
struct ThreatSection {
    trusted_domain_substrings: Option<Vec<String>>,
    business_domain_substrings: Option<Vec<String>>,
}

#[derive(Debug, Deserialize, Default)]
struct CognitiveSection {
    floor: Option<bool>,
}

#[derive(Debug, Deserialize, Default)]
struct ThresholdsSection {
    single: Option<f64>,
    low: Option<f64>,
    high: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
struct WeightsSection {
    threat: Option<f64>,
    cognitive: Option<f64>,
    profile: Option<f64>,
}

/// The key tree accepted by [`ConfigFile`]; anything else is reported as
/// an unknown key (all of them at once, not just the first).
const KNOWN_KEYS: &[&str] = &[
    "stopwords",
    "profile_rules",
    "lexicons.scarcity",
    "lexicons.consistency",
    "lexicons.monetary",
    "threat.trusted_domain_substrings",
    "threat.business_domain_substrings",
    "cognitive.floor",
    "thresholds.single",
    "thresholds.low",
    "thresholds.high",
    "model_weights.threat",
    "model_weights.cognitive",
    "model_weights.profile",
];

fn collect_unknown_keys(table: &toml::Table, prefix: &str, problems: &mut Vec<String>) {
    for (key, value) in table {
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match value {
            toml::Value::Table(inner) => {
                if KNOWN_KEYS.iter().any(|k| k.starts_with(&format!("{path}."))) {
                    collect_unknown_keys(inner, &path, problems);
                } else {
                    problems.push(format!("unknown key `{path}`"));
                }
            }
            _ => {
                if !KNOWN_KEYS.contains(&path.as_str()) {
                    problems.push(format!("unknown key `{path}`"));
                }
            }
        }
    }
}

/// Resolve the config path: explicit flag, then `PROFILER_CONFIG`, then
/// built-in defaults.
pub fn resolve_config_path(flag: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from)
}

/// Load and validate a configuration. `path = None` yields the built-in
/// defaults (still validated, cheaply proving the defaults are sane).
pub fn load_config(path: Option<&Path>) -> Result<ScoringConfig, ConfigError> {
    match path {
        None => build(ConfigFile::default(), Path::new("."), "builtin defaults", &[]),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| ConfigError::Read {
                path: p.to_path_buf(),
                source,
            })?;
            load_config_str(&text, p)
        }
    }
}

/// Parse configuration text as if read from `origin` (relative paths
/// resolve against its parent directory).
pub fn load_config_str(text: &str, origin: &Path) -> Result<ScoringConfig, ConfigError> {
    let table: toml::Table = text.parse().map_err(|source| ConfigError::Parse {
        path: origin.to_path_buf(),
        source: Box::new(source),
    })?;
    let mut problems = Vec::new();
    collect_unknown_keys(&table, "", &mut problems);
    let file: ConfigFile = table.try_into().map_err(|source| ConfigError::Parse {
        path: origin.to_path_buf(),
        source: Box::new(source),
    })?;
    let base = origin.parent().unwrap_or_else(|| Path::new("."));
    build(file, base, &origin.display().to_string(), &problems)
}

fn read_rel(base: &Path, path: &Path, problems: &mut Vec<String>) -> Option<String> {
    let resolved = if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    };
    match fs::read_to_string(&resolved) {
        Ok(t) => Some(t),
        Err(e) => {
            problems.push(format!("cannot read {}: {e}", resolved.display()));
            None
        }
    }
}

fn build(
    file: ConfigFile,
    base: &Path,
    origin: &str,
    earlier_problems: &[String],
) -> Result<ScoringConfig, ConfigError> {
    let mut problems: Vec<String> = earlier_problems.to_vec();

    // stop words first: lexicons and rules are validated against them
    let stopwords = match &file.stopwords {
        None => StopwordList::builtin(),
        Some(p) => match read_rel(base, p, &mut problems) {
            Some(text) => {
                let list = StopwordList::parse(&text, &p.display().to_string());
                if list.is_empty() {
                    problems.push(format!("stop-word list {} is empty", p.display()));
                }
                list
            }
            None => StopwordList::builtin(),
        },
    };

    let mut load_lexicon = |kind: LexiconKind, path: &Option<PathBuf>, problems: &mut Vec<String>| {
        let p = path.as_ref()?;
        let text = read_rel(base, p, problems)?;
        match Lexicon::parse(&text, kind, &p.display().to_string(), &stopwords) {
            Ok(lex) => Some(lex),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        }
    };
    let lexicon_paths = file.lexicons.unwrap_or_default();
    let mut lexicons = LexiconSet::builtin();
    if let Some(lex) = load_lexicon(LexiconKind::Scarcity, &lexicon_paths.scarcity, &mut problems) {
        lexicons.scarcity = lex;
    }
    if let Some(lex) =
        load_lexicon(LexiconKind::Consistency, &lexicon_paths.consistency, &mut problems)
    {
        lexicons.consistency = lex;
    }
    if let Some(lex) = load_lexicon(LexiconKind::Monetary, &lexicon_paths.monetary, &mut problems) {
        lexicons.monetary = lex;
    }

    let profile_rules = match &file.profile_rules {
        None => ProfileRules::builtin(),
        Some(p) => match read_rel(base, p, &mut problems) {
            Some(text) => match ProfileRules::parse(&text, &stopwords) {
                Ok(rules) => rules,
                Err(e) => {
                    problems.push(format!("profile rules {}: {e}", p.display()));
                    ProfileRules::builtin()
                }
            },
            None => ProfileRules::builtin(),
        },
    };

    let mut config = ScoringConfig {
        stopwords,
        lexicons,
        profile_rules,
        ..ScoringConfig::default()
    };
    if let Some(threat) = file.threat {
        if let Some(ts) = threat.trusted_domain_substrings {
            config.threat.trusted_domain_substrings =
                ts.into_iter().map(|s| s.to_lowercase()).collect();
        }
        if let Some(bs) = threat.business_domain_substrings {
            config.threat.business_domain_substrings =
                bs.into_iter().map(|s| s.to_lowercase()).collect();
        }
    }
    if let Some(c) = file.cognitive {
        config.cognitive_floor = c.floor.unwrap_or(false);
    }
    if let Some(t) = file.thresholds {
        config.thresholds.single = t.single.unwrap_or(config.thresholds.single);
        config.thresholds.low = t.low.unwrap_or(config.thresholds.low);
        config.thresholds.high = t.high.unwrap_or(config.thresholds.high);
    }
    if let Some(w) = file.model_weights {
        config.model_weights.threat = w.threat.unwrap_or(1.0);
        config.model_weights.cognitive = w.cognitive.unwrap_or(1.0);
        config.model_weights.profile = w.profile.unwrap_or(1.0);
    }

    if let Err(more) = config.validate() {
        problems.extend(more);
    }
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Invalid {
            origin: origin.to_string(),
            problems,
        })
    }
}
