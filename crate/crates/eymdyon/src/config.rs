//! Plain-text `key = value` run configuration with command-line overrides.
//!
//! Lines are `key = value`, `#` starts a comment, blank lines are ignored.
//! Unknown keys are rejected by name. Recognized keys:
//!
//! | key               | meaning                              | default   |
//! |-------------------|--------------------------------------|-----------|
//! | `lambda`          | cosmological constant                | 0.001     |
//! | `kappa`           | gravitational coupling 4πG/g²        | 1         |
//! | `g`               | gauge coupling                       | 1         |
//! | `a`               | electric shooting parameter          | 1         |
//! | `b`               | magnetic shooting parameter          | 0.35      |
//! | `r0`              | core radius                          | 0.01      |
//! | `c0`              | initial C(r0)                        | 1         |
//! | `cp0`             | initial C'(r0)                       | 0         |
//! | `abs_tol`         | absolute step tolerance              | 1e-12     |
//! | `rel_tol`         | relative step tolerance              | 1e-12     |
//! | `r_max`           | outer radius                         | 50        |
//! | `horizon_epsilon` | horizon threshold on C/C(r0)         | 1e-8      |
//! | `dense_dr`        | output sample spacing                | 1e-3      |
//! | `method`          | `verner65` or `dopri54`              | verner65  |
//! | `workers`         | sweep worker threads                 | CPU count |

use crate::integrator::IntegratorConfig;
use crate::model::Params;
use crate::seed::SeedOptions;
use std::path::Path;
use thiserror::Error;

/// Everything a `run` or `sweep` invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: Params,
    pub seed: SeedOptions,
    pub integ: IntegratorConfig,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: Params::new(0.001),
            seed: SeedOptions::default(),
            integ: IntegratorConfig::default(),
            workers: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("invalid value for '{key}': {detail}")]
    BadValue { key: String, detail: String },
    #[error("malformed line {line}: expected 'key = value', got '{text}'")]
    MalformedLine { line: usize, text: String },
    #[error("cannot read config file '{path}': {detail}")]
    Unreadable { path: String, detail: String },
}

impl RunConfig {
    /// Parses a config file and applies it over the defaults.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::MalformedLine {
                line: idx + 1,
                text: raw.trim().to_string(),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` assignment (also used for `--set` overrides).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |key: &str, detail: String| ConfigError::BadValue {
            key: key.to_string(),
            detail,
        };
        let parse_f64 = |key: &str, value: &str| -> Result<f64, ConfigError> {
            value
                .parse::<f64>()
                .map_err(|e| bad(key, format!("{e} (got '{value}')")))
        };
        match key {
            "lambda" => self.params.lambda = parse_f64(key, value)?,
            "kappa" => self.params.kappa = parse_f64(key, value)?,
            "g" => self.params.g = parse_f64(key, value)?,
            "a" => self.params.a = parse_f64(key, value)?,
            "b" => self.params.b = parse_f64(key, value)?,
            "r0" => self.params.r0 = parse_f64(key, value)?,
            "c0" => self.seed.c0 = parse_f64(key, value)?,
            "cp0" => self.seed.cp0 = parse_f64(key, value)?,
            "abs_tol" => self.integ.abs_tol = parse_f64(key, value)?,
            "rel_tol" => self.integ.rel_tol = parse_f64(key, value)?,
            "r_max" => self.integ.r_max = parse_f64(key, value)?,
            "horizon_epsilon" => self.integ.horizon_epsilon = parse_f64(key, value)?,
            "dense_dr" => self.integ.dense_dr = parse_f64(key, value)?,
            "method" => {
                self.integ.method = value.parse().map_err(|e: String| bad(key, e))?;
            }
            "workers" => {
                let n: usize = value
                    .parse()
                    .map_err(|e| bad(key, format!("{e} (got '{value}')")))?;
                if n == 0 {
                    return Err(bad(key, "must be at least 1".into()));
                }
                self.workers = n;
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Structural validation after all assignments.
    pub fn validate(&self) -> Result<(), String> {
        self.params.validate().map_err(|e| e.to_string())?;
        self.integ.validate().map_err(|e| e.to_string())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::Method;

    fn write_temp(content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!(
            "eymdyon-config-test-{}-{:?}.cfg",
            std::process::id(),
            std::thread::current().id()
        ));
        std::fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn parses_keys_comments_and_blanks() {
        let path = write_temp(
            "# run setup\nlambda = 0.015\n\nmethod = dopri54  # alt pair\nworkers=2\nr0 = 1e-8\n",
        );
        let cfg = RunConfig::from_file(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(cfg.params.lambda, 0.015);
        assert_eq!(cfg.integ.method, Method::Dopri54);
        assert_eq!(cfg.workers, 2);
        assert_eq!(cfg.params.r0, 1e-8);
        // untouched keys keep defaults
        assert_eq!(cfg.params.kappa, 1.0);
        assert_eq!(cfg.integ.dense_dr, 1e-3);
    }

    #[test]
    fn rejects_unknown_keys_by_name() {
        let path = write_temp("lambda = 0.1\nlambda_max = 0.2\n");
        let err = RunConfig::from_file(&path).unwrap_err();
        std::fs::remove_file(&path).ok();
        assert_eq!(err, ConfigError::UnknownKey("lambda_max".to_string()));
    }

    #[test]
    fn rejects_malformed_lines_and_bad_values() {
        let path = write_temp("just some words\n");
        assert!(matches!(
            RunConfig::from_file(&path).unwrap_err(),
            ConfigError::MalformedLine { line: 1, .. }
        ));
        std::fs::remove_file(&path).ok();

        let mut cfg = RunConfig::default();
        assert!(matches!(
            cfg.set("lambda", "three"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            cfg.set("method", "rk4"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            cfg.set("workers", "0"),
            Err(ConfigError::BadValue { .. })
        ));
    }

    #[test]
    fn overrides_apply_on_top() {
        let path = write_temp("lambda = 0.001\n");
        let mut cfg = RunConfig::from_file(&path).unwrap();
        std::fs::remove_file(&path).ok();
        cfg.set("lambda", "-0.25").unwrap();
        assert_eq!(cfg.params.lambda, -0.25);
    }
}
