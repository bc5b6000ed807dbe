//! Budget settings: defaults, config files, `--budget` pairs, flags.

use std::fs;
use std::path::Path;

use wordent_core::bounds::parse_rational;
use wordent_core::engine::CertifyOptions;
use wordent_core::Rational;

use crate::{CmdError, CmdResult};

/// Everything the analysis pipeline can be budgeted with.
#[derive(Debug, Clone)]
pub struct Settings {
    /// Search budgets handed to the entropy-bracket engine.
    pub certify: CertifyOptions,
    /// Horizon of the structural condition scan.
    pub condition_horizon: u64,
    /// Window of the growth-constant upper bound.
    pub e0_window: u64,
    /// Worker threads for the slice enumeration.
    pub threads: usize,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings {
            certify: CertifyOptions::default(),
            condition_horizon: 64,
            e0_window: 20,
            threads: 1,
        }
    }
}

impl Settings {
    /// Applies one `key=value` budget assignment.
    pub fn apply(&mut self, key: &str, value: &str) -> CmdResult<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> CmdResult<T> {
            value.parse::<T>().map_err(|_| {
                CmdError::usage(format!("bad value {value:?} for budget key {key}"))
            })
        }
        match key {
            "max_n" => self.certify.max_n = num(key, value)?,
            "memory_cap" => self.certify.memory_cap = num(key, value)?,
            "witness_n" => self.certify.witness_n = num(key, value)?,
            "finite_start" => self.certify.finite_start = num(key, value)?,
            "finite_cap" => self.certify.finite_cap = num(key, value)?,
            "screen_horizon" => self.certify.screen_horizon = num(key, value)?,
            "subset_cap" => self.certify.subset_cap = num(key, value)?,
            "max_removals" => self.certify.max_removals = num(key, value)?,
            "max_rows" => self.certify.budget.max_rows = num(key, value)?,
            "keep_leaves" => self.certify.budget.keep_leaves = num(key, value)?,
            "tol" => self.certify.tol = positive_rational(value)?,
            "condition_horizon" => self.condition_horizon = num(key, value)?,
            "e0_window" => self.e0_window = num(key, value)?,
            "threads" => {
                let t: usize = num(key, value)?;
                if t == 0 {
                    return Err(CmdError::usage("threads must be at least 1"));
                }
                self.threads = t;
            }
            _ => {
                return Err(CmdError::usage(format!("unknown budget key {key:?}")))
            }
        }
        Ok(())
    }

    /// Reads a UTF-8 `key=value` config file (`#` starts a comment).
    pub fn load_config(&mut self, path: &Path) -> CmdResult<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| CmdError::usage(format!("config {}: {e}", path.display())))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CmdError::usage(format!(
                    "config {} line {}: expected key=value, got {raw:?}",
                    path.display(),
                    idx + 1
                )));
            };
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Applies a list of `--budget key=value` pairs.
    pub fn apply_pairs(&mut self, pairs: &[String]) -> CmdResult<()> {
        for pair in pairs {
            let Some((key, value)) = pair.split_once('=') else {
                return Err(CmdError::usage(format!(
                    "--budget expects key=value, got {pair:?}"
                )));
            };
            self.apply(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

fn positive_rational(text: &str) -> CmdResult<Rational> {
    let r = parse_rational(text).map_err(CmdError::from)?;
    if r <= Rational::new(0.into(), 1.into()) {
        return Err(CmdError::usage(format!("tolerance must be positive, got {text}")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_then_overrides() {
        let mut s = Settings::default();
        assert_eq!(s.certify.max_n, 20);
        s.apply("max_n", "14").unwrap();
        s.apply("threads", "2").unwrap();
        s.apply("tol", "1/1000").unwrap();
        assert_eq!(s.certify.max_n, 14);
        assert_eq!(s.threads, 2);
        assert!(s.apply("threads", "0").is_err());
        assert!(s.apply("tol", "0").is_err());
        assert!(s.apply("nope", "1").is_err());
        assert!(s.apply("max_n", "x").is_err());
    }

    #[test]
    fn config_file_roundtrip() {
        let dir = std::env::temp_dir().join("wordent-settings-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("budgets.conf");
        std::fs::write(&path, "# comment\nmax_n = 12\n\nthreads=3 # inline\n").unwrap();
        let mut s = Settings::default();
        s.load_config(&path).unwrap();
        assert_eq!(s.certify.max_n, 12);
        assert_eq!(s.threads, 3);

        std::fs::write(&path, "max_n\n").unwrap();
        assert!(Settings::default().load_config(&path).is_err());
    }
}
