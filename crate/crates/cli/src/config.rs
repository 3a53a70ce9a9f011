//! Flat `key = value` configuration files and flag/config/default precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Parses `key = value` lines; blank lines and lines starting with `#`
    /// are skipped. Later keys override earlier ones.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key = value, got {raw:?}", i + 1)));
            };
            let key = k.trim();
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
            }
            values.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag if given, else the config entry, else `None`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: cannot parse {s:?}: {e}"))),
        }
    }

    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.resolve(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing --{key} (flag or config key)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let cfg = Config::parse("# comment\neps = -2.6\n\nn=4000\nn = 8000\n").unwrap();
        assert_eq!(cfg.raw("eps"), Some("-2.6"));
        assert_eq!(cfg.pick::<usize>(None, "n", 10).unwrap(), 8000);
        assert_eq!(cfg.pick(Some(5usize), "n", 10).unwrap(), 5);
        assert_eq!(cfg.pick::<f64>(None, "eta", 0.01).unwrap(), 0.01);
        assert!(cfg.require::<f64>(None, "delta").is_err());
    }

    #[test]
    fn malformed_lines() {
        assert!(Config::parse("just words").is_err());
        assert!(Config::parse(" = 3").is_err());
        let cfg = Config::parse("n = many").unwrap();
        assert!(matches!(cfg.pick::<usize>(None, "n", 1), Err(CliError::Usage(_))));
    }
}
