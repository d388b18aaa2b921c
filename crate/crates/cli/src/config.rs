use std::path::Path;

use oscgauss::{Error, Result};

/// Flat key-value settings read from a TOML file. Keys match the long flag
/// names, with `-` or `_` accepted interchangeably; flags given on the
/// command line take precedence.
#[derive(Debug, Clone, Default)]
pub struct Config {
    table: toml::Table,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Io(format!("config: {}", e.message())))?;
        if let Some((k, _)) = table.iter().find(|(_, v)| v.is_table() || v.is_array()) {
            return Err(Error::Io(format!("config: key {k} is not a plain value")));
        }
        Ok(Config { table })
    }

    fn lookup(&self, key: &str) -> Option<&toml::Value> {
        self.table
            .get(key)
            .or_else(|| self.table.get(&key.replace('-', "_")))
            .or_else(|| self.table.get(&key.replace('_', "-")))
    }

    /// The flag if given, else the file's value rendered as a string.
    pub fn string(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| {
            self.lookup(key).map(|v| match v {
                toml::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
        })
    }

    pub fn value<T: std::str::FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.string(key, None) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidInput(format!("config: cannot read {key} = {s}"))),
        }
    }

    pub fn value_or<T: std::str::FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        Ok(self.value(key, flag)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let c = Config::parse("precision = 40\nn_endpoint = 8\namplitude = \"exp\"").unwrap();
        assert_eq!(c.value_or::<u32>("precision", None, 30).unwrap(), 40);
        assert_eq!(c.value_or::<u32>("precision", Some(50), 30).unwrap(), 50);
        assert_eq!(c.value::<usize>("n-endpoint", None).unwrap(), Some(8));
        assert_eq!(c.string("amplitude", None).as_deref(), Some("exp"));
        assert_eq!(c.value::<u32>("missing", None).unwrap(), None);
    }

    #[test]
    fn rejects_nested() {
        assert!(Config::parse("[section]\nx = 1").is_err());
    }
}
