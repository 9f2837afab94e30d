//! Optional `key=value` file with default truncations.

use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: &[&str] = &["terms", "tol", "m", "primes", "grouping", "format", "seed", "jobs", "s"];

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        FileConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<FileConfig, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(format!("config line {}: unknown key `{k}`", i + 1));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    /// Parsed value for `key`, if present.
    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| format!("config key `{key}`: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = FileConfig::parse("# defaults\nterms = 500\ntol=1e-2\n\n").unwrap();
        assert_eq!(c.get::<u64>("terms").unwrap(), Some(500));
        assert_eq!(c.get::<f64>("tol").unwrap(), Some(1e-2));
        assert_eq!(c.get::<u64>("m").unwrap(), None);
        assert!(FileConfig::parse("bogus=1").is_err());
        assert!(FileConfig::parse("terms").is_err());
        assert!(FileConfig::parse("terms=x").unwrap().get::<u64>("terms").is_err());
    }
}
