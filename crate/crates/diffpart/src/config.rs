//! Flat `section.key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment and blank lines are
//! ignored. Lists are comma separated. Every key must be consumed by the
//! reader, so a misspelt key is reported rather than silently ignored.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(format!("line {}", i + 1), "expected `section.key = value`"));
            };
            let key = key.trim();
            let valid = key.split('.').count() == 2
                && key.split('.').all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
            if !valid {
                return Err(Error::config(key, format!("line {}: keys have the form `section.key`", i + 1)));
            }
            if entries.insert(key.to_owned(), value.trim().to_owned()).is_some() {
                return Err(Error::config(key, format!("line {}: assigned twice", i + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_owned(), value.to_string());
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Removes and parses `key`.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.entries
            .remove(key)
            .map(|v| v.parse().map_err(|_| Error::config(key, format!("cannot parse `{v}`"))))
            .transpose()
    }

    pub fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.take(key)?.unwrap_or(default))
    }

    /// Removes and parses a comma-separated list; an empty value is an
    /// empty list.
    pub fn take_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.entries.remove(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| Error::config(key, format!("cannot parse list item `{s}`"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    /// Errors on the first key nobody consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.into_keys().next() {
            Some(key) => Err(Error::config(key, "unknown key")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_consumes() {
        let mut c = Config::parse("# header\nexperiment.seed = 7  # trailing\n\npartition.k = 2, 4\n").unwrap();
        assert_eq!(c.take::<u64>("experiment.seed").unwrap(), Some(7));
        assert_eq!(c.take_list::<u32>("partition.k").unwrap(), Some(vec![2, 4]));
        assert_eq!(c.take_or("workload.ops", 5usize).unwrap(), 5);
        c.finish().unwrap();
    }

    #[test]
    fn errors_name_the_key() {
        let mut c = Config::parse("workload.ops = many\n").unwrap();
        match c.take::<usize>("workload.ops") {
            Err(Error::Config { key, .. }) => assert_eq!(key, "workload.ops"),
            other => panic!("{other:?}"),
        }
        let c = Config::parse("didic.iteratons = 3\n").unwrap();
        assert!(matches!(c.finish(), Err(Error::Config { key, .. }) if key == "didic.iteratons"));
        assert!(matches!(Config::parse("a.b = 1\na.b = 2\n"), Err(Error::Config { key, .. }) if key == "a.b"));
        assert!(matches!(Config::parse("nokey\n"), Err(Error::Config { .. })));
        assert!(matches!(Config::parse("a.b.c = 1\n"), Err(Error::Config { .. })));
    }
}
