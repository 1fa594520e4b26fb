use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Token-level spelling corrections, loaded from a two-column text file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpellMap {
    map: HashMap<String, String>,
}

impl SpellMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: impl Into<String>, to: impl Into<String>) {
        self.map.insert(from.into(), to.into());
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// One `from to` pair per line, whitespace separated. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(from), Some(to), None) => {
                    if !to.chars().all(char::is_alphanumeric) {
                        return Err(Error::Config(format!(
                            "spellmap line {}: replacement `{to}` must be a single alphanumeric token",
                            lineno + 1
                        )));
                    }
                    out.insert(from.to_lowercase(), to.to_lowercase());
                }
                _ => {
                    return Err(Error::Config(format!(
                        "spellmap line {}: expected `from to`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn apply<'a>(&'a self, token: &'a str) -> &'a str {
        self.map.get(token).map(String::as_str).unwrap_or(token)
    }
}

fn is_stripped(ch: char) -> bool {
    matches!(ch, '\'' | '\u{2019}' | '\u{2018}' | '`')
}

/// Lowercases, deletes apostrophes, treats every other non-alphanumeric
/// character (hyphens, slashes, punctuation) as a separator, splits on
/// whitespace and applies the spell map per token.
pub fn normalize_utterance(text: &str, spellmap: &SpellMap) -> Vec<String> {
    let mut buf = String::with_capacity(text.len());
    for ch in text.chars().flat_map(char::to_lowercase) {
        if ch.is_alphanumeric() {
            buf.push(ch);
        } else if !is_stripped(ch) {
            buf.push(' ');
        }
    }
    buf.split_whitespace()
        .map(|t| spellmap.apply(t).to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_punctuation() {
        assert_eq!(normalize_utterance("Purple!", &SpellMap::new()), ["purple"]);
        assert_eq!(
            normalize_utterance("  the BLUE one. ", &SpellMap::new()),
            ["the", "blue", "one"]
        );
        assert_eq!(normalize_utterance("don't", &SpellMap::new()), ["dont"]);
    }

    #[test]
    fn hyphen_and_slash_separate() {
        assert_eq!(
            normalize_utterance("blue-green", &SpellMap::new()),
            ["blue", "green"]
        );
        assert_eq!(
            normalize_utterance("blue/green", &SpellMap::new()),
            ["blue", "green"]
        );
    }

    #[test]
    fn spellmap_applies_per_token() {
        let map = SpellMap::parse("# corrections\npurlpe purple\n\ngrey gray\n").unwrap();
        assert_eq!(map.len(), 2);
        assert_eq!(normalize_utterance("purlpe", &map), ["purple"]);
        assert_eq!(normalize_utterance("Grey-purlpe", &map), ["gray", "purple"]);
    }

    #[test]
    fn spellmap_rejects_bad_lines() {
        assert!(SpellMap::parse("one two three").is_err());
        assert!(SpellMap::parse("lonely").is_err());
        assert!(SpellMap::parse("bluegreen blue-green").is_err());
    }

    #[test]
    fn cjk_is_kept() {
        assert_eq!(normalize_utterance("蓝！", &SpellMap::new()), ["蓝"]);
        assert_eq!(
            normalize_utterance("海，蓝", &SpellMap::new()),
            ["海", "蓝"]
        );
    }
}
