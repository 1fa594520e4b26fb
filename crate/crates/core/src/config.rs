//! Run configuration, read from a TOML file.
//!
//! ```toml
//! input = "corpus.csv"          # relative paths resolve against this file
//! language = "english"          # or "chinese"
//! min_count = 10                # optional; 10 for english, 5 for chinese
//! spellmap = "spellmap.txt"     # optional
//! seed = 42
//! out = "out"
//!
//! [sampling]                    # optional, these are the defaults
//! max_exact = 100
//! sample_size = 100
//! iterations = 30
//!
//! [schema]                      # optional, see `corpus::Schema`
//! delimiter = ","
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Language, Schema};
use crate::error::{Error, Result};
use crate::informativeness::SamplingConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingParams {
    pub max_exact: usize,
    pub sample_size: usize,
    pub iterations: usize,
}

impl Default for SamplingParams {
    fn default() -> Self {
        let d = SamplingConfig::default();
        Self {
            max_exact: d.max_exact,
            sample_size: d.sample_size,
            iterations: d.iterations,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    input: PathBuf,
    #[serde(default)]
    language: Language,
    min_count: Option<usize>,
    spellmap: Option<PathBuf>,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_out")]
    out: PathBuf,
    #[serde(default)]
    sampling: SamplingParams,
    #[serde(default)]
    schema: Schema,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schema: Schema,
    pub spellmap: Option<PathBuf>,
    pub language: Language,
    pub min_count: usize,
    pub sampling: SamplingParams,
    pub seed: u64,
    pub out: PathBuf,
}

impl RunConfig {
    /// Config for `input` with every other setting at its default.
    pub fn new(input: impl Into<PathBuf>, language: Language) -> Self {
        Self {
            input: input.into(),
            schema: Schema::default(),
            spellmap: None,
            language,
            min_count: language.default_min_count(),
            sampling: SamplingParams::default(),
            seed: 0,
            out: default_out(),
        }
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
        Ok(Self {
            input: resolve(file.input),
            schema: file.schema,
            spellmap: file.spellmap.map(resolve),
            language: file.language,
            min_count: file.min_count.unwrap_or(file.language.default_min_count()),
            sampling: file.sampling,
            seed: file.seed,
            out: resolve(file.out),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn sampling_config(&self, seed: u64) -> SamplingConfig {
        SamplingConfig {
            max_exact: self.sampling.max_exact,
            sample_size: self.sampling.sample_size,
            iterations: self.sampling.iterations,
            seed,
        }
    }

    /// Checks parameters and that the referenced files exist.
    pub fn validate(&self) -> Result<()> {
        if self.min_count < 2 {
            return Err(Error::Config(format!(
                "min_count must be at least 2, got {}",
                self.min_count
            )));
        }
        self.sampling_config(self.seed).validate()?;
        if !self.input.is_file() {
            return Err(Error::Config(format!(
                "input {} does not exist",
                self.input.display()
            )));
        }
        if let Some(p) = &self.spellmap {
            if !p.is_file() {
                return Err(Error::Config(format!(
                    "spellmap {} does not exist",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    /// Digest of everything that determines the outputs except the seed and
    /// the output directory. Input files contribute their contents, not
    /// their paths.
    pub fn hash(&self) -> Result<String> {
        let mut h = Sha256::new();
        let params = serde_json::json!({
            "schema": self.schema,
            "language": self.language,
            "min_count": self.min_count,
            "sampling": self.sampling,
        });
        h.update(serde_json::to_vec(&params)?);
        for path in std::iter::once(&self.input).chain(self.spellmap.as_ref()) {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
        let digest = h.finalize();
        Ok(digest[..8].iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_resolves_relative_paths() {
        let cfg = RunConfig::parse(
            "input = \"data/c.csv\"\nlanguage = \"chinese\"\nseed = 7\nspellmap = \"/abs/s.txt\"\n",
            Path::new("/base"),
        )
        .unwrap();
        assert_eq!(cfg.input, PathBuf::from("/base/data/c.csv"));
        assert_eq!(cfg.spellmap, Some(PathBuf::from("/abs/s.txt")));
        assert_eq!(cfg.out, PathBuf::from("/base/out"));
        assert_eq!(cfg.min_count, 5);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.sampling, SamplingParams::default());
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(RunConfig::parse("input = \"x\"\nbogus = 1\n", Path::new(".")).is_err());
        assert!(RunConfig::parse("language = \"english\"\n", Path::new(".")).is_err());
    }

    #[test]
    fn hash_tracks_content_not_location() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        fs::write(&a, "x\n1\n").unwrap();
        fs::write(&b, "x\n1\n").unwrap();
        let ca = RunConfig::new(&a, Language::English);
        let cb = RunConfig {
            out: "elsewhere".into(),
            seed: 99,
            ..RunConfig::new(&b, Language::English)
        };
        assert_eq!(ca.hash().unwrap(), cb.hash().unwrap());
        let cc = RunConfig {
            min_count: 3,
            ..ca.clone()
        };
        assert_ne!(ca.hash().unwrap(), cc.hash().unwrap());
        assert!(ca.validate().is_ok());
        assert!(RunConfig { min_count: 1, ..ca }.validate().is_err());
    }
}
