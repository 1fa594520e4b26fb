//! Word spread, word informativeness and lexicon informativeness.
//!
//! Spread is the mean pairwise Lab distance over a word's denoted chips.
//! Informativeness is its reciprocal scaled by 100. Denotations larger than
//! `max_exact` chips are estimated by averaging the informativeness of
//! `iterations` random subsets of `sample_size` chips, which keeps words of
//! very different frequency comparable.

use std::collections::BTreeMap;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::colorspace::{lab_distance, LabColor};
use crate::corpus::Denotation;
use crate::error::{Error, Result};
use crate::seed;

pub const SCALE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    pub max_exact: usize,
    pub sample_size: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            max_exact: 100,
            sample_size: 100,
            iterations: 30,
            seed: 0,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidArgument(
                "iterations must be at least 1".into(),
            ));
        }
        if self.sample_size < 2 {
            return Err(Error::InvalidArgument(
                "sample_size must be at least 2".into(),
            ));
        }
        if self.sample_size > self.max_exact {
            return Err(Error::InvalidArgument(format!(
                "sample_size {} exceeds max_exact {}",
                self.sample_size, self.max_exact
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordInfo {
    pub word: String,
    /// Mean pairwise distance over the whole denotation.
    pub spread: f64,
    pub i_w: f64,
    pub n_chips: usize,
    pub sampled: bool,
}

pub fn spread(chips: &[LabColor]) -> Result<f64> {
    let n = chips.len();
    if n < 2 {
        return Err(Error::InsufficientDenotation(n));
    }
    let mut total = 0.0;
    for (i, &a) in chips.iter().enumerate() {
        for &b in &chips[i + 1..] {
            total += lab_distance(a, b);
        }
    }
    if total == 0.0 {
        return Err(Error::DegenerateDenotation);
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(total / pairs)
}

fn sampled_mean(chips: &[LabColor], cfg: &SamplingConfig, stream: u64) -> Result<f64> {
    let mut rng = seed::rng(stream);
    let mut buf = Vec::with_capacity(cfg.sample_size);
    let mut acc = 0.0;
    for _ in 0..cfg.iterations {
        buf.clear();
        buf.extend(
            index::sample(&mut rng, chips.len(), cfg.sample_size)
                .into_iter()
                .map(|i| chips[i]),
        );
        acc += SCALE / spread(&buf)?;
    }
    Ok(acc / cfg.iterations as f64)
}

/// Informativeness of a chip set; the sampling stream is seeded from
/// `cfg.seed` alone.
pub fn informativeness(chips: &[LabColor], cfg: &SamplingConfig) -> Result<WordInfo> {
    estimate(String::new(), chips, cfg, cfg.seed)
}

fn estimate(
    word: String,
    chips: &[LabColor],
    cfg: &SamplingConfig,
    stream: u64,
) -> Result<WordInfo> {
    cfg.validate()?;
    let full = spread(chips)?;
    let (i_w, sampled) = if chips.len() <= cfg.max_exact {
        (SCALE / full, false)
    } else {
        (sampled_mean(chips, cfg, stream)?, true)
    };
    Ok(WordInfo {
        word,
        spread: full,
        i_w,
        n_chips: chips.len(),
        sampled,
    })
}

/// Informativeness of one denotation. The sampling stream is split from
/// `cfg.seed` by the word, so results do not depend on which other words
/// are present.
pub fn word_info(d: &Denotation, cfg: &SamplingConfig) -> Result<WordInfo> {
    let stream = seed::derive_seed(cfg.seed, &d.word);
    estimate(d.word.clone(), &d.chips, cfg, stream).map_err(|e| Error::InWord {
        word: d.word.clone(),
        source: Box::new(e),
    })
}

pub fn word_infos(
    denotations: &BTreeMap<String, Denotation>,
    cfg: &SamplingConfig,
) -> Result<BTreeMap<String, WordInfo>> {
    denotations
        .iter()
        .map(|(w, d)| Ok((w.clone(), word_info(d, cfg)?)))
        .collect()
}

/// Descending informativeness, ties by word.
pub fn ranked(infos: &BTreeMap<String, WordInfo>) -> Vec<&WordInfo> {
    let mut v: Vec<_> = infos.values().collect();
    v.sort_by(|a, b| b.i_w.total_cmp(&a.i_w).then_with(|| a.word.cmp(&b.word)));
    v
}

/// Mean informativeness of the words uttered over a set of interactions.
pub fn system_informativeness(uttered: &[f64]) -> Result<f64> {
    if uttered.is_empty() {
        return Err(Error::EmptyInput("no uttered words"));
    }
    Ok(uttered.iter().sum::<f64>() / uttered.len() as f64)
}
