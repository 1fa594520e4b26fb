//! Reference-game corpus handling: ingest, utterance normalization, the
//! single-word success filter, context ease, and per-word denotations.

mod ingest;
mod normalize;
mod rounds;

pub use ingest::{
    ingest, ingest_reader, ColorLayout, HslColumns, IngestReport, Reject, RoleFilter, Schema,
    SlotColumns,
};
pub use normalize::{normalize_utterance, SpellMap};
pub use rounds::{
    build_denotations, clean, context_ease, repeated_chip_subset, ChipKey, CleanRound, Denotation,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colorspace::HslColor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    #[default]
    English,
    Chinese,
}

impl Language {
    /// Minimum number of uses for a word to get a denotation.
    pub fn default_min_count(self) -> usize {
        match self {
            Language::English => 10,
            Language::Chinese => 5,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::English => "english",
            Language::Chinese => "chinese",
        })
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "english" | "en" | "eng" => Ok(Language::English),
            "chinese" | "zh" | "cmn" | "mandarin" => Ok(Language::Chinese),
            other => Err(format!("unknown language tag `{other}`")),
        }
    }
}

/// One reference-game round as it appears in the source corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRound {
    pub game_id: String,
    pub round_index: u32,
    pub utterance: String,
    pub target: HslColor,
    pub distractor1: HslColor,
    pub distractor2: HslColor,
    pub listener_correct: bool,
    pub speaker_id: Option<String>,
    pub language: Language,
}
