//! Denotation-based informativeness of color words and lexical systems,
//! computed from reference-game color-naming corpora.
//!
//! The pipeline runs `corpus` (ingest, clean, denotations) into
//! `informativeness` (spread and I_w per word), then either `regress`
//! (context ease vs. I_w) or `simulate` (actual vs. general-only vs.
//! specific-only lexicons). `pipeline` wires the stages to files and the
//! command line; `plot` renders SVG figures.

pub mod colorspace;
pub mod config;
pub mod corpus;
pub mod error;
pub mod informativeness;
pub mod pipeline;
pub mod plot;
pub mod regress;
pub mod seed;
pub mod simulate;

pub use error::{Error, Result};
