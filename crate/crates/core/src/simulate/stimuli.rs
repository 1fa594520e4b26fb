//! Stimulus sets for a listener study comparing the actual naming system
//! with simulated general-only and specific-only alternatives.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::ReferentEntry;
use crate::colorspace::LabColor;
use crate::corpus::{ChipKey, CleanRound};
use crate::error::{Error, Result};
use crate::informativeness::WordInfo;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stimulus {
    pub target: LabColor,
    pub distractor1: LabColor,
    pub distractor2: LabColor,
    pub target_key: ChipKey,
    pub actual_name: String,
    pub actual_i_w: f64,
    /// Least informative other name the chip received, if less informative
    /// than the actual one.
    pub simulated_general: Option<String>,
    pub simulated_specific: Option<String>,
    pub ease: f64,
    pub bin: usize,
    /// Drawn to cover the shortfall of an underpopulated bin.
    pub rebalanced: bool,
    pub game_id: String,
    pub round_index: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusSet {
    pub stimuli: Vec<Stimulus>,
    /// Bins that held fewer than `n / bins` eligible rounds.
    pub underpopulated_bins: Vec<usize>,
    pub ease_min: f64,
    pub ease_max: f64,
    pub eligible: usize,
}

fn bin_of(ease: f64, lo: f64, hi: f64, bins: usize) -> usize {
    if hi <= lo {
        return 0;
    }
    let b = ((ease - lo) / (hi - lo) * bins as f64).floor() as usize;
    b.min(bins - 1)
}

/// Sample `n` rounds spread evenly over `bins` equal-width context-ease bins.
///
/// Only rounds whose word has an informativeness score are eligible. When a
/// bin cannot fill its quota the shortfall is drawn from the nearest bins
/// with spare rounds, and those stimuli are flagged as rebalanced.
pub fn generate_stimuli(
    rounds: &[CleanRound],
    entries: &[ReferentEntry],
    infos: &BTreeMap<String, WordInfo>,
    n: usize,
    bins: usize,
    seed: u64,
) -> Result<StimulusSet> {
    if n == 0 || bins == 0 || !n.is_multiple_of(bins) {
        return Err(Error::InvalidArgument(format!(
            "n ({n}) must be a positive multiple of bins ({bins})"
        )));
    }
    let eligible: Vec<&CleanRound> = rounds
        .iter()
        .filter(|r| infos.contains_key(&r.word))
        .collect();
    if eligible.len() < n {
        return Err(Error::InsufficientRounds {
            needed: n,
            available: eligible.len(),
        });
    }
    let lo = eligible
        .iter()
        .map(|r| r.context_ease)
        .fold(f64::INFINITY, f64::min);
    let hi = eligible
        .iter()
        .map(|r| r.context_ease)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); bins];
    for (i, r) in eligible.iter().enumerate() {
        pools[bin_of(r.context_ease, lo, hi, bins)].push(i);
    }
    let mut rng = seed::rng(seed);
    for pool in &mut pools {
        pool.shuffle(&mut rng);
    }

    let quota = n / bins;
    // (index into eligible, rebalanced)
    let mut picks: Vec<(usize, bool)> = Vec::with_capacity(n);
    let mut cursor = vec![0usize; bins];
    let mut underpopulated = Vec::new();
    for b in 0..bins {
        let take = quota.min(pools[b].len());
        picks.extend(pools[b][..take].iter().map(|&i| (i, false)));
        cursor[b] = take;
        if take < quota {
            underpopulated.push(b);
        }
    }
    for &b in &underpopulated {
        let mut missing = quota - cursor[b];
        let mut donors: Vec<usize> = (0..bins).filter(|&d| d != b).collect();
        donors.sort_by_key(|&d| (d.abs_diff(b), d));
        for d in donors {
            while missing > 0 && cursor[d] < pools[d].len() {
                picks.push((pools[d][cursor[d]], true));
                cursor[d] += 1;
                missing -= 1;
            }
            if missing == 0 {
                break;
            }
        }
    }

    let by_chip: BTreeMap<ChipKey, &ReferentEntry> =
        entries.iter().map(|e| (e.referent, e)).collect();
    let mut stimuli: Vec<Stimulus> = picks
        .into_iter()
        .map(|(i, rebalanced)| {
            let r = eligible[i];
            let actual_i_w = infos[&r.word].i_w;
            let (general, specific) = match by_chip.get(&r.target_key) {
                Some(e) => (
                    Some(e.general())
                        .filter(|g| g.i_w < actual_i_w)
                        .map(|g| g.word.clone()),
                    Some(e.specific())
                        .filter(|s| s.i_w > actual_i_w)
                        .map(|s| s.word.clone()),
                ),
                None => (None, None),
            };
            Stimulus {
                target: r.target,
                distractor1: r.distractors[0],
                distractor2: r.distractors[1],
                target_key: r.target_key,
                actual_name: r.word.clone(),
                actual_i_w,
                simulated_general: general,
                simulated_specific: specific,
                ease: r.context_ease,
                bin: bin_of(r.context_ease, lo, hi, bins),
                rebalanced,
                game_id: r.game_id.clone(),
                round_index: r.round_index,
            }
        })
        .collect();
    stimuli.sort_by(|a, b| a.bin.cmp(&b.bin).then(a.rebalanced.cmp(&b.rebalanced)));

    Ok(StimulusSet {
        stimuli,
        underpopulated_bins: underpopulated,
        ease_min: lo,
        ease_max: hi,
        eligible: eligible.len(),
    })
}
