use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{normalize_utterance, RawRound, SpellMap};
use crate::colorspace::{lab_distance, HslColor, LabColor};
use crate::error::{Error, Result};

/// Chip identity: hue in whole degrees, saturation and lightness in whole
/// percent. Two rounds show "the same chip" iff their keys are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChipKey {
    pub h: u16,
    pub s: u16,
    pub l: u16,
}

impl ChipKey {
    pub fn new(h: u16, s: u16, l: u16) -> Self {
        Self { h, s, l }
    }

    pub fn from_hsl(c: HslColor) -> Self {
        Self {
            h: (c.h.round() as u16) % 360,
            s: (c.s * 100.0).round() as u16,
            l: (c.l * 100.0).round() as u16,
        }
    }
}

impl fmt::Display for ChipKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.h, self.s, self.l)
    }
}

/// A successfully solved, single-word round in Lab coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanRound {
    pub word: String,
    pub target: LabColor,
    pub distractors: [LabColor; 2],
    pub context_ease: f64,
    pub speaker_id: Option<String>,
    pub target_key: ChipKey,
    pub game_id: String,
    pub round_index: u32,
}

impl CleanRound {
    /// Distance from the target to the distractor that is *not* the closest.
    pub fn far_distance(&self) -> f64 {
        let d1 = lab_distance(self.target, self.distractors[0]);
        let d2 = lab_distance(self.target, self.distractors[1]);
        d1.max(d2)
    }
}

/// Distance from the target to its closest distractor.
pub fn context_ease(target: LabColor, d1: LabColor, d2: LabColor) -> f64 {
    lab_distance(target, d1).min(lab_distance(target, d2))
}

/// Keep rounds the listener solved with a one-token utterance.
pub fn clean(rounds: &[RawRound], spellmap: &SpellMap) -> Vec<CleanRound> {
    rounds
        .iter()
        .filter(|r| r.listener_correct)
        .filter_map(|r| {
            let mut tokens = normalize_utterance(&r.utterance, spellmap);
            if tokens.len() != 1 {
                return None;
            }
            let target = LabColor::from_hsl(r.target);
            let d1 = LabColor::from_hsl(r.distractor1);
            let d2 = LabColor::from_hsl(r.distractor2);
            Some(CleanRound {
                word: tokens.pop().unwrap(),
                target,
                distractors: [d1, d2],
                context_ease: context_ease(target, d1, d2),
                speaker_id: r.speaker_id.clone(),
                target_key: ChipKey::from_hsl(r.target),
                game_id: r.game_id.clone(),
                round_index: r.round_index,
            })
        })
        .collect()
}

/// The chips a word was used for, one entry per clean round.
#[derive(Debug, Clone, PartialEq)]
pub struct Denotation {
    pub word: String,
    pub chips: Vec<LabColor>,
    pub keys: Vec<ChipKey>,
    pub count: usize,
    referents: BTreeSet<ChipKey>,
}

impl Denotation {
    pub fn new(word: impl Into<String>, chips: Vec<LabColor>, keys: Vec<ChipKey>) -> Self {
        assert_eq!(chips.len(), keys.len(), "one key per chip");
        let referents = keys.iter().copied().collect();
        Self {
            word: word.into(),
            count: chips.len(),
            chips,
            keys,
            referents,
        }
    }

    /// Whether some speaker used this word for the chip.
    pub fn covers(&self, key: ChipKey) -> bool {
        self.referents.contains(&key)
    }

    pub fn distinct_chips(&self) -> usize {
        self.referents.len()
    }
}

/// Group chips by word, dropping words used fewer than `min_count` times.
pub fn build_denotations(
    rounds: &[CleanRound],
    min_count: usize,
) -> Result<BTreeMap<String, Denotation>> {
    if min_count == 0 {
        return Err(Error::InvalidArgument(
            "min_count must be at least 1".into(),
        ));
    }
    let mut grouped: BTreeMap<&str, (Vec<LabColor>, Vec<ChipKey>)> = BTreeMap::new();
    for r in rounds {
        let entry = grouped.entry(r.word.as_str()).or_default();
        entry.0.push(r.target);
        entry.1.push(r.target_key);
    }
    Ok(grouped
        .into_iter()
        .filter(|(_, (chips, _))| chips.len() >= min_count)
        .map(|(w, (chips, keys))| (w.to_string(), Denotation::new(w, chips, keys)))
        .collect())
}

/// Rounds whose target chip occurs at least twice.
pub fn repeated_chip_subset(rounds: &[CleanRound]) -> Vec<CleanRound> {
    let mut counts: HashMap<ChipKey, usize> = HashMap::new();
    for r in rounds {
        *counts.entry(r.target_key).or_default() += 1;
    }
    rounds
        .iter()
        .filter(|r| counts[&r.target_key] >= 2)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Language;
    use proptest::prelude::*;

    fn hsl(h: f64, s: f64, l: f64) -> HslColor {
        HslColor::new(h, s, l).unwrap()
    }

    fn raw(utt: &str, ok: bool, target: HslColor) -> RawRound {
        RawRound {
            game_id: "g".into(),
            round_index: 0,
            utterance: utt.into(),
            target,
            distractor1: hsl(10.0, 0.5, 0.5),
            distractor2: hsl(100.0, 0.5, 0.5),
            listener_correct: ok,
            speaker_id: None,
            language: Language::English,
        }
    }

    pub(crate) fn round(word: &str, key: ChipKey, lab: LabColor) -> CleanRound {
        CleanRound {
            word: word.into(),
            target: lab,
            distractors: [LabColor::new(0.0, 0.0, 0.0); 2],
            context_ease: 1.0,
            speaker_id: None,
            target_key: key,
            game_id: "g".into(),
            round_index: 0,
        }
    }

    #[test]
    fn ease_is_min_distance() {
        let t = LabColor::new(50.0, 0.0, 0.0);
        let a = LabColor::new(50.0, 10.0, 0.0);
        let b = LabColor::new(50.0, 0.0, -10.0);
        assert_eq!(context_ease(t, a, b), 10.0);
        let near = LabColor::new(50.0, 17.0, 0.0);
        let far = LabColor::new(50.0, 0.0, 54.0);
        assert_eq!(context_ease(t, near, far), 17.0);
        assert_eq!(context_ease(t, far, near), 17.0);
        assert_eq!(context_ease(t, t, far), 0.0);
    }

    #[test]
    fn clean_filters_failures_and_multiword() {
        let rounds = vec![
            raw("blue", false, hsl(200.0, 0.5, 0.5)),
            raw("light blue", true, hsl(200.0, 0.5, 0.5)),
            raw("Blue!", true, hsl(200.0, 0.5, 0.5)),
        ];
        let clean = clean(&rounds, &SpellMap::new());
        assert_eq!(clean.len(), 1);
        assert_eq!(clean[0].word, "blue");
        assert_eq!(clean[0].target_key, ChipKey::new(200, 50, 50));
    }

    #[test]
    fn clean_computes_min_ease() {
        let r = raw("blue", true, hsl(200.0, 0.5, 0.5));
        let c = &clean(std::slice::from_ref(&r), &SpellMap::new())[0];
        let t = LabColor::from_hsl(r.target);
        let d1 = lab_distance(t, LabColor::from_hsl(r.distractor1));
        let d2 = lab_distance(t, LabColor::from_hsl(r.distractor2));
        assert_eq!(c.context_ease, d1.min(d2));
        assert_eq!(c.far_distance(), d1.max(d2));
    }

    #[test]
    fn ease_twelve_and_forty() {
        let t = LabColor::new(50.0, 5.0, 5.0);
        let near = LabColor::new(62.0, 5.0, 5.0);
        let far = LabColor::new(50.0, 45.0, 5.0);
        assert_eq!(context_ease(t, near, far), 12.0);
    }

    #[test]
    fn thresholds() {
        let key = ChipKey::new(1, 1, 1);
        let lab = LabColor::new(1.0, 0.0, 0.0);
        let mut rounds: Vec<_> = (0..9).map(|_| round("rare", key, lab)).collect();
        rounds.extend((0..5).map(|_| round("five", key, lab)));
        let d = build_denotations(&rounds, 10).unwrap();
        assert!(!d.contains_key("rare"));
        let d = build_denotations(&rounds, 5).unwrap();
        assert!(d.contains_key("five") && d.contains_key("rare"));
        assert_eq!(d["five"].count, 5);
        assert!(build_denotations(&[], 10).unwrap().is_empty());
        assert!(build_denotations(&rounds, 0).is_err());
    }

    #[test]
    fn repeated_subset() {
        let lab = LabColor::new(1.0, 0.0, 0.0);
        let a = ChipKey::new(1, 1, 1);
        let b = ChipKey::new(2, 2, 2);
        let rounds = vec![round("x", a, lab), round("y", b, lab), round("z", a, lab)];
        let sub = repeated_chip_subset(&rounds);
        assert_eq!(sub.len(), 2);
        assert!(sub.iter().all(|r| r.target_key == a));
        let all_repeat = vec![round("x", a, lab), round("y", a, lab)];
        assert_eq!(repeated_chip_subset(&all_repeat), all_repeat);
    }

    #[test]
    fn chip_key_grid() {
        assert_eq!(
            ChipKey::from_hsl(hsl(359.6, 0.504, 0.5)),
            ChipKey::new(0, 50, 50)
        );
        assert_eq!(ChipKey::new(12, 3, 4).to_string(), "12-3-4");
    }

    proptest! {
        #[test]
        fn denotation_counts_bounded(words in proptest::collection::vec(0u8..6, 0..60), min in 1usize..5) {
            let lab = LabColor::new(1.0, 0.0, 0.0);
            let rounds: Vec<_> = words.iter().map(|w| round(&format!("w{w}"), ChipKey::new(*w as u16, 0, 0), lab)).collect();
            let total: usize = build_denotations(&rounds, min).unwrap().values().map(|d| d.count).sum();
            prop_assert!(total <= rounds.len());
            if min == 1 {
                prop_assert_eq!(total, rounds.len());
            }
        }

        #[test]
        fn clean_words_are_single_tokens(utt in "[a-zA-Z !,.-/]{0,20}") {
            let spell = SpellMap::new();
            for c in clean(&[raw(&utt, true, hsl(0.0, 0.5, 0.5))], &spell) {
                prop_assert_eq!(normalize_utterance(&c.word, &spell), vec![c.word.clone()]);
            }
        }
    }
}
