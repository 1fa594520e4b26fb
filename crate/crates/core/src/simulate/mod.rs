//! Lexical-system simulation.
//!
//! Every referent (chip) that received at least two distinct names becomes an
//! entry. Each ordered pair of entries is one interaction: the first is the
//! target, the second the lone distractor. The speaker picks a word according
//! to the system variant; the listener is certain when the word does not apply
//! to the distractor and guesses (0.5) when it does. Accuracies are expected
//! values, so the whole simulation is deterministic.

mod stimuli;

pub use stimuli::{generate_stimuli, Stimulus, StimulusSet};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ChipKey, CleanRound, Denotation};
use crate::error::{Error, Result};
use crate::informativeness::{system_informativeness, WordInfo};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NameScore {
    pub word: String,
    pub i_w: f64,
}

/// The names a referent received, ascending by informativeness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferentEntry {
    pub referent: ChipKey,
    pub names: Vec<NameScore>,
    /// Set when two names share an informativeness value; the order
    /// between them fell back to the word itself.
    pub tied: bool,
}

impl ReferentEntry {
    /// Sorts `names` and checks there are at least two distinct words.
    pub fn new(referent: ChipKey, mut names: Vec<NameScore>) -> Result<Self> {
        names.sort_by(|a, b| a.i_w.total_cmp(&b.i_w).then_with(|| a.word.cmp(&b.word)));
        names.dedup_by(|a, b| a.word == b.word);
        if names.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "referent {referent} needs at least two distinct names"
            )));
        }
        let tied = names.windows(2).any(|w| w[0].i_w == w[1].i_w);
        Ok(Self {
            referent,
            names,
            tied,
        })
    }

    pub fn general(&self) -> &NameScore {
        &self.names[0]
    }

    pub fn specific(&self) -> &NameScore {
        self.names.last().unwrap()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub entries: Vec<ReferentEntry>,
    /// Referents with fewer than two surviving names.
    pub skipped: usize,
    pub tied: usize,
}

/// One entry per chip named with at least two words that have an
/// informativeness score; entries are ordered by chip key.
pub fn build_entries(rounds: &[CleanRound], infos: &BTreeMap<String, WordInfo>) -> EntryReport {
    let mut by_chip: BTreeMap<ChipKey, BTreeSet<&str>> = BTreeMap::new();
    for r in rounds {
        let names = by_chip.entry(r.target_key).or_default();
        if infos.contains_key(&r.word) {
            names.insert(r.word.as_str());
        }
    }
    let mut report = EntryReport::default();
    for (key, words) in by_chip {
        if words.len() < 2 {
            report.skipped += 1;
            continue;
        }
        let names = words
            .into_iter()
            .map(|w| NameScore {
                word: w.to_string(),
                i_w: infos[w].i_w,
            })
            .collect();
        let entry = ReferentEntry::new(key, names).expect("two distinct names");
        report.tied += entry.tied as usize;
        report.entries.push(entry);
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemVariant {
    Actual,
    GeneralOnly,
    SpecificOnly,
}

impl SystemVariant {
    pub const ALL: [SystemVariant; 3] = [
        SystemVariant::Actual,
        SystemVariant::GeneralOnly,
        SystemVariant::SpecificOnly,
    ];
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemVariant::Actual => "actual",
            SystemVariant::GeneralOnly => "general",
            SystemVariant::SpecificOnly => "specific",
        })
    }
}

impl FromStr for SystemVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "actual" => Ok(SystemVariant::Actual),
            "general" | "general_only" => Ok(SystemVariant::GeneralOnly),
            "specific" | "specific_only" => Ok(SystemVariant::SpecificOnly),
            other => Err(format!("unknown system variant `{other}`")),
        }
    }
}

/// Whether `word` has been used for `referent` anywhere in the corpus.
pub fn applicable(
    word: &str,
    referent: ChipKey,
    denotations: &BTreeMap<String, Denotation>,
) -> Result<bool> {
    denotations
        .get(word)
        .map(|d| d.covers(referent))
        .ok_or_else(|| Error::UnknownWord(word.to_string()))
}

/// The name the speaker utters for `target` in the presence of `distractor`.
///
/// The adaptive (actual) speaker walks its names from least to most
/// informative and takes the first one that excludes the distractor, falling
/// back to the most informative name when none does.
pub fn speak<'e>(
    target: &'e ReferentEntry,
    distractor: &ReferentEntry,
    variant: SystemVariant,
    denotations: &BTreeMap<String, Denotation>,
) -> Result<&'e NameScore> {
    match variant {
        SystemVariant::GeneralOnly => Ok(target.general()),
        SystemVariant::SpecificOnly => Ok(target.specific()),
        SystemVariant::Actual => {
            for name in &target.names {
                if !applicable(&name.word, distractor.referent, denotations)? {
                    return Ok(name);
                }
            }
            Ok(target.specific())
        }
    }
}

/// Expected listener accuracy: 1 when the word singles out the target, 0.5
/// when it applies to the distractor too.
pub fn listen_accuracy(
    word: &str,
    target: ChipKey,
    distractor: ChipKey,
    denotations: &BTreeMap<String, Denotation>,
) -> Result<f64> {
    if !applicable(word, target, denotations)? {
        return Err(Error::NotApplicable {
            word: word.to_string(),
            referent: target.to_string(),
        });
    }
    Ok(if applicable(word, distractor, denotations)? {
        0.5
    } else {
        1.0
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub variant: SystemVariant,
    pub accuracy: f64,
    pub i_l: f64,
    pub n_interactions: usize,
    pub vocab_size: usize,
}

fn vocab_size(entries: &[ReferentEntry], variant: SystemVariant) -> usize {
    let words: BTreeSet<&str> = match variant {
        SystemVariant::Actual => entries
            .iter()
            .flat_map(|e| e.names.iter().map(|n| n.word.as_str()))
            .collect(),
        SystemVariant::GeneralOnly => entries.iter().map(|e| e.general().word.as_str()).collect(),
        SystemVariant::SpecificOnly => entries.iter().map(|e| e.specific().word.as_str()).collect(),
    };
    words.len()
}

/// Simulate every ordered (target, distractor) pair of entries.
pub fn run_simulation(
    entries: &[ReferentEntry],
    variant: SystemVariant,
    denotations: &BTreeMap<String, Denotation>,
) -> Result<SimResult> {
    if entries.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: entries.len(),
        });
    }
    let mut correct = 0.0;
    let mut uttered = Vec::with_capacity(entries.len() * (entries.len() - 1));
    for (i, target) in entries.iter().enumerate() {
        for (j, distractor) in entries.iter().enumerate() {
            if i == j {
                continue;
            }
            let name = speak(target, distractor, variant, denotations)?;
            correct += listen_accuracy(
                &name.word,
                target.referent,
                distractor.referent,
                denotations,
            )?;
            uttered.push(name.i_w);
        }
    }
    let n = uttered.len();
    Ok(SimResult {
        variant,
        accuracy: correct / n as f64,
        i_l: system_informativeness(&uttered)?,
        n_interactions: n,
        vocab_size: vocab_size(entries, variant),
    })
}

#[cfg(test)]
pub(crate) mod toy {
    //! The six-referent soft-mapping lexicon used throughout the tests.
    use super::*;
    use crate::colorspace::LabColor;

    pub const SYSTEM: [(&str, &str); 6] = [
        ("blue", "turquoise"),
        ("blue", "teal"),
        ("green", "teal"),
        ("purple", "magenta"),
        ("purple", "mauve"),
        ("purple", "mauve"),
    ];

    pub fn iw(word: &str) -> f64 {
        match word {
            "blue" => 1.5,
            "green" => 2.0,
            "purple" => 2.5,
            "turquoise" => 3.0,
            "teal" => 3.5,
            "magenta" => 4.0,
            "mauve" => 4.5,
            _ => unreachable!(),
        }
    }

    pub fn key(referent: usize) -> ChipKey {
        ChipKey::new(referent as u16, 50, 50)
    }

    pub fn build() -> (Vec<ReferentEntry>, BTreeMap<String, Denotation>) {
        let mut uses: BTreeMap<&str, Vec<ChipKey>> = BTreeMap::new();
        let mut entries = Vec::new();
        for (i, (g, s)) in SYSTEM.iter().enumerate() {
            let k = key(i + 1);
            uses.entry(g).or_default().push(k);
            uses.entry(s).or_default().push(k);
            let names = [g, s]
                .iter()
                .map(|w| NameScore {
                    word: w.to_string(),
                    i_w: iw(w),
                })
                .collect();
            entries.push(ReferentEntry::new(k, names).unwrap());
        }
        let denotations = uses
            .into_iter()
            .map(|(w, keys)| {
                let chips = keys
                    .iter()
                    .map(|k| LabColor::new(k.h as f64, 0.0, 0.0))
                    .collect();
                (w.to_string(), Denotation::new(w, chips, keys))
            })
            .collect();
        (entries, denotations)
    }
}

#[cfg(test)]
mod tests {
    use super::toy::{self, key};
    use super::*;
    use crate::colorspace::LabColor;

    fn info(word: &str, i_w: f64) -> (String, WordInfo) {
        (
            word.to_string(),
            WordInfo {
                word: word.into(),
                spread: 100.0 / i_w,
                i_w,
                n_chips: 10,
                sampled: false,
            },
        )
    }

    fn round(word: &str, k: ChipKey) -> CleanRound {
        CleanRound {
            word: word.into(),
            target: LabColor::new(50.0, 0.0, 0.0),
            distractors: [LabColor::new(0.0, 0.0, 0.0); 2],
            context_ease: 10.0,
            speaker_id: None,
            target_key: k,
            game_id: "g".into(),
            round_index: 0,
        }
    }

    #[test]
    fn entries_from_rounds() {
        let infos: BTreeMap<_, _> = [
            info("blue", 1.71),
            info("teal", 3.1),
            info("turquoise", 2.4),
        ]
        .into_iter()
        .collect();
        let a = ChipKey::new(1, 1, 1);
        let b = ChipKey::new(2, 2, 2);
        let c = ChipKey::new(3, 3, 3);
        let rounds = vec![
            round("blue", a),
            round("blue", a),
            round("blue", b),
            round("teal", b),
            round("rare", b),
            round("blue", c),
            round("teal", c),
            round("turquoise", c),
        ];
        let report = build_entries(&rounds, &infos);
        assert_eq!(report.skipped, 1);
        assert_eq!(report.entries.len(), 2);
        let eb = &report.entries[0];
        assert_eq!(eb.referent, b);
        assert_eq!(
            (eb.general().word.as_str(), eb.specific().word.as_str()),
            ("blue", "teal")
        );
        // arg-min and arg-max over the triple
        let ec = &report.entries[1];
        let words: Vec<_> = ec.names.iter().map(|n| n.word.as_str()).collect();
        assert_eq!(words, ["blue", "turquoise", "teal"]);
    }

    #[test]
    fn ties_break_lexicographically() {
        let e = ReferentEntry::new(
            key(1),
            vec![
                NameScore {
                    word: "zeta".into(),
                    i_w: 2.0,
                },
                NameScore {
                    word: "alpha".into(),
                    i_w: 2.0,
                },
            ],
        )
        .unwrap();
        assert!(e.tied);
        assert_eq!(e.general().word, "alpha");
        assert_eq!(e.specific().word, "zeta");
        assert!(ReferentEntry::new(
            key(1),
            vec![NameScore {
                word: "a".into(),
                i_w: 1.0
            }]
        )
        .is_err());
    }

    #[test]
    fn applicability() {
        let (_, d) = toy::build();
        assert!(applicable("teal", key(2), &d).unwrap());
        assert!(!applicable("teal", key(1), &d).unwrap());
        assert!(matches!(
            applicable("red", key(1), &d),
            Err(Error::UnknownWord(_))
        ));
    }

    #[test]
    fn toy_speaker_choices() {
        let (e, d) = toy::build();
        let say = |t: usize, x: usize| {
            speak(&e[t - 1], &e[x - 1], SystemVariant::Actual, &d)
                .unwrap()
                .word
                .clone()
        };
        assert_eq!(say(1, 3), "blue");
        assert_eq!(say(1, 2), "turquoise");
        assert_eq!(say(5, 6), "mauve");
        assert_eq!(
            speak(&e[0], &e[2], SystemVariant::SpecificOnly, &d)
                .unwrap()
                .word,
            "turquoise"
        );
        assert_eq!(
            speak(&e[0], &e[1], SystemVariant::GeneralOnly, &d)
                .unwrap()
                .word,
            "blue"
        );
    }

    #[test]
    fn toy_listener() {
        let (_, d) = toy::build();
        assert_eq!(listen_accuracy("blue", key(1), key(3), &d).unwrap(), 1.0);
        assert_eq!(listen_accuracy("blue", key(1), key(2), &d).unwrap(), 0.5);
        for w in ["purple", "mauve"] {
            assert_eq!(listen_accuracy(w, key(5), key(6), &d).unwrap(), 0.5);
        }
        assert!(matches!(
            listen_accuracy("green", key(1), key(2), &d),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn toy_accuracies_match_enumeration() {
        let (e, d) = toy::build();
        let acc = |v| run_simulation(&e, v, &d).unwrap();
        let actual = acc(SystemVariant::Actual);
        assert_eq!(actual.accuracy, 29.0 / 30.0);
        assert_eq!(actual.n_interactions, 30);
        assert_eq!(actual.vocab_size, 7);
        let general = acc(SystemVariant::GeneralOnly);
        assert_eq!(general.accuracy, 13.0 / 15.0);
        assert_eq!(general.vocab_size, 3);
        let specific = acc(SystemVariant::SpecificOnly);
        assert_eq!(specific.accuracy, 14.0 / 15.0);
        assert_eq!(specific.vocab_size, 4);
    }

    #[test]
    fn toy_lexicon_informativeness_by_hand() {
        // General: each referent utters its general name against 5 distractors.
        // (1.5 + 1.5 + 2.0 + 2.5 + 2.5 + 2.5) / 6 = 12.5 / 6
        // Specific: (3.0 + 3.5 + 3.5 + 4.0 + 4.5 + 4.5) / 6 = 23.0 / 6
        // Actual, per target, the words uttered against its 5 distractors:
        //   r1: d2 turquoise, d3..d6 blue           -> 3.0 + 4*1.5 = 9.0
        //   r2: d1 teal, d3..d6 blue                -> 3.5 + 4*1.5 = 9.5
        //   r3: all green                           -> 5*2.0       = 10.0
        //   r4: d5, d6 magenta, d1..d3 purple       -> 2*4.0 + 3*2.5 = 15.5
        //   r5: d4 mauve, d6 mauve, d1..d3 purple   -> 2*4.5 + 3*2.5 = 16.5
        //   r6: same as r5                          -> 16.5
        // total 77.0 over 30 interactions
        let (e, d) = toy::build();
        let il = |v| run_simulation(&e, v, &d).unwrap().i_l;
        assert!((il(SystemVariant::GeneralOnly) - 12.5 / 6.0).abs() < 1e-12);
        assert!((il(SystemVariant::SpecificOnly) - 23.0 / 6.0).abs() < 1e-12);
        assert!((il(SystemVariant::Actual) - 77.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn simulation_needs_two_entries() {
        let (e, d) = toy::build();
        assert!(run_simulation(&e[..1], SystemVariant::Actual, &d).is_err());
    }

    #[test]
    fn order_of_entries_is_irrelevant() {
        let (mut e, d) = toy::build();
        let before: Vec<_> = SystemVariant::ALL
            .iter()
            .map(|&v| run_simulation(&e, v, &d).unwrap())
            .collect();
        e.reverse();
        e.swap(1, 4);
        for (v, b) in SystemVariant::ALL.iter().zip(before) {
            let a = run_simulation(&e, *v, &d).unwrap();
            assert_eq!(a.accuracy, b.accuracy);
            assert!((a.i_l - b.i_l).abs() < 1e-12);
        }
    }
}
