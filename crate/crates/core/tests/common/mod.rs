//! Fixtures and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use lexinfo::colorspace::LabColor;
use lexinfo::config::RunConfig;
use lexinfo::corpus::{self, ChipKey, CleanRound, Denotation};
use lexinfo::informativeness::WordInfo;
use lexinfo::regress::RegressionRow;
use lexinfo::simulate::{self, ReferentEntry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_config(name: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(&fixture(name)).unwrap();
    cfg.out = out.to_path_buf();
    cfg
}

pub const HEADER: &str = "game_id,round_index,utterance,target_h,target_s,target_l,d1_h,d1_s,d1_l,d2_h,d2_s,d2_l,listener_correct,speaker_id";

/// Writes a canonical-layout corpus and a config pointing at it.
pub fn write_corpus(dir: &Path, rows: &[&str], extra_config: &str) -> PathBuf {
    let mut text = format!("{HEADER}\n");
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    fs::write(dir.join("corpus.csv"), text).unwrap();
    let cfg = dir.join("run.toml");
    fs::write(
        &cfg,
        format!("input = \"corpus.csv\"\nout = \"out\"\n{extra_config}"),
    )
    .unwrap();
    cfg
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

/// The six-referent soft-mapping lexicon: each referent has a general and a
/// specific name, with fixed informativeness scores.
pub const TOY: [(&str, &str); 6] = [
    ("blue", "turquoise"),
    ("blue", "teal"),
    ("green", "teal"),
    ("purple", "magenta"),
    ("purple", "mauve"),
    ("purple", "mauve"),
];

pub fn toy_iw(word: &str) -> f64 {
    match word {
        "blue" => 1.5,
        "green" => 2.0,
        "purple" => 2.5,
        "turquoise" => 3.0,
        "teal" => 3.5,
        "magenta" => 4.0,
        "mauve" => 4.5,
        other => panic!("not in the toy lexicon: {other}"),
    }
}

fn toy_round(word: &str, referent: usize, idx: u32) -> CleanRound {
    let target = LabColor::new(10.0 * referent as f64, 0.0, 0.0);
    let far = LabColor::new(100.0, 0.0, 0.0);
    CleanRound {
        word: word.into(),
        target,
        distractors: [far, far],
        context_ease: 100.0 - target.l_star,
        speaker_id: None,
        target_key: ChipKey::new(referent as u16, 50, 50),
        game_id: "toy".into(),
        round_index: idx,
    }
}

/// Toy entries and denotations built through the public corpus path: one
/// round per (referent, name) pair.
pub fn toy_system() -> (Vec<ReferentEntry>, BTreeMap<String, Denotation>) {
    let mut rounds = Vec::new();
    for (i, (g, s)) in TOY.iter().enumerate() {
        rounds.push(toy_round(g, i + 1, 2 * i as u32));
        rounds.push(toy_round(s, i + 1, 2 * i as u32 + 1));
    }
    let denotations = corpus::build_denotations(&rounds, 1).unwrap();
    let infos: BTreeMap<String, WordInfo> = denotations
        .keys()
        .map(|w| {
            let i_w = toy_iw(w);
            let info = WordInfo {
                word: w.clone(),
                spread: 100.0 / i_w,
                i_w,
                n_chips: 2,
                sampled: false,
            };
            (w.clone(), info)
        })
        .collect();
    let report = simulate::build_entries(&rounds, &infos);
    assert_eq!(report.entries.len(), 6);
    (report.entries, denotations)
}

/// Random-intercept data: `i_w = 3 + slope * ease + u_g + e`, with
/// `u_g ~ N(0, sd_group²)`, `e ~ N(0, sd_resid²)` and ease uniform on [0, 100].
pub fn synthetic_regression(
    seed: u64,
    slope: f64,
    groups: usize,
    per_group: usize,
    sd_group: f64,
    sd_resid: f64,
) -> Vec<RegressionRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Normal::new(0.0, sd_group).unwrap();
    let e = Normal::new(0.0, sd_resid).unwrap();
    let mut rows = Vec::with_capacity(groups * per_group);
    for g in 0..groups {
        let ug = if sd_group > 0.0 {
            u.sample(&mut rng)
        } else {
            0.0
        };
        for _ in 0..per_group {
            let ease: f64 = rng.random_range(0.0..100.0);
            rows.push(RegressionRow::new(
                3.0 + slope * ease + ug + e.sample(&mut rng),
                ease,
                format!("g{g}"),
            ));
        }
    }
    rows
}

pub fn random_lab(rng: &mut ChaCha8Rng) -> LabColor {
    LabColor::new(
        rng.random_range(0.0..100.0),
        rng.random_range(-80.0..80.0),
        rng.random_range(-80.0..80.0),
    )
}

/// Mean pairwise Euclidean distance over all ordered pairs, written
/// independently of the library.
pub fn brute_force_spread(chips: &[LabColor]) -> f64 {
    let n = chips.len();
    let mut total = 0.0;
    for (i, a) in chips.iter().enumerate() {
        for (j, b) in chips.iter().enumerate() {
            if i != j {
                let d = [
                    a.l_star - b.l_star,
                    a.a_star - b.a_star,
                    a.b_star - b.b_star,
                ];
                total += d.iter().map(|x| x * x).sum::<f64>().sqrt();
            }
        }
    }
    total / (n * (n - 1)) as f64
}
