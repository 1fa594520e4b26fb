//! End-to-end commands. Each command recomputes the stages it needs from the
//! configured corpus and writes its artifacts into the output directory.
//!
//! Every artifact starts with a header naming the config hash and root seed:
//! a `#` comment line for TSV and text reports, a `{"kind":"header",...}`
//! record for JSONL, an XML comment for SVG. Nothing time-dependent is
//! written, so identical inputs give byte-identical files.
//!
//! | command    | artifacts                                   |
//! |------------|---------------------------------------------|
//! | `ingest`   | `clean_rounds.tsv`, `rejects.tsv`           |
//! | `info`     | `word_info.tsv`, `word_info.jsonl`          |
//! | `regress`  | `regress_<subset>.txt`, `regress_<subset>.jsonl` |
//! | `simulate` | `simulation.tsv`, `simulation.jsonl`        |
//! | `stimuli`  | `stimuli.tsv`, `stimuli.jsonl`              |
//! | `plot`     | `denotation_<words>.svg`, `ease_vs_iw_<subset>.svg` |

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::config::RunConfig;
use crate::corpus::{self, CleanRound, Denotation, IngestReport, SpellMap};
use crate::error::{Error, Result};
use crate::informativeness::{self, WordInfo};
use crate::plot::{self, DenotationSeries};
use crate::regress::{self, FitResult, RegressionRow};
use crate::seed::derive_seed;
use crate::simulate::{self, EntryReport, SimResult, StimulusSet, SystemVariant};

/// Corpus-derived state shared by every command.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub ingest: IngestReport,
    pub rounds: Vec<CleanRound>,
    pub denotations: BTreeMap<String, Denotation>,
    pub infos: BTreeMap<String, WordInfo>,
}

impl Analysis {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let ingest = corpus::ingest(&cfg.input, &cfg.schema, cfg.language)?;
        let spellmap = match &cfg.spellmap {
            Some(p) => SpellMap::load(p)?,
            None => SpellMap::new(),
        };
        let rounds = corpus::clean(&ingest.rounds, &spellmap);
        let denotations = corpus::build_denotations(&rounds, cfg.min_count)?;
        let sampling = cfg.sampling_config(derive_seed(cfg.seed, "info"));
        let infos = informativeness::word_infos(&denotations, &sampling)?;
        Ok(Self {
            ingest,
            rounds,
            denotations,
            infos,
        })
    }

    pub fn ranked_infos(&self) -> Vec<&WordInfo> {
        informativeness::ranked(&self.infos)
    }

    pub fn subset(&self, subset: Subset) -> Vec<CleanRound> {
        match subset {
            Subset::All => self.rounds.clone(),
            Subset::Repeated => corpus::repeated_chip_subset(&self.rounds),
        }
    }

    pub fn entries(&self) -> EntryReport {
        simulate::build_entries(&self.rounds, &self.infos)
    }

    pub fn simulate(&self) -> Result<SimulationReport> {
        let entries = self.entries();
        let results = SystemVariant::ALL
            .iter()
            .map(|&v| simulate::run_simulation(&entries.entries, v, &self.denotations))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimulationReport {
            entries: entries.entries.len(),
            skipped: entries.skipped,
            tied: entries.tied,
            results,
        })
    }

    pub fn regress(&self, subset: Subset, group: GroupBy) -> Result<RegressionReport> {
        let rounds: Vec<CleanRound> = self
            .subset(subset)
            .into_iter()
            .filter(|r| self.infos.contains_key(&r.word))
            .collect();
        let rows = regression_rows(&rounds, &self.infos, group);
        let ols = regress::fit_ols(&rows)?;
        let mixed = regress::fit_random_intercept(&rows)?;
        let near: Vec<f64> = rounds.iter().map(|r| r.context_ease).collect();
        let far: Vec<f64> = rounds.iter().map(CleanRound::far_distance).collect();
        Ok(RegressionReport {
            subset,
            group,
            n_rows: rows.len(),
            ols,
            mixed,
            distractor_r: regress::pearson_r(&near, &far).ok(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subset {
    All,
    Repeated,
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subset::All => "all",
            Subset::Repeated => "repeated",
        })
    }
}

impl FromStr for Subset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(Subset::All),
            "repeated" => Ok(Subset::Repeated),
            other => Err(format!("unknown subset `{other}` (expected all|repeated)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    Chip,
    Speaker,
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupBy::Chip => "chip",
            GroupBy::Speaker => "speaker",
        })
    }
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "chip" => Ok(GroupBy::Chip),
            "speaker" => Ok(GroupBy::Speaker),
            other => Err(format!(
                "unknown grouping `{other}` (expected chip|speaker)"
            )),
        }
    }
}

/// One row per round whose word has a score. Rounds without a speaker id
/// share the group `unknown` when grouping by speaker.
pub fn regression_rows(
    rounds: &[CleanRound],
    infos: &BTreeMap<String, WordInfo>,
    group: GroupBy,
) -> Vec<RegressionRow> {
    rounds
        .iter()
        .filter_map(|r| {
            let info = infos.get(&r.word)?;
            let g = match group {
                GroupBy::Chip => r.target_key.to_string(),
                GroupBy::Speaker => r.speaker_id.clone().unwrap_or_else(|| "unknown".into()),
            };
            Some(RegressionRow::new(info.i_w, r.context_ease, g))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestSummary {
    pub rows: usize,
    pub rounds: usize,
    pub rejects: usize,
    pub filtered: usize,
    pub clean_rounds: usize,
    pub words: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegressionReport {
    pub subset: Subset,
    pub group: GroupBy,
    pub n_rows: usize,
    pub ols: FitResult,
    pub mixed: FitResult,
    /// Correlation between the closest and the other distractor distance.
    pub distractor_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub entries: usize,
    pub skipped: usize,
    pub tied: usize,
    pub results: Vec<SimResult>,
}

impl SimulationReport {
    pub fn get(&self, variant: SystemVariant) -> &SimResult {
        self.results
            .iter()
            .find(|r| r.variant == variant)
            .expect("all variants simulated")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlotKind {
    Denotation(Vec<String>),
    EaseVsIw(Subset),
}

fn tsv<I, R>(header: &str, columns: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut buf = format!("{header}\n").into_bytes();
    {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .from_writer(&mut buf);
        w.write_record(columns)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| Error::io("<buffer>", e))?;
    }
    Ok(buf)
}

fn jsonl<T: Serialize>(header: &serde_json::Value, records: &[T]) -> Result<Vec<u8>> {
    let mut out = serde_json::to_string(header)?;
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out.into_bytes())
}

fn opt(s: &Option<String>) -> String {
    s.clone().unwrap_or_default()
}

fn lab_cols(c: crate::colorspace::LabColor) -> [String; 3] {
    [
        c.l_star.to_string(),
        c.a_star.to_string(),
        c.b_star.to_string(),
    ]
}

/// A configured run: validated config plus lazily computed corpus state.
pub struct Pipeline {
    pub config: RunConfig,
    hash: String,
    analysis: OnceCell<Analysis>,
}

impl Pipeline {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let hash = config.hash()?;
        Ok(Self {
            config,
            hash,
            analysis: OnceCell::new(),
        })
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    pub fn analysis(&self) -> Result<&Analysis> {
        if let Some(a) = self.analysis.get() {
            return Ok(a);
        }
        let a = Analysis::from_config(&self.config)?;
        Ok(self.analysis.get_or_init(|| a))
    }

    fn header_line(&self, artifact: &str) -> String {
        format!(
            "# lexinfo {artifact} config={} seed={}",
            self.hash, self.config.seed
        )
    }

    fn header_json(&self, artifact: &str, extra: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "kind": "header",
            "artifact": artifact,
            "config": self.hash,
            "seed": self.config.seed,
            "info": extra,
        })
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let dir = &self.config.out;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn ingest(&self) -> Result<IngestSummary> {
        let a = self.analysis()?;
        let rows = a.rounds.iter().map(|r| {
            let mut v = vec![
                r.word.clone(),
                r.game_id.clone(),
                r.round_index.to_string(),
                opt(&r.speaker_id),
                r.target_key.to_string(),
            ];
            v.extend(lab_cols(r.target));
            v.extend(lab_cols(r.distractors[0]));
            v.extend(lab_cols(r.distractors[1]));
            v.push(r.context_ease.to_string());
            v
        });
        let cols = [
            "word",
            "game_id",
            "round_index",
            "speaker_id",
            "target_key",
            "target_l",
            "target_a",
            "target_b",
            "d1_l",
            "d1_a",
            "d1_b",
            "d2_l",
            "d2_a",
            "d2_b",
            "context_ease",
        ];
        self.write(
            "clean_rounds.tsv",
            &tsv(&self.header_line("clean-rounds"), &cols, rows)?,
        )?;
        let rejects = a
            .ingest
            .rejects
            .iter()
            .map(|r| vec![r.line.to_string(), r.reason.clone()]);
        self.write(
            "rejects.tsv",
            &tsv(&self.header_line("rejects"), &["line", "reason"], rejects)?,
        )?;
        Ok(IngestSummary {
            rows: a.ingest.rows,
            rounds: a.ingest.rounds.len(),
            rejects: a.ingest.rejects.len(),
            filtered: a.ingest.filtered,
            clean_rounds: a.rounds.len(),
            words: a.denotations.len(),
        })
    }

    pub fn info(&self) -> Result<Vec<WordInfo>> {
        let a = self.analysis()?;
        let ranked: Vec<WordInfo> = a.ranked_infos().into_iter().cloned().collect();
        let rows = ranked.iter().map(|w| {
            vec![
                w.word.clone(),
                w.n_chips.to_string(),
                w.spread.to_string(),
                w.i_w.to_string(),
                w.sampled.to_string(),
            ]
        });
        self.write(
            "word_info.tsv",
            &tsv(
                &self.header_line("word-info"),
                &["word", "n_chips", "spread", "i_w", "sampled"],
                rows,
            )?,
        )?;
        let header = self.header_json(
            "word-info",
            serde_json::json!({ "min_count": self.config.min_count, "sampling": self.config.sampling }),
        );
        self.write("word_info.jsonl", &jsonl(&header, &ranked)?)?;
        Ok(ranked)
    }

    pub fn regress(&self, subset: Subset, group: GroupBy) -> Result<RegressionReport> {
        let report = self.analysis()?.regress(subset, group)?;
        let mut text = self.header_line(&format!("regress-{subset}"));
        text.push('\n');
        let _ = writeln!(
            text,
            "subset: {subset}\ngroup_by: {group}\nrows: {}",
            report.n_rows
        );
        if let Some(r) = report.distractor_r {
            let _ = writeln!(text, "distractor_distance_r: {r}");
        }
        for (name, fit) in [("ols", &report.ols), ("random_intercept", &report.mixed)] {
            let _ = writeln!(text, "\n[{name}]");
            let _ = writeln!(text, "intercept: {}\nslope: {}", fit.intercept, fit.slope);
            let _ = writeln!(
                text,
                "se_intercept: {}\nse_slope: {}",
                fit.se_intercept, fit.se_slope
            );
            let _ = writeln!(text, "t_slope: {}\np_slope: {}", fit.t_slope, fit.p_slope);
            let _ = writeln!(
                text,
                "sigma2_residual: {}\nsigma2_group: {}",
                fit.sigma2_residual, fit.sigma2_group
            );
            let _ = writeln!(
                text,
                "theta: {}\nn: {}\nn_groups: {}",
                fit.theta, fit.n, fit.n_groups
            );
            let _ = writeln!(
                text,
                "converged: {}\ndegenerate_grouping: {}",
                fit.converged, fit.degenerate_grouping
            );
            let _ = writeln!(text, "loglik: {}", fit.loglik);
            for d in &fit.diagnostics {
                let _ = writeln!(text, "diagnostic: {d}");
            }
        }
        self.write(&format!("regress_{subset}.txt"), text.as_bytes())?;
        let header = self.header_json(
            &format!("regress-{subset}"),
            serde_json::json!({ "group_by": group, "rows": report.n_rows, "distractor_r": report.distractor_r }),
        );
        self.write(
            &format!("regress_{subset}.jsonl"),
            &jsonl(&header, &[&report.ols, &report.mixed])?,
        )?;
        Ok(report)
    }

    pub fn simulate(&self) -> Result<SimulationReport> {
        let report = self.analysis()?.simulate()?;
        let rows = report.results.iter().map(|r| {
            vec![
                r.variant.to_string(),
                r.accuracy.to_string(),
                r.i_l.to_string(),
                r.n_interactions.to_string(),
                r.vocab_size.to_string(),
            ]
        });
        let header = format!(
            "{} entries={} skipped={} tied={}",
            self.header_line("simulation"),
            report.entries,
            report.skipped,
            report.tied
        );
        self.write(
            "simulation.tsv",
            &tsv(
                &header,
                &["variant", "accuracy", "i_l", "n_interactions", "vocab_size"],
                rows,
            )?,
        )?;
        let header = self.header_json(
            "simulation",
            serde_json::json!({ "entries": report.entries, "skipped": report.skipped, "tied": report.tied }),
        );
        self.write("simulation.jsonl", &jsonl(&header, &report.results)?)?;
        Ok(report)
    }

    pub fn stimuli(&self, n: usize, bins: usize) -> Result<StimulusSet> {
        let a = self.analysis()?;
        let entries = a.entries();
        let set = simulate::generate_stimuli(
            &a.rounds,
            &entries.entries,
            &a.infos,
            n,
            bins,
            derive_seed(self.config.seed, "stimuli"),
        )?;
        let hex = |c: crate::colorspace::LabColor| c.to_srgb_clamped().to_hex();
        let rows = set.stimuli.iter().map(|s| {
            let mut v = vec![
                s.bin.to_string(),
                s.ease.to_string(),
                s.rebalanced.to_string(),
                s.target_key.to_string(),
                s.actual_name.clone(),
                s.actual_i_w.to_string(),
                opt(&s.simulated_general),
                opt(&s.simulated_specific),
                hex(s.target),
                hex(s.distractor1),
                hex(s.distractor2),
            ];
            v.extend(lab_cols(s.target));
            v.extend(lab_cols(s.distractor1));
            v.extend(lab_cols(s.distractor2));
            v.push(s.game_id.clone());
            v.push(s.round_index.to_string());
            v
        });
        let cols = [
            "bin",
            "ease",
            "rebalanced",
            "target_key",
            "actual_name",
            "actual_i_w",
            "simulated_general",
            "simulated_specific",
            "target_hex",
            "d1_hex",
            "d2_hex",
            "target_l",
            "target_a",
            "target_b",
            "d1_l",
            "d1_a",
            "d1_b",
            "d2_l",
            "d2_a",
            "d2_b",
            "game_id",
            "round_index",
        ];
        let underpop = set
            .underpopulated_bins
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let header = format!(
            "{} n={n} bins={bins} underpopulated_bins={}",
            self.header_line("stimuli"),
            if underpop.is_empty() {
                "none"
            } else {
                &underpop
            }
        );
        self.write("stimuli.tsv", &tsv(&header, &cols, rows)?)?;
        let header = self.header_json(
            "stimuli",
            serde_json::json!({
                "n": n, "bins": bins, "eligible": set.eligible,
                "ease_min": set.ease_min, "ease_max": set.ease_max,
                "underpopulated_bins": set.underpopulated_bins,
            }),
        );
        self.write("stimuli.jsonl", &jsonl(&header, &set.stimuli)?)?;
        Ok(set)
    }

    pub fn plot(&self, kind: &PlotKind) -> Result<PathBuf> {
        let a = self.analysis()?;
        match kind {
            PlotKind::Denotation(words) => {
                if words.is_empty() {
                    return Err(Error::InvalidArgument(
                        "denotation plot needs at least one word".into(),
                    ));
                }
                let series = words
                    .iter()
                    .map(|w| {
                        let d = a
                            .denotations
                            .get(w)
                            .ok_or_else(|| Error::UnknownWord(w.clone()))?;
                        Ok(DenotationSeries {
                            word: w,
                            chips: &d.chips,
                            i_w: a.infos.get(w).map(|i| i.i_w),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let svg = plot::denotation_svg(&series, &self.header_line("denotation-plot"));
                self.write(
                    &format!("denotation_{}.svg", words.join("_")),
                    svg.as_bytes(),
                )
            }
            PlotKind::EaseVsIw(subset) => {
                let points: Vec<(f64, f64)> = a
                    .subset(*subset)
                    .iter()
                    .filter_map(|r| a.infos.get(&r.word).map(|i| (r.context_ease, i.i_w)))
                    .collect();
                let svg = plot::ease_vs_iw_svg(&points, &self.header_line("ease-vs-iw-plot"));
                self.write(&format!("ease_vs_iw_{subset}.svg"), svg.as_bytes())
            }
        }
    }
}
