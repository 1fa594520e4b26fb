//! Delimiter-separated corpus ingestion driven by a column mapping.
//!
//! Two color layouts are supported. `fixed` names the target and distractor
//! columns directly (the canonical fixture layout). `slots` reads three
//! interchangeable chip slots, each with its own status column, and picks the
//! target as the slot whose status equals `target_status`; this matches corpora
//! that store the clicked chip and the alternatives rather than the roles.
//!
//! Rows sharing a `(game_id, round_index)` pair are merged into one round,
//! utterances joined in file order, so multi-message rounds fail the
//! single-word filter downstream.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Language, RawRound};
use crate::colorspace::HslColor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HslColumns {
    pub h: String,
    pub s: String,
    pub l: String,
}

impl HslColumns {
    fn prefixed(prefix: &str) -> Self {
        Self {
            h: format!("{prefix}_h"),
            s: format!("{prefix}_s"),
            l: format!("{prefix}_l"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotColumns {
    pub status: String,
    pub h: String,
    pub s: String,
    pub l: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case")]
pub enum ColorLayout {
    Fixed {
        target: HslColumns,
        distractor1: HslColumns,
        distractor2: HslColumns,
    },
    Slots {
        slots: [SlotColumns; 3],
        target_status: String,
    },
}

impl Default for ColorLayout {
    fn default() -> Self {
        ColorLayout::Fixed {
            target: HslColumns::prefixed("target"),
            distractor1: HslColumns::prefixed("d1"),
            distractor2: HslColumns::prefixed("d2"),
        }
    }
}

/// Keep only rows whose `column` equals `value` (e.g. speaker messages).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleFilter {
    pub column: String,
    pub value: String,
}

/// Maps `RawRound` fields onto corpus columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schema {
    pub delimiter: char,
    pub game_id: String,
    pub round_index: String,
    pub utterance: String,
    pub listener_correct: String,
    pub speaker_id: Option<String>,
    pub language: Option<String>,
    pub role: Option<RoleFilter>,
    /// Divisor turning stored saturation into a fraction (100 for percents).
    pub saturation_scale: f64,
    pub lightness_scale: f64,
    pub colors: ColorLayout,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            delimiter: ',',
            game_id: "game_id".into(),
            round_index: "round_index".into(),
            utterance: "utterance".into(),
            listener_correct: "listener_correct".into(),
            speaker_id: Some("speaker_id".into()),
            language: None,
            role: None,
            saturation_scale: 1.0,
            lightness_scale: 1.0,
            colors: ColorLayout::default(),
        }
    }
}

/// A data row that could not be turned into a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    /// 1-based line number in the source file (header is line 1).
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub rounds: Vec<RawRound>,
    pub rejects: Vec<Reject>,
    /// Rows skipped by the role filter.
    pub filtered: usize,
    /// Data rows read, before filtering.
    pub rows: usize,
}

struct Resolved {
    game_id: usize,
    round_index: usize,
    utterance: usize,
    listener_correct: usize,
    speaker_id: Option<usize>,
    language: Option<usize>,
    role: Option<(usize, String)>,
    colors: ResolvedColors,
}

type Hsl = [usize; 3];

enum ResolvedColors {
    Fixed([Hsl; 3]),
    Slots {
        slots: [(usize, Hsl); 3],
        target_status: String,
    },
}

fn resolve(schema: &Schema, headers: &csv::StringRecord) -> Result<Resolved> {
    let find = |field: &str, column: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == column)
            .ok_or_else(|| Error::MissingColumn {
                field: field.to_string(),
                column: column.to_string(),
            })
    };
    let hsl = |field: &str, c: &HslColumns| -> Result<Hsl> {
        Ok([
            find(&format!("{field}.h"), &c.h)?,
            find(&format!("{field}.s"), &c.s)?,
            find(&format!("{field}.l"), &c.l)?,
        ])
    };
    let colors = match &schema.colors {
        ColorLayout::Fixed {
            target,
            distractor1,
            distractor2,
        } => ResolvedColors::Fixed([
            hsl("target", target)?,
            hsl("distractor1", distractor1)?,
            hsl("distractor2", distractor2)?,
        ]),
        ColorLayout::Slots {
            slots,
            target_status,
        } => {
            let mut out = [(0, [0; 3]); 3];
            for (i, slot) in slots.iter().enumerate() {
                let name = format!("slot{}", i + 1);
                out[i] = (
                    find(&format!("{name}.status"), &slot.status)?,
                    [
                        find(&format!("{name}.h"), &slot.h)?,
                        find(&format!("{name}.s"), &slot.s)?,
                        find(&format!("{name}.l"), &slot.l)?,
                    ],
                );
            }
            ResolvedColors::Slots {
                slots: out,
                target_status: target_status.clone(),
            }
        }
    };
    Ok(Resolved {
        game_id: find("game_id", &schema.game_id)?,
        round_index: find("round_index", &schema.round_index)?,
        utterance: find("utterance", &schema.utterance)?,
        listener_correct: find("listener_correct", &schema.listener_correct)?,
        speaker_id: schema
            .speaker_id
            .as_deref()
            .map(|c| find("speaker_id", c))
            .transpose()?,
        language: schema
            .language
            .as_deref()
            .map(|c| find("language", c))
            .transpose()?,
        role: schema
            .role
            .as_ref()
            .map(|r| find("role", &r.column).map(|i| (i, r.value.clone())))
            .transpose()?,
        colors,
    })
}

fn parse_bool(raw: &str) -> std::result::Result<bool, String> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "y" | "correct" | "t" => Ok(true),
        "false" | "0" | "no" | "n" | "incorrect" | "f" => Ok(false),
        other => Err(format!("unparsable listener_correct `{other}`")),
    }
}

fn field<'r>(
    rec: &'r csv::StringRecord,
    idx: usize,
    name: &str,
) -> std::result::Result<&'r str, String> {
    rec.get(idx)
        .map(str::trim)
        .ok_or_else(|| format!("row too short: no value for {name}"))
}

fn parse_num(rec: &csv::StringRecord, idx: usize, name: &str) -> std::result::Result<f64, String> {
    let raw = field(rec, idx, name)?;
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("unparsable {name} `{raw}`"))
}

fn parse_color(
    rec: &csv::StringRecord,
    cols: &Hsl,
    name: &str,
    schema: &Schema,
) -> std::result::Result<HslColor, String> {
    let h = parse_num(rec, cols[0], &format!("{name} hue"))?;
    let s = parse_num(rec, cols[1], &format!("{name} saturation"))? / schema.saturation_scale;
    let l = parse_num(rec, cols[2], &format!("{name} lightness"))? / schema.lightness_scale;
    HslColor::new(h, s, l).map_err(|e| format!("{name}: {e}"))
}

fn parse_row(
    rec: &csv::StringRecord,
    cols: &Resolved,
    schema: &Schema,
    default_language: Language,
) -> std::result::Result<RawRound, String> {
    let game_id = field(rec, cols.game_id, "game_id")?.to_string();
    let raw_idx = field(rec, cols.round_index, "round_index")?;
    let round_index = raw_idx
        .parse::<u32>()
        .map_err(|_| format!("unparsable round_index `{raw_idx}`"))?;
    let utterance = field(rec, cols.utterance, "utterance")?.to_string();
    let listener_correct = parse_bool(field(rec, cols.listener_correct, "listener_correct")?)?;
    let speaker_id = match cols.speaker_id {
        Some(i) => Some(field(rec, i, "speaker_id")?.to_string()).filter(|s| !s.is_empty()),
        None => None,
    };
    let language = match cols.language {
        Some(i) => field(rec, i, "language")?.parse::<Language>()?,
        None => default_language,
    };
    let (target, distractor1, distractor2) = match &cols.colors {
        ResolvedColors::Fixed([t, d1, d2]) => (
            parse_color(rec, t, "target", schema)?,
            parse_color(rec, d1, "distractor1", schema)?,
            parse_color(rec, d2, "distractor2", schema)?,
        ),
        ResolvedColors::Slots {
            slots,
            target_status,
        } => {
            let mut target = None;
            let mut others = Vec::with_capacity(2);
            for (i, (status_col, hsl)) in slots.iter().enumerate() {
                let name = format!("slot{}", i + 1);
                let color = parse_color(rec, hsl, &name, schema)?;
                if field(rec, *status_col, "status")? == target_status {
                    if target.replace(color).is_some() {
                        return Err("more than one target slot".into());
                    }
                } else {
                    others.push(color);
                }
            }
            let target = target.ok_or("no slot has the target status")?;
            (target, others[0], others[1])
        }
    };
    Ok(RawRound {
        game_id,
        round_index,
        utterance,
        target,
        distractor1,
        distractor2,
        listener_correct,
        speaker_id,
        language,
    })
}

/// Parse rounds from any reader. Rows that fail the schema land in
/// `rejects`; a missing mapped column fails the whole call.
pub fn ingest_reader<R: Read>(
    reader: R,
    schema: &Schema,
    language: Language,
) -> Result<IngestReport> {
    if !schema.delimiter.is_ascii() {
        return Err(Error::Config(format!(
            "delimiter `{}` must be a single ASCII character",
            schema.delimiter
        )));
    }
    for (name, v) in [
        ("saturation_scale", schema.saturation_scale),
        ("lightness_scale", schema.lightness_scale),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Config(format!("{name} must be positive, got {v}")));
        }
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .flexible(true)
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let cols = resolve(schema, &headers)?;

    let mut report = IngestReport::default();
    let mut by_key: HashMap<(String, u32), usize> = HashMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line() + 1;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                // malformed quoting or bad utf-8: report and keep going
                report.rows += 1;
                report.rejects.push(Reject {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        }
        report.rows += 1;
        let line = record.position().map_or(line, |p| p.line());
        if let Some((idx, want)) = &cols.role {
            if record.get(*idx).map(str::trim) != Some(want.as_str()) {
                report.filtered += 1;
                continue;
            }
        }
        match parse_row(&record, &cols, schema, language) {
            Ok(round) => {
                let key = (round.game_id.clone(), round.round_index);
                match by_key.get(&key) {
                    Some(&i) => {
                        let merged = &mut report.rounds[i].utterance;
                        merged.push(' ');
                        merged.push_str(&round.utterance);
                    }
                    None => {
                        by_key.insert(key, report.rounds.len());
                        report.rounds.push(round);
                    }
                }
            }
            Err(reason) => report.rejects.push(Reject { line, reason }),
        }
    }
    Ok(report)
}

pub fn ingest(path: &Path, schema: &Schema, language: Language) -> Result<IngestReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(file, schema, language)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "game_id,round_index,utterance,target_h,target_s,target_l,d1_h,d1_s,d1_l,d2_h,d2_s,d2_l,listener_correct,speaker_id\n";

    fn run(body: &str) -> IngestReport {
        let text = format!("{HEADER}{body}");
        ingest_reader(text.as_bytes(), &Schema::default(), Language::English).unwrap()
    }

    #[test]
    fn empty_file_yields_nothing() {
        let r = run("");
        assert!(r.rounds.is_empty() && r.rejects.is_empty());
    }

    #[test]
    fn three_rows() {
        let r = run("g1,0,blue,200,0.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n\
             g1,1,purple,280,0.6,0.4,20,0.5,0.5,120,0.5,0.5,false,w1\n\
             g2,0,the green one,120,0.5,0.5,10,0.5,0.5,300,0.5,0.5,1,w2\n");
        assert_eq!(r.rounds.len(), 3);
        assert!(r.rejects.is_empty());
        assert!(!r.rounds[1].listener_correct);
        assert_eq!(r.rounds[2].speaker_id.as_deref(), Some("w2"));
    }

    #[test]
    fn bad_hue_is_rejected_with_line() {
        let r = run("g1,0,blue,200,0.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n\
             g1,1,blue,abc,0.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n");
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.rejects.len(), 1);
        assert_eq!(r.rejects[0].line, 3);
        assert!(
            r.rejects[0].reason.contains("hue"),
            "{}",
            r.rejects[0].reason
        );
    }

    #[test]
    fn out_of_range_is_rejected_not_clamped() {
        let r = run("g1,0,blue,200,1.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n");
        assert!(r.rounds.is_empty());
        assert!(r.rejects[0].reason.contains("saturation"));
    }

    #[test]
    fn missing_column_names_it() {
        let text = "game_id,round_index,utterance\ng,0,x\n";
        let err =
            ingest_reader(text.as_bytes(), &Schema::default(), Language::English).unwrap_err();
        match err {
            Error::MissingColumn { column, .. } => assert_eq!(column, "target_h"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeated_round_merges_utterances() {
        let r = run("g1,0,blue,200,0.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n\
             g1,0,sorry,200,0.5,0.5,10,0.5,0.5,100,0.5,0.5,true,w1\n");
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.rounds[0].utterance, "blue sorry");
    }

    #[test]
    fn slot_layout_with_role_filter() {
        let slot = |p: &str| SlotColumns {
            status: format!("{p}Status"),
            h: format!("{p}ColH"),
            s: format!("{p}ColS"),
            l: format!("{p}ColL"),
        };
        let schema = Schema {
            game_id: "gameid".into(),
            round_index: "roundNum".into(),
            utterance: "contents".into(),
            listener_correct: "outcome".into(),
            speaker_id: Some("workerid_uniq".into()),
            role: Some(RoleFilter {
                column: "role".into(),
                value: "speaker".into(),
            }),
            saturation_scale: 100.0,
            lightness_scale: 100.0,
            colors: ColorLayout::Slots {
                slots: [slot("click"), slot("alt1"), slot("alt2")],
                target_status: "target".into(),
            },
            ..Schema::default()
        };
        let text = "gameid,roundNum,clickStatus,clickColH,clickColS,clickColL,alt1Status,alt1ColH,alt1ColS,alt1ColL,alt2Status,alt2ColH,alt2ColS,alt2ColL,outcome,role,contents,workerid_uniq\n\
                    g,1,distr1,10,50,50,target,200,40,60,distr2,100,50,50,True,speaker,teal,7\n\
                    g,1,distr1,10,50,50,target,200,40,60,distr2,100,50,50,True,listener,ok,8\n";
        let r = ingest_reader(text.as_bytes(), &schema, Language::English).unwrap();
        assert_eq!(r.filtered, 1);
        assert_eq!(r.rounds.len(), 1);
        let round = &r.rounds[0];
        assert_eq!(round.target, HslColor::new(200.0, 0.4, 0.6).unwrap());
        assert_eq!(round.distractor1.h, 10.0);
        assert_eq!(round.utterance, "teal");
    }

    #[test]
    fn schema_from_toml() {
        let schema: Schema = toml::from_str(
            r#"
            delimiter = "\t"
            utterance = "text"
            [colors]
            layout = "fixed"
            target = { h = "th", s = "ts", l = "tl" }
            distractor1 = { h = "ah", s = "as", l = "al" }
            distractor2 = { h = "bh", s = "bs", l = "bl" }
            "#,
        )
        .unwrap();
        assert_eq!(schema.delimiter, '\t');
        assert_eq!(schema.game_id, "game_id");
        assert!(matches!(schema.colors, ColorLayout::Fixed { .. }));
    }
}
