//! JSONL batch processing behind the command-line tool.
//!
//! Every input line is one JSON object. Per-record commands (`analyze`,
//! `select`, `canon`) echo the record with added fields; failures add
//! `error` (a short kind) and `error_detail` instead and never stop the
//! stream. Aggregating commands (`score`, `compare`) produce one report.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::evalkit::{score_reasoning_with, AccuracyAccumulator, AccuracyReport, ComparisonAccumulator, ComparisonReport};
use crate::matchsel::{Matcher, SetScore};
use crate::rationale::{parse_rationale, ComponentKind, Format, Rationale};
use crate::smiles::{canonicalize, parse};
use crate::structure::{extract_profile_with, Catalog};

#[derive(Debug, Clone)]
pub struct Options {
    /// Components written by `analyze`.
    pub components: BTreeSet<ComponentKind>,
    pub format: Format,
    /// Components kept by `select` before scoring; all when `None`.
    pub reliable: Option<BTreeSet<ComponentKind>>,
    pub set_score: SetScore,
    pub catalog: Catalog,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            components: ComponentKind::ALL.into_iter().collect(),
            format: Format::Prose,
            reliable: None,
            set_score: SetScore::Jaccard,
            catalog: Catalog::builtin().clone(),
        }
    }
}

/// Result of one input line.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordOutput {
    pub record: Value,
    pub ok: bool,
}

struct RecordError {
    kind: &'static str,
    detail: String,
}

impl RecordError {
    fn new(kind: &'static str, detail: impl Into<String>) -> Self {
        RecordError {
            kind,
            detail: detail.into(),
        }
    }
}

fn read_record(line: &str) -> Result<Map<String, Value>, RecordError> {
    match serde_json::from_str::<Value>(line) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(RecordError::new("MalformedRecord", "expected a JSON object")),
        Err(e) => Err(RecordError::new("MalformedJson", e.to_string())),
    }
}

fn text_field<'a>(rec: &'a Map<String, Value>, key: &str) -> Result<&'a str, RecordError> {
    match rec.get(key) {
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(RecordError::new("MalformedRecord", format!("`{key}` must be a string"))),
        None => Err(RecordError::new("MissingField", format!("missing `{key}`"))),
    }
}

fn optional_text<'a>(rec: &'a Map<String, Value>, key: &str) -> Option<&'a str> {
    rec.get(key).and_then(Value::as_str)
}

fn parse_smiles(smiles: &str) -> Result<crate::graph::Molecule, RecordError> {
    parse(smiles).map_err(|e| RecordError::new(e.kind.as_str(), e.to_string()))
}

/// The `rationale` field, as rendered text or as a JSON object.
fn rationale_field(rec: &Map<String, Value>) -> Result<Rationale, RecordError> {
    let text = match rec.get("rationale") {
        Some(Value::String(s)) => s.clone(),
        Some(v @ Value::Object(_)) => v.to_string(),
        Some(_) => return Err(RecordError::new("MalformedRecord", "`rationale` must be a string or object")),
        None => return Err(RecordError::new("MissingField", "missing `rationale`")),
    };
    parse_rationale(&text).map_err(|e| RecordError::new("BadRationale", e.to_string()))
}

fn finish(line: &str, f: impl FnOnce(&mut Map<String, Value>) -> Result<(), RecordError>) -> RecordOutput {
    let mut rec = match read_record(line) {
        Ok(r) => r,
        Err(e) => {
            return RecordOutput {
                record: json!({"error": e.kind, "error_detail": e.detail}),
                ok: false,
            }
        }
    };
    match f(&mut rec) {
        Ok(()) => RecordOutput {
            record: Value::Object(rec),
            ok: true,
        },
        Err(e) => {
            rec.insert("error".into(), json!(e.kind));
            rec.insert("error_detail".into(), json!(e.detail));
            RecordOutput {
                record: Value::Object(rec),
                ok: false,
            }
        }
    }
}

/// Adds `rationale` rendered from the record's `smiles`. The IUPAC name
/// is included only when the record carries `iupac_name`.
pub fn analyze_record(line: &str, opts: &Options) -> RecordOutput {
    finish(line, |rec| {
        let mol = parse_smiles(text_field(rec, "smiles")?)?;
        let profile = extract_profile_with(&mol, &opts.catalog);
        let r = Rationale::from_profile(&profile, optional_text(rec, "iupac_name")).restricted(&opts.components);
        let text = r
            .render(opts.format)
            .map_err(|e| RecordError::new("EmptyRationale", e.to_string()))?;
        rec.insert("rationale".into(), json!(text));
        Ok(())
    })
}

/// Adds `selected_smiles`, `selected_index`, `matching_ratios` (null for
/// candidates that do not parse) and `all_invalid`.
pub fn select_record(line: &str, opts: &Options) -> RecordOutput {
    finish(line, |rec| {
        let mut r = rationale_field(rec)?;
        if let Some(keep) = &opts.reliable {
            r = r.restricted(keep);
        }
        let candidates: Vec<String> = match rec.get("candidates") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| RecordError::new("MalformedRecord", "`candidates` must be strings"))?,
            Some(_) => return Err(RecordError::new("MalformedRecord", "`candidates` must be an array")),
            None => return Err(RecordError::new("MissingField", "missing `candidates`")),
        };
        if candidates.is_empty() {
            return Err(RecordError::new("NoCandidates", "`candidates` is empty"));
        }
        let mut matcher = Matcher::new(&opts.catalog);
        matcher.set_score = opts.set_score;
        let report = matcher
            .select(&r, &candidates)
            .map_err(|e| RecordError::new("EmptyRationale", e.to_string()))?;
        let ratios: Vec<Value> = report
            .per_candidate
            .iter()
            .map(|c| c.matching_ratio.map_or(Value::Null, |x| json!(x)))
            .collect();
        rec.insert("selected_smiles".into(), json!(report.selected_smiles));
        rec.insert("selected_index".into(), json!(report.selected_index));
        rec.insert("matching_ratios".into(), Value::Array(ratios));
        rec.insert("all_invalid".into(), json!(report.all_invalid));
        Ok(())
    })
}

/// Adds `canonical_smiles`.
pub fn canon_record(line: &str, _opts: &Options) -> RecordOutput {
    finish(line, |rec| {
        let mol = parse_smiles(text_field(rec, "smiles")?)?;
        rec.insert("canonical_smiles".into(), json!(canonicalize(&mol)));
        Ok(())
    })
}

/// Scores one `gold_smiles` + `rationale` record. Records that cannot be
/// scored count towards `n_records` only.
pub fn score_record(line: &str, opts: &Options, acc: &mut AccuracyAccumulator) -> Result<(), String> {
    let result = (|| {
        let rec = read_record(line)?;
        let gold = parse_smiles(text_field(&rec, "gold_smiles")?)?;
        let r = rationale_field(&rec)?;
        score_reasoning_with(&gold, &r, optional_text(&rec, "iupac_name"), opts.set_score, &opts.catalog)
            .map_err(|e| RecordError::new("EmptyRationale", e.to_string()))
    })();
    match result {
        Ok(scores) => {
            acc.add(Some(&scores));
            Ok(())
        }
        Err(e) => {
            acc.add(None);
            Err(format!("{}: {}", e.kind, e.detail))
        }
    }
}

pub fn compare_record(line: &str, acc: &mut ComparisonAccumulator) -> Result<(), String> {
    let result = (|| {
        let rec = read_record(line)?;
        let gold = text_field(&rec, "gold_smiles")?.to_string();
        let pred = text_field(&rec, "predicted_smiles")?.to_string();
        Ok::<_, RecordError>((gold, pred))
    })();
    match result {
        Ok((g, p)) => {
            acc.add(&g, &p);
            Ok(())
        }
        Err(e) => Err(format!("{}: {}", e.kind, e.detail)),
    }
}

fn nonblank(lines: &[String]) -> Vec<&str> {
    lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()).collect()
}

/// Applies a per-record command to every non-blank line in parallel,
/// returning outputs in input order.
pub fn map_records(lines: &[String], opts: &Options, f: fn(&str, &Options) -> RecordOutput) -> Vec<RecordOutput> {
    nonblank(lines).into_par_iter().map(|l| f(l, opts)).collect()
}

/// Warnings carry the 1-based index of the non-blank record.
pub fn score_records(lines: &[String], opts: &Options) -> (AccuracyReport, Vec<String>) {
    let (acc, warnings) = nonblank(lines)
        .into_par_iter()
        .enumerate()
        .map(|(i, l)| {
            let mut acc = AccuracyAccumulator::new();
            let w = score_record(l, opts, &mut acc).err().map(|e| format!("record {}: {e}", i + 1));
            (acc, w.into_iter().collect::<Vec<_>>())
        })
        .reduce(
            || (AccuracyAccumulator::new(), Vec::new()),
            |(a, mut wa), (b, wb)| {
                wa.extend(wb);
                (a.merge(b), wa)
            },
        );
    (acc.finish(), warnings)
}

pub fn compare_records(lines: &[String]) -> (ComparisonReport, Vec<String>) {
    let (acc, warnings) = nonblank(lines)
        .into_par_iter()
        .enumerate()
        .map(|(i, l)| {
            let mut acc = ComparisonAccumulator::new();
            let w = compare_record(l, &mut acc).err().map(|e| format!("record {}: {e}", i + 1));
            (acc, w.into_iter().collect::<Vec<_>>())
        })
        .reduce(
            || (ComparisonAccumulator::new(), Vec::new()),
            |(a, mut wa), (b, wb)| {
                wa.extend(wb);
                (a.merge(b), wa)
            },
        );
    (acc.finish(), warnings)
}
