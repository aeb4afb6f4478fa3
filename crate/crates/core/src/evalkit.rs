//! Reasoning accuracy against a gold molecule, and molecule-generation
//! metrics: exact match, edit distance, fingerprint similarity, validity and
//! character-level BLEU.
//!
//! Corpus aggregates are accumulators with an associative `merge`, so
//! records can be scored in any order or in parallel.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{BondOrder, Molecule};
use crate::matchsel::{score_component, SetScore};
use crate::rationale::{ComponentKind, Rationale, RationaleError};
use crate::smiles::{canonicalize, parse};
use crate::structure::{extract_profile_with, Catalog};

pub const DEFAULT_FP_WIDTH: usize = 2048;
pub const DEFAULT_FP_RADIUS: usize = 2;

/// Per-component scores of a predicted rationale against the gold
/// molecule. The IUPAC name is scored only when a gold name is supplied.
pub fn score_reasoning(
    gold: &Molecule,
    predicted: &Rationale,
    gold_iupac: Option<&str>,
    how: SetScore,
) -> Result<BTreeMap<ComponentKind, f64>, RationaleError> {
    score_reasoning_with(gold, predicted, gold_iupac, how, Catalog::builtin())
}

pub fn score_reasoning_with(
    gold: &Molecule,
    predicted: &Rationale,
    gold_iupac: Option<&str>,
    how: SetScore,
    catalog: &Catalog,
) -> Result<BTreeMap<ComponentKind, f64>, RationaleError> {
    if predicted.is_empty() {
        return Err(RationaleError::EmptyRationale);
    }
    let profile = extract_profile_with(gold, catalog);
    Ok(predicted
        .components()
        .filter_map(|(k, v)| score_component(k, v, &profile, gold_iupac, how, false).map(|s| (k, s)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentAccuracy {
    pub n_scored: usize,
    pub n_correct_or_sum: f64,
    /// `None` when nothing was scored.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub per_component: BTreeMap<ComponentKind, ComponentAccuracy>,
    pub n_records: usize,
}

impl AccuracyReport {
    /// One `key value` line per field, `null` for undefined values.
    pub fn to_flat_text(&self) -> String {
        let mut out = format!("n_records {}\n", self.n_records);
        for (k, a) in &self.per_component {
            let _ = writeln!(out, "{k}.n_scored {}", a.n_scored);
            let _ = writeln!(out, "{k}.n_correct_or_sum {}", a.n_correct_or_sum);
            let _ = writeln!(out, "{k}.accuracy {}", opt(a.accuracy));
        }
        out
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), |x| x.to_string())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AccuracyAccumulator {
    n_records: usize,
    per: BTreeMap<ComponentKind, (usize, f64)>,
}

impl AccuracyAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts one record; `None` for a record that could not be scored.
    pub fn add(&mut self, scores: Option<&BTreeMap<ComponentKind, f64>>) {
        self.n_records += 1;
        for (&k, &s) in scores.into_iter().flatten() {
            let e = self.per.entry(k).or_default();
            e.0 += 1;
            e.1 += s;
        }
    }

    pub fn merge(mut self, other: AccuracyAccumulator) -> AccuracyAccumulator {
        self.n_records += other.n_records;
        for (k, (n, s)) in other.per {
            let e = self.per.entry(k).or_default();
            e.0 += n;
            e.1 += s;
        }
        self
    }

    pub fn finish(&self) -> AccuracyReport {
        let per_component = ComponentKind::ALL
            .into_iter()
            .map(|k| {
                let (n, s) = self.per.get(&k).copied().unwrap_or_default();
                let acc = ComponentAccuracy {
                    n_scored: n,
                    n_correct_or_sum: s,
                    accuracy: (n > 0).then(|| s / n as f64),
                };
                (k, acc)
            })
            .collect();
        AccuracyReport {
            per_component,
            n_records: self.n_records,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("fingerprint width {0} is not a power of two")]
    BadWidth(usize),
    #[error("fingerprint widths differ ({0} vs {1})")]
    WidthMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    words: Vec<u64>,
    width: usize,
    pub radius: usize,
}

impl Fingerprint {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    /// An empty fingerprint of the given width.
    pub fn zeros(width: usize, radius: usize) -> Result<Fingerprint, FingerprintError> {
        if width == 0 || !width.is_power_of_two() {
            return Err(FingerprintError::BadWidth(width));
        }
        Ok(Fingerprint {
            words: vec![0; width.div_ceil(64)],
            width,
            radius,
        })
    }
}

// splitmix64 finaliser, fixed so fingerprints are stable across builds
fn mix(h: u64, v: u64) -> u64 {
    let mut z = h ^ v.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn bond_code(order: BondOrder) -> u64 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// Circular fingerprint: every atom environment up to `radius` bonds,
/// hashed and folded into `width` bits.
pub fn morgan_fingerprint(mol: &Molecule, radius: usize, width: usize) -> Result<Fingerprint, FingerprintError> {
    let mut fp = Fingerprint::zeros(width, radius)?;
    let mut ids: Vec<u64> = (0..mol.num_atoms())
        .map(|i| {
            let a = mol.atom(i);
            [
                u64::from(a.atomic_number()),
                mol.degree(i) as u64,
                (i64::from(a.charge) + 128) as u64,
                u64::from(a.total_h()),
                u64::from(a.aromatic),
                u64::from(mol.is_ring_atom(i)),
            ]
            .into_iter()
            .fold(0, mix)
        })
        .collect();
    for round in 0..=radius {
        if round > 0 {
            ids = (0..mol.num_atoms())
                .map(|i| {
                    let mut env: Vec<(u64, u64)> = mol
                        .neighbors(i)
                        .iter()
                        .map(|nb| (bond_code(mol.bond(nb.bond).order), ids[nb.atom]))
                        .collect();
                    env.sort_unstable();
                    env.into_iter()
                        .fold(mix(round as u64, ids[i]), |h, (b, id)| mix(mix(h, b), id))
                })
                .collect();
        }
        for &id in &ids {
            fp.set((id % width as u64) as usize);
        }
    }
    Ok(fp)
}

/// |a ∧ b| / |a ∨ b|; 1 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.width != b.width {
        return Err(FingerprintError::WidthMismatch(a.width, b.width));
    }
    let (mut and, mut or) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        and += (x & y).count_ones();
        or += (x | y).count_ones();
    }
    Ok(if or == 0 { 1.0 } else { f64::from(and) / f64::from(or) })
}

/// Edit distance over bytes.
pub fn levenshtein(a: &[u8], b: &[u8]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(x != y)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub const BLEU_MAX_N: usize = 4;

/// Corpus BLEU statistics over characters, one reference per hypothesis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BleuStats {
    matches: [u64; BLEU_MAX_N],
    totals: [u64; BLEU_MAX_N],
    hyp_len: u64,
    ref_len: u64,
}

impl BleuStats {
    pub fn add(&mut self, reference: &str, hypothesis: &str) {
        let (r, h) = (reference.as_bytes(), hypothesis.as_bytes());
        self.hyp_len += h.len() as u64;
        self.ref_len += r.len() as u64;
        for n in 1..=BLEU_MAX_N {
            let grams = |s: &[u8]| {
                let mut m: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
                for w in s.windows(n) {
                    *m.entry(w.to_vec()).or_default() += 1;
                }
                m
            };
            let (rg, hg) = (grams(r), grams(h));
            self.totals[n - 1] += h.len().saturating_sub(n - 1) as u64;
            self.matches[n - 1] += hg
                .iter()
                .map(|(g, &c)| c.min(rg.get(g).copied().unwrap_or(0)))
                .sum::<u64>();
        }
    }

    pub fn merge(mut self, other: BleuStats) -> BleuStats {
        for n in 0..BLEU_MAX_N {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        self
    }

    /// Geometric mean of the n-gram precisions times the brevity penalty.
    /// Orders with no hypothesis n-grams at all (every string shorter than
    /// n) are left out of the mean; `None` for an empty corpus.
    pub fn score(&self) -> Option<f64> {
        if self.hyp_len == 0 {
            return if self.ref_len == 0 && self.totals[0] == 0 { None } else { Some(0.0) };
        }
        let mut log_sum = 0.0;
        let mut orders = 0;
        for n in 0..BLEU_MAX_N {
            if self.totals[n] == 0 {
                continue;
            }
            if self.matches[n] == 0 {
                return Some(0.0);
            }
            log_sum += (self.matches[n] as f64 / self.totals[n] as f64).ln();
            orders += 1;
        }
        let bp = if self.hyp_len >= self.ref_len {
            1.0
        } else {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        };
        Some(bp * (log_sum / orders as f64).exp())
    }
}

/// Corpus BLEU of hypotheses against references, paired by position.
pub fn corpus_bleu<R: AsRef<str>, H: AsRef<str>>(references: &[R], hypotheses: &[H]) -> Option<f64> {
    let mut s = BleuStats::default();
    for (r, h) in references.iter().zip(hypotheses) {
        s.add(r.as_ref(), h.as_ref());
    }
    s.score()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRecord {
    /// Both parse and their canonical SMILES agree.
    pub exact: bool,
    /// Between the raw strings.
    pub levenshtein: usize,
    /// 0 when either side fails to parse.
    pub morgan_fts: f64,
    /// The prediction parses.
    pub valid: bool,
}

pub fn compare_molecules(gold: &str, predicted: &str) -> ComparisonRecord {
    let g = parse(gold).ok();
    let p = parse(predicted).ok();
    let (exact, fts) = match (&g, &p) {
        (Some(g), Some(p)) => {
            let fp = |m| morgan_fingerprint(m, DEFAULT_FP_RADIUS, DEFAULT_FP_WIDTH).expect("default width is valid");
            let fts = tanimoto(&fp(g), &fp(p)).expect("same width");
            (canonicalize(g) == canonicalize(p), fts)
        }
        _ => (false, 0.0),
    };
    ComparisonRecord {
        exact,
        levenshtein: levenshtein(gold.as_bytes(), predicted.as_bytes()),
        morgan_fts: fts,
        valid: p.is_some(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub exact: Option<f64>,
    pub levenshtein: Option<f64>,
    pub morgan_fts: Option<f64>,
    pub validity: Option<f64>,
    pub bleu: Option<f64>,
    pub n_records: usize,
}

impl ComparisonReport {
    pub fn to_flat_text(&self) -> String {
        format!(
            "exact {}\nlevenshtein {}\nmorgan_fts {}\nvalidity {}\nbleu {}\nn_records {}\n",
            opt(self.exact),
            opt(self.levenshtein),
            opt(self.morgan_fts),
            opt(self.validity),
            opt(self.bleu),
            self.n_records
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonAccumulator {
    n: usize,
    exact: usize,
    valid: usize,
    levenshtein: u64,
    fts: f64,
    bleu: BleuStats,
}

impl ComparisonAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gold: &str, predicted: &str) -> ComparisonRecord {
        let rec = compare_molecules(gold, predicted);
        self.add_record(&rec, gold, predicted);
        rec
    }

    pub fn add_record(&mut self, rec: &ComparisonRecord, gold: &str, predicted: &str) {
        self.n += 1;
        self.exact += usize::from(rec.exact);
        self.valid += usize::from(rec.valid);
        self.levenshtein += rec.levenshtein as u64;
        self.fts += rec.morgan_fts;
        self.bleu.add(gold, predicted);
    }

    pub fn merge(self, other: ComparisonAccumulator) -> ComparisonAccumulator {
        ComparisonAccumulator {
            n: self.n + other.n,
            exact: self.exact + other.exact,
            valid: self.valid + other.valid,
            levenshtein: self.levenshtein + other.levenshtein,
            fts: self.fts + other.fts,
            bleu: self.bleu.merge(other.bleu),
        }
    }

    pub fn finish(&self) -> ComparisonReport {
        let mean = |x: f64| (self.n > 0).then(|| x / self.n as f64);
        ComparisonReport {
            exact: mean(self.exact as f64),
            levenshtein: mean(self.levenshtein as f64),
            morgan_fts: mean(self.fts),
            validity: mean(self.valid as f64),
            bleu: if self.n > 0 { self.bleu.score() } else { None },
            n_records: self.n,
        }
    }
}
