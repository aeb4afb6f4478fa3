//! Matching ratio between a rationale and a candidate molecule, and
//! rejection sampling over beam candidates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::Molecule;
use crate::rationale::{ComponentKind, ComponentValue, Rationale, RationaleError};
use crate::smiles::parse;
use crate::structure::{extract_profile_with, Catalog, StructuralProfile};

/// Beam width that suffices in practice.
pub const DEFAULT_K: usize = 5;

/// How a multiset component is scored against the reference multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SetScore {
    /// |a ∩ b| / |a ∪ b|, 1 when both are empty.
    #[default]
    Jaccard,
    /// |a ∩ b| / |reference|, 1 when the reference is empty.
    Recall,
}

fn counts(names: &[String]) -> BTreeMap<&str, usize> {
    let mut m = BTreeMap::new();
    for n in names {
        *m.entry(n.as_str()).or_default() += 1;
    }
    m
}

/// Multiset overlap of `predicted` against `reference`.
pub fn set_score(reference: &[String], predicted: &[String], how: SetScore) -> f64 {
    let (r, p) = (counts(reference), counts(predicted));
    let inter: usize = r.iter().map(|(k, &c)| c.min(p.get(k).copied().unwrap_or(0))).sum();
    let denom = match how {
        SetScore::Jaccard => {
            let keys: BTreeSet<&str> = r.keys().chain(p.keys()).copied().collect();
            keys.iter()
                .map(|k| r.get(k).copied().unwrap_or(0).max(p.get(k).copied().unwrap_or(0)))
                .sum()
        }
        SetScore::Recall => reference.len(),
    };
    if denom == 0 {
        1.0
    } else {
        inter as f64 / denom as f64
    }
}

/// 1 when `value` lies within 95–105% of `reference`, inclusive.
pub fn weight_score(reference: f64, value: f64) -> f64 {
    if value >= 0.95 * reference && value <= 1.05 * reference {
        1.0
    } else {
        0.0
    }
}

/// Score of one claimed component against a molecule's profile, or `None`
/// when the component cannot be checked (an IUPAC name with no reference
/// name). `weight_reference_is_claim` selects which side the 95–105%
/// window is centred on.
pub fn score_component(
    kind: ComponentKind,
    claimed: &ComponentValue,
    actual: &StructuralProfile,
    actual_iupac: Option<&str>,
    how: SetScore,
    weight_reference_is_claim: bool,
) -> Option<f64> {
    use ComponentValue as V;
    let exact = |b: bool| if b { 1.0 } else { 0.0 };
    Some(match (kind, claimed) {
        (ComponentKind::Formula, V::Text(f)) => exact(*f == actual.formula),
        (ComponentKind::LongestChain, V::Count(n)) => exact(*n == actual.longest_chain),
        (ComponentKind::AromaticRings, V::Count(n)) => exact(*n == actual.aromatic_ring_count),
        (ComponentKind::RingCompounds, V::Names(v)) => set_score(&actual.ring_names(), v, how),
        (ComponentKind::FunctionalGroups, V::Names(v)) => set_score(&actual.group_names(), v, how),
        (ComponentKind::Chirality, V::Chirality(c)) => {
            let mut claimed: Vec<_> = c.iter().map(|c| c.config).collect();
            claimed.sort();
            exact(claimed == actual.configurations())
        }
        (ComponentKind::MolecularWeight, V::Weight(w)) => {
            if weight_reference_is_claim {
                weight_score(*w, actual.molecular_weight)
            } else {
                weight_score(actual.molecular_weight, *w)
            }
        }
        (ComponentKind::IupacName, V::Text(name)) => {
            exact(actual_iupac?.trim().eq_ignore_ascii_case(name.trim()))
        }
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchScore {
    pub ratio: f64,
    pub per_component: BTreeMap<ComponentKind, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    pub smiles: String,
    pub parse_ok: bool,
    /// `None` for candidates that do not parse; they rank below every
    /// parseable one.
    pub matching_ratio: Option<f64>,
    pub per_component: BTreeMap<ComponentKind, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub per_candidate: Vec<CandidateScore>,
    pub selected_index: usize,
    pub selected_smiles: String,
    /// No candidate parsed; the first one was returned.
    pub all_invalid: bool,
}

/// Scoring settings. Component weights default to 1.
#[derive(Debug, Clone)]
pub struct Matcher<'c> {
    pub catalog: &'c Catalog,
    pub set_score: SetScore,
    pub weights: BTreeMap<ComponentKind, f64>,
}

impl Default for Matcher<'static> {
    fn default() -> Self {
        Matcher::new(Catalog::builtin())
    }
}

impl<'c> Matcher<'c> {
    pub fn new(catalog: &'c Catalog) -> Self {
        Matcher {
            catalog,
            set_score: SetScore::Jaccard,
            weights: BTreeMap::new(),
        }
    }

    fn weight(&self, kind: ComponentKind) -> f64 {
        self.weights.get(&kind).copied().unwrap_or(1.0)
    }

    /// Weighted mean of the component scores over the rationale's mask.
    /// IUPAC names are not checked, since names are never generated.
    pub fn matching_ratio(&self, rationale: &Rationale, candidate: &Molecule) -> Result<MatchScore, RationaleError> {
        let profile = extract_profile_with(candidate, self.catalog);
        self.score_profile(rationale, &profile)
    }

    pub fn score_profile(&self, rationale: &Rationale, profile: &StructuralProfile) -> Result<MatchScore, RationaleError> {
        let mut per_component = BTreeMap::new();
        let (mut sum, mut total) = (0.0, 0.0);
        for (kind, value) in rationale.components() {
            if let Some(s) = score_component(kind, value, profile, None, self.set_score, true) {
                per_component.insert(kind, s);
                sum += self.weight(kind) * s;
                total += self.weight(kind);
            }
        }
        if per_component.is_empty() || total <= 0.0 {
            return Err(RationaleError::EmptyRationale);
        }
        Ok(MatchScore {
            ratio: sum / total,
            per_component,
        })
    }

    /// Scores every candidate and keeps the best parseable one; ties go to
    /// the earlier (higher beam rank) candidate.
    pub fn select<S: AsRef<str>>(&self, rationale: &Rationale, candidates: &[S]) -> Result<SelectionReport, RationaleError> {
        if rationale.is_empty() {
            return Err(RationaleError::EmptyRationale);
        }
        let mut per_candidate = Vec::with_capacity(candidates.len());
        for smiles in candidates {
            let smiles = smiles.as_ref().to_string();
            let scored = match parse(&smiles) {
                Ok(mol) => {
                    let s = self.matching_ratio(rationale, &mol)?;
                    CandidateScore {
                        smiles,
                        parse_ok: true,
                        matching_ratio: Some(s.ratio),
                        per_component: s.per_component,
                        parse_error: None,
                    }
                }
                Err(e) => CandidateScore {
                    smiles,
                    parse_ok: false,
                    matching_ratio: None,
                    per_component: BTreeMap::new(),
                    parse_error: Some(e.to_string()),
                },
            };
            per_candidate.push(scored);
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in per_candidate.iter().enumerate() {
            if let Some(r) = c.matching_ratio {
                if best.is_none_or(|(_, b)| r > b) {
                    best = Some((i, r));
                }
            }
        }
        let selected_index = best.map_or(0, |(i, _)| i);
        Ok(SelectionReport {
            selected_smiles: per_candidate
                .get(selected_index)
                .map(|c| c.smiles.clone())
                .unwrap_or_default(),
            all_invalid: best.is_none(),
            selected_index,
            per_candidate,
        })
    }
}

pub fn matching_ratio(rationale: &Rationale, candidate: &Molecule) -> Result<MatchScore, RationaleError> {
    Matcher::default().matching_ratio(rationale, candidate)
}

pub fn select<S: AsRef<str>>(rationale: &Rationale, candidates: &[S]) -> Result<SelectionReport, RationaleError> {
    Matcher::default().select(rationale, candidates)
}

/// Keeps only the components judged reliable. The result may be empty.
pub fn apply_reliability_mask(rationale: &Rationale, reliable: &BTreeSet<ComponentKind>) -> Rationale {
    rationale.restricted(reliable)
}
