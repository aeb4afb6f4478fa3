//! Structured rationales: the structural components of a molecule as a list
//! of statements, rendered as fixed-template prose or JSON and parsed back.
//!
//! Templates (version `MSR-template-v1`), in rendering order:
//!
//! | component | sentence |
//! |---|---|
//! | formula | `The molecular formula is C4H10O.` |
//! | longest_chain | `The longest carbon chain has 4 carbons.` |
//! | aromatic_rings | `The molecule has 0 aromatic rings.` |
//! | ring_compounds | `The molecule contains no rings.` / `The molecule contains 3 rings: benzene, 2 x cyclohexane.` |
//! | functional_groups | `The molecule contains no functional groups.` / `The molecule contains 1 functional group: hydroxyl.` |
//! | chirality | `The molecule has no specified chiral centers.` / `The molecule has 2 chiral centers: R at atom 2, S at atom 5.` |
//! | molecular_weight | `The molecular weight is 74.12 g/mol.` |
//! | iupac_name | `The IUPAC name is butan-2-ol.` |
//!
//! Counts of one use the singular noun. Multisets are sorted, joined with
//! `, `, and repeated names are written once as `2 x name`. Chiral atoms
//! are numbered by position in the canonical SMILES.
//!
//! The JSON form is one object with a key per component; multisets are
//! arrays with repeats and chirality is an array of `{"atom", "config"}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::structure::{Configuration, StructuralProfile};

pub const TEMPLATE_VERSION: &str = "MSR-template-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Formula,
    LongestChain,
    AromaticRings,
    RingCompounds,
    FunctionalGroups,
    Chirality,
    MolecularWeight,
    IupacName,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 8] = [
        ComponentKind::Formula,
        ComponentKind::LongestChain,
        ComponentKind::AromaticRings,
        ComponentKind::RingCompounds,
        ComponentKind::FunctionalGroups,
        ComponentKind::Chirality,
        ComponentKind::MolecularWeight,
        ComponentKind::IupacName,
    ];

    /// The six core structural components.
    pub const CORE: [ComponentKind; 6] = [
        ComponentKind::Formula,
        ComponentKind::LongestChain,
        ComponentKind::AromaticRings,
        ComponentKind::RingCompounds,
        ComponentKind::FunctionalGroups,
        ComponentKind::Chirality,
    ];

    /// JSON key and command-line name.
    pub fn key(self) -> &'static str {
        match self {
            ComponentKind::Formula => "formula",
            ComponentKind::LongestChain => "longest_chain",
            ComponentKind::AromaticRings => "aromatic_rings",
            ComponentKind::RingCompounds => "ring_compounds",
            ComponentKind::FunctionalGroups => "functional_groups",
            ComponentKind::Chirality => "chirality",
            ComponentKind::MolecularWeight => "molecular_weight",
            ComponentKind::IupacName => "iupac_name",
        }
    }

    /// Set-valued components, scored by overlap rather than equality.
    pub fn is_multiset(self) -> bool {
        matches!(self, ComponentKind::RingCompounds | ComponentKind::FunctionalGroups)
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown component `{0}`")]
pub struct UnknownComponent(pub String);

impl FromStr for ComponentKind {
    type Err = UnknownComponent;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        ComponentKind::ALL
            .into_iter()
            .find(|k| k.key() == norm)
            .ok_or_else(|| UnknownComponent(s.to_string()))
    }
}

/// Parses a comma-separated component list; `all` and `core` expand to the
/// corresponding sets.
pub fn parse_component_list(list: &str) -> Result<BTreeSet<ComponentKind>, UnknownComponent> {
    let mut out = BTreeSet::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "all" => out.extend(ComponentKind::ALL),
            "core" => out.extend(ComponentKind::CORE),
            _ => {
                out.insert(item.parse()?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChiralCenter {
    pub atom: usize,
    pub config: Configuration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ComponentValue {
    /// Formula or IUPAC name.
    Text(String),
    /// Chain length or aromatic ring count.
    Count(usize),
    /// Sorted multiset of ring or group names.
    Names(Vec<String>),
    Chirality(Vec<ChiralCenter>),
    Weight(f64),
}

impl ComponentValue {
    fn fits(&self, kind: ComponentKind) -> bool {
        use ComponentKind as K;
        matches!(
            (kind, self),
            (K::Formula | K::IupacName, ComponentValue::Text(_))
                | (K::LongestChain | K::AromaticRings, ComponentValue::Count(_))
                | (K::RingCompounds | K::FunctionalGroups, ComponentValue::Names(_))
                | (K::Chirality, ComponentValue::Chirality(_))
                | (K::MolecularWeight, ComponentValue::Weight(_))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Extracted,
    Parsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Prose,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prose" => Ok(Format::Prose),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected prose or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationaleError {
    #[error("rationale has no components")]
    EmptyRationale,
    #[error("value for {0} has the wrong type")]
    TypeMismatch(ComponentKind),
    #[error("no rationale component recognised")]
    NothingRecognised { warnings: Vec<String> },
}

/// A set of component statements. Equality ignores [`Source`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Rationale {
    components: BTreeMap<ComponentKind, ComponentValue>,
    mask: BTreeSet<ComponentKind>,
    pub source: Source,
}

impl PartialEq for Rationale {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && self.mask == other.mask
    }
}

impl Rationale {
    pub fn new(source: Source) -> Rationale {
        Rationale {
            components: BTreeMap::new(),
            mask: BTreeSet::new(),
            source,
        }
    }

    /// Every component of the profile, plus the IUPAC name when given.
    pub fn from_profile(profile: &StructuralProfile, iupac_name: Option<&str>) -> Rationale {
        let mut r = Rationale::new(Source::Extracted);
        let mut put = |k, v| r.insert(k, v).expect("profile values fit their kinds");
        put(ComponentKind::Formula, ComponentValue::Text(profile.formula.clone()));
        put(ComponentKind::LongestChain, ComponentValue::Count(profile.longest_chain));
        put(ComponentKind::AromaticRings, ComponentValue::Count(profile.aromatic_ring_count));
        put(ComponentKind::RingCompounds, ComponentValue::Names(profile.ring_names()));
        put(ComponentKind::FunctionalGroups, ComponentValue::Names(profile.group_names()));
        put(
            ComponentKind::Chirality,
            ComponentValue::Chirality(
                profile
                    .chiral_centers
                    .iter()
                    .map(|&(atom, config)| ChiralCenter { atom, config })
                    .collect(),
            ),
        );
        put(ComponentKind::MolecularWeight, ComponentValue::Weight(profile.molecular_weight));
        if let Some(name) = iupac_name {
            put(ComponentKind::IupacName, ComponentValue::Text(name.to_string()));
        }
        r
    }

    /// Adds or replaces a component. Multisets and chirality lists are
    /// stored sorted.
    pub fn insert(&mut self, kind: ComponentKind, value: ComponentValue) -> Result<(), RationaleError> {
        if !value.fits(kind) {
            return Err(RationaleError::TypeMismatch(kind));
        }
        let value = match value {
            ComponentValue::Names(mut v) => {
                v.sort();
                ComponentValue::Names(v)
            }
            ComponentValue::Chirality(mut v) => {
                v.sort();
                ComponentValue::Chirality(v)
            }
            v => v,
        };
        self.components.insert(kind, value);
        self.mask.insert(kind);
        Ok(())
    }

    pub fn get(&self, kind: ComponentKind) -> Option<&ComponentValue> {
        self.components.get(&kind)
    }

    pub fn mask(&self) -> &BTreeSet<ComponentKind> {
        &self.mask
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (ComponentKind, &ComponentValue)> {
        self.components.iter().map(|(&k, v)| (k, v))
    }

    /// Keeps only the components in `keep`.
    pub fn restricted(&self, keep: &BTreeSet<ComponentKind>) -> Rationale {
        Rationale {
            components: self
                .components
                .iter()
                .filter(|(k, _)| keep.contains(k))
                .map(|(&k, v)| (k, v.clone()))
                .collect(),
            mask: self.mask.intersection(keep).copied().collect(),
            source: self.source,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, RationaleError> {
        if self.is_empty() {
            return Err(RationaleError::EmptyRationale);
        }
        Ok(match format {
            Format::Prose => self.sentences().join(" "),
            Format::Json => self.to_json().to_string(),
        })
    }

    /// One sentence per component, in canonical order.
    pub fn sentences(&self) -> Vec<String> {
        self.components.iter().map(|(&k, v)| sentence(k, v)).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (&k, v) in &self.components {
            let value = match v {
                ComponentValue::Text(s) => json!(s),
                ComponentValue::Count(n) => json!(n),
                ComponentValue::Names(names) => json!(names),
                ComponentValue::Chirality(c) => Value::Array(
                    c.iter()
                        .map(|c| json!({"atom": c.atom, "config": c.config.as_str()}))
                        .collect(),
                ),
                ComponentValue::Weight(w) => json!(w),
            };
            map.insert(k.key().to_string(), value);
        }
        Value::Object(map)
    }
}

fn plural(n: usize, singular: &str, plural: &str) -> String {
    if n == 1 {
        format!("1 {singular}")
    } else {
        format!("{n} {plural}")
    }
}

fn render_multiset(names: &[String]) -> String {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for n in names {
        *counts.entry(n).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(name, c)| if c == 1 { name.to_string() } else { format!("{c} x {name}") })
        .collect::<Vec<_>>()
        .join(", ")
}

fn sentence(kind: ComponentKind, value: &ComponentValue) -> String {
    use ComponentValue as V;
    match (kind, value) {
        (ComponentKind::Formula, V::Text(f)) => format!("The molecular formula is {f}."),
        (ComponentKind::LongestChain, V::Count(n)) => {
            format!("The longest carbon chain has {}.", plural(*n, "carbon", "carbons"))
        }
        (ComponentKind::AromaticRings, V::Count(n)) => {
            format!("The molecule has {}.", plural(*n, "aromatic ring", "aromatic rings"))
        }
        (ComponentKind::RingCompounds, V::Names(v)) if v.is_empty() => "The molecule contains no rings.".into(),
        (ComponentKind::RingCompounds, V::Names(v)) => format!(
            "The molecule contains {}: {}.",
            plural(v.len(), "ring", "rings"),
            render_multiset(v)
        ),
        (ComponentKind::FunctionalGroups, V::Names(v)) if v.is_empty() => {
            "The molecule contains no functional groups.".into()
        }
        (ComponentKind::FunctionalGroups, V::Names(v)) => format!(
            "The molecule contains {}: {}.",
            plural(v.len(), "functional group", "functional groups"),
            render_multiset(v)
        ),
        (ComponentKind::Chirality, V::Chirality(c)) if c.is_empty() => {
            "The molecule has no specified chiral centers.".into()
        }
        (ComponentKind::Chirality, V::Chirality(c)) => format!(
            "The molecule has {}: {}.",
            plural(c.len(), "chiral center", "chiral centers"),
            c.iter()
                .map(|c| format!("{} at atom {}", c.config, c.atom))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        (ComponentKind::MolecularWeight, V::Weight(w)) => format!("The molecular weight is {w:.2} g/mol."),
        (ComponentKind::IupacName, V::Text(n)) => format!("The IUPAC name is {n}."),
        _ => unreachable!("values are checked against their kind on insert"),
    }
}

/// A parsed rationale and the statements that were skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRationale {
    pub rationale: Rationale,
    pub warnings: Vec<String>,
}

/// Parses either rendered format; fails only when nothing is recognised.
pub fn parse_rationale(text: &str) -> Result<Rationale, RationaleError> {
    parse_rationale_with_warnings(text).map(|p| p.rationale)
}

pub fn parse_rationale_with_warnings(text: &str) -> Result<ParsedRationale, RationaleError> {
    let trimmed = text.trim();
    let mut rationale = Rationale::new(Source::Parsed);
    let mut warnings = Vec::new();
    match serde_json::from_str::<Value>(trimmed) {
        Ok(Value::Object(map)) => parse_json(&map, &mut rationale, &mut warnings),
        _ => parse_prose(trimmed, &mut rationale, &mut warnings),
    }
    if rationale.is_empty() {
        return Err(RationaleError::NothingRecognised { warnings });
    }
    Ok(ParsedRationale { rationale, warnings })
}

fn add(r: &mut Rationale, warnings: &mut Vec<String>, kind: ComponentKind, value: ComponentValue) {
    if r.mask.contains(&kind) {
        warnings.push(format!("duplicate {kind} statement ignored"));
    } else {
        r.insert(kind, value).expect("parsers produce values of the right kind");
    }
}

fn strict_count(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn strict_weight(s: &str) -> Option<f64> {
    let (int, frac) = s.split_once('.').unwrap_or((s, "0"));
    let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    if digits(int) && digits(frac) {
        s.parse().ok()
    } else {
        None
    }
}

/// Splits at sentence-final periods: a `.` followed by whitespace or the
/// end of text.
fn split_sentences(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..bytes.len() {
        if bytes[i] == b'.' && bytes.get(i + 1).is_none_or(|b| b.is_ascii_whitespace()) {
            let s = text[start..i].trim();
            if !s.is_empty() {
                out.push(s);
            }
            start = i + 1;
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest);
    }
    out
}

fn parse_multiset(count: &str, list: &str) -> Option<Vec<String>> {
    let total = strict_count(count)?;
    let mut names = Vec::new();
    for item in list.split(", ") {
        let item = item.trim();
        let (n, name) = match item.split_once(" x ") {
            Some((n, name)) if strict_count(n).is_some() => (strict_count(n)?, name.trim()),
            _ => (1, item),
        };
        if name.is_empty() || n == 0 {
            return None;
        }
        names.extend(std::iter::repeat_n(name.to_string(), n));
    }
    (names.len() == total).then_some(names)
}

fn parse_chirality(count: &str, list: &str) -> Option<Vec<ChiralCenter>> {
    let total = strict_count(count)?;
    let mut out = Vec::new();
    for item in list.split(", ") {
        let (config, atom) = item.trim().split_once(" at atom ")?;
        out.push(ChiralCenter {
            atom: strict_count(atom)?,
            config: Configuration::from_str_loose(config)?,
        });
    }
    (out.len() == total).then_some(out)
}

/// `"<count> <noun>: <list>"` with a singular or plural noun.
fn counted_list<'a>(rest: &'a str, singular: &str, plural: &str) -> Option<(&'a str, &'a str)> {
    let (count, tail) = rest.split_once(' ')?;
    let (noun, list) = tail.split_once(": ")?;
    (noun == singular || noun == plural).then_some((count, list))
}

fn counted<'a>(rest: &'a str, singular: &str, plural: &str) -> Option<&'a str> {
    let (count, noun) = rest.split_once(' ')?;
    (noun == singular || noun == plural).then_some(count)
}

fn parse_sentence(s: &str) -> Option<(ComponentKind, ComponentValue)> {
    use ComponentKind as K;
    use ComponentValue as V;
    if let Some(f) = s.strip_prefix("The molecular formula is ") {
        return (!f.is_empty() && !f.contains(' ')).then(|| (K::Formula, V::Text(f.to_string())));
    }
    if let Some(rest) = s.strip_prefix("The longest carbon chain has ") {
        return Some((K::LongestChain, V::Count(strict_count(counted(rest, "carbon", "carbons")?)?)));
    }
    if let Some(rest) = s.strip_prefix("The molecular weight is ") {
        let w = strict_weight(rest.strip_suffix(" g/mol")?)?;
        return Some((K::MolecularWeight, V::Weight(w)));
    }
    if let Some(name) = s.strip_prefix("The IUPAC name is ") {
        return (!name.is_empty()).then(|| (K::IupacName, V::Text(name.to_string())));
    }
    if let Some(rest) = s.strip_prefix("The molecule contains ") {
        return match rest {
            "no rings" => Some((K::RingCompounds, V::Names(Vec::new()))),
            "no functional groups" => Some((K::FunctionalGroups, V::Names(Vec::new()))),
            _ => {
                if let Some((n, list)) = counted_list(rest, "ring", "rings") {
                    Some((K::RingCompounds, V::Names(parse_multiset(n, list)?)))
                } else {
                    let (n, list) = counted_list(rest, "functional group", "functional groups")?;
                    Some((K::FunctionalGroups, V::Names(parse_multiset(n, list)?)))
                }
            }
        };
    }
    if let Some(rest) = s.strip_prefix("The molecule has ") {
        if rest == "no specified chiral centers" {
            return Some((K::Chirality, V::Chirality(Vec::new())));
        }
        if let Some(n) = counted(rest, "aromatic ring", "aromatic rings") {
            return Some((K::AromaticRings, V::Count(strict_count(n)?)));
        }
        let (count, list) = counted_list(rest, "chiral center", "chiral centers")?;
        return Some((K::Chirality, V::Chirality(parse_chirality(count, list)?)));
    }
    None
}

fn parse_prose(text: &str, r: &mut Rationale, warnings: &mut Vec<String>) {
    for s in split_sentences(text) {
        match parse_sentence(s) {
            Some((kind, value)) => add(r, warnings, kind, value),
            None => warnings.push(format!("unrecognised sentence: {s}")),
        }
    }
}

fn json_value(kind: ComponentKind, v: &Value) -> Option<ComponentValue> {
    use ComponentKind as K;
    let names = |v: &Value| -> Option<Vec<String>> {
        v.as_array()?
            .iter()
            .map(|x| x.as_str().map(str::to_string))
            .collect()
    };
    Some(match kind {
        K::Formula | K::IupacName => ComponentValue::Text(v.as_str()?.to_string()),
        K::LongestChain | K::AromaticRings => ComponentValue::Count(usize::try_from(v.as_u64()?).ok()?),
        K::RingCompounds | K::FunctionalGroups => ComponentValue::Names(names(v)?),
        K::Chirality => ComponentValue::Chirality(
            v.as_array()?
                .iter()
                .map(|c| {
                    Some(ChiralCenter {
                        atom: usize::try_from(c.get("atom")?.as_u64()?).ok()?,
                        config: Configuration::from_str_loose(c.get("config")?.as_str()?)?,
                    })
                })
                .collect::<Option<Vec<_>>>()?,
        ),
        K::MolecularWeight => {
            let w = v.as_f64()?;
            if !w.is_finite() || w < 0.0 {
                return None;
            }
            ComponentValue::Weight(w)
        }
    })
}

fn parse_json(map: &Map<String, Value>, r: &mut Rationale, warnings: &mut Vec<String>) {
    for (key, v) in map {
        let Ok(kind) = key.parse::<ComponentKind>() else {
            warnings.push(format!("unknown key `{key}` ignored"));
            continue;
        };
        if key != kind.key() {
            warnings.push(format!("unknown key `{key}` ignored"));
            continue;
        }
        match json_value(kind, v) {
            Some(value) => add(r, warnings, kind, value),
            None => warnings.push(format!("value of `{key}` has the wrong type")),
        }
    }
}
