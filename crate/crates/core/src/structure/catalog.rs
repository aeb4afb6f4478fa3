//! Functional-group and named-ring catalogs.
//!
//! Plain-text format, one entry per line, `|`-separated, `#` comments:
//!
//! ```text
//! [groups]
//! # name | pattern | rank (lower wins when one match contains another)
//! hydroxyl | [OX2H1][#6] | 5
//! [rings]
//! # name | SMILES of the bare ring
//! benzene | c1ccccc1
//! ```
//!
//! A group may list several lines under the same name; their matches are
//! pooled. A named ring is recognised by its cyclic sequence of elements,
//! aromatic flags and ring bond orders, up to rotation and reflection.

use std::sync::OnceLock;

use thiserror::Error;

use super::pattern::{Pattern, PatternError};
use crate::element::Element;
use crate::graph::{BondOrder, Molecule, Ring};
use crate::smiles::parse;

pub const DEFAULT_CATALOG: &str = "\
# MSR catalog v1
[groups]
carboxylic acid | [CX3](=O)[OX2H1] | 1
carboxylic acid | [CX3](=O)[OX1-] | 1
sulfonic acid | [SX4](=O)(=O)[OX2H1,OX1-] | 1
phosphate | [PX4](=O)([OX2,OX1-])([OX2,OX1-])[OX2,OX1-] | 1
ester | [CX3](=O)[OX2][#6] | 2
amide | [CX3](=O)[NX3] | 2
nitro | [N+](=O)[O-] | 2
nitro | [NX3](=O)=O | 2
phenol | [OX2H1]c | 3
aldehyde | [CX3H1](=O)[#6] | 4
aldehyde | [CX3H2]=O | 4
ketone | [#6][CX3](=O)[#6] | 4
nitrile | [CX2]#[NX1] | 4
hydroxyl | [OX2H1][#6] | 5
ether | [OX2;A]([#6])[#6] | 5
primary amine | [NX3;H2;+0;v3;!a] | 5
secondary amine | [NX3;H1;+0;v3;!a] | 5
tertiary amine | [NX3;H0;+0;v3;!a] | 5
thiol | [SX2H1][#6] | 5
sulfide | [SX2;A]([#6])[#6] | 5
halide (F) | [#6]F | 5
halide (Cl) | [#6]Cl | 5
halide (Br) | [#6]Br | 5
halide (I) | [#6]I | 5
alkene | [CX3]=[CX3] | 6
alkyne | [CX2]#[CX2] | 6
[rings]
benzene | c1ccccc1
pyridine | c1ccncc1
pyrimidine | c1cncnc1
pyrrole | c1cc[nH]c1
furan | c1ccoc1
thiophene | c1ccsc1
imidazole | c1cnc[nH]1
pyrazole | c1cn[nH]c1
piperidine | C1CCNCC1
pyrrolidine | C1CCNC1
morpholine | C1COCCN1
tetrahydrofuran | C1CCOC1
cyclopropane | C1CC1
cyclobutane | C1CCC1
cyclopentane | C1CCCC1
cyclohexane | C1CCCCC1
cycloheptane | C1CCCCCC1
cyclooctane | C1CCCCCCC1
";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Pattern {
        line: usize,
        #[source]
        source: PatternError,
    },
}

#[derive(Debug, Clone)]
pub struct GroupEntry {
    pub name: String,
    pub pattern: Pattern,
    pub rank: u32,
}

/// One ring position: element, aromatic flag, and the order of the bond to
/// the next position.
pub(crate) type RingSignature = Vec<(Element, bool, BondOrder)>;

#[derive(Debug, Clone)]
pub struct RingEntry {
    pub name: String,
    pub(crate) signature: RingSignature,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub groups: Vec<GroupEntry>,
    pub rings: Vec<RingEntry>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::parse(DEFAULT_CATALOG).expect("embedded catalog is valid")
    }
}

impl Catalog {
    /// The embedded default catalog, compiled once.
    pub fn builtin() -> &'static Catalog {
        static BUILTIN: OnceLock<Catalog> = OnceLock::new();
        BUILTIN.get_or_init(Catalog::default)
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Groups,
            Rings,
        }
        let mut section = Section::None;
        let mut groups = Vec::new();
        let mut rings = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| CatalogError::Syntax {
                line: line_no,
                message: message.to_string(),
            };
            match line {
                "[groups]" => {
                    section = Section::Groups;
                    continue;
                }
                "[rings]" => {
                    section = Section::Rings;
                    continue;
                }
                _ => {}
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            let name = fields[0];
            if name.is_empty() || name.contains(',') {
                return Err(syntax("names must be non-empty and contain no commas"));
            }
            match section {
                Section::None => return Err(syntax("entry outside a [groups] or [rings] section")),
                Section::Groups => {
                    let [_, pattern, rank] = fields[..] else {
                        return Err(syntax("expected `name | pattern | rank`"));
                    };
                    let pattern = Pattern::parse(pattern).map_err(|source| CatalogError::Pattern {
                        line: line_no,
                        source,
                    })?;
                    let rank = rank.parse().map_err(|_| syntax("rank must be a non-negative integer"))?;
                    groups.push(GroupEntry {
                        name: name.to_string(),
                        pattern,
                        rank,
                    });
                }
                Section::Rings => {
                    if fields.len() < 2 || fields.len() > 3 {
                        return Err(syntax("expected `name | smiles`"));
                    }
                    let mol = parse(fields[1]).map_err(|e| syntax(&format!("ring SMILES: {e}")))?;
                    let [ring] = mol.rings() else {
                        return Err(syntax("ring SMILES must contain exactly one ring"));
                    };
                    rings.push(RingEntry {
                        name: name.to_string(),
                        signature: ring_signature(&mol, ring),
                    });
                }
            }
        }
        Ok(Catalog { groups, rings })
    }

    /// Catalog name of a ring, if any entry matches it.
    pub(crate) fn ring_name(&self, mol: &Molecule, ring: &Ring) -> Option<&str> {
        let sig = ring_signature(mol, ring);
        self.rings
            .iter()
            .find(|e| same_cycle(&e.signature, &sig))
            .map(|e| e.name.as_str())
    }
}

pub(crate) fn ring_signature(mol: &Molecule, ring: &Ring) -> RingSignature {
    ring.edges()
        .map(|(a, b)| {
            let atom = mol.atom(a);
            let order = mol
                .bond_between(a, b)
                .map(|bi| mol.bond(bi).order)
                .unwrap_or(BondOrder::Single);
            (atom.element, atom.aromatic, order)
        })
        .collect()
}

/// Equal up to rotation and reflection.
fn same_cycle(a: &RingSignature, b: &RingSignature) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    (0..n).any(|shift| {
        let forward = (0..n).all(|i| a[i] == b[(i + shift) % n]);
        // walking backwards the bond between i and i+1 is the one stored at i-1
        let backward = (0..n).all(|i| {
            let j = (shift + n - i) % n;
            let bond_j = b[(j + n - 1) % n].2;
            a[i].0 == b[j].0 && a[i].1 == b[j].1 && a[i].2 == bond_j
        });
        forward || backward
    })
}
