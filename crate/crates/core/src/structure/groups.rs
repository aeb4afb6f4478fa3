use std::collections::BTreeSet;

use super::catalog::Catalog;
use crate::graph::Molecule;

/// One pattern embedding, with the match that suppressed it (if any).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMatch {
    pub name: String,
    pub rank: u32,
    pub atoms: BTreeSet<usize>,
    /// Index into the same match list.
    pub suppressed_by: Option<usize>,
}

/// All catalog matches. A match is suppressed when its atoms are a subset of
/// a match with a strictly better (lower) rank, so a carboxylic acid hides
/// the hydroxyl inside it and an ester hides its ether oxygen.
pub fn group_matches(mol: &Molecule, catalog: &Catalog) -> Vec<GroupMatch> {
    let mut matches: Vec<GroupMatch> = Vec::new();
    for entry in &catalog.groups {
        for atoms in entry.pattern.match_sets(mol) {
            let duplicate = matches
                .iter()
                .any(|m| m.name == entry.name && m.atoms == atoms);
            if !duplicate {
                matches.push(GroupMatch {
                    name: entry.name.clone(),
                    rank: entry.rank,
                    atoms,
                    suppressed_by: None,
                });
            }
        }
    }
    for i in 0..matches.len() {
        let by = (0..matches.len())
            .filter(|&j| matches[j].rank < matches[i].rank && matches[i].atoms.is_subset(&matches[j].atoms))
            .min_by_key(|&j| (matches[j].rank, j));
        matches[i].suppressed_by = by;
    }
    matches
}

/// Names of the unsuppressed matches, sorted, with repeats.
pub fn functional_group_names(mol: &Molecule, catalog: &Catalog) -> Vec<String> {
    let mut names: Vec<String> = group_matches(mol, catalog)
        .into_iter()
        .filter(|m| m.suppressed_by.is_none())
        .map(|m| m.name)
        .collect();
    names.sort();
    names
}
