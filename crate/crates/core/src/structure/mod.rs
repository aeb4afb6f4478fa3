//! The structural components of a molecule: formula, longest carbon chain,
//! aromatic ring count, ring compounds, functional groups, chiral centres,
//! and molecular weight.

pub mod catalog;
pub mod chain;
pub mod cip;
pub mod formula;
pub mod groups;
pub mod pattern;

use serde::{Deserialize, Serialize};

pub use catalog::{Catalog, CatalogError, DEFAULT_CATALOG};
pub use chain::longest_carbon_chain;
pub use cip::Configuration;
pub use formula::{molecular_formula, molecular_weight};
pub use groups::{functional_group_names, group_matches, GroupMatch};

use crate::graph::{Molecule, Ring};
use crate::smiles::canonical_order;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RingName {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionalGroupName {
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralProfile {
    /// Hill order.
    pub formula: String,
    /// Atoms in the longest chain of non-ring carbons.
    pub longest_chain: usize,
    pub aromatic_ring_count: usize,
    /// One entry per SSSR ring, sorted by name.
    pub ring_compounds: Vec<RingName>,
    /// Sorted, with repeats.
    pub functional_groups: Vec<FunctionalGroupName>,
    /// Atom positions in the canonical SMILES, ascending.
    pub chiral_centers: Vec<(usize, Configuration)>,
    /// g/mol, rounded to two decimals.
    pub molecular_weight: f64,
}

impl StructuralProfile {
    /// Configurations without atom positions, sorted.
    pub fn configurations(&self) -> Vec<Configuration> {
        let mut c: Vec<Configuration> = self.chiral_centers.iter().map(|&(_, c)| c).collect();
        c.sort();
        c
    }

    pub fn ring_names(&self) -> Vec<String> {
        self.ring_compounds.iter().map(|r| r.name.clone()).collect()
    }

    pub fn group_names(&self) -> Vec<String> {
        self.functional_groups.iter().map(|g| g.name.clone()).collect()
    }
}

pub fn aromatic_rings(mol: &Molecule) -> usize {
    mol.rings().iter().filter(|r| r.aromatic).count()
}

/// Label used for rings absent from the catalog, e.g.
/// `5-membered aromatic ring (heteroatoms: N S)`.
pub fn generic_ring_label(mol: &Molecule, ring: &Ring) -> String {
    let hetero = ring.heteroatoms(mol);
    let hetero = if hetero.is_empty() {
        "none".to_string()
    } else {
        hetero.join(" ")
    };
    let kind = if ring.aromatic { "aromatic ring" } else { "ring" };
    format!("{}-membered {kind} (heteroatoms: {hetero})", ring.size())
}

pub fn ring_compounds(mol: &Molecule, catalog: &Catalog) -> Vec<RingName> {
    let mut out: Vec<RingName> = mol
        .rings()
        .iter()
        .map(|ring| RingName {
            name: catalog
                .ring_name(mol, ring)
                .map(str::to_string)
                .unwrap_or_else(|| generic_ring_label(mol, ring)),
            size: ring.size(),
        })
        .collect();
    out.sort();
    out
}

pub fn functional_groups(mol: &Molecule, catalog: &Catalog) -> Vec<FunctionalGroupName> {
    functional_group_names(mol, catalog)
        .into_iter()
        .map(|name| FunctionalGroupName { name })
        .collect()
}

/// Annotated stereocentres, numbered by position in the canonical SMILES.
pub fn chiral_centers(mol: &Molecule) -> Vec<(usize, Configuration)> {
    let centers = cip::chiral_centers(mol);
    if centers.is_empty() {
        return centers;
    }
    let order = canonical_order(mol);
    let mut position = vec![0; mol.num_atoms()];
    for (pos, &atom) in order.iter().enumerate() {
        position[atom] = pos;
    }
    let mut out: Vec<(usize, Configuration)> = centers.into_iter().map(|(a, c)| (position[a], c)).collect();
    out.sort();
    out
}

pub fn extract_profile(mol: &Molecule) -> StructuralProfile {
    extract_profile_with(mol, Catalog::builtin())
}

pub fn extract_profile_with(mol: &Molecule, catalog: &Catalog) -> StructuralProfile {
    StructuralProfile {
        formula: molecular_formula(mol),
        longest_chain: longest_carbon_chain(mol),
        aromatic_ring_count: aromatic_rings(mol),
        ring_compounds: ring_compounds(mol, catalog),
        functional_groups: functional_groups(mol, catalog),
        chiral_centers: chiral_centers(mol),
        molecular_weight: molecular_weight(mol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn profile(s: &str) -> StructuralProfile {
        extract_profile(&parse(s).unwrap())
    }

    #[test]
    fn butanol() {
        let p = profile("CC(O)CC");
        assert_eq!(p.formula, "C4H10O");
        assert_eq!(p.longest_chain, 4);
        assert_eq!(p.aromatic_ring_count, 0);
        assert!(p.ring_compounds.is_empty());
        assert_eq!(p.group_names(), vec!["hydroxyl"]);
        assert!(p.chiral_centers.is_empty());
        assert_eq!(p.molecular_weight, 74.12);
    }

    #[test]
    fn cyclobutanol_and_benzene() {
        let p = profile("OC1CCC1");
        assert_eq!(p.formula, "C4H8O");
        assert_eq!(p.longest_chain, 0);
        assert_eq!(p.ring_compounds, vec![RingName { name: "cyclobutane".into(), size: 4 }]);

        let p = profile("c1ccccc1");
        assert_eq!((p.formula.as_str(), p.aromatic_ring_count, p.molecular_weight), ("C6H6", 1, 78.11));
        assert_eq!(p.ring_names(), vec!["benzene"]);
        assert_eq!(profile("C1=CC=CC=C1"), p);
    }

    #[test]
    fn generic_labels() {
        assert_eq!(profile("c1ccsn1").ring_names(), vec!["5-membered aromatic ring (heteroatoms: N S)"]);
        assert_eq!(profile("C1CC=CC1").ring_names(), vec!["5-membered ring (heteroatoms: none)"]);
        assert_eq!(
            profile("c1ccc2ccccc2c1").ring_names(),
            vec!["benzene", "benzene"]
        );
    }

    #[test]
    fn chirality_positions_are_canonical() {
        let a = profile("C[C@@H](O)CC");
        let b = profile("CC[C@@H](C)O");
        assert_eq!(a.chiral_centers, b.chiral_centers);
        assert_eq!(a.configurations(), vec![Configuration::R]);
    }
}
