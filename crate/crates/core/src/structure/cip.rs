//! R/S assignment by CIP Rule 1a over the hierarchical digraph.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::graph::{kekulize, BondOrder, Chirality, Molecule};

/// Digraph nodes expanded per centre before giving up.
const NODE_BUDGET: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Configuration {
    R,
    S,
    Unresolved,
}

impl Configuration {
    pub fn as_str(self) -> &'static str {
        match self {
            Configuration::R => "R",
            Configuration::S => "S",
            Configuration::Unresolved => "unresolved",
        }
    }

    pub fn from_str_loose(s: &str) -> Option<Configuration> {
        match s {
            "R" => Some(Configuration::R),
            "S" => Some(Configuration::S),
            "unresolved" | "Unresolved" => Some(Configuration::Unresolved),
            _ => None,
        }
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

struct OutOfBudget;

#[derive(Debug, Clone)]
struct Node {
    /// `None` for a hydrogen.
    atom: Option<usize>,
    /// Duplicate (ring-closure or multiple-bond) atoms have no substituents.
    duplicate: bool,
    parent: Option<usize>,
    key: (u8, u32),
}

struct Digraph<'a> {
    mol: &'a Molecule,
    orders: Vec<BondOrder>,
    nodes: Vec<Node>,
    sorted: Vec<Option<Vec<usize>>>,
    budget: usize,
}

impl<'a> Digraph<'a> {
    fn new(mol: &'a Molecule, orders: Vec<BondOrder>, root: usize) -> Self {
        let mut g = Digraph {
            mol,
            orders,
            nodes: Vec::new(),
            sorted: Vec::new(),
            budget: NODE_BUDGET,
        };
        g.push(Some(root), false, None);
        g
    }

    fn atom_key(&self, atom: Option<usize>) -> (u8, u32) {
        match atom {
            None => (1, 1008),
            Some(a) => {
                let at = self.mol.atom(a);
                let mass = match at.isotope {
                    Some(m) => u32::from(m) * 1000,
                    None => (at.element.standard_weight() * 1000.0).round() as u32,
                };
                (at.atomic_number(), mass)
            }
        }
    }

    fn push(&mut self, atom: Option<usize>, duplicate: bool, parent: Option<usize>) -> usize {
        let key = self.atom_key(atom);
        self.nodes.push(Node {
            atom,
            duplicate,
            parent,
            key,
        });
        self.sorted.push(None);
        self.nodes.len() - 1
    }

    fn is_ancestor(&self, mut node: usize, atom: usize) -> bool {
        loop {
            if self.nodes[node].atom == Some(atom) {
                return true;
            }
            match self.nodes[node].parent {
                Some(p) => node = p,
                None => return false,
            }
        }
    }

    fn expand(&mut self, node: usize) -> Result<Vec<usize>, OutOfBudget> {
        let n = self.nodes[node].clone();
        let Some(x) = n.atom.filter(|_| !n.duplicate) else {
            return Ok(Vec::new());
        };
        let from = n.parent.and_then(|p| self.nodes[p].atom);
        let mut out = Vec::new();
        let mol = self.mol;
        for nb in mol.neighbors(x) {
            let extra = self.orders[nb.bond].valence() as usize - 1;
            if Some(nb.atom) != from {
                let dup = self.is_ancestor(node, nb.atom);
                out.push((Some(nb.atom), dup));
            }
            for _ in 0..extra {
                out.push((Some(nb.atom), true));
            }
        }
        for _ in 0..mol.atom(x).total_h() {
            out.push((None, false));
        }
        if out.len() > self.budget {
            return Err(OutOfBudget);
        }
        self.budget -= out.len();
        Ok(out
            .into_iter()
            .map(|(atom, dup)| self.push(atom, dup, Some(node)))
            .collect())
    }

    /// Substituents of `node`, highest priority first.
    fn children(&mut self, node: usize) -> Result<Vec<usize>, OutOfBudget> {
        if let Some(c) = &self.sorted[node] {
            return Ok(c.clone());
        }
        let mut kids = self.expand(node)?;
        // insertion sort with the fallible comparison
        for i in 1..kids.len() {
            let mut j = i;
            while j > 0 && self.compare(kids[j], kids[j - 1])? == Ordering::Greater {
                kids.swap(j, j - 1);
                j -= 1;
            }
        }
        self.sorted[node] = Some(kids.clone());
        Ok(kids)
    }

    /// Sphere-by-sphere comparison of the branches rooted at `a` and `b`.
    fn compare(&mut self, a: usize, b: usize) -> Result<Ordering, OutOfBudget> {
        let ord = self.nodes[a].key.cmp(&self.nodes[b].key);
        if ord != Ordering::Equal {
            return Ok(ord);
        }
        let mut fa = vec![a];
        let mut fb = vec![b];
        loop {
            let mut next_a = Vec::new();
            let mut next_b = Vec::new();
            for (&x, &y) in fa.iter().zip(&fb) {
                let cx = self.children(x)?;
                let cy = self.children(y)?;
                let kx: Vec<(u8, u32)> = cx.iter().map(|&c| self.nodes[c].key).collect();
                let ky: Vec<(u8, u32)> = cy.iter().map(|&c| self.nodes[c].key).collect();
                let ord = kx.cmp(&ky);
                if ord != Ordering::Equal {
                    return Ok(ord);
                }
                next_a.extend(cx);
                next_b.extend(cy);
            }
            if next_a.is_empty() {
                return Ok(Ordering::Equal);
            }
            fa = next_a;
            fb = next_b;
        }
    }
}

/// Configuration of one annotated atom, or `None` when it is not a
/// stereocentre (not four substituents, or two identical branches).
pub fn assign_center(mol: &Molecule, orders: &[BondOrder], atom: usize) -> Option<Configuration> {
    let a = mol.atom(atom);
    if a.chirality == Chirality::None || mol.degree(atom) + a.total_h() as usize != 4 || a.total_h() > 1 {
        return None;
    }
    let mut g = Digraph::new(mol, orders.to_vec(), atom);
    let Ok(ranked) = g.children(0) else {
        return Some(Configuration::Unresolved);
    };
    for w in ranked.windows(2) {
        match g.compare(w[0], w[1]) {
            Ok(Ordering::Equal) => return None,
            Ok(_) => {}
            Err(OutOfBudget) => return Some(Configuration::Unresolved),
        }
    }
    let sub: Vec<Option<usize>> = ranked.iter().map(|&n| g.nodes[n].atom).collect();
    let listing = [sub[3], sub[0], sub[1], sub[2]];
    Some(match mol.chirality_for_order(atom, &listing) {
        Chirality::Anticlockwise => Configuration::R,
        Chirality::Clockwise => Configuration::S,
        Chirality::None => Configuration::Unresolved,
    })
}

/// Every annotated stereocentre with its configuration, by atom index.
pub fn chiral_centers(mol: &Molecule) -> Vec<(usize, Configuration)> {
    let annotated: Vec<usize> = (0..mol.num_atoms())
        .filter(|&i| mol.atom(i).chirality != Chirality::None)
        .collect();
    if annotated.is_empty() {
        return Vec::new();
    }
    let orders = kekulize(mol).unwrap_or_else(|| {
        mol.bonds()
            .iter()
            .map(|b| match b.order {
                BondOrder::Aromatic => BondOrder::Single,
                o => o,
            })
            .collect()
    });
    annotated
        .into_iter()
        .filter_map(|i| assign_center(mol, &orders, i).map(|c| (i, c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn configs(s: &str) -> Vec<Configuration> {
        chiral_centers(&parse(s).unwrap()).into_iter().map(|(_, c)| c).collect()
    }

    use Configuration::{R, S};

    #[test]
    fn butanol_enantiomers() {
        assert_eq!(configs("C[C@@H](O)CC"), vec![R]);
        assert_eq!(configs("C[C@H](O)CC"), vec![S]);
        assert_eq!(configs("CC[C@@H](C)O"), vec![R]);
        assert!(configs("CC(O)CC").is_empty());
    }

    #[test]
    fn duplicate_atoms_decide() {
        // L-alanine is S; the carboxyl outranks the methyl through its
        // duplicated oxygen
        assert_eq!(configs("C[C@@H](C(=O)O)N"), vec![S]);
        assert_eq!(configs("N[C@@H](C)C(=O)O"), vec![S]);
        // (R)-glyceraldehyde
        assert_eq!(configs("O=C[C@H](O)CO"), vec![R]);
    }

    #[test]
    fn deeper_spheres() {
        // (S)-3-methylhexane: propyl vs ethyl decided at sphere three
        assert_eq!(configs("CCC[C@H](C)CC"), vec![R]);
        assert_eq!(configs("CCC[C@@H](C)CC"), vec![S]);
    }

    #[test]
    fn non_centres_are_skipped() {
        assert!(configs("C[C@H](C)CC").is_empty());
        assert!(configs("[C@H](C)(C)C").is_empty());
    }

    #[test]
    fn isotopes_break_ties() {
        assert_eq!(configs("[2H][C@](C)(O)[H]").len(), 1);
        assert_eq!(configs("[2H][C@@H](C)O").len(), 1);
        // an explicit hydrogen atom ties with the implicit one
        assert!(configs("[H][C@H](C)O").is_empty());
    }
}
