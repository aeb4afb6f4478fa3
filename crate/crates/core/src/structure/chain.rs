use std::collections::VecDeque;

use crate::element::Element;
use crate::graph::Molecule;

/// Carbons that belong to no SSSR ring.
pub fn non_ring_carbons(mol: &Molecule) -> Vec<bool> {
    let mut in_ring = vec![false; mol.num_atoms()];
    for ring in mol.rings() {
        for &a in &ring.atoms {
            in_ring[a] = true;
        }
    }
    mol.atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| a.element == Element::C && !in_ring[i])
        .collect()
}

/// Atom count of the longest simple path through non-ring carbons.
///
/// Every cycle of the molecule lies inside the span of its SSSR, so the
/// non-ring atoms induce a forest and the longest path is a tree diameter:
/// two breadth-first sweeps per tree, linear time.
pub fn longest_carbon_chain(mol: &Molecule) -> usize {
    let keep = non_ring_carbons(mol);
    let n = mol.num_atoms();
    let mut seen = vec![false; n];
    let mut best = 0;
    for start in 0..n {
        if !keep[start] || seen[start] {
            continue;
        }
        let (far, _) = farthest(mol, &keep, start, Some(&mut seen));
        let (_, length) = farthest(mol, &keep, far, None);
        best = best.max(length);
    }
    best
}

/// Farthest atom from `start` within the kept subgraph and the path length
/// to it in atoms.
fn farthest(mol: &Molecule, keep: &[bool], start: usize, mut seen: Option<&mut Vec<bool>>) -> (usize, usize) {
    let mut dist = vec![usize::MAX; mol.num_atoms()];
    dist[start] = 1;
    let mut queue = VecDeque::from([start]);
    let mut far = (start, 1);
    while let Some(a) = queue.pop_front() {
        if let Some(seen) = seen.as_deref_mut() {
            seen[a] = true;
        }
        if dist[a] > far.1 {
            far = (a, dist[a]);
        }
        for nb in mol.neighbors(a) {
            if keep[nb.atom] && dist[nb.atom] == usize::MAX {
                dist[nb.atom] = dist[a] + 1;
                queue.push_back(nb.atom);
            }
        }
    }
    far
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn chain(s: &str) -> usize {
        longest_carbon_chain(&parse(s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(chain("CC(O)CC"), 4);
        assert_eq!(chain("CCCCC(O)C"), 6);
        assert_eq!(chain("c1ccccc1"), 0);
        assert_eq!(chain("OC1CCC1"), 0);
        assert_eq!(chain("O"), 0);
        assert_eq!(chain("CC(C)C(C)(CC)CCC"), 6);
        // the ring interrupts the chain
        assert_eq!(chain("CCC1CCC1CCCC"), 4);
        // heteroatoms interrupt it too
        assert_eq!(chain("CCOCCC"), 3);
    }
}
