use super::{BondOrder, Molecule};

const STEP_LIMIT: usize = 200_000;

/// Assign alternating single/double orders to the aromatic bonds.
///
/// Returns one order per bond (non-aromatic bonds unchanged), or `None` when
/// no perfect matching of the atoms that need a π bond exists.
pub fn kekulize(mol: &Molecule) -> Option<Vec<BondOrder>> {
    let mut orders: Vec<BondOrder> = mol.bonds().iter().map(|b| b.order).collect();
    let n = mol.num_atoms();
    let mut needs = vec![false; n];
    for (a, flag) in needs.iter_mut().enumerate() {
        let atom = mol.atom(a);
        if !atom.aromatic || mol.has_multiple_bond(a) {
            continue;
        }
        let used = mol.bond_valence(a) + atom.total_h();
        let target = atom
            .element
            .allowed_valences(atom.charge)
            .iter()
            .map(|&v| v as u32)
            .find(|&v| v >= used);
        *flag = target.map(|t| t - used == 1).unwrap_or(false);
    }
    for o in orders.iter_mut() {
        if *o == BondOrder::Aromatic {
            *o = BondOrder::Single;
        }
    }
    let mut matched = vec![false; n];
    let mut steps = 0;
    if solve(mol, &needs, &mut matched, &mut orders, &mut steps) {
        Some(orders)
    } else {
        None
    }
}

fn candidates(mol: &Molecule, a: usize, needs: &[bool], matched: &[bool]) -> Vec<(usize, usize)> {
    mol.neighbors(a)
        .iter()
        .filter(|nb| mol.bond(nb.bond).order == BondOrder::Aromatic)
        .filter(|nb| needs[nb.atom] && !matched[nb.atom])
        .map(|nb| (nb.atom, nb.bond))
        .collect()
}

fn solve(
    mol: &Molecule,
    needs: &[bool],
    matched: &mut [bool],
    orders: &mut [BondOrder],
    steps: &mut usize,
) -> bool {
    *steps += 1;
    if *steps > STEP_LIMIT {
        return false;
    }
    // most constrained unmatched atom first
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    for a in 0..needs.len() {
        if !needs[a] || matched[a] {
            continue;
        }
        let options = candidates(mol, a, needs, matched);
        if options.is_empty() {
            return false;
        }
        if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
            let done = options.len() == 1;
            best = Some((a, options));
            if done {
                break;
            }
        }
    }
    let Some((a, options)) = best else {
        return true;
    };
    for (b, bond) in options {
        matched[a] = true;
        matched[b] = true;
        orders[bond] = BondOrder::Double;
        if solve(mol, needs, matched, orders, steps) {
            return true;
        }
        orders[bond] = BondOrder::Single;
        matched[a] = false;
        matched[b] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn double_count(s: &str) -> usize {
        let m = parse(s).unwrap();
        kekulize(&m)
            .unwrap()
            .iter()
            .filter(|o| **o == BondOrder::Double)
            .count()
    }

    #[test]
    fn benzene_and_friends() {
        assert_eq!(double_count("c1ccccc1"), 3);
        assert_eq!(double_count("c1ccncc1"), 3);
        assert_eq!(double_count("c1cc[nH]c1"), 2);
        assert_eq!(double_count("c1ccc2ccccc2c1"), 5);
        assert_eq!(double_count("O=c1cccc[nH]1"), 3);
    }

    #[test]
    fn every_needy_atom_gets_exactly_one_double_bond() {
        let m = parse("Cn1cnc2c1c(=O)n(C)c(=O)n2C").unwrap();
        let orders = kekulize(&m).unwrap();
        for a in 0..m.num_atoms() {
            let doubles = m
                .neighbors(a)
                .iter()
                .filter(|nb| orders[nb.bond] == BondOrder::Double)
                .count();
            assert!(doubles <= 1);
        }
    }
}
