use std::collections::HashSet;

use super::{BondOrder, GraphError, Molecule};

/// Largest fused ring-pair union examined as a single π system.
const MAX_UNION_SIZE: usize = 10;

/// Mark aromatic rings and normalise their bonds.
///
/// A ring is aromatic when every member carried aromatic notation on input,
/// or when every member can contribute to a π system whose electron count
/// satisfies 4n+2. Single rings are tried first, then pairs of rings sharing
/// a bond whose union has at most ten atoms; the process repeats until
/// nothing changes, so fusion atoms can borrow a double bond from an already
/// aromatic neighbour ring.
///
/// Afterwards ring bonds of aromatic rings have order `Aromatic`, every
/// other `Aromatic` bond becomes `Single`, and `aromatic` is set exactly on
/// atoms of aromatic rings.
pub fn perceive_aromaticity(mut mol: Molecule) -> Result<Molecule, GraphError> {
    let input_aromatic: Vec<bool> = mol.atoms().iter().map(|a| a.aromatic).collect();
    let rings = mol.rings().to_vec();

    let ring_bonds: Vec<HashSet<usize>> = rings
        .iter()
        .map(|r| {
            r.edges()
                .filter_map(|(a, b)| mol.bond_between(a, b))
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..rings.len())
        .flat_map(|i| (i + 1..rings.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !ring_bonds[i].is_disjoint(&ring_bonds[j]))
        .filter(|&(i, j)| union_atoms(&rings[i].atoms, &rings[j].atoms).len() <= MAX_UNION_SIZE)
        .collect();

    let mut aromatic = vec![false; rings.len()];
    let mut aromatic_bonds: HashSet<usize> = HashSet::new();
    loop {
        let mut changed = false;
        for (r, ring) in rings.iter().enumerate() {
            if aromatic[r] {
                continue;
            }
            let declared = ring.atoms.iter().all(|&a| input_aromatic[a]);
            if declared
                || huckel(&mol, &ring.atoms, &ring_bonds[r], &aromatic_bonds, &input_aromatic)
            {
                aromatic[r] = true;
                aromatic_bonds.extend(ring_bonds[r].iter().copied());
                changed = true;
            }
        }
        for &(i, j) in &pairs {
            if aromatic[i] && aromatic[j] {
                continue;
            }
            let atoms = union_atoms(&rings[i].atoms, &rings[j].atoms);
            let bonds: HashSet<usize> = ring_bonds[i].union(&ring_bonds[j]).copied().collect();
            if huckel(&mol, &atoms, &bonds, &aromatic_bonds, &input_aromatic) {
                aromatic[i] = true;
                aromatic[j] = true;
                aromatic_bonds.extend(bonds);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Every atom written as aromatic must sit in some 4n+2 ring or ring pair.
    let mut satisfied = vec![false; mol.num_atoms()];
    for (r, ring) in rings.iter().enumerate() {
        if aromatic[r] && huckel(&mol, &ring.atoms, &ring_bonds[r], &aromatic_bonds, &input_aromatic) {
            ring.atoms.iter().for_each(|&a| satisfied[a] = true);
        }
    }
    for &(i, j) in &pairs {
        if !(aromatic[i] && aromatic[j]) {
            continue;
        }
        let atoms = union_atoms(&rings[i].atoms, &rings[j].atoms);
        let bonds: HashSet<usize> = ring_bonds[i].union(&ring_bonds[j]).copied().collect();
        if huckel(&mol, &atoms, &bonds, &aromatic_bonds, &input_aromatic) {
            atoms.iter().for_each(|&a| satisfied[a] = true);
        }
    }
    if let Some(atom) = (0..mol.num_atoms()).find(|&a| input_aromatic[a] && !satisfied[a]) {
        return Err(GraphError::Aromaticity { atom });
    }

    let mut ring_atoms = vec![false; mol.num_atoms()];
    for (r, ring) in rings.iter().enumerate() {
        if aromatic[r] {
            ring.atoms.iter().for_each(|&a| ring_atoms[a] = true);
        }
    }
    for (i, atom) in mol.atoms_mut().iter_mut().enumerate() {
        atom.aromatic = ring_atoms[i];
    }
    for (i, bond) in mol.bonds_mut().iter_mut().enumerate() {
        if aromatic_bonds.contains(&i) {
            bond.order = BondOrder::Aromatic;
        } else if bond.order == BondOrder::Aromatic {
            bond.order = BondOrder::Single;
        }
    }
    let mut rings = rings;
    for (r, ring) in rings.iter_mut().enumerate() {
        ring.aromatic = aromatic[r];
    }
    mol.set_rings(rings);
    Ok(mol)
}

fn union_atoms(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn huckel(
    mol: &Molecule,
    atoms: &[usize],
    bonds: &HashSet<usize>,
    aromatic_bonds: &HashSet<usize>,
    input_aromatic: &[bool],
) -> bool {
    let mut total = 0u32;
    for &a in atoms {
        match pi_electrons(mol, a, bonds, aromatic_bonds, input_aromatic) {
            Some(e) => total += e,
            None => return false,
        }
    }
    total >= 2 && (total - 2) % 4 == 0
}

/// π electrons atom `a` donates to the system whose bonds are `bonds`, or
/// `None` when the atom cannot be part of a planar conjugated ring.
fn pi_electrons(
    mol: &Molecule,
    a: usize,
    bonds: &HashSet<usize>,
    aromatic_bonds: &HashSet<usize>,
    input_aromatic: &[bool],
) -> Option<u32> {
    let mut inner_double = false;
    let mut fused_double = false;
    let mut exo_double = false;
    let mut pending_double = false;
    for nb in mol.neighbors(a) {
        let bond = mol.bond(nb.bond);
        match bond.order {
            BondOrder::Double => {
                if bonds.contains(&nb.bond) {
                    inner_double = true;
                } else if aromatic_bonds.contains(&nb.bond) {
                    fused_double = true;
                } else if bond.in_ring {
                    // belongs to a neighbouring ring not (yet) known aromatic
                    pending_double = true;
                } else {
                    exo_double = true;
                }
            }
            BondOrder::Triple => return None,
            BondOrder::Single | BondOrder::Aromatic => {}
        }
    }
    if inner_double || fused_double {
        return Some(1);
    }
    if pending_double {
        return None;
    }
    if exo_double {
        return Some(0);
    }
    let atom = mol.atom(a);
    if input_aromatic[a] {
        let used = mol.bond_valence(a) + atom.total_h();
        let target = atom
            .element
            .allowed_valences(atom.charge)
            .iter()
            .map(|&v| v as u32)
            .find(|&v| v >= used)?;
        match target - used {
            1 => return Some(1),
            0 => {}
            _ => return None,
        }
    }
    let sigma = mol.degree(a) as u32 + atom.total_h();
    match (atom.element.group()?, atom.charge, sigma) {
        (15, 0, 3) | (16, 0, 2) | (14, -1, 3) => Some(2),
        (14, 1, 3) | (13, 0, 3) => Some(0),
        _ => None,
    }
}
