use super::{GraphError, Molecule};

/// Fill `implicit_h` for every non-bracket atom from the organic-subset
/// default valences, and check bracket atoms against the charge-adjusted
/// valence model.
///
/// Aliphatic atoms take the smallest default valence that accommodates their
/// bonds. Aromatic atoms use the first default valence and reserve one
/// electron for the ring unless they already carry a double or triple bond.
pub fn assign_implicit_hydrogens(mut mol: Molecule) -> Result<Molecule, GraphError> {
    for i in 0..mol.num_atoms() {
        let valence = mol.bond_valence(i);
        let has_multiple = mol.has_multiple_bond(i);
        let atom = &mol.atoms()[i];
        let allowed = atom.element.allowed_valences(atom.charge);
        let max_allowed = allowed.iter().copied().max().map(u32::from);

        if atom.bracket {
            let used = valence + atom.explicit_h as u32;
            if let Some(max) = max_allowed {
                if used > max {
                    return Err(GraphError::Valence {
                        atom: i,
                        element: atom.element,
                        valence: used,
                    });
                }
            }
            mol.atoms_mut()[i].implicit_h = 0;
            continue;
        }

        let Some(max) = max_allowed else {
            mol.atoms_mut()[i].implicit_h = 0;
            continue;
        };
        if valence > max {
            return Err(GraphError::Valence {
                atom: i,
                element: atom.element,
                valence,
            });
        }
        let implicit = if atom.aromatic {
            let first = allowed[0] as u32;
            let reserved = u32::from(!has_multiple);
            first.saturating_sub(valence + reserved)
        } else {
            let target = allowed
                .iter()
                .map(|&v| v as u32)
                .find(|&v| v >= valence)
                .unwrap_or(max);
            target - valence
        };
        mol.atoms_mut()[i].implicit_h = implicit as u8;
    }
    Ok(mol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Element;
    use crate::graph::{Atom, BondOrder, MoleculeBuilder};

    fn chain(elements: &[Element], bonds: &[(usize, usize, BondOrder)]) -> MoleculeBuilder {
        let mut b = MoleculeBuilder::new();
        for &e in elements {
            b.add_atom(Atom::new(e));
        }
        for &(x, y, o) in bonds {
            b.add_bond(x, y, o).unwrap();
        }
        b
    }

    #[test]
    fn butanol_has_ten_hydrogens() {
        use BondOrder::Single;
        let b = chain(
            &[Element::C, Element::C, Element::O, Element::C, Element::C],
            &[(0, 1, Single), (1, 2, Single), (1, 3, Single), (3, 4, Single)],
        );
        let m = assign_implicit_hydrogens(b.build_raw().unwrap()).unwrap();
        assert_eq!(m.total_hydrogens(), 10);
    }

    #[test]
    fn quaternary_ammonium_bracket_atom_is_accepted() {
        use BondOrder::Single;
        let mut b = chain(
            &[Element::N, Element::C, Element::C, Element::C, Element::C],
            &[(0, 1, Single), (0, 2, Single), (0, 3, Single), (0, 4, Single)],
        );
        let n = b.atom_mut(0);
        n.charge = 1;
        n.bracket = true;
        let m = assign_implicit_hydrogens(b.build_raw().unwrap()).unwrap();
        assert_eq!(m.atom(0).implicit_h, 0);
    }

    #[test]
    fn overbonded_carbon_is_an_error() {
        use BondOrder::Single;
        let b = chain(
            &[Element::C, Element::C, Element::C, Element::C, Element::C, Element::C],
            &[(0, 1, Single), (0, 2, Single), (0, 3, Single), (0, 4, Single), (0, 5, Single)],
        );
        let err = assign_implicit_hydrogens(b.build_raw().unwrap()).unwrap_err();
        assert!(matches!(err, GraphError::Valence { atom: 0, valence: 5, .. }));
    }

    #[test]
    fn hypervalent_sulfur_picks_next_valence() {
        use BondOrder::{Double, Single};
        // CS(=O)(=O)O: sulfur valence 6, no implicit hydrogen
        let b = chain(
            &[Element::C, Element::S, Element::O, Element::O, Element::O],
            &[(0, 1, Single), (1, 2, Double), (1, 3, Double), (1, 4, Single)],
        );
        let m = assign_implicit_hydrogens(b.build_raw().unwrap()).unwrap();
        assert_eq!(m.atom(1).implicit_h, 0);
        assert_eq!(m.atom(4).implicit_h, 1);
    }
}
