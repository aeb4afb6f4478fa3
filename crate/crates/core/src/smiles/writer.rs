use std::fmt::Write as _;

use crate::graph::{kekulize, BondDirection, BondOrder, Chirality, Molecule};

/// Emit SMILES visiting atoms in input order: each component starts at its
/// lowest-indexed atom and neighbours are explored by ascending index.
pub fn write(mol: &Molecule) -> String {
    let key: Vec<usize> = (0..mol.num_atoms()).collect();
    write_ordered(mol, &key, None).0
}

/// Kekulé form: aromatic bonds replaced by alternating single and double
/// bonds and all atoms written uppercase. `None` when no Kekulé structure
/// exists.
pub fn write_kekule(mol: &Molecule) -> Option<String> {
    let orders = kekulize(mol)?;
    let key: Vec<usize> = (0..mol.num_atoms()).collect();
    Some(write_ordered(mol, &key, Some(&orders)).0)
}

struct Tree {
    /// Atoms in depth-first order.
    order: Vec<usize>,
    parent_bond: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Ring bonds per atom, in the order their digits are written.
    ring_bonds: Vec<Vec<usize>>,
}

fn build_tree(mol: &Molecule, key: &[usize]) -> Tree {
    let n = mol.num_atoms();
    let mut sorted_nbrs: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|a| mol.neighbors(a).iter().map(|nb| (nb.atom, nb.bond)).collect())
        .collect();
    for list in &mut sorted_nbrs {
        list.sort_by_key(|&(a, _)| key[a]);
    }
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&a| key[a]);

    let mut tree = Tree {
        order: Vec::with_capacity(n),
        parent_bond: vec![None; n],
        children: vec![Vec::new(); n],
        ring_bonds: vec![Vec::new(); n],
    };
    let mut visited = vec![false; n];
    let mut used_bond = vec![false; mol.num_bonds()];
    for &start in &starts {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        tree.order.push(start);
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (a, ref mut cursor)) = stack.last_mut() {
            let Some(&(b, bond)) = sorted_nbrs[a].get(*cursor) else {
                stack.pop();
                continue;
            };
            *cursor += 1;
            if used_bond[bond] {
                continue;
            }
            used_bond[bond] = true;
            if visited[b] {
                // back edge to an ancestor: b opens the ring, a closes it
                tree.ring_bonds[b].push(bond);
                tree.ring_bonds[a].push(bond);
            } else {
                visited[b] = true;
                tree.order.push(b);
                tree.parent_bond[b] = Some(bond);
                tree.children[a].push(b);
                stack.push((b, 0));
            }
        }
    }
    tree
}

/// Write with components and neighbours visited by ascending `key`.
/// `kekule` overrides bond orders and suppresses aromatic notation.
///
/// Returns the string and the atoms in the order they were written.
pub(crate) fn write_ordered(
    mol: &Molecule,
    key: &[usize],
    kekule: Option<&[BondOrder]>,
) -> (String, Vec<usize>) {
    let tree = build_tree(mol, key);
    let mut w = Emitter {
        mol,
        kekule,
        tree: &tree,
        out: String::with_capacity(mol.num_atoms() * 3),
        digits: Vec::new(),
        digit_of_bond: vec![0; mol.num_bonds()],
        written: Vec::with_capacity(mol.num_atoms()),
    };
    let mut first = true;
    for &a in &tree.order {
        if tree.parent_bond[a].is_none() {
            if !first {
                w.out.push('.');
            }
            first = false;
            w.emit_from(a);
        }
    }
    (w.out, w.written)
}

struct Emitter<'a> {
    mol: &'a Molecule,
    kekule: Option<&'a [BondOrder]>,
    tree: &'a Tree,
    out: String,
    /// Ring bond currently holding each digit (index = digit - 1).
    digits: Vec<Option<usize>>,
    digit_of_bond: Vec<usize>,
    written: Vec<usize>,
}

impl Emitter<'_> {
    fn order(&self, bond: usize) -> BondOrder {
        match self.kekule {
            Some(orders) => orders[bond],
            None => self.mol.bond(bond).order,
        }
    }

    fn aromatic(&self, atom: usize) -> bool {
        self.kekule.is_none() && self.mol.atom(atom).aromatic
    }

    fn emit_from(&mut self, start: usize) {
        let mut a = start;
        loop {
            self.emit_atom(a);
            let children = &self.tree.children[a];
            let Some((&last, branches)) = children.split_last() else {
                return;
            };
            for &c in branches {
                self.out.push('(');
                self.emit_bond(a, c);
                self.emit_from(c);
                self.out.push(')');
            }
            self.emit_bond(a, last);
            a = last;
        }
    }

    fn emit_bond(&mut self, from: usize, to: usize) {
        let bond = self.tree.parent_bond[to].expect("tree edge");
        let sym = self.bond_symbol(bond, from, to);
        self.out.push_str(sym);
    }

    fn bond_symbol(&self, bond: usize, from: usize, to: usize) -> &'static str {
        let both_aromatic = self.aromatic(from) && self.aromatic(to);
        match self.order(bond) {
            BondOrder::Single => match self.mol.bond(bond).direction_from(from) {
                Some(BondDirection::Up) => "/",
                Some(BondDirection::Down) => "\\",
                None if both_aromatic => "-",
                None => "",
            },
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
            BondOrder::Aromatic if both_aromatic => "",
            BondOrder::Aromatic => ":",
        }
    }

    fn emit_atom(&mut self, a: usize) {
        self.written.push(a);
        let mol = self.mol;
        let tree = self.tree;

        // neighbour listing as a reader of this string will see it
        let mut listing: Vec<Option<usize>> = Vec::with_capacity(4);
        if let Some(pb) = tree.parent_bond[a] {
            listing.push(Some(mol.bond(pb).other(a)));
        }
        if mol.atom(a).total_h() > 0 {
            listing.push(None);
        }
        let (closing, opening): (Vec<usize>, Vec<usize>) = tree.ring_bonds[a]
            .iter()
            .partition(|&&b| self.digit_of_bond[b] != 0);
        for &b in closing.iter().chain(&opening) {
            listing.push(Some(mol.bond(b).other(a)));
        }
        listing.extend(tree.children[a].iter().map(|&c| Some(c)));
        let chirality = mol.chirality_for_order(a, &listing);

        self.atom_text(a, chirality);

        for b in closing {
            let d = self.digit_of_bond[b];
            self.digits[d - 1] = None;
            push_digit(&mut self.out, d);
        }
        for b in opening {
            let d = match self.digits.iter().position(Option::is_none) {
                Some(i) => i + 1,
                None => {
                    self.digits.push(None);
                    self.digits.len()
                }
            };
            self.digits[d - 1] = Some(b);
            self.digit_of_bond[b] = d;
            let other = mol.bond(b).other(a);
            let sym = self.bond_symbol(b, a, other);
            self.out.push_str(sym);
            push_digit(&mut self.out, d);
        }
    }

    fn atom_text(&mut self, a: usize, chirality: Chirality) {
        let atom = self.mol.atom(a);
        let aromatic = self.aromatic(a);
        let total_h = atom.total_h();
        let symbol = atom.element.symbol();
        let bare = atom.element.is_organic_subset()
            && atom.charge == 0
            && atom.isotope.is_none()
            && chirality == Chirality::None
            && (!aromatic || matches!(symbol, "B" | "C" | "N" | "O" | "P" | "S"))
            && self.default_hydrogens(a, aromatic) == Some(total_h);
        if bare {
            if aromatic {
                self.out.push_str(&symbol.to_ascii_lowercase());
            } else {
                self.out.push_str(symbol);
            }
            return;
        }
        self.out.push('[');
        if let Some(iso) = atom.isotope {
            let _ = write!(self.out, "{iso}");
        }
        if aromatic && matches!(symbol, "B" | "C" | "N" | "O" | "P" | "S" | "Se" | "As" | "Te") {
            self.out.push_str(&symbol.to_ascii_lowercase());
        } else {
            self.out.push_str(symbol);
        }
        match chirality {
            Chirality::Anticlockwise => self.out.push('@'),
            Chirality::Clockwise => self.out.push_str("@@"),
            Chirality::None => {}
        }
        match total_h {
            0 => {}
            1 => self.out.push('H'),
            h => {
                let _ = write!(self.out, "H{h}");
            }
        }
        match atom.charge {
            0 => {}
            1 => self.out.push('+'),
            -1 => self.out.push('-'),
            c if c > 0 => {
                let _ = write!(self.out, "+{c}");
            }
            c => {
                let _ = write!(self.out, "-{}", -c);
            }
        }
        self.out.push(']');
    }

    /// Hydrogen count a reader would infer for the atom written bare.
    fn default_hydrogens(&self, a: usize, aromatic: bool) -> Option<u32> {
        let mol = self.mol;
        let allowed = mol.atom(a).element.default_valences();
        let mut valence = 0;
        let mut multiple = false;
        for nb in mol.neighbors(a) {
            let order = self.order(nb.bond);
            valence += order.valence();
            multiple |= matches!(order, BondOrder::Double | BondOrder::Triple);
        }
        let max = allowed.iter().copied().max()? as u32;
        if valence > max {
            return None;
        }
        Some(if aromatic {
            (allowed[0] as u32).saturating_sub(valence + u32::from(!multiple))
        } else {
            let target = allowed.iter().map(|&v| v as u32).find(|&v| v >= valence)?;
            target - valence
        })
    }
}

fn push_digit(out: &mut String, d: usize) {
    if d < 10 {
        out.push(char::from(b'0' + d as u8));
    } else {
        let _ = write!(out, "%{d:02}");
    }
}
