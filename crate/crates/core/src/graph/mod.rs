//! Molecular graph: atoms, bonds, rings and the perception passes that
//! decorate a freshly built graph (implicit hydrogens, SSSR, aromaticity).

mod aromaticity;
mod kekule;
mod rings;
mod valence;

pub use aromaticity::perceive_aromaticity;
pub use kekule::kekulize;
pub use rings::perceive_rings;
pub use valence::assign_implicit_hydrogens;

use crate::element::Element;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("atom {atom}: bonded valence {valence} exceeds every allowed valence of {element}")]
    Valence {
        atom: usize,
        element: Element,
        valence: u32,
    },
    #[error("atom {atom}: aromatic atom is not part of any ring satisfying the 4n+2 rule")]
    Aromaticity { atom: usize },
    #[error("bond {0}-{1}: endpoints must be distinct atoms")]
    SelfLoop(usize, usize),
    #[error("bond {0}-{1}: atoms are already bonded")]
    DuplicateBond(usize, usize),
    #[error("bond references atom {0} which does not exist")]
    MissingAtom(usize),
}

/// Tetrahedral parity in SMILES `@`/`@@` semantics.
///
/// A stored tag is relative to the atom's *reference order*: the implicit or
/// bracket hydrogen first (when the atom carries one), then bonded neighbours
/// by ascending atom index. Looking from the first reference neighbour, the
/// remaining ones turn anticlockwise (`@`) or clockwise (`@@`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Chirality {
    #[default]
    None,
    Clockwise,
    Anticlockwise,
}

impl Chirality {
    pub fn inverted(self) -> Chirality {
        match self {
            Chirality::None => Chirality::None,
            Chirality::Clockwise => Chirality::Anticlockwise,
            Chirality::Anticlockwise => Chirality::Clockwise,
        }
    }

    /// Re-express the tag after the neighbour list is permuted with the
    /// given parity.
    pub fn with_parity(self, odd: bool) -> Chirality {
        if odd {
            self.inverted()
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to bonded valence, counting aromatic bonds as one.
    pub fn valence(self) -> u32 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

/// `/` or `\` annotation. Recorded but never interpreted as E/Z stereo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDirection {
    Up,
    Down,
}

impl BondDirection {
    pub fn flipped(self) -> BondDirection {
        match self {
            BondDirection::Up => BondDirection::Down,
            BondDirection::Down => BondDirection::Up,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    /// Hydrogen count written inside brackets.
    pub explicit_h: u8,
    /// Hydrogens inferred from the valence model; zero for bracket atoms.
    pub implicit_h: u8,
    pub aromatic: bool,
    pub isotope: Option<u16>,
    pub chirality: Chirality,
    /// Written in brackets in the source (its hydrogen count is fixed).
    pub bracket: bool,
    pub index: usize,
}

impl Atom {
    pub fn new(element: Element) -> Atom {
        Atom {
            element,
            charge: 0,
            explicit_h: 0,
            implicit_h: 0,
            aromatic: false,
            isotope: None,
            chirality: Chirality::None,
            bracket: false,
            index: 0,
        }
    }

    pub fn total_h(&self) -> u32 {
        self.explicit_h as u32 + self.implicit_h as u32
    }

    pub fn atomic_number(&self) -> u8 {
        self.element.atomic_number()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
    pub in_ring: bool,
    /// Direction annotation, read from `begin` towards `end`.
    pub direction: Option<BondDirection>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }

    pub fn connects(&self, a: usize, b: usize) -> bool {
        (self.begin == a && self.end == b) || (self.begin == b && self.end == a)
    }

    /// Direction as seen when walking from `from` to the other end.
    pub fn direction_from(&self, from: usize) -> Option<BondDirection> {
        self.direction
            .map(|d| if from == self.begin { d } else { d.flipped() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    /// Cyclically ordered, starting at the lowest atom index and continuing
    /// towards its lower-indexed ring neighbour.
    pub atoms: Vec<usize>,
    pub aromatic: bool,
}

impl Ring {
    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.atoms.contains(&atom)
    }

    /// Consecutive atom pairs, including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.atoms.len();
        (0..n).map(move |i| (self.atoms[i], self.atoms[(i + 1) % n]))
    }

    /// Sorted symbols of the non-carbon ring members.
    pub fn heteroatoms(&self, mol: &Molecule) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = self
            .atoms
            .iter()
            .map(|&a| mol.atoms[a].element)
            .filter(|e| *e != Element::C)
            .map(Element::symbol)
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub atom: usize,
    pub bond: usize,
}

/// An attributed molecular graph.
///
/// Construct through [`MoleculeBuilder`]; after `build` the molecule carries
/// implicit hydrogens, its SSSR and aromaticity, and should be treated as
/// immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<Neighbor>>,
    rings: Vec<Ring>,
    components: usize,
}

impl Molecule {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Neighbours of `atom`, by ascending neighbour index.
    pub fn neighbors(&self, atom: usize) -> &[Neighbor] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|n| n.atom == b)
            .map(|n| n.bond)
    }

    /// Bonded valence with aromatic bonds counted as one.
    pub fn bond_valence(&self, atom: usize) -> u32 {
        self.adjacency[atom]
            .iter()
            .map(|n| self.bonds[n.bond].order.valence())
            .sum()
    }

    pub fn has_multiple_bond(&self, atom: usize) -> bool {
        self.adjacency[atom].iter().any(|n| {
            matches!(
                self.bonds[n.bond].order,
                BondOrder::Double | BondOrder::Triple
            )
        })
    }

    pub fn is_ring_atom(&self, atom: usize) -> bool {
        self.adjacency[atom]
            .iter()
            .any(|n| self.bonds[n.bond].in_ring)
    }

    /// Cyclomatic number `|bonds| - |atoms| + components`.
    pub fn cyclomatic_number(&self) -> usize {
        (self.bonds.len() + self.components).saturating_sub(self.atoms.len())
    }

    /// Total hydrogen count: explicit, implicit, and hydrogen atoms.
    pub fn total_hydrogens(&self) -> u32 {
        self.atoms
            .iter()
            .map(|a| a.total_h() + u32::from(a.element == Element::H))
            .sum()
    }

    /// Neighbour list in the reference order used by stored chirality tags.
    /// `None` stands for the atom's own hydrogen.
    pub fn reference_order(&self, atom: usize) -> Vec<Option<usize>> {
        let mut order = Vec::with_capacity(4);
        if self.atoms[atom].total_h() > 0 {
            order.push(None);
        }
        order.extend(self.adjacency[atom].iter().map(|n| Some(n.atom)));
        order
    }

    /// Chirality of `atom` re-expressed for the neighbour listing `order`,
    /// which must be a permutation of [`Molecule::reference_order`].
    pub fn chirality_for_order(&self, atom: usize, order: &[Option<usize>]) -> Chirality {
        let tag = self.atoms[atom].chirality;
        if tag == Chirality::None {
            return tag;
        }
        let reference = self.reference_order(atom);
        match permutation_parity(&reference, order) {
            Some(odd) => tag.with_parity(odd),
            None => tag,
        }
    }

    /// Same graph with atom `i` moved to position `new_index[i]`; chirality
    /// tags are rewritten so the stereo configuration is unchanged.
    pub fn renumbered(&self, new_index: &[usize]) -> Molecule {
        let n = self.atoms.len();
        assert_eq!(new_index.len(), n, "renumbering must cover every atom");
        let mut atoms: Vec<Option<Atom>> = vec![None; n];
        for (old, atom) in self.atoms.iter().enumerate() {
            let mut a = atom.clone();
            a.index = new_index[old];
            atoms[new_index[old]] = Some(a);
        }
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| a.expect("renumbering must be a permutation"))
            .collect();
        let bonds: Vec<Bond> = self
            .bonds
            .iter()
            .map(|b| Bond {
                begin: new_index[b.begin],
                end: new_index[b.end],
                ..b.clone()
            })
            .collect();
        let mut out = Molecule::assemble(atoms, bonds).expect("renumbering preserves validity");
        for old in 0..n {
            let tag = self.atoms[old].chirality;
            if tag == Chirality::None {
                continue;
            }
            // old reference order expressed in new indices
            let mapped: Vec<Option<usize>> = self
                .reference_order(old)
                .into_iter()
                .map(|x| x.map(|a| new_index[a]))
                .collect();
            let new_atom = new_index[old];
            out.atoms[new_atom].chirality = Chirality::None;
            let reference = out.reference_order(new_atom);
            let odd = permutation_parity(&mapped, &reference).unwrap_or(false);
            out.atoms[new_atom].chirality = tag.with_parity(odd);
        }
        out.rings = self
            .rings
            .iter()
            .map(|r| {
                rings::normalize_ring(
                    r.atoms.iter().map(|&a| new_index[a]).collect(),
                    r.aromatic,
                )
            })
            .collect();
        out
    }

    pub(crate) fn assemble(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Molecule, GraphError> {
        let n = atoms.len();
        let mut adjacency: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        for (i, b) in bonds.iter().enumerate() {
            if b.begin >= n {
                return Err(GraphError::MissingAtom(b.begin));
            }
            if b.end >= n {
                return Err(GraphError::MissingAtom(b.end));
            }
            if b.begin == b.end {
                return Err(GraphError::SelfLoop(b.begin, b.end));
            }
            if adjacency[b.begin].iter().any(|x| x.atom == b.end) {
                return Err(GraphError::DuplicateBond(b.begin, b.end));
            }
            adjacency[b.begin].push(Neighbor { atom: b.end, bond: i });
            adjacency[b.end].push(Neighbor { atom: b.begin, bond: i });
        }
        for list in &mut adjacency {
            list.sort_by_key(|x| x.atom);
        }
        let components = count_components(&adjacency);
        Ok(Molecule {
            atoms,
            bonds,
            adjacency,
            rings: Vec::new(),
            components,
        })
    }

    pub(crate) fn atoms_mut(&mut self) -> &mut [Atom] {
        &mut self.atoms
    }

    pub(crate) fn bonds_mut(&mut self) -> &mut [Bond] {
        &mut self.bonds
    }

    pub(crate) fn set_rings(&mut self, rings: Vec<Ring>) {
        for b in &mut self.bonds {
            b.in_ring = false;
        }
        for ring in &rings {
            for (a, b) in ring.edges() {
                if let Some(bi) = self.bond_between(a, b) {
                    self.bonds[bi].in_ring = true;
                }
            }
        }
        self.rings = rings;
    }
}

fn count_components(adjacency: &[Vec<Neighbor>]) -> usize {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(a) = stack.pop() {
            for nb in &adjacency[a] {
                if !seen[nb.atom] {
                    seen[nb.atom] = true;
                    stack.push(nb.atom);
                }
            }
        }
    }
    count
}

/// Parity of the permutation taking `from` to `to` (`true` = odd), or `None`
/// when the lists are not permutations of each other.
pub fn permutation_parity<T: PartialEq>(from: &[T], to: &[T]) -> Option<bool> {
    if from.len() != to.len() {
        return None;
    }
    let mut perm = Vec::with_capacity(from.len());
    for x in to {
        perm.push(from.iter().position(|y| y == x)?);
    }
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    Some(odd)
}

/// Incremental construction of a [`Molecule`].
#[derive(Debug, Default, Clone)]
pub struct MoleculeBuilder {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
}

impl MoleculeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_atom(&mut self, mut atom: Atom) -> usize {
        let index = self.atoms.len();
        atom.index = index;
        self.atoms.push(atom);
        index
    }

    pub fn add_bond(&mut self, begin: usize, end: usize, order: BondOrder) -> Result<usize, GraphError> {
        self.add_directed_bond(begin, end, order, None)
    }

    pub fn add_directed_bond(
        &mut self,
        begin: usize,
        end: usize,
        order: BondOrder,
        direction: Option<BondDirection>,
    ) -> Result<usize, GraphError> {
        if begin >= self.atoms.len() {
            return Err(GraphError::MissingAtom(begin));
        }
        if end >= self.atoms.len() {
            return Err(GraphError::MissingAtom(end));
        }
        if begin == end {
            return Err(GraphError::SelfLoop(begin, end));
        }
        if self.bonds.iter().any(|b| b.connects(begin, end)) {
            return Err(GraphError::DuplicateBond(begin, end));
        }
        self.bonds.push(Bond {
            begin,
            end,
            order,
            in_ring: false,
            direction,
        });
        Ok(self.bonds.len() - 1)
    }

    pub fn atom_mut(&mut self, index: usize) -> &mut Atom {
        &mut self.atoms[index]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Graph only: no hydrogens assigned, no rings, no aromaticity.
    pub fn build_raw(self) -> Result<Molecule, GraphError> {
        Molecule::assemble(self.atoms, self.bonds)
    }

    /// Graph with every perception pass applied.
    pub fn build(self) -> Result<Molecule, GraphError> {
        let mol = self.build_raw()?;
        perceive(mol)
    }
}

/// Runs implicit hydrogen assignment, ring perception and aromaticity.
pub fn perceive(mol: Molecule) -> Result<Molecule, GraphError> {
    let mut mol = assign_implicit_hydrogens(mol)?;
    let rings = perceive_rings(&mol);
    mol.set_rings(rings);
    perceive_aromaticity(mol)
}
