use std::collections::{BTreeMap, HashSet};

use super::lexer::{Lexer, SmilesToken, TokenKind};
use super::{DiagnosticKind, ParseDiagnostic};
use crate::element::Element;
use crate::graph::{
    perceive, permutation_parity, Atom, Bond, BondDirection, BondOrder, Chirality, GraphError,
    Molecule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSym {
    Single,
    Double,
    Triple,
    Aromatic,
    Up,
    Down,
}

impl BondSym {
    fn from_byte(b: u8) -> BondSym {
        match b {
            b'=' => BondSym::Double,
            b'#' => BondSym::Triple,
            b':' => BondSym::Aromatic,
            b'/' => BondSym::Up,
            b'\\' => BondSym::Down,
            _ => BondSym::Single,
        }
    }

    fn order(self) -> BondOrder {
        match self {
            BondSym::Single | BondSym::Up | BondSym::Down => BondOrder::Single,
            BondSym::Double => BondOrder::Double,
            BondSym::Triple => BondOrder::Triple,
            BondSym::Aromatic => BondOrder::Aromatic,
        }
    }

    fn direction(self) -> Option<BondDirection> {
        match self {
            BondSym::Up => Some(BondDirection::Up),
            BondSym::Down => Some(BondDirection::Down),
            _ => None,
        }
    }
}

/// Neighbour slot in the order the SMILES string lists them, which is the
/// order `@`/`@@` refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Atom(usize),
    Hydrogen,
    PendingRing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Last {
    Start,
    Atom,
    Bond,
    Ring,
    Open,
    Close,
    Dot,
}

struct OpenRing {
    atom: usize,
    sym: Option<BondSym>,
    position: usize,
    slot: usize,
}

#[derive(Default)]
struct Parser {
    atoms: Vec<Atom>,
    positions: Vec<usize>,
    bonds: Vec<Bond>,
    bonded: HashSet<(usize, usize)>,
    slots: Vec<Vec<Slot>>,
    chirality: Vec<Chirality>,
}

fn err(kind: DiagnosticKind, position: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic::new(kind, position, message)
}

/// Parse a SMILES string into a perceived [`Molecule`].
pub fn parse(smiles: &str) -> Result<Molecule, ParseDiagnostic> {
    parse_bytes(smiles.as_bytes())
}

/// Like [`parse`], for arbitrary bytes; anything non-ASCII is rejected.
pub fn parse_bytes(input: &[u8]) -> Result<Molecule, ParseDiagnostic> {
    if input.is_empty() {
        return Err(err(DiagnosticKind::EmptyInput, 0, "empty SMILES"));
    }
    let mut p = Parser::default();
    let mut lexer = Lexer::new(input);
    let mut last = Last::Start;
    let mut prev: Option<usize> = None;
    let mut pending: Option<(BondSym, usize)> = None;
    // context before the pending bond symbol
    let mut before_bond = Last::Start;
    let mut branches: Vec<(usize, usize)> = Vec::new();
    let mut rings: BTreeMap<u32, OpenRing> = BTreeMap::new();

    while let Some(tok) = lexer.next_token() {
        let tok = tok?;
        match tok.kind {
            TokenKind::OrganicAtom | TokenKind::BracketAtom => {
                let atom = if tok.kind == TokenKind::OrganicAtom {
                    organic_atom(&tok)
                } else {
                    bracket_atom(&tok)?
                };
                let idx = p.add_atom(atom.0, atom.1, tok.position, prev);
                if let Some(from) = prev {
                    let sym = pending.take().map(|(s, _)| s);
                    p.add_bond(from, idx, sym, tok.position)?;
                }
                pending = None;
                prev = Some(idx);
                last = Last::Atom;
            }
            TokenKind::Bond => {
                if !matches!(last, Last::Atom | Last::Ring | Last::Close | Last::Open) {
                    return Err(err(
                        DiagnosticKind::UnknownElement,
                        tok.position,
                        "bond symbol must follow an atom",
                    ));
                }
                before_bond = last;
                pending = Some((BondSym::from_byte(tok.text.as_bytes()[0]), tok.position));
                last = Last::Bond;
            }
            TokenKind::RingClosureDigit => {
                let ok = match last {
                    Last::Atom | Last::Ring => true,
                    Last::Bond => matches!(before_bond, Last::Atom | Last::Ring),
                    _ => false,
                };
                let Some(atom) = prev.filter(|_| ok) else {
                    return Err(err(
                        DiagnosticKind::UnclosedRing,
                        tok.position,
                        "ring-closure digit must follow an atom",
                    ));
                };
                let number: u32 = tok.text.trim_start_matches('%').parse().unwrap_or(0);
                let sym = pending.take().map(|(s, _)| s);
                match rings.remove(&number) {
                    Some(open) => p.close_ring(open, atom, sym, tok.position)?,
                    None => {
                        let slot = p.slots[atom].len();
                        p.slots[atom].push(Slot::PendingRing);
                        rings.insert(
                            number,
                            OpenRing {
                                atom,
                                sym,
                                position: tok.position,
                                slot,
                            },
                        );
                    }
                }
                last = Last::Ring;
            }
            TokenKind::BranchOpen => {
                let Some(atom) = prev.filter(|_| matches!(last, Last::Atom | Last::Ring | Last::Close))
                else {
                    return Err(err(
                        DiagnosticKind::UnbalancedBranch,
                        tok.position,
                        "branch must follow an atom",
                    ));
                };
                branches.push((atom, tok.position));
                last = Last::Open;
            }
            TokenKind::BranchClose => {
                if !matches!(last, Last::Atom | Last::Ring | Last::Close) {
                    let (kind, message) = if last == Last::Bond {
                        (DiagnosticKind::UnknownElement, "bond symbol without a following atom")
                    } else {
                        (DiagnosticKind::UnbalancedBranch, "empty branch")
                    };
                    let position = pending.map(|(_, pos)| pos).unwrap_or(tok.position);
                    return Err(err(kind, position, message));
                }
                let Some((atom, _)) = branches.pop() else {
                    return Err(err(
                        DiagnosticKind::UnbalancedBranch,
                        tok.position,
                        "')' without matching '('",
                    ));
                };
                prev = Some(atom);
                last = Last::Close;
            }
            TokenKind::Dot => {
                if !matches!(last, Last::Atom | Last::Ring | Last::Close) {
                    let position = pending.map(|(_, pos)| pos).unwrap_or(tok.position);
                    return Err(err(
                        DiagnosticKind::UnknownElement,
                        position,
                        "'.' must separate two atoms",
                    ));
                }
                prev = None;
                last = Last::Dot;
            }
        }
    }

    // problems only visible at end of input, reported in source order
    let mut trailing: Vec<ParseDiagnostic> = Vec::new();
    if let Some((_, pos)) = pending {
        trailing.push(err(
            DiagnosticKind::UnknownElement,
            pos,
            "bond symbol without a following atom",
        ));
    }
    if let Some(&(_, pos)) = branches.first() {
        trailing.push(err(DiagnosticKind::UnbalancedBranch, pos, "unclosed branch"));
    }
    if let Some(open) = rings.values().min_by_key(|r| r.position) {
        trailing.push(err(
            DiagnosticKind::UnclosedRing,
            open.position,
            "ring bond is never closed",
        ));
    }
    if last == Last::Dot {
        trailing.push(err(
            DiagnosticKind::UnknownElement,
            input.len() - 1,
            "'.' must separate two atoms",
        ));
    }
    if let Some(first) = trailing.into_iter().min_by_key(|d| d.position) {
        return Err(first);
    }
    p.finish()
}

impl Parser {
    fn add_atom(&mut self, mut atom: Atom, hydrogen_slot: bool, position: usize, prev: Option<usize>) -> usize {
        let idx = self.atoms.len();
        atom.index = idx;
        let tag = atom.chirality;
        atom.chirality = Chirality::None;
        self.atoms.push(atom);
        self.positions.push(position);
        self.chirality.push(tag);
        let mut slots = Vec::with_capacity(4);
        if let Some(from) = prev {
            slots.push(Slot::Atom(from));
        }
        if hydrogen_slot {
            slots.push(Slot::Hydrogen);
        }
        self.slots.push(slots);
        if let Some(from) = prev {
            self.slots[from].push(Slot::Atom(idx));
        }
        idx
    }

    fn add_bond(
        &mut self,
        from: usize,
        to: usize,
        sym: Option<BondSym>,
        position: usize,
    ) -> Result<(), ParseDiagnostic> {
        if from == to {
            return Err(err(
                DiagnosticKind::UnclosedRing,
                position,
                "ring closure bonds an atom to itself",
            ));
        }
        if !self.bonded.insert((from.min(to), from.max(to))) {
            return Err(err(
                DiagnosticKind::UnclosedRing,
                position,
                "ring closure duplicates an existing bond",
            ));
        }
        let order = match sym {
            Some(s) => s.order(),
            None if self.atoms[from].aromatic && self.atoms[to].aromatic => BondOrder::Aromatic,
            None => BondOrder::Single,
        };
        self.bonds.push(Bond {
            begin: from,
            end: to,
            order,
            in_ring: false,
            direction: sym.and_then(BondSym::direction),
        });
        Ok(())
    }

    fn close_ring(
        &mut self,
        open: OpenRing,
        atom: usize,
        sym: Option<BondSym>,
        position: usize,
    ) -> Result<(), ParseDiagnostic> {
        let sym = match (open.sym, sym) {
            (Some(a), Some(b)) if a.order() != b.order() => {
                return Err(err(
                    DiagnosticKind::UnclosedRing,
                    position,
                    "ring closure has conflicting bond symbols",
                ));
            }
            (Some(a), _) => Some(a),
            // written at the closing end: direction reads closer -> opener
            (None, Some(b)) => Some(match b {
                BondSym::Up => BondSym::Down,
                BondSym::Down => BondSym::Up,
                other => other,
            }),
            (None, None) => None,
        };
        self.add_bond(open.atom, atom, sym, position)?;
        self.slots[open.atom][open.slot] = Slot::Atom(atom);
        self.slots[atom].push(Slot::Atom(open.atom));
        Ok(())
    }

    fn finish(mut self) -> Result<Molecule, ParseDiagnostic> {
        for i in 0..self.atoms.len() {
            let tag = self.chirality[i];
            if tag == Chirality::None {
                continue;
            }
            let written: Vec<Option<usize>> = self.slots[i]
                .iter()
                .map(|s| match s {
                    Slot::Atom(a) => Some(*a),
                    _ => None,
                })
                .collect();
            let mut reference: Vec<Option<usize>> = Vec::with_capacity(4);
            if self.atoms[i].explicit_h > 0 {
                reference.push(None);
            }
            let mut nbrs: Vec<usize> = written.iter().flatten().copied().collect();
            nbrs.sort_unstable();
            reference.extend(nbrs.into_iter().map(Some));
            let odd = permutation_parity(&written, &reference).unwrap_or(false);
            self.atoms[i].chirality = tag.with_parity(odd);
        }
        let positions = self.positions;
        let mol = Molecule::assemble(self.atoms, self.bonds).map_err(|e| graph_diag(e, &positions))?;
        perceive(mol).map_err(|e| graph_diag(e, &positions))
    }
}

fn graph_diag(e: GraphError, positions: &[usize]) -> ParseDiagnostic {
    let at = |a: usize| positions.get(a).copied().unwrap_or(0);
    match e {
        GraphError::Valence { atom, .. } => err(DiagnosticKind::ValenceViolation, at(atom), e.to_string()),
        GraphError::Aromaticity { atom } => err(DiagnosticKind::ValenceViolation, at(atom), e.to_string()),
        GraphError::SelfLoop(a, _) | GraphError::DuplicateBond(a, _) | GraphError::MissingAtom(a) => {
            err(DiagnosticKind::UnclosedRing, at(a), e.to_string())
        }
    }
}

fn organic_atom(tok: &SmilesToken<'_>) -> (Atom, bool) {
    let text = tok.text;
    let aromatic = text.as_bytes()[0].is_ascii_lowercase();
    let symbol = if aromatic {
        text.to_ascii_uppercase()
    } else {
        text.to_string()
    };
    let element = Element::from_symbol(&symbol).expect("lexer only emits organic-subset symbols");
    let mut atom = Atom::new(element);
    atom.aromatic = aromatic;
    (atom, false)
}

const AROMATIC_BRACKET: [&str; 9] = ["se", "as", "te", "b", "c", "n", "o", "p", "s"];

/// Returns the atom and whether it lists a hydrogen among its neighbours.
fn bracket_atom(tok: &SmilesToken<'_>) -> Result<(Atom, bool), ParseDiagnostic> {
    let base = tok.position;
    let b = tok.text.as_bytes();
    let end = b.len() - 1;
    let mut i = 1;
    let bad = |at: usize, message: &str| err(DiagnosticKind::BadBracketAtom, base + at, message);

    let digits = b[i..end].iter().take_while(|c| c.is_ascii_digit()).count();
    let isotope = if digits > 0 {
        let value: u16 = tok.text[i..i + digits]
            .parse()
            .ok()
            .filter(|&v| v <= 999)
            .ok_or_else(|| bad(i, "isotope mass number out of range"))?;
        i += digits;
        Some(value)
    } else {
        None
    };

    if i >= end {
        return Err(bad(i, "bracket atom has no element symbol"));
    }
    let (element, aromatic) = if b[i] == b'*' {
        return Err(err(
            DiagnosticKind::UnknownElement,
            base + i,
            "wildcard atoms are not supported",
        ));
    } else if b[i].is_ascii_uppercase() {
        let two = (i + 1 < end && b[i + 1].is_ascii_lowercase())
            .then(|| Element::from_symbol(&tok.text[i..i + 2]))
            .flatten();
        match two {
            Some(e) => {
                i += 2;
                (e, false)
            }
            None => match Element::from_symbol(&tok.text[i..i + 1]) {
                Some(e) => {
                    i += 1;
                    (e, false)
                }
                None => {
                    return Err(err(
                        DiagnosticKind::UnknownElement,
                        base + i,
                        format!("unknown element in '{}'", tok.text),
                    ))
                }
            },
        }
    } else if b[i].is_ascii_lowercase() {
        let sym = AROMATIC_BRACKET
            .iter()
            .find(|s| tok.text[i..end].starts_with(**s))
            .ok_or_else(|| {
                err(
                    DiagnosticKind::UnknownElement,
                    base + i,
                    format!("unknown aromatic element in '{}'", tok.text),
                )
            })?;
        i += sym.len();
        let mut symbol = sym.to_string();
        symbol[..1].make_ascii_uppercase();
        (Element::from_symbol(&symbol).expect("aromatic symbols are elements"), true)
    } else {
        return Err(bad(i, "expected an element symbol"));
    };

    let mut chirality = Chirality::None;
    if b[i] == b'@' {
        i += 1;
        chirality = Chirality::Anticlockwise;
        if b[i] == b'@' {
            i += 1;
            chirality = Chirality::Clockwise;
        }
        let rest = &tok.text[i..end];
        if ["TH", "AL", "SP", "TB", "OH"].iter().any(|t| rest.starts_with(t)) {
            return Err(bad(i, "only @ and @@ chirality is supported"));
        }
    }

    let mut hcount = 0u8;
    if b[i] == b'H' {
        i += 1;
        hcount = 1;
        if b[i].is_ascii_digit() {
            hcount = b[i] - b'0';
            i += 1;
        }
    }

    let mut charge: i8 = 0;
    if b[i] == b'+' || b[i] == b'-' {
        let sign: i8 = if b[i] == b'+' { 1 } else { -1 };
        let symbol = b[i];
        i += 1;
        let digits = b[i..end].iter().take_while(|c| c.is_ascii_digit()).count();
        if digits > 0 {
            let magnitude: i8 = tok.text[i..i + digits]
                .parse()
                .ok()
                .filter(|&m| m <= 15)
                .ok_or_else(|| bad(i, "charge out of range"))?;
            charge = sign * magnitude;
            i += digits;
        } else {
            charge = sign;
            while b[i] == symbol {
                charge += sign;
                i += 1;
                if charge.abs() > 15 {
                    return Err(bad(i, "charge out of range"));
                }
            }
        }
    }

    if b[i] == b':' {
        i += 1;
        let digits = b[i..end].iter().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return Err(bad(i, "atom class must be a number"));
        }
        i += digits;
    }

    if i != end {
        return Err(bad(i, "unexpected character in bracket atom"));
    }

    let mut atom = Atom::new(element);
    atom.aromatic = aromatic;
    atom.isotope = isotope;
    atom.charge = charge;
    atom.explicit_h = hcount;
    atom.bracket = true;
    atom.chirality = chirality;
    Ok((atom, hcount > 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(s: &str) -> DiagnosticKind {
        parse(s).unwrap_err().kind
    }

    #[test]
    fn butanol() {
        let m = parse("CC(O)CC").unwrap();
        assert_eq!(m.num_atoms(), 5);
        assert_eq!(m.total_hydrogens(), 10);
        assert_eq!(m.atoms().iter().filter(|a| a.element == Element::C).count(), 4);
    }

    #[test]
    fn diagnostics() {
        assert_eq!(kind(""), DiagnosticKind::EmptyInput);
        let e = parse("C1CC").unwrap_err();
        assert_eq!((e.kind, e.position), (DiagnosticKind::UnclosedRing, 1));
        assert_eq!(kind("CC(C"), DiagnosticKind::UnbalancedBranch);
        assert_eq!(kind("CC)C"), DiagnosticKind::UnbalancedBranch);
        assert_eq!(kind("C()C"), DiagnosticKind::UnbalancedBranch);
        assert_eq!(kind("[C@TH1H](F)(Cl)Br"), DiagnosticKind::BadBracketAtom);
        assert_eq!(kind("[Xx]"), DiagnosticKind::UnknownElement);
        assert_eq!(kind("CX"), DiagnosticKind::UnknownElement);
        assert_eq!(kind("C(C)(C)(C)(C)C"), DiagnosticKind::ValenceViolation);
        assert_eq!(kind("c1cccc1"), DiagnosticKind::ValenceViolation);
        assert_eq!(kind("C11"), DiagnosticKind::UnclosedRing);
        assert_eq!(kind("C=1CC-1"), DiagnosticKind::UnclosedRing);
        assert_eq!(kind("=C"), DiagnosticKind::UnknownElement);
        assert_eq!(kind("C="), DiagnosticKind::UnknownElement);
    }

    #[test]
    fn first_error_in_source_order() {
        let e = parse("C1CC(C").unwrap_err();
        assert_eq!((e.kind, e.position), (DiagnosticKind::UnclosedRing, 1));
        let e = parse("C(C)X1").unwrap_err();
        assert_eq!(e.position, 4);
    }

    #[test]
    fn bracket_fields() {
        let m = parse("[13CH3:2][NH3+].[O-]").unwrap();
        assert_eq!(m.atom(0).isotope, Some(13));
        assert_eq!(m.atom(0).explicit_h, 3);
        assert_eq!(m.atom(1).charge, 1);
        assert_eq!(m.atom(2).charge, -1);
        assert_eq!(m.atom(2).total_h(), 0);
        assert_eq!(m.components(), 2);
        assert_eq!(parse("[Fe++]").unwrap().atom(0).charge, 2);
        assert_eq!(parse("[Cl-]").unwrap().atom(0).element, Element::CL);
        assert_eq!(parse("[Sc]").unwrap().atom(0).element.symbol(), "Sc");
        assert_eq!(parse("c1cc[se]c1").unwrap().atom(3).element.symbol(), "Se");
    }

    #[test]
    fn ring_closures() {
        let m = parse("C%12CCC%12").unwrap();
        assert_eq!(m.rings().len(), 1);
        let m = parse("C=1CCC1").unwrap();
        let b = m.bond_between(0, 3).unwrap();
        assert_eq!(m.bond(b).order, BondOrder::Double);
        // ring digits are reusable once closed
        assert_eq!(parse("C1CC1C1CC1").unwrap().rings().len(), 2);
    }

    #[test]
    fn directional_bonds_are_recorded() {
        let m = parse("F/C=C/F").unwrap();
        assert_eq!(m.bond(0).direction, Some(BondDirection::Up));
        assert_eq!(m.bond(2).direction_from(2), Some(BondDirection::Up));
    }

    #[test]
    fn chirality_normalised_to_reference_order() {
        // written order [C0, H, O2, C3] equals the reference order [H, 0, 2, 3]
        // up to one swap
        let m = parse("C[C@@H](O)CC").unwrap();
        assert_eq!(m.atom(1).chirality, Chirality::Anticlockwise);
        // the same centre written from the hydroxyl side
        let m2 = parse("O[C@H](C)CC").unwrap();
        assert_eq!(
            m2.chirality_for_order(1, &[Some(0), None, Some(2), Some(3)]),
            Chirality::Anticlockwise
        );
    }

    #[test]
    fn ring_closure_slot_order() {
        // N[C@@H]1CCCO1 : neighbours of C1 listed as [N, H, O(ring 1), C]
        let m = parse("N[C@@H]1CCCO1").unwrap();
        let tag = m.chirality_for_order(1, &[Some(0), None, Some(5), Some(2)]);
        assert_eq!(tag, Chirality::Clockwise);
    }

    #[test]
    fn non_ascii_bytes() {
        let e = parse_bytes(&[b'C', 0xff, b'C']).unwrap_err();
        assert_eq!((e.kind, e.position), (DiagnosticKind::UnknownElement, 1));
    }
}
