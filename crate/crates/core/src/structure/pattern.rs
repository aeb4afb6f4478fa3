//! A small SMARTS-like query language for functional-group patterns.
//!
//! Atoms: bare symbols (`C` aliphatic carbon, `c` aromatic carbon, `*` any)
//! or bracket expressions built from primitives joined by `!` (not), `&`
//! (and, high precedence), `,` (or) and `;` (and, low precedence).
//! Primitives: element symbols, `#n` atomic number, `Hn` total hydrogens,
//! `Xn` total connections, `Dn` heavy-atom degree, `vn` total valence,
//! `a`/`A` aromatic/aliphatic, `+n`/`-n` charge, `R` (member of any ring)
//! and `*`. Bonds: `-` `=` `#` `:` `~`, unspecified meaning
//! single or aromatic. Branches in parentheses; ring closures with digits.

use std::collections::BTreeSet;

use crate::element::Element;
use crate::graph::{BondOrder, Molecule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for PatternError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "pattern error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for PatternError {}

#[derive(Debug, Clone, PartialEq)]
enum Prim {
    Any,
    Element { z: u8, aromatic: Option<bool> },
    AtomicNumber(u8),
    Hydrogens(u32),
    Connections(u32),
    Degree(u32),
    Valence(u32),
    Aromatic(bool),
    Charge(i8),
    InRing,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Prim(Prim),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BondQuery {
    SingleOrAromatic,
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
}

impl BondQuery {
    fn matches(self, order: BondOrder) -> bool {
        match self {
            BondQuery::SingleOrAromatic => matches!(order, BondOrder::Single | BondOrder::Aromatic),
            BondQuery::Single => order == BondOrder::Single,
            BondQuery::Double => order == BondOrder::Double,
            BondQuery::Triple => order == BondOrder::Triple,
            BondQuery::Aromatic => order == BondOrder::Aromatic,
            BondQuery::Any => true,
        }
    }
}

/// A compiled, connected query graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    source: String,
    atoms: Vec<Expr>,
    /// (earlier atom, later atom, bond query); atoms are numbered so each
    /// one after the first has a bond to an earlier one.
    bonds: Vec<(usize, usize, BondQuery)>,
}

impl Pattern {
    pub fn parse(src: &str) -> Result<Pattern, PatternError> {
        PatternParser { src: src.as_bytes(), pos: 0 }.parse()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Every embedding, as distinct sets of matched molecule atoms.
    pub fn match_sets(&self, mol: &Molecule) -> Vec<BTreeSet<usize>> {
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut assignment = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; mol.num_atoms()];
        let ctx = MatchContext::new(mol);
        for start in 0..mol.num_atoms() {
            if atom_matches(&self.atoms[0], &ctx, start) {
                assignment[0] = start;
                used[start] = true;
                self.extend(&ctx, 1, &mut assignment, &mut used, &mut found);
                used[start] = false;
            }
        }
        found.into_iter().collect()
    }

    fn extend(
        &self,
        ctx: &MatchContext<'_>,
        next: usize,
        assignment: &mut [usize],
        used: &mut [bool],
        found: &mut BTreeSet<BTreeSet<usize>>,
    ) {
        if next == self.atoms.len() {
            found.insert(assignment.iter().copied().collect());
            return;
        }
        // the bond that introduces `next`
        let &(anchor, _, query) = self
            .bonds
            .iter()
            .find(|b| b.1 == next && b.0 < next)
            .expect("pattern atoms are connected in order");
        let from = assignment[anchor];
        for nb in ctx.mol.neighbors(from) {
            let cand = nb.atom;
            if used[cand] || !query.matches(ctx.mol.bond(nb.bond).order) {
                continue;
            }
            if !atom_matches(&self.atoms[next], ctx, cand) {
                continue;
            }
            // ring-closure bonds back to already placed atoms
            let closures_ok = self
                .bonds
                .iter()
                .filter(|b| b.0 == next && b.1 < next)
                .all(|&(_, o, q)| {
                    ctx.mol
                        .bond_between(assignment[o], cand)
                        .is_some_and(|bi| q.matches(ctx.mol.bond(bi).order))
                });
            if !closures_ok {
                continue;
            }
            assignment[next] = cand;
            used[cand] = true;
            self.extend(ctx, next + 1, assignment, used, found);
            used[cand] = false;
        }
        assignment[next] = usize::MAX;
    }
}

struct MatchContext<'a> {
    mol: &'a Molecule,
    in_ring: Vec<bool>,
}

impl<'a> MatchContext<'a> {
    fn new(mol: &'a Molecule) -> Self {
        let mut in_ring = vec![false; mol.num_atoms()];
        for r in mol.rings() {
            for &a in &r.atoms {
                in_ring[a] = true;
            }
        }
        MatchContext { mol, in_ring }
    }
}

fn atom_matches(expr: &Expr, ctx: &MatchContext<'_>, a: usize) -> bool {
    match expr {
        Expr::Prim(p) => prim_matches(p, ctx, a),
        Expr::Not(e) => !atom_matches(e, ctx, a),
        Expr::And(es) => es.iter().all(|e| atom_matches(e, ctx, a)),
        Expr::Or(es) => es.iter().any(|e| atom_matches(e, ctx, a)),
    }
}

fn prim_matches(p: &Prim, ctx: &MatchContext<'_>, i: usize) -> bool {
    let mol = ctx.mol;
    let atom = mol.atom(i);
    match *p {
        Prim::Any => true,
        Prim::Element { z, aromatic } => {
            atom.atomic_number() == z && aromatic.is_none_or(|ar| ar == atom.aromatic)
        }
        Prim::AtomicNumber(z) => atom.atomic_number() == z,
        Prim::Hydrogens(n) => atom.total_h() == n,
        Prim::Connections(n) => mol.degree(i) as u32 + atom.total_h() == n,
        Prim::Degree(n) => mol.degree(i) as u32 == n,
        Prim::Valence(n) => mol.bond_valence(i) + atom.total_h() == n,
        Prim::Aromatic(ar) => atom.aromatic == ar,
        Prim::Charge(c) => atom.charge == c,
        Prim::InRing => ctx.in_ring[i],
    }
}

struct PatternParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PatternParser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, PatternError> {
        Err(PatternError {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Pattern, PatternError> {
        let mut atoms: Vec<Expr> = Vec::new();
        let mut bonds: Vec<(usize, usize, BondQuery)> = Vec::new();
        let mut prev: Option<usize> = None;
        let mut stack: Vec<usize> = Vec::new();
        let mut pending: Option<BondQuery> = None;
        let mut open: [Option<(usize, Option<BondQuery>)>; 10] = [None; 10];

        while let Some(c) = self.peek() {
            match c {
                b'(' => {
                    if prev.is_none() {
                        return self.fail("branch before any atom");
                    }
                    stack.push(prev.unwrap());
                    self.pos += 1;
                }
                b')' => {
                    prev = Some(match stack.pop() {
                        Some(p) => p,
                        None => return self.fail("unbalanced ')'"),
                    });
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'~' => {
                    pending = Some(match c {
                        b'-' => BondQuery::Single,
                        b'=' => BondQuery::Double,
                        b'#' => BondQuery::Triple,
                        b':' => BondQuery::Aromatic,
                        _ => BondQuery::Any,
                    });
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let Some(p) = prev else {
                        return self.fail("ring closure before any atom");
                    };
                    let d = (c - b'0') as usize;
                    match open[d].take() {
                        Some((other, q)) => {
                            let q = pending.take().or(q).unwrap_or(BondQuery::SingleOrAromatic);
                            bonds.push((p, other, q));
                        }
                        None => open[d] = Some((p, pending.take())),
                    }
                    self.pos += 1;
                }
                _ => {
                    let expr = self.atom()?;
                    let idx = atoms.len();
                    atoms.push(expr);
                    if let Some(p) = prev {
                        bonds.push((p, idx, pending.take().unwrap_or(BondQuery::SingleOrAromatic)));
                    } else if idx > 0 {
                        return self.fail("pattern must be connected");
                    }
                    prev = Some(idx);
                }
            }
        }
        if atoms.is_empty() {
            return self.fail("empty pattern");
        }
        if !stack.is_empty() {
            return self.fail("unclosed branch");
        }
        if open.iter().any(Option::is_some) {
            return self.fail("unclosed ring");
        }
        // closures are stored (later, earlier); tree bonds (earlier, later)
        Ok(Pattern {
            source: String::from_utf8_lossy(self.src).into_owned(),
            atoms,
            bonds,
        })
    }

    fn atom(&mut self) -> Result<Expr, PatternError> {
        let c = self.peek().expect("caller checked");
        if c == b'[' {
            self.pos += 1;
            let e = self.low_and()?;
            if self.peek() != Some(b']') {
                return self.fail("expected ']'");
            }
            self.pos += 1;
            return Ok(e);
        }
        if c == b'*' {
            self.pos += 1;
            return Ok(Expr::Prim(Prim::Any));
        }
        // bare organic-subset symbols
        for (sym, z, aromatic) in [
            ("Cl", 17, false),
            ("Br", 35, false),
            ("B", 5, false),
            ("C", 6, false),
            ("N", 7, false),
            ("O", 8, false),
            ("P", 15, false),
            ("S", 16, false),
            ("F", 9, false),
            ("I", 53, false),
            ("c", 6, true),
            ("n", 7, true),
            ("o", 8, true),
            ("p", 15, true),
            ("s", 16, true),
        ] {
            if self.src[self.pos..].starts_with(sym.as_bytes()) {
                self.pos += sym.len();
                return Ok(Expr::Prim(Prim::Element {
                    z,
                    aromatic: Some(aromatic),
                }));
            }
        }
        self.fail("unknown atom")
    }

    fn low_and(&mut self) -> Result<Expr, PatternError> {
        let mut parts = vec![self.or()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            parts.push(self.or()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn or(&mut self) -> Result<Expr, PatternError> {
        let mut parts = vec![self.high_and()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            parts.push(self.high_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Or(parts) })
    }

    fn high_and(&mut self) -> Result<Expr, PatternError> {
        let mut parts = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    parts.push(self.unary()?);
                }
                Some(b']' | b';' | b',') | None => break,
                // implicit conjunction of adjacent primitives
                Some(_) => parts.push(self.unary()?),
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::And(parts) })
    }

    fn unary(&mut self) -> Result<Expr, PatternError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primitive().map(Expr::Prim)
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn primitive(&mut self) -> Result<Prim, PatternError> {
        let Some(c) = self.peek() else {
            return self.fail("unexpected end of pattern");
        };
        match c {
            b'*' => {
                self.pos += 1;
                Ok(Prim::Any)
            }
            b'#' => {
                self.pos += 1;
                match self.number() {
                    Some(z) if (1..=118).contains(&z) => Ok(Prim::AtomicNumber(z as u8)),
                    _ => self.fail("expected atomic number after '#'"),
                }
            }
            b'+' | b'-' => {
                self.pos += 1;
                let sign: i8 = if c == b'+' { 1 } else { -1 };
                let n = self.number().unwrap_or(1);
                Ok(Prim::Charge(sign * n as i8))
            }
            b'H' | b'X' | b'D' | b'v' => {
                // `H` alone is a count of one; `Hg`, `Ho` etc. are elements
                if c == b'H' && self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_lowercase()) {
                    return self.element();
                }
                self.pos += 1;
                let n = self.number().unwrap_or(1);
                Ok(match c {
                    b'H' => Prim::Hydrogens(n),
                    b'X' => Prim::Connections(n),
                    b'D' => Prim::Degree(n),
                    _ => Prim::Valence(n),
                })
            }
            b'a' if !self.src[self.pos..].starts_with(b"as") => {
                self.pos += 1;
                Ok(Prim::Aromatic(true))
            }
            b'A' if !self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_lowercase()) => {
                self.pos += 1;
                Ok(Prim::Aromatic(false))
            }
            b'R' if !self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_lowercase()) => {
                self.pos += 1;
                Ok(Prim::InRing)
            }
            _ => self.element(),
        }
    }

    fn element(&mut self) -> Result<Prim, PatternError> {
        let rest = &self.src[self.pos..];
        let Some(&c) = rest.first() else {
            return self.fail("expected element");
        };
        if c.is_ascii_lowercase() {
            for sym in ["se", "as", "c", "n", "o", "p", "s", "b"] {
                if rest.starts_with(sym.as_bytes()) {
                    let mut upper = sym.to_string();
                    upper[..1].make_ascii_uppercase();
                    let e = Element::from_symbol(&upper).expect("aromatic symbol");
                    self.pos += sym.len();
                    return Ok(Prim::Element {
                        z: e.atomic_number(),
                        aromatic: Some(true),
                    });
                }
            }
            return self.fail("unknown aromatic symbol");
        }
        if c.is_ascii_uppercase() {
            if rest.len() >= 2 && rest[1].is_ascii_lowercase() {
                if let Some(e) = std::str::from_utf8(&rest[..2]).ok().and_then(Element::from_symbol) {
                    self.pos += 2;
                    return Ok(Prim::Element {
                        z: e.atomic_number(),
                        aromatic: None,
                    });
                }
            }
            if let Some(e) = std::str::from_utf8(&rest[..1]).ok().and_then(Element::from_symbol) {
                self.pos += 1;
                // bracketed uppercase symbols mean the aliphatic form, as in SMARTS
                return Ok(Prim::Element {
                    z: e.atomic_number(),
                    aromatic: Some(false).filter(|_| e.is_organic_subset()),
                });
            }
        }
        self.fail("unknown element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse;

    fn count(pattern: &str, smiles: &str) -> usize {
        Pattern::parse(pattern)
            .unwrap()
            .match_sets(&parse(smiles).unwrap())
            .len()
    }

    #[test]
    fn primitives() {
        assert_eq!(count("[OX2H1][#6]", "CC(O)CC"), 1);
        assert_eq!(count("[OX2H1][#6]", "COC"), 0);
        assert_eq!(count("[OX2;A]([#6])[#6]", "CCOCC"), 1);
        assert_eq!(count("[OX2;A]([#6])[#6]", "c1ccoc1"), 0);
        assert_eq!(count("[CX3]=[CX3]", "C=CC=C"), 2);
        assert_eq!(count("[CX3]=[CX3]", "c1ccccc1"), 0);
        assert_eq!(count("[N+](=O)[O-]", "C[N+](=O)[O-]"), 1);
        assert_eq!(count("[NX3;H2;+0;!a]", "CC(N)CC"), 1);
        assert_eq!(count("[#6][Cl,Br]", "ClCCBr"), 2);
        assert_eq!(count("c", "c1ccccc1"), 6);
        assert_eq!(count("C", "c1ccccc1"), 0);
        assert_eq!(count("[R]", "CC1CC1"), 3);
        assert_eq!(count("[!R;#6]", "CC1CC1"), 1);
    }

    #[test]
    fn ring_closure_query() {
        assert_eq!(count("C1CC1", "CC1CC1"), 1);
        assert_eq!(count("C1CCC1", "CC1CC1"), 0);
    }

    #[test]
    fn bad_patterns() {
        assert!(Pattern::parse("").is_err());
        assert!(Pattern::parse("[OX2").is_err());
        assert!(Pattern::parse("C(C").is_err());
        assert!(Pattern::parse("C.C").is_err());
        assert!(Pattern::parse("[Qq]").is_err());
    }
}
