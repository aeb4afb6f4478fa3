//! Test-side oracles, written without the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use molstruct::graph::{Chirality, Molecule};
use molstruct::smiles::parse;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct GoldenRow {
    pub name: String,
    pub smiles: String,
    pub kekule: String,
    pub formula: String,
    pub weight: f64,
    pub rings: usize,
    pub aromatic_rings: usize,
    /// Sorted configuration letters, empty when there are none.
    pub cip: String,
}

pub fn golden() -> Vec<GoldenRow> {
    let text = include_str!("../data/golden.tsv");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 8, "bad golden row {l}");
            GoldenRow {
                name: f[0].to_string(),
                smiles: f[1].to_string(),
                kekule: f[2].to_string(),
                formula: f[3].to_string(),
                weight: f[4].parse().unwrap(),
                rings: f[5].parse().unwrap(),
                aromatic_rings: f[6].parse().unwrap(),
                cip: if f[7] == "-" { String::new() } else { f[7].to_string() },
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// graph isomorphism by backtracking

fn atom_label(m: &Molecule, i: usize) -> (u8, i8, Option<u16>, bool, u32, usize) {
    let a = m.atom(i);
    (a.atomic_number(), a.charge, a.isotope, a.aromatic, a.total_h(), m.degree(i))
}

fn adjacency(m: &Molecule) -> Vec<BTreeMap<usize, u8>> {
    let mut adj = vec![BTreeMap::new(); m.num_atoms()];
    for b in m.bonds() {
        let code = b.order as u8;
        adj[b.begin].insert(b.end, code);
        adj[b.end].insert(b.begin, code);
    }
    adj
}

/// Parity of the permutation taking `a` to `b` (same elements), by
/// counting inversions.
fn odd_permutation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    let pos: Vec<usize> = a.iter().map(|x| b.iter().position(|y| y == x).unwrap()).collect();
    let mut inv = 0;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if pos[i] > pos[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Neighbour listing in which a chirality tag is expressed: the implicit
/// hydrogen first, then neighbours by ascending index.
fn listing(m: &Molecule, adj: &[BTreeMap<usize, u8>], i: usize) -> Vec<Option<usize>> {
    let mut out = Vec::new();
    if m.atom(i).total_h() > 0 {
        out.push(None);
    }
    out.extend(adj[i].keys().map(|&n| Some(n)));
    out
}

fn chirality_agrees(a: &Molecule, b: &Molecule, adj_a: &[BTreeMap<usize, u8>], adj_b: &[BTreeMap<usize, u8>], map: &[usize]) -> bool {
    for i in 0..a.num_atoms() {
        let (ca, cb) = (a.atom(i).chirality, b.atom(map[i]).chirality);
        if (ca == Chirality::None) != (cb == Chirality::None) {
            return false;
        }
        if ca == Chirality::None {
            continue;
        }
        let mapped: Vec<Option<usize>> = listing(a, adj_a, i).into_iter().map(|x| x.map(|n| map[n])).collect();
        let target = listing(b, adj_b, map[i]);
        if mapped.len() != target.len() {
            return false;
        }
        let same = ca == cb;
        if odd_permutation(&mapped, &target) == same {
            return false;
        }
    }
    true
}

/// Whether two molecules are the same labelled graph, including chirality
/// tags read relative to each molecule's own neighbour order.
pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    let n = a.num_atoms();
    if n != b.num_atoms() || a.num_bonds() != b.num_bonds() {
        return false;
    }
    let mut la: Vec<_> = (0..n).map(|i| atom_label(a, i)).collect();
    let mut lb: Vec<_> = (0..n).map(|i| atom_label(b, i)).collect();
    la.sort();
    lb.sort();
    if la != lb {
        return false;
    }
    let (adj_a, adj_b) = (adjacency(a), adjacency(b));
    // BFS order so every atom after a component's first has a mapped neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for &y in adj_a[x].keys() {
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut steps = 0u64;
    fn go(
        k: usize,
        order: &[usize],
        a: &Molecule,
        b: &Molecule,
        adj_a: &[BTreeMap<usize, u8>],
        adj_b: &[BTreeMap<usize, u8>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        steps: &mut u64,
    ) -> bool {
        *steps += 1;
        assert!(*steps < 50_000_000, "isomorphism search too large");
        if k == order.len() {
            return chirality_agrees(a, b, adj_a, adj_b, map);
        }
        let x = order[k];
        let anchor = adj_a[x].keys().find(|&&y| map[y] != usize::MAX).copied();
        let candidates: Vec<usize> = match anchor {
            Some(y) => adj_b[map[y]].keys().copied().collect(),
            None => (0..b.num_atoms()).collect(),
        };
        for c in candidates {
            if used[c] || atom_label(a, x) != atom_label(b, c) {
                continue;
            }
            let consistent = adj_a[x].iter().all(|(&y, &o)| map[y] == usize::MAX || adj_b[c].get(&map[y]) == Some(&o));
            if !consistent {
                continue;
            }
            map[x] = c;
            used[c] = true;
            if go(k + 1, order, a, b, adj_a, adj_b, map, used, steps) {
                return true;
            }
            map[x] = usize::MAX;
            used[c] = false;
        }
        false
    }
    go(0, &order, a, b, &adj_a, &adj_b, &mut map, &mut used, &mut steps)
}

// ---------------------------------------------------------------------------
// ring membership and chain length by brute force

fn connected_without(m: &Molecule, skip: usize) -> bool {
    let b = m.bond(skip);
    let (s, t) = (b.begin, b.end);
    let mut seen = vec![false; m.num_atoms()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(x) = stack.pop() {
        for nb in m.neighbors(x) {
            if nb.bond != skip && !seen[nb.atom] {
                seen[nb.atom] = true;
                stack.push(nb.atom);
            }
        }
    }
    seen[t]
}

/// Atoms lying on some cycle: those with an incident bond that is not a
/// bridge.
pub fn cycle_atoms(m: &Molecule) -> Vec<bool> {
    let mut on = vec![false; m.num_atoms()];
    for (i, b) in m.bonds().iter().enumerate() {
        if connected_without(m, i) {
            on[b.begin] = true;
            on[b.end] = true;
        }
    }
    on
}

pub fn non_ring_carbon_count(m: &Molecule) -> usize {
    let ring = cycle_atoms(m);
    (0..m.num_atoms()).filter(|&i| m.atom(i).atomic_number() == 6 && !ring[i]).count()
}

/// Longest simple path (in atoms) through carbons on no cycle, by
/// enumerating every path.
pub fn brute_force_chain(m: &Molecule) -> usize {
    let ring = cycle_atoms(m);
    let keep: Vec<bool> = (0..m.num_atoms()).map(|i| m.atom(i).atomic_number() == 6 && !ring[i]).collect();
    fn dfs(m: &Molecule, keep: &[bool], x: usize, visited: &mut Vec<bool>) -> usize {
        visited[x] = true;
        let mut best = 1;
        for nb in m.neighbors(x) {
            if keep[nb.atom] && !visited[nb.atom] {
                best = best.max(1 + dfs(m, keep, nb.atom, visited));
            }
        }
        visited[x] = false;
        best
    }
    let mut visited = vec![false; m.num_atoms()];
    (0..m.num_atoms()).filter(|&i| keep[i]).map(|i| dfs(m, &keep, i, &mut visited)).max().unwrap_or(0)
}

pub fn connected_components(m: &Molecule) -> usize {
    let n = m.num_atoms();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for b in m.bonds() {
        let (x, y) = (find(&mut parent, b.begin), find(&mut parent, b.end));
        parent[x] = y;
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

// ---------------------------------------------------------------------------
// molecular weight from a formula string

const WEIGHTS: [(&str, f64); 16] = [
    ("H", 1.008),
    ("B", 10.81),
    ("C", 12.011),
    ("N", 14.007),
    ("O", 15.999),
    ("F", 18.998),
    ("Na", 22.990),
    ("Si", 28.085),
    ("P", 30.974),
    ("S", 32.06),
    ("Cl", 35.45),
    ("K", 39.098),
    ("Se", 78.971),
    ("Br", 79.904),
    ("I", 126.90),
    ("Li", 6.94),
];

/// Element counts of a Hill formula such as `C4H10O`.
pub fn formula_counts(formula: &str) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    let chars: Vec<char> = formula.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        assert!(chars[i].is_ascii_uppercase(), "bad formula {formula}");
        let mut sym = chars[i].to_string();
        i += 1;
        if i < chars.len() && chars[i].is_ascii_lowercase() {
            sym.push(chars[i]);
            i += 1;
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let n: u32 = if start == i { 1 } else { chars[start..i].iter().collect::<String>().parse().unwrap() };
        *out.entry(sym).or_default() += n;
    }
    out
}

/// Weight implied by a formula, or `None` for an element outside the
/// local table.
pub fn formula_weight(formula: &str) -> Option<f64> {
    let mut w = 0.0;
    for (sym, n) in formula_counts(formula) {
        let (_, aw) = WEIGHTS.iter().find(|(s, _)| *s == sym)?;
        w += aw * f64::from(n);
    }
    Some(w)
}

// ---------------------------------------------------------------------------
// random molecules

const ATOMS: [&str; 12] = ["C", "C", "C", "C", "C", "N", "O", "S", "F", "Cl", "Br", "[C@@H]"];
const FRAGMENTS: [&str; 6] = ["c1ccccc1", "c1ccncc1", "c1ccoc1", "C1CC1", "C(=O)O", "[C@H](N)C"];

/// A random SMILES string; not always valid (valence may overflow).
pub fn random_smiles(rng: &mut impl Rng, max_atoms: usize) -> String {
    let mut s = String::new();
    let mut open: Vec<u32> = Vec::new();
    let mut next_digit = 1;
    let mut depth = 0;
    let n = rng.gen_range(1..=max_atoms);
    for i in 0..n {
        if i > 0 {
            match rng.gen_range(0..20) {
                0 => s.push('='),
                1 if depth < 3 => {
                    s.push('(');
                    depth += 1;
                }
                2 if depth > 0 => {
                    s.push(')');
                    depth -= 1;
                }
                _ => {}
            }
        }
        if rng.gen_range(0..12) == 0 {
            s.push_str(FRAGMENTS[rng.gen_range(0..FRAGMENTS.len())]);
        } else {
            s.push_str(ATOMS[rng.gen_range(0..ATOMS.len())]);
        }
        if rng.gen_range(0..8) == 0 && next_digit < 10 {
            s.push_str(&next_digit.to_string());
            open.push(next_digit);
            next_digit += 1;
        } else if !open.is_empty() && rng.gen_range(0..3) == 0 {
            let d = open.remove(rng.gen_range(0..open.len()));
            s.push_str(&d.to_string());
        }
    }
    for d in open {
        s.push('C');
        s.push_str(&d.to_string());
    }
    for _ in 0..depth {
        s.push(')');
    }
    if rng.gen_range(0..10) == 0 {
        s.push_str(".CCO");
    }
    s
}

/// `count` distinct parseable random SMILES from a fixed seed.
pub fn random_corpus(seed: u64, count: usize, max_atoms: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while out.len() < count {
        let s = random_smiles(&mut rng, max_atoms);
        if parse(&s).is_ok() && seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

/// Golden SMILES followed by random molecules up to `count`.
pub fn mixed_corpus(count: usize) -> Vec<String> {
    let mut out: Vec<String> = golden().into_iter().map(|r| r.smiles).collect();
    out.truncate(count);
    let extra = count - out.len();
    out.extend(random_corpus(7, extra, 24));
    out
}
