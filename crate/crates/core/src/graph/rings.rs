use std::collections::{HashSet, VecDeque};

use super::{Molecule, Ring};

/// Smallest set of smallest rings.
///
/// Candidate cycles are built from every ring atom's BFS tree: for each
/// non-tree edge `(x, y)` whose tree paths back to the root meet only at the
/// root, the cycle `root..x, y..root` is a candidate. Candidates are sorted by
/// size and then by their atom-index sequence, and accepted greedily when
/// independent (over GF(2) edge sets) of those already kept. The result has
/// exactly `cyclomatic_number` rings.
pub fn perceive_rings(mol: &Molecule) -> Vec<Ring> {
    let target = mol.cyclomatic_number();
    if target == 0 {
        return Vec::new();
    }
    let n = mol.num_atoms();

    // Strip acyclic branches: only atoms that survive leaf pruning lie on rings.
    let mut live_degree: Vec<usize> = (0..n).map(|a| mol.degree(a)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<usize> = (0..n).filter(|&a| live_degree[a] <= 1).collect();
    while let Some(a) = queue.pop() {
        if !alive[a] {
            continue;
        }
        alive[a] = false;
        for nb in mol.neighbors(a) {
            if alive[nb.atom] {
                live_degree[nb.atom] -= 1;
                if live_degree[nb.atom] <= 1 {
                    queue.push(nb.atom);
                }
            }
        }
    }

    let core_bonds: Vec<usize> = (0..mol.num_bonds())
        .filter(|&b| alive[mol.bond(b).begin] && alive[mol.bond(b).end])
        .collect();
    let mut bit_of_bond = vec![usize::MAX; mol.num_bonds()];
    for (bit, &b) in core_bonds.iter().enumerate() {
        bit_of_bond[b] = bit;
    }
    let words = core_bonds.len().div_ceil(64);

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut branch = vec![usize::MAX; n];
    for root in (0..n).filter(|&a| alive[a]) {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        branch[root] = root;
        let mut bfs = VecDeque::from([root]);
        while let Some(a) = bfs.pop_front() {
            for nb in mol.neighbors(a) {
                let b = nb.atom;
                if !alive[b] || dist[b] != usize::MAX {
                    continue;
                }
                dist[b] = dist[a] + 1;
                parent[b] = a;
                branch[b] = if a == root { b } else { branch[a] };
                bfs.push_back(b);
            }
        }
        for &bi in &core_bonds {
            let bond = mol.bond(bi);
            let (x, y) = (bond.begin, bond.end);
            if dist[x] == usize::MAX || dist[y] == usize::MAX {
                continue;
            }
            if parent[x] == y || parent[y] == x || branch[x] == branch[y] {
                continue;
            }
            let mut cycle = path_to_root(x, &parent);
            cycle.reverse();
            let mut tail = path_to_root(y, &parent);
            tail.pop();
            cycle.extend(tail);
            let normalized = normalize_sequence(cycle);
            if seen.insert(normalized.clone()) {
                candidates.push(normalized);
            }
        }
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut rings = Vec::with_capacity(target);
    for cycle in candidates {
        if rings.len() == target {
            break;
        }
        let mut bits = vec![0u64; words];
        let len = cycle.len();
        for i in 0..len {
            let b = mol
                .bond_between(cycle[i], cycle[(i + 1) % len])
                .expect("cycle edges are bonds");
            let bit = bit_of_bond[b];
            bits[bit / 64] ^= 1 << (bit % 64);
        }
        for (pivot, row) in &basis {
            if bits[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (w, r) in bits.iter_mut().zip(row) {
                    *w ^= r;
                }
            }
        }
        let Some(pivot) = lowest_bit(&bits) else {
            continue;
        };
        let at = basis.partition_point(|(p, _)| *p < pivot);
        basis.insert(at, (pivot, bits));
        rings.push(Ring {
            atoms: cycle,
            aromatic: false,
        });
    }
    rings
}

fn path_to_root(mut a: usize, parent: &[usize]) -> Vec<usize> {
    let mut path = vec![a];
    while parent[a] != usize::MAX {
        a = parent[a];
        path.push(a);
    }
    path
}

fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Rotate to start at the smallest index and continue towards its smaller
/// cyclic neighbour.
pub(crate) fn normalize_sequence(mut cycle: Vec<usize>) -> Vec<usize> {
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    if len > 2 && cycle[len - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

pub(crate) fn normalize_ring(atoms: Vec<usize>, aromatic: bool) -> Ring {
    Ring {
        atoms: normalize_sequence(atoms),
        aromatic,
    }
}
