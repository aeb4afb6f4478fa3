//! Extract the structural components of the running-example molecules.

use molstruct::smiles::parse;
use molstruct::structure::extract_profile;

fn main() {
    for (name, smiles) in [
        ("2-butanol", "CC(O)CC"),
        ("2-propanol", "CC(O)C"),
        ("2-hexanol", "CCCCC(O)C"),
        ("2-butanamine", "CC(N)CC"),
        ("cyclobutanol", "OC1CCC1"),
        ("1-phenyl-2-propanol", "CC(O)Cc1ccccc1"),
        ("(R)-2-butanol", "C[C@@H](O)CC"),
    ] {
        let p = extract_profile(&parse(smiles).unwrap());
        let chiral: Vec<String> = p.chiral_centers.iter().map(|(a, c)| format!("{c}@{a}")).collect();
        println!(
            "{name:<20} {:<8} chain={} aromatic={} rings={:?} groups={:?} chiral={:?} weight={:.2}",
            p.formula,
            p.longest_chain,
            p.aromatic_ring_count,
            p.ring_names(),
            p.group_names(),
            chiral,
            p.molecular_weight
        );
    }
}
