//! Parse SMILES, report diagnostics, and show that different spellings of a
//! molecule share one canonical form.

use molstruct::smiles::{canonicalize, parse, random_equivalent, write, write_kekule};

fn main() {
    for s in ["CC(O)CC", "CCC(C)O", "C1=CC=CC=C1", "c1ccccc1", "N[C@@H](C)C(=O)O"] {
        let mol = parse(s).expect("valid SMILES");
        println!(
            "{s:<20} atoms={:<3} rings={} written={:<20} canonical={}",
            mol.num_atoms(),
            mol.rings().len(),
            write(&mol),
            canonicalize(&mol)
        );
    }

    let benzene = parse("c1ccccc1").unwrap();
    println!("kekule benzene: {}", write_kekule(&benzene).unwrap());

    let butanol = parse("CC(O)CC").unwrap();
    for seed in 0..3 {
        println!("seed {seed}: {}", random_equivalent(&butanol, seed));
    }

    for bad in ["", "C1CC", "CC(C", "[Xx]", "C(=O)(O)(O)(O)O"] {
        match parse(bad) {
            Ok(_) => println!("{bad:?} parsed"),
            Err(d) => println!("{bad:?}: {} at byte {}: {}", d.kind, d.position, d.message),
        }
    }
}
