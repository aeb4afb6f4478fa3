//! Exact match, edit distance, fingerprint similarity, validity and BLEU
//! for predicted molecules.

use molstruct::evalkit::{morgan_fingerprint, tanimoto, ComparisonAccumulator};
use molstruct::smiles::parse;

fn main() {
    let pairs = [
        ("CC(O)CC", "CCC(C)O"),
        ("c1ccccc1O", "c1ccccc1N"),
        ("CCOC(=O)C", "CCOC(=O"),
        ("OC1CCC1", "OC1CCCC1"),
    ];
    let mut acc = ComparisonAccumulator::new();
    for (gold, pred) in pairs {
        let r = acc.add(gold, pred);
        println!("{gold:<12} {pred:<12} {r:?}");
    }
    println!("{}", acc.finish().to_flat_text());

    let a = morgan_fingerprint(&parse("c1ccccc1O").unwrap(), 2, 2048).unwrap();
    let b = morgan_fingerprint(&parse("c1ccccc1N").unwrap(), 2, 2048).unwrap();
    println!("phenol bits={} aniline bits={} tanimoto={:.3}", a.count_ones(), b.count_ones(), tanimoto(&a, &b).unwrap());
}
