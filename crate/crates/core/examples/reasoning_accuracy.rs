//! Score predicted rationales against gold molecules and aggregate.

use molstruct::evalkit::{score_reasoning, AccuracyAccumulator};
use molstruct::matchsel::SetScore;
use molstruct::rationale::parse_rationale;
use molstruct::smiles::parse;

fn main() {
    let records = [
        ("CC(O)CC", "The molecular formula is C4H10O. The molecule contains 1 functional group: hydroxyl."),
        ("CC(O)CC", "The molecular formula is C4H9O. The molecule contains 2 functional groups: hydroxyl, ketone."),
        ("c1ccccc1O", "The molecule has 1 aromatic ring. The molecular weight is 99.0 g/mol."),
    ];
    for how in [SetScore::Jaccard, SetScore::Recall] {
        let mut acc = AccuracyAccumulator::new();
        for (gold, text) in records {
            let scores = score_reasoning(&parse(gold).unwrap(), &parse_rationale(text).unwrap(), None, how).unwrap();
            acc.add(Some(&scores));
        }
        println!("{how:?}\n{}", acc.finish().to_flat_text());
    }
}
