//! Choose among beam candidates by matching ratio against a rationale.

use molstruct::matchsel::{apply_reliability_mask, select};
use molstruct::rationale::{parse_rationale, ComponentKind};

fn main() {
    let rationale = parse_rationale(
        "The molecular formula is C4H10O. The longest carbon chain has 4 carbons. \
         The molecule contains no rings. The molecule contains 1 functional group: hydroxyl.",
    )
    .unwrap();
    let candidates = ["CC(N)CC", "CCCCO", "CC(O)CC", "C1CC", "OC1CCC1"];

    let report = select(&rationale, &candidates).unwrap();
    for (i, c) in report.per_candidate.iter().enumerate() {
        println!("{i} {:<10} ratio={:?} {:?}", c.smiles, c.matching_ratio, c.per_component);
    }
    println!("selected {} ({})", report.selected_index, report.selected_smiles);

    // keep only the components the generator is trusted on
    let reliable = [ComponentKind::RingCompounds, ComponentKind::FunctionalGroups].into_iter().collect();
    let masked = apply_reliability_mask(&rationale, &reliable);
    let report = select(&masked, &candidates).unwrap();
    println!("with reliable components only: selected {}", report.selected_smiles);
}
