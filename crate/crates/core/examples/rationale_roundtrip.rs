//! Render a rationale in both formats and parse it back.

use std::collections::BTreeSet;

use molstruct::rationale::{parse_rationale, parse_rationale_with_warnings, ComponentKind, Format, Rationale};
use molstruct::smiles::parse;
use molstruct::structure::extract_profile;

fn main() {
    let profile = extract_profile(&parse("C[C@@H](O)c1ccccc1").unwrap());
    let full = Rationale::from_profile(&profile, Some("1-phenylethan-1-ol"));

    for format in [Format::Prose, Format::Json] {
        let text = full.render(format).unwrap();
        println!("{text}\n");
        assert_eq!(parse_rationale(&text).unwrap(), full);
    }

    let only: BTreeSet<_> = [ComponentKind::Formula, ComponentKind::FunctionalGroups].into_iter().collect();
    println!("{}", full.restricted(&only).render(Format::Prose).unwrap());

    let noisy = "The molecule smells nice. The molecular weight is 74.1 g/mol.";
    let parsed = parse_rationale_with_warnings(noisy).unwrap();
    println!("recognised {:?}, warnings {:?}", parsed.rationale.mask(), parsed.warnings);
}
