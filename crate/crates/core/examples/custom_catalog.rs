//! Extend the functional-group and ring catalogs from a text config.

use molstruct::smiles::parse;
use molstruct::structure::{extract_profile_with, group_matches, Catalog, DEFAULT_CATALOG};

fn main() {
    let text = format!("{DEFAULT_CATALOG}[groups]\nazide | [NX2]=[N+]=[N-] | 2\n[rings]\noxetane | C1COC1\n");
    let catalog = Catalog::parse(&text).unwrap();

    let mol = parse("[N-]=[N+]=NCC1COC1").unwrap();
    let p = extract_profile_with(&mol, &catalog);
    println!("groups {:?} rings {:?}", p.group_names(), p.ring_names());
    println!("builtin: {:?}", extract_profile_with(&mol, Catalog::builtin()).ring_names());

    for m in group_matches(&parse("CC(=O)OC").unwrap(), &catalog) {
        println!("{:<16} atoms={:?} suppressed_by={:?}", m.name, m.atoms, m.suppressed_by);
    }
}
