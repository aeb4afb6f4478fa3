mod common;

use common::{golden, isomorphic, random_corpus};
use molstruct::smiles::{canonicalize, parse, parse_bytes, random_equivalent, tokenize, write, DiagnosticKind};
use molstruct::structure::extract_profile;
use proptest::prelude::*;

#[test]
fn examples() {
    let m = parse("CC(O)CC").unwrap();
    assert_eq!(m.num_atoms(), 5);
    assert_eq!(m.total_hydrogens(), 10);
    assert_eq!(parse("").unwrap_err().kind, DiagnosticKind::EmptyInput);
    let d = parse("C1CC").unwrap_err();
    assert_eq!((d.kind, d.position), (DiagnosticKind::UnclosedRing, 1));
    assert_eq!(write(&parse("C").unwrap()), "C");
    assert_eq!(write(&parse("c1ccccc1").unwrap()), "c1ccccc1");
    assert_eq!(canonicalize(&parse("CC(O)CC").unwrap()), canonicalize(&parse("CCC(C)O").unwrap()));
    assert_eq!(canonicalize(&parse("c1ccccc1").unwrap()), canonicalize(&parse("C1=CC=CC=C1").unwrap()));
    assert_ne!(canonicalize(&parse("C").unwrap()), canonicalize(&parse("CC").unwrap()));
    let c = parse("C").unwrap();
    assert!((0..20).all(|s| random_equivalent(&c, s) == "C"));
}

#[test]
fn non_ascii_is_unknown_element() {
    let d = parse("CC\u{e9}C").unwrap_err();
    assert_eq!((d.kind, d.position), (DiagnosticKind::UnknownElement, 2));
    let d = parse_bytes(b"C\xff").unwrap_err();
    assert_eq!(d.kind, DiagnosticKind::UnknownElement);
}

#[test]
fn golden_round_trip_is_isomorphic() {
    for row in golden() {
        let m = parse(&row.smiles).unwrap();
        let back = parse(&write(&m)).unwrap();
        assert!(isomorphic(&m, &back), "{} {}", row.name, write(&m));
        for seed in 0..5 {
            let r = random_equivalent(&m, seed);
            assert!(isomorphic(&m, &parse(&r).unwrap()), "{} seed {seed}: {r}", row.name);
        }
    }
}

#[test]
fn isomorphism_oracle_sees_stereo_and_bonds() {
    let a = parse("C[C@@H](O)CC").unwrap();
    assert!(isomorphic(&a, &parse("CC[C@@H](C)O").unwrap()));
    assert!(!isomorphic(&a, &parse("CC[C@H](C)O").unwrap()));
    assert!(!isomorphic(&parse("C=CC").unwrap(), &parse("CCC").unwrap()));
}

#[test]
fn random_corpus_round_trip() {
    for s in random_corpus(11, 400, 30) {
        let m = parse(&s).unwrap();
        let w = write(&m);
        assert!(isomorphic(&m, &parse(&w).unwrap()), "{s} -> {w}");
        let c = canonicalize(&m);
        for seed in 0..10 {
            let r = random_equivalent(&m, seed);
            let m2 = parse(&r).unwrap();
            assert_eq!(canonicalize(&m2), c, "{s} seed {seed}: {r}");
            assert!(isomorphic(&parse(&c).unwrap(), &m2));
        }
    }
}

#[test]
fn golden_renumbering_invariance() {
    for row in golden() {
        let m = parse(&row.smiles).unwrap();
        let c = canonicalize(&m);
        let p = extract_profile(&m);
        for seed in 0..20 {
            let m2 = parse(&random_equivalent(&m, seed)).unwrap();
            assert_eq!(canonicalize(&m2), c, "{}", row.name);
            assert_eq!(extract_profile(&m2), p, "{}", row.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
        if let Err(d) = parse_bytes(&bytes) {
            prop_assert!(d.position <= bytes.len());
        }
    }

    #[test]
    fn parser_is_total_on_smiles_alphabet(s in "[CNOSPFIBrlcnos0-9%()\\[\\]=#@+\\-/\\\\.:H]{0,200}") {
        if let Err(d) = parse(&s) {
            prop_assert!(d.position <= s.len());
        }
    }

    #[test]
    fn tokens_cover_input(s in "[CNOcn0-9%()\\[\\]=#@+\\-.H]{1,80}") {
        if let Ok(tokens) = tokenize(&s) {
            let joined: String = tokens.iter().map(|t| t.text).collect();
            prop_assert_eq!(joined, s.clone());
            for w in tokens.windows(2) {
                prop_assert!(w[0].position < w[1].position);
            }
        }
    }
}
