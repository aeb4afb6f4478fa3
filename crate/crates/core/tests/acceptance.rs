//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use common::{brute_force_chain, connected_components, golden, isomorphic, mixed_corpus, non_ring_carbon_count, random_corpus};
use molstruct::evalkit::{corpus_bleu, levenshtein, morgan_fingerprint, score_reasoning, tanimoto};
use molstruct::matchsel::{matching_ratio, select, set_score, SetScore};
use molstruct::rationale::{ComponentKind, ComponentValue, Rationale, Source};
use molstruct::smiles::{canonicalize, parse, parse_bytes, random_equivalent, write};
use molstruct::structure::{extract_profile, Configuration};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn profile(s: &str) -> molstruct::StructuralProfile {
    extract_profile(&parse(s).unwrap())
}

fn anchored_values() -> Result<String, String> {
    let b = profile("CC(O)CC");
    check(b.formula == "C4H10O", format!("2-butanol formula {}", b.formula))?;
    check((b.molecular_weight - 74.1).abs() <= 0.05 && b.molecular_weight == 74.12, format!("2-butanol weight {}", b.molecular_weight))?;
    let p = profile("CC(O)C");
    check(p.formula == "C3H8O", format!("2-propanol formula {}", p.formula))?;
    check((p.molecular_weight - 60.1).abs() <= 0.05 && p.molecular_weight == 60.10, format!("2-propanol weight {}", p.molecular_weight))?;
    Ok(format!("C4H10O {:.2}, C3H8O {:.2}", b.molecular_weight, p.molecular_weight))
}

fn contrast_suite() -> Result<String, String> {
    let (hex, but) = (profile("CCCCC(O)C"), profile("CC(O)CC"));
    check(hex.longest_chain == 6 && but.longest_chain == 4, "chain lengths")?;
    check(profile("CC(O)Cc1ccccc1").aromatic_ring_count == 1, "1-phenyl-2-propanol aromatic rings")?;
    let cb = profile("OC1CCC1");
    check(cb.ring_names() == ["cyclobutane"] && cb.longest_chain == 0, "cyclobutanol")?;
    let amine = profile("CC(N)CC");
    check(amine.group_names() == ["primary amine"], format!("2-butanamine groups {:?}", amine.group_names()))?;
    check(profile("C[C@@H](O)CC").configurations() == [Configuration::R], "C[C@@H](O)CC is R")?;
    check(profile("C[C@H](O)CC").configurations() == [Configuration::S], "C[C@H](O)CC is S")?;
    Ok("chain 6 > 4, 1 aromatic ring, cyclobutane, primary amine, R/S".into())
}

fn scoring_rules() -> Result<String, String> {
    let gold = parse("CC(O)CC").unwrap();
    let true_w = extract_profile(&gold).molecular_weight;
    let weight = |factor: f64| {
        let mut r = Rationale::new(Source::Parsed);
        r.insert(ComponentKind::MolecularWeight, ComponentValue::Weight(true_w * factor)).unwrap();
        score_reasoning(&gold, &r, None, SetScore::Jaccard).unwrap()[&ComponentKind::MolecularWeight]
    };
    check(weight(1.049) == 1.0 && weight(1.051) == 0.0, "upper weight boundary")?;
    check(weight(0.951) == 1.0 && weight(0.949) == 0.0, "lower weight boundary")?;

    // exact-match components only ever score 0 or 1
    let corpus = mixed_corpus(400);
    let profiles: Vec<_> = corpus.iter().map(|s| profile(s)).collect();
    let exact_kinds = [ComponentKind::Formula, ComponentKind::LongestChain, ComponentKind::AromaticRings, ComponentKind::Chirality];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let (i, j) = (rng.gen_range(0..corpus.len()), rng.gen_range(0..corpus.len()));
        let r = Rationale::from_profile(&profiles[i], None);
        let s = score_reasoning(&parse(&corpus[j]).unwrap(), &r, None, SetScore::Jaccard).unwrap();
        for k in exact_kinds {
            check(s[&k] == 0.0 || s[&k] == 1.0, format!("{k} scored {}", s[&k]))?;
        }
    }

    let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let cases: [(&[&str], &[&str], f64, f64); 10] = [
        (&["hydroxyl"], &["hydroxyl", "ketone"], 0.5, 1.0),
        (&["hydroxyl"], &["hydroxyl"], 1.0, 1.0),
        (&[], &[], 1.0, 1.0),
        (&["ester"], &[], 0.0, 0.0),
        (&[], &["ester"], 0.0, 1.0),
        (&["a", "b", "c"], &["b", "c", "d"], 0.5, 2.0 / 3.0),
        (&["benzene", "benzene"], &["benzene"], 0.5, 0.5),
        (&["benzene"], &["benzene", "benzene", "benzene"], 1.0 / 3.0, 1.0),
        (&["a", "a", "b"], &["a", "b", "b"], 0.5, 2.0 / 3.0),
        (&["x", "y"], &["z"], 0.0, 0.0),
    ];
    for (g, p, j, r) in cases {
        check((set_score(&v(g), &v(p), SetScore::Jaccard) - j).abs() < 1e-12, format!("jaccard {g:?} {p:?}"))?;
        check((set_score(&v(g), &v(p), SetScore::Recall) - r).abs() < 1e-12, format!("recall {g:?} {p:?}"))?;
    }
    Ok("weight 1.049x -> 1, 1.051x -> 0; exact scores binary; 10 set pairs".into())
}

fn rejection_sampling() -> Result<String, String> {
    let start = Instant::now();
    let corpus = mixed_corpus(500);
    let profiles: Vec<_> = corpus.iter().map(|s| profile(s)).collect();
    for (s, p) in corpus.iter().zip(&profiles) {
        let ratio = matching_ratio(&Rationale::from_profile(p, None), &parse(s).unwrap()).unwrap().ratio;
        check(ratio == 1.0, format!("self-consistency {s}: {ratio}"))?;
    }
    let invalid = ["C1CC", "((", "", "[Zz]"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..10_000 {
        let target = rng.gen_range(0..corpus.len());
        let mask: BTreeSet<ComponentKind> = ComponentKind::CORE
            .into_iter()
            .chain([ComponentKind::MolecularWeight])
            .filter(|_| rng.gen_bool(0.6))
            .collect();
        if mask.is_empty() {
            continue;
        }
        let r = Rationale::from_profile(&profiles[target], None).restricted(&mask);
        let k = rng.gen_range(1..=6);
        let cands: Vec<&str> = (0..k)
            .map(|_| {
                if rng.gen_range(0..8) == 0 {
                    invalid[rng.gen_range(0..invalid.len())]
                } else {
                    corpus[rng.gen_range(0..corpus.len())].as_str()
                }
            })
            .collect();
        let rep = select(&r, &cands).unwrap();
        let ratios: Vec<Option<f64>> = rep.per_candidate.iter().map(|c| c.matching_ratio).collect();
        if k == 1 {
            check(rep.selected_index == 0, format!("case {case}: k=1 selected {}", rep.selected_index))?;
        }
        match ratios.iter().flatten().copied().reduce(f64::max) {
            None => check(rep.all_invalid && rep.selected_index == 0, format!("case {case}: all-invalid fallback"))?,
            Some(best) => {
                let first = ratios.iter().position(|&x| x == Some(best)).unwrap();
                check(rep.selected_index == first, format!("case {case}: dominance/tie-break"))?;
            }
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("500 self-consistent, 10000 selection cases, {:.2}s", t.as_secs_f64()))
}

fn parser_and_canonicalizer() -> Result<String, String> {
    let start = Instant::now();
    let rows = golden();
    check(rows.len() >= 200, "golden corpus too small")?;
    for row in &rows {
        let m = parse(&row.smiles).unwrap();
        let back = parse(&write(&m)).map_err(|e| format!("{}: {e}", row.name))?;
        check(isomorphic(&m, &back), format!("round trip {}", row.name))?;
        let (c, p) = (canonicalize(&m), extract_profile(&m));
        for seed in 0..100 {
            let r = random_equivalent(&m, seed);
            let m2 = parse(&r).map_err(|e| format!("{}: {r}: {e}", row.name))?;
            check(canonicalize(&m2) == c, format!("canonical form of {} under seed {seed}", row.name))?;
            check(extract_profile(&m2) == p, format!("profile of {} under seed {seed}", row.name))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet = b"CNOSPFIBrlcnos0123456789%()[]=#@+-/\\.:H";
    for _ in 0..100_000 {
        let len = if rng.gen_range(0..10) == 0 { rng.gen_range(0..=10_240) } else { rng.gen_range(0..=256) };
        let bytes: Vec<u8> = if rng.gen_bool(0.5) {
            (0..len).map(|_| rng.gen()).collect()
        } else {
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        };
        let outcome = catch_unwind(|| parse_bytes(&bytes).err().map(|d| d.position));
        match outcome {
            Ok(Some(pos)) => check(pos <= bytes.len(), "diagnostic position out of range")?,
            Ok(None) => {}
            Err(_) => return Err(format!("parser panicked on {:?}", String::from_utf8_lossy(&bytes))),
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(300), format!("took {t:?}"))?;
    Ok(format!("{} molecules x 100 seeds, round trips, 100000 fuzz inputs, {:.1}s", rows.len(), t.as_secs_f64()))
}

fn oracle_equivalence() -> Result<String, String> {
    let mut smiles: Vec<String> = golden().into_iter().map(|r| r.smiles).collect();
    smiles.extend(random_corpus(6, 500, 30));
    let mut chain_checked = 0;
    for s in &smiles {
        let m = parse(s).unwrap();
        if non_ring_carbon_count(&m) <= 14 {
            let (fast, slow) = (molstruct::structure::longest_carbon_chain(&m), brute_force_chain(&m));
            check(fast == slow, format!("chain of {s}: {fast} vs {slow}"))?;
            chain_checked += 1;
        }
        let cyclomatic = m.num_bonds() + connected_components(&m) - m.num_atoms();
        check(m.rings().len() == cyclomatic, format!("SSSR size of {s}"))?;
    }
    Ok(format!("chain oracle on {chain_checked}, cyclomatic identity on {}", smiles.len()))
}

fn metrics_sanity() -> Result<String, String> {
    let gold: Vec<String> = golden().into_iter().map(|r| r.smiles).collect();
    check(corpus_bleu(&gold, &gold) == Some(1.0), "gold-vs-gold BLEU")?;
    let mols: Vec<_> = gold.iter().map(|s| parse(s).unwrap()).collect();
    let fps: Vec<_> = mols.iter().map(|m| morgan_fingerprint(m, 2, 2048).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5000 {
        let (a, b) = (&fps[rng.gen_range(0..fps.len())], &fps[rng.gen_range(0..fps.len())]);
        let t = tanimoto(a, b).unwrap();
        check(t == tanimoto(b, a).unwrap() && (0.0..=1.0).contains(&t), "tanimoto symmetry/range")?;
        check(tanimoto(a, a).unwrap() == 1.0, "tanimoto identity")?;
    }
    for _ in 0..5000 {
        let mut word = || -> Vec<u8> { (0..rng.gen_range(0..15)).map(|_| b"CNO()=1"[rng.gen_range(0..7)]).collect() };
        let (x, y, z) = (word(), word(), word());
        check(levenshtein(&x, &x) == 0, "d(x,x)=0")?;
        check(levenshtein(&x, &y) == levenshtein(&y, &x), "symmetry")?;
        check(levenshtein(&x, &z) <= levenshtein(&x, &y) + levenshtein(&y, &z), "triangle inequality")?;
    }
    Ok("BLEU 1.0, Tanimoto and Levenshtein axioms on 5000 cases each".into())
}

fn run_cli(args: &[&str], input: &str) -> (String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_molstruct"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let input = input.to_string();
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn end_to_end() -> Result<String, String> {
    let corpus = mixed_corpus(1000);
    let input: String = corpus.iter().enumerate().map(|(i, s)| format!("{}\n", json!({"id": i, "smiles": s}))).collect();
    let start = Instant::now();
    let (analyzed, code) = run_cli(&["analyze"], &input);
    check(code == 0, format!("analyze exit {code}"))?;
    let scoring: String = analyzed
        .lines()
        .map(|l| {
            let mut r: Value = serde_json::from_str(l).unwrap();
            r["gold_smiles"] = r["smiles"].clone();
            format!("{r}\n")
        })
        .collect();
    let (report, code) = run_cli(&["score"], &scoring);
    let t = start.elapsed();
    check(code == 0, format!("score exit {code}"))?;
    let rep: Value = serde_json::from_str(&report).map_err(|e| e.to_string())?;
    check(rep["n_records"] == 1000, "record count")?;
    for k in ComponentKind::CORE {
        let a = &rep["per_component"][k.key()];
        check(a["accuracy"] == 1.0 && a["n_scored"] == 1000, format!("{k}: {a}"))?;
    }
    check(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("1000 molecules, six core components at 1.0, {:.2}s", t.as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 8] = [
        ("anchored formula and weight values", anchored_values),
        ("structural contrast suite", contrast_suite),
        ("reasoning-accuracy scoring rules", scoring_rules),
        ("rejection-sampling properties", rejection_sampling),
        ("parser and canonicalizer invariance", parser_and_canonicalizer),
        ("oracle equivalence", oracle_equivalence),
        ("metric sanity", metrics_sanity),
        ("end-to-end analyze and score pipeline", end_to_end),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}) [{ms:.0} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why} [{ms:.0} ms]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
