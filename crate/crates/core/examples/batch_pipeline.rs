//! The analyze, select and score batch steps on in-memory JSONL.

use molstruct::pipeline::{analyze_record, map_records, score_records, select_record, Options};
use serde_json::json;

fn main() {
    let opts = Options::default();
    let input: Vec<String> = ["CC(O)CC", "c1ccccc1O", "OC1CCC1", "C1CC"]
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"id": i, "smiles": s}).to_string())
        .collect();

    let analyzed = map_records(&input, &opts, analyze_record);
    for o in &analyzed {
        println!("{}", o.record);
    }

    let scoring: Vec<String> = analyzed
        .iter()
        .filter(|o| o.ok)
        .map(|o| {
            let mut r = o.record.clone();
            r["gold_smiles"] = r["smiles"].clone();
            r.to_string()
        })
        .collect();
    let (report, warnings) = score_records(&scoring, &opts);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    assert!(warnings.is_empty());

    let line = json!({
        "rationale": analyzed[0].record["rationale"],
        "candidates": ["CCN", "CC(O)CC", "C1CC"],
    })
    .to_string();
    println!("{}", select_record(&line, &opts).record);
}
