use std::collections::BTreeMap;

use crate::element::Element;
use crate::graph::Molecule;

/// Element counts, hydrogens (including isotopic ones) folded into `H`.
pub fn element_counts(mol: &Molecule) -> BTreeMap<&'static str, u32> {
    let mut counts: BTreeMap<&'static str, u32> = BTreeMap::new();
    for atom in mol.atoms() {
        *counts.entry(atom.element.symbol()).or_default() += 1;
        let h = atom.total_h();
        if h > 0 {
            *counts.entry("H").or_default() += h;
        }
    }
    counts
}

/// Hill-order formula: carbon, hydrogen, then the rest alphabetically; with
/// no carbon every element is alphabetical. Charges are not written.
pub fn molecular_formula(mol: &Molecule) -> String {
    let mut counts = element_counts(mol);
    let mut out = String::new();
    let mut push = |sym: &str, n: u32| {
        out.push_str(sym);
        if n > 1 {
            out.push_str(&n.to_string());
        }
    };
    if let Some(c) = counts.remove("C") {
        push("C", c);
        if let Some(h) = counts.remove("H") {
            push("H", h);
        }
    }
    for (sym, n) in counts {
        push(sym, n);
    }
    out
}

/// Sum of standard atomic weights in g/mol, rounded half-up to two
/// decimals. An atom with an isotope label contributes its mass number.
pub fn molecular_weight(mol: &Molecule) -> f64 {
    let h = Element::H.standard_weight();
    let total: f64 = mol
        .atoms()
        .iter()
        .map(|a| {
            let own = match a.isotope {
                Some(mass) => f64::from(mass),
                None => a.element.standard_weight(),
            };
            own + h * f64::from(a.total_h())
        })
        .sum();
    round2(total)
}

pub(crate) fn round2(x: f64) -> f64 {
    // the nudge keeps values like 60.095 from rounding down through
    // binary representation error
    ((x * 100.0) + 0.5 + 1e-9).floor() / 100.0
}
