//! Deterministic molecular structure extraction for chemistry language-model
//! pipelines.
//!
//! The crate parses SMILES into an attributed molecular graph, extracts a
//! structural profile (formula, longest carbon chain, aromatic rings, ring
//! compounds, functional groups, chiral centres and molecular weight),
//! renders that profile as a templated rationale, scores candidate
//! molecules against a rationale to pick the best one, and computes the
//! usual molecule-generation metrics.

pub mod element;
pub mod evalkit;
pub mod graph;
pub mod matchsel;
pub mod pipeline;
pub mod rationale;
pub mod smiles;
pub mod structure;

pub use element::Element;
pub use graph::{Atom, Bond, BondOrder, Chirality, Molecule, Ring};
pub use rationale::{ComponentKind, ComponentValue, Rationale};
pub use smiles::{canonicalize, parse, random_equivalent, write, ParseDiagnostic};
pub use structure::{extract_profile, StructuralProfile};
