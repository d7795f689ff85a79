#![allow(dead_code)]

use std::path::PathBuf;

use eqseq::calculus::{preset, CalculusSpec};
use eqseq::checker::Derivation;
use eqseq::parser::parse_derivation;

pub struct Golden {
    pub name: String,
    pub source: String,
    pub derivation: Derivation,
    pub spec: CalculusSpec,
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn spec_of(text: &str) -> CalculusSpec {
    if text.contains('=') {
        text.parse().unwrap_or_else(|e| panic!("{text}: {e}"))
    } else {
        preset(text).unwrap_or_else(|e| panic!("{text}: {e}")).spec
    }
}

/// Every file of the golden MANIFEST with its stated calculus.
pub fn golden() -> Vec<Golden> {
    let dir = golden_dir();
    let manifest = std::fs::read_to_string(dir.join("MANIFEST")).expect("MANIFEST");
    manifest
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (name, spec) = line.split_once(' ').expect("<file> <calculus>");
            let source = std::fs::read_to_string(dir.join(name)).expect(name);
            let derivation = parse_derivation(&source).unwrap_or_else(|e| panic!("{name}: {e}"));
            Golden {
                name: name.to_string(),
                source,
                derivation,
                spec: spec_of(spec.trim()),
            }
        })
        .collect()
}

pub fn golden_file(name: &str) -> Golden {
    golden()
        .into_iter()
        .find(|g| g.name == name)
        .unwrap_or_else(|| panic!("no golden file {name}"))
}

/// The source without comment lines.
pub fn uncommented(source: &str) -> String {
    source
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
