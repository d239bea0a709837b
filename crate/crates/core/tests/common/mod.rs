#![allow(dead_code)]

use std::path::PathBuf;

use depthzero::calc::{load_spec, BlockSpec};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.json"))
}

pub fn load(name: &str) -> BlockSpec {
    load_spec(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Names of the block specifications that are expected to run cleanly.
pub fn valid_fixtures() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            let stem = p.file_stem()?.to_str()?.to_string();
            (p.extension()? == "json" && stem != "parameter_table" && stem != "certificate_probe").then_some(stem)
        })
        .collect();
    names.sort();
    names
}

/// Fixtures without explicit level data.
pub fn is_split(spec: &BlockSpec) -> bool {
    let d = &spec.datum;
    spec.affine == depthzero::affine::AffineRootSystem::from_split(d)
}
