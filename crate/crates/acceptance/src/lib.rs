//! Acceptance checks for ruling-lab. Run with `cargo test -p ruling-lab-tests`;
//! each criterion prints one PASS or FAIL line.

use std::path::PathBuf;

use ruling_lab::FrontDiagram;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> FrontDiagram {
    let path = corpus_dir().join(format!("{}.front", name));
    FrontDiagram::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Valid corpus fronts by file stem, sorted.
pub fn corpus_all() -> Vec<(String, FrontDiagram)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "front"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .filter_map(|p| {
            let d = FrontDiagram::from_text(&std::fs::read_to_string(&p).ok()?).ok()?;
            d.check().ok()?;
            Some((p.file_stem()?.to_string_lossy().into_owned(), d))
        })
        .collect()
}
