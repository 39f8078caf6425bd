//! Replays the checked-in fuzz corpora through the fuzz targets' properties.

use std::path::PathBuf;

use derham_core::config::AlgebraConfig;
use derham_core::expr::{parse_element, parse_expression};
use derham_core::freealg::{Alphabet, Word};
use derham_core::symring::Ring;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files
        .iter()
        .map(|p| std::fs::read_to_string(p).unwrap())
        .collect()
}

#[test]
fn expression_seeds_round_trip() {
    let ring = Ring::laurent(&["q", "r", "Q"]);
    for s in seeds("parse_expression") {
        let c = parse_expression(&ring, &s).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(parse_expression(&ring, &c.to_string()).unwrap(), c);
    }
}

#[test]
fn element_seeds_round_trip() {
    let ring = Ring::laurent(&["q", "r"]);
    let alpha = Alphabet::calculus(2);
    for s in seeds("parse_element") {
        let e = parse_element(&alpha, &ring, &s).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(parse_element(&alpha, &ring, &e.to_string()).unwrap(), e);
    }
}

#[test]
fn word_seeds_round_trip() {
    let alpha = Alphabet::calculus(2);
    for s in seeds("parse_word") {
        let w = Word::parse(&alpha, &s).unwrap();
        assert_eq!(Word::parse(&alpha, &w.render(&alpha)).unwrap(), w);
    }
}

#[test]
fn config_seeds_build() {
    for s in seeds("parse_config") {
        AlgebraConfig::from_json(&s).unwrap().build().unwrap();
    }
}
