//! Regenerates every JSON fixture under `fixtures/` from the
//! programmatic constructors, so the shipped files are reproducible:
//!
//! ```text
//! cargo run -p bohr-core --example generate_fixtures
//! ```
//!
//! A test compares the files on disk byte for byte against what this
//! generator produces; if it fails, rerun the generator.

use bohr_core::fixtures::shipped_fixture_texts;
use std::path::{Path, PathBuf};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn main() {
    let dir = fixtures_dir();
    std::fs::create_dir_all(&dir).expect("create fixtures directory");
    for (name, text) in shipped_fixture_texts() {
        let path = dir.join(name);
        std::fs::write(&path, &text).expect("write fixture");
        println!("wrote {}", path.display());
    }
}
