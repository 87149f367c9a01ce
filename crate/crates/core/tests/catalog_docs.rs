//! The documented reference corpus must match the built-in catalog.
//! Regenerate with `MOSAIC_BLESS=1 cargo test -p mosaic-core --test catalog_docs`.

use std::path::PathBuf;

use mosaic_core::catalog::{builtins, load_catalog, serialize_catalog};

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/builtin-catalog.json")
}

#[test]
fn reference_corpus_matches_builtins() {
    let rendered = serialize_catalog(&builtins());
    let path = corpus_path();
    if std::env::var_os("MOSAIC_BLESS").is_some() {
        std::fs::write(&path, &rendered).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).expect("docs/builtin-catalog.json exists");
    assert_eq!(on_disk, rendered, "reference corpus is stale; rerun with MOSAIC_BLESS=1");
    assert_eq!(load_catalog(&on_disk).unwrap(), builtins());
}
