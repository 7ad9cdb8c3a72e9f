//! include/affchab.h must match what cbindgen generates from the source.
//! Run with AFFCHAB_BLESS=1 to rewrite it.

use std::path::Path;

#[test]
fn header_is_current() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).unwrap();
    let mut generated = Vec::new();
    cbindgen::Builder::new()
        .with_crate(dir)
        .with_config(config)
        .generate()
        .expect("cbindgen")
        .write(&mut generated);
    let generated = String::from_utf8(generated).unwrap();
    let path = dir.join("include").join("affchab.h");
    if std::env::var_os("AFFCHAB_BLESS").is_some() {
        std::fs::write(&path, &generated).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
    assert!(on_disk == generated, "include/affchab.h is stale; rerun with AFFCHAB_BLESS=1");
    for name in ["affchab_problem_parse", "affchab_solve", "affchab_verify", "affchab_report_free", "AFFCHAB_STATUS_BAD_REDUCTION"] {
        assert!(generated.contains(name), "{name}");
    }
}
