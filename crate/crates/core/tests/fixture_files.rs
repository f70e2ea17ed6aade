//! The JSON files under `fixtures/` are the canonical saves of the built-in
//! fixtures. Set `VRA_BLESS=1` to regenerate them.

use std::path::PathBuf;

use vra_core::codet::{codet_complete, CodetOptions};
use vra_core::fixtures::{deterministic_example, running_example, stack_example};
use vra_core::io::{load_vpa, load_vra, save_vpa, save_vra};

fn expected() -> Vec<(&'static str, String)> {
    vec![
        ("running.vra.json", save_vra(&running_example())),
        ("deterministic.vra.json", save_vra(&deterministic_example())),
        ("running-normal-form.vra.json", save_vra(&codet_complete(&running_example(), CodetOptions::default()))),
        ("stack.vpa.json", save_vpa(&stack_example())),
    ]
}

#[test]
fn fixture_files_match_builders() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let bless = std::env::var_os("VRA_BLESS").is_some();
    for (file, text) in expected() {
        let path = dir.join(file);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text, "{file}");
        if file.ends_with(".vpa.json") {
            assert_eq!(save_vpa(&load_vpa(&on_disk).unwrap()), text);
        } else {
            assert_eq!(save_vra(&load_vra(&on_disk).unwrap()), text);
        }
    }
}
