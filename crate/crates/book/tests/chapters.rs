use std::path::Path;

fn root() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src"))
}

/// Chapter files linked from SUMMARY.md.
fn summary_chapters() -> Vec<String> {
    let text = std::fs::read_to_string(root().join("SUMMARY.md")).unwrap();
    text.lines()
        .filter_map(|l| l.split_once("](").map(|(_, rest)| rest.trim_end_matches(')').to_string()))
        .collect()
}

#[test]
fn every_chapter_exists_and_is_compiled() {
    let lib = include_str!("../src/lib.rs");
    let chapters = summary_chapters();
    assert!(chapters.len() >= 8);
    for c in &chapters {
        assert!(root().join(c).is_file(), "{c} is listed but missing");
        assert!(lib.contains(&format!("book/src/{c}")), "{c} is not included as a doc-test");
    }
    for entry in std::fs::read_dir(root()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".md") && name != "SUMMARY.md" {
            assert!(chapters.contains(&name), "{name} is not listed in SUMMARY.md");
        }
    }
}

#[test]
fn chapters_with_code_have_rust_snippets() {
    for c in summary_chapters() {
        let text = std::fs::read_to_string(root().join(&c)).unwrap();
        if c != "cli.md" {
            assert!(text.contains("```rust"), "{c} has no runnable snippet");
        }
    }
}
