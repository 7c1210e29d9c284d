use std::fs;

use topofilt::enumeration::{cache_load, cache_path, cache_read, cache_store, enumerate_topologies};
use topofilt::Error;

#[test]
fn store_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for n in 0..=4 {
        let cat = enumerate_topologies(n).unwrap();
        let path = cache_store(dir.path(), &cat).unwrap();
        assert_eq!(path, cache_path(dir.path(), n));
        let back = cache_read(&path).unwrap();
        assert_eq!(back.entries(), cat.entries());
        assert_eq!(cache_load(dir.path(), n).unwrap().entries(), cat.entries());
    }
}

#[test]
fn missing_file_is_regenerated() {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_path(dir.path(), 3);
    assert!(!path.exists());
    let cat = cache_load(dir.path(), 3).unwrap();
    assert_eq!(cat.len(), 29);
    assert!(path.exists());
    assert_eq!(cache_read(&path).unwrap().len(), 29);
}

fn tamper(n: usize, edit: impl Fn(&str) -> String) -> Error {
    let dir = tempfile::tempdir().unwrap();
    let path = cache_store(dir.path(), &enumerate_topologies(n).unwrap()).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, edit(&text)).unwrap();
    match cache_load(dir.path(), n) {
        Err(e) => e,
        Ok(_) => panic!("tampered cache accepted"),
    }
}

#[test]
fn tampered_count_is_rejected() {
    let e = tamper(3, |t| t.replacen("\"count\":29", "\"count\":28", 1));
    assert!(matches!(e, Error::CacheCorrupt { .. }), "{e}");
}

#[test]
fn dropped_line_is_rejected() {
    let e = tamper(3, |t| {
        let mut lines: Vec<&str> = t.lines().collect();
        lines.remove(5);
        lines.join("\n") + "\n"
    });
    assert!(matches!(e, Error::CacheCorrupt { .. }), "{e}");
}

#[test]
fn swapped_lines_are_rejected() {
    let e = tamper(3, |t| {
        let mut lines: Vec<&str> = t.lines().collect();
        lines.swap(3, 4);
        lines.join("\n") + "\n"
    });
    assert!(matches!(e, Error::CacheCorrupt { .. }), "{e}");
}

#[test]
fn invalid_topology_line_is_rejected() {
    // drop the empty set from the second entry: no longer a topology
    let e = tamper(2, |t| {
        let mut lines: Vec<String> = t.lines().map(String::from).collect();
        lines[2] = lines[2].replacen("[0,", "[", 1);
        lines.join("\n") + "\n"
    });
    assert!(matches!(e, Error::CacheCorrupt { .. } | Error::Json(_)), "{e}");
}

#[test]
fn wrong_header_is_rejected() {
    let e = tamper(2, |t| t.replacen("topofilt-catalog", "something-else", 1));
    assert!(matches!(e, Error::CacheCorrupt { .. }), "{e}");
}
