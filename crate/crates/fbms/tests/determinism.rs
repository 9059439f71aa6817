use fbms::verify::produce_outputs;

#[test]
fn two_runs_write_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let a = produce_outputs(tmp.path(), "a").unwrap();
    let b = produce_outputs(tmp.path(), "b").unwrap();
    assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
    for (name, bytes) in &a {
        assert!(bytes == &b[name], "{name} differs");
    }
    assert!(a.keys().any(|k| k.ends_with(".obj")));
    assert!(a.keys().any(|k| k.ends_with(".csv")));
    assert!(a.keys().filter(|k| k.ends_with("report.json")).count() >= 7);
}
