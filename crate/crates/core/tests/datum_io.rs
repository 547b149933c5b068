use klvwb::datum::{builtin_datum, builtin_names, load_datum, validate_datum, ValidatedDatum};
use klvwb::klv::klv_table;

#[test]
fn builtins_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in builtin_names() {
        let d = builtin_datum(&name).unwrap();
        let path = dir.path().join("datum.json");
        std::fs::write(&path, d.to_json()).unwrap();
        let back = load_datum(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back.to_json(), d.to_json(), "{name}");
        assert!(validate_datum(&back).passed(), "{name}");
    }
}

#[test]
fn reloaded_datum_gives_the_same_table() {
    for name in ["sl2-T", "sl2-N", "hecke-regular:B2"] {
        let d = builtin_datum(name).unwrap();
        let back = load_datum(&d.to_json()).unwrap();
        let a = klv_table(&ValidatedDatum::new(d).unwrap()).unwrap();
        let vb = ValidatedDatum::new(back).unwrap();
        let b = klv_table(&vb).unwrap();
        assert_eq!(a.to_csv(vb.datum()), b.to_csv(vb.datum()), "{name}");
    }
}

#[test]
fn missing_action_row_is_rejected_on_load() {
    let mut file = builtin_datum("sl2-T").unwrap().to_file();
    file.actions.get_mut("1").unwrap().remove("p0");
    let text = serde_json::to_string(&file).unwrap();
    let err = load_datum(&text).unwrap_err();
    assert!(err.to_string().contains("p0"), "{err}");
}
