use tempfile::tempdir;
use tensnorm::io::{load_decomposition, load_tensor, save_decomposition, save_tensor, DecompositionFile, TensorFile};
use tensnorm::report::{emit_report, Format, NormRow};
use tensnorm::CliError;
use tensnorm_core::nuclear::{nuclear_upper, AltOptions};
use tensnorm_core::random::{random_state, stream_rng};
use tensnorm_core::{Field, Shape};

#[test]
fn tensor_round_trip_is_exact() {
    let dir = tempdir().unwrap();
    for (i, field) in [Field::Real, Field::Complex].into_iter().enumerate() {
        let t = random_state(&Shape::new(vec![2, 3, 2]).unwrap(), field, &mut stream_rng(i as u64, 0));
        let p = dir.path().join(format!("t{i}.json"));
        save_tensor(&t, &p).unwrap();
        let back = load_tensor(&p).unwrap();
        assert_eq!(back, t);
        for (a, b) in back.entries().iter().zip(t.entries()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn malformed_tensor_files_are_rejected() {
    let dir = tempdir().unwrap();
    let seven: Vec<String> = (0..7).map(|_| "[0.1, 0]".to_string()).collect();
    let p = write(
        dir.path(),
        "seven.json",
        &format!(r#"{{"schema_version":1,"shape":[2,2,2],"field":"C","entries":[{}]}}"#, seven.join(",")),
    );
    let e = load_tensor(&p).unwrap_err();
    assert!(matches!(e, CliError::Core(tensnorm_core::Error::EntryCount { expected: 8, got: 7 })), "{e}");
    assert_eq!(e.exit_code(), 2);

    let p = write(dir.path(), "imag.json", r#"{"schema_version":1,"shape":[1],"field":"R","entries":[[0, 0.1]]}"#);
    let e = load_tensor(&p).unwrap_err();
    assert!(matches!(e, CliError::Core(tensnorm_core::Error::RealWithImaginary { .. })), "{e}");

    let p = write(dir.path(), "junk.json", "{not json");
    assert!(matches!(load_tensor(&p), Err(CliError::Format(_))));
    let p = write(dir.path(), "ver.json", r#"{"schema_version":9,"shape":[1],"field":"R","entries":[[1, 0]]}"#);
    assert!(matches!(load_tensor(&p), Err(CliError::Format(_))));
}

#[test]
fn decomposition_file_reproduces_bound_and_residual() {
    let dir = tempdir().unwrap();
    let t = random_state(&Shape::new(vec![2, 2, 2]).unwrap(), Field::Complex, &mut stream_rng(3, 0));
    let r = nuclear_upper(&t, Field::Complex, &AltOptions { restarts: 2, ..AltOptions::default() }).unwrap();
    let p = dir.path().join("dec.json");
    save_decomposition(&r.decomposition, &t, &p).unwrap();
    let f: DecompositionFile = load_decomposition(&p).unwrap();
    let dec = f.to_decomposition().unwrap();
    assert!((dec.bound() - f.bound).abs() < 1e-9);
    assert!((dec.residual(&t).unwrap() - f.residual).abs() < 1e-9);
    assert!((f.bound - r.value).abs() < 1e-12);
}

fn w_row() -> NormRow {
    NormRow {
        name: "W".into(),
        nuclear_r: Some(3f64.sqrt()),
        nuclear_c: Some(1.5),
        spectral_r: Some(2.0 / 3.0),
        spectral_c: Some(2.0 / 3.0),
    }
}

#[test]
fn w_row_renders_four_decimals() {
    let text = emit_report(&[w_row()], Format::Table);
    let line = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(cells, ["W", "1.7321", "1.5000", "0.6667", "0.6667", "1.1547", "1.0000"]);
    let csv = emit_report(&[w_row()], Format::Csv);
    assert_eq!(csv.lines().nth(1).unwrap(), "W,1.7321,1.5000,0.6667,0.6667,1.1547,1.0000");
}

#[test]
fn missing_values_and_empty_sets() {
    let row = NormRow { name: "M4".into(), nuclear_c: Some(2.1213), spectral_c: Some(0.4714), ..NormRow::default() };
    let text = emit_report(&[row], Format::Table);
    assert!(text.lines().nth(1).unwrap().contains("--"));
    let empty = emit_report(&[], Format::Table);
    assert_eq!(empty.lines().count(), 1);
    let json = emit_report(&[], Format::Json);
    assert_eq!(serde_json::from_str::<Vec<serde_json::Value>>(&json).unwrap().len(), 0);
}

#[test]
fn json_report_keeps_full_precision() {
    let json = emit_report(&[w_row()], Format::Json);
    let v: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    let get = |k: &str| v[0][k].as_f64().unwrap();
    assert!((get("nuclear_r") - 3f64.sqrt()).abs() < 1e-15);
    assert!((get("spectral_c") - 2.0 / 3.0).abs() < 1e-15);
    assert!((get("product_c") - 1.0).abs() < 1e-15);
}

#[test]
fn tensor_file_metadata_is_optional() {
    let f: TensorFile =
        serde_json::from_str(r#"{"schema_version":1,"shape":[2],"field":"R","entries":[[1,0],[0,0]]}"#).unwrap();
    assert!(f.metadata.is_none());
    assert_eq!(f.to_tensor().unwrap().hs_norm(), 1.0);
}
