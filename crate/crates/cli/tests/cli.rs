use std::path::Path;
use std::process::{Command, Output};

fn heegner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heegner")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn value<'a>(tsv: &'a str, key: &str) -> &'a str {
    tsv.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|rest| rest.strip_prefix('\t')))
        .unwrap_or_else(|| panic!("no {key} in\n{tsv}"))
}

#[test]
fn lattice_for_level13() {
    let out = heegner(&["--preset", "s4n13", "lattice"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("key\tvalue"));
    assert_eq!(value(&text, "level"), "13");
    let ratio: f64 = value(&text, "ratio_re").parse().unwrap();
    assert!((ratio - 0.5).abs() < 1e-10, "{ratio}");
    let residual: f64 = value(&text, "membership_residual").parse().unwrap();
    assert!(residual < 1e-20);
}

#[test]
fn table_reproduces_level3_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.tsv");
    let out = heegner(&["--preset", "s10n3", "--parallel", "2", "--out", path.to_str().unwrap(), "table"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("D\tr\tm\tn\tresidual\tstable"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 6 && r[5] == "true"));
    // the anchor is y_{-8}/2
    let anchor = rows.iter().find(|r| r[0] == "-8").expect("D = -8 row");
    assert_eq!(anchor[2], "2");
    assert!(String::from_utf8_lossy(&out.stderr).contains("t = 1"));
}

#[test]
fn jacobi_verification_passes() {
    let out = heegner(&["--preset", "s4n13", "verify", "--mode", "jacobi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("D\tr\tn\tm\tc\tmatch"));
    assert!(text.lines().skip(1).all(|l| l.ends_with("\ttrue")));
}

#[test]
fn waldspurger_verification_passes() {
    let out = heegner(&["--preset", "s12n4", "verify", "--mode", "waldspurger"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("D\tm\tL_value\tratio\texpected_ratio\trel_err\tpass"));
    assert!(text.lines().count() > 5);
}

#[test]
fn config_file_overrides_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "preset = s4n13\ndigits = 32\n").unwrap();
    let out = heegner(&["--config", path.to_str().unwrap(), "lattice"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(value(&stdout(&out), "digits"), "32");
}

#[test]
fn generated_level1_form_starts_like_eisenstein_product() {
    let out = heegner(&["gen-form", "--builtin", "s18n1", "--count", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("level 1 weight 18"));
    // q - 528 q^2 - 4284 q^3 + ...
    assert_eq!(lines.next(), Some("1 1"));
    assert_eq!(lines.next(), Some("2 -528"));
    assert_eq!(lines.next(), Some("3 -4284"));
}

#[test]
fn errors_exit_with_code_2() {
    let out = heegner(&["--preset", "nope", "lattice"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let missing = Path::new("/nonexistent/run.cfg");
    let out = heegner(&["--config", missing.to_str().unwrap(), "table"]);
    assert_eq!(out.status.code(), Some(2));

    let out = heegner(&["--preset", "s10n3", "--terms", "many", "table"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_source_is_an_error() {
    let out = heegner(&["table"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--preset"));
}
