//! Porcelain output compared byte-for-byte against files in `tests/golden`.
//! Run with `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn seqdb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqdb"))
        .args(args)
        .current_dir(golden_dir())
        .env_remove("SEQDB_CATALOG")
        .env_remove("SEQDB_CONFIG")
        .output()
        .unwrap()
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {name}");
}

fn stdout_of(args: &[&str]) -> String {
    let out = seqdb(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn lookup_worked_example() {
    check_golden("lookup_worked.out", &stdout_of(&["--porcelain", "lookup", "1", "1", "3", "11", "45"]));
}

#[test]
fn lookup_accepts_commas_and_negatives() {
    let a = stdout_of(&["--porcelain", "lookup", "1,1,3,11,45"]);
    let b = stdout_of(&["--porcelain", "lookup", "1", "1,", "3", "11", "45"]);
    assert_eq!(a, b);
    check_golden(
        "lookup_sign.out",
        &stdout_of(&["--porcelain", "lookup", "--sign-insensitive", "1", "-1", "1", "0", "-1"]),
    );
}

#[test]
fn search_outputs() {
    check_golden("search_keyword.out", &stdout_of(&["--porcelain", "search", "--keyword", "frac"]));
    check_golden("search_text.out", &stdout_of(&["--porcelain", "search", "--text", "schroder"]));
}

#[test]
fn gen_with_check() {
    check_golden("gen_ekg.out", &stdout_of(&["--porcelain", "gen", "A064413", "--count", "20", "--check"]));
}

#[test]
fn seek_reports() {
    check_golden("seek_powers.out", &stdout_of(&["--porcelain", "--sequential", "seek", "1", "2", "4", "8", "16", "32"]));
    check_golden(
        "seek_corrupted.out",
        &stdout_of(&["--porcelain", "seek", "1", "1", "3", "11", "46", "197", "903"]),
    );
}

#[test]
fn ingest_reports_and_writes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("merged.txt");
    let report = stdout_of(&[
        "--porcelain",
        "ingest",
        "ingest_a.txt",
        "ingest_b.txt",
        "--out",
        target.to_str().unwrap(),
    ]);
    check_golden("ingest.out", &report);
    let written = fs::read_to_string(&target).unwrap();
    assert!(written.contains("%S A900004 2,3,5,7,11,13"));
    assert!(!written.contains("%N A900002"));

    let again = seqdb(&["--porcelain", "--catalog", target.to_str().unwrap(), "lookup", "2", "3", "5", "7"]);
    assert!(String::from_utf8(again.stdout).unwrap().contains("match\tA900004\t0\t1\t4\t0\t"));
}

#[test]
fn errors_are_one_machine_readable_line() {
    let out = seqdb(&["--porcelain", "lookup", "1", "x", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    check_golden("error_terms.err", &String::from_utf8(out.stderr).unwrap());

    let out = seqdb(&["lookup", "1", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error\tbad_query\t"));

    let out = seqdb(&["gen", "A000796"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stderr).unwrap(), "error\tgen\tno generator for A000796\n");

    let out = seqdb(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().lines().last().unwrap().starts_with("error\tusage\t"));

    let out = seqdb(&["--catalog", "missing.txt", "lookup", "1", "2", "3"]);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error\tcatalog\t"));
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("seqdb.conf");
    fs::write(&cfg, "# guesses only\nstages = guesses\nmax_order = 1\n").unwrap();
    let out = stdout_of(&["--porcelain", "--config", cfg.to_str().unwrap(), "seek", "1", "2", "4", "8", "16", "32"]);
    assert!(out.contains("model\tlinear_recurrence\ttrue"));
    assert!(!out.contains("transform\t"));

    fs::write(&cfg, "max_order = many\n").unwrap();
    let out = seqdb(&["--config", cfg.to_str().unwrap(), "seek", "1", "2", "4", "8", "16"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error\tconfig\t") && err.contains("line 1"), "{err}");
}

#[test]
fn mail_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqdb"))
        .args(["mail"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .env_remove("SEQDB_CATALOG")
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Hi,\nlookup 1 1 3 11 45\nlookup 1, 2, three\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    check_golden("mail_reply.out", &String::from_utf8(out.stdout).unwrap());
}
