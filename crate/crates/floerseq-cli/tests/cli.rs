//! End-to-end runs of the installed binary against the corpus.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_floerseq"))
}

fn corpus_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../corpus/{name}.json"))
}

#[test]
fn validate_accepts_corpus_file() {
    let out = bin().arg("validate").arg(corpus_file("x_z3")).output().unwrap();
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn validate_rejects_garbage() {
    let out = bin().arg("validate").arg("/dev/null").output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn filtration_prints_the_chain() {
    let out = bin()
        .arg("filtration")
        .arg(corpus_file("d5"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 ⊂ "), "{text}");
}

#[test]
fn verify_corpus_is_clean() {
    let out = bin().args(["verify", "--corpus"]).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let ok = text.lines().filter(|l| l.starts_with("ok: ")).count();
    assert_eq!(ok, 31, "{text}");
}
