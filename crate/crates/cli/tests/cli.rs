use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hyperchrom::format::{PolyJson, TemplateJson};
use hyperchrom_core::poly::{examples, PolySpec};
use hyperchrom_core::templates::Template;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperchrom")).current_dir(dir).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn poly(dir: &Path, name: &str, p: &PolySpec) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&PolyJson::from_spec(p)).unwrap()).unwrap();
    path
}

fn template(dir: &Path, name: &str, t: &Template) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&TemplateJson::from_template(t)).unwrap()).unwrap();
    path
}

fn grid4() -> Template {
    Template::from_points(&[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap()
}

/// An oracle that answers every query with the same status.
fn constant_oracle(status: &str) -> String {
    format!(r#"while read -r line; do echo '{{"status":"{status}"}}'; done"#)
}

#[test]
fn template_commands() {
    let dir = tempfile::tempdir().unwrap();
    template(dir.path(), "g.json", &grid4());
    let r = run(dir.path(), &["template", "dist", "--in", "g.json"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "e=2 witness {0,1}"));
    let r = run(dir.path(), &["template", "collapse", "--in", "g.json", "--pi", "0,0"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("e=1 (source e=2)"), "{}", r.stderr);
    let r = run(dir.path(), &["template", "enum", "--k", "3", "--d", "1"]);
    assert_eq!((r.code, r.stdout.lines().count()), (0, 1));
    let r = run(dir.path(), &["template", "hypergraph", "--in", "g.json", "--sizes", "2,2"]);
    assert_eq!(r.code, 0);
    let h: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(h["edges"].as_array().map(Vec::len), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    poly(dir.path(), "fox.json", &examples::fox(1));
    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    for args in [
        &["avoid", "--poly", "fox.json", "--kappa", "aleph:0"][..],
        &["verify", "--in", "bad.json"],
        &["verify", "--in", "missing.json"],
        &["chi", "--poly", "fox.json", "--continuum", "aleph:w"],
        &["depth", "classify", "--poly", "fox.json", "--budget-grid-max", "1"],
        &["examples", "run", "--only", "no-such-entry"],
    ] {
        assert_eq!(run(dir.path(), args).code, 1, "{args:?}");
    }
    assert_eq!(run(dir.path(), &["--help"]).code, 0);
}

#[test]
fn tampering_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    poly(dir.path(), "fox.json", &examples::fox(1));
    template(dir.path(), "line4.json", &Template::line(4).unwrap());
    let r = run(dir.path(), &["embed", "search", "--poly", "fox.json", "--template", "line4.json", "--sizes", "4", "--out", "w.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(run(dir.path(), &["verify", "--in", "w.json"]).code, 0);
    let text = fs::read_to_string(dir.path().join("w.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sizes"] = serde_json::json!([5]);
    fs::write(dir.path().join("t.json"), v.to_string()).unwrap();
    let r = run(dir.path(), &["verify", "--in", "t.json"]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.starts_with("REJECTED embedding-witness"), "{}", r.stdout);
    // without a digest the content itself is checked
    v.as_object_mut().unwrap().remove("digest");
    fs::write(dir.path().join("t.json"), v.to_string()).unwrap();
    assert_eq!(run(dir.path(), &["verify", "--in", "t.json"]).code, 3);
}

#[test]
fn oracle_verdicts_are_trusted_not_verified() {
    let dir = tempfile::tempdir().unwrap();
    poly(dir.path(), "iso.json", &examples::isosceles(2));
    template(dir.path(), "line3.json", &Template::line(3).unwrap());
    let base = ["embed", "search", "--poly", "iso.json", "--template", "line3.json", "--sizes", "7", "--strategy", "oracle"];

    let unknown = constant_oracle("unknown");
    let r = run(dir.path(), &[&base[..], &["--oracle", &unknown]].concat());
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stdout.starts_with("unknown"), "{}", r.stdout);

    let unsat = constant_oracle("unsat");
    let r = run(dir.path(), &[&base[..], &["--oracle", &unsat, "--out", "n.json"]].concat());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = run(dir.path(), &["verify", "--in", "n.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.starts_with("unverified non-embedding"), "{}", r.stdout);
    let r = run(dir.path(), &["verify", "--in", "n.json", "--oracle", &unsat]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.contains("confirmed unsat"), "{}", r.stdout);

    let broken = "echo nonsense";
    assert_eq!(run(dir.path(), &[&base[..], &["--oracle", broken]].concat()).code, 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    poly(dir.path(), "col.json", &examples::collinearity());
    for out in ["a.json", "b.json"] {
        let r = run(dir.path(), &["depth", "classify", "--poly", "col.json", "--out", out]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert!(r.stdout.contains("depth [0, 0] decided"), "{}", r.stdout);
    }
    assert_eq!(fs::read(dir.path().join("a.json")).unwrap(), fs::read(dir.path().join("b.json")).unwrap());
    assert_eq!(run(dir.path(), &["verify", "--in", "a.json"]).code, 0);
}

#[test]
fn avoid_and_chi_on_a_stored_report() {
    let dir = tempfile::tempdir().unwrap();
    poly(dir.path(), "zero.json", &examples::zero(2, 1));
    assert_eq!(run(dir.path(), &["depth", "classify", "--poly", "zero.json", "--out", "r.json"]).code, 0);
    let r = run(dir.path(), &["chi", "--report", "r.json", "--continuum", "aleph:3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("continuum=aleph:3 chi=aleph:3"), "{}", r.stdout);
    let r = run(dir.path(), &["avoid", "--report", "r.json", "--kappa", "aleph:2", "--continuum", "aleph:3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("kappa=aleph:2 continuum=aleph:3 unavoidable"), "{}", r.stdout);
    let r = run(dir.path(), &["chi", "--report", "r.json", "--continuum", "aleph:w", "--allow-invalid-continuum"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("continuum=aleph:w!"), "{}", r.stdout);

    // a report whose verdicts were edited is refused even with a fresh digest
    let text = fs::read_to_string(dir.path().join("r.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["depth_hi"] = serde_json::json!("inf");
    v.as_object_mut().unwrap().remove("digest");
    fs::write(dir.path().join("e.json"), v.to_string()).unwrap();
    let r = run(dir.path(), &["chi", "--report", "e.json", "--continuum", "aleph:1"]);
    assert_eq!(r.code, 3, "{}", r.stdout);
}

#[test]
fn corpus_entry_runs() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["examples", "run", "--only", "zero"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("zero: ok"), "{}", r.stdout);
}
