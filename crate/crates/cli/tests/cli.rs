use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const F2: &str = "group F2
  gens: a, b
  rels:
  peripheral A
    gens: x
    rels:
    embed: x -> a
  end
  peripheral B
    gens: y
    rels:
    embed: y -> b
  end
end
";

const F2_B2: &str = "group F2sq
  gens: a, b
  rels:
  peripheral A
    gens: x
    rels:
    embed: x -> a
  end
  peripheral B
    gens: y
    rels:
    embed: y -> b^2
  end
end
";

const Z3: &str = "group Z3\n  gens: a\n  rels: a^3\nend\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dehnfill"))
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut c = bin();
    for a in args {
        c.arg(a);
    }
    c.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn compare_same_file_is_isomorphic() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "same.grp", F2);
    let o = run(&[&"compare", &p(&f), &p(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("ISOMORPHIC"));
}

#[test]
fn wp_generator_of_z3_is_nontrivial() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "z3.grp", Z3);
    let o = run(&[&"wp", &p(&f), &"a"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NONTRIVIAL"));
    let o = run(&[&"wp", &p(&f), &"a^3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn fill_level_two_of_f2() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let o = run(&[&"fill", &p(&f), &"-i", &"2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("gens: a, b\n"), "{text}");
    assert!(text.contains("rels: a^2, b^2\n"), "{text}");
    assert!(text.contains("peripheral orders: 2 2"), "{text}");

    // the output is itself a group file
    let out = d.path().join("filled.grp");
    let o = run(&[&"fill", &p(&f), &"-i", &"2", &"-o", &p(&out)]);
    assert_eq!(code(&o), 0);
    let back = run(&[&"fingerprint", &p(&out), &"--json"]);
    assert_eq!(code(&back), 0);
    assert!(stdout(&back).contains("\"torsion_factors\": [\n      2,\n      2\n    ]"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let g = file(&d, "f2sq.grp", F2_B2);
    for args in [
        vec![p(&f).to_owned(), p(&g).to_owned()],
        vec![p(&f).to_owned(), p(&f).to_owned()],
    ] {
        let once = run(&[&"compare", &args[0], &args[1], &"--json"]);
        let twice = run(&[&"compare", &args[0], &args[1], &"--json"]);
        assert_eq!(once.stdout, twice.stdout);
        assert!(!once.stdout.is_empty());
    }
    let a = run(&[&"fingerprint", &p(&g), &"--json"]);
    let b = run(&[&"fingerprint", &p(&g), &"--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compare_record_verifies_and_tampering_is_rejected() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let g = file(&d, "f2sq.grp", F2_B2);
    let rec = d.path().join("verdict.json");
    let o = run(&[&"compare", &p(&f), &p(&g), &"--out", &p(&rec)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NOT_ISOMORPHIC"));
    let v = run(&[&"verify", &p(&rec)]);
    assert_eq!(code(&v), 1);
    assert_eq!(stdout(&v), "verified NOT_ISOMORPHIC\n");

    let text = std::fs::read_to_string(&rec).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["non_isomorphism"]["right_value"] = serde_json::Value::String("(3)".into());
    let bad = file(&d, "bad.json", &serde_json::to_string(&value).unwrap());
    assert_eq!(code(&run(&[&"verify", &p(&bad)])), 7);

    let iso = d.path().join("iso.json");
    assert_eq!(code(&run(&[&"compare", &p(&f), &p(&f), &"--out", &p(&iso)])), 0);
    assert_eq!(code(&run(&[&"verify", &p(&iso)])), 0);
}

#[test]
fn core_reports_index() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let o = run(&[&"core", &p(&f), &"--peripheral", &"B", &"-i", &"4", &"--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["quotient_order"], 12);
    assert_eq!(v["generators"][0], "y^12");
    let o = run(&[&"core", &p(&f), &"--peripheral", &"C", &"-i", &"2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn error_exit_codes() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "z3.grp", Z3);
    let broken = file(&d, "broken.grp", "group X\n  gens: a\n  rels: b\nend\n");
    assert_eq!(code(&run(&[&"frobnicate"])), 3);
    assert_eq!(code(&run(&[&"fill", &p(&f)])), 3);
    assert_eq!(code(&run(&[&"fingerprint", &p(&broken)])), 4);
    assert_eq!(code(&run(&[&"wp", &p(&f), &"a^"])), 4);
    assert_eq!(code(&run(&[&"wp", &p(&f), &"a", &"--wp-factor-count", &"0"])), 5);
    assert_eq!(code(&run(&[&"wp", &d.path().join("missing.grp").as_os_str(), &"a"])), 6);
}

#[test]
fn flags_override_config_file() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let zero = file(&d, "zero.cfg", "# all defaults but one\nmax_level = 0\n");
    assert_eq!(code(&run(&[&"compare", &p(&f), &p(&f), &"--config", &p(&zero)])), 5);
    let o = run(&[&"compare", &p(&f), &p(&f), &"--config", &p(&zero), &"--max-level", &"1"]);
    assert_eq!(code(&o), 0);
    let junk = file(&d, "junk.cfg", "speed = fast\n");
    assert_eq!(code(&run(&[&"fingerprint", &p(&f), &"--config", &p(&junk)])), 5);
}

#[test]
fn tiny_budget_gives_unknown() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "f2.grp", F2);
    let o = run(&[&"fill", &p(&f), &"-i", &"4", &"--hom-node-budget", &"1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("UNKNOWN"));
}
