use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gerbecalc"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gerbecalc-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn generate(dir: &std::path::Path, file: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(file);
    let mut args = vec!["generate", "--output", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn every_generated_mode_checks_clean() {
    let dir = scratch("modes");
    for mode in ["trivial", "coboundary", "abelian", "torsor", "crossed"] {
        let p = generate(&dir, &format!("{mode}.json"), &["--mode", mode, "--seed", "2"]);
        let o = run(&["check", "--input", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{mode}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn generation_is_byte_stable() {
    let dir = scratch("stable");
    let a = generate(&dir, "a.json", &["--mode", "coboundary", "--seed", "9"]);
    let b = generate(&dir, "b.json", &["--mode", "coboundary", "--seed", "9"]);
    let c = generate(&dir, "c.json", &["--mode", "coboundary", "--seed", "10"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn corrupted_cocycle_exits_one_and_names_cocg() {
    let dir = scratch("corrupt");
    let p = generate(&dir, "c.json", &["--mode", "coboundary", "--opens", "4", "--seed", "1"]);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    let entry = &mut v["gerbe"]["g"][0]["value"][0][2];
    let old = entry.as_str().unwrap().to_string();
    *entry = serde_json::Value::String(format!("{old} + 1"));
    fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = run(&["check", "--input", p.to_str().unwrap(), "--suite", "gerbe", "--report", "json"]);
    assert_eq!(code(&o), 1);
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] != "pass")
        .map(|r| r["equation"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"cocg"), "{failed:?}");
    assert!(!failed.contains(&"coclam"), "{failed:?}");
}

#[test]
fn bad_input_exits_two() {
    let dir = scratch("bad");
    let missing = dir.join("nope.json");
    assert_eq!(code(&run(&["check", "--input", missing.to_str().unwrap()])), 2);
    let junk = dir.join("junk.json");
    fs::write(&junk, "{\"context\": 3}").unwrap();
    assert_eq!(code(&run(&["check", "--input", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["generate", "--mode", "sideways"])), 2);
    assert_eq!(code(&run(&["generate", "--mode", "abelian", "--flavor", "u3"])), 2);
    let p = generate(&dir, "t.json", &["--mode", "trivial"]);
    assert_eq!(code(&run(&["check", "--input", p.to_str().unwrap(), "--suite", "bogus"])), 2);
}

#[test]
fn empty_nerve_is_a_vacuous_pass() {
    let dir = scratch("empty");
    let p = generate(&dir, "t.json", &["--mode", "trivial"]);
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    let obj = v.as_object_mut().unwrap();
    obj.insert("nerve".into(), serde_json::json!({"indices": [], "simplices": []}));
    for k in ["gerbe", "torsor", "triple", "rho", "equivalence", "crossed_module"] {
        obj.remove(k);
    }
    fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["check", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("vacuous"));
}

#[test]
fn derive_is_idempotent() {
    let dir = scratch("derive");
    let p = generate(&dir, "c.json", &["--mode", "coboundary", "--seed", "4"]);
    let once = dir.join("once.json");
    let twice = dir.join("twice.json");
    assert_eq!(code(&run(&["derive", "--input", p.to_str().unwrap(), "--output", once.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["derive", "--input", once.to_str().unwrap(), "--output", twice.to_str().unwrap()])), 0);
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());
    assert_eq!(code(&run(&["check", "--input", twice.to_str().unwrap()])), 0);
}

#[test]
fn normalize_stores_a_checkable_result() {
    let dir = scratch("normalize");
    let p = generate(&dir, "cm.json", &["--mode", "crossed", "--degree", "3", "--g1", "full"]);
    let out = dir.join("out.json");
    let o = run(&["normalize", "--input", p.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!v["crossed_module"]["normalized"].is_null());
    assert_eq!(code(&run(&["check", "--input", out.to_str().unwrap(), "--suite", "cm"])), 0);
    // no crossed-module section
    let t = generate(&dir, "t.json", &["--mode", "trivial"]);
    assert_eq!(code(&run(&["normalize", "--input", t.to_str().unwrap()])), 2);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let dir = scratch("jobs");
    let p = generate(&dir, "c.json", &["--mode", "coboundary", "--seed", "6"]);
    let one = run(&["check", "--input", p.to_str().unwrap(), "--report", "json", "--jobs", "1"]);
    let many = run(&["check", "--input", p.to_str().unwrap(), "--report", "json", "--jobs", "8"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
}
