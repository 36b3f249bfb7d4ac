use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn hms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hms")).args(args).output().unwrap()
}

fn hms_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hms")).args(args).env(key, value).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_then_verify() {
    for doc in ["coin.json", "dial.json", "spin.json"] {
        let rep = scratch(&format!("{doc}.rep"));
        let built = hms(&["build", p(&data(doc)), "-o", p(&rep)]);
        assert_eq!(built.status.code(), Some(0), "{doc}: {}", String::from_utf8_lossy(&built.stderr));
        let checked = hms(&["verify", p(&data(doc)), p(&rep)]);
        assert_eq!(checked.status.code(), Some(0), "{doc}: {}", stdout(&checked));
    }
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scratch("coin.json.rep")).unwrap()).unwrap();
    assert_eq!(rep["version"], 1);
    assert_eq!(rep["maps"][0]["cells"].as_array().unwrap().len(), 2);
}

#[test]
fn spin_document_splits_at_three_quarters() {
    let spin = scratch("spin13.json");
    assert_eq!(hms(&["quantum", "gen", "--theta", "1/3", "-o", p(&spin)]).status.code(), Some(0));
    let rep = scratch("spin13.rep");
    assert_eq!(hms(&["build", p(&spin), "-o", p(&rep)]).status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let first = &doc["maps"][0]["cells"][0];
    assert_eq!(first["interval"], serde_json::json!(["0", "3/4"]));
    assert_eq!(first["outcome"], "up");
}

#[test]
fn invalid_mass_exits_two_with_payload() {
    let text = std::fs::read_to_string(data("coin.json")).unwrap().replace("\"t\": \"1/2\"", "\"t\": \"1/3\"");
    let bad = scratch("bad.json");
    std::fs::write(&bad, text).unwrap();
    let out = hms(&["build", p(&bad), "-o", p(&scratch("never.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "MassNotOne");
    assert_eq!(err["deficit"], "1/6");
    assert_eq!(hms(&["classify", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn corrupted_representation_names_the_failing_set() {
    let rep = scratch("coin.rep");
    hms(&["build", p(&data("coin.json")), "-o", p(&rep)]);
    let text = std::fs::read_to_string(&rep).unwrap().replacen("\"1/2\"", "\"7/10\"", 2);
    std::fs::write(&rep, text).unwrap();
    let out = hms(&["verify", p(&data("coin.json")), p(&rep)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("mismatch: state fair measurement toss B = {h}"), "{}", stdout(&out));
}

#[test]
fn check_exit_codes() {
    let coin = data("coin.json");
    assert_eq!(hms(&["check", p(&coin), "--lambda", "continuum"]).status.code(), Some(0));
    let one = hms(&["check", p(&coin), "--lambda", "finite:1"]);
    assert_eq!(one.status.code(), Some(1));
    assert!(stdout(&one).contains("\"answer\": \"no\""));
    let mu = hms(&["check", p(&coin), "--mu", p(&data("uniform4.json"))]);
    assert_eq!(mu.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&mu.stdout).unwrap();
    assert_eq!(report["comparison"]["matches"][0]["witness"]["kind"], "ATOM_PARTITION");
    let starved = hms_env(&["check", p(&coin), "--mu", p(&data("uniform4.json"))], "HMS_SEARCH_BUDGET", "1");
    assert_eq!(starved.status.code(), Some(3));
    let garbage = hms_env(&["check", p(&coin), "--mu", p(&data("uniform4.json"))], "HMS_SEARCH_BUDGET", "lots");
    assert_eq!(garbage.status.code(), Some(2));
    assert_eq!(hms(&["check", p(&coin), "--lambda", "finite:x"]).status.code(), Some(2));
}

#[test]
fn classify_prints_classes() {
    let out = hms(&["classify", p(&data("coin.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "FINITE(2, [1/2, 1/2])");
}

#[test]
fn sample_writes_csv_deterministically() {
    let rep = scratch("coin-sample.rep");
    hms(&["build", p(&data("coin.json")), "-o", p(&rep)]);
    let run = |shards: &str, out: &Path| {
        let o = hms(&[
            "sample", p(&rep), "--state", "fair", "--measurement", "toss", "-n", "20000", "--seed", "42",
            "--shards", shards, "--out", p(out),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("1", &scratch("a.csv"));
    let b = run("8", &scratch("b.csv"));
    assert_eq!(a, b);
    assert!(a.starts_with("state,measurement,outcome,expected,count,frequency,z\n"));
    assert_eq!(a.lines().count(), 3);
    let missing = hms(&["sample", p(&rep), "--state", "biased", "--measurement", "toss"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn equivalence_of_relabelled_coin() {
    let text = std::fs::read_to_string(data("coin.json"))
        .unwrap()
        .replace("\"fair\"", "\"even\"")
        .replace("\"h\"", "\"heads\"")
        .replace("\"t\"", "\"tails\"");
    let other = scratch("coin2.json");
    std::fs::write(&other, text).unwrap();
    let out = hms(&["equiv", p(&data("coin.json")), p(&other)]);
    assert_eq!(out.status.code(), Some(0));
    let w: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(w["states"]["fair"], "even");
    let none = hms(&["equiv", p(&data("coin.json")), p(&data("dial.json"))]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn quantum_gen_explicit_table() {
    let out = hms(&["quantum", "gen", "--theta", "0,1/2", "--explicit"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc.get("quantum").is_none());
    assert_eq!(doc["table"].as_array().unwrap().len(), 2);
}
