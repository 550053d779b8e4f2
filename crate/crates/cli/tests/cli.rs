use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn lrss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("lrss-cli-{name}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, file: &str) -> String {
        self.0.join(file).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn construct_gabidulin(dir: &TempDir) -> String {
    let path = dir.path("scheme.json");
    let out = lrss(&[
        "construct", "--type", "gabidulin", "--n", "4", "--k", "1", "--l", "1", "--m", "3", "--r",
        "1", "--N", "4", "--out", &path,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn construct_writes_expected_scheme() {
    let dir = TempDir::new("construct");
    let path = construct_gabidulin(&dir);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["format"], "lrss/1");
    assert_eq!(doc["tag"], "gabidulin");
    assert_eq!(
        doc["params"],
        serde_json::json!({"n": 4, "k": 1, "l": 1, "m": 3, "r": 1})
    );
    assert_eq!(doc["field"]["p"], 2);
    assert_eq!(doc["field"]["N"], 4);
    let again = dir.path("again.json");
    lrss(&[
        "construct", "--type", "gabidulin", "--n", "4", "--k", "1", "--l", "1", "--m", "3", "--r",
        "1", "--N", "4", "--out", &again,
    ]);
    assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn audit_exit_codes() {
    let dir = TempDir::new("audit");
    let good = construct_gabidulin(&dir);
    for extra in [&[][..], &["--oracle"][..]] {
        let mut args = vec!["audit", "--scheme", good.as_str()];
        args.extend_from_slice(extra);
        let out = lrss(&args);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_json(&out)["pass"], true);
    }

    let leaky = dir.path("leaky.json");
    let out = lrss(&[
        "construct", "--type", "split", "--n", "6", "--k", "3", "--l", "1", "--r", "2", "--p",
        "13", "--out", &leaky,
    ]);
    assert!(out.status.success());
    let out = lrss(&["audit", "--scheme", &leaky]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn bounds_secrecy_value() {
    let out = lrss(&["bounds", "--bound", "secrecy", "--m", "7", "--l", "1", "--r", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["value"], 5);
}

fn encode(scheme: &str, out: &str) {
    let o = lrss(&[
        "encode", "--scheme", scheme, "--secret", "0x9", "--seed", "3", "--out", out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn encode_decode_repair_round_trip() {
    let dir = TempDir::new("roundtrip");
    let scheme = construct_gabidulin(&dir);
    let (a, b) = (dir.path("a.json"), dir.path("b.json"));
    encode(&scheme, &a);
    encode(&scheme, &b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    for coords in ["0,1,2", "1,2,3", "0,2,3"] {
        let out = lrss(&["decode", "--scheme", &scheme, "--shares", &a, "--coords", coords]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        // 0x9 in GF(2^4) as little-endian coefficients
        assert_eq!(stdout_json(&out)["secret"], serde_json::json!([1, 0, 0, 1]));
    }
    let out = lrss(&["decode", "--scheme", &scheme, "--shares", &a, "--coords", "0,1"]);
    assert_eq!(out.status.code(), Some(1));

    let shares: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    let out = lrss(&["repair", "--scheme", &scheme, "--shares", &a, "--target", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["coords"]["0"], shares["coords"]["0"]);
}

#[test]
fn errors_exit_one() {
    assert_eq!(lrss(&["construct", "--type", "nonsense"]).status.code(), Some(1));
    assert_eq!(lrss(&["bounds"]).status.code(), Some(1));
    let missing = Path::new("/nonexistent/scheme.json").to_string_lossy().into_owned();
    assert_eq!(lrss(&["audit", "--scheme", &missing]).status.code(), Some(1));
    let dir = TempDir::new("malformed");
    let bad = dir.path("bad.json");
    fs::write(&bad, "{\"format\": \"lrss/1\",").unwrap();
    let out = lrss(&["audit", "--scheme", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}
