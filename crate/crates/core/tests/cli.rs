use std::path::PathBuf;
use std::process::{Command, Output};

use num_rational::BigRational;
use serde_json::Value;

use kaccoh::cocycle::pentagonal_coboundary;
use kaccoh::gamma::{ComplexBuilder, ComplexKind};
use kaccoh::io::{load_pair, read_mtx, ThetaFile};
use kaccoh::Coefficients;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn kaccoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kaccoh")).args(args).output().expect("spawn kaccoh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(path: &std::path::Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn validate_accepts_every_fixture() {
    for name in ["z6", "z2xz2", "s3", "d4", "z12"] {
        let o = kaccoh(&["validate", fixture(&format!("{name}.json")).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn invalid_inputs_exit_2() {
    let o = kaccoh(&["validate", fixture("z6_bad_intersection.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());

    let o = kaccoh(&["validate", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = kaccoh(&["validate", "/nonexistent/pair.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = kaccoh(&["cohomology", fixture("z6.json").to_str().unwrap(), "--coeff", "Q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_budget_exits_3() {
    let o = kaccoh(&["cohomology", fixture("z12.json").to_str().unwrap(), "--degree", "3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn broken_theta_exits_4() {
    let path = fixture("d4.json");
    let (mp, _) = load_pair(&path).unwrap();
    let a: Vec<BigRational> = (0..mp.order()).map(|i| BigRational::new((i as i64).into(), 8.into())).collect();
    let mut theta = pentagonal_coboundary(&mp, Coefficients::Torus, &a).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, serde_json::to_string(&ThetaFile::from_theta(&theta)).unwrap()).unwrap();
    let o = kaccoh(&["pentagon", path.to_str().unwrap(), "--theta", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));

    let v = theta.theta.values.iter_mut().find(|v| v.numer() != &0.into()).unwrap();
    *v = v.clone() + BigRational::new(1.into(), 3.into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&ThetaFile::from_theta(&theta)).unwrap()).unwrap();
    let o = kaccoh(&["pentagon", path.to_str().unwrap(), "--theta", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("s3.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = kaccoh(&["cohomology", input.to_str().unwrap(), "--coeff", "Zm:4", "--degree", "2", "--json", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        report(&out)
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    assert_eq!(a["verdict"], "PASS");
    assert_eq!(a["command"], "cohomology");
    assert_eq!(a["input_digest"].as_str().unwrap().len(), 64);
    assert!(a["config"].get("json").is_none());
}

#[test]
fn export_round_trips() {
    let path = fixture("z6.json");
    let dir = tempfile::tempdir().unwrap();
    let o = kaccoh(&["export", path.to_str().unwrap(), "--degree", "2", "--complex", "kac_C", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    let files = manifest["files"].as_array().unwrap();
    assert!(!files.is_empty());

    let (mp, _) = load_pair(&path).unwrap();
    let c = ComplexBuilder::new(&mp).build(ComplexKind::KacC, 2).unwrap();
    for f in files {
        let m = read_mtx(&std::fs::read_to_string(dir.path().join(f["file"].as_str().unwrap())).unwrap()).unwrap();
        let n = f["degree"].as_i64().unwrap() as i32;
        assert_eq!(&m, c.differential(n).unwrap(), "degree {n}");
    }

    let o = kaccoh(&["export", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extensions_of_z6_are_trivial() {
    let o = kaccoh(&["extensions", fixture("z6.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn sequence_of_z6_is_exact() {
    let o = kaccoh(&["sequence", fixture("z6.json").to_str().unwrap(), "--through", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
