use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagsheaf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const ONE_POINT_ON_TORUS: &str = r#"
format_version = 1
name = "one-point"

[manifold]
kind = "torus"
n1 = 4
n2 = 4

[[components]]
dim_c = 0
betti = [1]
f21 = 0
s = 0

[components.germ1]
x = [0, 0]
xi = [0, 0]
hessian = [[0, 0], [0, 0]]
primitive = 0

[components.germ2]
x = [0, 0]
xi = [0, 0]
hessian = [[1, 0], [0, 1]]
primitive = 0
"#;

#[test]
fn verify_passes_on_the_circle() {
    let out = run(&["verify", scenario("circle_cosine.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("result: pass"));
}

#[test]
fn too_few_components_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one_point.toml");
    std::fs::write(&path, ONE_POINT_ON_TORUS).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result: FAIL"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["appendix-a", "three"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/scenario.toml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "format_version = 9\nname = \"x\"\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn machine_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "appendix-a",
        "one",
        "--format",
        "machine",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["format_version"], 1);
    assert_eq!(json["appendix_a"]["contribution"], 1);
    assert_eq!(json["appendix_a"]["lower_bound"], 1);
}

#[test]
fn tau_and_maslov_commands() {
    let tau = run(&["tau", scenario("frames_anchor.toml").to_str().unwrap(), "--format", "machine"]);
    assert_eq!(tau.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&tau.stdout).unwrap();
    assert_eq!(v["tau"], -1);

    let mu = run(&["maslov", scenario("generator_loop.toml").to_str().unwrap()]);
    assert_eq!(mu.status.code(), Some(0));
    assert!(stdout(&mu).contains("mu = 1"));
}

#[test]
fn barcode_with_window_override() {
    let out = run(&[
        "barcode",
        scenario("circle16.toml").to_str().unwrap(),
        scenario("cosine16.toml").to_str().unwrap(),
        "--window",
        "0",
        "+inf",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("H0  [-1, +inf)"), "{text}");
    assert!(text.contains("dims [0, 1]"), "{text}");
}

#[test]
fn negated_tau_fails_the_suites() {
    let out = run(&["suite", "--tiny", "--negate-tau"]);
    assert_eq!(out.status.code(), Some(1));
    let ok = run(&["suite", "--tiny", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0));
}
