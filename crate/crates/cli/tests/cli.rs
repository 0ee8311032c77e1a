use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3rigid")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_fixture_and_rational_surface() {
    let o = run(&["classify", &fixture("k3_order16.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("singular fibers: III x5, III* x1"), "{text}");
    assert!(text.ends_with("K3: yes\n"));
    let o = run(&["classify", &fixture("rational_elliptic.toml")]);
    assert!(stdout(&o).contains("Euler number: 12\nK3: no"));
}

#[test]
fn malformed_input_exits_with_two() {
    let o = run(&["classify", &fixture("malformed.toml")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("syntax error") && err.contains("column 11"), "{err}");
    assert_eq!(run(&["classify", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(run(&["lattice", "show", "F4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_with_one() {
    let o = run(&["check-map", &fixture("k3_order16.toml"), "bad"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residual: (z^4 + 1)*x*t^7"));
}

#[test]
fn check_map_reports() {
    let text = stdout(&run(&["check-map", &fixture("k3_order16.toml"), "sigma"]));
    for line in ["ambient scalar: z^2", "omega factor: z^1", "order: 16", "primitive: yes", "symplectic: no"] {
        assert!(text.contains(line), "{line}\n{text}");
    }
    let text = stdout(&run(&["check-map", &fixture("k3_order16.toml"), "tau"]));
    for line in ["omega factor: 1", "order: 2", "symplectic: yes"] {
        assert!(text.contains(line), "{line}\n{text}");
    }
}

#[test]
fn json_reports_keep_key_order() {
    let o = run(&["--json", "rigidity", &fixture("k3_order16.graph"), "census", "tau"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["N"], 8);
    assert_eq!(v["k"], 0);
    let text = stdout(&o);
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("action") < pos("n") && pos("n") < pos("N") && pos("N") < pos("fixed_locus"));
    let o = run(&["--json", "lattice", "genus-equal", "U", "U(2)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["genus_equal"], false);
}

#[test]
fn rigidity_commands() {
    let g = fixture("k3_order16.graph");
    let text = stdout(&run(&["rigidity", &g, "compose", "sigma", "inv(sigma_ast)"]));
    assert!(text.contains("N = 8, k = 0"), "{text}");
    let text = stdout(&run(&["rigidity", &g, "enumerate", "--n", "16", "--c", "1", "--filter", "10,1", "--jobs", "3"]));
    assert!(text.starts_with("order 16 actions with c = 1 and N = 10, k = 1: 1 class\n"), "{text}");
    let serial = stdout(&run(&["rigidity", &g, "enumerate", "--n", "16", "--c", "1", "--filter", "10,1"]));
    assert_eq!(text, serial);
    let o = run(&["rigidity", &g, "census", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_output_is_written_and_stable() {
    let g = fixture("k3_order16.graph");
    let dir = std::env::temp_dir().join(format!("k3rigid-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("sigma.dot");
    let o = run(&["rigidity", &g, "census", "sigma", "--dot", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    let printed = stdout(&run(&["rigidity", &g, "dot", "sigma"]));
    assert_eq!(written, printed);
    assert_eq!(written, std::fs::read_to_string(fixture("expected/sigma.dot")).unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn lattice_commands() {
    let text = stdout(&run(&["lattice", "show", &fixture("k3_order16.graph")]));
    assert!(text.contains("rank: 14\nsignature: (1, 13)\n|det|: 16\ninvariant factors: (2, 2, 2, 2)"), "{text}");
    assert_eq!(stdout(&run(&["lattice", "genus-equal", "U+D8+D4", "U(2)+E8+D4"])), "true\n");
    assert_eq!(stdout(&run(&["lattice", "genus-equal", &fixture("k3_order16.graph"), "U(2)+D4+E8"])), "true\n");
    assert_eq!(stdout(&run(&["lattice", "genus-equal", "U", "U(2)"])), "false\n");
}
