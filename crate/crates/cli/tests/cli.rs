use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn levy_ou(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levy-ou")).args(args).output().expect("binary runs")
}

fn run(config: &str, out: &Path, extra: &[&str]) -> Output {
    let cfg = out.with_extension("toml");
    fs::write(&cfg, config).unwrap();
    let mut args = vec!["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    levy_ou(&args)
}

const SMALL: &str = r#"
kind = "charfn-test"
master_seed = 11
[params]
subordinator = { intensity = { type = "stable", beta = 0.7 } }
modes = 16
paths = 4000
"#;

#[test]
fn list_maps_kinds_to_results() {
    let o = levy_ou(&["list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let row = |kind: &str| text.lines().find(|l| l.split_whitespace().next() == Some(kind)).unwrap().to_string();
    assert_eq!(text.lines().count(), 9);
    assert!(row("ou-sample").contains("Thm 2.5"));
    assert!(row("blowup").contains("Thm 7.1"));
    assert!(row("bounds").contains("Prop 8.8"));
}

#[test]
fn malformed_config_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("kind = \"charfn-test\"\nmaster_seed = 1\n[params]\npaths = \"many\"\n", &dir.path().join("a"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":4"), "{err}");
    assert!(err.contains("paths"), "{err}");

    let o = run("kind = \"burgers\"\nmaster_seed = 1\n[params]\nsteps = 10\ntheta = 0.9\n", &dir.path().join("b"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":5") && err.contains("params.theta"), "{err}");
}

#[test]
fn burgers_with_large_step_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cfl");
    let cfg = "kind = \"burgers\"\nmaster_seed = 7\n[params]\nhorizon = 1.0\nsteps = 20\nmodes = 64\nu0 = [20.0, 20.0, 20.0]\n";
    let o = run(cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("CFL"));
    let report = fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"numeric-error\""), "{report}");
}

#[test]
fn failed_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "kind = \"regularity\"\nmaster_seed = 2\n[params]\nmodes = 256\ngrid_m = 512\npaths = 4\naccept_min = 5.0\n";
    let o = run(cfg, &dir.path().join("r"), &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(SMALL, &a, &["--threads", "1"]).status.code(), Some(0));
    assert_eq!(run(SMALL, &b, &["--threads", "3"]).status.code(), Some(0));
    for f in ["report.json", "charfn.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn seed_flag_overrides_master_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(SMALL, &a, &[]);
    run(SMALL, &b, &["--seed", "12"]);
    let ra = fs::read_to_string(a.join("report.json")).unwrap();
    let rb = fs::read_to_string(b.join("report.json")).unwrap();
    assert!(ra.contains("\"master_seed\": 11"));
    assert!(rb.contains("\"master_seed\": 12"));
    assert_ne!(fs::read(a.join("charfn.csv")).unwrap(), fs::read(b.join("charfn.csv")).unwrap());
}
