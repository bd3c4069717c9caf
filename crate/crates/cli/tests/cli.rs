use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn iqoap(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iqoap")).args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    assert_eq!(iqoap(&["spectrum", "--k", ""], &out).status.code(), Some(2));
    assert_eq!(iqoap(&["spectrum", "--k", "2,x"], &out).status.code(), Some(2));
    assert_eq!(iqoap(&["spectrum", "--config", "/nonexistent/c.json"], &out).status.code(), Some(4));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"experiment\": \"spectrum\", \"unknown\": 1}").unwrap();
    assert_eq!(iqoap(&["spectrum", "--config", bad.to_str().unwrap()], &out).status.code(), Some(2));
    let wrong = dir.path().join("wrong.json");
    fs::write(&wrong, r#"{"experiment":"scaling"}"#).unwrap();
    assert_eq!(iqoap(&["spectrum", "--config", wrong.to_str().unwrap()], &out).status.code(), Some(2));

    // 4 dimensions at k = 7 is 28 qubits
    let big = iqoap(&["spectrum", "--k", "7"], &out);
    assert_eq!(big.status.code(), Some(3), "{}", String::from_utf8_lossy(&big.stderr));
    assert!(!out.exists(), "failed commands must not write output");

    // a file where the output directory should go
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    assert_eq!(iqoap(&["spectrum"], &blocker).status.code(), Some(4));
}

#[test]
fn spectrum_rows_begin_with_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqoap(&["spectrum", "--k", "2"], dir.path());
    assert!(o.status.success());
    let a = fs::read_to_string(dir.path().join("spectrum_a.csv")).unwrap();
    assert!(a.starts_with("basis_label,eigenvalue\na,0\na,1\n"));
    let c = fs::read_to_string(dir.path().join("spectrum_c.csv")).unwrap();
    assert_eq!(c.lines().nth(2), Some("c,68"));
}

#[test]
fn flags_override_config_and_seed_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scaling.json");
    fs::write(&config, r#"{"experiment":"scaling","k":[1,2,3,4],"trials":15,"seed":4}"#).unwrap();
    let config = config.to_str().unwrap();
    let run = |extra: &[&str], name: &str| {
        let out = dir.path().join(name);
        let mut args = vec!["scaling", "--config", config];
        args.extend_from_slice(extra);
        assert!(iqoap(&args, &out).status.success());
        fs::read_to_string(out.join("scaling.csv")).unwrap()
    };
    let base = run(&[], "base");
    assert_eq!(base.lines().count(), 5);
    assert_eq!(run(&["--seed", "4"], "same"), base);
    assert_ne!(run(&["--seed", "5"], "other"), base);
    let k = run(&["--k", "3"], "k");
    assert_eq!(k.lines().count(), 2);
    assert!(k.lines().nth(1).unwrap().starts_with("3,"));
}

#[test]
fn converge_from_a_basis_file() {
    let dir = tempfile::tempdir().unwrap();
    let basis = dir.path().join("mine.json");
    fs::write(&basis, r#"{"d":2,"rows":[[1,0],[7,1]]}"#).unwrap();
    let config = dir.path().join("c.json");
    fs::write(
        &config,
        format!(
            r#"{{"experiment":"converge","bases":[{{"file":{:?}}}],"runs":2,"iterations":3,"minima":[1,1]}}"#,
            basis.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = iqoap(&["converge", "--config", config.to_str().unwrap()], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("success:"), "{stdout}");
    let stats = fs::read_to_string(out.join("converge_stats.csv")).unwrap();
    // iterations 0..=3, two ranks each
    assert_eq!(stats.lines().count(), 1 + 4 * 2);
    for i in 0..2 {
        let log = fs::read_to_string(out.join(format!("runs/run_{i}.jsonl"))).unwrap();
        assert_eq!(log.lines().count(), 3);
    }
}
