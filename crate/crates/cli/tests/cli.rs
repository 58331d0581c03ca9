use std::path::Path;
use std::process::{Command, Output};

fn lrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(args)
        .env_remove("LRC_BUDGET")
        .output()
        .expect("run lrc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.lrc");
    let cover = dir.path().join("c.cover");
    let out = lrc(&[
        "construct",
        "--t",
        "2",
        "--k",
        "12",
        "--r",
        "3",
        "--out",
        path(&code),
        "--cert",
        path(&cover),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n=20 k=12\n");
    assert!(std::fs::read_to_string(&cover).unwrap().starts_with("k=12 r=3 eta=8\n"));

    let out = lrc(&["verify", "--code", path(&code), "--r", "3", "--t", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("verdict=true\n"));

    let out = lrc(&["verify", "--code", path(&code), "--r", "3", "--t", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL E={"));
}

#[test]
fn construct_to_stdout_is_a_readable_code() {
    let out = lrc(&["construct", "--t", "3", "--k", "12", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n=22 k=12 r=3 t=3\n"));
    assert_eq!(
        lrc_core::formats::write_lrc(&lrc_core::formats::read_lrc(&text).unwrap()),
        text
    );
}

#[test]
fn bounds_table() {
    let out = lrc(&["bounds", "--t", "3", "--r", "3", "--k-range", "4:120"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 117);
    for row in rows {
        let diff: i64 = row.rsplit('\t').next().unwrap().parse().unwrap();
        assert!(diff >= 0, "{row}");
    }

    let out = lrc(&["bounds", "--t", "2", "--r", "3", "--k-range", "2:4"]);
    assert_eq!(
        stdout(&out),
        "k\tlength_bound\tachievable\n2\tNA\tNA\n3\tNA\tNA\n4\t7\tunknown\n"
    );

    let out = lrc(&["bounds", "--t", "2", "--r", "3", "--k-range", "5:4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(
        lrc(&["construct", "--t", "2", "--k", "6", "--r", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lrc(&["construct", "--t", "4", "--k", "12", "--r", "3"]).status.code(),
        Some(2)
    );
    let out = lrc(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.lrc");
    lrc(&["construct", "--t", "2", "--k", "9", "--r", "3", "--out", path(&code)]);
    let out = lrc(&[
        "verify",
        "--code",
        path(&code),
        "--r",
        "3",
        "--t",
        "2",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(["verify", "--code", path(&code), "--r", "3", "--t", "2"])
        .env("LRC_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(&code, "n=3 k=1 r=0 t=0\n111").unwrap();
    assert_eq!(lrc(&["mindist", "--code", path(&code)]).status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.lrc");
    lrc(&["construct", "--t", "2", "--k", "12", "--r", "3", "--out", path(&code)]);
    let a = lrc(&["simulate", "--code", path(&code), "--fail", "2,14", "--seed", "7"]);
    let b = lrc(&["simulate", "--code", path(&code), "--fail", "2,14", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.ends_with("recovered=true\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("REPAIR")).count(), 2);

    let info: Vec<String> = (1..=12).map(|i| i.to_string()).collect();
    let out = lrc(&["simulate", "--code", path(&code), "--fail", &info.join(",")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("STUCK E={"));

    assert_eq!(
        lrc(&["simulate", "--code", path(&code), "--fail", "21"]).status.code(),
        Some(2)
    );
}

#[test]
fn mindist_of_constructed_code() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.lrc");
    lrc(&["construct", "--t", "3", "--k", "9", "--r", "3", "--out", path(&code)]);
    let out = lrc(&["mindist", "--code", path(&code)]);
    let d: usize = stdout(&out).trim().strip_prefix("d=").unwrap().parse().unwrap();
    assert!(d >= 4);
}

#[test]
fn graph_analysis_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.lrc");
    let graph = dir.path().join("c.rg");
    lrc(&["construct", "--t", "3", "--k", "9", "--r", "3", "--out", path(&code)]);
    let out = lrc(&[
        "graph",
        "analyze",
        "--code",
        path(&code),
        "--r",
        "3",
        "--out",
        path(&graph),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("delta_star=9\n"));
    assert!(text.contains("PASS edges-lower"));

    let again = lrc(&["graph", "analyze", "--graph", path(&graph), "--r", "3", "--t", "3"]);
    assert_eq!(again.status.code(), Some(0));
    let g = lrc_core::formats::read_rg(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(
        lrc_core::formats::write_rg(&g),
        std::fs::read_to_string(&graph).unwrap()
    );

    // An edgeless graph fails the structural checks.
    std::fs::write(&graph, "n=3\n").unwrap();
    let out = lrc(&["graph", "analyze", "--graph", path(&graph), "--r", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mesh_build_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("m.mesh");
    let out = lrc(&["mesh", "build", "--k", "16", "--r", "3", "--out", path(&mesh)]);
    assert_eq!(out.status.code(), Some(0));
    let out = lrc(&["mesh", "check", "--in", path(&mesh)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let text = std::fs::read_to_string(&mesh).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first_blue = lines.iter().position(|l| l.starts_with("BL 1:")).unwrap();
    lines[first_blue + 1] = lines[first_blue].replacen("BL 1:", "BL 2:", 1);
    std::fs::write(&mesh, lines.join("\n") + "\n").unwrap();
    let out = lrc(&["mesh", "check", "--in", path(&mesh)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL iv"));

    assert_eq!(lrc(&["mesh", "build", "--k", "4", "--r", "3"]).status.code(), Some(2));
}
