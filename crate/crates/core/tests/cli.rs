use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quasienergy::{
    parse_system, parse_table, serialize_table, EmbeddingTable, EnergyModel, EnergyTable, HeadSpec,
};
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasienergy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }
}

#[test]
fn gen_fixture_matches_shipped_file() {
    let s = Scratch::new();
    for name in ["tri3", "ow2"] {
        let o = qe(&["gen", "fixture", "--name", name, "--out", &s.arg("f.json")]);
        assert_eq!(code(&o), 0);
        assert_eq!(
            s.read("f.json"),
            std::fs::read_to_string(fixture(&format!("{name}.json"))).unwrap()
        );
    }
}

#[test]
fn gen_ring_and_gridworld() {
    let s = Scratch::new();
    assert_eq!(
        code(&qe(&[
            "gen",
            "ring",
            "--n",
            "10",
            "--out",
            &s.arg("r.json")
        ])),
        0
    );
    let ring = parse_system(&s.read("r.json")).unwrap();
    assert_eq!((ring.n_states(), ring.edges().len()), (10, 10));

    let o = qe(&[
        "gen",
        "gridworld",
        "--w",
        "6",
        "--h",
        "6",
        "--wind",
        "0.5,0",
        "--door",
        "3:4",
        "--out",
        &s.arg("g.json"),
    ]);
    assert_eq!(code(&o), 0);
    let g = parse_system(&s.read("g.json")).unwrap();
    // 2 * (5 * 6) * 2 directed moves, one removed by the door
    assert_eq!((g.n_states(), g.edges().len()), (36, 119));
}

#[test]
fn gen_digraph_digest_is_pinned() {
    let s = Scratch::new();
    let o = qe(&[
        "gen",
        "digraph",
        "--n",
        "50",
        "--p",
        "0.05",
        "--seed",
        "7",
        "--out",
        &s.arg("d.json"),
    ]);
    assert_eq!(code(&o), 0);
    let text = s.read("d.json");
    assert_eq!(
        hex::encode(Sha256::digest(text.as_bytes())),
        "711a4853bb4b14fb83f781a7becc75ca125ddfafb3a99fbbd355f47d47c1f11a"
    );
    assert_eq!(parse_system(&text).unwrap().edges().len(), 101);
}

#[test]
fn bad_arguments_exit_two_with_usage() {
    for args in [
        vec!["gen", "gridworld", "--w", "6"],
        vec!["gen", "gridworld", "--w", "2", "--h", "2", "--door", "0:3"],
        vec!["gen", "digraph", "--n", "5", "--p", "1.5", "--seed", "0"],
        vec!["train", "x.json"],
        vec!["solve"],
    ] {
        let o = qe(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(
            err.contains("Usage") || err.contains("--help"),
            "{args:?}: {err}"
        );
    }
}

#[test]
fn missing_or_malformed_input_exits_one() {
    let s = Scratch::new();
    assert_eq!(code(&qe(&["solve", &s.arg("absent.json")])), 1);
    std::fs::write(
        s.path("bad.json"),
        "{\"n_states\": 2, \"edges\": [[0, 1, \"inf\"]]}",
    )
    .unwrap();
    let o = qe(&["solve", &s.arg("bad.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn solve_tri3_and_empty() {
    let s = Scratch::new();
    assert_eq!(
        code(&qe(&[
            "solve",
            &fixture("tri3.json"),
            "--out",
            &s.arg("t.json")
        ])),
        0
    );
    let t = parse_table(&s.read("t.json")).unwrap();
    assert_eq!(
        t,
        EnergyTable::from_f64_rows(&[&[0.0, 1.0, 3.0], &[7.0, 0.0, 2.0], &[5.0, 6.0, 0.0]])
            .unwrap()
    );

    std::fs::write(s.path("empty.json"), "{\"n_states\": 3, \"edges\": []}").unwrap();
    let o = qe(&["solve", &s.arg("empty.json")]);
    assert_eq!(code(&o), 0);
    let t = parse_table(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(t.off_diagonal().all(|(_, _, v)| v.is_infinite()));
}

#[test]
fn solve_with_goal_writes_cost_to_go() {
    let s = Scratch::new();
    let o = qe(&[
        "solve",
        &fixture("ow2.json"),
        "--out",
        &s.arg("t.json"),
        "--goal",
        "0",
        "--value-out",
        &s.arg("v.json"),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&s.read("v.json")).unwrap();
    assert_eq!(v["values"], serde_json::json!([0.0, "inf"]));
    assert_eq!(
        code(&qe(&["solve", &fixture("ow2.json"), "--goal", "5"])),
        2
    );
}

#[test]
fn audit_exit_codes_and_reports() {
    let s = Scratch::new();
    let o = qe(&[
        "audit",
        &fixture("tri3_table.json"),
        "--out",
        &s.arg("a.json"),
    ]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&s.read("a.json")).unwrap();
    assert_eq!(r["passed"], true);

    let bad = EnergyTable::from_f64_rows(&[&[0.5, 1.0], &[1.0, 0.0]]).unwrap();
    std::fs::write(s.path("bad.json"), serialize_table(&bad)).unwrap();
    let o = qe(&["audit", &s.arg("bad.json"), "--out", &s.arg("b.json")]);
    assert_eq!(code(&o), 4);
    let r: serde_json::Value = serde_json::from_str(&s.read("b.json")).unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(r["reports"][0]["axiom"], "reflexivity");
    assert_eq!(
        r["reports"][0]["witnesses"][0]["indices"],
        serde_json::json!([0, 0])
    );

    let o = qe(&[
        "audit",
        &fixture("ow2_table.json"),
        "--cap",
        "10",
        "--out",
        &s.arg("c.json"),
    ]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&s.read("c.json")).unwrap();
    assert_eq!(r["obstruction_bound"], 4.5);
    assert_eq!(
        code(&qe(&["audit", &fixture("ow2_table.json"), "--cap", "0.5"])),
        2
    );
}

#[test]
fn train_supervised_checkpoint_is_pinned() {
    let s = Scratch::new();
    let args = [
        "train",
        &fixture("tri3.json"),
        "--mode",
        "supervised",
        "--head",
        "sumrelu",
        "--seed",
        "1",
    ];
    let out = s.arg("c.json");
    let o = qe(&[&args[..], &["--out", &out]].concat());
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("mae_finite="), "{stdout}");
    assert_eq!(
        hex::encode(Sha256::digest(s.read("c.json").as_bytes())),
        "9d98a6c010384ca671b94f74cd930a130670aebd56561969ec8b86b56fec18ef"
    );
}

#[test]
fn train_zero_steps_returns_initialization() {
    let s = Scratch::new();
    let o = qe(&[
        "train",
        &fixture("tri3.json"),
        "--steps",
        "0",
        "--dim",
        "3",
        "--seed",
        "4",
        "--out",
        &s.arg("c.json"),
    ]);
    assert_eq!(code(&o), 0);
    let m: EnergyModel = serde_json::from_str(&s.read("c.json")).unwrap();
    assert_eq!(m, EnergyModel::init(3, 3, HeadSpec::default(), 4).unwrap());
}

#[test]
fn train_symmetric_head_reports_obstruction() {
    let s = Scratch::new();
    let o = qe(&[
        "train",
        &fixture("ow2.json"),
        "--head",
        "l2",
        "--cap",
        "10",
        "--out",
        &s.arg("c.json"),
    ]);
    assert_eq!(code(&o), 0);
    let line = String::from_utf8(o.stdout).unwrap();
    let err: f64 = line
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("one_way_max_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err >= 4.5 - 1e-9, "{line}");
}

#[test]
fn train_divergence_exits_five() {
    let s = Scratch::new();
    let o = qe(&[
        "train",
        &fixture("tri3.json"),
        "--head",
        "l2",
        "--lr",
        "1e200",
        "--out",
        &s.arg("c.json"),
    ]);
    assert_eq!(code(&o), 5);
    assert!(!s.path("c.json").exists());
}

#[test]
fn eval_outcomes() {
    let s = Scratch::new();
    let tri3 = fixture("tri3.json");
    qe(&["train", &tri3, "--seed", "2", "--out", &s.arg("m.json")]);
    let o = qe(&[
        "eval",
        &tri3,
        "--checkpoint",
        &s.arg("m.json"),
        "--assert-triangle",
    ]);
    assert_eq!(code(&o), 0);

    let o = qe(&[
        "eval",
        &tri3,
        "--table",
        &fixture("tri3_table.json"),
        "--out",
        &s.arg("p.json"),
    ]);
    assert_eq!(code(&o), 0);
    let p: serde_json::Value = serde_json::from_str(&s.read("p.json")).unwrap();
    assert_eq!(p["mae_finite"], 0.0);
    assert_eq!(p["spearman_finite"], 1.0);

    let zero = EnergyModel::new(EmbeddingTable::zeros(3, 2).unwrap(), HeadSpec::default()).unwrap();
    std::fs::write(s.path("z.json"), serde_json::to_string(&zero).unwrap()).unwrap();
    let o = qe(&[
        "eval",
        &tri3,
        "--checkpoint",
        &s.arg("z.json"),
        "--out",
        &s.arg("q.json"),
    ]);
    assert_eq!(code(&o), 0);
    let q: serde_json::Value = serde_json::from_str(&s.read("q.json")).unwrap();
    assert_eq!(q["mae_finite"], 4.0);
}

#[test]
fn eval_assert_triangle_fails_on_a_violating_table() {
    let s = Scratch::new();
    let t = EnergyTable::from_f64_rows(&[&[0.0, 5.0, 1.0], &[9.0, 0.0, 9.0], &[9.0, 1.0, 0.0]])
        .unwrap();
    std::fs::write(s.path("t.json"), serialize_table(&t)).unwrap();
    let o = qe(&[
        "eval",
        &fixture("tri3.json"),
        "--table",
        &s.arg("t.json"),
        "--assert-triangle",
    ]);
    assert_eq!(code(&o), 4);
    let o = qe(&["eval", &fixture("tri3.json"), "--table", &s.arg("t.json")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["gen", "solve", "audit", "train", "eval"] {
        let o = qe(&[sub, "--help"]);
        assert_eq!(code(&o), 0, "{sub}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("Usage"));
    }
}
