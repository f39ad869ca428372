use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use amap_core::io::{parse_network, parse_problem, read_report, serialize_network};
use amap_core::synth::{random_network, RandomNetworkSpec, SPRINKLER_BNET};
use rand::SeedableRng;

fn amap(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_amap"));
    cmd.args(args).env_remove("AMAP_ORACLE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    dir: tempfile::TempDir,
    net: PathBuf,
    prob: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("sprinkler.bnet");
    let prob = dir.path().join("sprinkler.prob");
    fs::write(&net, SPRINKLER_BNET).unwrap();
    fs::write(&prob, "map Sprinkler Rain\nevidence WetGrass=t\n").unwrap();
    Fixture { dir, net, prob }
}

fn ten_node_net(dir: &Path) -> PathBuf {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
    let spec = RandomNetworkSpec {
        min_vars: 10,
        max_vars: 10,
        ..RandomNetworkSpec::default()
    };
    let path = dir.join("ten.bnet");
    fs::write(&path, serialize_network(&random_network(&mut rng, &spec))).unwrap();
    path
}

#[test]
fn oracle_solve_prints_assignment_and_probability() {
    let f = fixture();
    let out = amap(
        &[
            "solve",
            "--net",
            s(&f.net),
            "--problem",
            s(&f.prob),
            "--algo",
            "oracle",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Sprinkler = t\nRain = f\n"), "{text}");
    let p: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("p(x|E) = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((p - 0.642312).abs() < 1e-6);
    assert!(text.contains("log10 p(x|E) = -0.19225"));
}

#[test]
fn anneal_and_hillclimb_agree_on_sprinkler() {
    let f = fixture();
    for algo in ["anneal", "hillclimb"] {
        let out = amap(
            &[
                "solve",
                "--net",
                s(&f.net),
                "--problem",
                s(&f.prob),
                "--algo",
                algo,
                "--seed",
                "7",
            ],
            &[],
        );
        assert!(out.status.success());
        assert!(String::from_utf8(out.stdout)
            .unwrap()
            .contains("Sprinkler = t\nRain = f\n"));
    }
}

#[test]
fn missing_file_names_the_path() {
    let f = fixture();
    let missing = f.dir.path().join("nope.bnet");
    let out = amap(&["solve", "--net", s(&missing), "--problem", s(&f.prob)], &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("nope.bnet"));
}

#[test]
fn parse_error_reports_line_and_column() {
    let f = fixture();
    let bad = f.dir.path().join("bad.prob");
    fs::write(&bad, "map Sprinkler\nevidence WetGrass=maybe\n").unwrap();
    let out = amap(&["solve", "--net", s(&f.net), "--problem", s(&bad)], &[]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.prob") && err.contains("2:"), "{err}");
}

#[test]
fn inconsistent_evidence_fails() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("chain.bnet");
    fs::write(&net, serialize_network(&amap_core::synth::deterministic_chain(3))).unwrap();
    let text = fs::read_to_string(&net).unwrap();
    let parsed = parse_network(&text).unwrap();
    let names: Vec<&str> = parsed.variables().iter().map(|v| v.name.as_str()).collect();
    let prob = dir.path().join("p.prob");
    let v = &parsed.variables()[2];
    fs::write(
        &prob,
        format!("map {}\nevidence {}={}\n", names[1], v.name, v.states[1]),
    )
    .unwrap();
    let out = amap(&["solve", "--net", s(&net), "--problem", s(&prob)], &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("inconsistent evidence"));
}

#[test]
fn oracle_cap_from_environment() {
    let f = fixture();
    let out = amap(
        &[
            "solve",
            "--net",
            s(&f.net),
            "--problem",
            s(&f.prob),
            "--algo",
            "oracle",
        ],
        &[("AMAP_ORACLE_CAP", "2")],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("oracle cap"));
    let out = amap(
        &[
            "solve",
            "--net",
            s(&f.net),
            "--problem",
            s(&f.prob),
            "--algo",
            "oracle",
        ],
        &[("AMAP_ORACLE_CAP", "lots")],
    );
    assert!(!out.status.success());
}

#[test]
fn invalid_schedule_is_rejected() {
    let f = fixture();
    let out = amap(
        &[
            "solve",
            "--net",
            s(&f.net),
            "--problem",
            s(&f.prob),
            "--alpha",
            "1.5",
        ],
        &[],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("alpha"));
}

#[test]
fn trace_is_written() {
    let f = fixture();
    let trace = f.dir.path().join("trace.csv");
    let out = amap(
        &[
            "solve",
            "--net",
            s(&f.net),
            "--problem",
            s(&f.prob),
            "--restarts",
            "2",
            "--trace",
            s(&trace),
        ],
        &[],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(trace).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("restart,sweep,temperature"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40);
    assert!(rows[0].starts_with("1,1,0.99,"));
    assert!(rows[20].starts_with("2,1,0.99,"));
}

#[test]
fn gen_writes_a_parsable_problem() {
    let f = fixture();
    let net_path = ten_node_net(f.dir.path());
    let out_path = f.dir.path().join("g.prob");
    let out = amap(
        &[
            "gen",
            "--net",
            s(&net_path),
            "--map-count",
            "2",
            "--evid-count",
            "2",
            "--seed",
            "3",
            "-o",
            s(&out_path),
        ],
        &[],
    );
    assert!(out.status.success());
    let net = parse_network(&fs::read_to_string(&net_path).unwrap()).unwrap();
    let problem = parse_problem(&fs::read_to_string(&out_path).unwrap(), &net).unwrap();
    assert!(problem.map_vars().len() <= 2);
    for &v in problem.map_vars() {
        assert!(net.parents(v).is_empty());
    }
}

#[test]
fn bench_rows_and_summary() {
    let f = fixture();
    let net_path = ten_node_net(f.dir.path());
    let report = f.dir.path().join("r.csv");
    let out = amap(
        &[
            "bench",
            "--net",
            s(&net_path),
            "--cases",
            "20",
            "--seed",
            "1",
            "--algos",
            "anneal,oracle",
            "-o",
            s(&report),
        ],
        &[],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 20 * 2 + 1);
    let rows = read_report(&text).unwrap();
    assert!(rows
        .iter()
        .all(|r| r.matches_oracle.is_some() && r.wall_ms.is_some()));
    let cases: Vec<usize> = rows.iter().map(|r| r.case_id).collect();
    assert!(cases.windows(2).all(|w| w[0] <= w[1]));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.starts_with("ten: cases=20 anneal_optimal="), "{summary}");
    let optimal: usize = summary
        .split("anneal_optimal=")
        .nth(1)
        .unwrap()
        .split('/')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(optimal >= 19, "{summary}");
}

#[test]
fn bench_over_oracle_cap_leaves_blanks() {
    let f = fixture();
    let report = f.dir.path().join("r.csv");
    let out = amap(
        &[
            "bench",
            "--net",
            s(&f.net),
            "--cases",
            "3",
            "--algos",
            "anneal,oracle",
            "-o",
            s(&report),
        ],
        &[("AMAP_ORACLE_CAP", "1")],
    );
    assert!(out.status.success());
    let rows = read_report(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r.matches_oracle, None);
        if r.algorithm == "oracle" {
            assert_eq!(r.prob, None);
        }
    }
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(
        summary.contains("anneal_optimal=0/0") && !summary.contains("ratio"),
        "{summary}"
    );
}
