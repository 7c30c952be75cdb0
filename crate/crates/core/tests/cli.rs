use std::path::Path;
use std::process::{Command, Output};

use rainbow_core::edgelist::write_edge_list;
use rainbow_core::process::{derive_trial_seed, generate_trace, ColourCount, ProcessConfig};
use rainbow_core::solver::{decide, DecideOptions, DecisionMode};
use rainbow_core::ColouredEdge;

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(path: &Path, n: usize, w: usize, edges: &[ColouredEdge]) {
    let mut buf = Vec::new();
    write_edge_list(&mut buf, n, w, edges).unwrap();
    std::fs::write(path, buf).unwrap();
}

#[test]
fn simulate_then_decide_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let path_s = path.to_str().unwrap();
    for i in 0..100u64 {
        let n = 2 + (i % 5) as usize;
        let seed = derive_trial_seed(77, i);
        let m = 1 + (i as usize * 3) % (n * (n - 1));
        let out = rainbow(&[
            "simulate",
            "--n",
            &n.to_string(),
            "--prefix",
            &m.to_string(),
            "--seed",
            &seed.to_string(),
            "--out",
            path_s,
        ]);
        assert!(out.status.success());
        let decided = rainbow(&["decide", "--input", path_s, "--mode", "exact", "--no-certificate"]);
        assert!(decided.status.success());

        let mut trace = generate_trace(ProcessConfig::new(n, ColourCount::Auto, seed)).unwrap();
        let expected = decide(&trace.graph_at(m), &DecideOptions::new(DecisionMode::Exact)).holds();
        let line = if expected {
            "RAINBOW ARBORESCENCE FOUND\n"
        } else {
            "NO RAINBOW ARBORESCENCE\n"
        };
        assert_eq!(stdout(&decided), line, "case {i}");
    }
}

#[test]
fn decide_tiny_example_prints_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.txt");
    std::fs::write(&path, "3 3\n1 2 1\n2 3 2\n3 2 3\n").unwrap();
    let out = rainbow(&["decide", "--input", path.to_str().unwrap(), "--mode", "oracle"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "RAINBOW ARBORESCENCE FOUND\nroot 1\n2 <- 1 1\n3 <- 2 2\n");

    let out = rainbow(&["decide", "--input", path.to_str().unwrap(), "--root", "2"]);
    assert_eq!(stdout(&out), "NO RAINBOW ARBORESCENCE\n");
}

#[test]
fn assign_reports_hall_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    // vertices 2 and 3 only see colour 1
    write_graph(&path, 3, 2, &[ColouredEdge::new(0, 1, 0), ColouredEdge::new(0, 2, 0)]);
    let out = rainbow(&["assign", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "root 1\nHALL VIOLATION k=2\nS: 2 3\nT: 1\n");

    write_graph(&path, 3, 2, &[ColouredEdge::new(0, 1, 0), ColouredEdge::new(0, 2, 1)]);
    let out = rainbow(&["assign", "--input", path.to_str().unwrap()]);
    assert_eq!(stdout(&out), "root 1\n2 -> 1\n3 -> 2\n");
}

#[test]
fn hitting_times_n2() {
    let out = rainbow(&["hitting-times", "--n", "2", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,W,seed,m_C,m_Z,m_A,m_R,r_decision_mode"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], ["2", "1", "7"]);
    // one edge creates the arborescence; a single colour suffices
    assert_eq!(&row[3..], ["1", "1", "1", "1", "exact"]);
}

#[test]
fn exit_codes() {
    assert_eq!(rainbow(&["simulate"]).status.code(), Some(1));
    assert_eq!(
        rainbow(&["simulate", "--n", "3", "--colours", "lots"]).status.code(),
        Some(1)
    );
    assert_eq!(
        rainbow(&["simulate", "--n", "4", "--prefix", "13"]).status.code(),
        Some(1)
    );
    assert_eq!(rainbow(&["--help"]).status.code(), Some(0));

    let missing = rainbow(&["decide", "--input", "/nonexistent/graph.txt"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error[io]"));

    // the low-degree count bound cannot hold at n = 100
    let check = rainbow(&[
        "experiment",
        "degree",
        "--n",
        "100",
        "--trials",
        "2",
        "--subsets",
        "2",
        "--check",
    ]);
    assert_eq!(check.status.code(), Some(2));
    assert!(stdout(&check).contains("# check p_low_degree_ok=fail"));
}

#[test]
fn poisson_check_passes() {
    let out = rainbow(&[
        "experiment",
        "poisson",
        "--n",
        "2000",
        "--c",
        "0",
        "--trials",
        "1000",
        "--seed",
        "1",
        "--check",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("# schema=1\n# experiment=poisson\n"));
    assert!(text.lines().any(|l| l.starts_with("# summary p_z=")));
}

#[test]
fn out_file_and_random_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maps.csv");
    let out = rainbow(&[
        "mapping",
        "--n",
        "50",
        "--samples",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 21);

    let out = rainbow(&["simulate", "--n", "5", "--seed", "random"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let seed: u64 = err.trim().strip_prefix("seed=").unwrap().parse().unwrap();
    // reported seed reproduces the output
    let again = rainbow(&["simulate", "--n", "5", "--seed", &seed.to_string()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn same_seed_same_bytes() {
    let a = rainbow(&[
        "experiment",
        "theorem",
        "--n",
        "12",
        "--trials",
        "30",
        "--seed",
        "3",
        "--threads",
        "1",
    ]);
    let b = rainbow(&[
        "experiment",
        "theorem",
        "--n",
        "12",
        "--trials",
        "30",
        "--seed",
        "3",
        "--threads",
        "2",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
