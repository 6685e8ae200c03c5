use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn wbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbc")).args(args).output().expect("spawn wbc")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "wbc failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_path_with_lane_family() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    let out = wbc(&["compute", s(&p3), "--strategy", "we-warp", "--lane-width", "4"]);
    assert_eq!(stdout(&out), "0\t0\n1\t2\n2\t0\n");
    let diag = String::from_utf8_lossy(&out.stderr);
    assert!(diag.contains("n=3 m=2 strategy=we-warp4"), "{diag}");
}

#[test]
fn compute_every_strategy_name() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    for name in ["np", "we", "warp4", "warp8", "warp16", "warp32", "we-warp4", "we-warp8", "we-warp16", "we-warp32"] {
        let out = wbc(&["compute", s(&p3), "--strategy", name, "--workers", "2"]);
        assert_eq!(stdout(&out), "0\t0\n1\t2\n2\t0\n", "{name}");
    }
}

#[test]
fn compute_halved_and_edges() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    let out = wbc(&["compute", s(&p3), "--normalize", "half", "--edge-bc"]);
    assert_eq!(stdout(&out), "0\t0\n1\t1\n2\t0\n0\t1\t2\n1\t2\t2\n");
}

#[test]
fn compute_reports_original_ids() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "# sparse ids\n30 10 1\n10 20 1\n");
    assert_eq!(stdout(&wbc(&["compute", s(&g)])), "10\t2\n20\t0\n30\t0\n");
}

#[test]
fn unit_weights_override() {
    // weighted: 0-2 direct (5) loses to 0-1-2 (2), so vertex 1 carries both
    // directions. Unweighted: the direct edge wins and 1 carries nothing.
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "0 1 1\n1 2 1\n0 2 5\n");
    assert_eq!(stdout(&wbc(&["compute", s(&g)])), "0\t0\n1\t2\n2\t0\n");
    assert_eq!(stdout(&wbc(&["compute", s(&g), "--unit-weights"])), "0\t0\n1\t0\n2\t0\n");
}

#[test]
fn compute_writes_output_file() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    let dest = dir.path().join("scores.tsv");
    let out = wbc(&["compute", s(&p3), "--output", s(&dest)]);
    assert!(stdout(&out).is_empty());
    assert_eq!(fs::read_to_string(dest).unwrap(), "0\t0\n1\t2\n2\t0\n");
}

#[test]
fn strict_mode_matches_across_workers() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    stdout(&wbc(&["generate", "--model", "er", "--nodes", "120", "--avg-degree", "5", "--seed", "3", "-o", s(&g)]));
    let one = stdout(&wbc(&["compute", s(&g), "--strict", "--workers", "1", "--edge-bc"]));
    for w in ["2", "3", "8"] {
        assert_eq!(stdout(&wbc(&["compute", s(&g), "--strict", "--workers", w, "--edge-bc"])), one, "workers {w}");
    }
}

#[test]
fn sources_sample_needs_seed_or_prints_one() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    let out = wbc(&["compute", s(&p3), "--sources-sample", "1"]);
    let diag = String::from_utf8_lossy(&out.stderr);
    let seed = diag.lines().find_map(|l| l.strip_prefix("seed: ")).expect("seed printed").to_string();
    let again = wbc(&["compute", s(&p3), "--sources-sample", "1", "--seed", &seed]);
    assert_eq!(stdout(&again), stdout(&out));
}

#[test]
fn compute_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    let bad = write(&dir, "bad.txt", "0 1\n1 2 -3\n");
    let missing = dir.path().join("missing.txt");

    let cases: [(&[&str], &str); 5] = [
        (&["compute", s(&missing)], "missing.txt"),
        (&["compute", s(&bad)], "line 2"),
        (&["compute", s(&p3), "--strategy", "bogus"], "bogus"),
        (&["compute", s(&p3), "--strategy", "warp", "--lane-width", "3"], "3"),
        (&["compute", s(&p3), "--no-such-flag"], "no-such-flag"),
    ];
    for (args, needle) in cases {
        let out = wbc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let diag = String::from_utf8_lossy(&out.stderr);
        assert!(diag.contains(needle), "{args:?}: {diag}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn generate_er_counts_and_header() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("er.txt");
    stdout(&wbc(&["generate", "--model", "er", "--nodes", "16", "--avg-degree", "4", "--seed", "7", "-o", s(&path)]));
    let text = fs::read_to_string(&path).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with('#') && header.contains("model=er") && header.contains("seed=7"), "{header}");
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 32);
    for line in data {
        let f: Vec<u64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert!(f[0] < 16 && f[1] < 16 && f[0] != f[1] && (1..=10).contains(&f[2]), "{line}");
    }
}

#[test]
fn generate_kronecker_ids_in_range() {
    let out = stdout(&wbc(&["generate", "--model", "kronecker", "--scale", "4", "--seed", "1"]));
    let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(!data.is_empty());
    for line in data {
        let f: Vec<u64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert!(f[0] < 16 && f[1] < 16, "{line}");
    }
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--model", "kronecker", "--scale", "7", "--avg-degree", "6", "--seed", "11"];
    assert_eq!(stdout(&wbc(&args)), stdout(&wbc(&args)));

    // without --seed one is drawn, printed, and recorded in the header
    let drawn = wbc(&["generate", "--model", "er", "--nodes", "30", "--avg-degree", "3"]);
    let diag = String::from_utf8_lossy(&drawn.stderr).into_owned();
    let seed = diag.lines().find_map(|l| l.strip_prefix("seed: ")).expect("seed printed").to_string();
    let text = stdout(&drawn);
    assert!(text.lines().next().unwrap().contains(&format!("seed={seed}")));
    let replay = wbc(&["generate", "--model", "er", "--nodes", "30", "--avg-degree", "3", "--seed", &seed]);
    assert_eq!(stdout(&replay), text);
}

#[test]
fn generate_rejects_bad_specs() {
    for args in [
        &["generate", "--model", "er", "--avg-degree", "3"][..],
        &["generate", "--model", "er", "--nodes", "4", "--avg-degree", "9", "--seed", "1"],
        &["generate", "--model", "kronecker", "--nodes", "16", "--seed", "1"],
        &["generate", "--model", "er", "--nodes", "10", "--weight-min", "0", "--seed", "1"],
    ] {
        assert_eq!(wbc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bench_emits_baseline_plus_strategies() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    stdout(&wbc(&["generate", "--model", "er", "--nodes", "60", "--avg-degree", "4", "--seed", "2", "-o", s(&g)]));
    let csv =
        stdout(&wbc(&["bench", s(&g), "--strategies", "np,we,warp32,we-warp32", "--reps", "2", "--workers", "2"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], wbc_core::bench::CSV_HEADER);
    assert_eq!(lines.len(), 1 + 5);
    let names: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(5).unwrap()).collect();
    assert_eq!(names, ["baseline", "np", "we", "warp32", "we-warp32"]);
    assert!(lines[1..].iter().all(|l| l.starts_with("g,")));
}

#[test]
fn bench_rejects_unknown_strategy() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1\n1 2\n");
    assert_eq!(wbc(&["bench", s(&p3), "--strategies", "np,zz"]).status.code(), Some(2));
}

#[test]
fn bench_score_gate_fails_loudly() {
    let dir = TempDir::new().unwrap();
    let crossing = write(&dir, "x.txt", "0 1 1\n0 2 2\n1 2 1\n2 3 1\n");
    let dest = dir.path().join("out.csv");
    let ok = wbc(&["bench", s(&crossing), "--strategies", "we", "--reps", "1", "-o", s(&dest)]);
    assert!(ok.status.success());
    fs::remove_file(&dest).unwrap();

    let out = wbc(&[
        "bench",
        s(&crossing),
        "--strategies",
        "we",
        "--reps",
        "1",
        "--settle-rule",
        "inclusive",
        "-o",
        s(&dest),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("score mismatch"));
    assert!(!dest.exists());
}

#[test]
fn stats_triangle() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "0 1 1\n1 2 1\n2 0 1\n");
    assert_eq!(stdout(&wbc(&["stats", s(&tri)])), "n=3 m=3 max_degree=2 avg_degree=2.0\n");
    // source level plus one level holding both neighbours
    assert_eq!(stdout(&wbc(&["stats", s(&tri), "--depth"])), "n=3 m=3 max_degree=2 avg_degree=2.0 avg_depth=2.0000\n");
}
