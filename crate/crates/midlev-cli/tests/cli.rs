use std::process::Command;

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_midlev"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

#[test]
fn generate_n1_matches_published_ordering() {
    let (stdout, _, code) = run(&["generate", "-n", "1", "--shift=-1"]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines, vec!["1010", "0011", "1001", "0101", "1100", "0110"]);

    let (stdout, _, _) = run(&["generate", "-n", "1", "--shift=-1", "--format", "flips"]);
    let flips: Vec<&str> = stdout.lines().collect();
    assert_eq!(&flips[..2], &["3", "2"]);
}

#[test]
fn generate_matches_library_block() {
    let (stdout, _, code) =
        run(&["generate", "-n", "4", "--shift", "2", "--limit", "28", "--format", "flips"]);
    assert_eq!(code, Some(0));
    let got: Vec<u32> = stdout.lines().map(|l| l.parse().unwrap()).collect();
    let state = midlev::generator::init(4, 2, None).unwrap();
    let want: Vec<u32> = state.steps().take(28).map(|(_, p)| p).collect();
    assert_eq!(got, want);
}

#[test]
fn generate_rejects_bad_arguments() {
    let (_, stderr, code) = run(&["generate", "-n", "4", "--shift", "3"]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("not coprime"));
    let (_, _, code) = run(&["generate", "-n", "4", "--shift", "1", "--start", "0011"]);
    assert_eq!(code, Some(2));
}

#[test]
fn generate_output_is_reproducible() {
    let a = run(&["generate", "-n", "5", "--shift", "1", "--limit", "200"]);
    let b = run(&["generate", "-n", "5", "--shift", "1", "--limit", "200"]);
    assert_eq!(a.0, b.0);
}

#[test]
fn verify_passes_and_emits_json() {
    let (stdout, _, code) = run(&["verify", "-n", "5", "--suite", "all"]);
    assert_eq!(code, Some(0), "verify failed:\n{}", stdout);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));

    let (stdout, _, code) = run(&["verify", "-n", "4", "--suite", "lemmas", "--json"]);
    assert_eq!(code, Some(0));
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["claim"].is_string());
        assert_eq!(v["n"], 4);
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn analyze_spanning_tree_counts() {
    let h = midlev::spanning::build_h(5).unwrap();
    let (stdout, _, code) = run(&["analyze", "spanning-tree", "-n", "5", "--dot"]);
    assert_eq!(code, Some(0));
    let nodes = stdout.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count();
    let arcs = stdout.lines().filter(|l| l.contains("->")).count();
    assert_eq!(nodes, h.nodes.len());
    assert_eq!(arcs, h.nodes.len() - 1);

    let (csv, _, _) = run(&["analyze", "spanning-tree", "-n", "5", "--csv"]);
    assert_eq!(csv.lines().count(), h.nodes.len());
    assert!(csv.lines().next().unwrap().starts_with("from,to"));
}

#[test]
fn analyze_cycles_lists_plane_trees() {
    let (stdout, _, code) = run(&["analyze", "cycles", "-n", "4"]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "plane_tree,lambda,cycle_length");
    assert_eq!(lines.len() - 1, 3);
    // Lambda and cycle length agree: cycle = 2 lambda.
    for l in &lines[1..] {
        let parts: Vec<&str> = l.split(',').collect();
        let lam: usize = parts[1].parse().unwrap();
        let len: usize = parts[2].parse().unwrap();
        assert_eq!(len, 2 * lam);
    }
}

#[test]
fn bench_smoke() {
    let (stdout, _, code) =
        run(&["bench", "--n-min", "10", "--n-max", "20", "--limit", "500", "--reps", "1"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("linear_fit_slope_ns_per_n="));
    assert!(stdout.contains("cost_ratio_max_over_min="));
}
