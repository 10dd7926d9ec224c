use jetinv_cli::{run, RunOutput, EXIT_CLAIM, EXIT_OK, EXIT_USAGE};

fn jetinv(args: &[&str]) -> RunOutput {
    run(std::iter::once("jetinv").chain(args.iter().copied()))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Value of `key` on the `#?` lines.
fn value<'a>(out: &'a RunOutput, key: &str) -> Option<&'a str> {
    out.stdout
        .lines()
        .filter_map(|l| l.strip_prefix("#? "))
        .flat_map(|l| l.split(' '))
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn rank_reports() {
    let out = jetinv(&["rank", "eikonal:3"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("#? rank=9 jet_dim=9 invariants=0\n"), "{}", out.stdout);
    let out = jetinv(&["rank", "eikonal:3", "--order", "2"]);
    assert_eq!(value(&out, "invariants"), Some("3"));
}

#[test]
fn defaults_are_echoed() {
    let out = jetinv(&["rank", "eikonal:2"]);
    let first = out.stdout.lines().next().unwrap();
    assert_eq!(first, "#? command=rank source=eikonal:2 order=1 truncation=3 points=3 seed=0 bound=1000000");
}

#[test]
fn seed_changes_only_the_echo() {
    let a = jetinv(&["rank", "eikonal:2", "--order", "2"]);
    let b = jetinv(&["rank", "eikonal:2", "--order", "2", "--seed", "99"]);
    assert_eq!(value(&a, "rank"), value(&b, "rank"));
    assert_eq!(value(&b, "seed"), Some("99"));
    assert_eq!(a.stdout, jetinv(&["rank", "eikonal:2", "--order", "2"]).stdout);
}

#[test]
fn file_and_builtin_agree() {
    for order in ["1", "2"] {
        let f = jetinv(&["rank", &fixture("eikonal_n2.alg"), "--order", order]);
        let b = jetinv(&["rank", "eikonal:2", "--order", order]);
        assert_eq!(value(&f, "operators"), Some("28"));
        assert_eq!(value(&f, "rank"), value(&b, "rank"));
    }
}

#[test]
fn file_truncation() {
    let out = jetinv(&["rank", &fixture("eikonal_n2.alg"), "--truncation", "0"]);
    assert_eq!(value(&out, "operators"), Some("7"));
    assert_eq!(value(&out, "rank"), Some("6"));
}

#[test]
fn genset_examples() {
    let out = jetinv(&["genset", "eikonal:1"]);
    assert_eq!(value(&out, "size"), Some("5"));
    assert_eq!(value(&out, "generating_set").unwrap().split(',').count(), 5);

    let out = jetinv(&["genset", "classical:3", "--verify-against", "eikonal:3"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out, "equal_rank"), Some("true"));

    let out = jetinv(&["genset", "classical:2", "--verify-against", &fixture("eikonal_n2.alg")]);
    assert_eq!(value(&out, "equal_rank"), Some("true"));
}

#[test]
fn genset_singleton() {
    let path = std::env::temp_dir().join("jetinv_singleton.alg");
    std::fs::write(&path, "space: x ; u\noperator Only { x: u }\n").unwrap();
    let out = jetinv(&["genset", path.to_str().unwrap()]);
    assert_eq!(value(&out, "generating_set"), Some("Only"));
}

#[test]
fn genset_unequal_rank_is_a_claim_failure() {
    let out = jetinv(&["genset", "eikonal:2", "--truncation", "0", "--verify-against", "eikonal:2"]);
    assert_eq!(out.code, EXIT_CLAIM);
    assert_eq!(value(&out, "equal_rank"), Some("false"));
}

#[test]
fn genset_space_mismatch() {
    let out = jetinv(&["genset", "classical:2", "--verify-against", "eikonal:3"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn check_verdicts() {
    let out = jetinv(&["check", "eikonal:3", "--expr", "u_0^2-u_1^2-u_2^2-u_3^2"]);
    assert_eq!((out.code, value(&out, "verdict")), (EXIT_OK, Some("relative")));
    assert!(out.stdout.contains("#? multiplier=P^1_u value=2\n"));

    let out = jetinv(&["check", "eikonal:2", "--expr", "1"]);
    assert_eq!(value(&out, "verdict"), Some("absolute"));

    let out = jetinv(&["check", "eikonal:2", "--expr", "u_0"]);
    assert_eq!(out.code, EXIT_CLAIM);
    assert_eq!(value(&out, "verdict"), Some("not_invariant"));
    assert!(value(&out, "witness").is_some());
}

#[test]
fn check_absolute_mode() {
    let out = jetinv(&["check", "eikonal:2", "--expr", "u_0^2-u_1^2-u_2^2", "--mode", "absolute"]);
    assert_eq!(out.code, EXIT_CLAIM);
    assert_eq!(value(&out, "verdict"), Some("not_invariant"));
}

#[test]
fn check_order_follows_expression() {
    let out = jetinv(&["check", "classical:1", "--expr", "u_00-u_11"]);
    assert_eq!(value(&out, "order"), Some("2"));
}

#[test]
fn scan_examples() {
    let out = jetinv(&["scan", "eikonal:3", "--order", "1", "--Kmax", "5"]);
    assert_eq!(value(&out, "final_rank"), Some("9"));
    assert!(value(&out, "stable_from").unwrap().parse::<u32>().unwrap() <= 5);

    let out = jetinv(&["scan", "eikonal:2", "--Kmax", "0"]);
    assert_eq!(out.stdout.lines().filter(|l| l.starts_with("#? K=")).count(), 1);

    let out = jetinv(&["scan", "eikonal:2", "--order", "2", "--Kmax", "3"]);
    let jet_dim: usize = value(&out, "jet_dim").unwrap().parse().unwrap();
    assert_eq!(value(&out, "final_rank"), Some((jet_dim - 2).to_string().as_str()));
}

#[test]
fn demo_runs() {
    for (n, k) in [("2", "3"), ("1", "0")] {
        let out = jetinv(&["eikonal-demo", "--n", n, "--K", k]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert_eq!(value(&out, "all_pass"), Some("true"));
    }
    let out = jetinv(&["demo", "--n", "2"]);
    assert_eq!(value(&out, "invariants_order2"), Some("2"));
    assert!(!out.stdout.contains("pass=false"));
}

#[test]
fn malformed_input_exits_2() {
    for args in [
        vec!["rank"],
        vec!["rank", "eikonal:x"],
        vec!["rank", "/nonexistent/file.alg"],
        vec!["check", "eikonal:2", "--expr", "u_0 +"],
        vec!["check", "eikonal:2", "--expr", "0"],
        vec!["demo", "--order", "3"],
        vec!["scan", "eikonal:2", "--Kmax", "-1"],
        vec!["frobnicate"],
    ] {
        let out = jetinv(&args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn file_errors_name_the_position() {
    let path = std::env::temp_dir().join("jetinv_bad.alg");
    std::fs::write(&path, "space: x ; u\noperator A { x: q }\n").unwrap();
    let out = jetinv(&["rank", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("line 2, column 17: unknown variable `q`"), "{}", out.stderr);
}
