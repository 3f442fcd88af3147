use std::fs;

use fbcodes::cli::{run, SolutionDoc};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fbcodes").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn solve_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let reqs = dir.path().join("reqs.txt");
    let sol = dir.path().join("sol.json");
    fs::write(&reqs, "# two requests\n110\n011\n").unwrap();
    let (code, _, err) = call(&[
        "solve",
        "--s",
        "3",
        "--requests",
        reqs.to_str().unwrap(),
        "--out",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let doc: SolutionDoc = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc.version, 1);
    assert_eq!(doc.servers.len(), 7);
    assert_eq!(doc.strategy, "fb23");

    let (code, out, err) = call(&[
        "verify",
        "--solution",
        sol.to_str().unwrap(),
        "--requests",
        reqs.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("ok"));

    // A different batch is caught by the hash.
    fs::write(&reqs, "110\n111\n").unwrap();
    let (code, _, err) = call(&[
        "verify",
        "--solution",
        sol.to_str().unwrap(),
        "--requests",
        reqs.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("request_hash"));
}

#[test]
fn tampered_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let (code, out, _) = call(&["solve", "--s", "4", "--random", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    let mut doc: SolutionDoc = serde_json::from_str(&out).unwrap();
    let moved = doc.recovery_sets[0].pop().unwrap();
    doc.recovery_sets[1].push(moved);
    fs::write(&sol, serde_json::to_string(&doc).unwrap()).unwrap();
    let (code, _, err) = call(&[
        "verify",
        "--solution",
        sol.to_str().unwrap(),
        "--random",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("request 0"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        call(&["solve", "--s", "3", "--random", "2", "--strategy", "nope"]).0,
        1
    );
    assert_eq!(call(&["solve", "--s", "0", "--random", "2"]).0, 1);
    assert_eq!(
        call(&["solve", "--s", "3", "--random", "3", "--strategy", "fb23"]).0,
        2
    );
    assert_eq!(call(&["solve", "--s", "3", "--random", "9"]).0, 2);
    assert_eq!(
        call(&[
            "solve",
            "--s",
            "3",
            "--random",
            "2",
            "--strategy",
            "alpha",
            "--alpha",
            "0.8"
        ])
        .0,
        1
    );
    assert_eq!(
        call(&[
            "solve",
            "--s",
            "3",
            "--random",
            "2",
            "--strategy",
            "alpha",
            "--alpha",
            "1/2"
        ])
        .0,
        1
    );
    assert_eq!(call(&["oracle", "--s", "6", "--k", "4", "--full"]).0, 4);
    assert_eq!(call(&["bogus"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn alpha_solve_uses_exact_rational() {
    let (code, out, err) = call(&[
        "solve",
        "--s",
        "6",
        "--random",
        "25",
        "--strategy",
        "alpha",
        "--alpha",
        "4/5",
    ]);
    assert_eq!(code, 0, "{err}");
    let doc: SolutionDoc = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.alpha.as_deref(), Some("4/5"));
    assert_eq!(doc.servers.len(), 70);
}

#[test]
fn stress_reports_and_catches_faults() {
    let (code, out, _) = call(&[
        "stress",
        "--s",
        "5",
        "--strategy",
        "fb23",
        "--runs",
        "50",
        "--seed",
        "1",
        "--jobs",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "50/50 verified\n");
    let (code, out, _) = call(&[
        "stress",
        "--s",
        "5",
        "--strategy",
        "fb23",
        "--runs",
        "10",
        "--inject-fault",
    ]);
    assert_eq!(code, 3);
    assert_eq!(out, "0/10 verified\n");
}

#[test]
fn oracle_small_sweep() {
    let (code, out, err) = call(&["oracle", "--s", "3", "--k", "4", "--full"]);
    assert_eq!(code, 0, "{err}");
    assert!(
        out.trim_end().ends_with("210 multisets, 0 failures"),
        "{out}"
    );
}

#[test]
fn table_lists_every_strategy() {
    let (code, out, _) = call(&["table", "--s", "3..7"]);
    assert_eq!(code, 0);
    assert!(out.contains("falls back to fb23"));
    let row = out.lines().find(|l| l.starts_with("7   fb56")).unwrap();
    assert!(row.contains(" 127 ") && row.contains(" 46 "), "{row}");
    assert_eq!(call(&["table", "--s", "9..3"]).0, 1);
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["solve", "--s", "8", "--random", "98", "--seed", "42"];
    let (c1, a, _) = call(&args);
    let (c2, b, _) = call(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}
