use std::process::Command;

fn systole(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_systole")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes() {
    assert_eq!(systole(&["--omit-timing", "form", "H"]).0, 0);
    let (code, out, err) = systole(&["form", "H + X"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("offset 4"));
    assert_eq!(systole(&["verify-bound", "I(1,0)"]).0, 1);
    assert_eq!(systole(&["perp", "I(2,1)", "--vector", "1,1,1"]).0, 1);
    assert_eq!(systole(&["confsys", "I(1,1)", "--line", "1,x"]).0, 2);
    assert_eq!(systole(&["confsys", "I(1,1)", "--line", "1,0,0"]).0, 1);
    assert_eq!(systole(&["search", "I(2,2)"]).0, 1);
    assert_eq!(systole(&["no-such-command"]).0, 2);
}

#[test]
fn confsys_examples() {
    for (spec, line) in [("I(1,1)", "0,1"), ("H", "1,-1"), ("I(1,2)", "1,0,0")] {
        let (code, out, _) = systole(&["confsys", spec, "--line", line]);
        assert_eq!(code, 0, "{spec}");
        assert!(out.contains("\"confsys_sq\": \"1/1\""), "{spec}: {out}");
    }
    // Lines live in the reversed orientation, so for I(1,2) the positive
    // direction of the original form is the valid one.
    assert_eq!(systole(&["confsys", "I(1,2)", "--line", "0,1,0"]).0, 1);
    let (_, out, _) = systole(&["confsys", "(1)"]);
    assert!(out.contains("\"confsys_sq\": \"1/1\""));
    let (_, out, _) = systole(&["confsys", "H", "--line", "1,-1", "--emit-gram"]);
    assert!(out.contains("sign_reversed_gram"));
}

#[test]
fn perp_examples() {
    let (code, out, _) = systole(&["perp", "I(3,1)", "--vector", "1,1,1,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"perp_min_sq\": \"1/1\""));
    assert!(out.contains("\"perp_unimodular\": true"));
    let (_, out, _) = systole(&["--omit-timing", "perp", "I(1,1)", "--vector", "0,1"]);
    assert!(out.contains("\"perp_gram\": [\n      [\n        \"1\"\n      ]\n    ]"), "{out}");
}

#[test]
fn search_is_deterministic_and_writes_history() {
    let dir = std::env::temp_dir().join(format!("systole-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("history.csv");
    let args = ["--omit-timing", "search", "I(1,9)", "--height", "2", "--seed", "7", "--restarts", "4"];
    let (code, a, _) = systole(&args);
    assert_eq!(code, 0);
    let mut with_history = args.to_vec();
    let path = csv.to_str().unwrap();
    with_history.extend(["--history", path]);
    let (_, b, _) = systole(&with_history);
    assert_eq!(a, b);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("step,source,confsys_sq,confsys_approx,line\n"));
    assert!(text.lines().count() >= 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_is_reported_unless_omitted() {
    assert!(systole(&["form", "H"]).1.contains("wall_time_s_approx"));
    assert!(!systole(&["--omit-timing", "form", "H"]).1.contains("wall_time"));
}
