use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const PPC7: &str = r#"{"q": 7, "t": 2, "k": 2,
    "ppc": {"l1": {"a": 1, "b": 1}, "l2": {"a": 3, "b": 0}, "alpha": 0, "beta": 1}}"#;
const PPC61: &str = r#"{"q": 61, "t": 1, "k": 3,
    "ppc": {"l1": {"a": 9, "b": 0}, "l2": {"a": 32, "b": 0}, "alpha": 1, "beta": 1}}"#;
const PPC61_PLAN: &str = r#"{"w": 3, "d1": 3, "d2": 7}"#;

fn blo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_xy_over_ppc7() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC7);
    let msg = write(&dir, "msg.txt", "0 0\n0 1\n");
    let out = blo(&["encode", "--instance", s(&inst), "--message", s(&msg)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next().unwrap(), "0 3 4 4 2 4 6");
}

#[test]
fn zero_message_encodes_to_zero() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC7);
    let msg = write(&dir, "msg.txt", "0 0\n0 0\n");
    let out = blo(&["encode", "--instance", s(&inst), "--message", s(&msg)]);
    assert!(stdout(&out).split_whitespace().all(|t| t == "0"));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"q\": 7");
    let msg = write(&dir, "msg.txt", "0 0\n0 0\n");
    let out = blo(&["encode", "--instance", s(&bad), "--message", s(&msg)]);
    assert_eq!(out.status.code(), Some(2));
    let inst = write(&dir, "inst.json", PPC7);
    let wrong = write(&dir, "wrong.txt", "0 0 0\n");
    let out = blo(&["encode", "--instance", s(&inst), "--message", s(&wrong)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_is_seeded() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC61);
    let msg = write(&dir, "msg.txt", "1 2 3\n");
    let cw = stdout(&blo(&[
        "encode",
        "--instance",
        s(&inst),
        "--message",
        s(&msg),
    ]));
    let cw_path = write(&dir, "cw.txt", &cw);
    let run = |e: &str, seed: &str| {
        stdout(&blo(&[
            "corrupt",
            "--instance",
            s(&inst),
            "--received",
            s(&cw_path),
            "--errors",
            e,
            "--seed",
            seed,
        ]))
    };
    assert_eq!(run("0", "5"), cw);
    assert_eq!(run("4", "5"), run("4", "5"));
    let all = run("12", "9");
    assert!(all.lines().zip(cw.lines()).all(|(a, b)| a != b));
    let out = blo(&[
        "corrupt",
        "--instance",
        s(&inst),
        "--received",
        s(&cw_path),
        "--errors",
        "13",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_corrupt_decode_round_trip() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC61);
    let plan = write(&dir, "plan.json", PPC61_PLAN);
    let msg = write(&dir, "msg.txt", "17 0 42\n");
    let cw = stdout(&blo(&[
        "encode",
        "--instance",
        s(&inst),
        "--message",
        s(&msg),
    ]));
    let cw_path = write(&dir, "cw.txt", &cw);

    let clean = blo(&[
        "decode",
        "--instance",
        s(&inst),
        "--plan",
        s(&plan),
        "--received",
        s(&cw_path),
    ]);
    assert!(clean.status.success());
    assert_eq!(stdout(&clean).lines().next().unwrap(), "0 ; 17 0 42");

    let bad = stdout(&blo(&[
        "corrupt",
        "--instance",
        s(&inst),
        "--received",
        s(&cw_path),
        "--errors",
        "4",
        "--seed",
        "3",
    ]));
    let bad_path = write(&dir, "bad.txt", &bad);
    let out = blo(&[
        "decode",
        "--instance",
        s(&inst),
        "--plan",
        s(&plan),
        "--received",
        s(&bad_path),
        "--emit-kernel",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "4 ; 17 0 42"), "{text}");
    assert!(text.contains("# kernel: dimension"));
}

#[test]
fn degenerate_plan_exits_3() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC61);
    let plan = write(&dir, "plan.json", r#"{"w": 3, "d1": 3, "d2": 12}"#);
    let cw = write(&dir, "cw.txt", &"0 0 0 0 0\n".repeat(12));
    let out = blo(&[
        "decode",
        "--instance",
        s(&inst),
        "--plan",
        s(&plan),
        "--received",
        s(&cw),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate radius"));
}

#[test]
fn check_reports_conditions() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", PPC61);
    let plan = write(&dir, "plan.json", PPC61_PLAN);
    let out = blo(&["check", "--instance", s(&inst), "--plan", s(&plan)]);
    assert!(out.status.success());
    let text = stdout(&out);
    for c in 1..=4 {
        assert!(text.contains(&format!("condition {c}")), "{text}");
    }
    assert_eq!(text.matches(": PASS").count(), 5);
    assert!(text.contains("D = 5, ell = 2"), "{text}");

    let weak = write(&dir, "weak.json", r#"{"w": 3, "d1": 3, "d2": 5}"#);
    let out = blo(&["check", "--instance", s(&inst), "--plan", s(&weak)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("condition 1 (interpolation count): FAIL"));

    // w = s gives r = 1 < t: the T-code row argument cannot apply
    let biv = write(
        &dir,
        "biv.json",
        r#"{"q": 61, "t": 2, "k": 2,
            "ppc": {"l1": {"a": 9, "b": 0}, "l2": {"a": 32, "b": 0}, "alpha": 1, "beta": 1}}"#,
    );
    let wide = write(&dir, "wide.json", r#"{"w": 5, "d1": 2, "d2": 4}"#);
    let out = blo(&["check", "--instance", s(&biv), "--plan", s(&wide)]);
    assert_ne!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("FAIL"));

    let coprime = write(
        &dir,
        "nc.json",
        r#"{"q": 7, "t": 1, "k": 1,
            "ppc": {"l1": {"a": 3, "b": 0}, "l2": {"a": 2, "b": 0}, "alpha": 1, "beta": 1}}"#,
    );
    let out = blo(&["check", "--instance", s(&coprime), "--plan", s(&plan)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coprime"));
}

#[test]
fn demos_run() {
    for (name, expect) in [
        ("ppc7", " 0 mismatches"),
        ("frs13", " 0 mismatches"),
        ("ppc61", "recovered: yes"),
    ] {
        let out = blo(&["demo", name, "--seed", "4"]);
        assert!(out.status.success(), "{name}");
        let text = stdout(&out);
        assert!(text.contains(expect), "{text}");
    }
    let out = blo(&["demo", "ppc7"]);
    assert!(stdout(&out).contains("encode(XY) column 0: 0 3 4 4 2 4 6"));
    let out = blo(&["demo", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ppc61-bivariate"));
}

#[test]
fn bivariate_demo_with_oracle() {
    let out = blo(&["demo", "ppc61-bivariate", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("transmitted message recovered: yes"),
        "{text}"
    );
    assert!(text.contains("0 missed by the decoder"), "{text}");
}
