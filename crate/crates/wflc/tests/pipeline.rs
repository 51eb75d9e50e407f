//! End-to-end runs of the command-line tool over the checked-in fixtures:
//! every stage from scenario tagging to code generation, plus exit-code and
//! determinism checks.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture_path;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wflc"))
}

fn ok(output: &Output) -> String {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn full_pipeline_from_scenario_to_skeletons() {
    let dir = tempfile::tempdir().unwrap();
    let work = dir.path();

    // Stage 1: offline tagging replays the canned response byte-exactly.
    let canned = work.join("canned.txt");
    std::fs::copy(fixture_path("listing2_example.txt"), &canned).unwrap();
    let tagged = work.join("tagged.txt");
    let out = bin()
        .arg("tag")
        .arg(fixture_path("scenario_raw.txt"))
        .args(["--stage", "activities"])
        .arg("--out")
        .arg(&tagged)
        .arg("--offline")
        .arg(&canned)
        .output()
        .unwrap();
    ok(&out);
    assert_eq!(
        std::fs::read(&tagged).unwrap(),
        std::fs::read(fixture_path("listing2_example.txt")).unwrap()
    );

    // Stage 2: vocabulary and draft structure, diagnostics on stdout.
    let vocab = work.join("vocab.json");
    let draft = work.join("draft.json");
    let out = bin()
        .arg("extract")
        .arg(&tagged)
        .arg("--vocab")
        .arg(&vocab)
        .arg("--draft")
        .arg(&draft)
        .output()
        .unwrap();
    let stdout = ok(&out);
    assert!(stdout.contains("diagnostic"), "{stdout}");
    let vocab_text = std::fs::read_to_string(&vocab).unwrap();
    assert!(vocab_text.contains("EntersData"));
    assert!(vocab_text.contains("wflc-vocab/1"));
    let draft_text = std::fs::read_to_string(&draft).unwrap();
    assert!(draft_text.contains("wflc-draft/1"));

    // Hole completion through an edits file on a small scenario.
    let small = work.join("small.txt");
    std::fs::write(&small, "<SEQ><A>enters data</A></SEQ>").unwrap();
    let edits = work.join("holes.edits");
    std::fs::write(&edits, "# fill the missing second activity\n0.a2 = Verify\n").unwrap();
    let completed = work.join("completed.expr");
    let out = bin()
        .arg("extract")
        .arg(&small)
        .arg("--vocab")
        .arg(work.join("small_vocab.json"))
        .arg("--draft")
        .arg(work.join("small_draft.json"))
        .arg("--edits")
        .arg(&edits)
        .arg("--expr")
        .arg(&completed)
        .output()
        .unwrap();
    ok(&out);
    let completed_text = std::fs::read_to_string(&completed).unwrap();
    assert!(completed_text.contains("Seq(EntersData,Verify)"), "{completed_text}");

    // Stage 3: diagram to expression, matching the checked-in golden.
    let expr = work.join("ad2.expr");
    ok(&bin()
        .arg("expr")
        .arg(fixture_path("ad2.json"))
        .arg("--out")
        .arg(&expr)
        .output()
        .unwrap());
    assert_eq!(
        std::fs::read_to_string(&expr).unwrap(),
        std::fs::read_to_string(fixture_path("ad2.expr")).unwrap()
    );

    // Stage 4: specification generation.
    let spec = work.join("ad2.spec");
    let stdout = ok(&bin()
        .arg("genspec")
        .arg(&expr)
        .arg("--out")
        .arg(&spec)
        .output()
        .unwrap());
    assert!(stdout.contains("52 formulas"), "{stdout}");

    // Stage 5: verification at the default budget.
    let json = work.join("verdicts.json");
    let verify = bin()
        .arg("verify")
        .arg(&spec)
        .arg(fixture_path("ad2_requirements.txt"))
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0));
    let verdicts: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(verdicts["format"], "wflc-verdict/1");
    assert_eq!(verdicts["status"], 0);
    assert_eq!(verdicts["requirements"][0]["outcome"]["kind"], "satisfied_up_to_bound");
    assert_eq!(verdicts["requirements"][0]["exhaustive"], false);

    // Stage 6: TPTP problems.
    let tptp_dir = work.join("tptp");
    ok(&bin()
        .arg("tptp")
        .arg(&spec)
        .arg(fixture_path("ad2_requirements.txt"))
        .arg("--out-dir")
        .arg(&tptp_dir)
        .args(["--mode", "ordered"])
        .output()
        .unwrap());
    let count = std::fs::read_dir(&tptp_dir).unwrap().count();
    assert_eq!(count, 2);

    // Stage 7: code skeletons in both notations.
    let code_dir = work.join("code");
    for lang in ["java", "python"] {
        ok(&bin()
            .arg("gencode")
            .arg(&expr)
            .args(["--lang", lang])
            .arg("--out-dir")
            .arg(&code_dir)
            .output()
            .unwrap());
    }
    assert!(code_dir.join("AD2.java").exists());
    assert!(code_dir.join("AD2.py").exists());

    // Stage 8: the derivation sequence prints.
    let stdout = ok(&bin().arg("derive").arg(&expr).output().unwrap());
    assert!(stdout.trim().starts_with("1, 4, 10, 14, 15, 13, 3, 7, 12"), "{stdout}");
}

#[test]
fn pipeline_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |suffix: &str| -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let expr = dir.path().join(format!("e{suffix}.expr"));
        let spec = dir.path().join(format!("s{suffix}.spec"));
        let json = dir.path().join(format!("v{suffix}.json"));
        ok(&bin().arg("expr").arg(fixture_path("ad2.json")).arg("--out").arg(&expr).output().unwrap());
        ok(&bin().arg("genspec").arg(&expr).arg("--out").arg(&spec).output().unwrap());
        let v = bin()
            .arg("verify")
            .arg(&spec)
            .arg(fixture_path("ad2_requirements.txt"))
            .arg("--json")
            .arg(&json)
            .output()
            .unwrap();
        assert_eq!(v.status.code(), Some(0));
        (
            std::fs::read(&expr).unwrap(),
            std::fs::read(&spec).unwrap(),
            std::fs::read(&json).unwrap(),
        )
    };
    let first = run("1");
    let second = run("2");
    assert_eq!(first, second, "identical inputs must give byte-identical outputs");
}

#[test]
fn verify_exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("seq.spec");
    let reqs = dir.path().join("r.req");

    std::fs::write(
        &spec,
        "# wflc:spec:v1 entry=a exit=b\n<>a\n[](a -> <>b)\n[]!(a & b)\n",
    )
    .unwrap();

    std::fs::write(&reqs, "# wflc:req:v1\nr1: liveness: [](a -> <>b)\n").unwrap();
    let out = bin().arg("verify").arg(&spec).arg(&reqs).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    std::fs::write(&reqs, "# wflc:req:v1\nnever: safety: []!a\n").unwrap();
    let out = bin().arg("verify").arg(&spec).arg(&reqs).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("COUNTEREXAMPLE"));

    std::fs::write(&spec, "# wflc:spec:v1 entry=a exit=a\n<>a\n[]!a\n").unwrap();
    let out = bin().arg("verify").arg(&spec).arg(&reqs).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Operational failures use a distinct code.
    let out = bin().arg("verify").arg("/nonexistent.spec").arg(&reqs).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_controls_the_checker() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s.spec");
    std::fs::write(&spec, "# wflc:spec:v1 entry=a exit=b\n<>a\n").unwrap();
    let reqs = dir.path().join("r.req");
    std::fs::write(&reqs, "# wflc:req:v1\nr: other: <>a\n").unwrap();
    let config = dir.path().join("wflc.toml");
    std::fs::write(&config, "[checker]\nbound = 2\n").unwrap();

    let out = bin()
        .arg("--config")
        .arg(&config)
        .arg("verify")
        .arg(&spec)
        .arg(&reqs)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("bound 2"));

    // A bound flag overrides the config.
    let out = bin()
        .arg("--config")
        .arg(&config)
        .arg("verify")
        .arg(&spec)
        .arg(&reqs)
        .args(["-k", "3"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("bound 3"));
}

#[test]
fn malformed_inputs_are_reported_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let bad_expr = dir.path().join("bad.expr");
    std::fs::write(&bad_expr, "# wflc:expr:v1\nSeq(a)\n").unwrap();
    let out = bin()
        .arg("genspec")
        .arg(&bad_expr)
        .arg("--out")
        .arg(dir.path().join("s.spec"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Seq requires 2 arguments"), "{stderr}");

    let bad_diagram = dir.path().join("bad.json");
    std::fs::write(&bad_diagram, "{\"format\": \"wflc-diagram/1\", \"id\": \"X\", \"body\": {\"call\": \"Y\"}}").unwrap();
    let out = bin()
        .arg("expr")
        .arg(&bad_diagram)
        .arg("--out")
        .arg(dir.path().join("x.expr"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not present"), "unresolved call");
}
