use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use frob_core::cli::{emit, lookup, parse, run, to_json, CliError, Command, Format, Report, RunOptions};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "frob"))
        .collect();
    v.sort();
    assert!(!v.is_empty());
    v
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn fixture(name: &str) -> String {
    read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name))
}

fn opts(seed: u64) -> RunOptions {
    RunOptions { seed, include_zero_subcategory: false }
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("frob-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

fn frob(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_frob")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn parses_the_triangular_document() {
    let doc = parse(&fixture("triangular.frob")).unwrap();
    assert_eq!(doc.field.unwrap().p(), 5);
    assert_eq!(doc.algebras.len(), 2);
    assert_eq!(doc.bimodules.len(), 1);
    assert_eq!(doc.tasks.len(), 3);
    assert_eq!(doc.bimodule("M").unwrap().bimodule.dim(), 1);
}

#[test]
fn empty_document_runs_nothing() {
    let doc = parse("").unwrap();
    assert!(doc.tasks.is_empty() && doc.bimodules.is_empty());
    let r = run(&doc, Command::Check, opts(0));
    assert!(r.sections.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn input_errors() {
    let e = parse("field 4\n").unwrap_err();
    assert_eq!(
        e,
        CliError::Semantic { block: "field".into(), reason: "modulus 4 is not prime".into() }
    );
    assert!(matches!(parse("field 5\nalgebra R = nonsense(\n"), Err(CliError::Syntax { .. })));
    assert!(matches!(
        parse("field 5\nalgebra k = ground\ntask check N\n"),
        Err(CliError::Unresolved { .. })
    ));
    assert_eq!("bogus".parse::<Command>(), Err(CliError::UnknownCommand("bogus".into())));
    for e in [e, CliError::Io("x".into())] {
        assert_eq!(e.exit_code(), 2);
    }
}

#[test]
fn explicit_form_round_trips() {
    for p in fixtures() {
        let doc = parse(&read(&p)).unwrap();
        let text = doc.to_text();
        let again = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", p.display()));
        assert_eq!(again.to_text(), text, "{}", p.display());
        let (a, b) = (run(&doc, Command::ReportAll, opts(1)), run(&again, Command::ReportAll, opts(1)));
        // source lines move, the analyses must not
        let essence = |r: &Report| -> Vec<_> {
            r.sections
                .iter()
                .map(|s| {
                    let e: Vec<_> = s.expectations.iter().map(|e| (e.key.clone(), e.actual.clone(), e.ok)).collect();
                    (s.task.clone(), s.result.clone(), e)
                })
                .collect()
        };
        assert_eq!(essence(&a), essence(&b), "{}", p.display());
    }
}

#[test]
fn every_fixture_meets_its_expectations() {
    for p in fixtures() {
        let r = run(&parse(&read(&p)).unwrap(), Command::ReportAll, opts(0x5eed));
        assert_eq!(r.exit_code(), 0, "{}", p.display());
        assert!(r.sections.iter().all(|s| s.expectations.iter().all(|e| e.ok)));
    }
}

#[test]
fn json_is_stable_and_deterministic() {
    for p in fixtures() {
        let doc = parse(&read(&p)).unwrap();
        let r = run(&doc, Command::ReportAll, opts(7));
        let json = to_json(&r);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json(&back), json, "{}", p.display());
        assert_eq!(to_json(&run(&doc, Command::ReportAll, opts(7))), json, "{}", p.display());
    }
}

#[test]
fn golden_triangular_text() {
    let doc = parse(&fixture("triangular.frob")).unwrap();
    let ranks = emit(&run(&doc, Command::Ranks, opts(24301)), Format::Text, false);
    for line in [
        "frob ranks (F_5, seed 24301)",
        "== ranks M (line 8)",
        "  rrk        y1\n  x1          1\n  x2          1\n",
        "  lrk        x1   x2\n  y1          0    1\n",
        "  supp_f: [2]",
        "  kernels: {\"f\":[1],\"fg\":[],\"g\":[],\"gf\":[1]}",
        "all expectations met",
    ] {
        assert!(ranks.contains(line), "missing {line:?} in\n{ranks}");
    }
    let classify = emit(&run(&doc, Command::Classify, opts(24301)), Format::Text, false);
    for line in [
        "  faithful_f              no    witness: S1 is sent to zero",
        "  right_localizing        yes",
        "  centralizing            n/a",
    ] {
        assert!(classify.contains(line), "missing {line:?} in\n{classify}");
    }
}

#[test]
fn lookup_paths() {
    let doc = parse(&fixture("triangular.frob")).unwrap();
    let r = run(&doc, Command::Ranks, opts(0));
    let res = &r.sections[0].result;
    assert_eq!(lookup(res, "rrk").unwrap(), &serde_json::json!([[1], [1]]));
    assert_eq!(lookup(res, "f_images.2.dim").unwrap(), &serde_json::json!(1));
    assert!(lookup(res, "no_such_key").is_none());
}

#[test]
fn binary_exit_codes() {
    let tri = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/triangular.frob");
    let tri = tri.to_str().unwrap();
    let (code, out, _) = frob(&["ranks", tri]);
    assert_eq!(code, 0);
    assert!(out.contains("all expectations met"));

    let (code, out, _) = frob(&["check", tri, "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "check");

    let bad = scratch("mismatch.frob", &fixture("triangular.frob").replace("expect lrk = [[0,1]]", "expect lrk = [[1,0]]"));
    let (code, out, _) = frob(&["ranks", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");

    let p4 = scratch("p4.frob", "field 4\n");
    let (code, _, err) = frob(&["check", p4.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("modulus 4 is not prime"));

    let (code, _, err) = frob(&["bogus", tri]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown command"));
    let (code, _, _) = frob(&["check", "/nonexistent/input.frob"]);
    assert_eq!(code, 2);

    let out_file = std::env::temp_dir().join(format!("frob-cli-{}-out.json", std::process::id()));
    let (code, _, _) = frob(&["classify", tri, "--format", "json", "--out", out_file.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(read(&out_file).contains("\"faithful_f\""));
    for p in [bad, p4, out_file] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn binary_seed_determinism() {
    for p in fixtures() {
        let p = p.to_str().unwrap();
        let a = frob(&["duality", p, "--format", "json", "--seed", "11"]);
        let b = frob(&["duality", p, "--format", "json", "--seed", "11"]);
        assert_eq!(a, b, "{p}");
    }
}
