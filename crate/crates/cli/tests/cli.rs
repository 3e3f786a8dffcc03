//! Drives the `nq` binary and checks its exit-code contract and outputs.

use std::path::Path;
use std::process::{Command, Output};

use nq_core::document::ResultDocument;
use nq_core::nq::Termination;

fn nq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nq"))
        .args(args)
        .current_dir(dir)
        .env_remove("NQ_TIME_BUDGET")
        .env_remove("NQ_MEM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn input(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("inputs")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn run_free_group_to_class_three() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "f.nq", "generators: a b\n");
    let o = nq(
        &["run", "f.nq", "--max-class", "3", "--output", "f.json"],
        d.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc = ResultDocument::read(&d.path().join("f.json")).unwrap();
    let ranks: Vec<usize> = doc.layers.iter().map(|l| l.free_rank).collect();
    assert_eq!(ranks, vec![2, 1, 2]);
    assert_eq!(doc.termination, Termination::ReachedMaxClass);
    assert_eq!(doc.config.seed, 1);
}

#[test]
fn run_default_output_path() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "c.nq", "generators: a\nrelators: a^6\n");
    let o = nq(&["run", "c.nq"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let doc = ResultDocument::read(&d.path().join("c.result.json")).unwrap();
    assert_eq!(doc.class_achieved, 1);
    assert_eq!(doc.termination, Termination::Stabilized);
}

#[test]
fn run_empty_generator_list_is_trivial() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "e.nq", "generators:\n");
    let o = nq(&["run", "e.nq", "--output", "e.json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let doc = ResultDocument::read(&d.path().join("e.json")).unwrap();
    assert_eq!(doc.presentation.len(), 0);
    assert_eq!(doc.class_achieved, 0);
}

#[test]
fn parse_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "bad.nq", "generators: a\nlaws: [a,x]\n");
    let o = nq(&["run", "bad.nq"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    write(
        d.path(),
        "rel.nq",
        "generators: a\nvariables: x\nrelators: x^2\n",
    );
    assert_eq!(nq(&["run", "rel.nq"], d.path()).status.code(), Some(2));
    assert_eq!(nq(&["run", "missing.nq"], d.path()).status.code(), Some(2));
    assert_eq!(
        nq(&["run", "bad.nq", "--strategy", "nonsense"], d.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nq(&["run", "bad.nq", "--time-budget", "0"], d.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nq(&["frobnicate"], d.path()).status.code(), Some(2));
}

#[test]
fn counterexample_exits_one() {
    // generator instances alone never kill (ab)^2
    let d = tempfile::tempdir().unwrap();
    write(
        d.path(),
        "sq.nq",
        "generators: a b\nvariables: x\nlaws: x^2\nmax_class: 2\n",
    );
    let args = [
        "run",
        "sq.nq",
        "--strategy",
        "generators",
        "--no-escalate",
        "--samples",
        "100",
        "--output",
        "sq.json",
    ];
    let o = nq(&args, d.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let doc = ResultDocument::read(&d.path().join("sq.json")).unwrap();
    assert!(doc.counterexample.is_some());

    let o = nq(
        &["run", "sq.nq", "--samples", "100", "--output", "ok.json"],
        d.path(),
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn budget_exit_three_then_resume() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "m.nq", &input("right4_engel_single.nq"));
    let o = Command::new(env!("CARGO_BIN_EXE_nq"))
        .args(["run", "m.nq", "--output", "m.json"])
        .current_dir(d.path())
        .env("NQ_TIME_BUDGET", "0.001s")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let partial = ResultDocument::read(&d.path().join("m.json"));
    if let Ok(doc) = &partial {
        assert_eq!(doc.termination, Termination::ReachedMaxClass);
        assert!(doc.class_achieved < 8);
    }

    let o = nq(&["run", "m.nq", "--output", "m.json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    if partial.is_ok() {
        assert!(stdout(&o).contains("resuming from class"));
    }
    let doc = ResultDocument::read(&d.path().join("m.json")).unwrap();
    assert_eq!(doc.class_achieved, 8);
    assert_eq!(doc.termination, Termination::Stabilized);
}

#[test]
fn resumed_document_matches_fresh_run() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "h.nq", &input("right3_engel_pair.nq"));
    assert_eq!(
        nq(
            &["run", "h.nq", "--max-class", "4", "--output", "part.json"],
            d.path()
        )
        .status
        .code(),
        Some(0)
    );
    let partial = ResultDocument::read(&d.path().join("part.json")).unwrap();
    assert_eq!(partial.class_achieved, 4);
    // a finished document at a smaller bound is a valid checkpoint
    std::fs::copy(d.path().join("part.json"), d.path().join("resumed.json")).unwrap();
    assert_eq!(
        nq(&["run", "h.nq", "--output", "resumed.json"], d.path())
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        nq(&["run", "h.nq", "--output", "fresh.json"], d.path())
            .status
            .code(),
        Some(0)
    );
    let a = ResultDocument::read(&d.path().join("resumed.json")).unwrap();
    let b = ResultDocument::read(&d.path().join("fresh.json")).unwrap();
    assert_eq!(a.presentation, b.presentation);
    assert_eq!(a.class_achieved, 6);
}

#[test]
fn output_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "e.nq", &input("engel4_two_generator.nq"));
    nq(&["run", "e.nq", "--output", "1.json"], d.path());
    nq(&["run", "e.nq", "--output", "2.json"], d.path());
    let a = std::fs::read(d.path().join("1.json")).unwrap();
    let b = std::fs::read(d.path().join("2.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn queries() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "h.nq", &input("right3_engel_pair.nq"));
    write(d.path(), "m.nq", &input("right4_engel_single.nq"));
    write(d.path(), "e.nq", &input("engel4_two_generator.nq"));
    for f in ["h", "m", "e"] {
        let o = nq(
            &[
                "run",
                &format!("{}.nq", f),
                "--output",
                &format!("{}.json", f),
            ],
            d.path(),
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let q = |args: &[&str]| {
        let mut all = vec!["query"];
        all.extend_from_slice(args);
        let o = nq(&all, d.path());
        (o.status.code(), stdout(&o))
    };
    assert_eq!(
        q(&["m.json", "order", "[u^-1,v,v,v,v]"]),
        (Some(0), "375\n".into())
    );
    assert_eq!(
        q(&["h.json", "order", "[a*b,c,c,c]"]),
        (Some(0), "4\n".into())
    );
    assert_eq!(q(&["h.json", "order", "a"]), (Some(0), "infinite\n".into()));
    assert_eq!(
        q(&["h.json", "in-gamma", "[a^-1,c,c,c]", "5"]),
        (Some(0), "true\n".into())
    );
    assert_eq!(
        q(&["h.json", "in-gamma", "[a,c]", "3"]),
        (Some(0), "false\n".into())
    );
    assert_eq!(
        q(&["h.json", "exponent-gamma", "6"]),
        (Some(0), "section 2\nsubgroup 2\n".into())
    );

    let (code, out) = q(&["m.json", "torsion"]);
    assert_eq!(code, Some(0));
    assert!(out.contains("primes {2, 3, 5}"), "{}", out);
    let (code, out) = q(&["m.json", "compare", "--torsion-free", "e.json"]);
    assert_eq!(code, Some(0));
    assert!(out.starts_with("equal\ncertificate holds"), "{}", out);
    let (code, out) = q(&["m.json", "compare", "e.json"]);
    assert_eq!(code, Some(0));
    assert!(out.starts_with("different"), "{}", out);

    assert_eq!(q(&["h.json", "order", "[a,q]"]).0, Some(2));
    assert_eq!(q(&["h.json", "in-gamma", "a", "8"]).0, Some(2));
    assert_eq!(q(&["h.json", "exponent-gamma", "0"]).0, Some(2));
    assert_eq!(q(&["h.json", "volume"]).0, Some(2));
    assert_eq!(q(&["missing.json", "torsion"]).0, Some(2));
}
