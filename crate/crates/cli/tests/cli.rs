use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn steenrod(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_steenrod"));
    cmd.env_remove("STEENROD_ADEM_CACHE");
    match cache {
        Some(p) => cmd.arg("--cache").arg(p),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let o = steenrod(args, None);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o).trim_end().to_string()
}

#[test]
fn element_commands() {
    assert_eq!(run_ok(&["normalize", "Sq[2]*Sq[2]"]), "Sq[3,1]");
    assert_eq!(run_ok(&["normalize", "Sq[1]*Sq[1]"]), "0");
    assert_eq!(run_ok(&["normalize", "Sq[7,3,1]"]), "Sq[7,3,1]");
    assert_eq!(run_ok(&["normalize", "1"]), "1");
    assert_eq!(run_ok(&["antipode", "Sq[3]"]), "Sq[2,1]");
    assert_eq!(
        run_ok(&["convert", "--to", "milnor", "Sq[3]", "+", "Sq[2,1]"]),
        "M[0,1]"
    );
    assert_eq!(
        run_ok(&["convert", "--to", "admissible", "M[0,1]"]),
        "Sq[3] + Sq[2,1]"
    );
    let chi = run_ok(&["antipode", "M[8,4,2,1]"]);
    assert_ne!(chi, "0");
    assert!(chi.starts_with("Sq[49]"));
}

#[test]
fn dims_tables() {
    let dim_column = |module: &str, max: &str| -> Vec<String> {
        run_ok(&[
            "--format",
            "tsv",
            "dims",
            "--module",
            module,
            "--max-degree",
            max,
        ])
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(3).unwrap().to_string())
        .collect()
    };
    assert_eq!(dim_column("bo", "8").join(","), "1,0,0,0,1,0,1,1,1");
    assert_eq!(dim_column("bu", "4").join(","), "1,0,1,0,1");
    assert_eq!(dim_column("bo", "0").join(","), "1");
    let v: Value = serde_json::from_str(&run_ok(&[
        "--format",
        "json",
        "dims",
        "--module",
        "an(2)",
        "--max-degree",
        "6",
    ]))
    .unwrap();
    assert_eq!(v["module"], "an_conjecture(2)");
    assert!(v["rows"][0]["oracle"].is_null());
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "theorem-bo", "--max-degree", "56"][..],
        &["verify", "degree49"],
        &["verify", "prop-basic", "--a-max", "24", "--b-max", "24"],
        &["verify", "theorem-bu", "--max-degree", "30"],
        &["verify", "prop-an"],
        &["verify", "stringk", "--max-degree", "30"],
        &["verify", "excess", "--max-degree", "30"],
        &["verify", "induction", "--n-max", "2", "--max-degree", "24"],
        &["verify", "thom-lemma", "--max-degree", "10"],
        &["verify", "bspin"],
    ] {
        let o = steenrod(args, None);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn verify_reports() {
    let v: Value = serde_json::from_str(&run_ok(&[
        "--format",
        "json",
        "verify",
        "theorem-bo",
        "--max-degree",
        "8",
    ]))
    .unwrap();
    assert_eq!(v["suite"], "theorem-bo");
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"], 9);
    assert_eq!(v["results"][4]["detail"]["candidate_count"], 1);
    let tsv = run_ok(&[
        "--format",
        "tsv",
        "verify",
        "theorem-bo",
        "--max-degree",
        "4",
    ]);
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "check\tdegree\tcount\tdim\trank\tverdict");
    assert_eq!(lines[5], "basis\t4\t1\t1\t1\tpass");
    let tsv = run_ok(&[
        "--format", "tsv", "verify", "bspin", "--k-max", "1", "--n-max", "1",
    ]);
    assert_eq!(tsv.lines().next(), Some("check\tdegree\tverdict"));
}

#[test]
fn exit_codes() {
    let o = steenrod(&["normalize", "Sq[2,"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('^'));
    let o = steenrod(&["normalize", "Sq[2] + Sq[3]"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 7"));
    assert_eq!(
        steenrod(&["verify", "no-such-suite"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        steenrod(&["dims", "--module", "ko"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        steenrod(&["--jobs", "0", "normalize", "1"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        steenrod(&["verify", "prop-an", "--n", "1", "--m-max", "0"], None)
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn failing_checks_exit_one() {
    let o = steenrod(
        &[
            "--format",
            "tsv",
            "verify",
            "theorem-an",
            "--n",
            "2",
            "--max-degree",
            "49",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.ends_with("fail")).collect();
    assert_eq!(fails, ["basis\t49\t0\t1\t0\tfail"]);
    let o = steenrod(
        &["verify", "theorem-an", "--n", "1", "--max-degree", "30"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let o = steenrod(
        &["verify", "theorem-an", "--n", "2", "--max-degree", "49"],
        None,
    );
    assert!(stderr(&o).contains("FAIL basis"));
}

#[test]
fn cache_is_invisible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested").join("adem.cache");
    let args = ["--format", "json", "antipode", "Sq[9,4,2]"];
    let without = stdout(&steenrod(&args, None));
    let first = stdout(&steenrod(&args, Some(&path)));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("ADEMCACHE 1\n"));
    let second = steenrod(&args, Some(&path));
    assert!(stderr(&second).is_empty());
    assert_eq!(without, first);
    assert_eq!(first, stdout(&second));

    std::fs::write(&path, "ADEMCACHE 1\n1 2 : 2 1\n").unwrap();
    let corrupt = steenrod(&args, Some(&path));
    assert!(stderr(&corrupt).contains("warning: ignoring Adem cache"));
    assert_eq!(stdout(&corrupt), without);
    assert!(std::fs::read_to_string(&path).unwrap().lines().count() > 2);

    std::fs::write(&path, "ADEMCACHE 9\n").unwrap();
    let versioned = steenrod(&args, Some(&path));
    assert!(stderr(&versioned).contains("unsupported header"));
    assert_eq!(stdout(&versioned), without);
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.cache");
    let o = Command::new(env!("CARGO_BIN_EXE_steenrod"))
        .env("STEENROD_ADEM_CACHE", &path)
        .args(["normalize", "Sq[3]*Sq[5]"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(path.exists());
}

#[test]
fn printed_forms_round_trip() {
    for expr in [
        "Sq[2]*Sq[2]*Sq[3]",
        "Sq[4]*Sq[4]*Sq[4]",
        "M[2,1] + M[5]",
        "Sq[1]*Sq[2]*Sq[1]*Sq[2]*Sq[1]",
    ] {
        let once = run_ok(&["normalize", expr]);
        assert_eq!(run_ok(&["normalize", &once]), once, "{expr}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let a = run_ok(&[
        "--jobs",
        "1",
        "--format",
        "json",
        "verify",
        "theorem-bu",
        "--max-degree",
        "24",
    ]);
    let b = run_ok(&[
        "--jobs",
        "4",
        "--format",
        "json",
        "verify",
        "theorem-bu",
        "--max-degree",
        "24",
    ]);
    assert_eq!(a, b);
}

#[test]
fn actions_on_polynomials() {
    assert_eq!(run_ok(&["act", "Sq[1]", "w[2]"]), "w[3] + w[2]*w[1]");
    assert_eq!(run_ok(&["act", "--model", "bso", "Sq[1]", "w[2]"]), "w[3]");
    assert_eq!(
        run_ok(&["act", "--thom", "Sq[2,1]", "1"]),
        "U*(w[2]*w[1] + w[1]^3)"
    );
    assert_eq!(
        steenrod(&["act", "Sq[2,0]", "w[2]"], None).status.code(),
        Some(2)
    );
}
