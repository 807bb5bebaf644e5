//! Runs the `kneser` binary. JSON records are pinned by golden files in
//! `tests/golden/`; set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kneser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    kneser(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = kneser(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn golden(name: &str, args: &[&str]) {
    let (v, status) = json(args);
    assert_eq!(status, 0, "{v:#}");
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(
        text,
        want,
        "output of {args:?} drifted from {}",
        path.display()
    );
}

#[test]
fn golden_records() {
    golden(
        "analyze",
        &["analyze", "--group", "6", "--a", "0,1,3,4", "--b", "0,3"],
    );
    golden(
        "analyze_product",
        &[
            "analyze",
            "--group",
            "2x4",
            "--a",
            "(0,0);(1,1)",
            "--b",
            "(0,0);(0,2)",
        ],
    );
    golden("sweep", &["sweep", "--group", "6", "--group", "2x2"]);
    golden(
        "sweep_random",
        &[
            "sweep", "--group", "64", "--mode", "random", "--trials", "500", "--seed", "42",
        ],
    );
    golden(
        "density",
        &[
            "density",
            "--set",
            "periodic(0;3) | interval(0,50)",
            "--prefix",
            "intervals:geom(10,4)",
            "--shift",
            "1",
        ],
    );
    golden(
        "lad",
        &["lad", "--set", "blocks(rec3(6),a,1)", "--bound", "2^20"],
    );
    golden(
        "refine",
        &[
            "refine",
            "--a",
            "periodic(0;2)",
            "--b",
            "periodic(0;2)",
            "--prefix",
            "intervals:geom(4,8)",
            "--k",
            "2",
        ],
    );
    golden(
        "kneser_lad",
        &[
            "kneser-lad",
            "--a",
            "periodic(0,1;5)",
            "--b",
            "periodic(0,1;5)",
            "--k",
            "5",
            "--bound",
            "10^5",
        ],
    );
    golden(
        "kj",
        &[
            "kj",
            "--modulus",
            "6",
            "--a",
            "periodic(0,2,4;6)",
            "--b",
            "periodic(0,2,4;6)",
        ],
    );
    golden(
        "kj_finite",
        &["kj", "--group", "6", "--a", "0,2", "--b", "0,2,4"],
    );
    golden("hnf", &["hnf", "--dim", "2", "--index", "6"]);
    golden("hnf_matrix", &["hnf", "--matrix", "2,1;4,6"]);
    golden("examples_tower", &["examples", "--which", "tower"]);
}

#[test]
fn analyze_reports_the_certificate() {
    let (v, status) = json(&["analyze", "--group", "6", "--a", "0,1,3,4", "--b", "0,3"]);
    assert_eq!(status, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["certificate"]["equation_holds"], true);
    assert_eq!(v["stabilizer"], "0,3");
}

#[test]
fn hnf_lists_sigma_of_six() {
    let (v, _) = json(&["hnf", "--dim", "2", "--index", "6"]);
    assert_eq!(v["count"], 12);
    assert_eq!(v["lattices"].as_array().unwrap().len(), 12);
}

#[test]
fn examples_reproduce_the_half_blocks() {
    let (v, status) = json(&[
        "examples",
        "--which",
        "half-blocks",
        "--terms",
        "10",
        "--eps",
        "0.02",
    ]);
    assert_eq!(status, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(
        v["half_blocks"]["refinement"]["family"],
        "suffix-alpha(1/2)"
    );
    assert!(v["tower"].is_null());
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&["analyze", "--group", "6", "--a", "0,1", "--b", "0"]),
        0
    );
    assert_eq!(code(&["--help"]), 0);
    // Usage and parse errors.
    assert_eq!(code(&["analyze", "--group", "6"]), 2);
    assert_eq!(
        code(&["analyze", "--group", "x", "--a", "0", "--b", "0"]),
        2
    );
    assert_eq!(code(&["lad", "--set", "periodic(0;2", "--bound", "100"]), 2);
    assert_eq!(code(&["hnf", "--matrix", "1,2;2,4"]), 2);
    // Hypothesis not satisfied.
    let evens = [
        "refine",
        "--a",
        "periodic(0;2)",
        "--b",
        "periodic(0;2)",
        "--prefix",
        "intervals:geom(4,6)",
        "--k",
        "2",
    ];
    assert_eq!(code(&[&evens[..], &["--delta", "0"]].concat()), 3);
    assert_eq!(
        code(&[
            "kj",
            "--modulus",
            "7",
            "--a",
            "periodic(0,1;7)",
            "--b",
            "periodic(0,2;7)"
        ]),
        3
    );
    // A check failed: suffix windows cannot close A+A under 2Z for the evens.
    assert_eq!(code(&[&evens[..], &["--families", "suffix"]].concat()), 1);
    // Capacity.
    assert_eq!(code(&["sweep", "--group", "13"]), 4);
    assert_eq!(code(&["hnf", "--dim", "4", "--index", "2"]), 4);
}

#[test]
fn errors_are_records_in_json_mode() {
    let (v, status) = json(&["sweep", "--group", "13"]);
    assert_eq!(status, 4);
    assert_eq!(v["status"], "error");
    assert_eq!(v["exit_code"], 4);
}

#[test]
fn output_does_not_depend_on_threads() {
    let run = |t: &str| {
        kneser(&[
            "sweep",
            "--group",
            "8",
            "--group",
            "2x2x2",
            "--threads",
            t,
            "--json",
        ])
        .stdout
    };
    assert_eq!(run("1"), run("3"));
    let random = |t: &str| {
        kneser(&[
            "sweep",
            "--group",
            "128",
            "--mode",
            "random",
            "--trials",
            "2000",
            "--seed",
            "7",
            "--threads",
            t,
            "--json",
        ])
        .stdout
    };
    assert_eq!(random("1"), random("4"));
}

#[test]
fn text_and_json_share_one_record() {
    let args = [
        "kneser-lad",
        "--a",
        "periodic(0,1;5)",
        "--b",
        "periodic(0,1;5)",
        "--k",
        "5",
        "--bound",
        "10^5",
    ];
    let (v, _) = json(&args);
    let text = String::from_utf8(kneser(&args).stdout).unwrap();
    for (key, value) in v.as_object().unwrap() {
        let line = match value {
            Value::String(s) => format!("{key}: {s}"),
            Value::Bool(b) => format!("{key}: {b}"),
            _ => format!("{key}:"),
        };
        assert!(
            text.lines().any(|l| l.starts_with(&line)),
            "missing {line:?} in\n{text}"
        );
    }
}
