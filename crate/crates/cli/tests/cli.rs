use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fisher_core::SetFamily;
use serde_json::Value;
use tempfile::TempDir;

fn fisher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fisher"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = fisher(&all);
    (
        code(&out),
        serde_json::from_slice(&out.stdout).expect("json report"),
    )
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_fano() {
    let dir = TempDir::new().unwrap();
    let fano = dir.path().join("fano.txt");
    let out = fisher(&[
        "generate",
        "projective-plane",
        "--q",
        "2",
        "--output",
        s(&fano),
    ]);
    assert_eq!(code(&out), 0);

    let out = fisher(&["verify", s(&fano)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("k=1"));

    let (c, v) = structured(&["verify", s(&fano)]);
    assert_eq!(c, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["k"], 1);
    assert_eq!(v["m"], 7);
    assert_eq!(v["n"], 7);
}

#[test]
fn verify_reports_violating_pair() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "n=3\n1 2\n1 3\n1 2 3\n");
    let (c, v) = structured(&["verify", s(&f)]);
    assert_eq!(c, 1);
    assert_eq!(v["is_k_intersecting"], false);
    assert_eq!(v["violation"]["first"], 1);
    assert_eq!(v["violation"]["second"], 3);
    assert_eq!(v["violation"]["found"], 2);
}

#[test]
fn kernel_on_small_incidence() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", "n=2\n1\n2\n1 2\n");
    for strategy in ["box", "dfs"] {
        let (c, v) = structured(&["kernel", s(&f), "--strategy", strategy, "--deterministic"]);
        assert_eq!(c, 0);
        assert_eq!(v["tau"], serde_json::json!([1, 1, -1]));
        assert!(v["matrix_digest"].as_str().unwrap().starts_with("sha256:"));
    }
}

#[test]
fn kernel_exit_codes() {
    let dir = TempDir::new().unwrap();
    let fano = dir.path().join("fano.txt");
    fisher(&[
        "generate",
        "projective-plane",
        "--q",
        "2",
        "--output",
        s(&fano),
    ]);
    assert_eq!(code(&fisher(&["kernel", s(&fano), "--max-coeff", "2"])), 1);
    assert_eq!(code(&fisher(&["kernel", s(&fano)])), 2);
    assert_eq!(
        code(&fisher(&[
            "kernel",
            s(&fano),
            "--max-coeff",
            "3",
            "--budget",
            "5"
        ])),
        3
    );

    let m = write(&dir, "x.txt", "m=3 n=1\n1\n2\n3\n");
    let (c, v) = structured(&["kernel", s(&m), "--deterministic"]);
    assert_eq!(c, 0);
    assert_eq!(v["source"], "matrix");
    assert_eq!(v["tau"], serde_json::json!([1, 1, -1]));

    let bad = write(&dir, "bad.txt", "n=2\n1 5\n");
    assert_eq!(code(&fisher(&["kernel", s(&bad)])), 2);
}

#[test]
fn generate_round_trips() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["near-pencil", "--n", "6"],
        &["projective-plane", "--q", "3"],
        &["sunflower", "--n", "9", "--k", "2", "--m", "4", "--core"],
        &["random", "--n", "10", "--m", "12", "--seed", "9"],
    ];
    for args in cases {
        for format in ["text", "structured"] {
            let path = dir.path().join("out");
            let mut all = vec!["generate"];
            all.extend_from_slice(args);
            all.extend(["--format", format, "--output", s(&path)]);
            assert_eq!(code(&fisher(&all)), 0, "{args:?}");
            let body = std::fs::read_to_string(&path).unwrap();
            let family = SetFamily::parse(&body).unwrap();
            let again = match format {
                "text" => family.to_text(),
                _ => format!("{}\n", family.to_json()),
            };
            assert_eq!(body, again);
        }
    }
    assert_eq!(
        code(&fisher(&["generate", "projective-plane", "--q", "4"])),
        2
    );
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("r.txt");
    fisher(&[
        "generate",
        "random",
        "--n",
        "6",
        "--m",
        "9",
        "--seed",
        "4",
        "--output",
        s(&f),
    ]);
    let runs: &[&[&str]] = &[
        &[
            "kernel",
            s(&f),
            "--strategy",
            "box",
            "--deterministic",
            "--format",
            "structured",
        ],
        &["beck-fiala", s(&f), "--format", "structured"],
        &[
            "generate", "random", "--n", "12", "--m", "20", "--seed", "77",
        ],
    ];
    for args in runs {
        let a = fisher(args);
        let b = fisher(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
    let a = fisher(&[
        "generate", "random", "--n", "12", "--m", "20", "--seed", "1",
    ]);
    let b = fisher(&[
        "generate", "random", "--n", "12", "--m", "20", "--seed", "2",
    ]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn prove_transcripts_and_verdicts() {
    let dir = TempDir::new().unwrap();
    let fano = dir.path().join("fano.txt");
    fisher(&[
        "generate",
        "projective-plane",
        "--q",
        "2",
        "--output",
        s(&fano),
    ]);

    let (c, v) = structured(&["prove", s(&fano), "--k", "1", "--tau", "1,-1,0,0,0,0,0"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "not_in_kernel");
    assert_eq!(v["chain"]["aggregation_identity_holds"], true);
    assert_eq!(v["chain"]["chain_valid"], false);

    let (c, v) = structured(&["prove", s(&fano), "--k", "1", "--max-coeff", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "no_kernel_vector");

    let out = fisher(&["prove", s(&fano), "--k", "1", "--tau", "0,0,0,0,0,0,1"]);
    let text = stdout(&out);
    let order = [
        "element sums",
        "size sum",
        "set equations",
        "coefficient sum",
        "final terms",
        "verdict",
    ];
    let pos: Vec<usize> = order.iter().map(|l| text.find(l).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");

    let sf = write(&dir, "sf.txt", "n=4\n1\n1 2\n1 3\n");
    let (c, v) = structured(&["prove", s(&sf), "--k", "1", "--tau", "1,0,0"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "small_set_present");

    let bad = write(&dir, "bad.txt", "n=2\n1\n2\n1 2\n");
    let (c, v) = structured(&["prove", s(&bad), "--k", "1", "--tau", "1,1,-1"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "hypothesis_violated");

    assert_eq!(
        code(&fisher(&["prove", s(&fano), "--k", "1", "--tau", "1,2"])),
        2
    );
    assert_eq!(
        code(&fisher(&[
            "prove",
            s(&fano),
            "--k",
            "0",
            "--tau",
            "1,0,0,0,0,0,0"
        ])),
        2
    );
    assert_eq!(
        code(&fisher(&["prove", s(&fano), "--k", "1", "--tau", "x"])),
        2
    );
}

#[test]
fn remaining_commands() {
    let dir = TempDir::new().unwrap();

    let (c, v) = structured(&["siegel", "--n", "2", "--m", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["h"], "7");
    let (_, v) = structured(&["siegel", "--n", "1", "--rows", "3"]);
    assert_eq!(v["table"][0]["h"], "1");
    assert_eq!(code(&fisher(&["siegel", "--n", "3", "--m", "3"])), 2);

    let (c, v) = structured(&["enumerate", "--n", "5", "--k", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["max_m"], 5);
    assert_eq!(
        code(&fisher(&[
            "enumerate",
            "--n",
            "7",
            "--k",
            "1",
            "--budget",
            "3"
        ])),
        3
    );
    assert_eq!(code(&fisher(&["enumerate", "--n", "9", "--k", "1"])), 2);

    let core = dir.path().join("core.txt");
    fisher(&[
        "generate",
        "sunflower",
        "--n",
        "7",
        "--k",
        "2",
        "--m",
        "6",
        "--core",
        "--output",
        s(&core),
    ]);
    let (c, v) = structured(&["reduce", s(&core), "--k", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["report"]["bound_holds"], true);
    assert_eq!(v["report"]["m"], 6);
    assert_eq!(code(&fisher(&["reduce", s(&core), "--k", "3"])), 1);

    let (c, v) = structured(&["beck-fiala", s(&core)]);
    assert_eq!(c, 0);
    let run = &v["run"];
    assert!(run["discrepancy"].as_u64().unwrap() <= run["bound"].as_u64().unwrap());
    assert_eq!(run["set_sums"].as_array().unwrap().len(), 6);

    let stars = dir.path().join("stars.txt");
    assert_eq!(
        code(&fisher(&[
            "graham-pollak",
            "stars",
            "5",
            "--output",
            s(&stars)
        ])),
        0
    );
    assert_eq!(code(&fisher(&["graham-pollak", "verify", s(&stars)])), 0);
    let short = write(&dir, "short.txt", "n=3\n1 | 2 3\n");
    assert_eq!(code(&fisher(&["graham-pollak", "verify", s(&short)])), 1);
    let (c, v) = structured(&["graham-pollak", "min", "4"]);
    assert_eq!(c, 0);
    assert_eq!(v["min_parts"], 3);
    assert_eq!(code(&fisher(&["graham-pollak", "min", "6"])), 2);

    assert_eq!(code(&fisher(&["verify", "/definitely/not/here"])), 2);
    assert_eq!(code(&fisher(&["frobnicate"])), 2);
}
