use std::fs;
use std::path::Path;
use std::process::Command;

use qes_cli::{run_from, EXIT_CONFIG, EXIT_IO, EXIT_MODEL, EXIT_OK, EXIT_VERIFY};
use qes_core::RationalFunction;
use serde::Deserialize;

fn qes(args: &[&str]) -> qes_cli::Output {
    run_from(std::iter::once("qes").chain(args.iter().copied()))
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn exit_code_contract() {
    assert_eq!(
        qes(&["analyze", "--builtin", "example1", "--param", "2"]).code,
        EXIT_OK
    );
    assert_eq!(qes(&["analyze"]).code, EXIT_CONFIG);
    assert_eq!(
        qes(&["analyze", "--builtin", "example1", "--param", "0.5"]).code,
        EXIT_CONFIG
    );
    assert_eq!(
        qes(&["analyze", "--config", "/nonexistent/job.toml"]).code,
        EXIT_CONFIG
    );
    assert_eq!(qes(&["frobnicate"]).code, EXIT_CONFIG);

    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.toml");
    fs::write(
        &job,
        "[generator]\nnumerator = [\"0\", \"-1\", \"0\", \"1\"]\n",
    )
    .unwrap();
    let out = qes(&["analyze", "--config", job.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_MODEL);
    assert!(out.message.unwrap().contains("inconsistent epsilon"));

    fs::write(
        &job,
        "[generator]\nnumerator = [\"-2\", \"0\", \"1\"]\ndenominator = [\"0\", \"1\"]\n",
    )
    .unwrap();
    assert_eq!(
        qes(&["construct", "--config", job.to_str().unwrap()]).code,
        EXIT_MODEL
    );

    // a builtin on top of a config generator is ambiguous
    fs::write(&job, "[generator]\nbuiltin = \"trivial\"\n").unwrap();
    assert_eq!(
        qes(&[
            "analyze",
            "--config",
            job.to_str().unwrap(),
            "--builtin",
            "trivial"
        ])
        .code,
        EXIT_CONFIG
    );

    let strict = qes(&[
        "spectrum",
        "--builtin",
        "example1",
        "--param",
        "2",
        "--tolerance",
        "1/1000000000",
    ]);
    assert_eq!(strict.code, EXIT_VERIFY);
    assert!(strict.message.unwrap().contains("discrepancy"));

    let blocked = dir.path().join("file");
    fs::write(&blocked, "").unwrap();
    let out = qes(&[
        "export",
        "--builtin",
        "trivial",
        "--out",
        blocked.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_IO);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qes");
    let ok = Command::new(bin)
        .args(["analyze", "--builtin", "trivial"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.starts_with("# qes analyze report\n# convention: H = -1/2 d^2/dx^2 + V(x)"));
    let bad = Command::new(bin)
        .args(["analyze", "--builtin", "example2", "--param", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
    assert!(!bad.stderr.is_empty());
}

#[derive(Deserialize)]
struct Constructed {
    w: RationalFunction,
    w1: RationalFunction,
}

fn without_source(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("source ="))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn construct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, params) in [
        ("example1", vec!["2"]),
        ("example2", vec!["2"]),
        ("trivial", vec![]),
        ("example1", vec!["1"]),
    ] {
        let mut args = vec!["construct", "--builtin", name];
        for p in &params {
            args.extend(["--param", p]);
        }
        let first = qes(&args);
        assert_eq!(first.code, EXIT_OK);
        let c: Constructed = toml::from_str(&first.report).unwrap();
        let wplus = &c.w + &c.w1;
        let job = dir.path().join(format!("{name}.toml"));
        let quote = |p: &qes_core::Polynomial| {
            qes_core::ratfun::text::polynomial_to_strings(p)
                .iter()
                .map(|s| format!("\"{s}\""))
                .collect::<Vec<_>>()
                .join(", ")
        };
        fs::write(
            &job,
            format!(
                "[generator]\nnumerator = [{}]\ndenominator = [{}]\n",
                quote(wplus.numerator()),
                quote(wplus.denominator())
            ),
        )
        .unwrap();
        let second = qes(&["construct", "--config", job.to_str().unwrap()]);
        assert_eq!(second.code, EXIT_OK, "{:?}", second.message);
        assert_eq!(
            without_source(&first.report),
            without_source(&second.report),
            "{name}"
        );
    }
}

#[test]
fn construct_flags_the_harmonic_limit() {
    let out = qes(&["construct", "--builtin", "example1", "--param", "1"]);
    assert!(out.report.contains("harmonic_degeneration = true"));
    assert!(out
        .report
        .contains("[v_minus]\nnumerator = [\"-3/4\", \"0\", \"1/8\"]\ndenominator = [\"1\"]"));
    let out = qes(&["construct", "--builtin", "trivial"]);
    assert!(out.report.contains("[w]\nnumerator = [\"0\", \"1/2\"]"));
    assert!(out.report.contains("[w1]\nnumerator = [\"0\", \"1/2\"]"));
    let out = qes(&["construct", "--builtin", "example2", "--param", "2"]);
    assert!(out.report.contains("harmonic_degeneration = false"));
}

#[test]
fn export_example1_is_odd_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.toml");
    fs::write(
        &job,
        "[generator]\nbuiltin = \"example1\"\nparams = [\"2\"]\n[grid]\nhalf_width = 6\npoints = 1201\n",
    )
    .unwrap();
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = qes(&[
            "export",
            "--config",
            job.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.code, EXIT_OK, "{:?}", out.message);
        out_dir
    };
    let a = run("a");
    let b = run("b");
    for f in [
        "potential.csv",
        "wavefunctions.csv",
        "eigvec_zero.csv",
        "eigvec_epsilon.csv",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let (header, rows) = read_csv(&a.join("wavefunctions.csv"));
    assert_eq!(
        header,
        ["x", "psi0", "psi_eps", "psi0_numeric", "psi_eps_numeric"]
    );
    assert_eq!(rows.len(), 1201);
    for i in 0..rows.len() {
        let j = rows.len() - 1 - i;
        assert_eq!(rows[i][0], -rows[j][0]);
        assert!((rows[i][1] + rows[j][1]).abs() <= 1e-10, "row {i}");
        assert!((rows[i][2] - rows[j][2]).abs() <= 1e-10, "row {i}");
        assert!((rows[i][1] - rows[i][3]).abs() <= 5e-4);
        assert!((rows[i][2] - rows[i][4]).abs() <= 5e-4);
    }
    let (header, _) = read_csv(&a.join("eigvec_zero.csv"));
    assert_eq!(header, ["x", "psi_numeric", "psi_analytic", "abs_diff"]);
}

#[test]
fn export_trivial_matches_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let out = qes(&[
        "export",
        "--builtin",
        "trivial",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK);
    let (_, rows) = read_csv(&dir.path().join("wavefunctions.csv"));
    for r in &rows {
        assert!((r[1] - (-r[0] * r[0] / 4.0).exp()).abs() <= 1e-8, "{r:?}");
    }
    let (_, pot) = read_csv(&dir.path().join("potential.csv"));
    for r in &pot {
        assert!((r[1] - (r[0] * r[0] / 8.0 - 0.25)).abs() <= 1e-9 * r[1].abs().max(1.0));
    }
}
