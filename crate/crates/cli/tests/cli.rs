use std::path::Path;
use std::process::{Command, Output};

fn ncstate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncstate")).args(args).env_remove("NCSTATE_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

const SMALL: [&str; 6] = ["--eta-points", "11", "--tau-points", "21", "--grid-points", "9"];

#[test]
fn figures_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [a.path(), b.path()] {
        let mut args = vec!["figure", "all", "--out", dir.to_str().unwrap()];
        args.extend(SMALL);
        let o = ncstate(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().count(), 45);
    }
    let (la, lb) = (listing(a.path()), listing(b.path()));
    assert_eq!(la.len(), 45);
    assert!(la.iter().all(|(name, _)| name.ends_with(".csv")), "no temporary files left behind");
    assert_eq!(la, lb);
}

#[test]
fn fig1_schema_and_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncstate(&["figure", "fig1", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,q_m2,q_m50,q_m100,q_binomial"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 401);
    assert_eq!(rows[400][0], 1.0);
    for r in &rows {
        assert_eq!(r[4], -r[0]);
        assert!(r[1..4].iter().all(|&q| (-1.0..0.0).contains(&q)));
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["figure", "fig6"];
    args.extend(SMALL);
    let o =
        Command::new(env!("CARGO_BIN_EXE_ncstate")).args(&args).env("NCSTATE_OUT_DIR", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert_eq!(listing(dir.path()).len(), 4);

    let o = Command::new(env!("CARGO_BIN_EXE_ncstate"))
        .args(["stats", "--eta", "0.5", "--m", "2", "--out", "nested/stats.csv"])
        .env("NCSTATE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("nested/stats.csv").is_file());
}

#[test]
fn stats_closed_and_direct_agree() {
    let closed = stdout(&ncstate(&["stats", "--eta", "0.3", "--m", "6"]));
    let direct = stdout(&ncstate(&["stats", "--eta", "0.3", "--m", "6", "--dim", "12"]));
    let row = |s: &str| -> Vec<f64> { s.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect() };
    assert_eq!(closed.lines().next(), direct.lines().next());
    for (a, b) in row(&closed).iter().zip(row(&direct)) {
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn phase_space_commands_honor_grid() {
    for cmd in ["qfunc", "wigner"] {
        let o = ncstate(&[cmd, "--eta", "0.5", "--m", "3", "--grid", "-2,2,-1,1,4,3"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert_eq!(text.lines().count(), 1 + 12);
        assert!(text.starts_with("x,y,"));
    }
    let o = ncstate(&[
        "jcm",
        "--eta",
        "0.8",
        "--m",
        "4",
        "--tau",
        "0,0.5",
        "--quantity",
        "qfunction",
        "--grid",
        "-3,3,-3,3,5,5",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1 + 50);
}

#[test]
fn jcm_and_generate_outputs() {
    let o = ncstate(&["jcm", "--eta", "0.999", "--m", "4", "--tau-points", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("tau,inversion,entropy,rho11,rho22,rho12_re,rho12_im\n"));
    assert_eq!(text.lines().count(), 6);

    let o = ncstate(&["jcm", "--eta", "0.5", "--m", "3", "--tau", "1.0", "--quantity", "distribution"]);
    let total: f64 = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let o = ncstate(&["generate"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("A_over_omega,predicted_eta,fidelity,detection_probability\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn validation_errors_exit_with_one() {
    let cases: [&[&str]; 7] = [
        &["stats", "--eta", "1.5", "--m", "3"],
        &["stats", "--eta", "0.5", "--m", "3", "--colour", "red"],
        &["qfunc", "--eta", "0.5", "--m", "3", "--grid", "1,2,3"],
        &["qfunc", "--eta", "0.5", "--m", "3", "--grid", "2,1,0,1,5,5"],
        &["figure", "fig10"],
        &["jcm", "--eta", "0.5", "--m", "3"],
        &["jcm", "--eta", "0.5", "--m", "3", "--tau", "1", "--delta", "0.2", "--quantity", "distribution"],
    ];
    for args in cases {
        let o = ncstate(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numerical_failures_exit_with_two() {
    // direct quadratures need two empty levels above the support
    let o = ncstate(&["stats", "--eta", "0.5", "--m", "3", "--dim", "4"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn selftest_reports_and_detects_faults() {
    let o = ncstate(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 10);
    assert!(text.lines().all(|l| !l.starts_with("PASS") || l.contains(" ms ")));

    let o = ncstate(&["selftest", "--inject-lambda-sign-fault"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].contains("eigen_residual"));
}

#[test]
fn help_exits_cleanly() {
    let o = ncstate(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in ["state", "stats", "qfunc", "wigner", "jcm", "generate", "figure", "selftest"] {
        assert!(stdout(&o).contains(cmd), "{cmd}");
    }
}
