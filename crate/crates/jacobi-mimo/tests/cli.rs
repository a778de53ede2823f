use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi-mimo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn figure_one_sweep() {
    let out = run(&[
        "sweep",
        "--m",
        "32",
        "--pairs",
        "4:4,8:8",
        "--methods",
        "sum,cd",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("m,m_t,m_r,snr_db,sum,cd\n"));
    assert!(!csv.contains('\r'));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 62);
    // pair-major, SNR-minor
    assert_eq!(rows[0][..4], ["32", "4", "4", "0"]);
    assert_eq!(rows[30][..4], ["32", "4", "4", "30"]);
    assert_eq!(rows[31][..4], ["32", "8", "8", "0"]);
    for row in &rows {
        let sum: f64 = row[4].parse().unwrap();
        let cd: f64 = row[5].parse().unwrap();
        assert!((sum - cd).abs() <= 1e-9 * sum, "{row:?}");
    }
}

#[test]
fn full_unitary_single_point() {
    let out = run(&[
        "sweep",
        "--m",
        "4",
        "--pairs",
        "4:4",
        "--snr-db",
        "10",
        "--methods",
        "cd",
    ]);
    assert!(out.status.success());
    let rows = rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let c: f64 = rows[0][4].parse().unwrap();
    assert!((c - 4.0 * 11f64.log2()).abs() < 1e-9);
}

#[test]
fn more_unused_modes_lower_capacity() {
    let get = |m: &str| {
        rows(&stdout(&run(&[
            "sweep",
            "--m",
            m,
            "--pairs",
            "2:2,4:4,6:6",
        ])))
    };
    let (c16, c32) = (get("16"), get("32"));
    assert_eq!(c16.len(), c32.len());
    for (a, b) in c16.iter().zip(&c32) {
        assert!(
            b[4].parse::<f64>().unwrap() < a[4].parse::<f64>().unwrap(),
            "{a:?} {b:?}"
        );
    }
}

#[test]
fn invalid_pair_is_an_argument_error() {
    let out = run(&["sweep", "--m", "4", "--pairs", "2:2,5:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5:1"));
    assert!(out.stdout.is_empty());

    let out = run(&["sweep", "--m", "4", "--pairs", "1:1", "--methods", "magic"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--m", "4", "--pairs", "1:1", "--snr-db", "10:0:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = run(&[
        "sweep",
        "--m",
        "4",
        "--pairs",
        "1:1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--m",
        "8",
        "--pairs",
        "2:3,5:5",
        "--methods",
        "cd,lb,lowsnr,mc",
        "--samples",
        "2000",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("m,m_t,m_r,snr_db,cd,lb,lowsnr,mc,mc_stderr\n"));
}

#[test]
fn file_output_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let args = [
        "sweep", "--m", "16", "--pairs", "3:5", "--snr-db", "0:10:2.5",
    ];
    let to_stdout = run(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--out", path.to_str().unwrap()]);
    let to_file = run(&with_file);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    assert_eq!(rows(&stdout(&to_stdout)).len(), 5);
}

#[test]
fn validate_reflected_and_full_unitary() {
    let out = run(&[
        "validate",
        "--m",
        "3",
        "--pairs",
        "2:2",
        "--snr-db",
        "10",
        "--samples",
        "20000",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert!(rows[0][7].parse::<f64>().unwrap().abs() <= 5.0);

    let out = run(&["validate", "--m", "4", "--pairs", "4:4", "--samples", "50"]);
    assert!(out.status.success());
    for row in rows_of(&out) {
        let (analytic, mean): (f64, f64) = (row[4].parse().unwrap(), row[5].parse().unwrap());
        assert!((analytic - mean).abs() < 1e-9);
        assert_eq!(row[7], "0");
    }
}

fn rows_of(out: &Output) -> Vec<Vec<String>> {
    rows(&stdout(out))
}

#[test]
fn validate_with_minimal_sample_counts() {
    // two draws of an 8-mode channel: the standard error is a poor estimate,
    // but the run must still complete with a defined status
    let out = run(&[
        "validate",
        "--m",
        "8",
        "--pairs",
        "1:1",
        "--snr-db",
        "20",
        "--samples",
        "2",
        "--seed",
        "3",
    ]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
    let out = run(&["validate", "--m", "8", "--pairs", "1:1", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_reports_both_forms() {
    let out = run(&[
        "bench",
        "--m",
        "32",
        "--pairs",
        "16:16,1:1",
        "--snr-db",
        "0:30:10",
        "--reps",
        "3",
    ]);
    assert!(out.status.success());
    let rows = rows_of(&out);
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(row.len(), 10);
        assert_eq!(row[4], "12");
        assert_eq!(row[8], row[9]);
    }
}

#[test]
fn density_histogram() {
    let out = run(&[
        "density",
        "--m",
        "2",
        "--pairs",
        "1:1",
        "--samples",
        "5000",
        "--bins",
        "5",
    ]);
    assert!(out.status.success());
    let rows = rows_of(&out);
    assert_eq!(rows.len(), 5);
    let total: u64 = rows.iter().map(|r| r[5].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 5000);
    for row in &rows {
        assert!((row[7].parse::<f64>().unwrap() - 0.2).abs() < 1e-12);
    }
}
