use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbit-density"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad json line {l:?}: {e}")))
        .collect()
}

#[test]
fn finite_scan_is_deterministic_and_clean() {
    let args = [
        "--format",
        "json",
        "finite-scan",
        "--n-max",
        "3",
        "--windows",
        "3",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let lines = json_lines(&a);
    let summary = lines.last().unwrap();
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["cases"].as_u64().unwrap() as usize, lines.len() - 1);
}

#[test]
fn finite_scan_csv_has_header_and_stderr_summary() {
    let out = run(&["--format", "csv", "finite-scan", "--n-max", "2", "--windows", "1"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "n");
    assert!(header.iter().any(|h| h == "verdict_i"));
    assert!(reader.records().count() > 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("violations=0"));
}

#[test]
fn ball_matches_integer_enumeration() {
    let out = run(&["--format", "json", "ball", "--norm", "2"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["size"], 10);
    assert_eq!(summary["oracle_equal"], true);
}

#[test]
fn stabilizer_orders_at_elliptic_points() {
    for (z, order) in [("i", 2), ("0.5+0.8660254037844386i", 3), ("2i", 1)] {
        let out = run(&["--format", "json", "stabilizer", "--z", z, "--ball", "4"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let summary = json_lines(&out).pop().unwrap();
        assert_eq!(summary["order"], order, "z = {z}");
        assert_eq!(summary["kernel_order"], order, "z = {z}");
    }
}

#[test]
fn formal_degree_is_reproducible() {
    let args = ["--format", "json", "formal-degree", "--alpha", "2", "--grid", "100x4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let value = json_lines(&a).pop().unwrap()["formal_degree"].as_f64().unwrap();
    assert!(value > 0.07 && value < 0.09);
}

#[test]
fn tight_tolerance_is_a_numerical_failure() {
    let out = run(&["formal-degree", "--alpha", "2", "--grid", "20x2", "--tolerance", "1e-9"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&run(&["finite-scan", "--n-max", "0"])), 2);
    assert_eq!(code(&run(&["ball", "--norm", "1.41"])), 2);
    assert_eq!(code(&run(&["formal-degree", "--alpha", "0.5"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["stabilizer", "--z", "1-2i"])), 2);
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = std::env::temp_dir().join(format!("orbit-density-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("good.conf");
    let mut f = std::fs::File::create(&good).unwrap();
    writeln!(f, "# scan settings\nformat = json\nn_max = 2\nwindows = 1\nseed = 4").unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "finite-scan"]);
    assert_eq!(code(&out), 0);
    let summary = json_lines(&out).pop().unwrap();
    assert_eq!(summary["n_max"], 2);
    assert_eq!(summary["seed"], 4);

    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "n_maxx = 2\n").unwrap();
    assert_eq!(code(&run(&["--config", bad.to_str().unwrap(), "finite-scan"])), 2);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bergman_density_reports_frame_consistency() {
    let out = run(&[
        "--format",
        "json",
        "bergman-density",
        "--alpha",
        "2",
        "--z",
        "i",
        "--ball",
        "4",
        "--probes",
        "24",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 4);
    let summary = lines.last().unwrap();
    let density = summary["density_product"].as_f64().unwrap();
    assert!((density * 12.0 - 1.0).abs() < 0.02);
    assert_eq!(summary["stab_order"], 2);
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let json = run(&["--format", "json", "ball", "--norm", "5"]);
    let csv_out = run(&["--format", "csv", "ball", "--norm", "5"]);
    assert_eq!(code(&json), 0);
    assert_eq!(code(&csv_out), 0);
    let mut records = json_lines(&json);
    records.pop();
    let mut reader = csv::Reader::from_reader(&csv_out.stdout[..]);
    let header = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        for (key, field) in header.iter().zip(row.iter()) {
            let a: f64 = field.parse().unwrap();
            let b = rec[key].as_f64().unwrap();
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0), "{key}: {a} vs {b}");
        }
    }
}
