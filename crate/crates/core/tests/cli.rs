use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropy-scaling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let idx = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .unwrap();
    reader
        .records()
        .filter_map(|r| r.unwrap()[idx].parse().ok())
        .collect()
}

#[test]
fn fermi_gas_csv() {
    let text = stdout(&[
        "fermi-gas",
        "--nu",
        "2",
        "--n",
        "1,10,100",
        "--format",
        "csv",
    ]);
    let s = csv_column(&text, "s_total");
    for (got, want) in s.iter().zip([4.820, 7.123, 9.426]) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn force_csv() {
    let text = stdout(&[
        "force", "--b", "1", "--lambda", "8.37758", "--r", "1", "--format", "csv",
    ]);
    assert!((csv_column(&text, "force")[0] + 1.0).abs() < 1e-5);
}

#[test]
fn runs_are_byte_identical() {
    let args = [
        "cluster-scan",
        "--n",
        "8,2,20",
        "--fit",
        "--jobs",
        "3",
        "--format",
        "csv",
    ];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    assert_eq!(
        first,
        stdout(&[
            "cluster-scan",
            "--n",
            "2,8,20",
            "--fit",
            "--jobs",
            "1",
            "--format",
            "csv"
        ])
    );
    assert_eq!(csv_column(&first, "n")[..3], [2.0, 8.0, 20.0]);
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let args = ["bose-cell", "--occupancy", "1e-2,1e-4"];
    let csv_text = stdout(&[&args[..], &["--format", "csv"]].concat());
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&[&args[..], &["--format", "json"]].concat())).unwrap();
    let rows = json.as_array().unwrap();
    for name in ["occupancy", "entropy", "force", "ratio"] {
        let from_csv = csv_column(&csv_text, name);
        let from_json: Vec<f64> = rows.iter().map(|r| r[name].as_f64().unwrap()).collect();
        assert_eq!(from_csv, from_json, "{name}");
    }
}

#[test]
fn scientific_particle_numbers() {
    let text = stdout(&["gp", "--n", "1e3", "--format", "csv"]);
    assert_eq!(csv_column(&text, "n"), [1000.0]);
    let out = bin(&["gp", "--n", "2.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let out = dir.path().join("out.json");
    std::fs::write(&conf, "# ideal gas\nnu = 4\nn = 1, 10\n").unwrap();
    let printed = stdout(&[
        "fermi-gas",
        "--config",
        conf.to_str().unwrap(),
        "--n",
        "1",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(printed.is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0]["s_total"].as_f64().unwrap() - 4.127).abs() < 1e-3);
}

#[test]
fn exit_statuses() {
    assert_eq!(bin(&["fermi-gas", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bin(&["fermi-gas", "--n", "ten"]).status.code(), Some(2));
    let out = bin(&["fermi-gas", "--nu", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        bin(&["gp", "--n", "100", "--scattering-length", "-5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bin(&["classical", "--output", "/nonexistent-dir/a/b.csv"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn help_lists_subcommands_and_flags() {
    let top = stdout(&["--help"]);
    for sub in [
        "fermi-gas",
        "classical",
        "cluster",
        "cluster-scan",
        "gp",
        "gp-scan",
        "fit",
        "force",
        "bose-cell",
        "fermi-cell",
    ] {
        assert!(top.contains(sub), "{sub}");
    }
    let help = stdout(&["gp-scan", "--help"]);
    for flag in [
        "--n",
        "--fit",
        "--jobs",
        "--format",
        "--output",
        "--config",
        "--trap-length",
    ] {
        assert!(help.contains(flag), "{flag}");
    }
}
