//! Command-line surface: flag parsing, config precedence, file formats.

use std::path::Path;

use hubbard_greens::cli::{self, Command};
use hubbard_greens::run::{PoleTable, RunRecord, SEED_ENV_VAR};

fn parse(argv: &[&str]) -> cli::Cli {
    let mut full = vec!["hubbard-greens"];
    full.extend_from_slice(argv);
    cli::try_parse_from(full).expect("argv parses")
}

fn run_exact(dir: &Path, extra: &[&str]) {
    let out = dir.to_str().unwrap().to_string();
    let mut argv = vec!["exact"];
    argv.extend_from_slice(extra);
    argv.extend_from_slice(&["--out-dir", &out]);
    match parse(&argv).command {
        Command::Exact(args) => cli::cmd_exact(&args).unwrap(),
        _ => unreachable!(),
    }
}

#[test]
fn exact_writes_csv_and_pole_json() {
    let dir = tempfile::tempdir().unwrap();
    run_exact(dir.path(), &["--t", "1", "--U", "6"]);

    let csv = std::fs::read_to_string(dir.path().join("exact_spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "omega,A_k0,A_kpi");
    assert_eq!(lines.count(), 2001); // default grid size

    let table: PoleTable = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("exact_poles.json")).unwrap(),
    )
    .unwrap();
    assert!((table.ground_energy + 6.605_551_275_463_989).abs() < 1e-10);
    assert_eq!(table.poles.len(), 8);
}

#[test]
fn exact_momentum_filter_and_grid_flags() {
    let dir = tempfile::tempdir().unwrap();
    run_exact(
        dir.path(),
        &[
            "--k",
            "pi",
            "--grid-min",
            "-5",
            "--grid-max",
            "5",
            "--grid-points",
            "101",
        ],
    );
    let csv = std::fs::read_to_string(dir.path().join("exact_spectrum.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 101);
    for row in rows {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[1], 0.0); // k=0 column empty under the filter
    }
}

#[test]
fn scientific_notation_in_numeric_flags() {
    let dir = tempfile::tempdir().unwrap();
    run_exact(
        dir.path(),
        &["--grid-points", "2e2", "--eta", "1e-1", "--U", "6e0"],
    );
    let csv = std::fs::read_to_string(dir.path().join("exact_spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn invalid_flags_are_rejected() {
    // unknown preset
    let cli = parse(&["vqe", "--sector", "ground", "--init", "preset9", "--exact"]);
    match cli.command {
        Command::Vqe(args) => assert!(cli::cmd_vqe(&args).is_err()),
        _ => unreachable!(),
    }
    // bad sector
    let cli = parse(&["vqe", "--sector", "sideways", "--exact"]);
    match cli.command {
        Command::Vqe(args) => assert!(cli::cmd_vqe(&args).is_err()),
        _ => unreachable!(),
    }
    // bad momentum
    let cli = parse(&["exact", "--k", "2"]);
    match cli.command {
        Command::Exact(args) => assert!(cli::cmd_exact(&args).is_err()),
        _ => unreachable!(),
    }
    // eta must be positive
    let cli = parse(&["exact", "--eta", "-0.5"]);
    match cli.command {
        Command::Exact(args) => assert!(cli::cmd_exact(&args).is_err()),
        _ => unreachable!(),
    }
    // unparseable count flag fails at the clap layer
    assert!(cli::try_parse_from(["hubbard-greens", "exact", "--grid-points", "many"]).is_err());
}

#[test]
fn vqe_exact_matches_reference_energies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&[
        "vqe",
        "--sector",
        "ground",
        "--init",
        "preset1",
        "--exact",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Vqe(args) => cli::cmd_vqe(&args).unwrap(),
        _ => unreachable!(),
    }
    let record: RunRecord =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("vqe_run.json")).unwrap())
            .unwrap();
    let trace = record.ground.expect("ground trace");
    assert!((trace.final_energy.value + 6.605_551_275_463_989).abs() < 1e-6);
    assert!(trace.converged);

    // trace CSV: header plus sweep 0 and one row per sweep
    let csv = std::fs::read_to_string(dir.path().join("vqe_trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep,theta2,theta4,theta5,theta6,energy,stderr"
    );
    assert_eq!(lines.count(), trace.sweeps_run + 1);

    // excited run from preset2 converges within three sweeps
    let cli = parse(&[
        "vqe",
        "--sector",
        "excited",
        "--init",
        "preset2",
        "--exact",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Vqe(args) => cli::cmd_vqe(&args).unwrap(),
        _ => unreachable!(),
    }
    let record: RunRecord =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("vqe_run.json")).unwrap())
            .unwrap();
    let trace = record.ground.expect("trace");
    assert!(trace.converged);
    assert!(trace.sweeps_run <= 3);
    assert!((trace.final_energy.value + 4.0).abs() < 1e-6);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"grid_points": 51, "u": 4.0}"#).unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cfg_str = config.to_str().unwrap().to_string();

    // file value used when no flag
    let cli = parse(&["exact", "--config", &cfg_str, "--out-dir", &out]);
    match cli.command {
        Command::Exact(args) => cli::cmd_exact(&args).unwrap(),
        _ => unreachable!(),
    }
    let csv = std::fs::read_to_string(dir.path().join("exact_spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 52);

    // flag overrides file
    let cli = parse(&[
        "exact",
        "--config",
        &cfg_str,
        "--grid-points",
        "11",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Exact(args) => cli::cmd_exact(&args).unwrap(),
        _ => unreachable!(),
    }
    let csv = std::fs::read_to_string(dir.path().join("exact_spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn seed_env_fallback() {
    // process-global env var: this test owns it, no other test reads it
    std::env::set_var(SEED_ENV_VAR, "12345");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&[
        "vqe",
        "--sector",
        "excited",
        "--init",
        "preset1",
        "--shots",
        "100",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Vqe(args) => cli::cmd_vqe(&args).unwrap(),
        _ => unreachable!(),
    }
    let record: RunRecord =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("vqe_run.json")).unwrap())
            .unwrap();
    assert_eq!(record.config.seed, 12345);
    std::env::remove_var(SEED_ENV_VAR);
}

#[test]
fn run_record_json_round_trips_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&[
        "spectrum",
        "--shots",
        "1000",
        "--seed",
        "11",
        "--grid-points",
        "101",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Spectrum(args) => {
            cli::cmd_spectrum(&args).unwrap();
        }
        _ => unreachable!(),
    }
    let text = std::fs::read_to_string(dir.path().join("run_record.json")).unwrap();
    let record: RunRecord = serde_json::from_str(&text).unwrap();
    let mut reserialized = serde_json::to_string_pretty(&record).unwrap();
    reserialized.push('\n');
    assert_eq!(text, reserialized);
    assert!(record.spectrum.is_some());
    assert_eq!(record.poles.len(), 4);
}

#[test]
fn spectrum_mirror_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&[
        "spectrum",
        "--exact",
        "--hole-method",
        "mirror",
        "--grid-points",
        "201",
        "--out-dir",
        &out,
    ]);
    let report = match cli.command {
        Command::Spectrum(args) => cli::cmd_spectrum(&args).unwrap(),
        _ => unreachable!(),
    };
    assert!(report.deviation_over_peak <= 1e-8);
}

#[test]
fn validate_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&["validate", "--out-dir", &out]);
    let passed = match cli.command {
        Command::Validate(args) => cli::cmd_validate(&args).unwrap(),
        _ => unreachable!(),
    };
    assert!(passed);
    let report: cli::ValidationReport = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("validate_report.json")).unwrap(),
    )
    .unwrap();
    assert!(report.all_passed());
    assert_eq!(report.hole_offdiag_sign, -1.0);
    assert_eq!(report.printed_offdiag_sign, 1.0);
}

#[test]
fn run_record_replays_to_identical_poles() {
    use hubbard_greens::greens::{run_pipeline, HoleMethod, PipelineConfig};

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap().to_string();
    let cli = parse(&[
        "spectrum",
        "--shots",
        "3000",
        "--seed",
        "21",
        "--grid-points",
        "51",
        "--out-dir",
        &out,
    ]);
    match cli.command {
        Command::Spectrum(args) => {
            cli::cmd_spectrum(&args).unwrap();
        }
        _ => unreachable!(),
    }
    let record: RunRecord =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run_record.json")).unwrap())
            .unwrap();

    // rebuild the pipeline from the recorded config snapshot alone
    let cfg = PipelineConfig {
        t: record.config.t,
        u: record.config.u,
        shots: record.config.shots_enum(),
        seed: record.config.seed,
        convergence_rel_tol: record.config.tol,
        max_sweeps: record.config.max_sweeps,
        param_change_tol: record.config.param_tol,
        initial: record.config.initial_angles().unwrap(),
    };
    let replay = run_pipeline(&cfg, HoleMethod::Direct).unwrap();
    assert_eq!(replay.poles.len(), record.poles.len());
    for (a, b) in replay.poles.iter().zip(&record.poles) {
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.weight.to_bits(), b.weight.to_bits());
        assert_eq!(a.weight_stderr.to_bits(), b.weight_stderr.to_bits());
    }
    assert_eq!(
        replay.ground.final_energy.value.to_bits(),
        record.ground.unwrap().final_energy.value.to_bits()
    );
}
