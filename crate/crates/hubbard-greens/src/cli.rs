//! Command-line entry points: `exact`, `vqe`, `spectrum`, `validate`.
//!
//! Each subcommand is a thin function over the library so the same paths are
//! exercised by integration tests. Config precedence is flags over an
//! optional JSON config file over built-in defaults; the seed additionally
//! falls back to the HUBBARD_GREENS_SEED environment variable.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Momentum;
use crate::greens::{
    self, pipeline_spectrum, run_pipeline, stream_rng, uniform_grid, HoleMethod, PipelineConfig,
};
use crate::model::SectorKind;
use crate::oracle;
use crate::photonic::{verify_element_layout, AnsatzParams};
use crate::run::{
    write_json, write_spectrum_csv, write_trace_csv, ConfigOverlay, DeviationReport, PoleTable,
    RunConfig, RunRecord, WallClock,
};
use crate::vqe::{run_vqe, VqeConfig, VqeSector};

#[derive(Parser, Debug)]
#[command(
    name = "hubbard-greens",
    version,
    about = "Spectral function of the two-site Hubbard model via a simulated photonic VQE, \
             with an exact-diagonalization oracle. All energies are in units of t."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact-diagonalization spectral function and pole table (the oracle)
    Exact(ExactArgs),
    /// One variational eigensolver run (ground or excited sector)
    Vqe(VqeArgs),
    /// Full measurement pipeline: VQE, transition amplitudes, spectrum,
    /// side-by-side oracle comparison
    Spectrum(SpectrumArgs),
    /// Internal consistency battery; exit code 0 iff every check passes
    Validate(ValidateArgs),
}

fn parse_count(text: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    // scientific notation accepted for all numeric flags
    let f = text.parse::<f64>().map_err(|e| e.to_string())?;
    if f < 0.0 || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(format!("expected a non-negative integer, got {text:?}"));
    }
    Ok(f as u64)
}

/// Flags shared by every subcommand. Units of t throughout.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Hopping amplitude t (> 0); the energy unit of all outputs
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// On-site repulsion U (>= 0)
    #[arg(long = "U", allow_negative_numbers = true)]
    pub u: Option<f64>,
    /// Lorentzian broadening eta (> 0)
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Lower edge of the omega grid
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    /// Upper edge of the omega grid
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    /// Number of omega grid points
    #[arg(long, value_parser = |s: &str| parse_count(s).map(|v| v as usize))]
    pub grid_points: Option<usize>,
    /// Shots per measurement setting
    #[arg(long, value_parser = parse_count)]
    pub shots: Option<u64>,
    /// Exact expectation values instead of shot sampling
    #[arg(long)]
    pub exact: bool,
    /// Master seed; every stage derives its own RNG stream from it
    #[arg(long, value_parser = parse_count)]
    pub seed: Option<u64>,
    /// Initial angles: preset1..preset4 or four comma-separated values
    #[arg(long, allow_hyphen_values = true)]
    pub init: Option<String>,
    /// Relative sweep-to-sweep convergence tolerance
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Sweep budget per optimizer run
    #[arg(long)]
    pub max_sweeps: Option<usize>,
    /// Also require per-sweep angle changes below this value to converge
    #[arg(long, allow_negative_numbers = true)]
    pub param_tol: Option<f64>,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// JSON config file; explicit flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            t: self.t,
            u: self.u,
            shots: self.shots,
            exact: if self.exact { Some(true) } else { None },
            eta: self.eta,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_points: self.grid_points,
            seed: self.seed,
            init: self.init.clone(),
            tol: self.tol,
            max_sweeps: self.max_sweeps,
            param_tol: self.param_tol,
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        RunConfig::resolve(self.config.as_deref(), &self.overlay())
    }

    /// Resolve, then let exact-mode optimizer runs use the tight default
    /// tolerance unless one was given explicitly.
    pub fn resolve_for_optimizer(&self) -> Result<RunConfig> {
        let mut cfg = self.resolve()?;
        let merged = crate::run::merge_overlays(self.config.as_deref(), &self.overlay())?;
        cfg.tighten_for_exact(&merged);
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Restrict to one momentum: 0 or pi (default: both)
    #[arg(long)]
    pub k: Option<String>,
}

#[derive(Args, Debug)]
pub struct VqeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// ground | excited
    #[arg(long)]
    pub sector: String,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Hole-part method: direct (own VQE run) or mirror (particle-hole map)
    #[arg(long, default_value = "direct")]
    pub hole_method: String,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_momentum(text: &str) -> Result<Momentum> {
    match text.trim().to_ascii_lowercase().as_str() {
        "0" => Ok(Momentum::Zero),
        "pi" | "3.141592653589793" => Ok(Momentum::Pi),
        other => Err(Error::InvalidParameter(format!(
            "k must be 0 or pi, got {other:?}"
        ))),
    }
}

fn parse_sector(text: &str) -> Result<VqeSector> {
    match text.trim().to_ascii_lowercase().as_str() {
        "ground" => Ok(VqeSector::Ground),
        "excited" => Ok(VqeSector::Excited),
        other => Err(Error::InvalidParameter(format!(
            "sector must be ground or excited, got {other:?}"
        ))),
    }
}

fn parse_hole_method(text: &str) -> Result<HoleMethod> {
    match text.trim().to_ascii_lowercase().as_str() {
        "direct" => Ok(HoleMethod::Direct),
        "mirror" => Ok(HoleMethod::Mirror),
        other => Err(Error::InvalidParameter(format!(
            "hole-method must be direct or mirror, got {other:?}"
        ))),
    }
}

/// Oracle spectrum + pole table -> exact_spectrum.csv, exact_poles.json.
pub fn cmd_exact(args: &ExactArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let (wall, timer) = WallClock::start();
    let k = args.k.as_deref().map(parse_momentum).transpose()?;
    let grid = uniform_grid(cfg.grid_min, cfg.grid_max, cfg.grid_points)?;
    let series = oracle::exact_spectral_function(cfg.t, cfg.u, k, &grid, cfg.eta)?;
    let table = PoleTable {
        t: cfg.t,
        u: cfg.u,
        eta: cfg.eta,
        ground_energy: series.ground_energy,
        poles: series.poles.clone(),
    };
    let csv_path = args.common.out_dir.join("exact_spectrum.csv");
    let json_path = args.common.out_dir.join("exact_poles.json");
    write_spectrum_csv(&csv_path, &series)?;
    write_json(&json_path, &table)?;
    println!(
        "exact: E_GS = {:.6} t, {} poles, {} grid points -> {}, {} ({} ms)",
        series.ground_energy,
        series.poles.len(),
        series.omega.len(),
        csv_path.display(),
        json_path.display(),
        timer.elapsed().as_millis().max(wall.elapsed_ms),
    );
    Ok(())
}

/// One VQE run -> vqe_trace.csv, vqe_run.json.
pub fn cmd_vqe(args: &VqeArgs) -> Result<()> {
    let cfg = args.common.resolve_for_optimizer()?;
    let (mut wall, timer) = WallClock::start();
    let sector = parse_sector(&args.sector)?;
    let init = cfg.initial_angles()?;
    let initial = AnsatzParams::new(0.0, init[0], init[1], init[2], init[3])?;
    let mut vqe_cfg = VqeConfig::new(cfg.t, cfg.u, sector, initial, cfg.shots_enum(), cfg.seed);
    vqe_cfg.convergence_rel_tol = cfg.tol;
    vqe_cfg.max_sweeps = cfg.max_sweeps;
    vqe_cfg.param_change_tol = cfg.param_tol;
    vqe_cfg.stream = match sector {
        VqeSector::Ground => greens::streams::GROUND_VQE,
        VqeSector::Excited => greens::streams::PARTICLE_VQE,
    };
    let trace = run_vqe(&vqe_cfg)?;

    let mut record = RunRecord::new("vqe", cfg);
    record.all_converged = trace.converged;
    record.ground = Some(trace.clone());
    wall.elapsed_ms = timer.elapsed().as_millis();
    record.wall_clock = Some(wall);

    let csv_path = args.common.out_dir.join("vqe_trace.csv");
    let json_path = args.common.out_dir.join("vqe_run.json");
    write_trace_csv(&csv_path, &trace)?;
    write_json(&json_path, &record)?;
    println!(
        "vqe {}: E = {:.6} +- {:.6} t in {} sweeps (converged: {}) -> {}, {} ({} ms)",
        sector.label(),
        trace.final_energy.value,
        trace.final_energy.stderr,
        trace.sweeps_run,
        trace.converged,
        csv_path.display(),
        json_path.display(),
        wall.elapsed_ms,
    );
    Ok(())
}

/// Full pipeline -> spectrum.csv, poles.json, run_record.json,
/// oracle_spectrum.csv, deviation_report.json.
pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<DeviationReport> {
    let cfg = args.common.resolve_for_optimizer()?;
    let (mut wall, timer) = WallClock::start();
    let hole_method = parse_hole_method(&args.hole_method)?;
    let grid = uniform_grid(cfg.grid_min, cfg.grid_max, cfg.grid_points)?;

    let pipeline_cfg = PipelineConfig {
        t: cfg.t,
        u: cfg.u,
        shots: cfg.shots_enum(),
        seed: cfg.seed,
        convergence_rel_tol: cfg.tol,
        max_sweeps: cfg.max_sweeps,
        param_change_tol: cfg.param_tol,
        initial: cfg.initial_angles()?,
    };
    let result = run_pipeline(&pipeline_cfg, hole_method)?;
    let spectrum = pipeline_spectrum(&result, &grid, cfg.eta)?;
    let oracle_series = oracle::exact_spectral_function(cfg.t, cfg.u, None, &grid, cfg.eta)?;
    let report = DeviationReport::between(&spectrum, &oracle_series);

    let table = PoleTable {
        t: cfg.t,
        u: cfg.u,
        eta: cfg.eta,
        ground_energy: result.ground.final_energy.value,
        poles: result.poles.clone(),
    };
    let mut record = RunRecord::new("spectrum", cfg);
    record.hole_method = Some(hole_method);
    record.all_converged = result.all_converged;
    record.ground = Some(result.ground.clone());
    record.excited_particle = Some(result.excited_particle.clone());
    record.excited_hole = result.excited_hole.clone();
    record.poles = result.poles.clone();
    record.spectrum = Some(spectrum.clone());
    wall.elapsed_ms = timer.elapsed().as_millis();
    record.wall_clock = Some(wall);

    let out = &args.common.out_dir;
    write_spectrum_csv(&out.join("spectrum.csv"), &spectrum)?;
    write_spectrum_csv(&out.join("oracle_spectrum.csv"), &oracle_series)?;
    write_json(&out.join("poles.json"), &table)?;
    write_json(&out.join("run_record.json"), &record)?;
    write_json(&out.join("deviation_report.json"), &report)?;
    println!(
        "spectrum: E_GS = {:.6} t (converged: {}), max |pipeline - oracle| = {:.3e} \
         ({:.3e} of peak) -> {} ({} ms)",
        result.ground.final_energy.value,
        result.all_converged,
        report.max_abs_deviation,
        report.deviation_over_peak,
        out.display(),
        wall.elapsed_ms,
    );
    Ok(report)
}

/// One named consistency check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst observed value (a deviation unless noted otherwise).
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// Sign of the hole-block off-diagonal found by literal projection;
    /// the printed reduced matrix carries +1. Spectra agree either way.
    pub hole_offdiag_sign: f64,
    pub printed_offdiag_sign: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn max_entry(m: &crate::linalg::CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The oracle-equivalence and invariant battery behind `validate`.
pub fn run_validation(cfg: &RunConfig) -> Result<ValidationReport> {
    use crate::fock::{
        build_hubbard, fermion_operator, total_number_operator, FermiOp, Site, Spin, FOCK_DIM,
    };
    use crate::linalg::{eigensystem, CMatrix};

    let mut checks = Vec::new();
    let mut push = |name: &str, value: f64, threshold: f64| {
        checks.push(CheckResult {
            name: name.to_string(),
            passed: value <= threshold,
            value,
            threshold,
        });
    };

    // canonical anticommutation relations over all mode pairs
    let modes = [
        (Site::Zero, Spin::Up),
        (Site::Zero, Spin::Down),
        (Site::One, Spin::Up),
        (Site::One, Spin::Down),
    ];
    let mut worst = 0.0f64;
    for (i, &(sa, pa)) in modes.iter().enumerate() {
        for (j, &(sb, pb)) in modes.iter().enumerate() {
            let a = fermion_operator(sa, pa, FermiOp::Annihilate);
            let bd = fermion_operator(sb, pb, FermiOp::Create);
            let b = fermion_operator(sb, pb, FermiOp::Annihilate);
            let mut acd = &a * &bd + &bd * &a;
            if i == j {
                acd -= CMatrix::identity(FOCK_DIM, FOCK_DIM);
            }
            worst = worst.max(max_entry(&acd));
            worst = worst.max(max_entry(&(&a * &b + &b * &a)));
        }
    }
    push("anticommutation {c_a, c+_b} = delta I", worst, 1e-12);

    // number conservation
    let h = build_hubbard(cfg.t, cfg.u)?;
    let mut worst = 0.0f64;
    for spin in [Spin::Up, Spin::Down] {
        let n = total_number_operator(spin);
        worst = worst.max(max_entry(&(&h * &n - &n * &h)));
    }
    push("[H, N_sigma] = 0", worst, 1e-12);

    // eigensolver residual and orthonormality on the full Hamiltonian
    let es = eigensystem(&h)?;
    let mut worst = 0.0f64;
    for j in 0..FOCK_DIM {
        let v = es.eigenvectors.column(j).clone_owned();
        let r = &h * &v - &v * num_complex::Complex64::new(es.eigenvalues[j], 0.0);
        worst = worst.max(r.norm());
    }
    let scale = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    push("eigen residual ||Hv - lambda v||", worst, 1e-10 * scale);
    push(
        "eigenvector orthonormality",
        crate::linalg::unitarity_error(&es.eigenvectors),
        1e-10,
    );

    // six-dim reduction at the configured point and 10 seeded random pairs
    let mut worst = 0.0f64;
    let report = oracle::verify_six_dim(cfg.t, cfg.u)?;
    worst = worst
        .max(report.max_deviation_particle)
        .max(report.max_deviation_hole);
    let mut rng = stream_rng(cfg.seed, greens::streams::VALIDATE);
    use rand::Rng;
    for _ in 0..10 {
        let t = rng.gen_range(0.2..3.0);
        let u = rng.gen_range(0.0..12.0);
        let r = oracle::verify_six_dim(t, u)?;
        worst = worst
            .max(r.max_deviation_particle)
            .max(r.max_deviation_hole);
    }
    push("six-dim reduction vs Fock projection", worst, 1e-12);

    // measurement decomposition reconstructs both Hamiltonian variants
    let mut worst = 0.0f64;
    for sector in [SectorKind::Particle, SectorKind::Hole] {
        let target = crate::model::build_six_dim(cfg.t, cfg.u, sector)?.matrix;
        let settings = crate::model::hamiltonian_settings_for(cfg.t, cfg.u, sector)?;
        let mut sum = CMatrix::zeros(6, 6);
        for s in &settings {
            sum += s.observable();
        }
        worst = worst.max(max_entry(&(sum - target)));
    }
    push("sum V+ D V reconstructs H_six", worst, 1e-10);

    // momentum blocks against the hand-derived sign table
    let inv = 1.0 / 2.0f64.sqrt();
    let mut worst = 0.0f64;
    for k in Momentum::BOTH {
        let s = k.site1_sign();
        let expect_create = [[0.0, -s * inv, 0.0, inv], [s * inv, 0.0, inv, 0.0]];
        let expect_annihilate = [[inv, 0.0, -s * inv, 0.0], [0.0, inv, 0.0, s * inv]];
        let bc = crate::model::momentum_creation_block(k);
        let ba = crate::model::momentum_annihilation_block(k);
        for i in 0..2 {
            for j in 0..4 {
                worst = worst
                    .max((bc[(i, j)].re - expect_create[i][j]).abs() + bc[(i, j)].im.abs())
                    .max((ba[(i, j)].re - expect_annihilate[i][j]).abs() + ba[(i, j)].im.abs());
            }
        }
    }
    push("momentum blocks vs derived signs", worst, 1e-12);

    // element-level circuit reproduces the closed-form ansatz
    let layout = match verify_element_layout(100, &mut rng) {
        Ok(()) => 0.0,
        Err(Error::InconsistentLayout(dev)) => dev,
        Err(e) => return Err(e),
    };
    push("element-level circuit = closed form", layout, 1e-12);

    // per-momentum sum rule of the oracle pole weights
    let mut worst = 0.0f64;
    for k in Momentum::BOTH {
        let poles = oracle::lehmann_poles(cfg.t, cfg.u, k)?;
        let total: f64 = poles.iter().map(|p| p.weight).sum();
        worst = worst.max((total - 1.0).abs());
    }
    push("per-k pole weight sum rule", worst, 1e-10);

    // mirror property between (k, particle) and (k + pi, hole)
    let (e_gs, _) = oracle::ground_state(cfg.t, cfg.u)?;
    let mut worst = 0.0f64;
    for k in Momentum::BOTH {
        let particles: Vec<_> = oracle::lehmann_poles(cfg.t, cfg.u, k)?
            .into_iter()
            .filter(|p| p.sector == SectorKind::Particle)
            .collect();
        let holes: Vec<_> = oracle::lehmann_poles(cfg.t, cfg.u, k.flipped())?
            .into_iter()
            .filter(|p| p.sector == SectorKind::Hole)
            .collect();
        for p in &particles {
            let pos = p.position(e_gs);
            let twin = holes
                .iter()
                .map(|h| ((h.position(e_gs) + pos).abs(), (h.weight - p.weight).abs()))
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .unwrap();
            worst = worst.max(twin.0).max(twin.1);
        }
    }
    push("particle-hole mirror of pole tables", worst, 1e-10);

    Ok(ValidationReport {
        checks,
        hole_offdiag_sign: report.hole_offdiag_sign,
        printed_offdiag_sign: report.printed_offdiag_sign,
    })
}

/// Run the battery, print one line per check, write validate_report.json.
pub fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let cfg = args.common.resolve()?;
    let report = run_validation(&cfg)?;
    for check in &report.checks {
        println!(
            "{:<42} {}  ({:.3e} <= {:.3e})",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.value,
            check.threshold,
        );
    }
    println!(
        "hole-block off-diagonal sign: projection gives {:+}t, reduced matrix prints {:+}t \
         (spectra identical)",
        report.hole_offdiag_sign, report.printed_offdiag_sign,
    );
    write_json(&args.common.out_dir.join("validate_report.json"), &report)?;
    Ok(report.all_passed())
}

/// Dispatch a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Exact(args) => cmd_exact(args).map(|_| true),
        Command::Vqe(args) => cmd_vqe(args).map(|_| true),
        Command::Spectrum(args) => cmd_spectrum(args).map(|_| true),
        Command::Validate(args) => cmd_validate(args),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Parse arguments from an iterator (the test entry point).
pub fn try_parse_from<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}
