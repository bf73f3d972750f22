//! Run configuration, reproducible run records, and file output.
//!
//! Every output file is a pure function of (config, seed): timestamps live
//! only in memory and on stdout, never inside the serialized record, and all
//! files are written atomically (temp file + rename).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{ExcitedPair, HoleMethod, PoleData, SpectrumSeries};
use crate::photonic::Shots;
use crate::vqe::{VqeTrace, INITIAL_PRESETS};

/// Environment variable consulted when neither flag nor config file set a
/// seed.
pub const SEED_ENV_VAR: &str = "HUBBARD_GREENS_SEED";

/// Fully resolved run configuration. Defaults reproduce the reference
/// experiment: t = 1, U = 6, 1e4 shots per setting, eta = 0.1, omega on
/// [-10, 10] with 2001 points, relative tolerance 1e-3.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub t: f64,
    pub u: f64,
    /// Shots per measurement setting; `None` means exact expectation values.
    pub shots: Option<u64>,
    pub eta: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    pub seed: u64,
    /// Initial angles: a preset name (`preset1`..`preset4`) or four
    /// comma-separated values for (theta2, theta4, theta5, theta6).
    pub init: String,
    pub tol: f64,
    pub max_sweeps: usize,
    /// Optional per-sweep angle-change tolerance for convergence (used by
    /// exact-equivalence runs; `None` keeps the energy-only criterion).
    pub param_tol: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t: 1.0,
            u: 6.0,
            shots: Some(10_000),
            eta: 0.1,
            grid_min: -10.0,
            grid_max: 10.0,
            grid_points: 2001,
            seed: 0,
            init: "preset1".to_string(),
            tol: 1e-3,
            max_sweeps: 50,
            param_tol: None,
        }
    }
}

/// Partial configuration: file- or flag-provided fields override defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub shots: Option<u64>,
    /// Force exact mode (wins over `shots`).
    pub exact: Option<bool>,
    pub eta: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub seed: Option<u64>,
    pub init: Option<String>,
    pub tol: Option<f64>,
    pub max_sweeps: Option<usize>,
    pub param_tol: Option<f64>,
}

impl RunConfig {
    /// Defaults, then file overlay, then environment seed fallback, then
    /// flag overlay: command line wins over file wins over environment.
    pub fn resolve(config_file: Option<&Path>, flags: &ConfigOverlay) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let merged = merge_overlays(config_file, flags)?;
        if merged.seed.is_none() {
            if let Ok(value) = std::env::var(SEED_ENV_VAR) {
                cfg.seed = value.trim().parse::<u64>().map_err(|_| {
                    Error::InvalidParameter(format!("{SEED_ENV_VAR} must be a u64, got {value:?}"))
                })?;
            }
        }
        cfg.apply(&merged);
        cfg.validate()?;
        Ok(cfg)
    }

    /// In exact mode an early stop only costs accuracy, so unless the user
    /// pinned a tolerance the optimizer runs to the parameter floor.
    pub fn tighten_for_exact(&mut self, merged: &ConfigOverlay) {
        if self.shots.is_none() && merged.tol.is_none() && merged.param_tol.is_none() {
            self.tol = 1e-12;
            self.param_tol = Some(1e-12);
            if merged.max_sweeps.is_none() {
                self.max_sweeps = self.max_sweeps.max(300);
            }
        }
    }

    fn apply(&mut self, overlay: &ConfigOverlay) {
        if let Some(v) = overlay.t {
            self.t = v;
        }
        if let Some(v) = overlay.u {
            self.u = v;
        }
        if let Some(v) = overlay.shots {
            self.shots = Some(v);
        }
        if overlay.exact == Some(true) {
            self.shots = None;
        }
        if let Some(v) = overlay.eta {
            self.eta = v;
        }
        if let Some(v) = overlay.grid_min {
            self.grid_min = v;
        }
        if let Some(v) = overlay.grid_max {
            self.grid_max = v;
        }
        if let Some(v) = overlay.grid_points {
            self.grid_points = v;
        }
        if let Some(v) = overlay.seed {
            self.seed = v;
        }
        if let Some(v) = &overlay.init {
            self.init = v.clone();
        }
        if let Some(v) = overlay.tol {
            self.tol = v;
        }
        if let Some(v) = overlay.max_sweeps {
            self.max_sweeps = v;
        }
        if let Some(v) = overlay.param_tol {
            self.param_tol = Some(v);
        }
    }

    fn validate(&self) -> Result<()> {
        if self.t.is_nan() || self.t <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "t must be > 0, got {}",
                self.t
            )));
        }
        if self.u.is_nan() || self.u < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "U must be >= 0, got {}",
                self.u
            )));
        }
        if self.eta.is_nan() || self.eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eta must be > 0, got {}",
                self.eta
            )));
        }
        if self.shots == Some(0) {
            return Err(Error::InvalidParameter("shots must be >= 1".into()));
        }
        self.initial_angles()?;
        Ok(())
    }

    pub fn shots_enum(&self) -> Shots {
        match self.shots {
            None => Shots::Exact,
            Some(n) => Shots::PerSetting(n),
        }
    }

    /// Initial (theta2, theta4, theta5, theta6) from the `init` field.
    pub fn initial_angles(&self) -> Result<[f64; 4]> {
        parse_init(&self.init)
    }
}

/// File overlay (when given) with flag overlay applied on top.
pub fn merge_overlays(config_file: Option<&Path>, flags: &ConfigOverlay) -> Result<ConfigOverlay> {
    let mut merged = match config_file {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<ConfigOverlay>(&text)?
        }
        None => ConfigOverlay::default(),
    };
    macro_rules! take {
        ($($field:ident),*) => {
            $(if flags.$field.is_some() { merged.$field = flags.$field.clone(); })*
        };
    }
    take!(
        t,
        u,
        shots,
        exact,
        eta,
        grid_min,
        grid_max,
        grid_points,
        seed,
        init,
        tol,
        max_sweeps,
        param_tol
    );
    Ok(merged)
}

/// `preset1`..`preset4` (the reference initial sets) or four comma-separated
/// angles.
pub fn parse_init(text: &str) -> Result<[f64; 4]> {
    match text.trim() {
        "preset1" => Ok(INITIAL_PRESETS[0]),
        "preset2" => Ok(INITIAL_PRESETS[1]),
        "preset3" => Ok(INITIAL_PRESETS[2]),
        "preset4" => Ok(INITIAL_PRESETS[3]),
        other => {
            let parts: Vec<&str> = other.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::InvalidParameter(format!(
                    "init must be preset1..preset4 or four comma-separated angles, got {text:?}"
                )));
            }
            let mut angles = [0.0; 4];
            for (slot, part) in angles.iter_mut().zip(&parts) {
                *slot = part.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("invalid angle {part:?} in init {text:?}"))
                })?;
            }
            Ok(angles)
        }
    }
}

/// Wall-clock bookkeeping; printed, never serialized, so that output files
/// stay bit-identical across reruns of the same (config, seed).
#[derive(Debug, Clone, Copy)]
pub struct WallClock {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

impl WallClock {
    pub fn start() -> (Self, std::time::Instant) {
        let started = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        (
            Self {
                started_unix_ms: started,
                elapsed_ms: 0,
            },
            std::time::Instant::now(),
        )
    }
}

/// Everything one invocation produced, replayable from (config, seed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub hole_method: Option<HoleMethod>,
    pub ground: Option<VqeTrace>,
    pub excited_particle: Option<ExcitedPair>,
    pub excited_hole: Option<ExcitedPair>,
    pub poles: Vec<PoleData>,
    pub spectrum: Option<SpectrumSeries>,
    /// False when any optimizer stage hit its sweep budget; the record then
    /// holds the best-found parameters.
    pub all_converged: bool,
    #[serde(skip)]
    pub wall_clock: Option<WallClock>,
}

impl RunRecord {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            hole_method: None,
            ground: None,
            excited_particle: None,
            excited_hole: None,
            poles: Vec::new(),
            spectrum: None,
            all_converged: true,
            wall_clock: None,
        }
    }
}

/// Write via a temp file in the same directory, then rename into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(parent)?;
    let mut tmp = PathBuf::from(parent);
    tmp.push(format!(
        ".tmp_{}_{}",
        std::process::id(),
        path.file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_default()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

/// Spectrum CSV: header `omega,A_k0,A_kpi`, one row per grid point, full
/// double precision, `.` decimal separator, LF line endings.
pub fn write_spectrum_csv(path: &Path, series: &SpectrumSeries) -> Result<()> {
    let mut out = String::with_capacity(series.omega.len() * 64);
    out.push_str("omega,A_k0,A_kpi\n");
    for i in 0..series.omega.len() {
        out.push_str(&fmt_full(series.omega[i]));
        out.push(',');
        out.push_str(&fmt_full(series.a_k0[i]));
        out.push(',');
        out.push_str(&fmt_full(series.a_kpi[i]));
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

/// Iteration-trace CSV: one row per sweep (sweep 0 is the initial point).
pub fn write_trace_csv(path: &Path, trace: &VqeTrace) -> Result<()> {
    let mut out = String::new();
    out.push_str("sweep,theta2,theta4,theta5,theta6,energy,stderr\n");
    for rec in &trace.sweeps {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            rec.sweep,
            fmt_full(rec.params.theta2),
            fmt_full(rec.params.theta4),
            fmt_full(rec.params.theta5),
            fmt_full(rec.params.theta6),
            fmt_full(rec.energy.value),
            fmt_full(rec.energy.stderr),
        ));
    }
    atomic_write(path, out.as_bytes())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// Standalone pole table (what `exact` exports next to the spectrum CSV).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleTable {
    pub t: f64,
    pub u: f64,
    pub eta: f64,
    pub ground_energy: f64,
    pub poles: Vec<PoleData>,
}

/// Scalar comparison of a pipeline spectrum against the oracle spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationReport {
    /// max_omega,k |A_pipeline - A_oracle|
    pub max_abs_deviation: f64,
    /// max of the oracle spectrum over the grid
    pub peak_height: f64,
    pub deviation_over_peak: f64,
    pub grid_points: usize,
}

impl DeviationReport {
    pub fn between(pipeline: &SpectrumSeries, oracle: &SpectrumSeries) -> Self {
        let mut max_abs = 0.0f64;
        let mut peak = 0.0f64;
        for (a, b) in pipeline.a_k0.iter().zip(&oracle.a_k0) {
            max_abs = max_abs.max((a - b).abs());
            peak = peak.max(*b);
        }
        for (a, b) in pipeline.a_kpi.iter().zip(&oracle.a_kpi) {
            max_abs = max_abs.max((a - b).abs());
            peak = peak.max(*b);
        }
        Self {
            max_abs_deviation: max_abs,
            peak_height: peak,
            deviation_over_peak: if peak > 0.0 { max_abs / peak } else { f64::NAN },
            grid_points: pipeline.omega.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_experiment() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.t, 1.0);
        assert_eq!(cfg.u, 6.0);
        assert_eq!(cfg.shots, Some(10_000));
        assert_eq!(cfg.eta, 0.1);
        assert_eq!(cfg.grid_points, 2001);
        assert_eq!(cfg.tol, 1e-3);
        assert_eq!(cfg.initial_angles().unwrap(), INITIAL_PRESETS[0]);
    }

    #[test]
    fn overlay_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("config.json");
        std::fs::write(&file, r#"{"u": 4.0, "seed": 7, "shots": 500}"#).unwrap();
        let flags = ConfigOverlay {
            u: Some(5.5),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&file), &flags).unwrap();
        assert_eq!(cfg.u, 5.5); // flag wins over file
        assert_eq!(cfg.seed, 7); // file wins over default
        assert_eq!(cfg.shots, Some(500));
        // exact flag beats shots
        let flags = ConfigOverlay {
            exact: Some(true),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&file), &flags).unwrap();
        assert_eq!(cfg.shots, None);
    }

    #[test]
    fn rejects_unknown_config_keys() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("config.json");
        std::fs::write(&file, r#"{"hopping": 2.0}"#).unwrap();
        assert!(RunConfig::resolve(Some(&file), &ConfigOverlay::default()).is_err());
    }

    #[test]
    fn init_parsing() {
        assert_eq!(parse_init("preset2").unwrap(), INITIAL_PRESETS[1]);
        assert_eq!(
            parse_init("0.1, -0.2,3e-1,4").unwrap(),
            [0.1, -0.2, 0.3, 4.0]
        );
        assert!(parse_init("preset9").is_err());
        assert!(parse_init("1,2,3").is_err());
    }

    #[test]
    fn run_record_round_trips() {
        let mut record = RunRecord::new("vqe", RunConfig::default());
        record.wall_clock = Some(WallClock {
            started_unix_ms: 123,
            elapsed_ms: 456,
        });
        let text = serde_json::to_string_pretty(&record).unwrap();
        assert!(!text.contains("wall_clock"));
        let parsed: RunRecord = serde_json::from_str(&text).unwrap();
        let text2 = serde_json::to_string_pretty(&parsed).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn csv_full_precision_round_trip() {
        let series = SpectrumSeries {
            omega: vec![-1.0, 0.0, 1.0 / 3.0],
            a_k0: vec![0.1, 0.777_350_098_112_614_6, 2.474_382_212_511_695],
            a_kpi: vec![1e-300, 0.0, 3.9],
            eta: 0.1,
            ground_energy: -6.605_551_275_463_989,
            poles: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        write_spectrum_csv(&path, &series).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "omega,A_k0,A_kpi");
        for (i, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[0].parse::<f64>().unwrap(), series.omega[i]);
            assert_eq!(cols[1].parse::<f64>().unwrap(), series.a_k0[i]);
            assert_eq!(cols[2].parse::<f64>().unwrap(), series.a_kpi[i]);
        }
        assert!(!text.contains('\r'));
    }
}
