//! End to end: ground and excited searches, transition amplitudes, spectral
//! assembly, and the comparison against the exact oracle.
//!
//! Run with `cargo run --release --example full_pipeline`.

use hubbard_greens::greens::{
    pipeline_spectrum, run_pipeline, uniform_grid, HoleMethod, PipelineConfig,
};
use hubbard_greens::oracle::exact_spectral_function;
use hubbard_greens::photonic::Shots;
use hubbard_greens::run::{write_spectrum_csv, DeviationReport};

fn main() -> hubbard_greens::Result<()> {
    let (t, u, eta) = (1.0, 6.0, 0.1);
    let grid = uniform_grid(-10.0, 10.0, 2001)?;
    let oracle = exact_spectral_function(t, u, None, &grid, eta)?;

    // exact-mode pipeline: should reproduce the oracle to ~1e-10 of the peak
    let mut cfg = PipelineConfig::new(t, u, Shots::Exact, 0);
    cfg.convergence_rel_tol = 1e-12;
    cfg.param_change_tol = Some(1e-12);
    cfg.max_sweeps = 300;
    let result = run_pipeline(&cfg, HoleMethod::Direct)?;
    let spectrum = pipeline_spectrum(&result, &grid, eta)?;
    let report = DeviationReport::between(&spectrum, &oracle);
    println!(
        "exact pipeline: E_GS = {:.9} t, max |pipeline - oracle| = {:.2e} ({:.2e} of peak)",
        result.ground.final_energy.value, report.max_abs_deviation, report.deviation_over_peak,
    );
    for pole in &result.poles {
        println!(
            "  {:>8} {:<5} omega = {:+.4} t, weight = {:.6}",
            pole.sector.label(),
            pole.momentum.label(),
            pole.position(result.ground.final_energy.value),
            pole.weight,
        );
    }

    // sampled pipeline at the experiment's shot budget
    let cfg = PipelineConfig::new(t, u, Shots::PerSetting(10_000), 7);
    let result = run_pipeline(&cfg, HoleMethod::Direct)?;
    let sampled = pipeline_spectrum(&result, &grid, eta)?;
    let report = DeviationReport::between(&sampled, &oracle);
    println!(
        "\nsampled pipeline (1e4 shots, seed 7): E_GS = {:.4} +- {:.4} t, \
         max deviation {:.2e} of peak",
        result.ground.final_energy.value,
        result.ground.final_energy.stderr,
        report.deviation_over_peak,
    );
    for pole in &result.poles {
        println!(
            "  {:>8} {:<5} omega = {:+.4} t, weight = {:.4} +- {:.4}",
            pole.sector.label(),
            pole.momentum.label(),
            pole.position(result.ground.final_energy.value),
            pole.weight,
            pole.weight_stderr,
        );
    }

    write_spectrum_csv(std::path::Path::new("pipeline_spectrum.csv"), &sampled)?;
    write_spectrum_csv(std::path::Path::new("oracle_spectrum.csv"), &oracle)?;
    println!("\nwrote pipeline_spectrum.csv and oracle_spectrum.csv (gnuplot-ready)");
    println!("  gnuplot> set datafile separator ','");
    println!("  gnuplot> plot 'pipeline_spectrum.csv' u 1:3 w l, 'oracle_spectrum.csv' u 1:3 w l");
    Ok(())
}
