//! Variational search for the ground and excited states, exact and sampled.
//!
//! Run with `cargo run --example vqe_ground_state`.

use hubbard_greens::photonic::{AnsatzParams, Shots};
use hubbard_greens::vqe::{exact_ground_energy, run_vqe, VqeConfig, VqeSector, INITIAL_PRESETS};

fn main() -> hubbard_greens::Result<()> {
    let (t, u) = (1.0, 6.0);
    let e_gs = exact_ground_energy(t, u);
    println!(
        "exact E_GS = {e_gs:.6} t, exact E_ES = {:.6} t\n",
        -u / 2.0 - t
    );

    // exact optimizer from each reference initial set
    for (i, preset) in INITIAL_PRESETS.iter().enumerate() {
        let initial = AnsatzParams::new(0.0, preset[0], preset[1], preset[2], preset[3])?;
        let mut cfg = VqeConfig::new(t, u, VqeSector::Ground, initial, Shots::Exact, 0);
        cfg.convergence_rel_tol = 1e-10;
        cfg.max_sweeps = 100;
        let trace = run_vqe(&cfg)?;
        println!(
            "preset{}: exact ground run converged in {:>2} sweeps, E = {:.9} t (err {:.1e})",
            i + 1,
            trace.sweeps_run,
            trace.final_energy.value,
            (trace.final_energy.value - e_gs).abs(),
        );
    }

    // a sampled run at the experiment's shot budget, with its per-sweep trace
    let preset = INITIAL_PRESETS[0];
    let initial = AnsatzParams::new(0.0, preset[0], preset[1], preset[2], preset[3])?;
    let cfg = VqeConfig::new(
        t,
        u,
        VqeSector::Ground,
        initial,
        Shots::PerSetting(10_000),
        42,
    );
    let trace = run_vqe(&cfg)?;
    println!("\nsampled ground run (1e4 shots per setting, seed 42):");
    println!("  sweep  theta2   theta4   theta5   energy      stderr");
    for rec in &trace.sweeps {
        println!(
            "  {:>5}  {:>7.3}  {:>7.3}  {:>7.3}  {:>9.4}  {:.4}",
            rec.sweep,
            rec.params.theta2,
            rec.params.theta4,
            rec.params.theta5,
            rec.energy.value,
            rec.energy.stderr,
        );
    }
    println!(
        "  final: E = {:.4} +- {:.4} t (exact {:.4} t), converged = {}",
        trace.final_energy.value, trace.final_energy.stderr, e_gs, trace.converged,
    );

    // excited-sector search: one parameter, lands in at most three sweeps
    let mut cfg = VqeConfig::new(t, u, VqeSector::Excited, initial, Shots::Exact, 0);
    cfg.convergence_rel_tol = 1e-3;
    let trace = run_vqe(&cfg)?;
    println!(
        "\nexcited run: E = {:.6} t in {} sweeps (theta6* = {:.4})",
        trace.final_energy.value, trace.sweeps_run, trace.final_params.theta6,
    );
    Ok(())
}
