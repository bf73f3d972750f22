//! Transition amplitudes |<ES| c~(dagger)_k |GS>|^2 for every channel:
//! bright/dark structure, the projective measurement route, and the
//! anticommutation sum rule.
//!
//! Run with `cargo run --example transition_amplitudes`.

use hubbard_greens::fock::Momentum;
use hubbard_greens::greens::{exact_transition_weight, measure_transition_amplitude, stream_rng};
use hubbard_greens::model::SectorKind;
use hubbard_greens::photonic::Shots;
use hubbard_greens::vqe::exact_ground_params;

fn main() -> hubbard_greens::Result<()> {
    let gs = exact_ground_params(1.0, 6.0);
    // optimized excited angles: theta6 = -pi/2 is the E = -4t eigenstate of
    // the particle block, +pi/2 the E = -4t eigenstate of the hole block;
    // +pi on either reaches the orthogonal E = -2t state
    let candidates = [
        (SectorKind::Particle, -std::f64::consts::FRAC_PI_2, -4.0),
        (SectorKind::Particle, std::f64::consts::FRAC_PI_2, -2.0),
        (SectorKind::Hole, std::f64::consts::FRAC_PI_2, -4.0),
        (SectorKind::Hole, -std::f64::consts::FRAC_PI_2, -2.0),
    ];

    println!("channel table (weight by exact inner product):");
    let mut per_k = [0.0f64; 2];
    for (sector, theta6, energy) in candidates {
        for (ki, k) in Momentum::BOTH.iter().enumerate() {
            let w = exact_transition_weight(&gs, theta6, *k, sector)?;
            per_k[ki] += w;
            println!(
                "  {:>8} E = {energy:+.1} t  {:<5} weight = {w:.6}{}",
                sector.label(),
                k.label(),
                if w < 1e-10 { "  (dark)" } else { "" },
            );
        }
    }
    println!(
        "per-momentum totals: k=0 -> {:.9}, k=pi -> {:.9}",
        per_k[0], per_k[1]
    );

    // the same number through the single rotated projective setting
    let mut es = gs;
    es.theta6 = -std::f64::consts::FRAC_PI_2;
    let mut rng = stream_rng(5, 0);
    println!("\nbright particle channel (k=pi) through the measurement model:");
    for shots in [1_000u64, 10_000, 100_000] {
        let est = measure_transition_amplitude(
            &gs,
            &es,
            Momentum::Pi,
            SectorKind::Particle,
            Shots::PerSetting(shots),
            &mut rng,
        )?;
        println!("  {shots:>7} shots: {:.5} +- {:.5}", est.weight, est.stderr);
    }
    let exact = measure_transition_amplitude(
        &gs,
        &es,
        Momentum::Pi,
        SectorKind::Particle,
        Shots::Exact,
        &mut rng,
    )?;
    println!("  exact:         {:.12}", exact.weight);
    Ok(())
}
