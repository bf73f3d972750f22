//! Exact-diagonalization oracle: pole table and spectral function at U/t = 6.
//!
//! Run with `cargo run --example exact_spectrum`.

use hubbard_greens::fock::Momentum;
use hubbard_greens::greens::uniform_grid;
use hubbard_greens::oracle::{exact_spectral_function, ground_state};

fn main() -> hubbard_greens::Result<()> {
    let (t, u, eta) = (1.0, 6.0, 0.1);
    let (e_gs, _) = ground_state(t, u)?;
    println!("two-site Hubbard model at U/t = {u}: E_GS = {e_gs:.6} t");

    let grid = uniform_grid(-10.0, 10.0, 2001)?;
    let series = exact_spectral_function(t, u, None, &grid, eta)?;

    println!("\nLehmann poles (energy of the excited eigenstate, pole position, weight):");
    for pole in &series.poles {
        println!(
            "  {:>8} {:<5}  E = {:+.4} t  omega = {:+.4} t  weight = {:.6}{}",
            pole.sector.label(),
            pole.momentum.label(),
            pole.energy,
            pole.position(e_gs),
            pole.weight,
            if pole.weight < 1e-10 { "  (dark)" } else { "" },
        );
    }
    for k in Momentum::BOTH {
        let total: f64 = series
            .poles
            .iter()
            .filter(|p| p.momentum == k)
            .map(|p| p.weight)
            .sum();
        println!("  sum rule {}: total weight = {total:.12}", k.label());
    }

    let (imax, vmax) = series
        .a_kpi
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    println!(
        "\nA_(k=pi) peaks at omega = {:.2} t with height {:.3} (Lorentzian max w/(pi eta) = {:.3})",
        grid[imax],
        vmax,
        series.poles.iter().map(|p| p.weight).fold(0.0f64, f64::max) / (std::f64::consts::PI * eta),
    );

    let path = std::path::Path::new("exact_spectrum.csv");
    hubbard_greens::run::write_spectrum_csv(path, &series)?;
    println!("wrote {} ({} rows)", path.display(), series.omega.len());
    Ok(())
}
