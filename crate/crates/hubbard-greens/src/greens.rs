//! Transition-amplitude estimation between optimized states and assembly of
//! the spectral function from pole energies and weights.
//!
//! A particle pole contributes (1/pi) w eta / ((omega + E_GS - E_n)^2 + eta^2)
//! and a hole pole (1/pi) w eta / ((omega - E_GS + E_m)^2 + eta^2). The
//! transition weight is measured with a single rotated projective setting so
//! the shot-noise model applies to it exactly as to energy measurements; an
//! exact inner-product route exists alongside for cross-checks.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Momentum;
use crate::linalg::{CMatrix, CVector};
use crate::model::{momentum_block, MeasurementSetting, SectorKind, SixObservable, SIX_DIM};
use crate::photonic::{
    excited_manifold_state, measure_expectation, prepare_ansatz, AnsatzParams, ExpectationEstimate,
    Shots,
};
use crate::vqe::{run_vqe_with_rng, ParamId, ParamSigmas, VqeConfig, VqeSector, VqeTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Exact,
    Vqe,
}

/// One pole of the Lehmann sum: an excitation energy with its transition
/// weight and the statistical errors attached to both.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoleData {
    pub sector: SectorKind,
    pub momentum: Momentum,
    /// Eigenenergy of the excited state in units of t (not the pole
    /// position; the position follows once the ground energy is known).
    pub energy: f64,
    pub energy_stderr: f64,
    /// Transition amplitude |<E|c~(dagger)|GS>|^2.
    pub weight: f64,
    pub weight_stderr: f64,
    pub provenance: Provenance,
}

impl PoleData {
    /// Position on the omega axis for a given ground energy.
    pub fn position(&self, ground_energy: f64) -> f64 {
        match self.sector {
            SectorKind::Particle => self.energy - ground_energy,
            SectorKind::Hole => ground_energy - self.energy,
        }
    }
}

/// Sampled spectral function over an omega grid for both momenta.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSeries {
    pub omega: Vec<f64>,
    pub a_k0: Vec<f64>,
    pub a_kpi: Vec<f64>,
    pub eta: f64,
    pub ground_energy: f64,
    pub poles: Vec<PoleData>,
}

impl SpectrumSeries {
    pub fn column(&self, k: Momentum) -> &[f64] {
        match k {
            Momentum::Zero => &self.a_k0,
            Momentum::Pi => &self.a_kpi,
        }
    }
}

fn lorentzian(x: f64, eta: f64) -> f64 {
    eta / (std::f64::consts::PI * (x * x + eta * eta))
}

fn lorentzian_slope(x: f64, eta: f64) -> f64 {
    -2.0 * x * eta / (std::f64::consts::PI * (x * x + eta * eta).powi(2))
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(
            "omega grid must be non-empty".into(),
        ));
    }
    if grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidParameter(
            "omega grid must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Sum of Lorentzian-broadened poles on the grid, one column per momentum.
pub fn spectral_function(
    poles: &[PoleData],
    ground_energy: f64,
    omega_grid: &[f64],
    eta: f64,
) -> Result<SpectrumSeries> {
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eta must be > 0, got {eta}"
        )));
    }
    validate_grid(omega_grid)?;
    let mut a_k0 = vec![0.0; omega_grid.len()];
    let mut a_kpi = vec![0.0; omega_grid.len()];
    for pole in poles {
        let column = match pole.momentum {
            Momentum::Zero => &mut a_k0,
            Momentum::Pi => &mut a_kpi,
        };
        let x0 = pole.position(ground_energy);
        for (value, &omega) in column.iter_mut().zip(omega_grid) {
            *value += pole.weight * lorentzian(omega - x0, eta);
        }
    }
    Ok(SpectrumSeries {
        omega: omega_grid.to_vec(),
        a_k0,
        a_kpi,
        eta,
        ground_energy,
        poles: poles.to_vec(),
    })
}

/// First-order propagated one-sigma band of the spectral function, from the
/// pole weight/energy errors and the ground-energy error.
pub fn spectral_sigma(
    poles: &[PoleData],
    ground_energy: f64,
    ground_energy_stderr: f64,
    omega_grid: &[f64],
    eta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut var_k0 = vec![0.0; omega_grid.len()];
    let mut var_kpi = vec![0.0; omega_grid.len()];
    for pole in poles {
        let column = match pole.momentum {
            Momentum::Zero => &mut var_k0,
            Momentum::Pi => &mut var_kpi,
        };
        let x0 = pole.position(ground_energy);
        let var_x = pole.energy_stderr.powi(2) + ground_energy_stderr.powi(2);
        for (value, &omega) in column.iter_mut().zip(omega_grid) {
            let l = lorentzian(omega - x0, eta);
            let dl = lorentzian_slope(omega - x0, eta);
            *value += (l * pole.weight_stderr).powi(2) + (pole.weight * dl).powi(2) * var_x;
        }
    }
    (
        var_k0.iter().map(|v| v.sqrt()).collect(),
        var_kpi.iter().map(|v| v.sqrt()).collect(),
    )
}

/// Total pole weight per momentum (anticommutation sum rule target: 1).
pub fn pole_weight_sum(poles: &[PoleData], k: Momentum) -> f64 {
    poles
        .iter()
        .filter(|p| p.momentum == k)
        .map(|p| p.weight)
        .sum()
}

/// The rank-one observable |v><v| with v = c~_k |ES> (particle sector) or
/// v = c~dagger_k |ES> (hole sector), embedded in the six-dimensional space,
/// plus the single measurement setting that reads it out: a rotation sending
/// v/|v| to the first outcome and the outcome values (|v|^2, 0, ..., 0).
pub struct TransitionSetting {
    pub observable: SixObservable,
    pub setting: MeasurementSetting,
    /// Set when |v| vanishes and no setting can see the transition.
    pub dark: bool,
}

/// Particle-sector projector per the transition-amplitude protocol.
pub fn transition_projector(es_state: &[Complex64; 2], k: Momentum) -> Result<TransitionSetting> {
    transition_setting_for(es_state, k, SectorKind::Particle)
}

/// Sector-generic construction: the momentum block maps the (1,1) basis into
/// the excitation basis, so its adjoint carries |ES> back into the
/// six-dimensional positions 1..4.
pub fn transition_setting_for(
    es_state: &[Complex64; 2],
    k: Momentum,
    sector: SectorKind,
) -> Result<TransitionSetting> {
    let norm = (es_state[0].norm_sqr() + es_state[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "excited state must be normalized, got norm {norm}"
        )));
    }
    let block = momentum_block(k, sector);
    let es = CVector::from_vec(vec![es_state[0], es_state[1]]);
    let v4 = block.adjoint() * es;
    let mut v = CVector::zeros(SIX_DIM);
    for i in 0..4 {
        v[i] = v4[i];
    }
    let vnorm = v.norm();
    if vnorm < 1e-12 {
        let observable = SixObservable::new(CMatrix::zeros(SIX_DIM, SIX_DIM), "dark transition")?;
        let setting = MeasurementSetting {
            rotation: CMatrix::identity(SIX_DIM, SIX_DIM),
            outcome_values: vec![0.0; SIX_DIM],
            label: "dark transition".to_string(),
        };
        return Ok(TransitionSetting {
            observable,
            setting,
            dark: true,
        });
    }
    let vhat = &v / Complex64::new(vnorm, 0.0);
    let observable = SixObservable::new(
        &v * v.adjoint(),
        format!("|v><v| for {} {}", sector.label(), k.label()),
    )?;
    // unitary completion: first row reads out v, the rest fill in by
    // Gram-Schmidt over the standard basis
    let mut rows: Vec<CVector> = vec![vhat.conjugate()];
    for basis_index in 0..SIX_DIM {
        if rows.len() == SIX_DIM {
            break;
        }
        let mut w: CVector = CVector::zeros(SIX_DIM);
        w[basis_index] = Complex64::new(1.0, 0.0);
        for r in &rows {
            // r holds conjugated row entries; the row as a bra is r^T
            let coeff = r.dot(&w);
            w -= r.conjugate() * coeff;
        }
        let n = w.norm();
        if n > 1e-9 {
            rows.push((w / Complex64::new(n, 0.0)).conjugate());
        }
    }
    debug_assert_eq!(rows.len(), SIX_DIM);
    let rotation = CMatrix::from_fn(SIX_DIM, SIX_DIM, |i, j| rows[i][j]);
    let mut outcome_values = vec![0.0; SIX_DIM];
    outcome_values[0] = vnorm * vnorm;
    let setting = MeasurementSetting {
        rotation,
        outcome_values,
        label: format!("transition projector {} {}", sector.label(), k.label()),
    };
    Ok(TransitionSetting {
        observable,
        setting,
        dark: false,
    })
}

/// Transition weight |<ES| c~(dagger)_k |GS(params)>|^2 by direct inner
/// product; the cross-check route with no measurement model in it.
pub fn exact_transition_weight(
    gs_params: &AnsatzParams,
    es_theta6: f64,
    k: Momentum,
    sector: SectorKind,
) -> Result<f64> {
    let mut gs = *gs_params;
    gs.theta1 = 0.0;
    let state = prepare_ansatz(&gs)?;
    let ts = transition_setting_for(&excited_manifold_state(es_theta6), k, sector)?;
    // |<v|psi>|^2 can round to a tiny negative through the quadratic form
    Ok(state.expectation(&ts.observable.matrix).max(0.0))
}

/// Measured transition weight with its multinomial standard error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeightEstimate {
    pub weight: f64,
    pub stderr: f64,
}

/// Measures |<psi_ES(theta6)| c~(dagger)_k |psi_GS>|^2 as the expectation of
/// the rank-one projector on the prepared ground state, using one rotated
/// projective setting.
pub fn measure_transition_amplitude(
    gs_params: &AnsatzParams,
    es_params: &AnsatzParams,
    k: Momentum,
    sector: SectorKind,
    shots: Shots,
    rng: &mut ChaCha12Rng,
) -> Result<WeightEstimate> {
    let mut gs = *gs_params;
    gs.theta1 = 0.0;
    let state = prepare_ansatz(&gs)?;
    let ts = transition_setting_for(&excited_manifold_state(es_params.theta6), k, sector)?;
    if ts.dark {
        return Ok(WeightEstimate {
            weight: 0.0,
            stderr: 0.0,
        });
    }
    let est = measure_expectation(&state, std::slice::from_ref(&ts.setting), shots, rng)?;
    Ok(WeightEstimate {
        weight: est.value,
        stderr: est.stderr,
    })
}

/// Exact derivative of the transition weight with respect to one angle,
/// evaluated on the simulator side (parameter shift for the single-harmonic
/// angles, five-point interpolation for the half-angle ones). Used only for
/// error propagation, never for optimization.
fn weight_derivative(
    gs_params: &AnsatzParams,
    es_theta6: f64,
    k: Momentum,
    sector: SectorKind,
    which: ParamId,
) -> Result<f64> {
    let eval = |gs: &AnsatzParams, th6: f64| exact_transition_weight(gs, th6, k, sector);
    match which {
        ParamId::Theta2 => {
            let mut p = *gs_params;
            p.theta2 = gs_params.theta2 + std::f64::consts::FRAC_PI_2;
            let wp = eval(&p, es_theta6)?;
            p.theta2 = gs_params.theta2 - std::f64::consts::FRAC_PI_2;
            let wm = eval(&p, es_theta6)?;
            Ok((wp - wm) / 2.0)
        }
        ParamId::Theta6 => {
            let wp = eval(gs_params, es_theta6 + std::f64::consts::FRAC_PI_2)?;
            let wm = eval(gs_params, es_theta6 - std::f64::consts::FRAC_PI_2)?;
            Ok((wp - wm) / 2.0)
        }
        ParamId::Theta4 | ParamId::Theta5 => {
            const N: usize = 5;
            let theta0 = match which {
                ParamId::Theta4 => gs_params.theta4,
                _ => gs_params.theta5,
            };
            let u0 = theta0 / 2.0;
            let (mut a1, mut b1, mut a2, mut b2) = (0.0, 0.0, 0.0, 0.0);
            for j in 0..N {
                let uj = u0 + std::f64::consts::TAU * j as f64 / N as f64;
                let mut p = *gs_params;
                match which {
                    ParamId::Theta4 => p.theta4 = 2.0 * uj,
                    _ => p.theta5 = 2.0 * uj,
                }
                let w = eval(&p, es_theta6)?;
                a1 += w * uj.cos();
                b1 += w * uj.sin();
                a2 += w * (2.0 * uj).cos();
                b2 += w * (2.0 * uj).sin();
            }
            let scale = 2.0 / N as f64;
            a1 *= scale;
            b1 *= scale;
            a2 *= scale;
            b2 *= scale;
            // dw/dtheta = (1/2) dw/du at u0
            Ok(0.5
                * (-a1 * u0.sin() + b1 * u0.cos() - 2.0 * a2 * (2.0 * u0).sin()
                    + 2.0 * b2 * (2.0 * u0).cos()))
        }
    }
}

/// Parameter-uncertainty contribution to the weight variance,
/// sum_i (dw/dtheta_i)^2 sigma_theta_i^2 over the ground angles and theta6.
pub fn weight_parameter_variance(
    gs_params: &AnsatzParams,
    gs_sigmas: &ParamSigmas,
    es_theta6: f64,
    es_sigma: f64,
    k: Momentum,
    sector: SectorKind,
) -> Result<f64> {
    let mut var = 0.0;
    for which in [ParamId::Theta2, ParamId::Theta4, ParamId::Theta5] {
        let dw = weight_derivative(gs_params, es_theta6, k, sector, which)?;
        var += dw * dw * gs_sigmas.get(which).powi(2);
    }
    let dw6 = weight_derivative(gs_params, es_theta6, k, sector, ParamId::Theta6)?;
    var += dw6 * dw6 * es_sigma * es_sigma;
    Ok(var)
}

/// Configuration of the full measurement pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub t: f64,
    pub u: f64,
    pub shots: Shots,
    pub seed: u64,
    pub convergence_rel_tol: f64,
    pub max_sweeps: usize,
    /// Optional per-sweep angle-change tolerance (see
    /// [`crate::vqe::VqeConfig::param_change_tol`]).
    pub param_change_tol: Option<f64>,
    /// Initial (theta2, theta4, theta5, theta6).
    pub initial: [f64; 4],
}

impl PipelineConfig {
    pub fn new(t: f64, u: f64, shots: Shots, seed: u64) -> Self {
        Self {
            t,
            u,
            shots,
            seed,
            convergence_rel_tol: 1e-3,
            max_sweeps: 50,
            param_change_tol: None,
            initial: crate::vqe::INITIAL_PRESETS[0],
        }
    }

    fn vqe_config(
        &self,
        sector: VqeSector,
        model_sector: SectorKind,
        stream: u64,
    ) -> Result<VqeConfig> {
        let initial = AnsatzParams::new(
            0.0,
            self.initial[0],
            self.initial[1],
            self.initial[2],
            self.initial[3],
        )?;
        let mut cfg = VqeConfig::new(self.t, self.u, sector, initial, self.shots, self.seed);
        cfg.model_sector = model_sector;
        cfg.convergence_rel_tol = self.convergence_rel_tol;
        cfg.max_sweeps = self.max_sweeps;
        cfg.param_change_tol = self.param_change_tol;
        cfg.stream = stream;
        Ok(cfg)
    }
}

/// RNG stream indices used by the pipeline stages; independent stages draw
/// from distinct ChaCha streams of the one master seed.
pub mod streams {
    pub const GROUND_VQE: u64 = 0;
    pub const PARTICLE_VQE: u64 = 1;
    pub const HOLE_VQE: u64 = 2;
    pub const TRANSITIONS: u64 = 3;
    pub const VALIDATE: u64 = 4;
    pub const HOLE_TRANSITIONS: u64 = 5;
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HoleMethod {
    /// Run the excited-sector search on the hole-variant Hamiltonian and
    /// measure the annihilation-block amplitudes.
    Direct,
    /// Map particle poles through the particle-hole mirror
    /// (k, omega, w) -> (k + pi, -omega, w).
    Mirror,
}

/// Excited-sector outcome for one Hamiltonian variant: the optimized state,
/// plus the orthogonal state of the excited manifold and its energy (the
/// sub-bright channel lives there).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExcitedPair {
    pub trace: VqeTrace,
    /// theta6 of the optimized state.
    pub theta6: f64,
    /// Energy of psi_ES(theta6 + pi), the orthogonal manifold state.
    pub orthogonal_energy: ExpectationEstimate,
}

fn run_excited_pair(
    cfg: &PipelineConfig,
    model_sector: SectorKind,
    stream: u64,
) -> Result<ExcitedPair> {
    let vqe_cfg = cfg.vqe_config(VqeSector::Excited, model_sector, stream)?;
    let mut rng = stream_rng(cfg.seed, stream);
    let trace = run_vqe_with_rng(&vqe_cfg, &mut rng)?;
    let theta6 = trace.final_params.theta6;
    let mut orth = trace.final_params;
    orth.theta6 = theta6 + std::f64::consts::PI;
    let settings = crate::model::hamiltonian_settings_for(cfg.t, cfg.u, model_sector)?;
    let state = prepare_ansatz(&orth)?;
    let orthogonal_energy = measure_expectation(&state, &settings, cfg.shots, &mut rng)?;
    Ok(ExcitedPair {
        theta6,
        orthogonal_energy,
        trace,
    })
}

/// Measure both excited-manifold candidates for one (sector, momentum)
/// channel and keep the brighter, with the full propagated weight error.
fn bright_pole(
    cfg: &PipelineConfig,
    sector: SectorKind,
    k: Momentum,
    gs_params: &AnsatzParams,
    gs_sigmas: &ParamSigmas,
    pair: &ExcitedPair,
    rng: &mut ChaCha12Rng,
) -> Result<PoleData> {
    let theta6_sigma = pair.trace.param_sigmas.theta6;
    let mut best: Option<(f64, WeightEstimate, f64, f64)> = None;
    for (theta6, energy, energy_stderr) in [
        (
            pair.theta6,
            pair.trace.final_energy.value,
            pair.trace.final_energy.stderr,
        ),
        (
            pair.theta6 + std::f64::consts::PI,
            pair.orthogonal_energy.value,
            pair.orthogonal_energy.stderr,
        ),
    ] {
        let mut es_params = pair.trace.final_params;
        es_params.theta6 = theta6;
        let est = measure_transition_amplitude(gs_params, &es_params, k, sector, cfg.shots, rng)?;
        if best
            .as_ref()
            .map(|(_, b, _, _)| est.weight > b.weight)
            .unwrap_or(true)
        {
            best = Some((theta6, est, energy, energy_stderr));
        }
    }
    let (theta6, est, energy, energy_stderr) = best.expect("two candidates measured");
    let param_var =
        weight_parameter_variance(gs_params, gs_sigmas, theta6, theta6_sigma, k, sector)?;
    let weight_stderr = (est.stderr * est.stderr + param_var).sqrt();
    Ok(PoleData {
        sector,
        momentum: k,
        energy,
        energy_stderr,
        weight: est.weight,
        weight_stderr,
        provenance: if cfg.shots.is_exact() {
            Provenance::Exact
        } else {
            Provenance::Vqe
        },
    })
}

/// Particle-part poles: one bright pole per momentum channel.
pub fn particle_part(
    cfg: &PipelineConfig,
    gs_params: &AnsatzParams,
    gs_sigmas: &ParamSigmas,
) -> Result<(ExcitedPair, Vec<PoleData>)> {
    let pair = run_excited_pair(cfg, SectorKind::Particle, streams::PARTICLE_VQE)?;
    let mut rng = stream_rng(cfg.seed, streams::TRANSITIONS);
    let mut poles = Vec::new();
    for k in Momentum::BOTH {
        poles.push(bright_pole(
            cfg,
            SectorKind::Particle,
            k,
            gs_params,
            gs_sigmas,
            &pair,
            &mut rng,
        )?);
    }
    Ok((pair, poles))
}

/// Hole-part poles by either method. `Direct` runs its own excited-sector
/// search on the hole Hamiltonian; `Mirror` reuses the particle poles
/// through the particle-hole reflection (the mirrored pole keeps its
/// eigenenergy: the excitation blocks are degenerate, only sector and
/// momentum flip).
pub fn hole_part(
    cfg: &PipelineConfig,
    gs_params: &AnsatzParams,
    gs_sigmas: &ParamSigmas,
    method: HoleMethod,
    particle_poles: &[PoleData],
) -> Result<(Option<ExcitedPair>, Vec<PoleData>)> {
    match method {
        HoleMethod::Mirror => Ok((None, mirror_hole_poles(particle_poles))),
        HoleMethod::Direct => {
            let pair = run_excited_pair(cfg, SectorKind::Hole, streams::HOLE_VQE)?;
            let mut rng = stream_rng(cfg.seed, streams::HOLE_TRANSITIONS);
            let mut poles = Vec::new();
            for k in Momentum::BOTH {
                poles.push(bright_pole(
                    cfg,
                    SectorKind::Hole,
                    k,
                    gs_params,
                    gs_sigmas,
                    &pair,
                    &mut rng,
                )?);
            }
            Ok((Some(pair), poles))
        }
    }
}

/// Particle-hole mirror on pole data: flip sector and momentum, keep the
/// eigenenergy and weight.
pub fn mirror_hole_poles(particle_poles: &[PoleData]) -> Vec<PoleData> {
    particle_poles
        .iter()
        .filter(|p| p.sector == SectorKind::Particle)
        .map(|p| PoleData {
            sector: SectorKind::Hole,
            momentum: p.momentum.flipped(),
            ..*p
        })
        .collect()
}

/// Everything one spectrum run produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub ground: VqeTrace,
    pub excited_particle: ExcitedPair,
    pub excited_hole: Option<ExcitedPair>,
    pub poles: Vec<PoleData>,
    /// True when every stage's optimizer reported convergence.
    pub all_converged: bool,
}

/// Runs ground and excited searches, measures the transition amplitudes,
/// and returns the pole set ready for spectral assembly.
pub fn run_pipeline(cfg: &PipelineConfig, hole_method: HoleMethod) -> Result<PipelineResult> {
    let ground_cfg =
        cfg.vqe_config(VqeSector::Ground, SectorKind::Particle, streams::GROUND_VQE)?;
    let ground = crate::vqe::run_vqe(&ground_cfg)?;
    let gs_params = ground.final_params;
    let gs_sigmas = ground.param_sigmas;

    let (excited_particle, mut poles) = particle_part(cfg, &gs_params, &gs_sigmas)?;
    let (excited_hole, hole_poles) = hole_part(cfg, &gs_params, &gs_sigmas, hole_method, &poles)?;
    poles.extend(hole_poles);

    let all_converged = ground.converged
        && excited_particle.trace.converged
        && excited_hole
            .as_ref()
            .map(|p| p.trace.converged)
            .unwrap_or(true);
    Ok(PipelineResult {
        ground,
        excited_particle,
        excited_hole,
        poles,
        all_converged,
    })
}

/// Spectrum of a pipeline result on a grid.
pub fn pipeline_spectrum(
    result: &PipelineResult,
    omega_grid: &[f64],
    eta: f64,
) -> Result<SpectrumSeries> {
    spectral_function(
        &result.poles,
        result.ground.final_energy.value,
        omega_grid,
        eta,
    )
}

/// Uniform omega grid: `points` samples on [lo, hi] inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || hi.is_nan() || hi <= lo {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points and hi > lo, got [{lo}, {hi}] x {points}"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}
