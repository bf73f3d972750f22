//! Photonic ansatz preparation and shot-sampled measurement.
//!
//! Two routes build the same six-dimensional state: the closed-form
//! expression of the ansatz and an element-by-element simulation of the
//! optical table (beam displacers interleaved with per-path rotation
//! plates). Measurement applies a setting's basis rotation and either reads
//! the outcome distribution exactly or draws one multinomial sample per
//! setting.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::model::{ry, MeasurementSetting, SIX_DIM};

/// Normalized state of the polarization (x) path qudit.
#[derive(Debug, Clone)]
pub struct SixState(CVector);

impl SixState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != SIX_DIM {
            return Err(Error::InvalidParameter(format!(
                "expected 6 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "state norm {norm} deviates from 1 by more than 1e-12"
            )));
        }
        Ok(Self(amplitudes))
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    /// |<other|self>|, the phase-insensitive overlap.
    pub fn overlap(&self, other: &SixState) -> f64 {
        self.0.dotc(&other.0).norm()
    }

    /// <self|O|self> for a Hermitian observable.
    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        self.0.dotc(&(observable * &self.0)).re
    }
}

/// The five variational angles of the ansatz (radians, 2pi-periodic).
/// The index set {1, 2, 4, 5, 6} follows the circuit layout; there is no
/// theta3.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AnsatzParams {
    pub theta1: f64,
    pub theta2: f64,
    pub theta4: f64,
    pub theta5: f64,
    pub theta6: f64,
}

impl AnsatzParams {
    pub fn new(theta1: f64, theta2: f64, theta4: f64, theta5: f64, theta6: f64) -> Result<Self> {
        let p = Self {
            theta1,
            theta2,
            theta4,
            theta5,
            theta6,
        };
        if !p.is_finite() {
            return Err(Error::InvalidParameter(
                "ansatz angles must be finite".into(),
            ));
        }
        Ok(p)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.theta1,
            self.theta2,
            self.theta4,
            self.theta5,
            self.theta6,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

/// Closed-form ansatz state,
/// |psi> = cos(t1/2)|psi_GS(t2,t4,t5)> - sin(t1/2)|psi_ES(t6)>.
pub fn prepare_ansatz(params: &AnsatzParams) -> Result<SixState> {
    if !params.is_finite() {
        return Err(Error::InvalidParameter(
            "ansatz angles must be finite".into(),
        ));
    }
    let (s1, c1) = (params.theta1 / 2.0).sin_cos();
    let (s2, c2) = (params.theta2 / 2.0).sin_cos();
    let (s4, c4) = (params.theta4 / 2.0).sin_cos();
    let (s5, c5) = (params.theta5 / 2.0).sin_cos();
    let (s6, c6) = (params.theta6 / 2.0).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let amplitudes = CVector::from_vec(vec![
        re(c1 * c2 * c4),
        re(-c1 * c2 * s4),
        re(-c1 * s2 * s5),
        re(-c1 * s2 * c5),
        re(-s1 * s6),
        re(-s1 * c6),
    ]);
    SixState::new(amplitudes)
}

/// State of the excited-sector manifold alone, (sin(t6/2), cos(t6/2)) on
/// |5>, |6>.
pub fn excited_manifold_state(theta6: f64) -> [Complex64; 2] {
    let (s6, c6) = (theta6 / 2.0).sin_cos();
    [Complex64::new(s6, 0.0), Complex64::new(c6, 0.0)]
}

fn ry_on_path(theta: f64, path: usize) -> CMatrix {
    let mut u = CMatrix::identity(SIX_DIM, SIX_DIM);
    let r = ry(theta);
    let (h, v) = (2 * path, 2 * path + 1);
    u[(h, h)] = Complex64::new(r[(0, 0)], 0.0);
    u[(h, v)] = Complex64::new(r[(0, 1)], 0.0);
    u[(v, h)] = Complex64::new(r[(1, 0)], 0.0);
    u[(v, v)] = Complex64::new(r[(1, 1)], 0.0);
    u
}

/// Beam displacer: |H,p> shifts up one path (cyclically, so the map stays
/// unitary on the truncated three-path space); |V,p> stays put.
fn beam_displacer() -> CMatrix {
    let mut u = CMatrix::zeros(SIX_DIM, SIX_DIM);
    for p in 0..3 {
        let up = (p + 2) % 3; // path p - 1 mod 3
        u[(2 * up, 2 * p)] = Complex64::new(1.0, 0.0);
        u[(2 * p + 1, 2 * p + 1)] = Complex64::new(1.0, 0.0);
    }
    u
}

/// Element-level preparation: photon injected as |H,path2>, then
/// Ry(t1)@path2, BD, Ry(t2)@path1, BD, and the per-path plates
/// Ry(t4)@path0, Ry(t5)@path1, Ry(t6)@path2.
///
/// This is the circuit-faithfulness route; it must agree with
/// [`prepare_ansatz`] up to global phase (see [`verify_element_layout`]).
pub fn prepare_ansatz_via_elements(params: &AnsatzParams) -> Result<SixState> {
    if !params.is_finite() {
        return Err(Error::InvalidParameter(
            "ansatz angles must be finite".into(),
        ));
    }
    let mut psi = CVector::zeros(SIX_DIM);
    psi[4] = Complex64::new(1.0, 0.0); // |H, path2>
    let bd = beam_displacer();
    psi = ry_on_path(params.theta1, 2) * psi;
    psi = &bd * psi;
    psi = ry_on_path(params.theta2, 1) * psi;
    psi = &bd * psi;
    psi = ry_on_path(params.theta4, 0) * psi;
    psi = ry_on_path(params.theta5, 1) * psi;
    psi = ry_on_path(params.theta6, 2) * psi;
    SixState::new(psi)
}

/// Checks the element sequence against the closed form on `samples`
/// uniformly random parameter sets; flags the layout as inconsistent if any
/// deviates (up to global phase) by more than 1e-12.
pub fn verify_element_layout(samples: usize, rng: &mut ChaCha12Rng) -> Result<()> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let params = AnsatzParams {
            theta1: rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU),
            theta2: rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU),
            theta4: rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU),
            theta5: rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU),
            theta6: rng.gen_range(-std::f64::consts::TAU..std::f64::consts::TAU),
        };
        let closed = prepare_ansatz(&params)?;
        let elements = prepare_ansatz_via_elements(&params)?;
        worst = worst.max(1.0 - elements.overlap(&closed));
    }
    if worst > 1e-12 {
        return Err(Error::InconsistentLayout(worst));
    }
    Ok(())
}

/// Shot budget per measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Shots {
    Exact,
    PerSetting(u64),
}

impl Shots {
    pub fn is_exact(self) -> bool {
        matches!(self, Shots::Exact)
    }
}

/// Expectation value with its statistical error.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ExpectationEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Shots spent on each setting; 0 in exact mode.
    pub shots_per_setting: u64,
    pub exact: bool,
}

/// One multinomial draw: counts over the six outcomes summing to `shots`.
///
/// Sampled by conditional binomials, so the cost is O(6) regardless of the
/// shot count; deterministic for a given RNG state.
pub fn sample_counts(probabilities: &[f64], shots: u64, rng: &mut ChaCha12Rng) -> Result<Vec<u64>> {
    if probabilities.len() != SIX_DIM {
        return Err(Error::InvalidProbabilities(format!(
            "expected 6 probabilities, got {}",
            probabilities.len()
        )));
    }
    if shots < 1 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    if probabilities.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::InvalidProbabilities(
            "negative or NaN probability".into(),
        ));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    let mut counts = vec![0u64; SIX_DIM];
    let mut remaining_shots = shots;
    let mut remaining_prob = total;
    for (i, &p) in probabilities.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        if i == SIX_DIM - 1 {
            counts[i] = remaining_shots;
            break;
        }
        let q = (p / remaining_prob).clamp(0.0, 1.0);
        let draw = if q >= 1.0 {
            remaining_shots
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining_shots, q)
                .map_err(|e| Error::InvalidProbabilities(e.to_string()))?
                .sample(rng)
        };
        counts[i] = draw;
        remaining_shots -= draw;
        remaining_prob -= p;
    }
    Ok(counts)
}

fn outcome_probabilities(state: &SixState, setting: &MeasurementSetting) -> Vec<f64> {
    let rotated = &setting.rotation * state.amplitudes();
    let mut p: Vec<f64> = rotated.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        for x in &mut p {
            *x /= total;
        }
    }
    p
}

/// Expectation of the observable assembled from `settings`.
///
/// Exact mode sums d_k p_k over every setting with zero stderr. Sampled
/// mode replaces p_k by counts/shots and reports the multinomial stderr,
/// stderr^2 = sum_settings [sum_k d_k^2 p^_k - (sum_k d_k p^_k)^2] / shots.
pub fn measure_expectation(
    state: &SixState,
    settings: &[MeasurementSetting],
    shots: Shots,
    rng: &mut ChaCha12Rng,
) -> Result<ExpectationEstimate> {
    match shots {
        Shots::Exact => {
            let mut value = 0.0;
            for setting in settings {
                let p = outcome_probabilities(state, setting);
                value += setting
                    .outcome_values
                    .iter()
                    .zip(&p)
                    .map(|(d, pk)| d * pk)
                    .sum::<f64>();
            }
            Ok(ExpectationEstimate {
                value,
                stderr: 0.0,
                shots_per_setting: 0,
                exact: true,
            })
        }
        Shots::PerSetting(n) => {
            if n < 1 {
                return Err(Error::InvalidParameter("shots must be >= 1".into()));
            }
            let mut value = 0.0;
            let mut variance = 0.0;
            for setting in settings {
                let p = outcome_probabilities(state, setting);
                let counts = sample_counts(&p, n, rng)?;
                let mut mean = 0.0;
                let mut second = 0.0;
                for (d, &c) in setting.outcome_values.iter().zip(&counts) {
                    let freq = c as f64 / n as f64;
                    mean += d * freq;
                    second += d * d * freq;
                }
                value += mean;
                variance += (second - mean * mean).max(0.0) / n as f64;
            }
            Ok(ExpectationEstimate {
                value,
                stderr: variance.sqrt(),
                shots_per_setting: n,
                exact: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_six_dim, hamiltonian_settings, SectorKind};
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn all_zero_angles_is_basis_one() {
        let p = AnsatzParams::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let s = prepare_ansatz(&p).unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let via = prepare_ansatz_via_elements(&p).unwrap();
        assert!((via.amplitudes()[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta1_minus_pi_selects_excited_manifold() {
        let p = AnsatzParams::new(-std::f64::consts::PI, 0.3, -0.7, 1.1, 0.9).unwrap();
        let s = prepare_ansatz(&p).unwrap();
        for i in 0..4 {
            assert!(s.amplitudes()[i].norm() < 1e-15);
        }
        let es = excited_manifold_state(0.9);
        let ovl = (s.amplitudes()[4].conj() * es[0] + s.amplitudes()[5].conj() * es[1]).norm();
        assert!((ovl - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reference_final_parameters_reproduce_ground_coefficients() {
        let p = AnsatzParams::new(0.0, -1.56, -2.56, -2.55, 0.0).unwrap();
        let s = prepare_ansatz(&p).unwrap();
        let expected = [0.205, 0.677, -0.677, 0.205, 0.0, 0.0];
        for (i, want) in expected.iter().enumerate() {
            assert!(
                (s.amplitudes()[i].re - want).abs() < 5e-3,
                "amplitude {i}: {} vs {want}",
                s.amplitudes()[i].re
            );
        }
    }

    #[test]
    fn norm_holds_for_random_parameters() {
        let mut r = rng(11);
        for _ in 0..1000 {
            let p = AnsatzParams {
                theta1: r.gen_range(-10.0..10.0),
                theta2: r.gen_range(-10.0..10.0),
                theta4: r.gen_range(-10.0..10.0),
                theta5: r.gen_range(-10.0..10.0),
                theta6: r.gen_range(-10.0..10.0),
            };
            let s = prepare_ansatz(&p).unwrap();
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn element_layout_matches_closed_form() {
        verify_element_layout(100, &mut rng(5)).unwrap();
    }

    #[test]
    fn deterministic_counts_and_edge_cases() {
        let p = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let c = sample_counts(&p, 1000, &mut rng(3)).unwrap();
        assert_eq!(c, vec![1000, 0, 0, 0, 0, 0]);

        let uniform = [1.0 / 6.0; 6];
        let a = sample_counts(&uniform, 600_000, &mut rng(9)).unwrap();
        let b = sample_counts(&uniform, 600_000, &mut rng(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 600_000);
        // each count within 5 sigma of 1e5
        let sigma = (600_000.0_f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for &c in &a {
            assert!((c as f64 - 100_000.0).abs() < 5.0 * sigma);
        }

        assert!(sample_counts(&[0.5; 6], 10, &mut rng(0)).is_err());
        assert!(sample_counts(&uniform, 0, &mut rng(0)).is_err());
        assert!(sample_counts(&[-0.1, 0.3, 0.2, 0.2, 0.2, 0.2], 10, &mut rng(0)).is_err());
    }

    #[test]
    fn counts_mean_converges_to_probabilities() {
        let probs = [0.4, 0.25, 0.15, 0.1, 0.07, 0.03];
        let shots = 2000u64;
        let reps = 10_000;
        let mut sums = [0.0f64; 6];
        let mut r = rng(21);
        for _ in 0..reps {
            let c = sample_counts(&probs, shots, &mut r).unwrap();
            for i in 0..6 {
                sums[i] += c[i] as f64 / shots as f64;
            }
        }
        for i in 0..6 {
            let mean = sums[i] / reps as f64;
            let sigma = (probs[i] * (1.0 - probs[i]) / shots as f64).sqrt();
            assert!(
                (mean - probs[i]).abs() < 5.0 * sigma / (reps as f64).sqrt(),
                "outcome {i}: mean {mean} vs p {}",
                probs[i]
            );
        }
    }

    #[test]
    fn exact_expectation_matches_direct_quadratic_form() {
        let mut r = rng(17);
        let settings = hamiltonian_settings(1.0, 6.0).unwrap();
        let h = build_six_dim(1.0, 6.0, SectorKind::Particle)
            .unwrap()
            .matrix;
        for _ in 0..50 {
            let p = AnsatzParams {
                theta1: r.gen_range(-3.0..3.0),
                theta2: r.gen_range(-3.0..3.0),
                theta4: r.gen_range(-3.0..3.0),
                theta5: r.gen_range(-3.0..3.0),
                theta6: r.gen_range(-3.0..3.0),
            };
            let s = prepare_ansatz(&p).unwrap();
            let est = measure_expectation(&s, &settings, Shots::Exact, &mut r).unwrap();
            assert!((est.value - s.expectation(&h)).abs() < 1e-10);
            assert_eq!(est.stderr, 0.0);
        }
    }

    #[test]
    fn sampled_estimator_is_unbiased() {
        // exact ground state of the six-dim Hamiltonian at U/t = 6
        let settings = hamiltonian_settings(1.0, 6.0).unwrap();
        let boa = (3.0 + 13.0f64.sqrt()) / 2.0;
        let theta45 = -2.0 * boa.atan();
        let p =
            AnsatzParams::new(0.0, -std::f64::consts::FRAC_PI_2, theta45, theta45, 0.0).unwrap();
        let s = prepare_ansatz(&p).unwrap();
        let exact = measure_expectation(&s, &settings, Shots::Exact, &mut rng(0))
            .unwrap()
            .value;
        assert!((exact + 6.605_551_275_463_989).abs() < 1e-12);

        let seeds = 200;
        let mut mean = 0.0;
        let mut mean_stderr = 0.0;
        for k in 0..seeds {
            let est =
                measure_expectation(&s, &settings, Shots::PerSetting(10_000), &mut rng(100 + k))
                    .unwrap();
            mean += est.value;
            mean_stderr += est.stderr;
        }
        mean /= seeds as f64;
        mean_stderr /= seeds as f64;
        assert!(
            (mean - exact).abs() < 5.0 * mean_stderr / (seeds as f64).sqrt(),
            "mean {mean} vs exact {exact} (stderr {mean_stderr})"
        );
    }
}
