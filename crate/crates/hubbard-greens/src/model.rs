//! The six-dimensional working representation: the reduced Hamiltonian on
//! H(1,1) + H(2,1) (or H(1,1) + H(0,1)), the polarization (x) path basis map,
//! the three-term measurement decomposition, and the 2x4 blocks of the
//! momentum-space ladder operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, Momentum};
use crate::linalg::{self, hermiticity_error, CMatrix};

pub const SIX_DIM: usize = 6;

/// Which 2x2 excitation block sits under the 4-dim half-filled block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SectorKind {
    /// One added up-spin electron: H(1,1) + H(2,1).
    Particle,
    /// One removed up-spin electron: H(1,1) + H(0,1).
    Hole,
}

impl SectorKind {
    pub fn label(self) -> &'static str {
        match self {
            SectorKind::Particle => "particle",
            SectorKind::Hole => "hole",
        }
    }

    pub fn flipped(self) -> SectorKind {
        match self {
            SectorKind::Particle => SectorKind::Hole,
            SectorKind::Hole => SectorKind::Particle,
        }
    }
}

/// Hermitian observable on the six-dimensional space.
#[derive(Debug, Clone)]
pub struct SixObservable {
    pub matrix: CMatrix,
    pub label: String,
}

impl SixObservable {
    pub fn new(matrix: CMatrix, label: impl Into<String>) -> Result<Self> {
        assert_eq!(matrix.nrows(), SIX_DIM);
        assert_eq!(matrix.ncols(), SIX_DIM);
        let asym = hermiticity_error(&matrix);
        if asym > 1e-12 {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
                tolerance: 1e-12,
            });
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }
}

/// Ordered |1>..|6> labels of the photonic basis and their fermionic meaning.
///
/// Index i (0-based) encodes polarization i%2 (0 = H, 1 = V) on path i/2.
/// Positions 1..4 carry the (1,1) basis in the fixed order; positions 5..6
/// carry the (2,1) basis (particle) or the (0,1) basis (hole).
#[derive(Debug, Clone)]
pub struct BasisMap {
    pub sector: SectorKind,
    pub labels: [&'static str; SIX_DIM],
    /// Fock index of each photonic basis state.
    pub fock_indices: [usize; SIX_DIM],
}

impl BasisMap {
    pub fn new(sector: SectorKind) -> Self {
        let labels = [
            "|H,path0>",
            "|V,path0>",
            "|H,path1>",
            "|V,path1>",
            "|H,path2>",
            "|V,path2>",
        ];
        let half = fock::sector_indices(1, 1).expect("fixed sector");
        let tail = match sector {
            SectorKind::Particle => fock::sector_indices(2, 1).expect("fixed sector"),
            SectorKind::Hole => fock::sector_indices(0, 1).expect("fixed sector"),
        };
        let mut fock_indices = [0usize; SIX_DIM];
        fock_indices[..4].copy_from_slice(&half);
        fock_indices[4..].copy_from_slice(&tail);
        Self {
            sector,
            labels,
            fock_indices,
        }
    }
}

/// The six-dimensional Hamiltonian.
///
/// The particle variant is the printed reduced matrix; the hole variant
/// replaces the lower 2x2 block by the literal (0,1) projection of the
/// Hubbard Hamiltonian, whose off-diagonal is -t (see `verify_six_dim` for
/// the sign bookkeeping against the printed +t).
pub fn build_six_dim(t: f64, u: f64, sector: SectorKind) -> Result<SixObservable> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "hopping t must be > 0, got {t}"
        )));
    }
    let s = match sector {
        SectorKind::Particle => t,
        SectorKind::Hole => -t,
    };
    #[rustfmt::skip]
    let data = [
        0.0,  -t,   t,  0.0,      0.0,      0.0,
         -t,  -u, 0.0,   -t,      0.0,      0.0,
          t, 0.0,  -u,    t,      0.0,      0.0,
        0.0,  -t,   t,  0.0,      0.0,      0.0,
        0.0, 0.0, 0.0,  0.0, -u / 2.0,        s,
        0.0, 0.0, 0.0,  0.0,        s, -u / 2.0,
    ];
    SixObservable::new(
        linalg::complex_from_real(SIX_DIM, SIX_DIM, &data),
        format!("H_six ({})", sector.label()),
    )
}

/// A basis-rotation unitary plus the diagonal outcome values measured after
/// it: the unit of simulated experiment.
#[derive(Debug, Clone)]
pub struct MeasurementSetting {
    /// Maps the state to the outcome basis: p_k = |(rotation psi)_k|^2.
    pub rotation: CMatrix,
    /// Value assigned to each of the six outcomes, in units of t.
    pub outcome_values: Vec<f64>,
    pub label: String,
}

impl MeasurementSetting {
    /// The observable this setting measures, rotation^H diag(d) rotation.
    pub fn observable(&self) -> CMatrix {
        let d = CMatrix::from_fn(SIX_DIM, SIX_DIM, |i, j| {
            if i == j {
                Complex64::new(self.outcome_values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        self.rotation.adjoint() * d * &self.rotation
    }
}

fn setting_from_term(term: &CMatrix, label: &str) -> Result<MeasurementSetting> {
    let es = linalg::eigensystem(term)?;
    Ok(MeasurementSetting {
        rotation: es.eigenvectors.adjoint(),
        outcome_values: es.eigenvalues,
        label: label.to_string(),
    })
}

/// The pol (x) path structure of the two off-diagonal Hamiltonian terms.
/// Basis index = 2*path + pol with pol 0 = H, 1 = V.
fn hopping_terms(t: f64, sector: SectorKind) -> (CMatrix, CMatrix) {
    let mut term_z = CMatrix::zeros(SIX_DIM, SIX_DIM);
    for pol in 0..2 {
        let z = if pol == 0 { 1.0 } else { -1.0 };
        let (i, j) = (pol, 2 + pol); // path0 <-> path1, same polarization
        term_z[(i, j)] = Complex64::new(t * z, 0.0);
        term_z[(j, i)] = Complex64::new(t * z, 0.0);
    }
    let mut term_x = CMatrix::zeros(SIX_DIM, SIX_DIM);
    let path2_sign = match sector {
        SectorKind::Particle => 1.0,
        SectorKind::Hole => -1.0,
    };
    for (path, sign) in [(0usize, -1.0), (1, 1.0), (2, path2_sign)] {
        let (i, j) = (2 * path, 2 * path + 1); // H <-> V within one path
        term_x[(i, j)] = Complex64::new(t * sign, 0.0);
        term_x[(j, i)] = Complex64::new(t * sign, 0.0);
    }
    (term_z, term_x)
}

/// The three measurement settings that decompose the particle-variant
/// Hamiltonian: t Z(x)(path01 swap), t X(x)(path parity), and the diagonal.
pub fn hamiltonian_settings(t: f64, u: f64) -> Result<Vec<MeasurementSetting>> {
    hamiltonian_settings_for(t, u, SectorKind::Particle)
}

/// Same decomposition for either Hamiltonian variant; only the path-2 sign
/// of the X term differs in the hole case.
pub fn hamiltonian_settings_for(
    t: f64,
    u: f64,
    sector: SectorKind,
) -> Result<Vec<MeasurementSetting>> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "hopping t must be > 0, got {t}"
        )));
    }
    let (term_z, term_x) = hopping_terms(t, sector);
    let diag = vec![0.0, -u, -u, 0.0, -u / 2.0, -u / 2.0];
    Ok(vec![
        setting_from_term(&term_z, "t Z(x)(|p0><p1| + |p1><p0|)")?,
        setting_from_term(&term_x, "t X(x)(-|p0><p0| + |p1><p1| +- |p2><p2|)")?,
        MeasurementSetting {
            rotation: CMatrix::identity(SIX_DIM, SIX_DIM),
            outcome_values: diag,
            label: "diagonal in |k>".to_string(),
        },
    ])
}

/// Matrix block of c~dagger_{k,up} mapping the (1,1) basis into the (2,1)
/// basis; entry (m, n) = <(2,1)_m| c~dagger_k |(1,1)_n>. All signs come from
/// projecting the full Fock-space operator.
pub fn momentum_creation_block(k: Momentum) -> CMatrix {
    let op = fock::momentum_annihilation_full(k).adjoint();
    let rows = fock::sector_indices(2, 1).expect("fixed sector");
    let cols = fock::sector_indices(1, 1).expect("fixed sector");
    fock::project(&op, &rows, &cols)
}

/// Matrix block of c~_{k,up} mapping the (1,1) basis into the (0,1) basis.
pub fn momentum_annihilation_block(k: Momentum) -> CMatrix {
    let op = fock::momentum_annihilation_full(k);
    let rows = fock::sector_indices(0, 1).expect("fixed sector");
    let cols = fock::sector_indices(1, 1).expect("fixed sector");
    fock::project(&op, &rows, &cols)
}

/// Momentum ladder-operator block for a given sector: creation for the
/// particle sector, annihilation for the hole sector.
pub fn momentum_block(k: Momentum, sector: SectorKind) -> CMatrix {
    match sector {
        SectorKind::Particle => momentum_creation_block(k),
        SectorKind::Hole => momentum_annihilation_block(k),
    }
}

/// Ry rotation of the polarization qubit, exactly as realized by the paired
/// half-wave plates: cos(t/2)(|H><H| + |V><V|) + sin(t/2)(|H><V| - |V><H|).
pub fn ry(theta: f64) -> nalgebra::Matrix2<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    nalgebra::Matrix2::new(c, s, -s, c)
}
