//! Fermionic operator algebra on the full 16-dimensional Fock space of the
//! two-site model.
//!
//! Mode ordering is fixed as (site0 up, site0 down, site1 up, site1 down) =
//! modes 0..3; a basis state's Fock index has bit m set iff mode m is
//! occupied. Creation operators carry the Jordan-Wigner sign
//! (-1)^(number of occupied modes below m), i.e. basis states are
//! (c0u^)^(n0) (c0d^)^(n1) (c1u^)^(n2) (c1d^)^(n3) |vac>.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Dimension of the electron Fock space (2^4 modes).
pub const FOCK_DIM: usize = 16;

/// Lattice site of the two-site chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Zero,
    One,
}

/// Electron spin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// Ladder operator flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermiOp {
    Create,
    Annihilate,
}

/// Momentum label for the two-site chain, k in {0, pi}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Momentum {
    Zero,
    Pi,
}

impl Momentum {
    /// Sign (-1)^(k/pi) in the momentum combination of the site operators.
    pub fn site1_sign(self) -> f64 {
        match self {
            Momentum::Zero => 1.0,
            Momentum::Pi => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Momentum::Zero => "k=0",
            Momentum::Pi => "k=pi",
        }
    }

    pub const BOTH: [Momentum; 2] = [Momentum::Zero, Momentum::Pi];

    /// The other momentum value (k + pi mod 2pi).
    pub fn flipped(self) -> Momentum {
        match self {
            Momentum::Zero => Momentum::Pi,
            Momentum::Pi => Momentum::Zero,
        }
    }
}

/// One basis state of the Fock space, identified by its occupation bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasisState(pub usize);

impl FockBasisState {
    pub fn occupation(self, mode: usize) -> usize {
        (self.0 >> mode) & 1
    }

    pub fn n_up(self) -> usize {
        self.occupation(0) + self.occupation(2)
    }

    pub fn n_down(self) -> usize {
        self.occupation(1) + self.occupation(3)
    }
}

/// Flattened mode index for (site, spin) under the fixed ordering.
pub fn mode_index(site: Site, spin: Spin) -> usize {
    let s = match site {
        Site::Zero => 0,
        Site::One => 1,
    };
    let sp = match spin {
        Spin::Up => 0,
        Spin::Down => 1,
    };
    2 * s + sp
}

fn creation_matrix(mode: usize) -> CMatrix {
    let mut m = CMatrix::zeros(FOCK_DIM, FOCK_DIM);
    for idx in 0..FOCK_DIM {
        let state = FockBasisState(idx);
        if state.occupation(mode) == 0 {
            let below: usize = (0..mode).map(|j| state.occupation(j)).sum();
            let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(idx | (1 << mode), idx)] = Complex64::new(sign, 0.0);
        }
    }
    m
}

/// The 16x16 matrix of c^dagger or c for one mode, with Jordan-Wigner signs.
pub fn fermion_operator(site: Site, spin: Spin, kind: FermiOp) -> CMatrix {
    let c = creation_matrix(mode_index(site, spin));
    match kind {
        FermiOp::Create => c,
        FermiOp::Annihilate => c.adjoint(),
    }
}

/// Number operator n_{site,spin} = c^dagger c.
pub fn number_operator(site: Site, spin: Spin) -> CMatrix {
    let c = fermion_operator(site, spin, FermiOp::Create);
    &c * c.adjoint()
}

/// Total up-spin (or down-spin) electron number operator.
pub fn total_number_operator(spin: Spin) -> CMatrix {
    number_operator(Site::Zero, spin) + number_operator(Site::One, spin)
}

/// The two-site Hubbard Hamiltonian at half-filling convention,
/// H = -t sum_s (c0s^ c1s + h.c.) + U sum_i n_iu n_id - U/2 sum_is n_is.
pub fn build_hubbard(t: f64, u: f64) -> Result<CMatrix> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "hopping t must be > 0, got {t}"
        )));
    }
    if u.is_nan() || u < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "repulsion U must be >= 0, got {u}"
        )));
    }
    let mut h = CMatrix::zeros(FOCK_DIM, FOCK_DIM);
    let mt = Complex64::new(-t, 0.0);
    for spin in [Spin::Up, Spin::Down] {
        let c0 = fermion_operator(Site::Zero, spin, FermiOp::Create);
        let c1 = fermion_operator(Site::One, spin, FermiOp::Create);
        let hop = &c0 * c1.adjoint() + &c1 * c0.adjoint();
        h += hop * mt;
    }
    for site in [Site::Zero, Site::One] {
        let nu = number_operator(site, Spin::Up);
        let nd = number_operator(site, Spin::Down);
        h += &nu * &nd * Complex64::new(u, 0.0);
        h += (nu + nd) * Complex64::new(-u / 2.0, 0.0);
    }
    Ok(h)
}

/// Fock indices of the (N_up, N_down) symmetry sector.
///
/// The three sectors the spectral function needs follow the ordering the
/// six-dimensional model uses for its basis:
///   (1,1): {c0u^ c0d^, c0u^ c1d^, c0d^ c1u^, c1u^ c1d^} |vac>
///   (2,1): {c0u^ c1u^ c1d^, c0u^ c0d^ c1u^} |vac>
///   (0,1): {c0d^, c1d^} |vac>
/// (every listed product is already in ascending mode order, so each basis
/// vector carries coefficient +1). All other sectors use ascending index.
pub fn sector_indices(n_up: usize, n_down: usize) -> Result<Vec<usize>> {
    if n_up > 2 || n_down > 2 {
        return Err(Error::InvalidParameter(format!(
            "sector counts must be in 0..=2, got ({n_up}, {n_down})"
        )));
    }
    let fixed: Option<Vec<usize>> = match (n_up, n_down) {
        (1, 1) => Some(vec![0b0011, 0b1001, 0b0110, 0b1100]),
        (2, 1) => Some(vec![0b1101, 0b0111]),
        (0, 1) => Some(vec![0b0010, 0b1000]),
        _ => None,
    };
    if let Some(v) = fixed {
        return Ok(v);
    }
    Ok((0..FOCK_DIM)
        .filter(|&i| {
            let s = FockBasisState(i);
            s.n_up() == n_up && s.n_down() == n_down
        })
        .collect())
}

/// Restriction of a Fock-space operator to the given row and column index sets.
pub fn project(op: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| op[(rows[i], cols[j])])
}

/// Momentum-space up-spin annihilation operator on the full Fock space,
/// (c_{0,up} + (-1)^(k/pi) c_{1,up}) / sqrt(2).
pub fn momentum_annihilation_full(k: Momentum) -> CMatrix {
    let c0 = fermion_operator(Site::Zero, Spin::Up, FermiOp::Annihilate);
    let c1 = fermion_operator(Site::One, Spin::Up, FermiOp::Annihilate);
    (c0 + c1 * Complex64::new(k.site1_sign(), 0.0)) * Complex64::new(1.0 / 2.0f64.sqrt(), 0.0)
}
