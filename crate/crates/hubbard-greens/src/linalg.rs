//! Dense Hermitian eigensolver: cyclic Jacobi with complex rotations.
//!
//! All matrices in this crate are small (n <= 16), so a dependency-free
//! Jacobi sweep is both fast enough and bit-deterministic: fixed pivot
//! order, fixed threshold, fixed phase convention.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Hermiticity tolerance accepted as input to [`eigensystem`].
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm target, relative to the input norm.
const OFF_NORM_FACTOR: f64 = 1e-13;
/// Sweep budget before giving up.
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Column j is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: CMatrix,
}

/// Max entrywise deviation from Hermitian symmetry, |a_ij - conj(a_ji)|.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Max entrywise deviation of `m` from unitarity, |m^H m - I|.
pub fn unitarity_error(m: &CMatrix) -> f64 {
    let n = m.ncols();
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

fn off_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalize a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues are sorted ascending; each eigenvector's largest-magnitude
/// component is rotated to be real and positive so the output is unique up
/// to degeneracies. Deterministic for identical input.
pub fn eigensystem(matrix: &CMatrix) -> Result<EigenSystem> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "eigensystem requires a square matrix");
    let asym = hermiticity_error(matrix);
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            tolerance: HERMITICITY_TOL,
        });
    }

    let mut a = matrix.clone();
    // Symmetrize exactly so rounding in the input cannot bias the sweeps.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n, n);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(EigenSystem {
            eigenvalues: vec![0.0; n],
            eigenvectors: v,
        });
    }
    let target = OFF_NORM_FACTOR * scale;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= target / (n as f64 * n as f64) {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase * s; // s * e^{i phi}
                                    // columns: A <- A U
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * sp.conj();
                    a[(i, q)] = -aip * sp + aiq * c;
                }
                // rows: A <- U^H A
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * sp;
                    a[(q, j)] = -apj * sp.conj() + aqj * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // accumulate V <- V U
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * sp.conj();
                    v[(i, q)] = -vip * sp + viq * c;
                }
            }
        }
    }
    if !converged && off_norm(&a) > target {
        return Err(Error::EigenNoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        let mut column = v.column(src).clone_owned();
        // phase convention: largest-magnitude component real positive
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for i in 0..n {
            let nn = column[i].norm();
            if nn > best_norm {
                best_norm = nn;
                best = i;
            }
        }
        if best_norm > 0.0 {
            let ph = column[best] / best_norm;
            for i in 0..n {
                column[i] /= ph;
            }
        }
        eigenvectors.set_column(col, &column);
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Real matrix (row-major slice) promoted entrywise to complex.
pub fn complex_from_real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| Complex64::new(data[i * cols + j], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &CMatrix, es: &EigenSystem) -> f64 {
        let n = m.nrows();
        let mut worst = 0.0f64;
        for j in 0..n {
            let v = es.eigenvectors.column(j).clone_owned();
            let r = m * &v - &v * Complex64::new(es.eigenvalues[j], 0.0);
            worst = worst.max(r.norm());
        }
        worst
    }

    #[test]
    fn identity_matrix() {
        let m = CMatrix::identity(4, 4);
        let es = eigensystem(&m).unwrap();
        for (j, &lambda) in es.eigenvalues.iter().enumerate() {
            assert!((lambda - 1.0).abs() < 1e-14);
            assert!((es.eigenvectors[(j, j)].re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_by_two_particle_block() {
        // [[-3, 1], [1, -3]]: eigenvalues {-4, -2}, eigenvectors (1, -+1)/sqrt2
        let m = complex_from_real(2, 2, &[-3.0, 1.0, 1.0, -3.0]);
        let es = eigensystem(&m).unwrap();
        assert!((es.eigenvalues[0] + 4.0).abs() < 1e-12);
        assert!((es.eigenvalues[1] + 2.0).abs() < 1e-12);
        let inv = 1.0 / 2.0f64.sqrt();
        assert!((es.eigenvectors[(0, 0)].re - inv).abs() < 1e-12);
        assert!((es.eigenvectors[(1, 0)].re + inv).abs() < 1e-12);
        assert!((es.eigenvectors[(0, 1)].re - inv).abs() < 1e-12);
        assert!((es.eigenvectors[(1, 1)].re - inv).abs() < 1e-12);
        assert!(residual(&m, &es) < 1e-12);
    }

    #[test]
    fn hubbard_four_block_spectrum() {
        // upper-left 4x4 of the six-dim Hamiltonian at U=6, t=1:
        // eigenvalues {-(3+sqrt13), -6, 0, sqrt13 - 3}
        let m = complex_from_real(
            4,
            4,
            &[
                0.0, -1.0, 1.0, 0.0, //
                -1.0, -6.0, 0.0, -1.0, //
                1.0, 0.0, -6.0, 1.0, //
                0.0, -1.0, 1.0, 0.0,
            ],
        );
        let es = eigensystem(&m).unwrap();
        let s13 = 13.0f64.sqrt();
        let expected = [-(3.0 + s13), -6.0, 0.0, s13 - 3.0];
        for (got, want) in es.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
        assert!(residual(&m, &es) < 1e-10);
        assert!(unitarity_error(&es.eigenvectors) < 1e-10);
    }

    #[test]
    fn complex_hermitian_input() {
        let i = Complex64::new(0.0, 1.0);
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        m[(2, 2)] = Complex64::new(0.5, 0.0);
        m[(0, 1)] = 0.7 * i;
        m[(1, 0)] = -0.7 * i;
        m[(1, 2)] = Complex64::new(0.3, 0.4);
        m[(2, 1)] = Complex64::new(0.3, -0.4);
        let es = eigensystem(&m).unwrap();
        assert!(residual(&m, &es) < 1e-12);
        assert!(unitarity_error(&es.eigenvectors) < 1e-12);
        let trace: f64 = es.eigenvalues.iter().sum();
        assert!((trace - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = complex_from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        match eigensystem(&m) {
            Err(Error::NotHermitian { max_asymmetry, .. }) => {
                assert!((max_asymmetry - 1.0).abs() < 1e-14);
            }
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_output() {
        let m = complex_from_real(3, 3, &[1.0, 0.2, 0.1, 0.2, -2.0, 0.4, 0.1, 0.4, 0.7]);
        let a = eigensystem(&m).unwrap();
        let b = eigensystem(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.eigenvectors[(i, j)], b.eigenvectors[(i, j)]);
            }
        }
    }
}
