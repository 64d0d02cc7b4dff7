//! Concurrence, fidelity and the spin-correlation matrix.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron, pauli_y, paulis, psd_sqrt, singular_values, ComplexMatrix, C64, ZERO,
};
use crate::states::DensityMatrix;

/// A state whose second eigenvalue is below this is treated as pure.
/// Square roots of round-off eigenvalues would otherwise add ~1e-8 noise.
pub const PURE_TOL: f64 = 1e-14;

/// `√λ₁·v₁` when `m` is rank one within [`PURE_TOL`].
fn rank_one_vector(m: &ComplexMatrix) -> Result<Option<Vec<C64>>> {
    let eig = hermitian_eig(m)?;
    if eig.eigenvalues.len() < 2 || eig.eigenvalues[1].abs() > PURE_TOL {
        return Ok(None);
    }
    let scale = eig.eigenvalues[0].max(0.0).sqrt();
    let n = eig.eigenvalues.len();
    Ok(Some(
        (0..n).map(|i| eig.eigenvectors[(i, 0)] * scale).collect(),
    ))
}

/// ⟨v|m|v⟩ for Hermitian m.
fn expectation(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let n = v.len();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Spin-flipped state (σy⊗σy) ρ* (σy⊗σy).
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = kron(&pauli_y(), &pauli_y());
    &(&yy * &rho.conj()) * &yy
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots of the eigenvalues of ρ ρ̃ are the singular values of
/// √ρ √ρ̃, which are computed directly. Pure states use |⟨ψ|σy⊗σy|ψ*⟩|.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    rho.require_two_qubit()?;
    let m = rho.matrix();
    if let Some(psi) = rank_one_vector(m)? {
        let yy = kron(&pauli_y(), &pauli_y());
        let mut acc = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                acc += psi[i] * yy[(i, j)] * psi[j];
            }
        }
        return Ok(acc.norm());
    }
    let root = psd_sqrt(m)?;
    let sigma = singular_values(&(&root * &spin_flip(&root)))?;
    let (head, tail) = sigma.split_first().expect("non-empty spectrum");
    Ok((head - tail.iter().sum::<f64>()).max(0.0))
}

/// Uhlmann fidelity Tr√(√ρ σ √ρ) (not squared), evaluated as the trace norm
/// of √ρ √σ.
///
/// When either state is pure this reduces to √⟨ψ|other|ψ⟩, which is used directly.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let (a, b) = (rho.matrix(), sigma.matrix());
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::Dimension {
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    if let Some(psi) = rank_one_vector(a)? {
        return Ok(expectation(b, &psi).max(0.0).sqrt());
    }
    if let Some(phi) = rank_one_vector(b)? {
        return Ok(expectation(a, &phi).max(0.0).sqrt());
    }
    let product = &psd_sqrt(a)? * &psd_sqrt(b)?;
    Ok(singular_values(&product)?.iter().sum())
}

/// T_ij = Tr[ρ (σ_i ⊗ σ_j)] for i, j ∈ {x, y, z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    /// Σ T_ij².
    pub fn frobenius_sq(&self) -> f64 {
        self.t.iter().flatten().map(|x| x * x).sum()
    }
}

pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix> {
    rho.require_two_qubit()?;
    let p = paulis();
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let op = kron(&p[i + 1], &p[j + 1]);
            *entry = rho.matrix().trace_product(&op).re;
        }
    }
    Ok(CorrelationMatrix { t })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ZERO};
    use crate::states::{pure_psi, target_state, StateFamilyParams, MU_MAX};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn concurrence_of_psi_family() {
        for th in [0.0, 0.1, 0.3, 0.5, FRAC_PI_4] {
            let c = concurrence(&pure_psi(th).unwrap()).unwrap();
            let brute = 2.0 * (th.cos() * th.sin()).abs();
            assert!((c - brute).abs() < 1e-14, "theta {th}: {c} vs {brute}");
        }
    }

    #[test]
    fn concurrence_of_werner_states() {
        for v in [0.0, 0.2, 1.0 / 3.0, 0.5, MU_MAX, 0.8, 1.0] {
            let c = concurrence(&DensityMatrix::werner(v)).unwrap();
            let closed = ((3.0 * v - 1.0) / 2.0).max(0.0);
            assert!((c - closed).abs() < 1e-12, "v {v}: {c} vs {closed}");
        }
        let c = concurrence(&DensityMatrix::werner(MU_MAX)).unwrap();
        assert!((c - 0.366_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn concurrence_zero_for_separable() {
        assert_eq!(
            concurrence(&DensityMatrix::maximally_mixed(4)).unwrap(),
            0.0
        );
        let a = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let b = DensityMatrix::maximally_mixed(2).mix(
            &DensityMatrix::pure(&[C64::new(1.0, 0.0), ZERO]).unwrap(),
            0.3,
        );
        let c = concurrence(&DensityMatrix::product(&a, &b)).unwrap();
        assert!(c < 1e-12);
    }

    #[test]
    fn concurrence_rejects_qubit() {
        assert!(concurrence(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let rho = target_state(&StateFamilyParams::new(0.7, 0.4).unwrap()).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);

        let hh = DensityMatrix::pure(&[C64::new(1.0, 0.0), ZERO, ZERO, ZERO]).unwrap();
        let vv = DensityMatrix::pure(&[ZERO, ZERO, ZERO, C64::new(1.0, 0.0)]).unwrap();
        assert_eq!(fidelity(&hh, &vv).unwrap(), 0.0);

        let f = fidelity(
            &DensityMatrix::maximally_mixed(4),
            &DensityMatrix::bell_phi_plus(),
        )
        .unwrap();
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_shape_mismatch() {
        let e = fidelity(
            &DensityMatrix::maximally_mixed(4),
            &DensityMatrix::maximally_mixed(2),
        );
        assert!(matches!(e, Err(Error::Dimension { .. })));
    }

    #[test]
    fn correlation_examples() {
        let t = correlation_matrix(&DensityMatrix::bell_phi_plus()).unwrap();
        let want = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.t[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        let a = 0.42;
        let t = correlation_matrix(
            &target_state(&StateFamilyParams::new(a, FRAC_PI_4).unwrap()).unwrap(),
        )
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.t[i][j] - a * want[i][j]).abs() < 1e-15);
            }
        }
        assert_eq!(
            correlation_matrix(&DensityMatrix::maximally_mixed(4))
                .unwrap()
                .frobenius_sq(),
            0.0
        );
    }
}
