//! The target state family and the two constructed witness states.
//!
//! For a two-qubit state ρ and weights μ₁, μ₂ ∈ [0, 1/√3]:
//!
//! * τ¹ = μ₁ ρ + (1 − μ₁) ρ_A ⊗ 𝕀/2. If τ¹ is entangled, Bob can steer Alice.
//! * τ² = μ₂ ρ + (1 − μ₂) 𝕀/2 ⊗ ρ_B. If τ² is entangled, Alice can steer Bob.
//!
//! The target family is ρ(α, θ) = α |ψ(θ)⟩⟨ψ(θ)| + (1 − α) 𝕀/2 ⊗ ρ_B with
//! |ψ(θ)⟩ = cos θ |HH⟩ + sin θ |VV⟩ and ρ_B the marginal of the pure part.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, kron, partial_trace, ComplexMatrix, Subsystem, C64, HERMITIAN_TOL, PSD_TOL, ZERO,
};

/// 1/√3, the largest admissible mixing weight and the default for both μ.
pub const MU_MAX: f64 = 0.577_350_269_189_625_8;

/// Slack on the irrational upper bounds (π/4 for θ, 1/√3 for μ) so that
/// values typed at four-decimal precision are accepted as-is.
pub const RANGE_SLACK: f64 = 1e-4;

pub const TRACE_TOL: f64 = 1e-10;

/// Parameters (α, θ, μ₁, μ₂) of the target family and its constructed states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFamilyParams {
    pub alpha: f64,
    pub theta: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl StateFamilyParams {
    /// Validated parameters with μ₁ = μ₂ = 1/√3.
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        Self::with_mu(alpha, theta, MU_MAX, MU_MAX)
    }

    pub fn with_mu(alpha: f64, theta: f64, mu1: f64, mu2: f64) -> Result<Self> {
        let p = Self {
            alpha,
            theta,
            mu1,
            mu2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_theta(self.theta)?;
        check_mu("mu1", self.mu1)?;
        check_mu("mu2", self.mu2)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    Ok(())
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_4 + RANGE_SLACK).contains(&theta) {
        return Err(Error::Parameter {
            name: "theta",
            value: theta,
            range: "[0, pi/4]",
        });
    }
    Ok(())
}

pub(crate) fn check_mu(name: &'static str, mu: f64) -> Result<()> {
    if !(0.0..=MU_MAX + RANGE_SLACK).contains(&mu) {
        return Err(Error::Parameter {
            name,
            value: mu,
            range: "[0, 1/sqrt(3)]",
        });
    }
    Ok(())
}

/// A validated density matrix (4x4 for two qubits, 2x2 for marginals).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Wraps `m` after checking Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let report = validate(&m);
        if !report.is_valid() {
            return Err(Error::InvalidState(report.to_string()));
        }
        Ok(Self(m))
    }

    /// Wraps `m` without checks. Callers must uphold the invariants.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Projector onto a (not necessarily normalised) state vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::projector(&v)))
    }

    /// |Φ⁺⟩ = (|HH⟩ + |VV⟩)/√2.
    pub fn bell_phi_plus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self(ComplexMatrix::projector(&[h, ZERO, ZERO, h]))
    }

    /// Werner state v |Φ⁺⟩⟨Φ⁺| + (1 − v) 𝕀/4.
    pub fn werner(visibility: f64) -> Self {
        Self::bell_phi_plus().mix(&Self::maximally_mixed(4), visibility)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self(kron(&a.0, &b.0))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Self {
        Self(&self.0.scale(w) + &other.0.scale(1.0 - w))
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        Ok(Self(partial_trace(&self.0, keep)?))
    }

    pub fn validate(&self) -> ValidityReport {
        validate(&self.0)
    }

    pub(crate) fn require_two_qubit(&self) -> Result<()> {
        if self.0.rows() != 4 || self.0.cols() != 4 {
            return Err(Error::dimension("4x4", self.0.rows(), self.0.cols()));
        }
        Ok(())
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Hermiticity, trace and positivity defects of a candidate state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    /// `max |m − m†|`.
    pub hermiticity_defect: f64,
    /// `|Tr m − 1|`.
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl ValidityReport {
    pub fn hermiticity_flagged(&self) -> bool {
        self.hermiticity_defect > HERMITIAN_TOL
    }

    pub fn trace_flagged(&self) -> bool {
        self.trace_defect > TRACE_TOL
    }

    pub fn positivity_flagged(&self) -> bool {
        self.min_eigenvalue < -PSD_TOL
    }

    pub fn is_valid(&self) -> bool {
        !(self.hermiticity_flagged() || self.trace_flagged() || self.positivity_flagged())
    }
}

impl std::fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity defect {:e}{}, trace defect {:e}{}, min eigenvalue {:e}{}",
            self.hermiticity_defect,
            if self.hermiticity_flagged() {
                " (!)"
            } else {
                ""
            },
            self.trace_defect,
            if self.trace_flagged() { " (!)" } else { "" },
            self.min_eigenvalue,
            if self.positivity_flagged() {
                " (!)"
            } else {
                ""
            },
        )
    }
}

/// Reports how far `m` is from being a density matrix. Never fails.
pub fn validate(m: &ComplexMatrix) -> ValidityReport {
    if !m.is_square() {
        return ValidityReport {
            hermiticity_defect: f64::INFINITY,
            trace_defect: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
        };
    }
    let hermiticity_defect = m.hermiticity_defect();
    let tr = m.trace();
    let trace_defect = (tr - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = hermitian_eig(&m.hermitian_part())
        .map(|e| e.min_eigenvalue())
        .unwrap_or(f64::NEG_INFINITY);
    ValidityReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
    }
}

/// |ψ(θ)⟩⟨ψ(θ)| with |ψ(θ)⟩ = cos θ |HH⟩ + sin θ |VV⟩.
pub fn pure_psi(theta: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    Ok(DensityMatrix(psi_projector(theta)))
}

fn psi_projector(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::projector(&[C64::new(c, 0.0), ZERO, ZERO, C64::new(s, 0.0)])
}

/// ρ(α, θ) = α |ψ(θ)⟩⟨ψ(θ)| + (1 − α) 𝕀/2 ⊗ Tr_A|ψ(θ)⟩⟨ψ(θ)|.
pub fn target_state(p: &StateFamilyParams) -> Result<DensityMatrix> {
    check_alpha(p.alpha)?;
    check_theta(p.theta)?;
    let psi = psi_projector(p.theta);
    let rho_b = partial_trace(&psi, Subsystem::B)?;
    let noise = kron(&ComplexMatrix::identity(2).scale(0.5), &rho_b);
    Ok(DensityMatrix(
        &psi.scale(p.alpha) + &noise.scale(1.0 - p.alpha),
    ))
}

/// τ¹ = μ₁ ρ + (1 − μ₁) ρ_A ⊗ 𝕀/2.
pub fn construct_tau1(rho: &DensityMatrix, mu1: f64) -> Result<DensityMatrix> {
    check_mu("mu1", mu1)?;
    rho.require_two_qubit()?;
    let rho_a = partial_trace(rho.matrix(), Subsystem::A)?;
    let tilde = kron(&rho_a, &ComplexMatrix::identity(2).scale(0.5));
    Ok(DensityMatrix(
        &rho.matrix().scale(mu1) + &tilde.scale(1.0 - mu1),
    ))
}

/// τ² = μ₂ ρ + (1 − μ₂) 𝕀/2 ⊗ ρ_B.
pub fn construct_tau2(rho: &DensityMatrix, mu2: f64) -> Result<DensityMatrix> {
    check_mu("mu2", mu2)?;
    rho.require_two_qubit()?;
    let rho_b = partial_trace(rho.matrix(), Subsystem::B)?;
    let tilde = kron(&ComplexMatrix::identity(2).scale(0.5), &rho_b);
    Ok(DensityMatrix(
        &rho.matrix().scale(mu2) + &tilde.scale(1.0 - mu2),
    ))
}
