//! Detecting EPR steering of two-qubit states through the entanglement of
//! two constructed states.
//!
//! * [`linalg`]: small dense complex matrices, Jacobi eigensolver, partial trace.
//! * [`states`]: the target family ρ(α, θ) and the constructed states τ¹, τ².
//! * [`measures`]: concurrence, fidelity, spin-correlation matrix.
//! * [`steering`]: witness verdicts, analytic boundaries, Bell-like test, region scans.
//! * [`tomo`]: simulated 36-setting tomography with Poisson noise.
//!
//! ```
//! use steerwit::{target_state, witness_steering, Region, StateFamilyParams, MU_MAX};
//!
//! let rho = target_state(&StateFamilyParams::new(0.9, std::f64::consts::FRAC_PI_4)?)?;
//! let verdict = witness_steering(&rho, MU_MAX, MU_MAX)?;
//! assert_eq!(verdict.region, Region::BothWay);
//! println!("{} (C(τ¹) = {:.4})", verdict.region, verdict.c_tau1);
//! # Ok::<(), steerwit::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod error;
pub mod linalg;
pub mod measures;
pub mod states;
pub mod steering;
pub mod tomo;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEigenSystem, Subsystem, C64};
pub use measures::{concurrence, correlation_matrix, fidelity, CorrelationMatrix};
pub use states::{
    construct_tau1, construct_tau2, pure_psi, target_state, DensityMatrix, StateFamilyParams,
    ValidityReport, MU_MAX,
};
pub use steering::{
    bell_geom, boundary_alice_to_bob, boundary_bob_to_alice, classify_region,
    infinite_setting_a_to_b_only, one_way_band, witness_steering, BellGeomResult, Region,
    SteeringVerdict, Witness,
};
pub use tomo::{
    monte_carlo_errorbar, reconstruct, simulate_counts, ErrorBar, Statistic, TomographyRun,
};
