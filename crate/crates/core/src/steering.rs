//! Steering decisions for the target family.
//!
//! The witness is one-sided: an entangled τ¹ certifies that Bob can steer
//! Alice, an entangled τ² that Alice can steer Bob. A separable constructed
//! state leaves the direction undetermined, never "unsteerable".

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::max_singular_value_3x3;
use crate::measures::{concurrence, correlation_matrix};
use crate::states::{
    check_alpha, check_mu, check_theta, construct_tau1, construct_tau2, target_state,
    DensityMatrix, StateFamilyParams, MU_MAX, RANGE_SLACK,
};

/// A concurrence above this counts as entangled.
pub const CONCURRENCE_TOL: f64 = 1e-9;
/// α within this distance above an analytic threshold is still classified
/// with the lower region.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Slack used when comparing the Bell-like inequality sides.
pub const BELL_TOL: f64 = 1e-9;
/// First θ of region scans; the analytic boundaries exclude θ = 0.
pub const SCAN_THETA_MIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Witnessed,
    Undetermined,
}

impl Witness {
    fn from_concurrence(c: f64) -> Self {
        if c > CONCURRENCE_TOL {
            Witness::Witnessed
        } else {
            Witness::Undetermined
        }
    }

    pub fn is_witnessed(self) -> bool {
        self == Witness::Witnessed
    }
}

/// Region of the (α, θ) plane by which constructed states are entangled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Neither τ¹ nor τ² entangled.
    NeitherWitnessed,
    /// Only τ² entangled: Alice steers Bob, the reverse is undetermined.
    OneWayAToB,
    /// Only τ¹ entangled. Unreachable for the target family at equal μ.
    OneWayBToA,
    /// Both entangled.
    BothWay,
}

impl Region {
    pub fn from_witnesses(bob_steers_alice: bool, alice_steers_bob: bool) -> Self {
        match (bob_steers_alice, alice_steers_bob) {
            (false, false) => Region::NeitherWitnessed,
            (false, true) => Region::OneWayAToB,
            (true, false) => Region::OneWayBToA,
            (true, true) => Region::BothWay,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::NeitherWitnessed => "neither-witnessed",
            Region::OneWayAToB => "one-way-A-to-B",
            Region::OneWayBToA => "one-way-B-to-A",
            Region::BothWay => "both-way",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringVerdict {
    pub c_tau1: f64,
    pub c_tau2: f64,
    pub bob_steers_alice: Witness,
    pub alice_steers_bob: Witness,
    pub region: Region,
}

/// Builds τ¹ and τ² from `rho` and reads the steering directions off their concurrences.
pub fn witness_steering(rho: &DensityMatrix, mu1: f64, mu2: f64) -> Result<SteeringVerdict> {
    let c_tau1 = concurrence(&construct_tau1(rho, mu1)?)?;
    let c_tau2 = concurrence(&construct_tau2(rho, mu2)?)?;
    let bob_steers_alice = Witness::from_concurrence(c_tau1);
    let alice_steers_bob = Witness::from_concurrence(c_tau2);
    Ok(SteeringVerdict {
        c_tau1,
        c_tau2,
        bob_steers_alice,
        alice_steers_bob,
        region: Region::from_witnesses(
            bob_steers_alice.is_witnessed(),
            alice_steers_bob.is_witnessed(),
        ),
    })
}

/// Closed-form α threshold above which τ¹(α, θ) is entangled at μ₁ = 1/√3.
///
/// At θ = 0 the expression tends to 1, which is returned directly.
pub fn boundary_bob_to_alice(theta: f64) -> f64 {
    if theta == 0.0 {
        return 1.0;
    }
    let c = (4.0 * theta).cos();
    let s3 = 3.0_f64.sqrt();
    (s3 - s3 * c - 2.0 * (7.0 - 4.0 * c + c * c).sqrt()) / (c - 5.0)
}

/// α threshold above which τ² is entangled at μ₂ = 1/√3; independent of θ.
pub fn boundary_alice_to_bob() -> f64 {
    MU_MAX
}

/// α threshold for τ¹ at arbitrary μ₁.
///
/// τ¹ of the target family is an X state, entangled exactly when
/// μ₁² α² cos²θ sin²θ exceeds the product of its |HV⟩ and |VH⟩ populations.
/// That difference is a quadratic in α, negative at α = 0; the threshold is
/// its first positive root, or +∞ when it never turns positive.
pub fn tau1_alpha_threshold(theta: f64, mu1: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (cc, ss) = (c * c, s * s);
    if ss * cc == 0.0 {
        return 1.0;
    }
    let noise = 1.0 - mu1;
    let a0 = mu1 * ss + noise / 2.0;
    let a1 = -mu1 * ss + noise * (cc - 0.5);
    let b0 = mu1 * cc + noise / 2.0;
    let b1 = -mu1 * cc + noise * (ss - 0.5);
    let k = 4.0 * mu1 * mu1 * cc * ss - a1 * b1;
    let l = a0 * b1 + a1 * b0;
    let m = a0 * b0;
    first_positive_crossing(k, l, m)
}

/// Smallest x > 0 where `k x² − l x − m` (with m > 0) turns positive.
fn first_positive_crossing(k: f64, l: f64, m: f64) -> f64 {
    if k == 0.0 {
        return if l < 0.0 { -m / l } else { f64::INFINITY };
    }
    let disc = l * l + 4.0 * k * m;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let sq = disc.sqrt();
    if k > 0.0 {
        // one positive root
        if l >= 0.0 {
            (l + sq) / (2.0 * k)
        } else {
            2.0 * m / (sq - l)
        }
    } else if l > 0.0 {
        // downward parabola, positive between its two positive roots
        let q = l + sq;
        let r1 = 2.0 * m / q;
        let r2 = q / (2.0 * k);
        r1.min(r2.abs())
    } else {
        f64::INFINITY
    }
}

/// α threshold for τ² at arbitrary μ₂: α > 1/(3μ₂) whenever θ > 0.
pub fn tau2_alpha_threshold(theta: f64, mu2: f64) -> f64 {
    if theta.sin() * theta.cos() == 0.0 || mu2 == 0.0 {
        return f64::INFINITY;
    }
    1.0 / (3.0 * mu2)
}

/// α interval where only Alice→Bob steering is witnessed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

impl Band {
    pub fn is_empty(&self) -> bool {
        self.upper <= self.lower
    }

    /// `lower < α ≤ upper`.
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lower && alpha <= self.upper
    }
}

/// One-way band `1/√3 < α ≤ boundary_bob_to_alice(θ)` for θ ∈ (0, π/4].
///
/// At θ = π/4 both ends meet and the band is empty.
pub fn one_way_band(theta: f64) -> Result<Band> {
    if !(theta > 0.0 && theta <= FRAC_PI_4 + RANGE_SLACK) {
        return Err(Error::Parameter {
            name: "theta",
            value: theta,
            range: "(0, pi/4]",
        });
    }
    Ok(Band {
        lower: boundary_alice_to_bob(),
        upper: boundary_bob_to_alice(theta),
    })
}

/// True when `cos²(2θ) ≥ (2α − 1)/((2 − α) α³)`, i.e. Bob provably cannot
/// steer Alice with infinitely many settings under the uniform LHS ansatz.
/// Evaluated as `cos²(2θ)(2 − α)α³ ≥ 2α − 1`.
pub fn infinite_setting_a_to_b_only(alpha: f64, theta: f64) -> bool {
    let c2 = (2.0 * theta).cos().powi(2);
    c2 * (2.0 - alpha) * alpha.powi(3) >= 2.0 * alpha - 1.0
}

/// Geometric Bell-like inequality `max E_Q ≥ 2 ΣT²/3`; a violation certifies steering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellGeomResult {
    /// max over unit m, n of Σ T_ij m_i n_j, i.e. the largest singular value of T.
    pub lhs: f64,
    /// 2 Σ T_ij² / 3.
    pub rhs: f64,
    pub violated: bool,
}

impl BellGeomResult {
    pub fn from_sides(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            violated: lhs < rhs - BELL_TOL,
        }
    }
}

pub fn bell_geom(rho: &DensityMatrix) -> Result<BellGeomResult> {
    let t = correlation_matrix(rho)?;
    Ok(BellGeomResult::from_sides(
        max_singular_value_3x3(&t.t),
        2.0 * t.frobenius_sq() / 3.0,
    ))
}

/// Analytic region of the target state ρ(α, θ) for the given mixing weights.
///
/// Points on a boundary, up to [`BOUNDARY_TOL`] above it, fall in the lower
/// region (entanglement onset is strict). θ = 0 is always `NeitherWitnessed`.
pub fn classify_region(alpha: f64, theta: f64, mu1: f64, mu2: f64) -> Result<Region> {
    check_alpha(alpha)?;
    check_theta(theta)?;
    check_mu("mu1", mu1)?;
    check_mu("mu2", mu2)?;
    let b2a = alpha > tau1_alpha_threshold(theta, mu1) + BOUNDARY_TOL;
    let a2b = alpha > tau2_alpha_threshold(theta, mu2) + BOUNDARY_TOL;
    Ok(Region::from_witnesses(b2a, a2b))
}

/// One evaluated point of a region scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub alpha: f64,
    pub theta: f64,
    pub verdict: SteeringVerdict,
    pub eq6_boundary: f64,
    pub inf_setting: bool,
}

/// Evenly spaced grid: α over [0, 1], θ over [1e-4, π/4], α-major order.
pub fn scan_grid(grid_n: usize) -> Result<Vec<(f64, f64)>> {
    if grid_n < 2 {
        return Err(Error::Parameter {
            name: "grid_n",
            value: grid_n as f64,
            range: ">= 2",
        });
    }
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (grid_n - 1) as f64;
    Ok((0..grid_n)
        .flat_map(|i| {
            (0..grid_n).map(move |j| (step(0.0, 1.0, i), step(SCAN_THETA_MIN, FRAC_PI_4, j)))
        })
        .collect())
}

/// Witnesses every point of [`scan_grid`]. Evaluated in parallel; the
/// output order and values match a sequential pass.
pub fn scan_plane(grid_n: usize, mu1: f64, mu2: f64) -> Result<Vec<ScanPoint>> {
    check_mu("mu1", mu1)?;
    check_mu("mu2", mu2)?;
    scan_grid(grid_n)?
        .into_par_iter()
        .map(|(alpha, theta)| {
            let rho = target_state(&StateFamilyParams {
                alpha,
                theta,
                mu1,
                mu2,
            })?;
            Ok(ScanPoint {
                alpha,
                theta,
                verdict: witness_steering(&rho, mu1, mu2)?,
                eq6_boundary: boundary_bob_to_alice(theta),
                inf_setting: infinite_setting_a_to_b_only(alpha, theta),
            })
        })
        .collect()
}
