//! Shared inputs for the criterion benchmarks.

use steerwit::{target_state, DensityMatrix, StateFamilyParams};

/// Target states on a coarse (α, θ) lattice, all with default μ.
pub fn sample_targets() -> Vec<DensityMatrix> {
    let mut out = Vec::new();
    for i in 1..=4 {
        for j in 1..=4 {
            let alpha = 0.25 * i as f64;
            let theta = std::f64::consts::FRAC_PI_4 * j as f64 / 4.0;
            let p = StateFamilyParams::new(alpha, theta).expect("lattice inside range");
            out.push(target_state(&p).expect("valid params"));
        }
    }
    out
}
