//! Simulated two-qubit polarisation tomography with Poissonian counts.
//!
//! Each qubit is projected onto one of the six eigenstates H, V, D, A, R, L,
//! giving 36 settings. Pauli expectations are estimated from count ratios
//! within each eigenbasis pair, the state is rebuilt by linear inversion and
//! then projected onto the closest unit-trace PSD matrix (Frobenius norm).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, paulis, ComplexMatrix, C64, I, ONE, ZERO};
use crate::measures::{concurrence, fidelity};
use crate::states::{DensityMatrix, TRACE_TOL};
use crate::steering::bell_geom;

pub const NUM_SETTINGS: usize = 36;
pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_TRIALS: usize = 100;

/// Below this mean the Poisson sampler uses sequential inversion.
const POISSON_INVERSION_MAX: f64 = 30.0;

/// Single-qubit projector labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projector {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl Projector {
    pub const ALL: [Projector; 6] = [
        Projector::H,
        Projector::V,
        Projector::D,
        Projector::A,
        Projector::R,
        Projector::L,
    ];

    pub fn ket(self) -> [C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Projector::H => [ONE, ZERO],
            Projector::V => [ZERO, ONE],
            Projector::D => [C64::new(h, 0.0), C64::new(h, 0.0)],
            Projector::A => [C64::new(h, 0.0), C64::new(-h, 0.0)],
            Projector::R => [C64::new(h, 0.0), I * h],
            Projector::L => [C64::new(h, 0.0), -I * h],
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ket())
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> char {
        match self {
            Projector::H => 'H',
            Projector::V => 'V',
            Projector::D => 'D',
            Projector::A => 'A',
            Projector::R => 'R',
            Projector::L => 'L',
        }
    }
}

/// (+1, −1) eigenstates of σ_x, σ_y, σ_z, indexed 1..=3 like [`paulis`].
fn eigenbasis(pauli: usize) -> (Projector, Projector) {
    match pauli {
        1 => (Projector::D, Projector::A),
        2 => (Projector::R, Projector::L),
        3 => (Projector::H, Projector::V),
        _ => unreachable!("pauli index {pauli}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementSetting {
    pub basis_a: Projector,
    pub basis_b: Projector,
}

impl MeasurementSetting {
    pub fn index(self) -> usize {
        6 * self.basis_a.index() + self.basis_b.index()
    }

    pub fn projector(self) -> ComplexMatrix {
        kron(&self.basis_a.matrix(), &self.basis_b.matrix())
    }
}

/// All 36 settings, ordered so that `settings()[s.index()] == s`.
pub fn settings() -> [MeasurementSetting; NUM_SETTINGS] {
    std::array::from_fn(|k| MeasurementSetting {
        basis_a: Projector::ALL[k / 6],
        basis_b: Projector::ALL[k % 6],
    })
}

pub type Counts = [u64; NUM_SETTINGS];

/// Outcome probabilities Tr[ρ Π_a ⊗ Π_b] per setting.
pub fn probabilities(rho: &DensityMatrix) -> Result<[f64; NUM_SETTINGS]> {
    rho.require_two_qubit()?;
    let s = settings();
    Ok(std::array::from_fn(|k| {
        rho.matrix().trace_product(&s[k].projector()).re.max(0.0)
    }))
}

/// Deterministic generator for a seed and stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws a Poisson variate.
///
/// Means below 30 use sequential inversion of the CDF with one uniform.
/// Larger means use Hörmann's transformed rejection with squeeze (PTRS).
pub fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean < POISSON_INVERSION_MAX {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            if p == 0.0 && cdf < u {
                // float tail exhausted
                break;
            }
        }
        return k;
    }

    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.024_83 * b;
    let inv_alpha = 1.123_9 + 1.132_8 / (b - 3.4);
    let vr = 0.927_7 - 3.622_4 / (b - 2.0);
    loop {
        let u: f64 = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mean + k * loglam - ln_factorial(k as u64);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// ln(k!), exact summation for small k and Stirling series beyond.
fn ln_factorial(k: u64) -> f64 {
    if k < 20 {
        return (2..=k).map(|i| (i as f64).ln()).sum();
    }
    let n = k as f64 + 1.0;
    let inv = 1.0 / n;
    let inv2 = inv * inv;
    (n - 0.5) * n.ln() - n
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// Poisson counts with mean `shots · p` per setting, drawn from `rng`.
pub fn simulate_counts_with<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut R,
) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::Parameter {
            name: "shots",
            value: 0.0,
            range: ">= 1",
        });
    }
    let probs = probabilities(rho)?;
    let n = shots as f64;
    Ok(std::array::from_fn(|k| sample_poisson(rng, n * probs[k])))
}

/// Counts for all 36 settings; reproducible from `seed`.
pub fn simulate_counts(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<Counts> {
    simulate_counts_with(rho, shots, &mut rng_for(seed, 0))
}

/// Linear inversion of (possibly fractional) counts, before positivity is restored.
///
/// Every Pauli pair uses its four eigenbasis settings,
/// `(N₊₊ − N₊₋ − N₋₊ + N₋₋) / ΣN`. Single-qubit terms pool the three groups
/// that share the measured qubit's basis.
#[allow(clippy::needless_range_loop)]
pub fn linear_inversion(counts: &[f64; NUM_SETTINGS]) -> Result<ComplexMatrix> {
    let at = |a: Projector, b: Projector| {
        counts[MeasurementSetting {
            basis_a: a,
            basis_b: b,
        }
        .index()]
    };
    // group[i][j] = (N++, N+-, N-+, N--) for Pauli pair (i, j), i, j in 1..=3
    let mut group = [[[0.0; 4]; 4]; 4];
    for i in 1..=3 {
        let (ap, am) = eigenbasis(i);
        for j in 1..=3 {
            let (bp, bm) = eigenbasis(j);
            group[i][j] = [at(ap, bp), at(ap, bm), at(am, bp), at(am, bm)];
            let total: f64 = group[i][j].iter().sum();
            if total <= 0.0 {
                return Err(Error::DegenerateData(format!(
                    "no counts for basis pair {}{}/{}{}",
                    ap.label(),
                    am.label(),
                    bp.label(),
                    bm.label()
                )));
            }
        }
    }

    let mut e = [[0.0; 4]; 4];
    e[0][0] = 1.0;
    for i in 1..=3 {
        let (mut num_a, mut den_a, mut num_b, mut den_b) = (0.0, 0.0, 0.0, 0.0);
        for j in 1..=3 {
            let [pp, pm, mp, mm] = group[i][j];
            let total = pp + pm + mp + mm;
            e[i][j] = (pp - pm - mp + mm) / total;
            num_a += pp + pm - mp - mm;
            den_a += total;
            let [pp, pm, mp, mm] = group[j][i];
            num_b += pp - pm + mp - mm;
            den_b += pp + pm + mp + mm;
        }
        e[i][0] = num_a / den_a;
        e[0][i] = num_b / den_b;
    }

    let p = paulis();
    let mut rho = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            if e[i][j] != 0.0 {
                rho = &rho + &kron(&p[i], &p[j]).scale(e[i][j] / 4.0);
            }
        }
    }
    Ok(rho)
}

/// Closest unit-trace PSD matrix in Frobenius norm.
///
/// Eigenvalues are projected onto the probability simplex; inputs that are
/// already valid states are returned unchanged.
pub fn project_to_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let eig = hermitian_eig(m)?;
    let trace_ok = (m.trace().re - 1.0).abs() <= TRACE_TOL;
    if eig.min_eigenvalue() >= 0.0 && trace_ok {
        return Ok(DensityMatrix::new_unchecked(m.hermitian_part()));
    }
    let projected = project_to_simplex(&eig.eigenvalues);
    let mut it = projected.into_iter();
    let out = eig.map_spectrum(|_| it.next().expect("one value per eigenvalue"));
    Ok(DensityMatrix::new_unchecked(out))
}

/// Euclidean projection of `v` (descending) onto { x ≥ 0, Σx = 1 }.
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Reconstructs a density matrix from measured counts.
pub fn reconstruct(counts: &Counts) -> Result<DensityMatrix> {
    let as_f64: [f64; NUM_SETTINGS] = std::array::from_fn(|k| counts[k] as f64);
    project_to_density(&linear_inversion(&as_f64)?)
}

/// Figure of merit evaluated on each reconstructed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Fidelity against the true state.
    Fidelity,
    Concurrence,
    BellGeomLhs,
    BellGeomRhs,
}

impl Statistic {
    pub fn evaluate(self, reconstructed: &DensityMatrix, truth: &DensityMatrix) -> Result<f64> {
        match self {
            Statistic::Fidelity => fidelity(reconstructed, truth),
            Statistic::Concurrence => concurrence(reconstructed),
            Statistic::BellGeomLhs => Ok(bell_geom(reconstructed)?.lhs),
            Statistic::BellGeomRhs => Ok(bell_geom(reconstructed)?.rhs),
        }
    }
}

/// Sample mean and sample standard deviation (n − 1 denominator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBar {
    pub mean: f64,
    pub stddev: f64,
}

impl ErrorBar {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            stddev: var.sqrt(),
        }
    }
}

/// Per-trial statistic values; trial `t` draws from stream `t + 1` of `seed`.
pub fn monte_carlo_samples(
    rho: &DensityMatrix,
    shots: u64,
    trials: usize,
    statistics: &[Statistic],
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if trials < 2 {
        return Err(Error::Parameter {
            name: "trials",
            value: trials as f64,
            range: ">= 2",
        });
    }
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, t as u64 + 1);
            let counts = simulate_counts_with(rho, shots, &mut rng)?;
            let rec = reconstruct(&counts)?;
            statistics
                .iter()
                .map(|s| s.evaluate(&rec, rho))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    // transpose to one series per statistic
    Ok((0..statistics.len())
        .map(|k| per_trial.iter().map(|row| row[k]).collect())
        .collect())
}

/// Resamples counts `trials` times and summarises `statistic`.
pub fn monte_carlo_errorbar(
    rho: &DensityMatrix,
    shots: u64,
    trials: usize,
    statistic: Statistic,
    seed: u64,
) -> Result<ErrorBar> {
    let series = monte_carlo_samples(rho, shots, trials, &[statistic], seed)?;
    Ok(ErrorBar::from_samples(&series[0]))
}

/// One simulated tomography of a known state.
#[derive(Debug, Clone)]
pub struct TomographyRun {
    pub settings: [MeasurementSetting; NUM_SETTINGS],
    pub counts: Counts,
    pub shots_per_setting: u64,
    pub seed: u64,
    pub reconstructed: DensityMatrix,
    pub fid: f64,
    /// Monte-Carlo spread of the fidelity over `trials` resamplings.
    pub fid_stderr: f64,
}

impl TomographyRun {
    pub fn execute(rho: &DensityMatrix, shots: u64, trials: usize, seed: u64) -> Result<Self> {
        let counts = simulate_counts(rho, shots, seed)?;
        let reconstructed = reconstruct(&counts)?;
        let fid = fidelity(&reconstructed, rho)?;
        let fid_stderr =
            monte_carlo_errorbar(rho, shots, trials, Statistic::Fidelity, seed)?.stddev;
        Ok(Self {
            settings: settings(),
            counts,
            shots_per_setting: shots,
            seed,
            reconstructed,
            fid,
            fid_stderr,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{target_state, StateFamilyParams};
    use std::f64::consts::FRAC_PI_4;

    fn hh() -> DensityMatrix {
        DensityMatrix::pure(&[ONE, ZERO, ZERO, ZERO]).unwrap()
    }

    #[test]
    fn settings_are_indexed_consistently() {
        let s = settings();
        for (k, setting) in s.iter().enumerate() {
            assert_eq!(setting.index(), k);
        }
        assert_eq!(s[0].basis_a, Projector::H);
        assert_eq!(s[35].basis_b, Projector::L);
    }

    #[test]
    fn probabilities_examples() {
        let p = probabilities(&hh()).unwrap();
        let hh_idx = MeasurementSetting {
            basis_a: Projector::H,
            basis_b: Projector::H,
        }
        .index();
        assert!((p[hh_idx] - 1.0).abs() < 1e-15);
        for b in Projector::ALL {
            let k = MeasurementSetting {
                basis_a: Projector::V,
                basis_b: b,
            }
            .index();
            assert_eq!(p[k], 0.0);
        }
        let p = probabilities(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!(p.iter().all(|x| (x - 0.25).abs() < 1e-15));

        let p = probabilities(&DensityMatrix::bell_phi_plus()).unwrap();
        let dd = MeasurementSetting {
            basis_a: Projector::D,
            basis_b: Projector::D,
        }
        .index();
        assert!((p[dd] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_settings_never_click() {
        for seed in 0..20 {
            let c = simulate_counts(&hh(), 1000, seed).unwrap();
            for b in Projector::ALL {
                assert_eq!(
                    c[MeasurementSetting {
                        basis_a: Projector::V,
                        basis_b: b
                    }
                    .index()],
                    0
                );
            }
        }
    }

    #[test]
    fn simulate_is_deterministic() {
        let rho = DensityMatrix::werner(0.7);
        assert_eq!(
            simulate_counts(&rho, 500, 9).unwrap(),
            simulate_counts(&rho, 500, 9).unwrap()
        );
        assert_ne!(
            simulate_counts(&rho, 500, 9).unwrap(),
            simulate_counts(&rho, 500, 10).unwrap()
        );
        assert!(simulate_counts(&rho, 0, 9).is_err());
    }

    #[test]
    fn linear_inversion_exact_on_exact_data() {
        for rho in [
            DensityMatrix::maximally_mixed(4),
            target_state(&StateFamilyParams::new(0.8, FRAC_PI_4).unwrap()).unwrap(),
            target_state(&StateFamilyParams::new(0.3, 0.2).unwrap()).unwrap(),
        ] {
            let rec = linear_inversion(&probabilities(&rho).unwrap()).unwrap();
            assert!(rec.max_abs_diff(rho.matrix()) < 1e-12);
            let proj = project_to_density(&rec).unwrap();
            assert!(proj.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
    }

    #[test]
    fn degenerate_group_is_rejected() {
        let mut counts = [10u64; NUM_SETTINGS];
        let (ap, am) = eigenbasis(1);
        let (bp, bm) = eigenbasis(2);
        for a in [ap, am] {
            for b in [bp, bm] {
                counts[MeasurementSetting {
                    basis_a: a,
                    basis_b: b,
                }
                .index()] = 0;
            }
        }
        assert!(matches!(
            reconstruct(&counts),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn bell_state_reconstructs_with_high_fidelity() {
        let phi = DensityMatrix::bell_phi_plus();
        let counts = simulate_counts(&phi, 10_000, 3).unwrap();
        let rec = reconstruct(&counts).unwrap();
        assert!(rec.validate().is_valid());
        assert!(fidelity(&rec, &phi).unwrap() > 0.99);
    }

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(project_to_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        let p = project_to_simplex(&[1.2, -0.2]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0);
        let p = project_to_simplex(&[0.6, 0.5, -0.1]);
        assert!((p[0] - 0.55).abs() < 1e-15 && (p[1] - 0.45).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn ln_factorial_matches_direct_sum() {
        for k in [0u64, 1, 5, 19, 20, 25, 60, 200] {
            let direct: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
            assert!(
                (ln_factorial(k) - direct).abs() < 1e-10 * direct.max(1.0),
                "k = {k}"
            );
        }
    }

    #[test]
    fn poisson_large_mean_moments() {
        let mut rng = rng_for(11, 0);
        let n = 100_000;
        let mean = 250.0;
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_poisson(&mut rng, mean) as f64)
            .collect();
        let m = draws.iter().sum::<f64>() / n as f64;
        let v = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        assert!((m - mean).abs() / mean < 0.01);
        assert!((v - mean).abs() / mean < 0.05);
    }

    #[test]
    fn monte_carlo_needs_two_trials() {
        let e = monte_carlo_errorbar(&DensityMatrix::werner(0.5), 100, 1, Statistic::Fidelity, 1);
        assert!(matches!(e, Err(Error::Parameter { name: "trials", .. })));
    }

    #[test]
    fn concurrence_bias_is_nonnegative_below_threshold() {
        // τ² of ρ(0.5, π/4) is a Werner state of visibility 0.5/√3 < 1/3, hence separable
        let target = target_state(&StateFamilyParams::new(0.5, FRAC_PI_4).unwrap()).unwrap();
        let rho = crate::states::construct_tau2(&target, crate::states::MU_MAX).unwrap();
        let eb = monte_carlo_errorbar(&rho, 10_000, 40, Statistic::Concurrence, 5).unwrap();
        assert!(eb.mean >= 0.0 && eb.mean < 0.01, "{eb:?}");
    }

    #[test]
    fn bell_lhs_tracks_alpha() {
        let eb = monte_carlo_errorbar(
            &DensityMatrix::werner(0.8),
            10_000,
            40,
            Statistic::BellGeomLhs,
            8,
        )
        .unwrap();
        assert!((eb.mean - 0.8).abs() < 3.0 * eb.stddev.max(1e-4), "{eb:?}");
    }

    #[test]
    fn tomography_run_fields() {
        let run = TomographyRun::execute(&DensityMatrix::werner(0.9), 10_000, 10, 42).unwrap();
        assert_eq!(run.counts.len(), NUM_SETTINGS);
        assert!(run.reconstructed.validate().is_valid());
        assert!(run.fid > 0.99);
        assert!(run.fid_stderr > 0.0);
    }
}
