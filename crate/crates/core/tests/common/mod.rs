//! Random inputs and independent oracles shared by the integration tests.
//!
//! The oracles here avoid the library's eigensolver: concurrence goes through
//! the characteristic polynomial of ρρ̃ on plain arrays, the PSD projection
//! through eigenvalue waterfilling, and thresholds through bisection.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use steerwit::linalg::{hermitian_eig, ComplexMatrix, C64};
use steerwit::DensityMatrix;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

pub fn ginibre(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(n, n, data).unwrap()
}

/// Hilbert–Schmidt random density matrix (full rank almost surely).
pub fn random_state(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let g = ginibre(rng, n);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, n: usize) -> (Vec<C64>, DensityMatrix) {
    let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.iter().map(|z| z / norm).collect();
    let rho = DensityMatrix::pure(&v).unwrap();
    (v, rho)
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ginibre(rng, n).hermitian_part()
}

/// Haar-ish random SU(2) element from a normalised quaternion.
pub fn random_qubit_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let q: Vec<f64> = (0..4).map(|_| gaussian(rng)).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0] / n, q[1] / n);
    let b = C64::new(q[2] / n, q[3] / n);
    ComplexMatrix::from_rows([[a, -b.conj()], [b, a.conj()]])
}

pub fn random_unit_vector3(rng: &mut impl Rng) -> [f64; 3] {
    let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

type M4 = [[C64; 4]; 4];

fn to_array(m: &ComplexMatrix) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn mul4(a: &M4, b: &M4) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

/// Coefficients c[0..=4] of det(λ − A) = Σ c[k] λ^k (Faddeev–LeVerrier).
fn characteristic_polynomial(a: &M4) -> [C64; 5] {
    let mut c = [C64::new(0.0, 0.0); 5];
    c[4] = C64::new(1.0, 0.0);
    let mut m: M4 = [[C64::new(0.0, 0.0); 4]; 4];
    for k in 1..=4 {
        let mut next = mul4(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[4 - k + 1];
        }
        m = next;
        let am = mul4(a, &m);
        let tr: C64 = (0..4).map(|i| am[i][i]).sum();
        c[4 - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64; 5], z: C64) -> (C64, C64) {
    let mut p = c[4];
    let mut dp = C64::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    (p, dp)
}

/// All four roots by Aberth–Ehrlich iteration, Newton-polished.
fn quartic_roots(c: &[C64; 5]) -> [C64; 4] {
    let bound = 1.0 + (0..4).map(|k| c[k].norm()).fold(0.0, f64::max);
    let mut z: [C64; 4] = std::array::from_fn(|k| {
        C64::from_polar(0.5 * bound, 0.4 + k as f64 * std::f64::consts::FRAC_PI_2)
    });
    for _ in 0..500 {
        let mut biggest = 0.0_f64;
        for i in 0..4 {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..4)
                .filter(|&j| j != i)
                .map(|j| C64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            biggest = biggest.max(step.norm());
        }
        if biggest < 1e-18 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

/// Concurrence from the roots of the characteristic polynomial of ρρ̃.
pub fn concurrence_charpoly(rho: &DensityMatrix) -> f64 {
    let r = to_array(rho.matrix());
    let sign = [-1.0, 1.0, 1.0, -1.0];
    let flipped: M4 = std::array::from_fn(|i| {
        std::array::from_fn(|j| r[3 - i][3 - j].conj() * (sign[i] * sign[j]))
    });
    let product = mul4(&r, &flipped);
    let roots = quartic_roots(&characteristic_polynomial(&product));
    let mut s: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Closest unit-trace PSD matrix by waterfilling the negative eigenvalue mass
/// onto the remaining ones (descending order).
pub fn waterfill_projection(m: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eig(m).unwrap();
    let mu = &eig.eigenvalues;
    let d = mu.len();
    let mut lambda = vec![0.0; d];
    let mut carried = 0.0;
    let mut i = d;
    while i > 0 && mu[i - 1] + carried / i as f64 <= 0.0 {
        carried += mu[i - 1];
        i -= 1;
    }
    for j in 0..i {
        lambda[j] = mu[j] + carried / i as f64;
    }
    let mut it = lambda.into_iter();
    eig.map_spectrum(|_| it.next().unwrap())
}

/// Smallest α ∈ [lo, hi] at which `entangled` switches on, to `tol`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, entangled: impl Fn(f64) -> bool) -> f64 {
    assert!(!entangled(lo) && entangled(hi), "bracket does not straddle");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if entangled(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// max over sampled unit pairs (m, n) of mᵀ T n, where each random m is paired
/// with its best response n = Tᵀm / |Tᵀm|. Every value is a lower bound on σ_max.
pub fn sampled_bilinear_max(t: &[[f64; 3]; 3], samples: usize, rng: &mut impl Rng) -> f64 {
    (0..samples)
        .map(|_| {
            let m = random_unit_vector3(rng);
            let tm: [f64; 3] = std::array::from_fn(|j| (0..3).map(|i| t[i][j] * m[i]).sum());
            let norm = tm.iter().map(|x| x * x).sum::<f64>().sqrt();
            let n = if norm > 0.0 {
                [tm[0] / norm, tm[1] / norm, tm[2] / norm]
            } else {
                random_unit_vector3(rng)
            };
            bilinear(t, &m, &n)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn bilinear(t: &[[f64; 3]; 3], m: &[f64; 3], n: &[f64; 3]) -> f64 {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| t[i][j] * m[i] * n[j])
        .sum()
}
