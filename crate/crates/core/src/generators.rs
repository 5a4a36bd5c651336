//! Seeded instance factories.
//!
//! The random stream is a fixed contract so other implementations can
//! reproduce it draw for draw:
//!
//! * Generator: SplitMix64. `next_u64` adds `0x9E3779B97F4A7C15` to the
//!   64-bit state (wrapping) and returns `mix64(state)`, where
//!   `mix64(z) = z3 ^ (z3 >> 31)` with
//!   `z2 = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
//!   `z3 = (z2 ^ (z2 >> 27)) * 0x94D049BB133111EB` (wrapping products).
//! * Seeding: `state = mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15))`.
//! * Uniform double on `[0, 1)`: `(next_u64 >> 11) * 2^-53`.
//! * Gaussian pair (Box-Muller): `u1 = 1 - uniform`, `u2 = uniform`,
//!   `r = sqrt(-2 ln u1)`, `(r cos(2 pi u2), r sin(2 pi u2))`.
//! * Real standard normal: first member of one pair (the second is dropped).
//! * Standard complex normal: one pair `(z0, z1)` mapped to `(z0 + i z1) / sqrt 2`.
//! * Matrices are filled row-major.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::inequalities::HypothesisMode;
use crate::linalg::{Complex, ComplexMatrix, Vector};
use crate::matfun::polar_decompose;
use crate::spectra::pinv_hermitian;
use crate::tolerance::ToleranceProfile;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(z: u64) -> u64 {
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One independent random stream per `(master_seed, stream_index)`.
#[derive(Debug, Clone)]
pub struct SeededSource {
    master_seed: u64,
    stream_index: u64,
    state: u64,
}

impl SeededSource {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeededSource {
            master_seed,
            stream_index,
            state: mix64(master_seed ^ mix64(stream_index.wrapping_add(GOLDEN_GAMMA))),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = TAU * u2;
        (r * angle.cos(), r * angle.sin())
    }

    pub fn gaussian(&mut self) -> f64 {
        self.gaussian_pair().0
    }

    /// `E|z|^2 = 1`.
    pub fn complex_gaussian(&mut self) -> Complex {
        let (a, b) = self.gaussian_pair();
        Complex::new(a * FRAC_1_SQRT_2, b * FRAC_1_SQRT_2)
    }

    /// Uniform on the unit sphere of `C^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vector {
        loop {
            let v = Vector::from_vec_unchecked((0..n).map(|_| self.complex_gaussian()).collect());
            let norm = v.norm();
            if norm > 0.0 {
                return v.scale(Complex::new(1.0 / norm, 0.0));
            }
        }
    }
}

/// Ginibre matrix: independent standard complex Gaussian entries.
pub fn gen_matrix(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| source.complex_gaussian())
}

/// `G*G` for a Ginibre `G`.
pub fn gen_psd(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    let g = gen_matrix(n, source);
    (&g.adjoint() * &g).hermitian_part()
}

/// `(G + G*) / 2` for a Ginibre `G`.
pub fn gen_self_adjoint(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    gen_matrix(n, source).hermitian_part()
}

/// Unitary polar factor of a Ginibre matrix, redrawn on rank deficiency.
pub fn gen_unitary(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    let profile = ToleranceProfile::default();
    loop {
        let g = gen_matrix(n, source);
        let Ok(parts) = polar_decompose(&g, &profile) else {
            continue;
        };
        let defect = (&(&parts.isometry_part.adjoint() * &parts.isometry_part) - &ComplexMatrix::identity(n))
            .frobenius_norm();
        if defect <= 1e-9 {
            return parts.isometry_part;
        }
    }
}

/// `U diag(d) U*` with complex Gaussian `d`.
pub fn gen_normal(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    let u = gen_unitary(n, source);
    let d: Vec<Complex> = (0..n).map(|_| source.complex_gaussian()).collect();
    &(&u * &ComplexMatrix::diag(&d)) * &u.adjoint()
}

/// Random upper-triangular matrix with Ginibre entries on and above the diagonal.
pub fn gen_upper_triangular(n: usize, source: &mut SeededSource) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| {
        if j >= i {
            source.complex_gaussian()
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

/// `0 <= A <= B`: `A = P1`, `B = A + P2` with independent `P1`, `P2` from [`gen_psd`].
pub fn gen_loewner_pair(n: usize, source: &mut SeededSource) -> (ComplexMatrix, ComplexMatrix) {
    let a = gen_psd(n, source);
    let b = &a + &gen_psd(n, source);
    (a, b)
}

/// Commuting PSD pair with `A <= B`, diagonal in one random unitary basis.
pub fn gen_commuting_psd_pair(n: usize, source: &mut SeededSource) -> (ComplexMatrix, ComplexMatrix) {
    let u = gen_unitary(n, source);
    let a: Vec<f64> = (0..n).map(|_| source.gaussian().abs()).collect();
    let b: Vec<f64> = a.iter().map(|&ai| ai + source.gaussian().abs()).collect();
    let u_adj = u.adjoint();
    let conj = |d: &[f64]| (&(&u * &ComplexMatrix::diag_real(d)) * &u_adj).hermitian_part();
    (conj(&a), conj(&b))
}

/// Regularization added to `A` so that `A^-1` exists.
pub const REID_EPSILON: f64 = 1e-3;

/// A positive `A` and a `K` for which `AK` has the structure of `mode`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReidInstance {
    pub a: ComplexMatrix,
    pub k: ComplexMatrix,
    /// Multiple of the identity added to `A`; zero when no inverse was needed.
    pub epsilon: f64,
}

/// `classic`: `K = A^-1 H`, so `AK = H` is self-adjoint. `normal` and
/// `co-hyponormal`: `K = A^-1 N` with `N` normal. `none`: `A` from
/// [`gen_psd`] and an unconstrained Ginibre `K`.
pub fn gen_reid_instance(n: usize, mode: HypothesisMode, source: &mut SeededSource) -> ReidInstance {
    let profile = ToleranceProfile::default();
    if mode == HypothesisMode::None {
        let a = gen_psd(n, source);
        let k = gen_matrix(n, source);
        return ReidInstance { a, k, epsilon: 0.0 };
    }
    let a = gen_psd(n, source).shift(REID_EPSILON);
    let target = match mode {
        HypothesisMode::Classic => gen_self_adjoint(n, source),
        _ => gen_normal(n, source),
    };
    let a_inv = pinv_hermitian(&a, &profile).expect("A is Hermitian by construction");
    ReidInstance {
        k: &a_inv * &target,
        a,
        epsilon: REID_EPSILON,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::{is_normal, is_psd, is_self_adjoint, loewner_leq};

    #[test]
    fn splitmix_reference_values() {
        // SplitMix64 from state 0 (reference sequence of the published algorithm).
        let mut s = SeededSource {
            master_seed: 0,
            stream_index: 0,
            state: 0,
        };
        assert_eq!(s.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(s.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(s.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_in_range_and_gaussian_moments() {
        let mut s = SeededSource::new(3, 0);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let count = 20_000;
        for _ in 0..count {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
            let g = s.gaussian();
            sum += g;
            sum_sq += g * g;
        }
        let mean = sum / count as f64;
        let var = sum_sq / count as f64 - mean * mean;
        assert!(mean.abs() < 0.05, "{mean}");
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = gen_matrix(4, &mut SeededSource::new(42, 7));
        let b = gen_matrix(4, &mut SeededSource::new(42, 7));
        let c = gen_matrix(4, &mut SeededSource::new(42, 8));
        assert_eq!(
            a.as_slice().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>(),
            b.as_slice().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>()
        );
        assert_ne!(a, c);
    }

    #[test]
    fn structural_properties() {
        let p = ToleranceProfile::default();
        for i in 0..50 {
            let n = 2 + i % 9;
            let mut s = SeededSource::new(11, i as u64);
            assert!(is_psd(&gen_psd(n, &mut s), &p).unwrap().holds);
            let u = gen_unitary(n, &mut s);
            assert!((&(&u.adjoint() * &u) - &ComplexMatrix::identity(n)).frobenius_norm() <= 1e-8);
            let normal = gen_normal(n, &mut s);
            assert!(is_normal(&normal, &ToleranceProfile { predicate_tol: 1e-8, ..p }).holds);
            let (a, b) = gen_loewner_pair(n, &mut s);
            assert!(loewner_leq(&a, &b, &p).unwrap().holds);
            let (a, b) = gen_commuting_psd_pair(n, &mut s);
            assert!(a.commutator(&b).unwrap().frobenius_norm() <= 1e-9);
            assert!(loewner_leq(&a, &b, &p).unwrap().holds);
            let inst = gen_reid_instance(n, HypothesisMode::Classic, &mut s);
            assert!(is_self_adjoint(&(&inst.a * &inst.k), &p).holds);
            let inst = gen_reid_instance(n, HypothesisMode::Normal, &mut s);
            assert!(is_normal(&(&inst.a * &inst.k), &p).holds);
        }
    }
}
