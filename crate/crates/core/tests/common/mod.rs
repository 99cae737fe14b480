#![allow(dead_code)]

use finsler_core::liealg::{builtin, random_three_dimensional};
use finsler_core::{LieAlgebraData, NormFamily, NormSpec, Profile};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const FAMILIES: [NormFamily; 3] = [NormFamily::Riemannian, NormFamily::Randers, NormFamily::AlphaBeta];

/// Strongly convex for every `b < 1`: `φ − sφ′ + (b² − s²)φ″ = 1 + b² − 3s²/2`.
pub const PROFILE: [f64; 3] = [1.0, 1.0, 0.5];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `M Mᵀ + I/2` with entries of `M` in `[−0.6, 0.6]`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.6..0.6));
    &m * m.transpose() + DMatrix::identity(n, n) * 0.5
}

/// A vector of α-length drawn uniformly from `[0, max_b)`.
pub fn random_u(rng: &mut ChaCha8Rng, a: &DMatrix<f64>, max_b: f64) -> DVector<f64> {
    let n = a.nrows();
    let z = DVector::from_vec(gaussian(rng, n));
    let len = z.dot(&(a * &z)).sqrt();
    z * (rng.random_range(0.0..max_b) / len)
}

pub fn norm_with(family: NormFamily, a: DMatrix<f64>, u: DVector<f64>) -> NormSpec {
    match family {
        NormFamily::Riemannian => NormSpec::riemannian(a),
        NormFamily::Randers => NormSpec::randers(a, u),
        NormFamily::AlphaBeta => NormSpec::alpha_beta(a, u, Profile::Polynomial(PROFILE.to_vec())),
    }
    .expect("well-shaped norm")
}

pub fn random_norm(rng: &mut ChaCha8Rng, n: usize, family: NormFamily) -> NormSpec {
    let a = random_spd(rng, n);
    let u = random_u(rng, &a, 0.9);
    norm_with(family, a, u)
}

/// A norm invariant under the isotropy of `data`: generic when `h = 0`,
/// otherwise a multiple of the identity with `u = 0`.
pub fn compatible_norm(rng: &mut ChaCha8Rng, data: &LieAlgebraData, family: NormFamily) -> NormSpec {
    let n = data.dim_m();
    if data.dim_h() == 0 {
        random_norm(rng, n, family)
    } else {
        let a = DMatrix::identity(n, n) * rng.random_range(0.5..2.0);
        norm_with(family, a, DVector::zeros(n))
    }
}

/// A direction with α-length in `[lo, hi)`.
pub fn random_direction(rng: &mut ChaCha8Rng, norm: &NormSpec, lo: f64, hi: f64) -> Vec<f64> {
    let z = gaussian(rng, norm.dim());
    let len = norm.alpha(&z);
    let scale = rng.random_range(lo..hi) / len;
    z.into_iter().map(|x| x * scale).collect()
}

pub fn unit_direction(rng: &mut ChaCha8Rng, norm: &NormSpec) -> Vec<f64> {
    let z = gaussian(rng, norm.dim());
    let len = norm.alpha(&z);
    z.into_iter().map(|x| x / len).collect()
}

/// The fixed algebras plus one fresh random 3-dimensional algebra.
pub fn algebra_pool(rng: &mut ChaCha8Rng) -> Vec<(&'static str, LieAlgebraData)> {
    vec![
        ("abelian3", builtin::abelian(3)),
        ("heisenberg3", builtin::heisenberg3()),
        ("so3", builtin::so3()),
        ("e2", builtin::e2()),
        ("solvable2", builtin::solvable2()),
        ("random3", random_three_dimensional(rng)),
    ]
}

/// `|a − b| / max(1, scale)`.
pub fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.abs().max(1.0)
}
