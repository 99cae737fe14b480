//! Deterministic quasi-uniform points on the Euclidean unit sphere.
//!
//! A Kronecker (generalized golden ratio) sequence in the unit cube is given a
//! seed-dependent Cranley–Patterson shift, pushed through the inverse normal
//! CDF coordinatewise and normalized. The result is spread far more evenly
//! than i.i.d. Gaussian directions and depends only on `(dim, count, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// The positive root of `x^(d+1) = x + 1`.
fn generalized_golden_ratio(d: usize) -> f64 {
    let mut x: f64 = 2.0;
    for _ in 0..64 {
        x = (1.0 + x).powf(1.0 / (d as f64 + 1.0));
    }
    x
}

pub fn unit_sphere_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if dim == 0 {
        return vec![Vec::new(); count];
    }
    let phi = generalized_golden_ratio(dim);
    let steps: Vec<f64> = (1..=dim).map(|j| phi.powi(-(j as i32)).fract()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");

    (0..count)
        .map(|i| {
            let mut z: Vec<f64> = (0..dim)
                .map(|j| {
                    let u = (shift[j] + (i as f64 + 1.0) * steps[j]).fract();
                    normal.inverse_cdf(u.clamp(1e-12, 1.0 - 1e-12))
                })
                .collect();
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                z.iter_mut().for_each(|v| *v /= norm);
            } else {
                z[0] = 1.0;
            }
            z
        })
        .collect()
}
