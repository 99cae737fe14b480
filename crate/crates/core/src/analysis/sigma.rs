//! Monte Carlo estimate of the Busemann–Hausdorff coefficient
//! `σ = Vol(Bⁿ) / Vol{y : F(y) < 1}`.
//!
//! Points are drawn uniformly from the α-ball of radius `R`, which encloses
//! the indicatrix. With `p` the hit fraction the ball has coordinate volume
//! `Rⁿ Vol(Bⁿ) / √det A`, so `σ = √det A / (p Rⁿ)` and `Vol(Bⁿ)` cancels.
//! Batches own fixed ChaCha streams, so the estimate does not depend on how
//! batches are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::norms::{NormFamily, NormSpec, Profile};

const BATCH: usize = 10_000;
const PROFILE_GRID: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub hits: usize,
    pub radius: f64,
}

/// `√det A (1 − b²)^{(n+1)/2}` for a Randers norm, `√det A` for a Riemannian
/// one.
pub fn randers_sigma_reference(spec: &NormSpec) -> Option<f64> {
    let sqrt_det = spec.sqrt_det_a().ok()?;
    let n = spec.dim() as f64;
    match spec.family() {
        NormFamily::Riemannian => Some(sqrt_det),
        NormFamily::Randers => {
            let b = spec.u_alpha_norm();
            Some(sqrt_det * (1.0 - b * b).powf((n + 1.0) / 2.0))
        }
        NormFamily::AlphaBeta => None,
    }
}

/// α-radius enclosing `{F < 1}`: `1 / min_{α(y)=1} F(y)`.
fn enclosing_radius(spec: &NormSpec) -> Result<f64> {
    match spec.family() {
        NormFamily::Riemannian => Ok(1.0),
        NormFamily::Randers => Ok(1.0 / (1.0 - spec.u_alpha_norm())),
        NormFamily::AlphaBeta => {
            // On the α-sphere F = φ(β) and β sweeps [−b, b].
            let b = spec.u_alpha_norm();
            let profile = spec.profile().unwrap_or(&Profile::Randers);
            let min_phi = (0..=PROFILE_GRID)
                .map(|i| profile.eval(-b + 2.0 * b * i as f64 / PROFILE_GRID as f64).d0)
                .fold(f64::INFINITY, f64::min);
            if !(min_phi > 0.0) {
                return Err(Error::InvalidNorm("profile is not positive on [−b, b]".into()));
            }
            Ok(1.01 / min_phi)
        }
    }
}

pub fn bh_sigma(spec: &NormSpec, mc_samples: usize, seed: u64, exec: Execution) -> Result<SigmaEstimate> {
    if mc_samples < 10_000 {
        return Err(Error::Domain(format!("σ estimation needs at least 10⁴ samples, got {mc_samples}")));
    }
    let n = spec.dim();
    let radius = enclosing_radius(spec)?;
    let sqrt_det = spec.sqrt_det_a()?;
    if !spec.randers_bound_ok() {
        return Err(Error::InvalidNorm(format!(
            "Randers bound violated: |u|_A = {} is not less than 1",
            spec.u_alpha_norm()
        )));
    }

    let batches = mc_samples.div_ceil(BATCH);
    let hits = exec.try_map_indexed(batches, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let len = BATCH.min(mc_samples - b * BATCH);
        let mut z = vec![0.0; n];
        let mut hits = 0usize;
        for _ in 0..len {
            // Uniform in the unit ball: Gaussian direction, radius U^{1/n}.
            z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
            let zn = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r = radius * rng.random::<f64>().powf(1.0 / n as f64) / zn;
            let unit: Vec<f64> = z.iter().map(|v| v * r).collect();
            let y = spec.from_unit_sphere(&unit)?;
            match spec.f_value(&y) {
                Ok(f) if f < 1.0 => hits += 1,
                Ok(_) => {}
                Err(Error::Domain(_)) => hits += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(hits)
    })?;
    let hits: usize = hits.into_iter().sum();
    if hits == 0 {
        return Err(Error::Domain("no Monte Carlo sample fell inside the indicatrix".into()));
    }
    let p = hits as f64 / mc_samples as f64;
    let estimate = sqrt_det / (p * radius.powi(n as i32));
    let std_error = estimate * ((1.0 - p) / (p * mc_samples as f64)).sqrt();
    Ok(SigmaEstimate { estimate, std_error, samples: mc_samples, hits, radius })
}
