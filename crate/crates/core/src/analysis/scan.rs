use std::io::Write;

use nalgebra::DVector;
use serde::Serialize;

use crate::curvature::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Thresholds for the isotropy verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanTolerances {
    /// `max|S| / max F` below this counts as vanishing S-curvature; also the
    /// spread of `S/F` above which it is non-constant.
    pub vanishing: f64,
    /// Variance of `S/F` above which it is non-constant.
    pub variance: f64,
}

impl Default for ScanTolerances {
    fn default() -> Self {
        Self { vanishing: 1e-8, variance: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotropyVerdict {
    Vanishing,
    /// `S/F` constant and nonzero: contradicts the isotropy dichotomy, so it
    /// signals a bug or broken input rather than a geometric outcome.
    IsotropicHenceVanishingViolation,
    NonIsotropic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub direction: Vec<f64>,
    pub f: f64,
    pub s: f64,
    pub s_over_f: f64,
    pub log_sqrt_det: f64,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub sample_count: usize,
    pub max_abs_s: f64,
    pub max_f: f64,
    pub mean_s_over_f: f64,
    pub variance_s_over_f: f64,
    pub min_s_over_f: f64,
    pub max_s_over_f: f64,
    pub argmax_distortion: Vec<f64>,
    pub max_log_sqrt_det: f64,
    pub argmax_gradient_norm: f64,
    pub s_at_argmax: f64,
    pub verdict: IsotropyVerdict,
    pub samples: Vec<SampleRecord>,
}

impl ScanReport {
    /// Per-sample CSV: direction components, F, S, S/F, ln√det g.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.argmax_distortion.len();
        let mut header: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        header.extend(["F", "S", "S_over_F", "log_sqrt_det_g"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for r in &self.samples {
            let mut fields: Vec<String> = r.direction.iter().map(|v| fmt12(*v)).collect();
            fields.extend([r.f, r.s, r.s_over_f, r.log_sqrt_det].map(fmt12));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// 12 significant digits in scientific notation.
pub(crate) fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Evaluate `S`, `F`, `S/F` and `ln √det g` on `samples` quasi-uniform
/// directions of the α-unit sphere, refine the maximizer of `ln √det g` and
/// classify the S-curvature.
pub fn sphere_scan(
    space: &HomogeneousSpace,
    samples: usize,
    seed: u64,
    tol: ScanTolerances,
    exec: Execution,
) -> Result<ScanReport> {
    if samples < 100 {
        return Err(Error::Domain(format!("a scan needs at least 100 samples, got {samples}")));
    }
    let directions = space.norm().alpha_sphere_directions(samples, seed)?;
    let records = exec.try_map_indexed(samples, |i| {
        let y = &directions[i];
        let c = space.curvature_at(y)?;
        Ok(SampleRecord {
            direction: y.clone(),
            f: c.f,
            s: c.s_frame,
            s_over_f: c.s_frame / c.f,
            log_sqrt_det: c.log_sqrt_det,
        })
    })?;

    let count = records.len() as f64;
    let max_abs_s = records.iter().map(|r| r.s.abs()).fold(0.0, f64::max);
    let max_f = records.iter().map(|r| r.f).fold(0.0, f64::max);
    let mean = records.iter().map(|r| r.s_over_f).sum::<f64>() / count;
    let variance = records.iter().map(|r| (r.s_over_f - mean).powi(2)).sum::<f64>() / count;
    let min_ratio = records.iter().map(|r| r.s_over_f).fold(f64::INFINITY, f64::min);
    let max_ratio = records.iter().map(|r| r.s_over_f).fold(f64::NEG_INFINITY, f64::max);

    let verdict = if max_abs_s / max_f < tol.vanishing {
        IsotropyVerdict::Vanishing
    } else if variance > tol.variance || max_ratio - min_ratio > tol.vanishing {
        IsotropyVerdict::NonIsotropic
    } else {
        IsotropyVerdict::IsotropicHenceVanishingViolation
    };

    let start = records
        .iter()
        .enumerate()
        .fold(0, |best, (i, r)| if r.log_sqrt_det > records[best].log_sqrt_det { i } else { best });
    let (argmax, max_lsd, grad_norm) = refine_distortion_argmax(space, &records[start].direction)?;
    let s_at_argmax = space.s_curvature(&argmax)?;

    Ok(ScanReport {
        sample_count: records.len(),
        max_abs_s,
        max_f,
        mean_s_over_f: mean,
        variance_s_over_f: variance,
        min_s_over_f: min_ratio,
        max_s_over_f: max_ratio,
        argmax_distortion: argmax,
        max_log_sqrt_det: max_lsd,
        argmax_gradient_norm: grad_norm,
        s_at_argmax,
        verdict,
        samples: records,
    })
}

const ASCENT_MAX_ITER: usize = 200;
const ASCENT_GRAD_TOL: f64 = 1e-10;

/// Projected gradient ascent of `ln √det g` on the α-unit sphere from
/// `start`. Returns the refined direction, its value and the final gradient
/// norm.
///
/// `I · y = 0`, so `A⁻¹ I` is already tangent to the α-sphere and serves as
/// the ascent direction. Steps grow after each success and halve on failure.
/// Once increments of `ln √det g` drop below rounding, a step is still
/// accepted when it shrinks the gradient.
pub fn refine_distortion_argmax(space: &HomogeneousSpace, start: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    let norm = space.norm();
    let a_chol = nalgebra::Cholesky::new(norm.a().clone())
        .ok_or_else(|| Error::InvalidNorm("inner product matrix is not positive definite".into()))?;
    let normalize = |y: Vec<f64>| -> Vec<f64> {
        let a = norm.alpha(&y);
        y.into_iter().map(|v| v / a).collect()
    };
    let eval = |y: &[f64]| -> Result<(f64, DVector<f64>)> {
        let ft = crate::curvature::fundamental_tensor(norm, y)?;
        let c = crate::curvature::mean_cartan_torsion(norm, y)?;
        Ok((ft.log_sqrt_det, c))
    };
    let mut y = normalize(start.to_vec());
    let (mut value, mut grad) = eval(&y)?;
    let mut step = 0.5;
    for _ in 0..ASCENT_MAX_ITER {
        if grad.norm() < ASCENT_GRAD_TOL {
            break;
        }
        let dir = a_chol.solve(&grad);
        let mut accepted = false;
        while step > 1e-16 {
            let trial = normalize(y.iter().zip(dir.iter()).map(|(a, d)| a + step * d).collect());
            let (tv, tg) = eval(&trial)?;
            let tiny = 1e-14 * value.abs().max(1.0);
            if tv > value || (tv >= value - tiny && tg.norm() < grad.norm()) {
                y = trial;
                value = tv;
                grad = tg;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let gn = grad.norm();
    Ok((y, value, gn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::builtin;
    use crate::norms::NormSpec;
    use nalgebra::DMatrix;

    fn randers(n: usize, b: f64) -> NormSpec {
        let mut u = DVector::zeros(n);
        u[0] = b;
        NormSpec::randers(DMatrix::identity(n, n), u).unwrap()
    }

    #[test]
    fn riemannian_so3_vanishes() {
        let space = HomogeneousSpace::new(
            builtin::so3(),
            NormSpec::riemannian(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]))).unwrap(),
        )
        .unwrap();
        let r = sphere_scan(&space, 500, 1, ScanTolerances::default(), Execution::default()).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Vanishing);
        assert!(r.max_abs_s <= 1e-12);
    }

    #[test]
    fn solvable_randers_is_non_isotropic() {
        let space = HomogeneousSpace::new(builtin::solvable2(), randers(2, 0.5)).unwrap();
        let r = sphere_scan(&space, 400, 3, ScanTolerances::default(), Execution::default()).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::NonIsotropic);
        assert!(r.s_at_argmax.abs() <= 1e-8, "{}", r.s_at_argmax);
        // ln √det g = (n+1)/2 ln(1 + β/α) peaks at y ∥ u.
        assert!((r.argmax_distortion[0] - 1.0).abs() < 1e-8, "{:?}", r.argmax_distortion);
    }

    #[test]
    fn too_few_samples_rejected() {
        let space = HomogeneousSpace::new(builtin::solvable2(), randers(2, 0.5)).unwrap();
        assert!(sphere_scan(&space, 99, 0, ScanTolerances::default(), Execution::default()).is_err());
    }

    #[test]
    fn csv_layout_and_determinism() {
        let space = HomogeneousSpace::new(builtin::heisenberg3(), randers(3, 0.3)).unwrap();
        let a = sphere_scan(&space, 100, 9, ScanTolerances::default(), Execution::Parallel).unwrap();
        let b = sphere_scan(&space, 100, 9, ScanTolerances::default(), Execution::Sequential).unwrap();
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "y1,y2,y3,F,S,S_over_F,log_sqrt_det_g");
        assert_eq!(lines.count(), 100);
    }
}
