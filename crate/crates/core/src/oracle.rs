//! Independent checks for the generic pipeline.
//!
//! The Randers closed forms are written for an α-orthonormal basis adapted to
//! the data: `u = b v̂₁` and the unit direction `v = a v̂₁ + a′ v̂₂`. In that
//! basis `g`, `g⁻¹` and the mean Cartan torsion are explicit rational
//! functions of `(b, a, a′)`, and the S-curvature of a homogeneous Randers
//! space reduces to
//!
//! ```text
//! S(v) = (n+1) / (2 F(v)) · (α(v) ⟨[v,u]_m, u⟩ + ⟨[v,u]_m, v⟩)
//! ```
//!
//! with all inner products taken in α. [`fd_scurvature`] rebuilds the
//! Killing-frame S-curvature from plain evaluations of `F` only.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::liealg::{KillingConstants, LieAlgebraData};
use crate::norms::{NormFamily, NormSpec, Profile};

const ADAPTED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandersAdapted {
    pub b: f64,
    pub a: f64,
    pub a_prime: f64,
    pub n: usize,
}

impl RandersAdapted {
    pub fn new(b: f64, a: f64, a_prime: f64, n: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&b) {
            return Err(Error::Domain(format!("b = {b} outside [0, 1)")));
        }
        if (a * a + a_prime * a_prime - 1.0).abs() > ADAPTED_TOL {
            return Err(Error::Domain(format!("a² + a′² = {} ≠ 1", a * a + a_prime * a_prime)));
        }
        if n < 2 {
            return Err(Error::Dimension(format!("adapted frame needs n ≥ 2, got {n}")));
        }
        Ok(Self { b, a, a_prime, n })
    }

    /// The adapted frame from `a` alone, taking `a′ = √(1 − a²) ≥ 0`.
    pub fn from_cosine(b: f64, a: f64, n: usize) -> Result<Self> {
        Self::new(b, a, (1.0 - a * a).max(0.0).sqrt(), n)
    }

    pub fn direction(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n];
        v[0] = self.a;
        v[1] = self.a_prime;
        v
    }

    /// The Randers norm `α + β` with `α` Euclidean and `u = b e₁`.
    pub fn norm(&self) -> NormSpec {
        let mut u = DVector::zeros(self.n);
        u[0] = self.b;
        NormSpec::randers(DMatrix::identity(self.n, self.n), u).expect("square identity")
    }
}

/// Nonzero entries of `g` in the adapted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptedTensor {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
    /// common diagonal entry for indices ≥ 3
    pub mii: f64,
}

impl AdaptedTensor {
    pub fn to_matrix(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::from_diagonal_element(n, n, self.mii);
        m[(0, 0)] = self.m11;
        m[(0, 1)] = self.m12;
        m[(1, 0)] = self.m12;
        m[(1, 1)] = self.m22;
        m
    }
}

pub fn randers_g_closed(p: &RandersAdapted) -> AdaptedTensor {
    let RandersAdapted { b, a, a_prime: ap, .. } = *p;
    AdaptedTensor {
        m11: 1.0 + b * b + 3.0 * b * a - b * a.powi(3),
        m12: b * ap.powi(3),
        m22: 1.0 + b * a.powi(3),
        mii: 1.0 + b * a,
    }
}

pub fn randers_ginv_closed(p: &RandersAdapted) -> AdaptedTensor {
    let RandersAdapted { b, a, a_prime: ap, .. } = *p;
    let k = 1.0 + b * a;
    let k3 = k.powi(-3);
    AdaptedTensor {
        m11: k3 * (1.0 + b * a.powi(3)),
        m12: -k3 * b * ap.powi(3),
        m22: k3 * (1.0 + b * b + 3.0 * b * a - b * a.powi(3)),
        mii: 1.0 / k,
    }
}

/// `(I₁, I₂)`; all other components vanish.
pub fn randers_cartan_closed(p: &RandersAdapted) -> (f64, f64) {
    let RandersAdapted { b, a, a_prime: ap, n } = *p;
    let c = (n as f64 + 1.0) / (2.0 * (1.0 + b * a));
    (c * b * ap * ap, -c * b * a * ap)
}

/// Components of the distortion gradient `g⁻¹ I` along `v̂₁, v̂₂`.
pub fn randers_distortion_gradient_closed(p: &RandersAdapted) -> (f64, f64) {
    let RandersAdapted { b, a, a_prime: ap, n } = *p;
    let c = (n as f64 + 1.0) / (2.0 * (1.0 + b * a).powi(3));
    (c * b * ap * ap, -c * b * ap * (a + b))
}

/// An α-orthonormal basis adapted to a Randers norm and a direction.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub params: RandersAdapted,
    /// Columns are `v̂₁, …, v̂_n` in the original coordinates.
    pub basis: DMatrix<f64>,
    /// α-length of the direction that was adapted.
    pub alpha: f64,
}

impl AdaptedFrame {
    /// Express a bilinear form given in original coordinates in the frame.
    pub fn pull_back(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.basis.transpose() * m * &self.basis
    }
}

/// Gram–Schmidt in the α inner product: `v̂₁ ∥ u` (or `∥ v` when `u = 0`),
/// `v̂₂` the normalized part of `v` orthogonal to `v̂₁` (any α-unit vector
/// orthogonal to `v̂₁` when `v ∥ u`), then the remaining coordinate axes.
pub fn adapt(spec: &NormSpec, v: &[f64]) -> Result<AdaptedFrame> {
    if spec.family() != NormFamily::Randers && !matches!(spec.profile(), Some(Profile::Randers)) {
        return Err(Error::NoClosedForm("adapted frame requires a Randers norm".into()));
    }
    let n = spec.dim();
    if n < 2 {
        return Err(Error::Dimension("adapted frame needs dim m ≥ 2".into()));
    }
    let alpha = spec.alpha(v);
    if !(alpha > 0.0) || v.len() != n {
        return Err(Error::Domain(format!("cannot adapt a frame to v = {v:?}")));
    }
    let unit_v: Vec<f64> = v.iter().map(|x| x / alpha).collect();
    let b = spec.u_alpha_norm();
    let first: Vec<f64> = if b > 0.0 { spec.u().iter().map(|x| x / b).collect() } else { unit_v.clone() };

    let mut candidates: Vec<Vec<f64>> = vec![first, unit_v.clone()];
    candidates.extend((0..n).map(|i| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    }));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for cand in candidates {
        if basis.len() == n {
            break;
        }
        let mut x = cand;
        for _ in 0..2 {
            for q in &basis {
                let proj = spec.inner(&x, q);
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= proj * qi);
            }
        }
        let len = spec.alpha(&x);
        if len > 1e-8 {
            basis.push(x.iter().map(|xi| xi / len).collect());
        }
    }
    if basis.len() != n {
        return Err(Error::Singularity("Gram–Schmidt failed to complete the frame".into()));
    }
    let a = spec.inner(&unit_v, &basis[0]);
    let a_prime = spec.inner(&unit_v, &basis[1]).max(0.0);
    // Re-normalize to absorb rounding in a² + a′².
    let r = (a * a + a_prime * a_prime).sqrt();
    let params = RandersAdapted::new(b, a / r, a_prime / r, n)?;
    let basis = DMatrix::from_fn(n, n, |i, j| basis[j][i]);
    Ok(AdaptedFrame { params, basis, alpha })
}

/// Closed-form S-curvature of a homogeneous Randers space at any `v ≠ 0`.
pub fn randers_s_closed(spec: &NormSpec, data: &LieAlgebraData, v: &[f64]) -> Result<f64> {
    if spec.family() != NormFamily::Randers {
        return Err(Error::NoClosedForm(format!("closed-form S requires a Randers norm, got {:?}", spec.family())));
    }
    let f = spec.f_value(v)?;
    let u: Vec<f64> = spec.u().iter().copied().collect();
    let z = data.bracket_m(v, &u)?;
    let n = spec.dim() as f64;
    Ok((n + 1.0) / (2.0 * f) * (spec.alpha(v) * spec.inner(&z, &u) + spec.inner(&z, v)))
}

/// Killing-frame S-curvature rebuilt from plain `F` evaluations.
///
/// Uses fourth-order central stencils at three nested step sizes scaled by
/// `α(y)`: `h` for `[F²]_y`, `√h` for `g_ij`, and `∛h` for the derivative of
/// `ln √det g`. Nesting the differences at one step would amplify rounding
/// by `ε/h³`.
pub fn fd_scurvature(spec: &NormSpec, kc: &KillingConstants, y: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let n = spec.dim();
    if kc.dim() != n || y.len() != n {
        return Err(Error::Dimension("fd_scurvature dimension mismatch".into()));
    }
    let scale = spec.alpha(y);
    let (h1, h2, h3) = (h * scale, h.sqrt() * scale, h.cbrt() * scale);

    let f2 = |p: &[f64]| -> Result<f64> { spec.f_value(p).map(|f| f * f) };
    let grad_f2 = fd_gradient(&f2, y, h1)?;
    let g = fd_hessian(&f2, y, h2)?.scale(0.5);
    let g_inv = nalgebra::Cholesky::new(g.clone())
        .ok_or_else(|| Error::Convexity { y: y.to_vec() })?
        .inverse();
    let log_sqrt_det = |p: &[f64]| -> Result<f64> {
        let gp = fd_hessian(&f2, p, h2)?.scale(0.5);
        let chol = nalgebra::Cholesky::new(gp).ok_or_else(|| Error::Convexity { y: p.to_vec() })?;
        Ok(chol.l().diagonal().iter().map(|d| d.ln()).sum())
    };
    let cartan = fd_gradient(&log_sqrt_det, y, h3)?;

    let p = DVector::from_fn(n, |l, _| {
        let mut s = 0.0;
        for k in 0..n {
            for (j, yj) in y.iter().enumerate() {
                s += kc.get(k, l, j) * grad_f2[k] * yj;
            }
        }
        s
    });
    let v = (&g_inv * p) * 0.5;
    Ok(v.dot(&cartan))
}

fn shifted(y: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    y.iter().zip(dir).map(|(a, d)| a + t * d).collect()
}

/// Fourth-order first directional derivative.
fn fd_first(f: &impl Fn(&[f64]) -> Result<f64>, y: &[f64], dir: &[f64], h: f64) -> Result<f64> {
    let e = |t: f64| f(&shifted(y, dir, t));
    Ok((-e(2.0 * h)? + 8.0 * e(h)? - 8.0 * e(-h)? + e(-2.0 * h)?) / (12.0 * h))
}

/// Fourth-order second directional derivative.
fn fd_second(f: &impl Fn(&[f64]) -> Result<f64>, y: &[f64], dir: &[f64], h: f64) -> Result<f64> {
    let e = |t: f64| f(&shifted(y, dir, t));
    Ok((-e(2.0 * h)? + 16.0 * e(h)? - 30.0 * e(0.0)? + 16.0 * e(-h)? - e(-2.0 * h)?) / (12.0 * h * h))
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn fd_gradient(f: &impl Fn(&[f64]) -> Result<f64>, y: &[f64], h: f64) -> Result<DVector<f64>> {
    let n = y.len();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        out[i] = fd_first(f, y, &unit(n, i), h)?;
    }
    Ok(out)
}

/// Mixed partials via polarization: `∂ᵢ∂ⱼ = (D²_{eᵢ+eⱼ} − D²_{eᵢ−eⱼ}) / 4`.
fn fd_hessian(f: &impl Fn(&[f64]) -> Result<f64>, y: &[f64], h: f64) -> Result<DMatrix<f64>> {
    let n = y.len();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = fd_second(f, y, &unit(n, i), h)?;
        for j in i + 1..n {
            let mut plus = unit(n, i);
            plus[j] = 1.0;
            let mut minus = unit(n, i);
            minus[j] = -1.0;
            let v = (fd_second(f, y, &plus, h)? - fd_second(f, y, &minus, h)?) / 4.0;
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}
