//! Minkowski norms on the model space `m`.
//!
//! Every norm here is built from an inner product `α(y) = √(yᵀ A y)` and a
//! linear form `β(y) = ⟨y, u⟩_A`:
//!
//! * Riemannian: `F = α`
//! * Randers: `F = α + β`, valid while `⟨u, u⟩_A < 1`
//! * (α,β): `F = α φ(β/α)` for a profile `φ` supplied with three derivatives
//!
//! `F²` is evaluated as an order-3 jet so the fundamental tensor and its
//! `y`-derivatives come out exactly.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};
use crate::jets::{Jet3, Taylor3};
use crate::sampling::unit_sphere_points;

const SYMMETRY_TOL: f64 = 1e-12;
const ZERO_VECTOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormFamily {
    Riemannian,
    Randers,
    AlphaBeta,
}

/// The profile `φ` of an (α,β) norm.
#[derive(Clone)]
pub enum Profile {
    /// `φ(s) = 1 + s`, which reproduces the Randers norm.
    Randers,
    /// `φ(s) = Σ c_k s^k`, coefficients in increasing degree.
    Polynomial(Vec<f64>),
    /// Arbitrary profile returning `φ, φ′, φ″, φ‴` at `s`.
    Custom(Arc<dyn Fn(f64) -> Taylor3 + Send + Sync>),
}

impl Profile {
    pub fn eval(&self, s: f64) -> Taylor3 {
        match self {
            Profile::Randers => Taylor3::new(1.0 + s, 1.0, 0.0, 0.0),
            Profile::Polynomial(c) => {
                // Horner on the polynomial and its first three derivatives.
                let (mut p0, mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    p3 = p3 * s + 3.0 * p2;
                    p2 = p2 * s + 2.0 * p1;
                    p1 = p1 * s + p0;
                    p0 = p0 * s + ck;
                }
                Taylor3::new(p0, p1, p2, p3)
            }
            Profile::Custom(f) => f(s),
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Randers => write!(f, "Randers"),
            Profile::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Profile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Profile::Randers, Profile::Randers) => true,
            (Profile::Polynomial(a), Profile::Polynomial(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone)]
pub struct NormSpec {
    family: NormFamily,
    a: DMatrix<f64>,
    u: DVector<f64>,
    profile: Option<Profile>,
    a_rows: Vec<f64>,
    au: Vec<f64>,
    chol: Option<Cholesky<f64, Dyn>>,
    /// `L⁻ᵀ` for `A = L Lᵀ`; maps the Euclidean unit sphere onto `{α = 1}`.
    l_inv_t: Option<DMatrix<f64>>,
    u_alpha: f64,
    zero_threshold: f64,
}

impl fmt::Debug for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormSpec")
            .field("family", &self.family)
            .field("a", &self.a)
            .field("u", &self.u)
            .field("profile", &self.profile)
            .finish()
    }
}

impl PartialEq for NormSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.a == other.a
            && self.u == other.u
            && self.profile == other.profile
    }
}

impl NormSpec {
    fn build(
        family: NormFamily,
        a: DMatrix<f64>,
        u: DVector<f64>,
        profile: Option<Profile>,
    ) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::Dimension(format!(
                "inner product matrix must be square and nonempty, got {}×{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if u.len() != n {
            return Err(Error::Dimension(format!(
                "vector u has length {} but the inner product has size {n}",
                u.len()
            )));
        }
        let symmetric = (0..n)
            .all(|i| (0..n).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= SYMMETRY_TOL * (1.0 + a[(i, j)].abs())));
        let chol = if symmetric { Cholesky::new(a.clone()) } else { None };
        let l_inv_t = chol
            .as_ref()
            .and_then(|c| c.l().try_inverse())
            .map(|l_inv| l_inv.transpose());
        let au_vec = &a * &u;
        let u_alpha = u.dot(&au_vec).max(0.0).sqrt();
        let scale = (0..n).map(|i| a[(i, i)].abs()).fold(0.0, f64::max).sqrt();
        let a_rows = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)]).collect();
        Ok(Self {
            family,
            a,
            au: au_vec.iter().copied().collect(),
            u,
            profile,
            a_rows,
            chol,
            l_inv_t,
            u_alpha,
            zero_threshold: ZERO_VECTOR_TOL * scale,
        })
    }

    pub fn riemannian(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        Self::build(NormFamily::Riemannian, a, DVector::zeros(n), None)
    }

    pub fn randers(a: DMatrix<f64>, u: DVector<f64>) -> Result<Self> {
        Self::build(NormFamily::Randers, a, u, None)
    }

    pub fn alpha_beta(a: DMatrix<f64>, u: DVector<f64>, profile: Profile) -> Result<Self> {
        Self::build(NormFamily::AlphaBeta, a, u, Some(profile))
    }

    pub fn family(&self) -> NormFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn u(&self) -> &DVector<f64> {
        &self.u
    }

    pub fn profile(&self) -> Option<&Profile> {
        self.profile.as_ref()
    }

    /// `√⟨u, u⟩_A`, the α-norm of `β`.
    pub fn u_alpha_norm(&self) -> f64 {
        self.u_alpha
    }

    pub fn is_spd(&self) -> bool {
        self.chol.is_some()
    }

    /// Whether the Randers bound `⟨u, u⟩_A < 1` applies to this norm.
    pub fn has_randers_bound(&self) -> bool {
        matches!(self.family, NormFamily::Randers)
            || matches!(self.profile, Some(Profile::Randers))
    }

    pub fn randers_bound_ok(&self) -> bool {
        !self.has_randers_bound() || self.u_alpha < 1.0
    }

    fn check_valid(&self) -> Result<()> {
        if !self.is_spd() {
            return Err(Error::InvalidNorm(
                "inner product matrix is not symmetric positive definite".into(),
            ));
        }
        if !self.randers_bound_ok() {
            return Err(Error::InvalidNorm(format!(
                "Randers bound violated: |u|_A = {} is not less than 1",
                self.u_alpha
            )));
        }
        Ok(())
    }

    fn check_vector(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a norm on dimension {}",
                y.len(),
                self.dim()
            )));
        }
        let alpha = self.alpha(y);
        if !(alpha >= self.zero_threshold) || alpha == 0.0 {
            return Err(Error::Domain(format!(
                "Finsler quantities are undefined at the zero vector (y = {y:?})"
            )));
        }
        Ok(alpha)
    }

    /// `⟨x, y⟩_A`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| x[i] * (0..n).map(|j| self.a_rows[i * n + j] * y[j]).sum::<f64>())
            .sum()
    }

    pub fn alpha(&self, y: &[f64]) -> f64 {
        self.inner(y, y).max(0.0).sqrt()
    }

    pub fn beta(&self, y: &[f64]) -> f64 {
        self.au.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// `√det A`.
    pub fn sqrt_det_a(&self) -> Result<f64> {
        let chol = self.chol.as_ref().ok_or_else(|| {
            Error::InvalidNorm("inner product matrix is not symmetric positive definite".into())
        })?;
        Ok(chol.l().diagonal().iter().product())
    }

    /// Map a Euclidean unit vector `z` to the A-unit vector `L⁻ᵀ z`,
    /// where `A = L Lᵀ`.
    pub fn from_unit_sphere(&self, z: &[f64]) -> Result<Vec<f64>> {
        let m = self.l_inv_t.as_ref().ok_or_else(|| {
            Error::InvalidNorm("inner product matrix is not symmetric positive definite".into())
        })?;
        let n = self.dim();
        if z.len() != n {
            return Err(Error::Dimension(format!("vector of length {} for dimension {n}", z.len())));
        }
        Ok((0..n).map(|i| (0..n).map(|j| m[(i, j)] * z[j]).sum()).collect())
    }

    /// Quasi-uniform directions on the A-unit sphere `{α = 1}`.
    pub fn alpha_sphere_directions(&self, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        unit_sphere_points(self.dim(), count, seed)
            .iter()
            .map(|z| self.from_unit_sphere(z))
            .collect()
    }

    /// `F(y)`; plain floating-point evaluation, independent of the jet path.
    pub fn f_value(&self, y: &[f64]) -> Result<f64> {
        self.check_valid()?;
        let alpha = self.check_vector(y)?;
        match self.family {
            NormFamily::Riemannian => Ok(alpha),
            NormFamily::Randers => Ok(alpha + self.beta(y)),
            NormFamily::AlphaBeta => {
                let s = self.beta(y) / alpha;
                let phi = self.profile_at(s)?;
                Ok(alpha * phi.d0)
            }
        }
    }

    fn profile_at(&self, s: f64) -> Result<Taylor3> {
        let phi = self
            .profile
            .as_ref()
            .ok_or_else(|| Error::InvalidNorm("(α,β) norm without a profile".into()))?
            .eval(s);
        if !(phi.d0 > 0.0) {
            return Err(Error::Domain(format!("profile φ({s}) = {} is not positive", phi.d0)));
        }
        Ok(phi)
    }

    /// Order-3 jet of `F²` at `y`.
    pub fn f_squared_jet(&self, y: &[f64]) -> Result<Jet3> {
        self.check_valid()?;
        self.f_squared_jet_unchecked(y)
    }

    fn f_squared_jet_unchecked(&self, y: &[f64]) -> Result<Jet3> {
        self.check_vector(y)?;
        let alpha2 = Jet3::quadratic_form(&self.a_rows, y)?;
        match self.family {
            NormFamily::Riemannian => Ok(alpha2),
            NormFamily::Randers => {
                let alpha = alpha2.sqrt()?;
                let beta = Jet3::linear_form(&self.au, y)?;
                let f = &alpha + &beta;
                Ok(&f * &f)
            }
            NormFamily::AlphaBeta => {
                let alpha = alpha2.sqrt()?;
                let beta = Jet3::linear_form(&self.au, y)?;
                let s = beta.div(&alpha)?;
                let phi = s.compose1(self.profile_at(s.value())?);
                let f = &alpha * &phi;
                Ok(&f * &f)
            }
        }
    }

    /// `g_ij(y) = ½ [F²]_{y^i y^j}`.
    pub fn fundamental_matrix(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        let jet = self.f_squared_jet(y)?;
        Ok(half_hessian(&jet))
    }
}

pub(crate) fn half_hessian(jet: &Jet3) -> DMatrix<f64> {
    let n = jet.dim();
    DMatrix::from_fn(n, n, |i, j| 0.5 * jet.hess_at(i, j))
}

/// One strong-convexity probe: a direction and the smallest eigenvalue of
/// `g_ij` there (`NaN` if `g` could not be evaluated).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexitySample {
    pub direction: Vec<f64>,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormDiagnostics {
    pub spd_ok: bool,
    pub randers_bound_ok: bool,
    pub u_alpha_norm: f64,
    pub convexity_samples: Vec<ConvexitySample>,
}

impl NormDiagnostics {
    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.convexity_samples
            .iter()
            .map(|s| s.min_eigenvalue)
            .reduce(|a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.min(b) })
    }

    pub fn convexity_ok(&self) -> bool {
        !self.convexity_samples.is_empty()
            && self.convexity_samples.iter().all(|s| s.min_eigenvalue > 0.0)
    }

    pub fn is_valid(&self) -> bool {
        self.spd_ok && self.randers_bound_ok && self.convexity_ok()
    }
}

/// SPD check of `A`, the Randers bound, and strong convexity of `g_ij` on
/// `sample_count` quasi-uniform directions.
pub fn validate(spec: &NormSpec, sample_count: usize) -> NormDiagnostics {
    let mut diag = NormDiagnostics {
        spd_ok: spec.is_spd(),
        randers_bound_ok: spec.randers_bound_ok(),
        u_alpha_norm: spec.u_alpha_norm(),
        convexity_samples: Vec::new(),
    };
    if !diag.spd_ok {
        return diag;
    }
    let directions = spec.alpha_sphere_directions(sample_count.max(1), 0).unwrap_or_default();
    diag.convexity_samples = directions
        .into_iter()
        .map(|y| {
            let min_eigenvalue = spec
                .f_squared_jet_unchecked(&y)
                .map(|jet| {
                    SymmetricEigen::new(half_hessian(&jet))
                        .eigenvalues
                        .iter()
                        .copied()
                        .fold(f64::INFINITY, f64::min)
                })
                .unwrap_or(f64::NAN);
            ConvexitySample { direction: y, min_eigenvalue }
        })
        .collect();
    diag
}
