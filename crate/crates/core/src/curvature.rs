//! Pointwise curvature data of a homogeneous Finsler space at `y ∈ m`.
//!
//! With `g_ij = ½[F²]_{y^i y^j}` and Killing-frame constants `c^k_{ij}`:
//!
//! * mean Cartan torsion `I_i = [ln √det g]_{y^i} = ½ g^{pq} ∂_i g_pq`
//! * distortion gradient `w = g⁻¹ I`
//! * vertical spray coefficients `V^i = ½ g^{il} c^k_{lj} [F²]_{y^k} y^j`
//! * S-curvature in the Killing frame, `S = V · I`
//! * S-curvature from the bracket, `S = ⟨[y, w]_m, y⟩_y`
//!
//! The two S-curvature routes are algebraically equal under the sign
//! convention of [`killing_constants`](crate::liealg::killing_constants); the
//! pipeline computes both so callers can compare them.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::liealg::{killing_constants, KillingConstants, LieAlgebraData};
use crate::norms::{half_hessian, NormSpec};

/// `g`, `g⁻¹`, `∂g/∂y` and `ln √det g` at one direction.
#[derive(Debug, Clone)]
pub struct FundamentalTensor {
    pub f: f64,
    /// `[F²]_{y^k}`
    pub f2_grad: DVector<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `∂g_ij/∂y^k` at index `(i * n + j) * n + k`.
    pub dg: Vec<f64>,
    pub log_sqrt_det: f64,
}

impl FundamentalTensor {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn dg_at(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.dg[(i * n + j) * n + k]
    }

    fn cartan(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| {
            let mut s = 0.0;
            for p in 0..n {
                for q in 0..n {
                    s += self.g_inv[(p, q)] * self.dg_at(p, q, i);
                }
            }
            0.5 * s
        })
    }
}

pub fn fundamental_tensor(spec: &NormSpec, y: &[f64]) -> Result<FundamentalTensor> {
    let jet = spec.f_squared_jet(y)?;
    let n = jet.dim();
    let g = half_hessian(&jet);
    let chol = nalgebra::Cholesky::new(g.clone()).ok_or_else(|| Error::Convexity { y: y.to_vec() })?;
    let log_sqrt_det = chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let raw_inv = chol.inverse();
    let g_inv = DMatrix::from_fn(n, n, |i, j| 0.5 * (raw_inv[(i, j)] + raw_inv[(j, i)]));
    Ok(FundamentalTensor {
        f: jet.value().sqrt(),
        f2_grad: DVector::from_column_slice(jet.grad()),
        g,
        g_inv,
        dg: jet.third().iter().map(|t| 0.5 * t).collect(),
        log_sqrt_det,
    })
}

pub fn log_sqrt_det(spec: &NormSpec, y: &[f64]) -> Result<f64> {
    Ok(fundamental_tensor(spec, y)?.log_sqrt_det)
}

pub fn mean_cartan_torsion(spec: &NormSpec, y: &[f64]) -> Result<DVector<f64>> {
    Ok(fundamental_tensor(spec, y)?.cartan())
}

pub fn distortion_gradient(spec: &NormSpec, y: &[f64]) -> Result<DVector<f64>> {
    let ft = fundamental_tensor(spec, y)?;
    Ok(&ft.g_inv * ft.cartan())
}

fn check_frame(spec: &NormSpec, kc: &KillingConstants) -> Result<()> {
    if spec.dim() != kc.dim() {
        return Err(Error::Dimension(format!(
            "norm on dimension {} with Killing constants on dimension {}",
            spec.dim(),
            kc.dim()
        )));
    }
    Ok(())
}

fn vertical(ft: &FundamentalTensor, kc: &KillingConstants, y: &[f64]) -> DVector<f64> {
    let n = ft.dim();
    // p_l = Σ_{k,j} c^k_{lj} [F²]_{y^k} y^j
    let p = DVector::from_fn(n, |l, _| {
        let mut s = 0.0;
        for k in 0..n {
            let fk = ft.f2_grad[k];
            if fk == 0.0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += kc.get(k, l, j) * fk * yj;
            }
        }
        s
    });
    (&ft.g_inv * p) * 0.5
}

pub fn spray_vertical(spec: &NormSpec, kc: &KillingConstants, y: &[f64]) -> Result<DVector<f64>> {
    check_frame(spec, kc)?;
    let ft = fundamental_tensor(spec, y)?;
    Ok(vertical(&ft, kc, y))
}

pub fn s_curvature_frame(spec: &NormSpec, kc: &KillingConstants, y: &[f64]) -> Result<f64> {
    check_frame(spec, kc)?;
    let ft = fundamental_tensor(spec, y)?;
    Ok(vertical(&ft, kc, y).dot(&ft.cartan()))
}

fn bracket_form(ft: &FundamentalTensor, data: &LieAlgebraData, y: &[f64], w: &DVector<f64>) -> Result<f64> {
    let z = DVector::from_vec(data.bracket_m(y, w.as_slice())?);
    let yv = DVector::from_column_slice(y);
    Ok(z.dot(&(&ft.g * yv)))
}

pub fn s_curvature_bracket(spec: &NormSpec, data: &LieAlgebraData, y: &[f64]) -> Result<f64> {
    if spec.dim() != data.dim_m() {
        return Err(Error::Dimension(format!(
            "norm on dimension {} but dim m = {}",
            spec.dim(),
            data.dim_m()
        )));
    }
    let ft = fundamental_tensor(spec, y)?;
    let w = &ft.g_inv * ft.cartan();
    bracket_form(&ft, data, y, &w)
}

/// `S(λy) − λ S(y)` using the Killing-frame formula.
pub fn s_homogeneity_check(spec: &NormSpec, kc: &KillingConstants, y: &[f64], lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("homogeneity factor must be positive, got {lambda}")));
    }
    let scaled: Vec<f64> = y.iter().map(|v| v * lambda).collect();
    Ok(s_curvature_frame(spec, kc, &scaled)? - lambda * s_curvature_frame(spec, kc, y)?)
}

/// Every pointwise quantity at one direction, computed in one pass.
#[derive(Debug, Clone)]
pub struct CurvatureAt {
    pub y: Vec<f64>,
    pub f: f64,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub dg: Vec<f64>,
    pub log_sqrt_det: f64,
    pub f2_grad: DVector<f64>,
    /// mean Cartan torsion
    pub cartan: DVector<f64>,
    /// distortion gradient `g⁻¹ I`
    pub w: DVector<f64>,
    /// vertical spray coefficients
    pub v: DVector<f64>,
    pub s_frame: f64,
    pub s_bracket: f64,
}

/// A homogeneous space `G/H` with a Minkowski norm on `m`.
#[derive(Debug, Clone)]
pub struct HomogeneousSpace {
    data: LieAlgebraData,
    kc: KillingConstants,
    norm: NormSpec,
}

impl HomogeneousSpace {
    pub fn new(data: LieAlgebraData, norm: NormSpec) -> Result<Self> {
        if norm.dim() != data.dim_m() {
            return Err(Error::Dimension(format!(
                "norm on dimension {} but dim m = {}",
                norm.dim(),
                data.dim_m()
            )));
        }
        let kc = killing_constants(&data);
        Ok(Self { data, kc, norm })
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.data
    }

    pub fn killing(&self) -> &KillingConstants {
        &self.kc
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn dim(&self) -> usize {
        self.data.dim_m()
    }

    pub fn curvature_at(&self, y: &[f64]) -> Result<CurvatureAt> {
        let ft = fundamental_tensor(&self.norm, y)?;
        let cartan = ft.cartan();
        let w = &ft.g_inv * &cartan;
        let v = vertical(&ft, &self.kc, y);
        let s_frame = v.dot(&cartan);
        let s_bracket = bracket_form(&ft, &self.data, y, &w)?;
        Ok(CurvatureAt {
            y: y.to_vec(),
            f: ft.f,
            log_sqrt_det: ft.log_sqrt_det,
            f2_grad: ft.f2_grad,
            g: ft.g,
            g_inv: ft.g_inv,
            dg: ft.dg,
            cartan,
            w,
            v,
            s_frame,
            s_bracket,
        })
    }

    pub fn s_curvature(&self, y: &[f64]) -> Result<f64> {
        s_curvature_frame(&self.norm, &self.kc, y)
    }

    pub fn spray_vertical(&self, y: &[f64]) -> Result<DVector<f64>> {
        spray_vertical(&self.norm, &self.kc, y)
    }
}
