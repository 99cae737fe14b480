//! JSON description of a homogeneous space.
//!
//! ```json
//! {
//!   "name": "solvable2-randers",
//!   "dim_h": 0,
//!   "dim_m": 2,
//!   "brackets": [[1, 2, 2, 1.0]],
//!   "norm": { "family": "randers", "a": [[1, 0], [0, 1]], "u": [0.5, 0] }
//! }
//! ```
//!
//! A bracket entry `[i, j, k, value]` (1-based over `g`, `h` first) sets
//! `C^k_{ij} = value`; the antisymmetric partner is implied. `phi` is required
//! for the `alpha_beta` family: `{"builtin": "randers"}` or
//! `{"polynomial": [c0, c1, ...]}`.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curvature::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraData;
use crate::norms::{NormFamily, NormSpec, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Riemannian,
    Randers,
    AlphaBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiConfig {
    Builtin(String),
    Polynomial(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub family: FamilyTag,
    pub a: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub name: String,
    pub dim_h: usize,
    pub dim_m: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub norm: NormConfig,
}

impl SpaceConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Densify into structure constants and a norm. Shape and index problems
    /// are configuration errors; mathematical validity is checked separately.
    pub fn build(&self) -> Result<(LieAlgebraData, NormSpec)> {
        let cfg = |e: Error| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(format!("{}: {other}", self.name)),
        };
        let data = LieAlgebraData::from_sparse(self.dim_h, self.dim_m, &self.brackets).map_err(cfg)?;

        let n = self.dim_m;
        let a = &self.norm.a;
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::Config(format!("norm.a must be a {n}×{n} matrix")));
        }
        let a = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        let u = match &self.norm.u {
            Some(u) if u.len() != n => {
                return Err(Error::Config(format!("norm.u must have length {n}, got {}", u.len())))
            }
            Some(u) => DVector::from_column_slice(u),
            None => DVector::zeros(n),
        };
        let norm = match self.norm.family {
            FamilyTag::Riemannian => {
                if u.iter().any(|v| *v != 0.0) {
                    return Err(Error::Config("norm.u must be zero for a Riemannian norm".into()));
                }
                NormSpec::riemannian(a)
            }
            FamilyTag::Randers => NormSpec::randers(a, u),
            FamilyTag::AlphaBeta => {
                let profile = match &self.norm.phi {
                    Some(PhiConfig::Builtin(name)) if name == "randers" => Profile::Randers,
                    Some(PhiConfig::Builtin(name)) => {
                        return Err(Error::Config(format!("unknown built-in profile {name:?}")))
                    }
                    Some(PhiConfig::Polynomial(c)) if !c.is_empty() => Profile::Polynomial(c.clone()),
                    Some(PhiConfig::Polynomial(_)) => {
                        return Err(Error::Config("polynomial profile needs coefficients".into()))
                    }
                    None => return Err(Error::Config("alpha_beta norm requires norm.phi".into())),
                };
                NormSpec::alpha_beta(a, u, profile)
            }
        }
        .map_err(cfg)?;
        Ok((data, norm))
    }

    pub fn space(&self) -> Result<HomogeneousSpace> {
        let (data, norm) = self.build()?;
        HomogeneousSpace::new(data, norm)
    }

    /// Serialize existing data; custom profiles cannot be represented.
    pub fn from_parts(name: &str, data: &LieAlgebraData, norm: &NormSpec) -> Result<Self> {
        let n = norm.dim();
        let a = (0..n).map(|i| (0..n).map(|j| norm.a()[(i, j)]).collect()).collect();
        let u: Vec<f64> = norm.u().iter().copied().collect();
        let (family, u, phi) = match norm.family() {
            NormFamily::Riemannian => (FamilyTag::Riemannian, None, None),
            NormFamily::Randers => (FamilyTag::Randers, Some(u), None),
            NormFamily::AlphaBeta => {
                let phi = match norm.profile() {
                    Some(Profile::Randers) => PhiConfig::Builtin("randers".into()),
                    Some(Profile::Polynomial(c)) => PhiConfig::Polynomial(c.clone()),
                    _ => return Err(Error::Config("custom profiles cannot be serialized".into())),
                };
                (FamilyTag::AlphaBeta, Some(u), Some(phi))
            }
        };
        Ok(Self {
            name: name.to_string(),
            dim_h: data.dim_h(),
            dim_m: data.dim_m(),
            brackets: data.to_sparse(),
            norm: NormConfig { family, a, u, phi },
        })
    }
}
