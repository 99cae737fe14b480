//! S-curvature, mean Cartan torsion and geodesic-spray data of homogeneous
//! Finsler spaces `G/H`, computed from the structure constants of
//! `g = h ⊕ m` and a Minkowski norm on `m`.
//!
//! The pipeline differentiates `F²` exactly with order-3 jets ([`jets`]),
//! builds the fundamental tensor and its derivatives ([`curvature`]), and
//! evaluates the S-curvature both in the Killing frame and through the
//! `m`-bracket with the distortion gradient. [`oracle`] holds the closed-form
//! Randers results and a finite-difference path used to check it.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod jets;
pub mod liealg;
pub mod norms;
pub mod oracle;
pub mod registry;
pub mod sampling;

pub use curvature::{CurvatureAt, HomogeneousSpace};
pub use error::{Error, Result};
pub use exec::Execution;
pub use jets::Jet3;
pub use liealg::{KillingConstants, LieAlgebraData};
pub use norms::{NormFamily, NormSpec, Profile};
