//! Indicatrix-level analyses built on the pointwise pipeline.

mod geodesic;
mod scan;
mod sigma;

pub use geodesic::{geodesic_integrate, Trajectory};
pub use scan::{
    refine_distortion_argmax, sphere_scan, IsotropyVerdict, SampleRecord, ScanReport, ScanTolerances,
};
pub use sigma::{bh_sigma, randers_sigma_reference, SigmaEstimate};
