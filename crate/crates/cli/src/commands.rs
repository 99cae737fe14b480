use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use finsler_core::analysis::{
    bh_sigma, geodesic_integrate, randers_sigma_reference, sphere_scan, IsotropyVerdict, ScanTolerances,
};
use finsler_core::config::SpaceConfig;
use finsler_core::liealg::{self, check_isotropy_invariance};
use finsler_core::oracle::randers_s_closed;
use finsler_core::{norms, registry, Execution, HomogeneousSpace, NormFamily};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{num, nums, opt};

/// Isotropy residual above which a configuration is rejected.
const ISOTROPY_TOL: f64 = 1e-8;
/// Relative discrepancy allowed between the pipeline and the closed form.
const ORACLE_TOL: f64 = 1e-8;
const CONVEXITY_SAMPLES: usize = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Core(#[from] finsler_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(finsler_core::Error::Config(_)) => 2,
            CliError::Failure(_) | CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A path to a JSON config if one exists, otherwise a built-in name.
pub fn load(source: &str) -> CliResult<SpaceConfig> {
    let path = Path::new(source);
    if path.exists() {
        return Ok(SpaceConfig::from_path(path)?);
    }
    registry::resolve(source).map_err(|e| {
        CliError::Usage(format!("{source:?} is neither a readable config file nor a built-in space ({e})"))
    })
}

pub fn parse_vector(text: &str, dim: usize, what: &str) -> CliResult<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("cannot parse {what} {text:?}: {e}")))?;
    if values.len() != dim {
        return Err(CliError::Usage(format!("{what} needs {dim} components, got {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("{what} must be finite")));
    }
    Ok(values)
}

fn family_name(f: NormFamily) -> &'static str {
    match f {
        NormFamily::Riemannian => "riemannian",
        NormFamily::Randers => "randers",
        NormFamily::AlphaBeta => "alpha_beta",
    }
}

fn relative(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(1.0)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
}

fn io_failure(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Failure(format!("cannot write {}: {e}", path.display()))
}

pub fn validate(source: &str) -> CliResult<Value> {
    let cfg = load(source)?;
    let (data, norm) = cfg.build()?;
    let violations = liealg::validate(&data);
    let diag = norms::validate(&norm, CONVEXITY_SAMPLES);
    let isotropy = if diag.spd_ok && diag.randers_bound_ok {
        Some(check_isotropy_invariance(&data, &norm, CONVEXITY_SAMPLES)?)
    } else {
        None
    };

    let mut problems = Vec::new();
    for v in &violations {
        problems.push(format!("lie algebra {:?} residual {:.3e}", v.kind, v.max_residual));
    }
    if !diag.spd_ok {
        problems.push("inner product matrix A is not symmetric positive definite".to_string());
    }
    if !diag.randers_bound_ok {
        problems.push(format!(
            "Randers bound violated: |u|_A = {} must be less than 1",
            diag.u_alpha_norm
        ));
    }
    if diag.spd_ok && diag.randers_bound_ok && !diag.convexity_ok() {
        problems.push(format!(
            "fundamental tensor is not positive definite (min eigenvalue {:?})",
            diag.min_eigenvalue()
        ));
    }
    if let Some(r) = isotropy.filter(|r| !(*r <= ISOTROPY_TOL)) {
        problems.push(format!("norm is not invariant under the isotropy: residual {r:.3e}"));
    }

    let report = json!({
        "command": "validate",
        "name": cfg.name,
        "dim_h": data.dim_h(),
        "dim_m": data.dim_m(),
        "lie_algebra": {
            "ok": violations.is_empty(),
            "violations": violations.iter().map(|v| json!({
                "kind": format!("{:?}", v.kind).to_lowercase(),
                "max_residual": num(v.max_residual),
            })).collect::<Vec<_>>(),
        },
        "norm": {
            "family": family_name(norm.family()),
            "spd": diag.spd_ok,
            "randers_bound": diag.randers_bound_ok,
            "u_alpha_norm": num(diag.u_alpha_norm),
            "convexity_samples": diag.convexity_samples.len(),
            "min_eigenvalue": opt(diag.min_eigenvalue()),
            "ok": diag.is_valid(),
        },
        "isotropy": {
            "residual": opt(isotropy),
            "ok": isotropy.is_some_and(|r| r <= ISOTROPY_TOL),
        },
        "ok": problems.is_empty(),
    });
    crate::report::print(&report);
    if problems.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Failure(format!("validation failed:\n  {}", problems.join("\n  "))))
    }
}

pub fn scurv(source: &str, y: &str) -> CliResult<Value> {
    let cfg = load(source)?;
    let space = cfg.space()?;
    let y = parse_vector(y, space.dim(), "--y")?;
    let c = space.curvature_at(&y)?;
    let oracle = match space.norm().family() {
        NormFamily::Randers => {
            let s = randers_s_closed(space.norm(), space.algebra(), &y)?;
            json!({ "S": num(s), "match": relative(c.s_frame, s) <= ORACLE_TOL })
        }
        _ => Value::Null,
    };
    let report = json!({
        "command": "scurv",
        "name": cfg.name,
        "family": family_name(space.norm().family()),
        "y": nums(&y),
        "F": num(c.f),
        "log_sqrt_det_g": num(c.log_sqrt_det),
        "I": nums(c.cartan.iter()),
        "w": nums(c.w.iter()),
        "V": nums(c.v.iter()),
        "S_frame": num(c.s_frame),
        "S_bracket": num(c.s_bracket),
        "oracle": oracle,
    });
    crate::report::print(&report);
    Ok(report)
}

pub fn scan(source: &str, samples: usize, seed: u64, out: Option<&Path>, exec: Execution) -> CliResult<Value> {
    let cfg = load(source)?;
    let space = cfg.space()?;
    // Open the output first so an unwritable path fails before the work.
    let writer = out.map(create).transpose()?;
    let r = sphere_scan(&space, samples, seed, ScanTolerances::default(), exec)?;
    if let (Some(mut w), Some(path)) = (writer, out) {
        r.write_csv(&mut w).and_then(|_| w.flush()).map_err(io_failure(path))?;
    }
    let report = json!({
        "command": "scan",
        "name": cfg.name,
        "samples": r.sample_count,
        "seed": seed,
        "verdict": r.verdict,
        "max_abs_S": num(r.max_abs_s),
        "max_F": num(r.max_f),
        "mean_S_over_F": num(r.mean_s_over_f),
        "variance_S_over_F": num(r.variance_s_over_f),
        "min_S_over_F": num(r.min_s_over_f),
        "max_S_over_F": num(r.max_s_over_f),
        "argmax_log_sqrt_det_g": nums(&r.argmax_distortion),
        "max_log_sqrt_det_g": num(r.max_log_sqrt_det),
        "argmax_gradient_norm": num(r.argmax_gradient_norm),
        "S_at_argmax": num(r.s_at_argmax),
        "csv": out.map(|p| p.display().to_string()),
    });
    crate::report::print(&report);
    if r.verdict == IsotropyVerdict::IsotropicHenceVanishingViolation {
        return Err(CliError::Failure(
            "S/F is constant and nonzero, which is impossible on a homogeneous space; check the input".into(),
        ));
    }
    Ok(report)
}

pub fn compare(source: &str, cases: usize, seed: u64) -> CliResult<Value> {
    let cfg = load(source)?;
    let space = cfg.space()?;
    let norm = space.norm();
    if norm.family() != NormFamily::Randers {
        return Err(CliError::Failure(format!(
            "no closed-form oracle for the {} family; compare needs a Randers norm",
            family_name(norm.family())
        )));
    }
    if cases == 0 {
        return Err(CliError::Usage("--cases must be positive".into()));
    }
    let directions = norm.alpha_sphere_directions(cases, seed)?;
    let mut worst = (0.0f64, Vec::new());
    for (i, z) in directions.iter().enumerate() {
        // Lengths from 1/8 to 8: the closed form is checked off the unit sphere too.
        let scale = 2f64.powi((i % 7) as i32 - 3);
        let v: Vec<f64> = z.iter().map(|x| x * scale).collect();
        let closed = randers_s_closed(norm, space.algebra(), &v)?;
        let c = space.curvature_at(&v)?;
        let d = relative(c.s_frame, closed).max(relative(c.s_bracket, closed));
        if d > worst.0 || worst.1.is_empty() {
            worst = (d, v);
        }
    }
    let pass = worst.0 <= ORACLE_TOL;
    let report = json!({
        "command": "compare",
        "name": cfg.name,
        "cases": cases,
        "seed": seed,
        "max_relative_discrepancy": num(worst.0),
        "worst_direction": nums(&worst.1),
        "tolerance": num(ORACLE_TOL),
        "pass": pass,
    });
    crate::report::print(&report);
    if pass {
        Ok(report)
    } else {
        Err(CliError::Failure(format!(
            "pipeline and closed form disagree: relative discrepancy {:.3e} exceeds {ORACLE_TOL:e}",
            worst.0
        )))
    }
}

pub fn sigma(source: &str, mc: usize, seed: u64, exec: Execution) -> CliResult<Value> {
    let cfg = load(source)?;
    let (_, norm) = cfg.build()?;
    let est = bh_sigma(&norm, mc, seed, exec)?;
    let reference = randers_sigma_reference(&norm);
    let report = json!({
        "command": "sigma",
        "name": cfg.name,
        "family": family_name(norm.family()),
        "mc_samples": est.samples,
        "seed": seed,
        "estimate": num(est.estimate),
        "std_error": num(est.std_error),
        "hits": est.hits,
        "radius": num(est.radius),
        "reference": opt(reference),
        "z_score": opt(reference.map(|r| (est.estimate - r) / est.std_error)),
    });
    crate::report::print(&report);
    Ok(report)
}

pub fn geodesic(source: &str, y0: &str, t: f64, dt: f64, out: Option<&Path>) -> CliResult<Value> {
    let cfg = load(source)?;
    let space: HomogeneousSpace = cfg.space()?;
    let y0 = parse_vector(y0, space.dim(), "--y0")?;
    let writer = out.map(create).transpose()?;
    let traj = geodesic_integrate(&space, &y0, t, dt)?;
    if let (Some(mut w), Some(path)) = (writer, out) {
        traj.write_csv(&mut w).and_then(|_| w.flush()).map_err(io_failure(path))?;
    }
    let report = json!({
        "command": "geodesic",
        "name": cfg.name,
        "y0": nums(&y0),
        "t": num(t),
        "dt": num(dt),
        "steps": traj.times.len() - 1,
        "F0": num(traj.f_values[0]),
        "F_end": num(*traj.f_values.last().expect("initial state recorded")),
        "y_end": nums(traj.states.last().expect("initial state recorded")),
        "max_drift": num(traj.max_drift),
        "csv": out.map(|p| p.display().to_string()),
    });
    crate::report::print(&report);
    Ok(report)
}
