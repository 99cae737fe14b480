//! Built-in spaces by name.
//!
//! Grammar:
//!
//! * `<algebra>[+<algebra>...]` optionally followed by a norm suffix
//!   `-riemannian`, `-randers-b<val>` or `-alphabeta-b<val>`
//! * `randers-b<val>-n<dim>`: the abelian algebra of dimension `dim` with a
//!   Randers norm
//!
//! Algebras: `abelian<n>` (1 ≤ n ≤ 10), `heisenberg3`, `so3`, `e2`,
//! `solvable2`. The norm suffix uses `A = identity` and `u = b e₁`. Without a
//! suffix, spaces with trivial isotropy get the Randers norm with `b = 0.5`
//! and the others (e.g. `e2`) the Riemannian identity. `b05` reads as `0.5`;
//! `b0.5` is accepted too. The (α,β) profile is `φ(s) = 1 + s + s²/2`.

use nalgebra::{DMatrix, DVector};

use crate::config::SpaceConfig;
use crate::error::{Error, Result};
use crate::liealg::{builtin, LieAlgebraData};
use crate::norms::{NormSpec, Profile};

pub const DEFAULT_B: f64 = 0.5;

pub const ALPHA_BETA_PROFILE: [f64; 3] = [1.0, 1.0, 0.5];

/// Stable names exercised by the test suite.
pub const BUILTIN_NAMES: &[&str] = &[
    "abelian2",
    "abelian3",
    "heisenberg3",
    "so3",
    "e2",
    "solvable2",
    "abelian3-riemannian",
    "heisenberg3-riemannian",
    "so3-riemannian",
    "e2-riemannian",
    "solvable2-riemannian",
    "heisenberg3-randers-b05",
    "so3-randers-b05",
    "solvable2-randers-b05",
    "so3-alphabeta-b03",
    "solvable2-alphabeta-b03",
    "randers-b03-n2",
    "randers-b05-n3",
    "so3+solvable2",
    "e2+solvable2-riemannian",
];

fn algebra(name: &str) -> Result<LieAlgebraData> {
    match name {
        "heisenberg3" => Ok(builtin::heisenberg3()),
        "so3" => Ok(builtin::so3()),
        "e2" => Ok(builtin::e2()),
        "solvable2" => Ok(builtin::solvable2()),
        _ => {
            if let Some(n) = name.strip_prefix("abelian").and_then(|d| d.parse::<usize>().ok()) {
                if (1..=10).contains(&n) {
                    return Ok(builtin::abelian(n));
                }
            }
            Err(Error::Config(format!("unknown built-in algebra {name:?}")))
        }
    }
}

fn parse_b(text: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot read a Randers parameter from {text:?}"));
    let digits = text.strip_prefix('b').ok_or_else(bad)?;
    let value = if digits.contains('.') {
        digits.parse::<f64>().map_err(|_| bad())?
    } else if digits.len() > 1 && digits.starts_with('0') {
        format!("0.{}", &digits[1..]).parse::<f64>().map_err(|_| bad())?
    } else {
        digits.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() || value < 0.0 {
        return Err(bad());
    }
    Ok(value)
}

fn e1(n: usize, b: f64) -> DVector<f64> {
    let mut u = DVector::zeros(n);
    u[0] = b;
    u
}

enum NormChoice {
    Default,
    Riemannian,
    Randers(f64),
    AlphaBeta(f64),
}

fn norm_for(data: &LieAlgebraData, choice: NormChoice) -> Result<NormSpec> {
    let n = data.dim_m();
    let id = DMatrix::identity(n, n);
    match choice {
        NormChoice::Default if data.dim_h() == 0 => NormSpec::randers(id, e1(n, DEFAULT_B)),
        NormChoice::Default | NormChoice::Riemannian => NormSpec::riemannian(id),
        NormChoice::Randers(b) => NormSpec::randers(id, e1(n, b)),
        NormChoice::AlphaBeta(b) => NormSpec::alpha_beta(id, e1(n, b), Profile::Polynomial(ALPHA_BETA_PROFILE.to_vec())),
    }
}

pub fn resolve(name: &str) -> Result<SpaceConfig> {
    // randers-b<val>-n<dim>
    if let Some(rest) = name.strip_prefix("randers-") {
        let (b, dim) = rest
            .split_once("-n")
            .ok_or_else(|| Error::Config(format!("expected randers-b<val>-n<dim>, got {name:?}")))?;
        let b = parse_b(b)?;
        let dim: usize = dim.parse().map_err(|_| Error::Config(format!("bad dimension in {name:?}")))?;
        let data = algebra(&format!("abelian{dim}"))?;
        let norm = norm_for(&data, NormChoice::Randers(b))?;
        return SpaceConfig::from_parts(name, &data, &norm);
    }

    let (alg_part, choice) = if let Some(base) = name.strip_suffix("-riemannian") {
        (base, NormChoice::Riemannian)
    } else if let Some((base, b)) = name.split_once("-randers-") {
        (base, NormChoice::Randers(parse_b(b)?))
    } else if let Some((base, b)) = name.split_once("-alphabeta-") {
        (base, NormChoice::AlphaBeta(parse_b(b)?))
    } else {
        (name, NormChoice::Default)
    };
    let parts = alg_part.split('+').map(algebra).collect::<Result<Vec<_>>>()?;
    let data = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        builtin::direct_sum(&parts)?
    };
    let norm = norm_for(&data, choice)?;
    SpaceConfig::from_parts(name, &data, &norm)
}
