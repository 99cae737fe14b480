//! Body-frame geodesic flow `ẏ = V(y)` on a Lie group with a left-invariant
//! Finsler metric, where `V` are the vertical spray coefficients. Along the
//! flow `F` is conserved because `V` is `g_y`-orthogonal to `y`; the drift of
//! `F` measures the integration error.

use std::io::Write;

use nalgebra::DVector;

use crate::curvature::HomogeneousSpace;
use crate::error::{Error, Result};

use super::scan::fmt12;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub max_drift: f64,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("y{i}")));
        header.push("F".into());
        writeln!(out, "{}", header.join(","))?;
        for ((t, y), f) in self.times.iter().zip(&self.states).zip(&self.f_values) {
            let mut fields = vec![fmt12(*t)];
            fields.extend(y.iter().map(|v| fmt12(*v)));
            fields.push(fmt12(*f));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Classical fixed-step RK4 from `y0` to `t_end`.
pub fn geodesic_integrate(space: &HomogeneousSpace, y0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory> {
    if space.algebra().dim_h() > 0 {
        return Err(Error::Unsupported(
            "geodesic reduction is only defined for Lie groups (dim h = 0)".into(),
        ));
    }
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Domain(format!("need dt > 0 and t_end ≥ 0, got dt = {dt}, t_end = {t_end}")));
    }
    let norm = space.norm();
    let f0 = norm.f_value(y0)?;
    let alpha0 = norm.alpha(y0);
    let steps = (t_end / dt).round() as usize;

    let field = |y: &DVector<f64>| -> Result<DVector<f64>> {
        if norm.alpha(y.as_slice()) < 1e-8 * alpha0 {
            return Err(Error::Domain("trajectory approached the zero vector".into()));
        }
        space.spray_vertical(y.as_slice())
    };

    let mut y = DVector::from_column_slice(y0);
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        f_values: Vec::with_capacity(steps + 1),
        max_drift: 0.0,
    };
    traj.times.push(0.0);
    traj.states.push(y0.to_vec());
    traj.f_values.push(f0);
    for step in 1..=steps {
        let k1 = field(&y)?;
        let k2 = field(&(&y + &k1 * (0.5 * dt)))?;
        let k3 = field(&(&y + &k2 * (0.5 * dt)))?;
        let k4 = field(&(&y + &k3 * dt))?;
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        let f = norm.f_value(y.as_slice())?;
        traj.max_drift = traj.max_drift.max((f - f0).abs());
        traj.times.push(step as f64 * dt);
        traj.states.push(y.iter().copied().collect());
        traj.f_values.push(f);
    }
    Ok(traj)
}
