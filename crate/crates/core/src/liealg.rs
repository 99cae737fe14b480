//! Structure constants of `g = h ⊕ m` and the Killing-frame constants on `m`.
//!
//! The basis of `g` lists the `dim_h` vectors spanning `h` first and the
//! `dim_m` vectors spanning `m` last. Structure constants are stored densely
//! as `C^k_{ij}` with `[e_i, e_j] = Σ_k C^k_{ij} e_k`.
//!
//! The Killing-frame constants follow `[v̂_i, v̂_j]_m = −c^k_{ij} v̂_k`, i.e.
//! `c` is the negated `m`-block of `C`. Every downstream formula uses this
//! sign.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::norms::NormSpec;

pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    dim_h: usize,
    dim_m: usize,
    c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Antisymmetry,
    Jacobi,
    Subalgebra,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub max_residual: f64,
}

impl LieAlgebraData {
    /// Dense constructor; `c[(k * d + i) * d + j] = C^k_{ij}` with `d = dim_h + dim_m`.
    pub fn from_dense(dim_h: usize, dim_m: usize, c: Vec<f64>) -> Result<Self> {
        if dim_m == 0 {
            return Err(Error::InvalidAlgebra("m must have positive dimension".into()));
        }
        let d = dim_h + dim_m;
        if c.len() != d * d * d {
            return Err(Error::Dimension(format!(
                "expected {} structure constants for dim g = {d}, got {}",
                d * d * d,
                c.len()
            )));
        }
        Ok(Self { dim_h, dim_m, c })
    }

    pub fn zero(dim_h: usize, dim_m: usize) -> Result<Self> {
        let d = dim_h + dim_m;
        Self::from_dense(dim_h, dim_m, vec![0.0; d * d * d])
    }

    /// Build from sparse `(i, j, k, value)` entries with 1-based indices,
    /// meaning `C^k_{ij} = value`. The antisymmetric partner is filled in;
    /// supplying both `(i, j)` and `(j, i)` with inconsistent values is an
    /// error, as is a nonzero entry with `i = j`.
    pub fn from_sparse(dim_h: usize, dim_m: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut data = Self::zero(dim_h, dim_m)?;
        let d = data.dim_g();
        let mut set = vec![false; d * d * d];
        for (pos, &(i, j, k, v)) in entries.iter().enumerate() {
            for (name, idx) in [("i", i), ("j", j), ("k", k)] {
                if idx == 0 || idx > d {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket entry {pos}: index {name} = {idx} outside 1..={d}"
                    )));
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidAlgebra(format!("bracket entry {pos}: non-finite value")));
            }
            let (i, j, k) = (i - 1, j - 1, k - 1);
            if i == j {
                if v != 0.0 {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket entry {pos}: [e{0}, e{0}] must vanish",
                        i + 1
                    )));
                }
                continue;
            }
            let (fwd, rev) = (data.idx(k, i, j), data.idx(k, j, i));
            for (slot, val) in [(fwd, v), (rev, -v)] {
                if set[slot] && data.c[slot] != val {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket entry {pos}: C^{}_{{{}{}}} specified inconsistently",
                        k + 1,
                        i + 1,
                        j + 1
                    )));
                }
                data.c[slot] = val;
                set[slot] = true;
            }
        }
        Ok(data)
    }

    /// Nonzero `(i, j, k, value)` entries with `i < j`, 1-based.
    pub fn to_sparse(&self) -> Vec<(usize, usize, usize, f64)> {
        let d = self.dim_g();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    let v = self.constant(k, i, j);
                    if v != 0.0 {
                        out.push((i + 1, j + 1, k + 1, v));
                    }
                }
            }
        }
        out
    }

    #[inline]
    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        let d = self.dim_g();
        (k * d + i) * d + j
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn dim_g(&self) -> usize {
        self.dim_h + self.dim_m
    }

    /// `C^k_{ij}`, 0-based.
    pub fn constant(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[self.idx(k, i, j)]
    }

    pub fn dense(&self) -> &[f64] {
        &self.c
    }

    /// `[X, Y]^k = Σ C^k_{ij} X^i Y^j`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim_g();
        if x.len() != d || y.len() != d {
            return Err(Error::Dimension(format!(
                "bracket of vectors of length {} and {} in an algebra of dimension {d}",
                x.len(),
                y.len()
            )));
        }
        Ok((0..d)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .filter(|(_, xi)| **xi != 0.0)
                    .map(|(i, xi)| {
                        let row = self.idx(k, i, 0);
                        xi * self.c[row..row + d].iter().zip(y).map(|(c, b)| c * b).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .collect())
    }

    pub fn embed_m(&self, y: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim_h];
        v.extend_from_slice(y);
        v
    }

    /// `[y1, y2]_m`: embed into `g`, bracket, keep the `m` components.
    pub fn bracket_m(&self, y1: &[f64], y2: &[f64]) -> Result<Vec<f64>> {
        if y1.len() != self.dim_m || y2.len() != self.dim_m {
            return Err(Error::Dimension(format!(
                "m-bracket of vectors of length {} and {} with dim m = {}",
                y1.len(),
                y2.len(),
                self.dim_m
            )));
        }
        let full = self.bracket(&self.embed_m(y1), &self.embed_m(y2))?;
        Ok(full[self.dim_h..].to_vec())
    }

    /// `ad(h_a)` restricted and projected to `m`, as a `dim_m × dim_m` matrix.
    pub fn isotropy_action(&self, a: usize) -> DMatrix<f64> {
        let (h, m) = (self.dim_h, self.dim_m);
        DMatrix::from_fn(m, m, |k, j| self.constant(h + k, a, h + j))
    }

    fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }
}

/// `c^k_{ij}` on `m`, defined by `[v̂_i, v̂_j]_m = −c^k_{ij} v̂_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KillingConstants {
    n: usize,
    c: Vec<f64>,
}

impl KillingConstants {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c^k_{ij}`, 0-based.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.c[(k * self.n + i) * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| *v == 0.0)
    }
}

pub fn killing_constants(data: &LieAlgebraData) -> KillingConstants {
    let (h, n) = (data.dim_h, data.dim_m);
    let mut c = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                c[(k * n + i) * n + j] = -data.constant(h + k, h + i, h + j);
            }
        }
    }
    KillingConstants { n, c }
}

/// Antisymmetry, Jacobi and subalgebra residuals exceeding the tolerance.
pub fn validate(data: &LieAlgebraData) -> Vec<Violation> {
    let d = data.dim_g();
    let scale = data.max_abs().max(1.0);
    let mut out = Vec::new();

    let mut anti: f64 = 0.0;
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                anti = anti.max((data.constant(k, i, j) + data.constant(k, j, i)).abs());
            }
        }
    }
    if anti > STRUCTURE_TOL * scale {
        out.push(Violation { kind: ViolationKind::Antisymmetry, max_residual: anti });
    }

    let mut jacobi: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += data.constant(m, i, j) * data.constant(l, m, k)
                            + data.constant(m, j, k) * data.constant(l, m, i)
                            + data.constant(m, k, i) * data.constant(l, m, j);
                    }
                    jacobi = jacobi.max(s.abs());
                }
            }
        }
    }
    if jacobi > STRUCTURE_TOL * scale * scale {
        out.push(Violation { kind: ViolationKind::Jacobi, max_residual: jacobi });
    }

    let h = data.dim_h;
    let mut sub: f64 = 0.0;
    for i in 0..h {
        for j in 0..h {
            for k in h..d {
                sub = sub.max(data.constant(k, i, j).abs());
            }
        }
    }
    if sub > STRUCTURE_TOL * scale {
        out.push(Violation { kind: ViolationKind::Subalgebra, max_residual: sub });
    }
    out
}

/// Largest `|F_y([h_a, y]_m)|` over the `h` basis and `samples` directions on
/// the α-unit sphere. Zero certifies infinitesimal `Ad(H)`-invariance of `F`.
pub fn check_isotropy_invariance(data: &LieAlgebraData, spec: &NormSpec, samples: usize) -> Result<f64> {
    if spec.dim() != data.dim_m() {
        return Err(Error::Dimension(format!(
            "norm on dimension {} but dim m = {}",
            spec.dim(),
            data.dim_m()
        )));
    }
    if data.dim_h() == 0 {
        return Ok(0.0);
    }
    let actions: Vec<DMatrix<f64>> = (0..data.dim_h()).map(|a| data.isotropy_action(a)).collect();
    let mut residual: f64 = 0.0;
    for y in spec.alpha_sphere_directions(samples.max(1), 0)? {
        let jet = spec.f_squared_jet(&y)?;
        let f = jet.value().sqrt();
        let yv = nalgebra::DVector::from_column_slice(&y);
        for act in &actions {
            let z = act * &yv;
            let df: f64 = jet.grad().iter().zip(z.iter()).map(|(g, z)| g * z).sum::<f64>() / (2.0 * f);
            residual = residual.max(df.abs());
        }
    }
    Ok(residual)
}

/// Built-in algebras. Index conventions in comments are 1-based.
pub mod builtin {
    use super::*;

    pub fn abelian(n: usize) -> LieAlgebraData {
        LieAlgebraData::zero(0, n).expect("n > 0")
    }

    /// `[e1, e2] = e3`.
    pub fn heisenberg3() -> LieAlgebraData {
        LieAlgebraData::from_sparse(0, 3, &[(1, 2, 3, 1.0)]).expect("valid")
    }

    /// `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`.
    pub fn so3() -> LieAlgebraData {
        LieAlgebraData::from_sparse(0, 3, &[(1, 2, 3, 1.0), (2, 3, 1, 1.0), (3, 1, 2, 1.0)]).expect("valid")
    }

    /// Euclidean motions of the plane: `h` is spanned by the rotation `e1`,
    /// `m` by the translations `e2, e3`; `[e1, e2] = e3`, `[e1, e3] = −e2`.
    pub fn e2() -> LieAlgebraData {
        LieAlgebraData::from_sparse(1, 2, &[(1, 2, 3, 1.0), (1, 3, 2, -1.0)]).expect("valid")
    }

    /// `[e1, e2] = e2`.
    pub fn solvable2() -> LieAlgebraData {
        LieAlgebraData::from_sparse(0, 2, &[(1, 2, 2, 1.0)]).expect("valid")
    }

    /// Direct sum; the result lists all `h` parts first, then all `m` parts,
    /// each in summand order.
    pub fn direct_sum(parts: &[LieAlgebraData]) -> Result<LieAlgebraData> {
        if parts.is_empty() {
            return Err(Error::InvalidAlgebra("direct sum of no algebras".into()));
        }
        let dim_h: usize = parts.iter().map(|p| p.dim_h()).sum();
        let dim_m: usize = parts.iter().map(|p| p.dim_m()).sum();
        let d = dim_h + dim_m;
        // New position of each summand's basis vectors.
        let mut maps = Vec::with_capacity(parts.len());
        let (mut h_off, mut m_off) = (0, dim_h);
        for p in parts {
            let map: Vec<usize> = (0..p.dim_g())
                .map(|i| if i < p.dim_h() { h_off + i } else { m_off + i - p.dim_h() })
                .collect();
            h_off += p.dim_h();
            m_off += p.dim_m();
            maps.push(map);
        }
        let mut c = vec![0.0; d * d * d];
        for (p, map) in parts.iter().zip(&maps) {
            let pd = p.dim_g();
            for k in 0..pd {
                for i in 0..pd {
                    for j in 0..pd {
                        c[(map[k] * d + map[i]) * d + map[j]] = p.constant(k, i, j);
                    }
                }
            }
        }
        LieAlgebraData::from_dense(dim_h, dim_m, c)
    }
}

/// A random 3-dimensional Lie algebra (`dim_h = 0`) satisfying the Jacobi
/// identity: either a unimodular algebra `[e2,e3] = n1 e1, [e3,e1] = n2 e2,
/// [e1,e2] = n3 e3` or a semidirect product `R ⋉_M R²`, expressed in a random
/// well-conditioned basis.
pub fn random_three_dimensional<R: Rng + ?Sized>(rng: &mut R) -> LieAlgebraData {
    let mut base = vec![0.0; 27];
    let at = |k: usize, i: usize, j: usize| (k * 3 + i) * 3 + j;
    let put = |base: &mut Vec<f64>, i: usize, j: usize, k: usize, v: f64| {
        base[at(k, i, j)] = v;
        base[at(k, j, i)] = -v;
    };
    if rng.random_bool(0.5) {
        let n: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        put(&mut base, 1, 2, 0, n[0]);
        put(&mut base, 2, 0, 1, n[1]);
        put(&mut base, 0, 1, 2, n[2]);
    } else {
        let m: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        // [e1, e2] = m11 e2 + m21 e3, [e1, e3] = m12 e2 + m22 e3
        put(&mut base, 0, 1, 1, m[0]);
        put(&mut base, 0, 1, 2, m[2]);
        put(&mut base, 0, 2, 1, m[1]);
        put(&mut base, 0, 2, 2, m[3]);
    }
    let p = DMatrix::from_fn(3, 3, |i, j| {
        let noise: f64 = rng.random_range(-0.3..0.3);
        if i == j { 1.0 + noise } else { noise }
    });
    let p_inv = p.clone().try_inverse().expect("diagonally dominant");
    // New basis f_i = Σ_a P^a_i e_a, so C'^k_{ij} = (P⁻¹)^k_c C^c_{ab} P^a_i P^b_j.
    let mut c = vec![0.0; 27];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for cc in 0..3 {
                    for a in 0..3 {
                        for b in 0..3 {
                            s += p_inv[(k, cc)] * base[at(cc, a, b)] * p[(a, i)] * p[(b, j)];
                        }
                    }
                }
                c[at(k, i, j)] = s;
            }
        }
    }
    // Exact antisymmetry after rounding.
    for k in 0..3 {
        for i in 0..3 {
            c[at(k, i, i)] = 0.0;
            for j in i + 1..3 {
                let v = 0.5 * (c[at(k, i, j)] - c[at(k, j, i)]);
                c[at(k, i, j)] = v;
                c[at(k, j, i)] = -v;
            }
        }
    }
    LieAlgebraData::from_dense(0, 3, c).expect("3-dimensional")
}
