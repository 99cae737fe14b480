//! Order-3 truncated Taylor arithmetic in `n` variables.
//!
//! A [`Jet3`] carries the value of a scalar function together with its
//! gradient, Hessian and third-derivative tensor at a fixed point. Arithmetic
//! on jets propagates all four parts exactly (Leibniz rule for products,
//! Faà di Bruno for univariate composition), so `F²` built from coordinate
//! seeds yields `[F²]_{y^i}`, `[F²]_{y^i y^j}` and `[F²]_{y^i y^j y^k}`
//! without truncation error.
//!
//! Storage is dense: the Hessian holds `n²` entries and the third tensor `n³`.
//! Symmetric parts are computed once per index multiset and mirrored, so the
//! stored tensors are exactly symmetric.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet3 {
    n: usize,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
    third: Vec<f64>,
}

/// Value and first three derivatives of a univariate function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor3 {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Taylor3 {
    pub fn new(d0: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { d0, d1, d2, d3 }
    }
}

impl Jet3 {
    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            n,
            value,
            grad: vec![0.0; n],
            hess: vec![0.0; n * n],
            third: vec![0.0; n * n * n],
        }
    }

    /// Jet of the coordinate function `y^index` at a point whose `index`-th
    /// coordinate is `value`.
    pub fn seed(index: usize, value: f64, n: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::Dimension(format!(
                "seed index {index} out of range for dimension {n}"
            )));
        }
        let mut jet = Self::constant(n, value);
        jet.grad[index] = 1.0;
        Ok(jet)
    }

    /// Seeds for every coordinate of `point`.
    pub fn seeds(point: &[f64]) -> Vec<Self> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut jet = Self::constant(n, v);
                jet.grad[i] = 1.0;
                jet
            })
            .collect()
    }

    /// Jet of the quadratic form `yᵀ A y`, with `A` given row-major and
    /// assumed symmetric.
    pub fn quadratic_form(a: &[f64], y: &[f64]) -> Result<Self> {
        let n = y.len();
        if a.len() != n * n {
            return Err(Error::Dimension(format!(
                "quadratic form of size {} applied to a vector of length {n}",
                a.len()
            )));
        }
        let mut jet = Self::constant(n, 0.0);
        for i in 0..n {
            let ay: f64 = (0..n).map(|j| a[i * n + j] * y[j]).sum();
            jet.value += y[i] * ay;
            jet.grad[i] = 2.0 * ay;
            for j in 0..n {
                jet.hess[i * n + j] = a[i * n + j] + a[j * n + i];
            }
        }
        Ok(jet)
    }

    /// Jet of the linear form `c · y`.
    pub fn linear_form(c: &[f64], y: &[f64]) -> Result<Self> {
        let n = y.len();
        if c.len() != n {
            return Err(Error::Dimension(format!(
                "linear form of length {} applied to a vector of length {n}",
                c.len()
            )));
        }
        let mut jet = Self::constant(n, 0.0);
        jet.value = c.iter().zip(y).map(|(a, b)| a * b).sum();
        jet.grad.copy_from_slice(c);
        Ok(jet)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    /// Row-major `n × n` Hessian.
    pub fn hess(&self) -> &[f64] {
        &self.hess
    }

    /// `n × n × n` third-derivative tensor, index `(i * n + j) * n + k`.
    pub fn third(&self) -> &[f64] {
        &self.third
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.n + j]
    }

    pub fn third_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.third[(i * self.n + j) * self.n + k]
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "jet dimension mismatch ({} vs {})",
            self.n, other.n
        );
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        self.check_dim(other);
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect();
        Self {
            n: self.n,
            value: op(self.value, other.value),
            grad: zip(&self.grad, &other.grad),
            hess: zip(&self.hess, &other.hess),
            third: zip(&self.third, &other.third),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        Self {
            n: self.n,
            value: self.value * factor,
            grad: s(&self.grad),
            hess: s(&self.hess),
            third: s(&self.third),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.value += c;
        out
    }

    /// Composition `outer ∘ self`, where `outer` supplies the value and first
    /// three derivatives of a univariate function at `self.value()`.
    pub fn compose1(&self, outer: Taylor3) -> Self {
        let n = self.n;
        let f = self;
        let mut out = Self::constant(n, outer.d0);
        for i in 0..n {
            out.grad[i] = outer.d1 * f.grad[i];
        }
        fill_symmetric2(n, &mut out.hess, |i, j| {
            outer.d2 * f.grad[i] * f.grad[j] + outer.d1 * f.hess_at(i, j)
        });
        fill_symmetric3(n, &mut out.third, |i, j, k| {
            outer.d3 * f.grad[i] * f.grad[j] * f.grad[k]
                + outer.d2
                    * (f.hess_at(i, j) * f.grad[k]
                        + f.hess_at(i, k) * f.grad[j]
                        + f.hess_at(j, k) * f.grad[i])
                + outer.d1 * f.third_at(i, j, k)
        });
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let x = self.value;
        if x == 0.0 || !x.is_finite() {
            return Err(Error::Singularity(format!("reciprocal of a jet with value {x}")));
        }
        let r = 1.0 / x;
        Ok(self.compose1(Taylor3::new(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_dim(other);
        Ok(self * &other.recip()?)
    }

    pub fn sqrt(&self) -> Result<Self> {
        let x = self.value;
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("sqrt of a jet with value {x}")));
        }
        let s = x.sqrt();
        Ok(self.compose1(Taylor3::new(
            s,
            0.5 / s,
            -0.25 / (s * x),
            0.375 / (s * x * x),
        )))
    }

    pub fn ln(&self) -> Result<Self> {
        let x = self.value;
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("logarithm of a jet with value {x}")));
        }
        let r = 1.0 / x;
        Ok(self.compose1(Taylor3::new(x.ln(), r, -r * r, 2.0 * r * r * r)))
    }

    /// Real power `x^p`; requires a positive value.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let x = self.value;
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("powf of a jet with value {x}")));
        }
        let v = x.powf(p);
        Ok(self.compose1(Taylor3::new(
            v,
            p * v / x,
            p * (p - 1.0) * v / (x * x),
            p * (p - 1.0) * (p - 2.0) * v / (x * x * x),
        )))
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn powi(&self, p: i32) -> Result<Self> {
        match p {
            0 => Ok(Self::constant(self.n, 1.0)),
            1 => Ok(self.clone()),
            2 => Ok(self * self),
            p if p < 0 => self.recip()?.powi(-p),
            p => {
                let x = self.value;
                let pf = f64::from(p);
                let pow = |e: i32| if e >= 0 { x.powi(e) } else { 0.0 };
                Ok(self.compose1(Taylor3::new(
                    x.powi(p),
                    pf * pow(p - 1),
                    pf * (pf - 1.0) * pow(p - 2),
                    pf * (pf - 1.0) * (pf - 2.0) * pow(p - 3),
                )))
            }
        }
    }

    /// Largest absolute asymmetry of the Hessian and third tensor.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((self.hess_at(i, j) - self.hess_at(j, i)).abs());
                for k in 0..n {
                    let t = self.third_at(i, j, k);
                    for p in [
                        self.third_at(i, k, j),
                        self.third_at(j, i, k),
                        self.third_at(j, k, i),
                        self.third_at(k, i, j),
                        self.third_at(k, j, i),
                    ] {
                        defect = defect.max((t - p).abs());
                    }
                }
            }
        }
        defect
    }
}

fn fill_symmetric2(n: usize, out: &mut [f64], entry: impl Fn(usize, usize) -> f64) {
    for i in 0..n {
        for j in i..n {
            let v = entry(i, j);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
}

fn fill_symmetric3(n: usize, out: &mut [f64], entry: impl Fn(usize, usize, usize) -> f64) {
    let at = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = entry(i, j, k);
                out[at(i, j, k)] = v;
                out[at(i, k, j)] = v;
                out[at(j, i, k)] = v;
                out[at(j, k, i)] = v;
                out[at(k, i, j)] = v;
                out[at(k, j, i)] = v;
            }
        }
    }
}

impl Add for &Jet3 {
    type Output = Jet3;
    fn add(self, rhs: &Jet3) -> Jet3 {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: &Jet3) -> Jet3 {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

impl Mul for &Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: &Jet3) -> Jet3 {
        self.check_dim(rhs);
        let (f, g) = (self, rhs);
        let n = f.n;
        let mut out = Jet3::constant(n, f.value * g.value);
        for i in 0..n {
            out.grad[i] = f.grad[i] * g.value + f.value * g.grad[i];
        }
        fill_symmetric2(n, &mut out.hess, |i, j| {
            f.hess_at(i, j) * g.value
                + f.grad[i] * g.grad[j]
                + f.grad[j] * g.grad[i]
                + f.value * g.hess_at(i, j)
        });
        fill_symmetric3(n, &mut out.third, |i, j, k| {
            f.third_at(i, j, k) * g.value
                + f.hess_at(i, j) * g.grad[k]
                + f.hess_at(i, k) * g.grad[j]
                + f.hess_at(j, k) * g.grad[i]
                + f.grad[i] * g.hess_at(j, k)
                + f.grad[j] * g.hess_at(i, k)
                + f.grad[k] * g.hess_at(i, j)
                + f.value * g.third_at(i, j, k)
        });
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet3 {
            type Output = Jet3;
            fn $m(self, rhs: Jet3) -> Jet3 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Maximum absolute discrepancy between jet derivatives and central
/// differences, per derivative order, with the largest derivative magnitude
/// seen at that order for scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdDiscrepancy {
    pub order1: f64,
    pub order2: f64,
    pub order3: f64,
    pub scale1: f64,
    pub scale2: f64,
    pub scale3: f64,
}

impl FdDiscrepancy {
    /// Discrepancies divided by `max(1, scale)` for each order.
    pub fn relative(&self) -> [f64; 3] {
        [
            self.order1 / self.scale1.max(1.0),
            self.order2 / self.scale2.max(1.0),
            self.order3 / self.scale3.max(1.0),
        ]
    }
}

/// Compare the jet of `f` at `y` against central differences with step `h`.
///
/// Order 1 differences plain function values. Order 2 differences the jet
/// gradient and order 3 the jet Hessian, so each order is checked against an
/// order already verified one level down and the floating-point noise stays
/// at `ε / h` instead of `ε / h³`.
pub fn fd_check<F>(f: F, y: &[f64], h: f64) -> Result<FdDiscrepancy>
where
    F: Fn(&[Jet3]) -> Result<Jet3>,
{
    if !(h > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let n = y.len();
    let eval = |p: &[f64]| f(&Jet3::seeds(p));
    let center = eval(y)?;
    let mut d = FdDiscrepancy {
        order1: 0.0,
        order2: 0.0,
        order3: 0.0,
        scale1: 0.0,
        scale2: 0.0,
        scale3: 0.0,
    };
    let mut shifted = y.to_vec();
    for k in 0..n {
        shifted[k] = y[k] + h;
        let plus = eval(&shifted)?;
        shifted[k] = y[k] - h;
        let minus = eval(&shifted)?;
        shifted[k] = y[k];

        let fd1 = (plus.value - minus.value) / (2.0 * h);
        d.order1 = d.order1.max((fd1 - center.grad[k]).abs());
        d.scale1 = d.scale1.max(center.grad[k].abs());
        for i in 0..n {
            let fd2 = (plus.grad[i] - minus.grad[i]) / (2.0 * h);
            d.order2 = d.order2.max((fd2 - center.hess_at(i, k)).abs());
            d.scale2 = d.scale2.max(center.hess_at(i, k).abs());
            for j in 0..n {
                let fd3 = (plus.hess_at(i, j) - minus.hess_at(i, j)) / (2.0 * h);
                d.order3 = d.order3.max((fd3 - center.third_at(i, j, k)).abs());
                d.scale3 = d.scale3.max(center.third_at(i, j, k).abs());
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_is_coordinate_function() {
        let j = Jet3::seed(0, 2.0, 1).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.grad(), &[1.0]);
        assert_eq!(j.hess(), &[0.0]);
        assert_eq!(j.third(), &[0.0]);

        let j = Jet3::seed(1, -0.5, 3).unwrap();
        assert_eq!(j.grad(), &[0.0, 1.0, 0.0]);
        assert_eq!(j.value(), -0.5);
    }

    #[test]
    fn seed_out_of_range() {
        assert!(matches!(Jet3::seed(3, 0.0, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn cube() {
        let x = Jet3::seed(0, 2.0, 1).unwrap();
        let c = &(&x * &x) * &x;
        assert_eq!(c.value(), 8.0);
        assert_eq!(c.grad(), &[12.0]);
        assert_eq!(c.hess(), &[12.0]);
        assert_eq!(c.third(), &[6.0]);
        assert_eq!(x.powi(3).unwrap(), c);
        let p = x.powf(3.0).unwrap();
        assert!((p.third()[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_of_constant() {
        let c = Jet3::constant(3, 4.0).sqrt().unwrap();
        assert_eq!(c.value(), 2.0);
        assert!(c.grad().iter().chain(c.hess()).chain(c.third()).all(|v| *v == 0.0));
    }

    #[test]
    fn product_rule() {
        let a = Jet3::seed(0, 2.0, 2).unwrap();
        let b = Jet3::seed(1, 3.0, 2).unwrap();
        let p = &a * &b;
        assert_eq!(p.value(), 6.0);
        assert_eq!(p.grad(), &[3.0, 2.0]);
        assert_eq!(p.hess_at(0, 1), 1.0);
        assert_eq!(p.hess_at(1, 0), 1.0);
        assert_eq!(p.hess_at(0, 0), 0.0);
        assert!(p.third().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn domain_errors() {
        let z = Jet3::constant(2, 0.0);
        let one = Jet3::constant(2, 1.0);
        assert!(matches!(one.div(&z), Err(Error::Singularity(_))));
        assert!(matches!(Jet3::constant(2, -1.0).sqrt(), Err(Error::Domain(_))));
        assert!(matches!(z.sqrt(), Err(Error::Domain(_))));
        assert!(matches!(z.powf(0.5), Err(Error::Domain(_))));
        assert!(matches!(z.powi(-2), Err(Error::Singularity(_))));
    }

    #[test]
    fn quotient_matches_closed_form() {
        // f = x / y at (1, 2): f_x = 1/2, f_y = -1/4, f_yy = 2x/y³ = 1/4,
        // f_xy = -1/y² = -1/4, f_yyy = -6x/y⁴ = -3/8, f_xyy = 2/y³ = 1/4
        let s = Jet3::seeds(&[1.0, 2.0]);
        let q = s[0].div(&s[1]).unwrap();
        assert!((q.value() - 0.5).abs() < 1e-15);
        assert!((q.grad()[0] - 0.5).abs() < 1e-15);
        assert!((q.grad()[1] + 0.25).abs() < 1e-15);
        assert!((q.hess_at(1, 1) - 0.25).abs() < 1e-15);
        assert!((q.hess_at(0, 1) + 0.25).abs() < 1e-15);
        assert!((q.third_at(1, 1, 1) + 0.375).abs() < 1e-15);
        assert!((q.third_at(0, 1, 1) - 0.25).abs() < 1e-15);
        assert_eq!(q.third_at(0, 0, 0), 0.0);
    }

    #[test]
    fn quadratic_and_linear_forms_match_arithmetic() {
        let a = [2.0, 0.5, 0.5, 1.0];
        let y = [0.3, -1.2];
        let s = Jet3::seeds(&y);
        let by_hand = &(&(&s[0] * &s[0]).scale(2.0) + &(&s[0] * &s[1]).scale(1.0))
            + &(&s[1] * &s[1]);
        let q = Jet3::quadratic_form(&a, &y).unwrap();
        assert!((q.value() - by_hand.value()).abs() < 1e-15);
        for (x, y) in q.grad().iter().zip(by_hand.grad()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(q.hess(), by_hand.hess());

        let l = Jet3::linear_form(&[3.0, -1.0], &y).unwrap();
        assert!((l.value() - 2.1).abs() < 1e-15);
        assert_eq!(l.grad(), &[3.0, -1.0]);
    }

    #[test]
    fn composite_is_exactly_symmetric() {
        let s = Jet3::seeds(&[0.3, -0.7, 1.1]);
        let r = (&(&s[0] * &s[1]) + &(&s[2] * &s[2])).add_scalar(2.0);
        let e = r.sqrt().unwrap().div(&s[2]).unwrap().ln().unwrap();
        assert_eq!(e.symmetry_defect(), 0.0);
    }

    #[test]
    fn fd_check_euclidean_and_constant() {
        let sq = |s: &[Jet3]| -> Result<Jet3> {
            Ok(s.iter().fold(Jet3::constant(s.len(), 0.0), |acc, x| &acc + &(x * x)))
        };
        let d = fd_check(sq, &[0.4, -1.3, 2.0], 1e-5).unwrap();
        assert!(d.order1 <= 1e-6 && d.order2 <= 1e-6 && d.order3 <= 1e-6, "{d:?}");

        let c = |s: &[Jet3]| -> Result<Jet3> { Ok(Jet3::constant(s.len(), 7.0)) };
        let d = fd_check(c, &[1.0, 2.0], 1e-5).unwrap();
        assert_eq!((d.order1, d.order2, d.order3), (0.0, 0.0, 0.0));

        assert!(fd_check(c, &[1.0], 0.0).is_err());
    }
}
