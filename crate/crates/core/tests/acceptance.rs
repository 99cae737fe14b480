//! Acceptance gate: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use finsler_core::analysis::{bh_sigma, geodesic_integrate, sphere_scan, ScanTolerances};
use finsler_core::curvature::{fundamental_tensor, mean_cartan_torsion};
use finsler_core::jets::fd_check;
use finsler_core::liealg::{builtin, random_three_dimensional};
use finsler_core::oracle::{
    randers_cartan_closed, randers_g_closed, randers_ginv_closed, randers_s_closed, RandersAdapted,
};
use finsler_core::registry::{resolve, BUILTIN_NAMES};
use finsler_core::{Execution, HomogeneousSpace, NormFamily, NormSpec};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_entry_rel(m: &DMatrix<f64>, reference: &DMatrix<f64>) -> f64 {
    m.iter()
        .zip(reference.iter())
        .map(|(x, r)| rel(*x, *r, *r))
        .fold(0.0, f64::max)
}

fn adapted_sweep(seed: u64) -> Vec<RandersAdapted> {
    let mut r = rng(seed);
    (0..100)
        .map(|_| {
            let b = r.random_range(0.0..0.95);
            let a = r.random_range(-1.0..=1.0);
            let n = r.random_range(2..=6);
            RandersAdapted::from_cosine(b, a, n).expect("valid adapted parameters")
        })
        .collect()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for p in adapted_sweep(1) {
        let ft = fundamental_tensor(&p.norm(), &p.direction()).expect("tensor");
        worst = worst.max(max_entry_rel(&ft.g, &randers_g_closed(&p).to_matrix(p.n)));
        worst = worst.max(max_entry_rel(&ft.g_inv, &randers_ginv_closed(&p).to_matrix(p.n)));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 10.0,
        format!("100 cases, max relative error {worst:.2e}, {secs:.2} s"),
    )
}

fn ac2() -> Outcome {
    let (mut worst12, mut worst_rest) = (0.0f64, 0.0f64);
    for p in adapted_sweep(2) {
        let i = mean_cartan_torsion(&p.norm(), &p.direction()).expect("torsion");
        let (i1, i2) = randers_cartan_closed(&p);
        worst12 = worst12.max(rel(i[0], i1, i1)).max(rel(i[1], i2, i2));
        worst_rest = i.iter().skip(2).fold(worst_rest, |m, x| m.max(x.abs()));
    }
    outcome(
        worst12 <= 1e-9 && worst_rest <= 1e-12,
        format!("I_1, I_2 max relative error {worst12:.2e}, other components ≤ {worst_rest:.2e}"),
    )
}

fn ac3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut count = 0;
    for round in 0..70 {
        let pool = algebra_pool(&mut r);
        for (_, data) in pool {
            let family = FAMILIES[round % 3];
            let norm = compatible_norm(&mut r, &data, family);
            let y = unit_direction(&mut r, &norm);
            let space = HomogeneousSpace::new(data, norm).expect("space");
            let c = space.curvature_at(&y).expect("curvature");
            worst = worst.max(rel(c.s_frame, c.s_bracket, c.s_frame));
            count += 1;
        }
    }
    // Extra random Jacobi-valid algebras with every family.
    for i in 0..600 {
        let data = random_three_dimensional(&mut r);
        let norm = random_norm(&mut r, 3, FAMILIES[i % 3]);
        let y = unit_direction(&mut r, &norm);
        let space = HomogeneousSpace::new(data, norm).expect("space");
        let c = space.curvature_at(&y).expect("curvature");
        worst = worst.max(rel(c.s_frame, c.s_bracket, c.s_frame));
        count += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        count >= 1000 && worst <= 1e-10 && secs < 30.0,
        format!("{count} triples, max |S_frame − S_bracket| / max(1, |S|) = {worst:.2e}, {secs:.2} s"),
    )
}

fn ac4() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    let mut check = |data: &finsler_core::LieAlgebraData, norm: NormSpec, v: &[f64]| {
        let closed = randers_s_closed(&norm, data, v).expect("closed form");
        let space = HomogeneousSpace::new(data.clone(), norm).expect("space");
        let c = space.curvature_at(v).expect("curvature");
        worst = worst.max(rel(c.s_frame, closed, closed)).max(rel(c.s_bracket, closed, closed));
    };
    for data in [builtin::heisenberg3(), builtin::so3(), builtin::solvable2()] {
        for _ in 0..50 {
            let norm = random_norm(&mut r, data.dim_m(), NormFamily::Randers);
            let v = random_direction(&mut r, &norm, 0.2, 5.0);
            check(&data, norm, &v);
        }
    }
    // e2: the isotropy rotates m, so the only invariant u is zero.
    let e2 = builtin::e2();
    for _ in 0..50 {
        let a = DMatrix::identity(2, 2) * r.random_range(0.5..2.0);
        let norm = NormSpec::randers(a, DVector::zeros(2)).expect("norm");
        let v = random_direction(&mut r, &norm, 0.2, 5.0);
        check(&e2, norm, &v);
    }

    // solvable2, u = 0.5 e₁, v = (0.6, 0.8): z = [v, u]_m = (0, −0.4), F = 1.3,
    // S = (3 / 2.6) (1·⟨z, u⟩ + ⟨z, v⟩) = −0.96 / 2.6 = −24/65.
    let expected = -24.0 / 65.0;
    let norm = NormSpec::randers(DMatrix::identity(2, 2), DVector::from_vec(vec![0.5, 0.0])).expect("norm");
    let space = HomogeneousSpace::new(builtin::solvable2(), norm).expect("space");
    let s = space.s_curvature(&[0.6, 0.8]).expect("S");
    let point_ok = (s - expected).abs() <= 1e-8 && format!("{s:.6}") == "-0.369231";
    outcome(
        worst <= 1e-8 && point_ok,
        format!("200 cases, max relative error {worst:.2e}; concrete point S = {s:.10}"),
    )
}

fn ac5() -> Outcome {
    let mut r = rng(5);
    let mut worst_trivial = 0.0f64;
    for i in 0..300 {
        let pool = algebra_pool(&mut r);
        let (_, data) = pool[i % pool.len()].clone();
        let norm = compatible_norm(&mut r, &data, NormFamily::Riemannian);
        let y = random_direction(&mut r, &norm, 0.1, 10.0);
        let s = HomogeneousSpace::new(data, norm).unwrap().s_curvature(&y).unwrap();
        worst_trivial = worst_trivial.max(s.abs());
    }
    for i in 0..300 {
        let n = 2 + i % 5;
        let norm = random_norm(&mut r, n, FAMILIES[i % 3]);
        let y = random_direction(&mut r, &norm, 0.1, 10.0);
        let s = HomogeneousSpace::new(builtin::abelian(n), norm).unwrap().s_curvature(&y).unwrap();
        worst_trivial = worst_trivial.max(s.abs());
    }

    let mut worst_so3 = 0.0f64;
    for seed in 0..3 {
        let u = random_u(&mut r, &DMatrix::identity(3, 3), 0.95);
        let norm = NormSpec::randers(DMatrix::identity(3, 3), u).unwrap();
        let space = HomogeneousSpace::new(builtin::so3(), norm).unwrap();
        let report = sphere_scan(&space, 10_000, seed, ScanTolerances::default(), Execution::default()).unwrap();
        worst_so3 = worst_so3.max(report.max_abs_s);
    }
    outcome(
        worst_trivial <= 1e-12 && worst_so3 <= 1e-10,
        format!("Riemannian/abelian max |S| = {worst_trivial:.2e}; so3 Randers 3×10⁴ scan max |S| = {worst_so3:.2e}"),
    )
}

fn ac6() -> Outcome {
    let mut spaces: Vec<(String, HomogeneousSpace)> = BUILTIN_NAMES
        .iter()
        .map(|name| (name.to_string(), resolve(name).unwrap().space().unwrap()))
        .collect();
    let mut r = rng(6);
    for i in 0..12 {
        let pool = algebra_pool(&mut r);
        let (name, data) = pool[i % pool.len()].clone();
        let norm = compatible_norm(&mut r, &data, FAMILIES[i % 3]);
        spaces.push((format!("random {name}"), HomogeneousSpace::new(data, norm).unwrap()));
    }
    let mut worst_s = 0.0f64;
    let mut failures = Vec::new();
    for (i, (name, space)) in spaces.iter().enumerate() {
        let report = sphere_scan(space, 1000, i as u64, ScanTolerances::default(), Execution::default()).unwrap();
        worst_s = worst_s.max(report.s_at_argmax.abs());
        let constant_nonzero = report.variance_s_over_f < 1e-10 && report.mean_s_over_f.abs() >= 1e-8;
        if report.s_at_argmax.abs() > 1e-8 || constant_nonzero {
            failures.push(name.clone());
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} scans, max |S(argmax)| = {worst_s:.2e}, failures: {failures:?}",
            spaces.len()
        ),
    )
}

fn ac7() -> Outcome {
    let mut r = rng(7);
    // euler, g·y·y, g·y, I·y, V⊥y, homogeneity, g·g⁻¹
    let mut worst = [0.0f64; 7];
    for i in 0..1000 {
        let pool = algebra_pool(&mut r);
        let (_, data) = pool[i % pool.len()].clone();
        let norm = compatible_norm(&mut r, &data, FAMILIES[(i / pool.len()) % 3]);
        let y = random_direction(&mut r, &norm, 0.1, 10.0);
        let n = y.len();
        let jet = norm.f_squared_jet(&y).unwrap();

        let gy: f64 = (0..n).map(|k| jet.grad()[k] * y[k]).sum();
        let gy_scale: f64 = (0..n).map(|k| (jet.grad()[k] * y[k]).abs()).sum();
        let mut e = rel(gy, 2.0 * jet.value(), gy_scale);
        for a in 0..n {
            let hy: f64 = (0..n).map(|k| jet.hess_at(a, k) * y[k]).sum();
            let h_scale: f64 = (0..n).map(|k| (jet.hess_at(a, k) * y[k]).abs()).sum();
            e = e.max(rel(hy, jet.grad()[a], h_scale));
            for b in 0..n {
                let ty: f64 = (0..n).map(|k| jet.third_at(a, b, k) * y[k]).sum();
                let t_scale: f64 = (0..n).map(|k| (jet.third_at(a, b, k) * y[k]).abs()).sum();
                e = e.max(rel(ty, 0.0, t_scale));
            }
        }
        worst[0] = worst[0].max(e);

        let space = HomogeneousSpace::new(data, norm).unwrap();
        let c = space.curvature_at(&y).unwrap();
        let yv = DVector::from_column_slice(&y);
        let g_y = &c.g * &yv;
        worst[1] = worst[1].max(rel(g_y.dot(&yv), c.f * c.f, c.f * c.f));
        worst[2] = worst[2].max(
            (0..n).map(|k| rel(g_y[k], 0.5 * c.f2_grad[k], c.f2_grad[k])).fold(0.0, f64::max),
        );
        let iy_scale: f64 = (0..n).map(|k| (c.cartan[k] * y[k]).abs()).sum();
        worst[3] = worst[3].max(rel(c.cartan.dot(&yv), 0.0, iy_scale));
        worst[4] = worst[4].max(rel(c.v.dot(&g_y), 0.0, c.v.norm() * g_y.norm()));
        let lambda = [0.5, 2.0, 10.0][i % 3];
        let scaled: Vec<f64> = y.iter().map(|x| lambda * x).collect();
        let s_scaled = space.s_curvature(&scaled).unwrap();
        worst[5] = worst[5].max(rel(s_scaled, lambda * c.s_frame, lambda * c.s_frame));
        let id = &c.g * &c.g_inv;
        worst[6] = worst[6].max((id - DMatrix::identity(n, n)).abs().max());
    }
    let limits = [1e-12, 1e-12, 1e-12, 1e-12, 1e-11, 1e-12, 1e-11];
    let pass = worst.iter().zip(limits).all(|(w, l)| *w <= l);
    outcome(
        pass,
        format!(
            "1000 inputs; Euler {:.1e}, g(y,y)=F² {:.1e}, g·y {:.1e}, I·y {:.1e}, V⊥_g y {:.1e}, S(λy) {:.1e}, g·g⁻¹ {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], worst[6]
        ),
    )
}

fn ac8() -> Outcome {
    let mut r = rng(8);
    let mut worst = [0.0f64; 3];
    for family in FAMILIES {
        for _ in 0..100 {
            let n = r.random_range(2..=5);
            let norm = random_norm(&mut r, n, family);
            let y = random_direction(&mut r, &norm, 0.5, 2.0);
            let d = fd_check(
                |p| {
                    let point: Vec<f64> = p.iter().map(|j| j.value()).collect();
                    norm.f_squared_jet(&point)
                },
                &y,
                1e-5,
            )
            .unwrap();
            for (w, x) in worst.iter_mut().zip(d.relative()) {
                *w = w.max(x);
            }
        }
    }
    outcome(
        worst[0] <= 1e-6 && worst[1] <= 1e-6 && worst[2] <= 1e-4,
        format!(
            "300 points over 3 families; relative discrepancy {:.1e} / {:.1e} / {:.1e} (orders 1/2/3)",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn ac9() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2usize, 3] {
        for b in [0.3, 0.5, 0.7] {
            let mut u = DVector::zeros(n);
            u[0] = b;
            let norm = NormSpec::randers(DMatrix::identity(n, n), u).unwrap();
            let start = Instant::now();
            let est = bh_sigma(&norm, 1_000_000, 9, Execution::default()).unwrap();
            let secs = start.elapsed().as_secs_f64();
            let reference = (1.0 - b * b).powf((n as f64 + 1.0) / 2.0);
            let z = (est.estimate - reference) / est.std_error;
            pass &= z.abs() <= 3.0 && secs < 20.0;
            parts.push(format!("n={n} b={b}: {z:+.2} se {secs:.1} s"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn ac10() -> Outcome {
    let so3 = HomogeneousSpace::new(
        builtin::so3(),
        NormSpec::riemannian(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]))).unwrap(),
    )
    .unwrap();
    let solvable = HomogeneousSpace::new(
        builtin::solvable2(),
        NormSpec::randers(DMatrix::identity(2, 2), DVector::from_vec(vec![0.5, 0.0])).unwrap(),
    )
    .unwrap();
    // Initial speeds of order 5: at unit speed the dt = 1e-3 truncation error
    // is already below rounding and the halving ratio measures noise.
    let cases = [("so3", so3, vec![5.0, 5.0, 5.0]), ("solvable2", solvable, vec![3.0, 4.0])];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, space, y0) in cases {
        let coarse = geodesic_integrate(&space, &y0, 10.0, 1e-3).unwrap().max_drift;
        let fine = geodesic_integrate(&space, &y0, 10.0, 5e-4).unwrap().max_drift;
        let ratio = coarse / fine;
        pass &= coarse <= 1e-8 && (8.0..=32.0).contains(&ratio);
        parts.push(format!("{name}: drift {coarse:.2e}, halving ratio {ratio:.1}"));
    }
    outcome(pass, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1  fundamental tensor matches the Randers closed form", ac1),
        ("AC2  mean Cartan torsion matches the Randers closed form", ac2),
        ("AC3  frame and bracket S-curvature agree", ac3),
        ("AC4  Randers closed-form S-curvature", ac4),
        ("AC5  vanishing cases", ac5),
        ("AC6  S vanishes at the distortion maximum", ac6),
        ("AC7  structural invariants", ac7),
        ("AC8  jet derivatives vs finite differences", ac8),
        ("AC9  Busemann–Hausdorff σ Monte Carlo", ac9),
        ("AC10 geodesic conservation and RK4 order", ac10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", result.detail);
        failed += usize::from(!result.pass);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
