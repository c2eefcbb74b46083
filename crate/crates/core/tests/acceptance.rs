#![allow(clippy::needless_range_loop)]

//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always show; exits non-zero if any check fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ldg_core::error_analysis::{
    energy_norm, error_energy_norm, fitted_slope, loglog_slope, project_exact, projection_error_suite,
};
use ldg_core::ldg::{bilinear_form, solve_problem, Test, Trial};
use ldg_core::manufactured::{layer_case, polynomial_case};
use ldg_core::poly::{gauss_quadrature, projection_residuals, ElementField, PiecewisePoly, ProjectionSign};
use ldg_core::study::{run_study, ConvergenceReport, StudyConfig};
use ldg_core::{Mesh, MeshKind, MeshSpec};

const NS: [usize; 6] = [16, 32, 64, 128, 256, 512];
const KINDS: [MeshKind; 3] = MeshKind::ALL;

/// Reference energy errors at eps = 1e-8, `[k][N index][S, BS, B]`.
const GOLDEN_EPS8: [[[f64; 3]; 6]; 4] = [
    [
        [3.87e-01, 3.87e-01, 3.87e-01],
        [2.40e-01, 2.40e-01, 2.40e-01],
        [1.56e-01, 1.56e-01, 1.56e-01],
        [1.05e-01, 1.05e-01, 1.05e-01],
        [7.21e-02, 7.21e-02, 7.20e-02],
        [5.02e-02, 5.02e-02, 5.02e-02],
    ],
    [
        [2.57e-02, 2.57e-02, 2.57e-02],
        [8.72e-03, 8.72e-03, 8.72e-03],
        [3.01e-03, 3.01e-03, 3.01e-03],
        [1.05e-03, 1.05e-03, 1.05e-03],
        [3.69e-04, 3.69e-04, 3.69e-04],
        [1.30e-04, 1.30e-04, 1.30e-04],
    ],
    [
        [6.52e-04, 6.52e-04, 6.52e-04],
        [1.09e-04, 1.09e-04, 1.08e-04],
        [1.85e-05, 1.85e-05, 1.85e-05],
        [3.21e-06, 3.21e-06, 3.21e-06],
        [5.62e-07, 5.62e-07, 5.62e-07],
        [9.89e-08, 9.89e-08, 9.89e-08],
    ],
    [
        [2.06e-05, 2.06e-05, 2.06e-05],
        [1.76e-06, 1.76e-06, 1.76e-06],
        [1.53e-07, 1.52e-07, 1.52e-07],
        [1.34e-08, 1.33e-08, 1.33e-08],
        [1.19e-09, 1.17e-09, 1.17e-09],
        [1.07e-10, 1.03e-10, 1.03e-10],
    ],
];

/// Reference r2 rates at eps = 1e-8 for N = 32..512, `[k][N index][S, BS, B]`.
const GOLDEN_RATES_EPS8: [[[f64; 3]; 5]; 4] = [
    [[0.69, 0.69, 0.69], [0.62, 0.62, 0.62], [0.57, 0.57, 0.57], [0.54, 0.54, 0.54], [0.52, 0.52, 0.52]],
    [[1.56, 1.56, 1.56], [1.53, 1.53, 1.53], [1.52, 1.52, 1.52], [1.51, 1.51, 1.51], [1.51, 1.51, 1.51]],
    [[2.58, 2.58, 2.59], [2.56, 2.56, 2.55], [2.53, 2.53, 2.53], [2.51, 2.51, 2.51], [2.51, 2.51, 2.51]],
    [[3.55, 3.55, 3.55], [3.52, 3.53, 3.53], [3.51, 3.51, 3.51], [3.49, 3.51, 3.51], [3.48, 3.51, 3.51]],
];

/// Reference S-mesh r_s rates of the P1 column at eps = 1e-4.
const GOLDEN_RS_P1: [f64; 5] = [2.30, 2.08, 1.95, 1.86, 1.82];

/// Reference S-mesh P3 column at eps = 1e-4 and its r_s rates.
const GOLDEN_EPS4_P3: [f64; 6] = [3.16e-05, 5.37e-06, 8.99e-07, 1.37e-07, 1.94e-08, 2.60e-09];
const GOLDEN_EPS4_P3_RS: [f64; 5] = [3.77, 3.50, 3.49, 3.49, 3.49];

struct Reports {
    eps4: ConvergenceReport,
    eps8: ConvergenceReport,
    eps12: ConvergenceReport,
}

fn sweep(eps: f64) -> ConvergenceReport {
    let report = run_study(&StudyConfig { eps_list: vec![eps], ..Default::default() }).expect("valid config");
    assert!(!report.any_failed(), "a row failed at eps = {eps}");
    report
}

fn energy(report: &ConvergenceReport, kind: MeshKind, k: usize, n: usize) -> f64 {
    let eps = report.rows[0].eps;
    report.find(kind, k, eps, n).and_then(|r| r.metrics()).expect("row present").energy
}

fn layer_mesh(kind: MeshKind, n: usize, eps: f64, k: usize) -> Arc<Mesh> {
    Arc::new(Mesh::build(&MeshSpec::new(kind, n, eps, k as f64 + 1.5, 1.0).unwrap()).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_eps8(r: &Reports) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_rate: f64 = 0.0;
    for k in 0..4 {
        for (ki, &kind) in KINDS.iter().enumerate() {
            for (ni, &n) in NS.iter().enumerate() {
                let e = energy(&r.eps8, kind, k, n);
                let g = GOLDEN_EPS8[k][ni][ki];
                worst = worst.max(rel(e, g));
                ensure(rel(e, g) <= 0.05, || format!("{kind} P{k} N={n}: {e:.3e} vs {g:.2e}"))?;
                if ni > 0 {
                    let row = r.eps8.find(kind, k, 1e-8, n).unwrap();
                    let rate = row.rates.energy_r2.unwrap();
                    let g = GOLDEN_RATES_EPS8[k][ni - 1][ki];
                    worst_rate = worst_rate.max((rate - g).abs());
                    ensure((rate - g).abs() <= 0.1, || format!("{kind} P{k} N={n}: r2 {rate:.2} vs {g}"))?;
                }
            }
        }
    }
    // r_s recomputed from the published P1 S-mesh errors
    let p1: Vec<f64> = [2.57e-02, 8.71e-03, 3.01e-03, 1.05e-03, 3.70e-04, 1.30e-04].to_vec();
    for i in 0..5 {
        let rs = ldg_core::error_analysis::rate_rs(p1[i], p1[i + 1], NS[i]).unwrap();
        ensure((rs - GOLDEN_RS_P1[i]).abs() <= 0.1, || format!("r_s at N={}: {rs:.2}", NS[i]))?;
        let ours = r.eps8.find(MeshKind::Shishkin, 1, 1e-8, NS[i + 1]).unwrap().rates.energy_rs.unwrap();
        ensure((ours - GOLDEN_RS_P1[i]).abs() <= 0.1, || format!("computed r_s at N={}: {ours:.2}", NS[i]))?;
    }
    let secs = r.eps8.metadata.wall_time.as_secs_f64();
    ensure(secs < 120.0, || format!("sweep took {secs:.1} s"))?;
    Ok(format!("max rel. error dev {:.2}%, max r2 dev {worst_rate:.3}, sweep {secs:.2} s", 100.0 * worst))
}

/// Cells allowed to exceed 1%: on the S-mesh the fine-region part of the
/// energy error still scales like `sqrt(eps)` at eps = 1e-8 and shows up in
/// the leading digits once the total error is small. The exception must stay
/// within the golden 5% and vanish between eps = 1e-10 and 1e-12.
const EPS_ROBUST_EXCEPTIONS: [(MeshKind, usize, usize); 2] =
    [(MeshKind::Shishkin, 3, 256), (MeshKind::Shishkin, 3, 512)];

fn eps_robust(r: &Reports) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut excepted = Vec::new();
    for &kind in &KINDS {
        for k in 0..4 {
            for (ni, &n) in NS.iter().enumerate() {
                let (a, b) = (energy(&r.eps12, kind, k, n), energy(&r.eps8, kind, k, n));
                let g = GOLDEN_EPS8[k][ni][KINDS.iter().position(|&x| x == kind).unwrap()];
                ensure(rel(a, g) <= 0.05, || format!("{kind} P{k} N={n}: {a:.3e} vs golden {g:.2e}"))?;
                if EPS_ROBUST_EXCEPTIONS.contains(&(kind, k, n)) {
                    excepted.push(format!("{kind}/P{k}/N={n} {:.2}%", 100.0 * rel(a, b)));
                    continue;
                }
                worst = worst.max(rel(a, b));
                ensure(rel(a, b) <= 0.01, || format!("{kind} P{k} N={n}: {a:.4e} vs {b:.4e}"))?;
            }
        }
    }
    let limit = run_study(&StudyConfig {
        mesh_kinds: vec![MeshKind::Shishkin],
        degrees: vec![3],
        eps_list: vec![1e-10],
        n_list: vec![256, 512],
        ..Default::default()
    })
    .unwrap();
    for &n in &[256, 512] {
        let (a, b) = (energy(&limit, MeshKind::Shishkin, 3, n), energy(&r.eps12, MeshKind::Shishkin, 3, n));
        ensure(rel(a, b) <= 1e-3, || format!("S P3 N={n}: eps 1e-10 {a:.4e} vs 1e-12 {b:.4e}"))?;
    }
    Ok(format!("max rel. difference {worst:.2e}; sqrt(eps) fine-region cells {}", excepted.join(", ")))
}

fn golden_eps4(r: &Reports) -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, &n) in NS.iter().enumerate() {
        let e = energy(&r.eps4, MeshKind::Shishkin, 3, n);
        worst = worst.max(rel(e, GOLDEN_EPS4_P3[i]));
        ensure(rel(e, GOLDEN_EPS4_P3[i]) <= 0.05, || format!("N={n}: {e:.3e} vs {:.2e}", GOLDEN_EPS4_P3[i]))?;
        if i > 0 {
            let rs = r.eps4.find(MeshKind::Shishkin, 3, 1e-4, n).unwrap().rates.energy_rs.unwrap();
            let g = GOLDEN_EPS4_P3_RS[i - 1];
            ensure((rs - g).abs() <= 0.1, || format!("N={n}: r_s {rs:.2} vs {g}"))?;
        }
    }
    Ok(format!("max rel. error dev {:.2}%", 100.0 * worst))
}

fn energy_slopes(r: &Reports) -> Outcome {
    let mut detail = Vec::new();
    for &kind in &KINDS {
        for k in [1, 2] {
            let ns = &NS[1..];
            let errs: Vec<f64> = ns.iter().map(|&n| energy(&r.eps8, kind, k, n)).collect();
            let slope = loglog_slope(ns, &errs);
            ensure(slope <= -(k as f64 + 0.4), || format!("{kind} P{k}: slope {slope:.3}"))?;
            detail.push(format!("{kind}/P{k} {slope:.2}"));
        }
    }
    Ok(detail.join(", "))
}

fn cubic_exactness() -> Outcome {
    let qe = gauss_quadrature(20).unwrap();
    let mut worst: f64 = 0.0;
    for &kind in &KINDS {
        for n in [8, 16] {
            for eps in [1e-2, 1e-8] {
                let case = polynomial_case(eps);
                let mesh = layer_mesh(kind, n, eps, 3);
                let sol = solve_problem(&case.problem, &mesh, 3, &gauss_quadrature(6).unwrap()).unwrap();
                let err = error_energy_norm(&case, &sol, &qe);
                worst = worst.max(err);
                ensure(err <= 1e-10, || format!("{kind} N={n} eps={eps:e}: {err:e}"))?;
            }
        }
    }
    Ok(format!("max energy error {worst:.1e}"))
}

/// `B(W; (U, -Q + aP, P))` against the squared energy norm; `a = 1` here so
/// the test triple stays in the discrete space.
fn energy_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut cases = Vec::new();
    for eps in [1e-4, 1e-8, 1e-12] {
        for &kind in &KINDS {
            for k in 0..4 {
                for &n in &NS {
                    cases.push((layer_case(eps), kind, k, n));
                }
            }
        }
    }
    for &kind in &KINDS {
        for n in [8, 16] {
            for eps in [1e-2, 1e-8] {
                cases.push((polynomial_case(eps), kind, 3, n));
            }
        }
    }
    for (case, kind, k, n) in cases {
        let mesh = layer_mesh(kind, n, case.eps, k);
        let q = gauss_quadrature(k + 3).unwrap();
        let sol = solve_problem(&case.problem, &mesh, k, &q).unwrap();
        let r = sol.p.axpy(-1.0, &sol.q).unwrap();
        let b = bilinear_form(
            &Trial { u: &sol.u, p: &sol.p, q: &sol.q },
            &Test { v: &sol.u, r: &r, s: &sol.p },
            &case.problem,
            &mesh,
            &q,
        )
        .unwrap();
        let norm2 = energy_norm(&sol, &case.problem, &q).powi(2);
        let dev = (b - norm2).abs() / norm2;
        worst = worst.max(dev);
        count += 1;
        ensure(dev <= 1e-10, || format!("{} {kind} P{k} N={n}: rel. deviation {dev:e}", case.name))?;
    }
    Ok(format!("{count} solves, max rel. deviation {worst:.1e}"))
}

/// Element relation for `X = P - pi^+ p`, `Y = Q - pi^+ q`:
/// `||Y||^2 = eps (<X', Y> + Y_j^- [X]_j) + <q - pi^+ q, Y>` with `[X]_N = -X_N^-`.
///
/// On coarse elements `Y` is many orders below `Q`, so the deviation is
/// measured against the unsplit terms (`<Q, Y>`, `<pi^+ q, Y>`, ...) that
/// cancel to produce it.
fn appendix_identity() -> Outcome {
    let (eps, k, n) = (1e-4, 1, 32);
    let case = layer_case(eps);
    let mesh = layer_mesh(MeshKind::Shishkin, n, eps, k);
    let sol = solve_problem(&case.problem, &mesh, k, &gauss_quadrature(k + 3).unwrap()).unwrap();
    // the layer tail on the coarse elements needs sub-intervals to integrate
    let fine = gauss_quadrature(20).unwrap().composite(64);
    let [_, pi_p, pi_q] = project_exact(&case, &mesh, k, &fine).unwrap();
    let x: PiecewisePoly = sol.p.axpy(-1.0, &pi_p).unwrap();
    let y: PiecewisePoly = sol.q.axpy(-1.0, &pi_q).unwrap();
    let mut worst: f64 = 0.0;
    for e in 0..n {
        let half_h = 0.5 * mesh.widths()[e];
        // [value, sum of magnitudes of the unsplit pieces]
        let (mut yy, mut dxy, mut f) = ([0.0f64; 2], [0.0f64; 2], [0.0f64; 2]);
        let acc = |t: &mut [f64; 2], a: f64, b: f64| {
            t[0] += a - b;
            t[1] += a.abs() + b.abs();
        };
        for (&xi, &w) in fine.nodes.iter().zip(&fine.weights) {
            let wh = w * half_h;
            let yv = y.value(e, xi);
            let exact_q = (case.exact_q)(mesh.element_coord(e, xi));
            acc(&mut yy, wh * sol.q.value(e, xi) * yv, wh * pi_q.value(e, xi) * yv);
            acc(&mut dxy, wh * sol.p.derivative(e, xi) * yv, wh * pi_p.derivative(e, xi) * yv);
            acc(&mut f, wh * exact_q * yv, wh * pi_q.value(e, xi) * yv);
        }
        let jump =
            |v: &PiecewisePoly| if e + 1 < n { v.left_trace(e + 1) - v.right_trace(e) } else { -v.right_trace(e) };
        let y_minus = y.right_trace(e);
        let trace = [y_minus * jump(&x), (y_minus * jump(&sol.p)).abs() + (y_minus * jump(&pi_p)).abs()];
        let rhs = eps * (dxy[0] + trace[0]) + f[0];
        let scale = yy[1] + eps * (dxy[1] + trace[1]) + f[1];
        let dev = (yy[0] - rhs).abs() / scale;
        worst = worst.max(dev);
        ensure(dev <= 1e-10, || format!("element {e}: ||Y||^2 = {:e}, rhs = {rhs:e}", yy[0]))?;
    }
    Ok(format!("{n} elements, max rel. deviation {worst:.1e}"))
}

fn projection_rates() -> Outcome {
    let eps = 1e-8;
    let ns = &NS[1..];
    let q = gauss_quadrature(20).unwrap();
    let case = layer_case(eps);
    let mut detail = Vec::new();
    let mut worst_res: f64 = 0.0;
    for k in 0..4 {
        let mut l2 = Vec::new();
        let mut jumps = Vec::new();
        for &n in ns {
            let mesh = layer_mesh(MeshKind::Shishkin, n, eps, k);
            let suite = projection_error_suite(&case, &mesh, k, &q).unwrap();
            l2.push(suite.u_l2);
            jumps.push(suite.u_jump);
            let [pu, pp, pq] = project_exact(&case, &mesh, k, &q).unwrap();
            for (sign, f, proj) in [
                (ProjectionSign::Minus, &case.exact_u, &pu),
                (ProjectionSign::Plus, &case.exact_p, &pp),
                (ProjectionSign::Plus, &case.exact_q, &pq),
            ] {
                let res = projection_residuals(sign, f.as_ref(), proj, &q);
                worst_res = worst_res.max(res.moment).max(res.collocation);
            }
        }
        let x: Vec<f64> = ns.iter().map(|&n| ((n as f64).ln() / n as f64).ln()).collect();
        let y: Vec<f64> = l2.iter().map(|e| e.ln()).collect();
        let rate_l2 = fitted_slope(&x, &y);
        let rate_jump = -loglog_slope(ns, &jumps);
        ensure(rate_l2 >= k as f64 + 0.9, || format!("P{k}: L2 rate {rate_l2:.3} in ln N / N"))?;
        ensure(rate_jump >= k as f64 + 0.4, || format!("P{k}: jump rate {rate_jump:.3}"))?;
        detail.push(format!("P{k} {rate_l2:.2}/{rate_jump:.2}"));
    }
    ensure(worst_res <= 1e-12, || format!("projection residual {worst_res:e}"))?;
    Ok(format!("L2/jump rates {}, max residual {worst_res:.1e}", detail.join(", ")))
}

fn l2_rates(r: &Reports) -> Outcome {
    let ns = &NS[1..];
    let mut detail = Vec::new();
    for &kind in &KINDS {
        for k in [1, 2] {
            let rows: Vec<_> = ns.iter().map(|&n| r.eps8.find(kind, k, 1e-8, n).unwrap().metrics().unwrap()).collect();
            let ru = -loglog_slope(ns, &rows.iter().map(|m| m.l2_u).collect::<Vec<_>>());
            let rp = -loglog_slope(ns, &rows.iter().map(|m| m.l2_p).collect::<Vec<_>>());
            let target = k as f64 + 1.0;
            ensure((ru - target).abs() <= 0.15, || format!("{kind} P{k}: u rate {ru:.3}"))?;
            ensure((rp - target).abs() <= 0.15, || format!("{kind} P{k}: p rate {rp:.3}"))?;
            detail.push(format!("{kind}/P{k} {ru:.2}/{rp:.2}"));
        }
    }
    Ok(format!("u/p rates {}", detail.join(", ")))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = Reports { eps4: sweep(1e-4), eps8: sweep(1e-8), eps12: sweep(1e-12) };
    let checks: Vec<(&str, Check<'_>)> = vec![
        ("golden energy errors and rates, eps = 1e-8", Box::new(|| golden_eps8(&reports))),
        ("eps = 1e-12 agrees with eps = 1e-8 within 1%, S/P3 tail excepted", Box::new(|| eps_robust(&reports))),
        ("S-mesh P3 column and r_s rates, eps = 1e-4", Box::new(|| golden_eps4(&reports))),
        ("energy slope <= -(k + 0.4), k = 1, 2", Box::new(|| energy_slopes(&reports))),
        ("cubic solution reproduced exactly", Box::new(cubic_exactness)),
        ("energy identity", Box::new(energy_identity)),
        ("element identity for the q equation", Box::new(appendix_identity)),
        ("Gauss-Radau projection rates and residuals", Box::new(projection_rates)),
        ("L2 rates of u and p within 0.15 of k + 1", Box::new(|| l2_rates(&reports))),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({detail})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        checks.len() - failures,
        checks.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
