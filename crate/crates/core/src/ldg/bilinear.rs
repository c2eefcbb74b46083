//! The global bilinear form `B(W; chi)` and the element-wise residuals of
//! the flux form, both evaluated directly from traces and quadrature and
//! independent of the assembled matrix.

use super::flux::{flux_values, upwind_split};
use crate::error::{LdgError, Result};
use crate::mesh::Mesh;
use crate::poly::{ElementField, PiecewisePoly, Quadrature};
use crate::problem::Problem;

/// Trial triple `(U, P, Q)`; any element-wise field (discrete or exact).
pub struct Trial<'a> {
    pub u: &'a dyn ElementField,
    pub p: &'a dyn ElementField,
    pub q: &'a dyn ElementField,
}

/// Test triple `(v, r, s)`, paired with `U`, `P` and `Q` equations as
/// `(balance law, p = u', q = eps p')`.
pub struct Test<'a> {
    pub v: &'a PiecewisePoly,
    pub r: &'a PiecewisePoly,
    pub s: &'a PiecewisePoly,
}

fn check_mesh(mesh: &Mesh, chi: &Test<'_>) -> Result<()> {
    for t in [chi.v, chi.r, chi.s] {
        if t.mesh().as_ref() != mesh {
            return Err(LdgError::Mismatch("test function lives on a different mesh".into()));
        }
    }
    Ok(())
}

/// Compact form:
///
/// ```text
/// B(W; chi) = <P,r> + <U,r'> + sum_{j=1}^{N-1} U_j^- [r]_j
///   + <Q,s> + eps (<P,s'> + sum P_j^+ [s]_j + P_0^+ s_0^+)
///   - <Q,v'> - sum Q_j^+ [v]_j + Q_N^- v_N^- - Q_0^+ v_0^+
///   + <aP,v'> + sum a_j P_j^+ [v]_j - a_N P_N^- v_N^- + a_0 P_0^+ v_0^+
///   + <(c - b')U, v> - <bU, v'> - sum (b_j^+ U_j^- + b_j^- U_j^+) [v]_j
///   + b_N^+ U_N^- v_N^- - b_0^- U_0^+ v_0^+
/// ```
pub fn bilinear_form(w: &Trial<'_>, chi: &Test<'_>, problem: &Problem, mesh: &Mesh, quad: &Quadrature) -> Result<f64> {
    check_mesh(mesh, chi)?;
    let n = mesh.n_elements();
    let eps = problem.eps;
    let mut volume = 0.0;
    for e in 0..n {
        let half_h = 0.5 * mesh.widths()[e];
        let mut acc = 0.0;
        for (&xi, &wq) in quad.nodes.iter().zip(&quad.weights) {
            let x = mesh.element_coord(e, xi);
            let (uu, pp, qq) = (w.u.value(e, xi), w.p.value(e, xi), w.q.value(e, xi));
            let (v, r, s) = (chi.v.value(e, xi), chi.r.value(e, xi), chi.s.value(e, xi));
            let (dv, dr, ds) = (chi.v.derivative(e, xi), chi.r.derivative(e, xi), chi.s.derivative(e, xi));
            let a = (problem.a)(x);
            let b = (problem.b)(x);
            let cb = (problem.c)(x) - (problem.bprime)(x);
            let integrand =
                pp * r + uu * dr + qq * s + eps * pp * ds - qq * dv + a * pp * dv + cb * uu * v - b * uu * dv;
            acc += wq * integrand;
        }
        volume += acc * half_h;
    }

    let mut interface = 0.0;
    for j in 1..n {
        let node = mesh.node_coord(j);
        let a = (problem.a)(node);
        let (bp, bm) = upwind_split((problem.b)(node));
        let u_minus = w.u.right_trace(j - 1);
        let u_plus = w.u.left_trace(j);
        let p_plus = w.p.left_trace(j);
        let q_plus = w.q.left_trace(j);
        interface += u_minus * chi.r.jump(j) + eps * p_plus * chi.s.jump(j) - q_plus * chi.v.jump(j)
            + a * p_plus * chi.v.jump(j)
            - (bp * u_minus + bm * u_plus) * chi.v.jump(j);
    }

    let x0 = mesh.node_coord(0);
    let x1 = mesh.node_coord(n);
    let (_, bm0) = upwind_split((problem.b)(x0));
    let (bp1, _) = upwind_split((problem.b)(x1));
    let (a0, a1) = ((problem.a)(x0), (problem.a)(x1));
    let (v0, v1, s0) = (chi.v.left_trace(0), chi.v.right_trace(n - 1), chi.s.left_trace(0));
    let boundary = eps * w.p.left_trace(0) * s0 + w.q.right_trace(n - 1) * v1
        - w.q.left_trace(0) * v0
        - a1 * w.p.right_trace(n - 1) * v1
        + a0 * w.p.left_trace(0) * v0
        + bp1 * w.u.right_trace(n - 1) * v1
        - bm0 * w.u.left_trace(0) * v0;

    Ok(volume + interface + boundary)
}

/// `<f, v>` by quadrature.
pub fn load_functional(problem: &Problem, v: &PiecewisePoly, quad: &Quadrature) -> f64 {
    let mesh = v.mesh();
    (0..mesh.n_elements())
        .map(|e| {
            let half_h = 0.5 * mesh.widths()[e];
            half_h
                * quad
                    .nodes
                    .iter()
                    .zip(&quad.weights)
                    .map(|(&xi, &wq)| wq * (problem.f)(mesh.element_coord(e, xi)) * v.value(e, xi))
                    .sum::<f64>()
        })
        .sum()
}

/// Worst residual of the element equations over all test modes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    pub absolute: f64,
    /// `absolute` over the largest sum of term magnitudes of any equation.
    pub relative: f64,
    /// `max |<f, v>|` over basis modes.
    pub load_scale: f64,
}

/// Residuals of the three element equations, tested against every basis
/// mode of every element, computed through [`flux_values`].
pub fn max_element_residual(
    w: &Trial<'_>,
    problem: &Problem,
    mesh: &std::sync::Arc<Mesh>,
    degree: usize,
    quad: &Quadrature,
) -> Result<ResidualReport> {
    let n = mesh.n_elements();
    let fluxes: Vec<_> = (0..=n).map(|j| flux_values(w.u, w.p, w.q, mesh, j, problem)).collect::<Result<_>>()?;
    let eps = problem.eps;
    let mut report = ResidualReport::default();
    let mut term_scale = 0.0f64;
    for e in 0..n {
        let half_h = 0.5 * mesh.widths()[e];
        let a_left = (problem.a)(mesh.node_coord(e));
        let a_right = (problem.a)(mesh.node_coord(e + 1));
        let (fl, fr) = (&fluxes[e], &fluxes[e + 1]);
        for m in 0..=degree {
            let t = PiecewisePoly::basis_function(mesh.clone(), degree, e, m);
            let (tl, tr) = (t.left_trace(e), t.right_trace(e));
            // [sum, sum of magnitudes] for each of the three equations
            let mut vol = [[0.0f64; 2]; 4];
            for (&xi, &wq) in quad.nodes.iter().zip(&quad.weights) {
                let x = mesh.element_coord(e, xi);
                let (uu, pp, qq) = (w.u.value(e, xi), w.p.value(e, xi), w.q.value(e, xi));
                let (tv, td) = (t.value(e, xi), t.derivative(e, xi));
                let cb = (problem.c)(x) - (problem.bprime)(x);
                let terms = [
                    [pp * tv, uu * td, 0.0, 0.0],
                    [qq * tv, eps * pp * td, 0.0, 0.0],
                    [-qq * td, (problem.a)(x) * pp * td, -(problem.b)(x) * uu * td, cb * uu * tv],
                    [(problem.f)(x) * tv, 0.0, 0.0, 0.0],
                ];
                for (eq, row) in terms.iter().enumerate() {
                    for &v in row {
                        vol[eq][0] += wq * v * half_h;
                        vol[eq][1] += (wq * v * half_h).abs();
                    }
                }
            }
            let mut acc = vol;
            let mut add = |eq: usize, term: f64| {
                acc[eq][0] += term;
                acc[eq][1] += term.abs();
            };
            add(0, -fr.u_hat * tr);
            add(0, fl.u_hat * tl);
            add(1, -eps * fr.p_hat * tr);
            add(1, eps * fl.p_hat * tl);
            for term in [
                fr.q_hat * tr,
                -fl.q_hat * tl,
                -a_right * fr.p_tilde * tr,
                a_left * fl.p_tilde * tl,
                fr.bu_tilde * tr,
                -fl.bu_tilde * tl,
            ] {
                add(2, term);
            }
            let load = acc[3];
            let residuals = [acc[0], acc[1], [acc[2][0] - load[0], acc[2][1] + load[1]]];
            for [r, mag] in residuals {
                report.absolute = report.absolute.max(r.abs());
                term_scale = term_scale.max(mag);
            }
            report.load_scale = report.load_scale.max(load[0].abs());
        }
    }
    if term_scale > 0.0 {
        report.relative = report.absolute / term_scale;
    }
    Ok(report)
}
