//! Energy norm, L2/L-infinity errors, jump sums and convergence rates.

use std::sync::Arc;

use crate::error::{LdgError, Result};
use crate::ldg::LdgSolution;
use crate::manufactured::TestCase;
use crate::mesh::{Coord, Mesh};
use crate::poly::{
    jump, project_gauss_radau, Difference, ElementField, ExactField, PiecewisePoly, ProjectionSign, Quadrature,
};
use crate::problem::Problem;

/// The four nonnegative contributions to the squared energy norm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyParts {
    /// `(eps/2) sum_{j=0}^{N} [P]_j^2`
    pub p_jumps: f64,
    /// `||a^{1/2} P||^2`
    pub p_weighted: f64,
    /// `||(c - b'/2)^{1/2} U||^2`
    pub u_weighted: f64,
    /// `(1/2) sum_{j=0}^{N} |b_j| [U]_j^2`
    pub u_jumps: f64,
}

impl EnergyParts {
    pub fn squared(&self) -> f64 {
        self.p_jumps + self.p_weighted + self.u_weighted + self.u_jumps
    }

    pub fn norm(&self) -> f64 {
        self.squared().sqrt()
    }
}

/// Energy-norm contributions of a pair `(u, p)` of element fields.
pub fn energy_parts<U, P>(u: &U, p: &P, problem: &Problem, mesh: &Mesh, quad: &Quadrature) -> EnergyParts
where
    U: ElementField + ?Sized,
    P: ElementField + ?Sized,
{
    let n = mesh.n_elements();
    let mut parts = EnergyParts::default();
    for e in 0..n {
        let half_h = 0.5 * mesh.widths()[e];
        let (mut pw, mut uw) = (0.0, 0.0);
        for (&xi, &w) in quad.nodes.iter().zip(&quad.weights) {
            let x = mesh.element_coord(e, xi);
            let pv = p.value(e, xi);
            let uv = u.value(e, xi);
            pw += w * (problem.a)(x) * pv * pv;
            uw += w * ((problem.c)(x) - 0.5 * (problem.bprime)(x)) * uv * uv;
        }
        parts.p_weighted += pw * half_h;
        parts.u_weighted += uw * half_h;
    }
    for j in 0..=n {
        let jp = jump(p, j, n);
        let ju = jump(u, j, n);
        parts.p_jumps += 0.5 * problem.eps * jp * jp;
        parts.u_jumps += 0.5 * (problem.b)(mesh.node_coord(j)).abs() * ju * ju;
    }
    parts
}

/// Energy norm of the discrete triple `W = (U, P, Q)`.
pub fn energy_norm(w: &LdgSolution, problem: &Problem, quad: &Quadrature) -> f64 {
    energy_parts(&w.u, &w.p, problem, w.mesh(), quad).norm()
}

/// Energy-norm contributions of `w - W` for exact `(u, p)`.
pub fn error_energy_parts(case: &TestCase, w: &LdgSolution, quad: &Quadrature) -> EnergyParts {
    let mesh = w.mesh();
    let eu = ExactField::new(mesh, case.exact_u.as_ref());
    let ep = ExactField::new(mesh, case.exact_p.as_ref());
    let du = Difference { a: &eu, b: &w.u };
    let dp = Difference { a: &ep, b: &w.p };
    energy_parts(&du, &dp, &case.problem, mesh, quad)
}

pub fn error_energy_norm(case: &TestCase, w: &LdgSolution, quad: &Quadrature) -> f64 {
    error_energy_parts(case, w, quad).norm()
}

/// `||exact - v||` over [0, 1] by composite Gauss quadrature.
pub fn l2_error<F>(exact: &F, v: &PiecewisePoly, quad: &Quadrature) -> f64
where
    F: Fn(Coord) -> f64 + ?Sized,
{
    let mesh = v.mesh();
    let ex = ExactField::new(mesh, exact);
    l2_norm_field(&Difference { a: &ex, b: v }, mesh, quad)
}

pub fn l2_norm_field<F: ElementField + ?Sized>(v: &F, mesh: &Mesh, quad: &Quadrature) -> f64 {
    (0..mesh.n_elements())
        .map(|e| {
            0.5 * mesh.widths()[e]
                * quad.nodes.iter().zip(&quad.weights).map(|(&xi, &w)| w * v.value(e, xi).powi(2)).sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

/// Maximum of `|v|` over the fine elements `N/2+1..=N`, sampled at the
/// quadrature nodes and both element ends.
pub fn linf_fine<F: ElementField + ?Sized>(v: &F, mesh: &Mesh, quad: &Quadrature) -> f64 {
    let n = mesh.n_elements();
    let mut m = 0.0f64;
    for e in n / 2..n {
        m = m.max(v.left_trace(e).abs()).max(v.right_trace(e).abs());
        for &xi in &quad.nodes {
            m = m.max(v.value(e, xi).abs());
        }
    }
    m
}

/// `(sum_{j=0}^{N} [v]_j^2)^{1/2}`
pub fn jump_root<F: ElementField + ?Sized>(v: &F, mesh: &Mesh) -> f64 {
    let n = mesh.n_elements();
    (0..=n).map(|j| jump(v, j, n).powi(2)).sum::<f64>().sqrt()
}

/// Error summary of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRecord {
    pub energy: f64,
    pub parts: EnergyParts,
    pub l2_u: f64,
    pub l2_p: f64,
    pub l2_q: f64,
    pub linf_u_fine: f64,
    pub jump_u: f64,
    pub jump_p: f64,
}

pub fn error_record(case: &TestCase, w: &LdgSolution, quad: &Quadrature) -> ErrorRecord {
    let mesh = w.mesh();
    let eu = ExactField::new(mesh, case.exact_u.as_ref());
    let ep = ExactField::new(mesh, case.exact_p.as_ref());
    let du = Difference { a: &eu, b: &w.u };
    let dp = Difference { a: &ep, b: &w.p };
    let parts = energy_parts(&du, &dp, &case.problem, mesh, quad);
    ErrorRecord {
        energy: parts.norm(),
        parts,
        l2_u: l2_norm_field(&du, mesh, quad),
        l2_p: l2_norm_field(&dp, mesh, quad),
        l2_q: l2_error(case.exact_q.as_ref(), &w.q, quad),
        linf_u_fine: linf_fine(&du, mesh, quad),
        jump_u: jump_root(&du, mesh),
        jump_p: jump_root(&dp, mesh),
    }
}

fn check_positive(values: &[f64]) -> Result<()> {
    if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(LdgError::InvalidArgument(format!("rates need positive finite errors, got {values:?}")));
    }
    Ok(())
}

/// `log(e_N / e_2N) / log 2`
pub fn rate_r2(e_n: f64, e_2n: f64) -> Result<f64> {
    check_positive(&[e_n, e_2n])?;
    Ok((e_n / e_2n).ln() / 2f64.ln())
}

/// Rate with respect to `ln N / N` on Shishkin meshes:
/// `log(e_N / e_2N) / log(2 ln N / ln 2N)`.
pub fn rate_rs(e_n: f64, e_2n: f64, n: usize) -> Result<f64> {
    check_positive(&[e_n, e_2n])?;
    if n < 4 {
        return Err(LdgError::InvalidArgument(format!("r_s needs N >= 4, got {n}")));
    }
    let nf = n as f64;
    Ok((e_n / e_2n).ln() / (2.0 * nf.ln() / (2.0 * nf).ln()).ln())
}

/// Least-squares slope of `y` against `x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Slope of `log error` against `log N`.
pub fn loglog_slope(ns: &[usize], errors: &[f64]) -> f64 {
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    fitted_slope(&x, &y)
}

/// Approximation errors of the Gauss-Radau projections of an exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionErrors {
    /// `||u - pi^- u||`
    pub u_l2: f64,
    /// `||p - pi^+ p||`
    pub p_l2: f64,
    /// `||q - pi^+ q||`
    pub q_l2: f64,
    /// `||p - pi^+ p||_{L-inf}` on the fine region
    pub p_linf_fine: f64,
    /// `||q - pi^+ q||_{L-inf}` on the fine region
    pub q_linf_fine: f64,
    /// `(sum [u - pi^- u]_j^2)^{1/2}`
    pub u_jump: f64,
    /// `(sum [p - pi^+ p]_j^2)^{1/2}`
    pub p_jump: f64,
}

/// The three projections `(pi^- u, pi^+ p, pi^+ q)` of a test case.
pub fn project_exact(case: &TestCase, mesh: &Arc<Mesh>, k: usize, quad: &Quadrature) -> Result<[PiecewisePoly; 3]> {
    Ok([
        project_gauss_radau(ProjectionSign::Minus, case.exact_u.as_ref(), mesh, k, quad)?,
        project_gauss_radau(ProjectionSign::Plus, case.exact_p.as_ref(), mesh, k, quad)?,
        project_gauss_radau(ProjectionSign::Plus, case.exact_q.as_ref(), mesh, k, quad)?,
    ])
}

pub fn projection_error_suite(
    case: &TestCase,
    mesh: &Arc<Mesh>,
    k: usize,
    quad: &Quadrature,
) -> Result<ProjectionErrors> {
    let [pu, pp, pq] = project_exact(case, mesh, k, quad)?;
    let eu = ExactField::new(mesh, case.exact_u.as_ref());
    let ep = ExactField::new(mesh, case.exact_p.as_ref());
    let eq = ExactField::new(mesh, case.exact_q.as_ref());
    let du = Difference { a: &eu, b: &pu };
    let dp = Difference { a: &ep, b: &pp };
    let dq = Difference { a: &eq, b: &pq };
    Ok(ProjectionErrors {
        u_l2: l2_norm_field(&du, mesh, quad),
        p_l2: l2_norm_field(&dp, mesh, quad),
        q_l2: l2_norm_field(&dq, mesh, quad),
        p_linf_fine: linf_fine(&dp, mesh, quad),
        q_linf_fine: linf_fine(&dq, mesh, quad),
        u_jump: jump_root(&du, mesh),
        p_jump: jump_root(&dp, mesh),
    })
}
