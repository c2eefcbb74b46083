use std::fmt::Write as _;
use std::sync::Arc;

use super::banded::BandedMatrix;
use super::flux::upwind_split;
use crate::error::{LdgError, Result};
use crate::mesh::Mesh;
use crate::poly::{left_end_value, right_end_value, BasisTable, PiecewisePoly, Quadrature};
use crate::problem::Problem;

/// Position of a variable inside an element block `[U | P | Q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U = 0,
    P = 1,
    Q = 2,
}

/// Global unknown numbering: element blocks of `3 (k+1)` coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofLayout {
    pub n_elements: usize,
    pub degree: usize,
}

impl DofLayout {
    pub fn modes(&self) -> usize {
        self.degree + 1
    }

    pub fn block(&self) -> usize {
        3 * self.modes()
    }

    pub fn len(&self) -> usize {
        self.n_elements * self.block()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, e: usize, var: Var, m: usize) -> usize {
        e * self.block() + var as usize * self.modes() + m
    }
}

/// Assembled LDG system `A x = rhs`.
///
/// Rows of the `P`-slot hold the `p = u'` equations, rows of the `Q`-slot
/// the `q = eps p'` equations and rows of the `U`-slot the balance law, so
/// each row's mass term sits on the diagonal block.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub mesh: Arc<Mesh>,
    pub layout: DofLayout,
    pub matrix: BandedMatrix,
    pub rhs: Vec<f64>,
}

impl BlockSystem {
    /// Coordinate-format dump, `row col value` per line.
    pub fn dump_matrix(&self) -> String {
        let mut out = String::new();
        for (i, j, v) in self.matrix.triplets() {
            let _ = writeln!(out, "{i} {j} {v:.17e}");
        }
        out
    }
}

/// Per-element integrals used by assembly.
struct ElementMatrices {
    /// `int phi_n phi_m'`
    stiff: Vec<Vec<f64>>,
    /// `int a phi_n phi_m'`
    stiff_a: Vec<Vec<f64>>,
    /// `int b phi_n phi_m'`
    stiff_b: Vec<Vec<f64>>,
    /// `int (c - b') phi_n phi_m`
    mass_cb: Vec<Vec<f64>>,
    /// `int f phi_m`
    load: Vec<f64>,
}

fn element_matrices(
    problem: &Problem,
    mesh: &Mesh,
    e: usize,
    table: &BasisTable,
    quad: &Quadrature,
) -> ElementMatrices {
    let m = table.degree + 1;
    let h = mesh.widths()[e];
    let mut out = ElementMatrices {
        stiff: vec![vec![0.0; m]; m],
        stiff_a: vec![vec![0.0; m]; m],
        stiff_b: vec![vec![0.0; m]; m],
        mass_cb: vec![vec![0.0; m]; m],
        load: vec![0.0; m],
    };
    for (q, (&xi, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
        let x = mesh.element_coord(e, xi);
        let a = (problem.a)(x);
        let b = (problem.b)(x);
        let cb = (problem.c)(x) - (problem.bprime)(x);
        let f = (problem.f)(x);
        let v = &table.values[q];
        let d = &table.derivs[q];
        for n in 0..m {
            for k in 0..m {
                let vd = w * v[n] * d[k];
                out.stiff[n][k] += vd;
                out.stiff_a[n][k] += a * vd;
                out.stiff_b[n][k] += b * vd;
                out.mass_cb[n][k] += w * cb * v[n] * v[k];
            }
            out.load[n] += w * f * v[n];
        }
    }
    let s = 2.0 / h;
    for n in 0..m {
        for k in 0..m {
            out.stiff[n][k] *= s;
            out.stiff_a[n][k] *= s;
            out.stiff_b[n][k] *= s;
        }
        out.load[n] *= (h / 2.0).sqrt();
    }
    out
}

/// Assembles the LDG equations element by element.
///
/// For element `I_j` and each test mode:
///
/// ```text
/// <P,r> + <U,r'> - Uh_j r_j^- + Uh_{j-1} r_{j-1}^+ = 0
/// <Q,s> + eps (<P,s'> - Ph_j s_j^- + Ph_{j-1} s_{j-1}^+) = 0
/// -<Q,v'> + Qh_j v_j^- - Qh_{j-1} v_{j-1}^+
///   + <aP,v'> - a_j Pt_j v_j^- + a_{j-1} Pt_{j-1} v_{j-1}^+
///   - <bU,v'> + bU_j v_j^- - bU_{j-1} v_{j-1}^+ + <(c - b')U, v> = <f, v>
/// ```
pub fn assemble(problem: &Problem, mesh: &Arc<Mesh>, degree: usize, quad: &Quadrature) -> Result<BlockSystem> {
    if quad.exactness() < 2 * degree {
        return Err(LdgError::Mismatch(format!(
            "{}-point quadrature cannot integrate degree-{degree} mass matrices",
            quad.len()
        )));
    }
    let n = mesh.n_elements();
    let layout = DofLayout { n_elements: n, degree };
    let modes = layout.modes();
    let band = 2 * layout.block() - 1;
    let mut a = BandedMatrix::zeros(layout.len(), band, band);
    let mut rhs = vec![0.0; layout.len()];
    let table = BasisTable::new(degree, &quad.nodes);
    let eps = problem.eps;

    let sq = |e: usize| (2.0 / mesh.widths()[e]).sqrt();
    let right = |e: usize, m: usize| sq(e) * right_end_value(m);
    let left = |e: usize, m: usize| sq(e) * left_end_value(m);
    let idx = |e: usize, v: Var, m: usize| layout.index(e, v, m);

    for e in 0..n {
        let mats = element_matrices(problem, mesh, e, &table, quad);
        let has_prev = e > 0;
        let has_next = e + 1 < n;
        let a_left = (problem.a)(mesh.node_coord(e));
        let a_right = (problem.a)(mesh.node_coord(e + 1));
        let (bp_left, bm_left) = upwind_split((problem.b)(mesh.node_coord(e)));
        let (bp_right, bm_right) = upwind_split((problem.b)(mesh.node_coord(e + 1)));

        for m in 0..modes {
            // p = u'
            let row = idx(e, Var::P, m);
            a.add(row, idx(e, Var::P, m), 1.0);
            for k in 0..modes {
                a.add(row, idx(e, Var::U, k), mats.stiff[k][m]);
                if has_next {
                    a.add(row, idx(e, Var::U, k), -right(e, k) * right(e, m));
                }
                if has_prev {
                    a.add(row, idx(e - 1, Var::U, k), right(e - 1, k) * left(e, m));
                }
            }

            // q = eps p'
            let row = idx(e, Var::Q, m);
            a.add(row, idx(e, Var::Q, m), 1.0);
            for k in 0..modes {
                let mut own = eps * mats.stiff[k][m];
                own += eps * left(e, k) * left(e, m);
                a.add(row, idx(e, Var::P, k), own);
                if has_next {
                    a.add(row, idx(e + 1, Var::P, k), -eps * left(e + 1, k) * right(e, m));
                }
            }

            // balance law
            let row = idx(e, Var::U, m);
            rhs[row] = mats.load[m];
            for k in 0..modes {
                let (vr, vl) = (right(e, m), left(e, m));
                // Q terms
                a.add(row, idx(e, Var::Q, k), -mats.stiff[k][m] - left(e, k) * vl);
                if has_next {
                    a.add(row, idx(e + 1, Var::Q, k), left(e + 1, k) * vr);
                } else {
                    a.add(row, idx(e, Var::Q, k), right(e, k) * vr);
                }
                // a P terms
                a.add(row, idx(e, Var::P, k), mats.stiff_a[k][m] + a_left * left(e, k) * vl);
                if has_next {
                    a.add(row, idx(e + 1, Var::P, k), -a_right * left(e + 1, k) * vr);
                } else {
                    a.add(row, idx(e, Var::P, k), -a_right * right(e, k) * vr);
                }
                // b U and (c - b') U terms
                let mut own = mats.mass_cb[k][m] - mats.stiff_b[k][m];
                own += bp_right * right(e, k) * vr;
                own -= bm_left * left(e, k) * vl;
                a.add(row, idx(e, Var::U, k), own);
                if has_next {
                    a.add(row, idx(e + 1, Var::U, k), bm_right * left(e + 1, k) * vr);
                }
                if has_prev {
                    a.add(row, idx(e - 1, Var::U, k), -bp_left * right(e - 1, k) * vl);
                }
            }
        }
    }
    Ok(BlockSystem { mesh: mesh.clone(), layout, matrix: a, rhs })
}

/// Diagnostics of one direct solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveInfo {
    /// `||A x - b||_inf`
    pub residual_inf: f64,
    pub rhs_inf: f64,
    /// `||A x - b|| / (||A|| ||x|| + ||b||)`, all infinity norms.
    pub backward_error: f64,
    /// `max |U| / max |A|` of the LU factors.
    pub growth_factor: f64,
}

impl SolveInfo {
    /// Residual relative to `||b||`. Entries grow like `1/h` on the finest
    /// elements, so this can exceed `1e-10` at tiny `eps` even when the
    /// backward error is at round-off level.
    pub fn relative_residual(&self) -> f64 {
        if self.rhs_inf > 0.0 {
            self.residual_inf / self.rhs_inf
        } else {
            self.residual_inf
        }
    }
}

/// Discrete approximation `(U, P, Q)` of `(u, u', eps u'')`.
#[derive(Debug, Clone)]
pub struct LdgSolution {
    pub u: PiecewisePoly,
    pub p: PiecewisePoly,
    pub q: PiecewisePoly,
    pub info: SolveInfo,
}

impl LdgSolution {
    pub fn mesh(&self) -> &Arc<Mesh> {
        self.u.mesh()
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    /// Packs `(U, P, Q)` back into the global unknown vector.
    pub fn to_vector(&self) -> Vec<f64> {
        let layout = DofLayout { n_elements: self.mesh().n_elements(), degree: self.degree() };
        let mut x = vec![0.0; layout.len()];
        for e in 0..layout.n_elements {
            for m in 0..layout.modes() {
                x[layout.index(e, Var::U, m)] = self.u.element_coeffs(e)[m];
                x[layout.index(e, Var::P, m)] = self.p.element_coeffs(e)[m];
                x[layout.index(e, Var::Q, m)] = self.q.element_coeffs(e)[m];
            }
        }
        x
    }
}

pub fn solve(system: &BlockSystem) -> Result<LdgSolution> {
    let lu = system.matrix.factor()?;
    let x = lu.solve(&system.rhs)?;
    let ax = system.matrix.matvec(&x);
    let residual_inf = ax.iter().zip(&system.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let rhs_inf = system.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let x_inf = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let denom = system.matrix.norm_inf() * x_inf + rhs_inf;
    let backward_error = if denom > 0.0 { residual_inf / denom } else { 0.0 };

    let layout = system.layout;
    let mesh = system.mesh.clone();
    let mut u = PiecewisePoly::zeros(mesh.clone(), layout.degree);
    let mut p = PiecewisePoly::zeros(mesh.clone(), layout.degree);
    let mut q = PiecewisePoly::zeros(mesh, layout.degree);
    for e in 0..layout.n_elements {
        for m in 0..layout.modes() {
            u.element_coeffs_mut(e)[m] = x[layout.index(e, Var::U, m)];
            p.element_coeffs_mut(e)[m] = x[layout.index(e, Var::P, m)];
            q.element_coeffs_mut(e)[m] = x[layout.index(e, Var::Q, m)];
        }
    }
    Ok(LdgSolution {
        u,
        p,
        q,
        info: SolveInfo { residual_inf, rhs_inf, backward_error, growth_factor: lu.growth_factor() },
    })
}

/// Assembles and solves in one step.
pub fn solve_problem(problem: &Problem, mesh: &Arc<Mesh>, degree: usize, quad: &Quadrature) -> Result<LdgSolution> {
    solve(&assemble(problem, mesh, degree, quad)?)
}
