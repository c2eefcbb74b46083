//! Local Gauss-Radau projections.
//!
//! On each element the projection matches the first `k` moments of `f`
//! (all test polynomials of degree `k - 1`) and collocates `f` at one end:
//! the right end for [`ProjectionSign::Minus`], the left end for
//! [`ProjectionSign::Plus`]. In the orthonormal basis the moment rows are
//! the identity, so the local `(k+1) x (k+1)` system reduces to the first
//! `k` coefficients plus one collocation equation for the last.

use std::sync::Arc;

use super::basis::{left_end_value, right_end_value, BasisTable};
use super::piecewise::PiecewisePoly;
use super::quadrature::Quadrature;
use crate::error::{LdgError, Result};
use crate::mesh::{Coord, Mesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSign {
    /// `pi^-`: collocates at the right end of each element.
    Minus,
    /// `pi^+`: collocates at the left end of each element.
    Plus,
}

pub fn project_gauss_radau<F>(
    sign: ProjectionSign,
    f: &F,
    mesh: &Arc<Mesh>,
    k: usize,
    quad: &Quadrature,
) -> Result<PiecewisePoly>
where
    F: Fn(Coord) -> f64 + ?Sized,
{
    let table = BasisTable::new(k, &quad.nodes);
    let mut out = PiecewisePoly::zeros(mesh.clone(), k);
    for e in 0..mesh.n_elements() {
        let h = mesh.widths()[e];
        let coeffs = out.element_coeffs_mut(e);
        // moments against phi_0..phi_{k-1}
        for (q, (&xi, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
            let fv = f(mesh.element_coord(e, xi)) * w;
            for m in 0..k {
                coeffs[m] += fv * table.values[q][m];
            }
        }
        let scale = (h / 2.0).sqrt();
        coeffs[..k].iter_mut().for_each(|c| *c *= scale);

        let (target, end_value): (f64, fn(usize) -> f64) = match sign {
            ProjectionSign::Minus => (f(mesh.node_coord(e + 1)), right_end_value),
            ProjectionSign::Plus => (f(mesh.node_coord(e)), left_end_value),
        };
        let basis_scale = (2.0 / h).sqrt();
        let partial: f64 = (0..k).map(|m| coeffs[m] * end_value(m) * basis_scale).sum();
        let pivot = end_value(k) * basis_scale;
        if !(pivot.abs() > 0.0) || !pivot.is_finite() {
            return Err(LdgError::SingularPivot { column: e });
        }
        coeffs[k] = (target - partial) / pivot;
    }
    Ok(out)
}

/// How far a projection is from its defining conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProjectionResiduals {
    /// `max |<f - pi f, phi_m>_{I_j}|` over elements and `m < k`
    pub moment: f64,
    /// `max |(pi f - f)|` at the collocation end of each element
    pub collocation: f64,
}

pub fn projection_residuals<F>(
    sign: ProjectionSign,
    f: &F,
    proj: &PiecewisePoly,
    quad: &Quadrature,
) -> ProjectionResiduals
where
    F: Fn(Coord) -> f64 + ?Sized,
{
    use super::piecewise::ElementField;
    let mesh = proj.mesh();
    let k = proj.degree();
    let table = BasisTable::new(k, &quad.nodes);
    let mut out = ProjectionResiduals::default();
    for e in 0..mesh.n_elements() {
        let scale = (mesh.widths()[e] / 2.0).sqrt();
        for m in 0..k {
            let moment: f64 = quad
                .nodes
                .iter()
                .zip(&quad.weights)
                .enumerate()
                .map(|(q, (&xi, &w))| w * (f(mesh.element_coord(e, xi)) - proj.value(e, xi)) * table.values[q][m])
                .sum();
            out.moment = out.moment.max((moment * scale).abs());
        }
        let gap = match sign {
            ProjectionSign::Minus => proj.right_trace(e) - f(mesh.node_coord(e + 1)),
            ProjectionSign::Plus => proj.left_trace(e) - f(mesh.node_coord(e)),
        };
        out.collocation = out.collocation.max(gap.abs());
    }
    out
}

/// Plain L2 projection onto piecewise polynomials of degree `k`.
pub fn project_l2<F>(f: &F, mesh: &Arc<Mesh>, k: usize, quad: &Quadrature) -> PiecewisePoly
where
    F: Fn(Coord) -> f64 + ?Sized,
{
    let table = BasisTable::new(k, &quad.nodes);
    let mut out = PiecewisePoly::zeros(mesh.clone(), k);
    for e in 0..mesh.n_elements() {
        let scale = (mesh.widths()[e] / 2.0).sqrt();
        let coeffs = out.element_coeffs_mut(e);
        for (q, (&xi, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
            let fv = f(mesh.element_coord(e, xi)) * w * scale;
            for (m, c) in coeffs.iter_mut().enumerate() {
                *c += fv * table.values[q][m];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{MeshKind, MeshSpec};
    use crate::poly::{gauss_quadrature, ElementField};

    #[test]
    fn x_squared_linear_minus_on_unit_element() {
        // brute force: r = a + b x with int_0^1 r = 1/3 and r(1) = 1
        // => a + b/2 = 1/3, a + b = 1 => b = 4/3, a = -1/3
        let mesh = Arc::new(Mesh::uniform(1).unwrap());
        let q = gauss_quadrature(4).unwrap();
        let r = project_gauss_radau(ProjectionSign::Minus, &|c: Coord| c.x * c.x, &mesh, 1, &q).unwrap();
        for &x in &[0.0, 0.25, 0.6, 1.0] {
            let got = r.eval_at(x).unwrap();
            assert!((got - (-1.0 / 3.0 + 4.0 / 3.0 * x)).abs() < 1e-14, "x = {x}: {got}");
        }
        // pi^+ collocates at 0: a = 0, a + b/2 = 1/3
        let r = project_gauss_radau(ProjectionSign::Plus, &|c: Coord| c.x * c.x, &mesh, 1, &q).unwrap();
        assert!((r.eval_at(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.left_trace(0).abs() < 1e-15);
    }

    #[test]
    fn reproduces_polynomials() {
        let spec = MeshSpec::new(MeshKind::Shishkin, 16, 1e-4, 4.5, 1.0).unwrap();
        let mesh = Arc::new(Mesh::build(&spec).unwrap());
        let q = gauss_quadrature(8).unwrap();
        let cubic = |c: Coord| 0.3 - 2.0 * c.x + c.x.powi(3);
        for sign in [ProjectionSign::Minus, ProjectionSign::Plus] {
            let p = project_gauss_radau(sign, &cubic, &mesh, 3, &q).unwrap();
            for e in 0..16 {
                for &xi in &[-1.0, -0.4, 0.2, 1.0] {
                    let c = mesh.element_coord(e, xi);
                    assert!((p.value(e, xi) - cubic(c)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn k_zero_is_endpoint_interpolation() {
        let mesh = Arc::new(Mesh::uniform(4).unwrap());
        let q = gauss_quadrature(3).unwrap();
        let f = |c: Coord| c.x.exp();
        let m = project_gauss_radau(ProjectionSign::Minus, &f, &mesh, 0, &q).unwrap();
        let p = project_gauss_radau(ProjectionSign::Plus, &f, &mesh, 0, &q).unwrap();
        for e in 0..4 {
            assert!((m.value(e, 0.0) - mesh.nodes()[e + 1].exp()).abs() < 1e-14);
            assert!((p.value(e, 0.0) - mesh.nodes()[e].exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn l2_projection_of_polynomial_is_exact() {
        let mesh = Arc::new(Mesh::uniform(3).unwrap());
        let q = gauss_quadrature(4).unwrap();
        let f = |c: Coord| 1.0 + c.x * c.x;
        let p = project_l2(&f, &mesh, 2, &q);
        assert!((p.eval_at(0.4).unwrap() - 1.16).abs() < 1e-14);
    }
}
