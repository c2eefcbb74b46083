use std::sync::Arc;

use super::basis::{left_end_value, orthonormal_legendre, right_end_value};
use crate::error::{LdgError, Result};
use crate::mesh::{Coord, Mesh};

/// Which one-sided limit at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `v_j^-`, the limit from element `I_j` (left of the node).
    Minus,
    /// `v_j^+`, the limit from element `I_{j+1}` (right of the node).
    Plus,
}

/// A function that can be sampled element by element, with one-sided
/// traces at element ends. Elements are 0-based: element `e` is `I_{e+1}`.
pub trait ElementField {
    fn value(&self, e: usize, xi: f64) -> f64;
    /// Trace at the left end of element `e`, i.e. `v_e^+`.
    fn left_trace(&self, e: usize) -> f64;
    /// Trace at the right end of element `e`, i.e. `v_{e+1}^-`.
    fn right_trace(&self, e: usize) -> f64;
}

/// Jump `[v]_j` with `[v]_0 = v_0^+` and `[v]_N = -v_N^-`.
pub fn jump<F: ElementField + ?Sized>(v: &F, j: usize, n: usize) -> f64 {
    if j == 0 {
        v.left_trace(0)
    } else if j == n {
        -v.right_trace(n - 1)
    } else {
        v.left_trace(j) - v.right_trace(j - 1)
    }
}

/// Discontinuous piecewise polynomial of degree `k` in the element-wise
/// orthonormal Legendre basis.
#[derive(Debug, Clone)]
pub struct PiecewisePoly {
    mesh: Arc<Mesh>,
    degree: usize,
    coeffs: Vec<f64>,
}

impl PiecewisePoly {
    pub fn zeros(mesh: Arc<Mesh>, degree: usize) -> Self {
        let len = mesh.n_elements() * (degree + 1);
        PiecewisePoly { mesh, degree, coeffs: vec![0.0; len] }
    }

    pub fn from_coeffs(mesh: Arc<Mesh>, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expect = mesh.n_elements() * (degree + 1);
        if coeffs.len() != expect {
            return Err(LdgError::Mismatch(format!("expected {expect} coefficients, got {}", coeffs.len())));
        }
        Ok(PiecewisePoly { mesh, degree, coeffs })
    }

    /// Single basis function: mode `m` on element `e`, zero elsewhere.
    pub fn basis_function(mesh: Arc<Mesh>, degree: usize, e: usize, m: usize) -> Self {
        let mut v = PiecewisePoly::zeros(mesh, degree);
        v.coeffs[e * (degree + 1) + m] = 1.0;
        v
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn element_coeffs(&self, e: usize) -> &[f64] {
        let m = self.degree + 1;
        &self.coeffs[e * m..(e + 1) * m]
    }

    pub fn element_coeffs_mut(&mut self, e: usize) -> &mut [f64] {
        let m = self.degree + 1;
        &mut self.coeffs[e * m..(e + 1) * m]
    }

    fn scale(&self, e: usize) -> f64 {
        (2.0 / self.mesh.widths()[e]).sqrt()
    }

    /// Physical derivative on element `e` at reference point `xi`.
    pub fn derivative(&self, e: usize, xi: f64) -> f64 {
        let (_, d) = orthonormal_legendre(self.degree, xi);
        let h = self.mesh.widths()[e];
        let s: f64 = self.element_coeffs(e).iter().zip(&d).map(|(c, d)| c * d).sum();
        s * self.scale(e) * 2.0 / h
    }

    /// One-sided trace at node `j`.
    pub fn trace(&self, j: usize, side: Side) -> Result<f64> {
        let n = self.mesh.n_elements();
        match side {
            Side::Minus if (1..=n).contains(&j) => Ok(self.right_trace(j - 1)),
            Side::Plus if j < n => Ok(self.left_trace(j)),
            _ => Err(LdgError::InvalidArgument(format!("trace {side:?} undefined at node {j} of {n}"))),
        }
    }

    pub fn jump(&self, j: usize) -> f64 {
        jump(self, j, self.mesh.n_elements())
    }

    pub fn element_l2_norm(&self, e: usize) -> f64 {
        self.element_coeffs(e).iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Value at a physical point (right-continuous at interior nodes).
    pub fn eval_at(&self, x: f64) -> Option<f64> {
        let e = self.mesh.locate(x)?;
        let h = self.mesh.widths()[e];
        let xi = (2.0 * (x - self.mesh.nodes()[e]) / h - 1.0).clamp(-1.0, 1.0);
        Some(self.value(e, xi))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// `self + factor * other`; both must share mesh and degree.
    pub fn axpy(&self, factor: f64, other: &PiecewisePoly) -> Result<Self> {
        if self.degree != other.degree || !Arc::ptr_eq(&self.mesh, &other.mesh) && *self.mesh != *other.mesh {
            return Err(LdgError::Mismatch("piecewise polynomials live on different spaces".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + factor * b).collect();
        Ok(PiecewisePoly { mesh: self.mesh.clone(), degree: self.degree, coeffs })
    }
}

impl ElementField for PiecewisePoly {
    fn value(&self, e: usize, xi: f64) -> f64 {
        let (v, _) = orthonormal_legendre(self.degree, xi);
        let s: f64 = self.element_coeffs(e).iter().zip(&v).map(|(c, v)| c * v).sum();
        s * self.scale(e)
    }

    fn left_trace(&self, e: usize) -> f64 {
        let s: f64 = self.element_coeffs(e).iter().enumerate().map(|(m, c)| c * left_end_value(m)).sum();
        s * self.scale(e)
    }

    fn right_trace(&self, e: usize) -> f64 {
        let s: f64 = self.element_coeffs(e).iter().enumerate().map(|(m, c)| c * right_end_value(m)).sum();
        s * self.scale(e)
    }
}

/// A continuous function viewed element-wise on a mesh.
pub struct ExactField<'a, F: Fn(Coord) -> f64 + ?Sized> {
    pub mesh: &'a Mesh,
    pub f: &'a F,
}

impl<'a, F: Fn(Coord) -> f64 + ?Sized> ExactField<'a, F> {
    pub fn new(mesh: &'a Mesh, f: &'a F) -> Self {
        ExactField { mesh, f }
    }
}

impl<F: Fn(Coord) -> f64 + ?Sized> ElementField for ExactField<'_, F> {
    fn value(&self, e: usize, xi: f64) -> f64 {
        (self.f)(self.mesh.element_coord(e, xi))
    }

    fn left_trace(&self, e: usize) -> f64 {
        (self.f)(self.mesh.node_coord(e))
    }

    fn right_trace(&self, e: usize) -> f64 {
        (self.f)(self.mesh.node_coord(e + 1))
    }
}

/// Pointwise difference `a - b` of two element fields.
pub struct Difference<'a, A: ?Sized, B: ?Sized> {
    pub a: &'a A,
    pub b: &'a B,
}

impl<A: ElementField + ?Sized, B: ElementField + ?Sized> ElementField for Difference<'_, A, B> {
    fn value(&self, e: usize, xi: f64) -> f64 {
        self.a.value(e, xi) - self.b.value(e, xi)
    }

    fn left_trace(&self, e: usize) -> f64 {
        self.a.left_trace(e) - self.b.left_trace(e)
    }

    fn right_trace(&self, e: usize) -> f64 {
        self.a.right_trace(e) - self.b.right_trace(e)
    }
}
