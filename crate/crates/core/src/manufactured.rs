//! Test problems with known exact solutions.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::mesh::Coord;
use crate::problem::{Problem, ScalarFn};

#[derive(Clone)]
pub struct TestCase {
    pub name: String,
    pub eps: f64,
    pub problem: Problem,
    pub exact_u: ScalarFn,
    /// `u'`
    pub exact_p: ScalarFn,
    /// `eps u''`
    pub exact_q: ScalarFn,
}

impl std::fmt::Debug for TestCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestCase").field("name", &self.name).field("eps", &self.eps).finish_non_exhaustive()
    }
}

/// Coefficients of the smooth part of the layer solution with `a = b = c = 1`:
///
/// ```text
/// u(x) = -eps E + A sin(pi x/2) + eps exp(-(1-x)/eps) + x(1-x) + B sin^2(pi x/2),
/// E = exp(-1/eps), A = 1 - 2 eps + 2 eps E, B = eps - eps E - 1.
/// ```
#[derive(Debug, Clone, Copy)]
struct LayerSolution {
    eps: f64,
    e: f64,
    a: f64,
    b: f64,
}

impl LayerSolution {
    fn new(eps: f64) -> Self {
        // exp(-1/eps) underflows to 0 for eps below ~1.4e-3; every term is additive
        let e = (-1.0 / eps).exp();
        LayerSolution { eps, e, a: 1.0 - 2.0 * eps + 2.0 * eps * e, b: eps - eps * e - 1.0 }
    }

    fn layer(&self, c: Coord) -> f64 {
        (-c.one_minus_x / self.eps).exp()
    }

    fn u(&self, c: Coord) -> f64 {
        let (x, w) = (c.x, PI / 2.0);
        let s = (w * x).sin();
        -self.eps * self.e + self.a * s + self.eps * self.layer(c) + x * c.one_minus_x + self.b * s * s
    }

    fn p(&self, c: Coord) -> f64 {
        let (x, w) = (c.x, PI / 2.0);
        self.a * w * (w * x).cos() + self.layer(c) + 1.0 - 2.0 * x + self.b * w * (PI * x).sin()
    }

    /// `eps u''`
    fn q(&self, c: Coord) -> f64 {
        let (x, w) = (c.x, PI / 2.0);
        let smooth = -self.a * w * w * (w * x).sin() - 2.0 + self.b * (PI * PI / 2.0) * (PI * x).cos();
        self.eps * smooth + self.layer(c)
    }

    /// `eps u''' - u'' + u' + u` with the `1/eps` layer terms cancelled by hand.
    fn f(&self, c: Coord) -> f64 {
        let (x, w) = (c.x, PI / 2.0);
        let (s, co) = ((w * x).sin(), (w * x).cos());
        let (s2, c2) = ((PI * x).sin(), (PI * x).cos());
        let d3 = -self.a * w * w * w * co - self.b * (PI * PI * PI / 2.0) * s2;
        let d2 = -self.a * w * w * s - 2.0 + self.b * (PI * PI / 2.0) * c2;
        let d1 = self.a * w * co + 1.0 - 2.0 * x + self.b * w * s2;
        let d0 = -self.eps * self.e + self.a * s + x * c.one_minus_x + self.b * s * s;
        self.eps * d3 - d2 + d1 + d0 + (1.0 + self.eps) * self.layer(c)
    }
}

/// Problem with `a = b = c = 1` whose exact solution has a weak layer at
/// `x = 1` of amplitude `eps`.
pub fn layer_case(eps: f64) -> TestCase {
    let sol = LayerSolution::new(eps);
    let f: ScalarFn = Arc::new(move |c| sol.f(c));
    TestCase {
        name: format!("layer eps={eps:e}"),
        eps,
        problem: Problem::constant_coefficients(eps, 1.0, 1.0, 1.0, f),
        exact_u: Arc::new(move |c| sol.u(c)),
        exact_p: Arc::new(move |c| sol.p(c)),
        exact_q: Arc::new(move |c| sol.q(c)),
    }
}

/// Cubic `u = x (1 - x)^2` with `a = b = c = 1`; lies in every space with
/// `k >= 3`, so the scheme must reproduce it exactly.
pub fn polynomial_case(eps: f64) -> TestCase {
    let f: ScalarFn = Arc::new(move |c: Coord| {
        let x = c.x;
        6.0 * eps + 5.0 - 9.0 * x + x * x + x * x * x
    });
    TestCase {
        name: format!("cubic eps={eps:e}"),
        eps,
        problem: Problem::constant_coefficients(eps, 1.0, 1.0, 1.0, f),
        exact_u: Arc::new(|c: Coord| c.x * c.one_minus_x * c.one_minus_x),
        exact_p: Arc::new(|c: Coord| 1.0 - 4.0 * c.x + 3.0 * c.x * c.x),
        exact_q: Arc::new(move |c: Coord| eps * (-4.0 + 6.0 * c.x)),
    }
}
