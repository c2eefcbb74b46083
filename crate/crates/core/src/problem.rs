use std::fmt;
use std::sync::Arc;

use crate::error::{LdgError, Result};
use crate::mesh::Coord;

/// Shared scalar function of a point in [0, 1].
pub type ScalarFn = Arc<dyn Fn(Coord) -> f64 + Send + Sync>;

pub fn constant(value: f64) -> ScalarFn {
    Arc::new(move |_| value)
}

/// `eps u''' - (a u')' + b u' + c u = f` with `u(0) = u(1) = u'(1) = 0`.
///
/// `alpha` and `gamma` are the lower bounds `a >= alpha` and
/// `c - b'/2 >= gamma`; `bprime` must be the derivative of `b`.
#[derive(Clone)]
pub struct Problem {
    pub eps: f64,
    pub a: ScalarFn,
    pub b: ScalarFn,
    pub bprime: ScalarFn,
    pub c: ScalarFn,
    pub f: ScalarFn,
    pub alpha: f64,
    pub gamma: f64,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("eps", &self.eps)
            .field("alpha", &self.alpha)
            .field("gamma", &self.gamma)
            .finish_non_exhaustive()
    }
}

impl Problem {
    /// Constant coefficients `a, b, c` with forcing `f`; `alpha = a` and
    /// `gamma = c`.
    pub fn constant_coefficients(eps: f64, a: f64, b: f64, c: f64, f: ScalarFn) -> Self {
        Problem { eps, a: constant(a), b: constant(b), bprime: constant(0.0), c: constant(c), f, alpha: a, gamma: c }
    }

    pub fn with_forcing(&self, f: ScalarFn) -> Self {
        Problem { f, ..self.clone() }
    }

    /// Samples the coefficient bounds on a dense grid and spot-checks `b'`
    /// against central differences of `b`.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(LdgError::InvalidArgument(format!("eps = {} outside (0, 1)", self.eps)));
        }
        if !(self.alpha > 0.0 && self.gamma > 0.0) {
            return Err(LdgError::InvalidArgument("alpha and gamma must be positive".into()));
        }
        const SAMPLES: usize = 2001;
        for i in 0..SAMPLES {
            let x = Coord::from_x(i as f64 / (SAMPLES - 1) as f64);
            let a = (self.a)(x);
            if a < self.alpha {
                return Err(LdgError::InvalidArgument(format!("a({}) = {a} below alpha = {}", x.x, self.alpha)));
            }
            let g = (self.c)(x) - 0.5 * (self.bprime)(x);
            if g < self.gamma {
                return Err(LdgError::InvalidArgument(format!(
                    "c - b'/2 = {g} at x = {} below gamma = {}",
                    x.x, self.gamma
                )));
            }
        }
        let h = 1e-5;
        for i in 1..20 {
            let x = i as f64 / 20.0 + 0.013;
            let fd = ((self.b)(Coord::from_x(x + h)) - (self.b)(Coord::from_x(x - h))) / (2.0 * h);
            let exact = (self.bprime)(Coord::from_x(x));
            let scale = fd.abs().max(exact.abs()).max(1.0);
            if (fd - exact).abs() > 1e-6 * scale {
                return Err(LdgError::InvalidArgument(format!(
                    "b' inconsistent with b at x = {x}: {exact} vs difference quotient {fd}"
                )));
            }
        }
        Ok(())
    }
}
