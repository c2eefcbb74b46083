use crate::error::{LdgError, Result};

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Number of equal sub-intervals the rule is repeated on.
    pub pieces: usize,
}

pub const MAX_POINTS: usize = 64;

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * (self.len() / self.pieces) - 1
    }

    /// The same rule repeated on `pieces` equal sub-intervals of `[-1, 1]`,
    /// for integrands with sharp layers inside an element.
    pub fn composite(&self, pieces: usize) -> Quadrature {
        let pieces = pieces.max(1);
        let width = 2.0 / pieces as f64;
        let mut nodes = Vec::with_capacity(pieces * self.len());
        let mut weights = Vec::with_capacity(pieces * self.len());
        for i in 0..pieces {
            let left = -1.0 + i as f64 * width;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                nodes.push(left + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Quadrature { nodes, weights, pieces: pieces * self.pieces }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 1..n {
        let m = m as f64;
        let p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn gauss_quadrature(n: usize) -> Result<Quadrature> {
    if n == 0 || n > MAX_POINTS {
        return Err(LdgError::InvalidArgument(format!("quadrature size {n} outside 1..={MAX_POINTS}")));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // roots of P_n, largest first, refined by Newton
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Quadrature { nodes, weights, pieces: 1 })
}
