//! L2-orthonormal Legendre basis on the reference element [-1, 1].
//!
//! On a physical element of width `h` the basis is `sqrt(2/h) * phi_m(xi)`,
//! orthonormal in `L2(I_j)`.

/// Values and derivatives of `phi_0..=phi_k` at `xi`, where
/// `phi_m = sqrt((2m+1)/2) P_m`.
pub fn orthonormal_legendre(k: usize, xi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; k + 1];
    let mut dp = vec![0.0; k + 1];
    p[0] = 1.0;
    if k >= 1 {
        p[1] = xi;
        dp[1] = 1.0;
    }
    for m in 1..k {
        let mf = m as f64;
        p[m + 1] = ((2.0 * mf + 1.0) * xi * p[m] - mf * p[m - 1]) / (mf + 1.0);
        dp[m + 1] = dp[m - 1] + (2.0 * mf + 1.0) * p[m];
    }
    for m in 0..=k {
        let s = ((2 * m + 1) as f64 / 2.0).sqrt();
        p[m] *= s;
        dp[m] *= s;
    }
    (p, dp)
}

/// `phi_m(1)`
pub fn right_end_value(m: usize) -> f64 {
    ((2 * m + 1) as f64 / 2.0).sqrt()
}

/// `phi_m(-1)`
pub fn left_end_value(m: usize) -> f64 {
    let v = right_end_value(m);
    if m.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Reference basis tabulated at quadrature nodes.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub degree: usize,
    /// `values[q][m] = phi_m(xi_q)`
    pub values: Vec<Vec<f64>>,
    /// `derivs[q][m] = phi_m'(xi_q)` (reference derivative)
    pub derivs: Vec<Vec<f64>>,
}

impl BasisTable {
    pub fn new(degree: usize, nodes: &[f64]) -> Self {
        let (values, derivs) = nodes.iter().map(|&xi| orthonormal_legendre(degree, xi)).unzip();
        BasisTable { degree, values, derivs }
    }
}
