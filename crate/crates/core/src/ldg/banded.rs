//! Banded LU factorization with partial (row) pivoting.
//!
//! Column-major band storage in the LAPACK `gbtrf` layout: entry `(i, j)`
//! lives at `ab[(kl + ku + i - j) + j * ldab]` with `ldab = 2 kl + ku + 1`,
//! leaving `kl` extra superdiagonals for pivoting fill-in.

use crate::error::{LdgError, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, ldab, ab: vec![0.0; ldab * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// True if `(i, j)` lies inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        self.kl + self.ku + i - j + j * self.ldab
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.ab[self.index(i, j)]
        } else {
            0.0
        }
    }

    /// Adds `v` to entry `(i, j)`; panics outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let idx = self.index(i, j);
        self.ab[idx] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, yi) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *yi += self.ab[self.index(i, j)] * x[j];
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for i in lo..=hi {
                m = m.max(self.ab[self.index(i, j)].abs());
            }
        }
        m
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, r) in rows.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *r += self.ab[self.index(i, j)].abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Nonzero entries `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = self.ab[self.index(i, j)];
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn factor(&self) -> Result<BandedLu> {
        let mut lu = self.clone();
        let n = lu.n;
        let (kl, ku) = (lu.kl, lu.ku);
        let mut pivots = vec![0usize; n];
        let mut max_u = 0.0f64;
        for c in 0..n {
            let last_row = (c + kl).min(n - 1);
            let mut p = c;
            let mut best = lu.ab[lu.index(c, c)].abs();
            for r in c + 1..=last_row {
                let v = lu.ab[lu.index(r, c)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > 0.0) || !best.is_finite() {
                return Err(LdgError::SingularPivot { column: c });
            }
            pivots[c] = p;
            let last_col = (c + kl + ku).min(n - 1);
            if p != c {
                for j in c..=last_col {
                    let (a, b) = (lu.index(c, j), lu.index(p, j));
                    lu.ab.swap(a, b);
                }
            }
            let pivot = lu.ab[lu.index(c, c)];
            for r in c + 1..=last_row {
                let ir = lu.index(r, c);
                let l = lu.ab[ir] / pivot;
                lu.ab[ir] = l;
                if l == 0.0 {
                    continue;
                }
                for j in c + 1..=last_col {
                    let u = lu.ab[lu.index(c, j)];
                    let idx = lu.index(r, j);
                    lu.ab[idx] -= l * u;
                }
            }
            for j in c..=last_col {
                max_u = max_u.max(lu.ab[lu.index(c, j)].abs());
            }
        }
        let max_a = self.max_abs();
        let growth = if max_a > 0.0 { max_u / max_a } else { 1.0 };
        Ok(BandedLu { lu, pivots, growth })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: BandedMatrix,
    pivots: Vec<usize>,
    growth: f64,
}

impl BandedLu {
    /// `max |U| / max |A|`
    pub fn growth_factor(&self) -> f64 {
        self.growth
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let m = &self.lu;
        let n = m.n;
        if rhs.len() != n {
            return Err(LdgError::Mismatch(format!("rhs has length {}, matrix is {n}x{n}", rhs.len())));
        }
        let mut x = rhs.to_vec();
        for c in 0..n {
            let p = self.pivots[c];
            if p != c {
                x.swap(c, p);
            }
            let xc = x[c];
            if xc != 0.0 {
                for r in c + 1..=(c + m.kl).min(n - 1) {
                    x[r] -= m.ab[m.index(r, c)] * xc;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + m.kl + m.ku).min(n - 1) {
                s -= m.ab[m.index(i, j)] * x[j];
            }
            x[i] = s / m.ab[m.index(i, i)];
        }
        Ok(x)
    }
}
