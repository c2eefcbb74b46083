//! Layer-adapted meshes on [0, 1] with a boundary layer at x = 1.
//!
//! The coarse part `[0, 1 - tau]` holds N/2 equal elements; the fine part
//! `[1 - tau, 1]` holds N/2 elements graded by a mesh-generating function
//! `phi`. Fine nodes are stored as offsets `d_i = 1 - x_i` computed directly
//! from `phi`, so widths near `x = 1` keep full relative accuracy even when
//! `eps` is far below the spacing of doubles around 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{LdgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeshKind {
    Shishkin,
    BakhvalovShishkin,
    Bakhvalov,
}

impl MeshKind {
    pub const ALL: [MeshKind; 3] = [MeshKind::Shishkin, MeshKind::BakhvalovShishkin, MeshKind::Bakhvalov];

    /// Short label used in tables: `S`, `BS`, `B`.
    pub fn label(self) -> &'static str {
        match self {
            MeshKind::Shishkin => "S",
            MeshKind::BakhvalovShishkin => "BS",
            MeshKind::Bakhvalov => "B",
        }
    }

    /// Argument of the logarithm for the two Bakhvalov-type kinds,
    /// `1 - 2 (1 - delta) t` evaluated as `(1 - 2t) + 2 delta t`.
    fn log_argument(self, t: f64, n: usize, eps: f64) -> f64 {
        let delta = match self {
            MeshKind::Shishkin => return f64::NAN,
            MeshKind::BakhvalovShishkin => 1.0 / n as f64,
            MeshKind::Bakhvalov => eps,
        };
        (1.0 - 2.0 * t) + 2.0 * delta * t
    }

    /// Mesh-characterizing function `psi = exp(-phi)`.
    pub fn psi(self, t: f64, n: usize, eps: f64) -> f64 {
        match self {
            MeshKind::Shishkin => (n as f64).powf(-2.0 * t),
            _ => self.log_argument(t, n, eps),
        }
    }

    pub fn min_phi_prime(self, n: usize, eps: f64) -> f64 {
        let nf = n as f64;
        match self {
            MeshKind::Shishkin => 2.0 * nf.ln(),
            MeshKind::BakhvalovShishkin => 2.0 * (1.0 - 1.0 / nf),
            MeshKind::Bakhvalov => 2.0 * (1.0 - eps),
        }
    }

    /// Maximum of `phi'` over `[0, 1/2]`, attained at `t = 1/2` for the
    /// Bakhvalov-type kinds.
    pub fn max_phi_prime(self, n: usize, eps: f64) -> f64 {
        let nf = n as f64;
        match self {
            MeshKind::Shishkin => 2.0 * nf.ln(),
            MeshKind::BakhvalovShishkin => 2.0 * (nf - 1.0),
            MeshKind::Bakhvalov => 2.0 * (1.0 - eps) / eps,
        }
    }

    pub fn max_abs_psi_prime(self, n: usize, eps: f64) -> f64 {
        let nf = n as f64;
        match self {
            MeshKind::Shishkin => 2.0 * nf.ln(),
            MeshKind::BakhvalovShishkin => 2.0 * (1.0 - 1.0 / nf),
            MeshKind::Bakhvalov => 2.0 * (1.0 - eps),
        }
    }
}

impl fmt::Display for MeshKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MeshKind {
    type Err = LdgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" | "shishkin" => Ok(MeshKind::Shishkin),
            "bs" | "bakhvalov-shishkin" | "bakhvalovshishkin" => Ok(MeshKind::BakhvalovShishkin),
            "b" | "bakhvalov" => Ok(MeshKind::Bakhvalov),
            other => Err(LdgError::InvalidArgument(format!("unknown mesh kind '{other}'"))),
        }
    }
}

/// Mesh-generating function `phi(t)` on `[0, 1/2]`.
pub fn phi_eval(kind: MeshKind, t: f64, n: usize, eps: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&t) {
        return Err(LdgError::InvalidArgument(format!("t = {t} outside [0, 1/2]")));
    }
    if n < 2 {
        return Err(LdgError::InvalidArgument(format!("N = {n} must be at least 2")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(LdgError::InvalidArgument(format!("eps = {eps} outside (0, 1)")));
    }
    match kind {
        MeshKind::Shishkin => Ok(2.0 * t * (n as f64).ln()),
        MeshKind::BakhvalovShishkin | MeshKind::Bakhvalov => {
            let arg = kind.log_argument(t, n, eps);
            if arg <= 0.0 {
                return Err(LdgError::Domain { t, arg });
            }
            if arg > 0.5 {
                // -ln(1 - s) with s = 1 - arg small
                let delta = if kind == MeshKind::Bakhvalov { eps } else { 1.0 / n as f64 };
                Ok(-(-2.0 * (1.0 - delta) * t).ln_1p())
            } else {
                Ok(-arg.ln())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    pub kind: MeshKind,
    pub n: usize,
    pub eps: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl MeshSpec {
    pub fn new(kind: MeshKind, n: usize, eps: f64, sigma: f64, alpha: f64) -> Result<Self> {
        let spec = MeshSpec { kind, n, eps, sigma, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || !self.n.is_multiple_of(2) {
            return Err(LdgError::InvalidArgument(format!("N = {} must be an even integer >= 4", self.n)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(LdgError::InvalidArgument(format!("eps = {} outside (0, 1)", self.eps)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(LdgError::InvalidArgument(format!("sigma = {} must be positive", self.sigma)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(LdgError::InvalidArgument(format!("alpha = {} must be positive", self.alpha)));
        }
        Ok(())
    }

    /// `sigma * eps / alpha`
    pub fn layer_scale(&self) -> f64 {
        self.sigma * self.eps / self.alpha
    }

    /// True when `eps <= 1/N`, the convection-dominated regime.
    pub fn convection_dominated(&self) -> bool {
        self.eps <= 1.0 / self.n as f64
    }
}

/// Transition parameter and whether `min{1/2, .}` clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub tau: f64,
    pub clamped: bool,
}

pub fn transition_tau(spec: &MeshSpec) -> Result<Transition> {
    spec.validate()?;
    let raw = spec.layer_scale() * phi_eval(spec.kind, 0.5, spec.n, spec.eps)?;
    if raw > 0.5 {
        Ok(Transition { tau: 0.5, clamped: true })
    } else {
        Ok(Transition { tau: raw, clamped: false })
    }
}

/// A point of `[0, 1]` carried together with its distance to the right end.
///
/// `one_minus_x` is computed from mesh offsets, never as `1.0 - x`, so layer
/// functions like `exp(-(1 - x) / eps)` can be evaluated accurately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coord {
    pub x: f64,
    pub one_minus_x: f64,
}

impl Coord {
    /// Builds a coordinate from `x` alone; adequate away from `x = 1`.
    pub fn from_x(x: f64) -> Self {
        Coord { x, one_minus_x: 1.0 - x }
    }

    pub fn from_offset(d: f64) -> Self {
        Coord { x: 1.0 - d, one_minus_x: d }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    offsets: Vec<f64>,
    widths: Vec<f64>,
    tau: f64,
    clamped: bool,
    spec: Option<MeshSpec>,
}

impl Mesh {
    /// Builds the layer-adapted mesh described by `spec`.
    pub fn build(spec: &MeshSpec) -> Result<Self> {
        let Transition { tau, clamped } = transition_tau(spec)?;
        let n = spec.n;
        let half = n / 2;
        let phi_half = phi_eval(spec.kind, 0.5, n, spec.eps)?;

        let mut nodes = vec![0.0; n + 1];
        let mut offsets = vec![0.0; n + 1];
        for i in 0..half {
            nodes[i] = (2.0 * i as f64 / n as f64) * (1.0 - tau);
            offsets[i] = 1.0 - nodes[i];
        }
        offsets[half] = tau;
        for i in half + 1..=n {
            let t = (n - i) as f64 / n as f64;
            let phi = phi_eval(spec.kind, t, n, spec.eps)?;
            offsets[i] = if clamped { tau * phi / phi_half } else { spec.layer_scale() * phi };
        }
        offsets[n] = 0.0;
        for i in half..=n {
            nodes[i] = 1.0 - offsets[i];
        }

        let coarse = 2.0 * (1.0 - tau) / n as f64;
        let mut widths = vec![coarse; n];
        for j in half + 1..=n {
            widths[j - 1] = offsets[j - 1] - offsets[j];
        }

        let mesh = Mesh { nodes, offsets, widths, tau, clamped, spec: Some(*spec) };
        mesh.check(spec.eps)?;
        Ok(mesh)
    }

    /// Uniform partition of [0, 1] into `n` elements (no layer refinement).
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(LdgError::InvalidArgument("uniform mesh needs at least one element".into()));
        }
        let nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let offsets: Vec<f64> = (0..=n).map(|i| (n - i) as f64 / n as f64).collect();
        let widths = vec![1.0 / n as f64; n];
        Ok(Mesh { nodes, offsets, widths, tau: 0.5, clamped: false, spec: None })
    }

    fn check(&self, eps: f64) -> Result<()> {
        for (j, &h) in self.widths.iter().enumerate() {
            if !(h > 0.0) || self.nodes[j + 1] <= self.nodes[j] {
                return Err(LdgError::DegenerateMesh { index: j + 1, width: h, eps });
            }
        }
        Ok(())
    }

    /// Number of elements N.
    pub fn n_elements(&self) -> usize {
        self.widths.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `1 - x_i` for every node; exact offsets from `phi` on the fine part.
    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// `widths()[j - 1]` is `h_j`.
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }

    pub fn spec(&self) -> Option<&MeshSpec> {
        self.spec.as_ref()
    }

    pub fn node_coord(&self, i: usize) -> Coord {
        Coord { x: self.nodes[i], one_minus_x: self.offsets[i] }
    }

    /// Physical point of element `e` (0-based) at reference coordinate `xi` in [-1, 1].
    pub fn element_coord(&self, e: usize, xi: f64) -> Coord {
        let h = self.widths[e];
        if xi <= 0.0 {
            let s = 0.5 * h * (1.0 + xi);
            Coord { x: self.nodes[e] + s, one_minus_x: self.offsets[e] - s }
        } else {
            let s = 0.5 * h * (1.0 - xi);
            Coord { x: self.nodes[e + 1] - s, one_minus_x: self.offsets[e + 1] + s }
        }
    }

    /// Index of the element containing `x` (right-continuous, last element for x = 1).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        let n = self.n_elements();
        let idx = self.nodes.partition_point(|&node| node <= x);
        Some(idx.saturating_sub(1).min(n - 1))
    }

    /// Full-precision node dump, one value per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for x in &self.nodes {
            out.push_str(&format!("{x:.17e}\n"));
        }
        out
    }
}
