//! Parsing of study settings from `key=value` text and command-line values.
//!
//! Both sources go through [`ConfigBuilder::set`], so a flag and a file
//! line with the same key mean the same thing; later calls win.

use std::path::PathBuf;

use super::{OutputFormat, SigmaRule, StudyConfig};
use crate::error::{LdgError, Result};
use crate::mesh::MeshKind;

fn invalid(msg: String) -> LdgError {
    LdgError::InvalidArgument(msg)
}

/// `"s,bs,b"` style list.
pub fn parse_kinds(s: &str) -> Result<Vec<MeshKind>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

/// Either an inclusive range `"0..3"` or a list `"0,2,3"`.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let int = |t: &str| t.trim().parse::<usize>().map_err(|_| invalid(format!("bad degree '{t}'")));
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (int(lo)?, int(hi)?);
        if lo > hi {
            return Err(invalid(format!("empty degree range '{s}'")));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(int).collect()
}

pub fn parse_eps_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad eps '{t}'"))))
        .collect()
}

/// `nmin, 2 nmin, ...` up to `nmax`; empty if `nmax < nmin`.
pub fn doubling_sequence(nmin: usize, nmax: usize) -> Result<Vec<usize>> {
    if nmin < 4 || !nmin.is_multiple_of(2) {
        return Err(invalid(format!("nmin = {nmin} must be even and at least 4")));
    }
    let mut out = Vec::new();
    let mut n = nmin;
    while n <= nmax {
        out.push(n);
        n *= 2;
    }
    if let Some(&last) = out.last() {
        if last != nmax {
            return Err(invalid(format!("nmax = {nmax} is not nmin = {nmin} times a power of two")));
        }
    }
    Ok(out)
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_settings(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(invalid(format!("line {}: expected key=value, got '{raw}'", i + 1)));
        };
        out.push((key.trim().to_ascii_lowercase(), value.trim().to_string()));
    }
    Ok(out)
}

/// Accumulates settings before the N range is known.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    config: StudyConfig,
    nmin: usize,
    nmax: usize,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        ConfigBuilder { config: StudyConfig::default(), nmin: 16, nmax: 512 }
    }
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Applies one setting. Keys match the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<&mut Self> {
        let cfg = &mut self.config;
        let uint = |v: &str| v.trim().parse::<usize>().map_err(|_| invalid(format!("{key}: bad integer '{v}'")));
        match key.trim_start_matches("--").replace('_', "-").as_str() {
            "mesh" => cfg.mesh_kinds = parse_kinds(value)?,
            "k" | "degrees" => cfg.degrees = parse_degrees(value)?,
            "eps" | "epsilon" => cfg.eps_list = parse_eps_list(value)?,
            "nmin" => self.nmin = uint(value)?,
            "nmax" => self.nmax = uint(value)?,
            "sigma" => cfg.sigma = value.parse::<SigmaRule>()?,
            "format" => cfg.format = value.parse::<OutputFormat>()?,
            "out" => cfg.output_path = Some(PathBuf::from(value)),
            "plotdata" => cfg.plot_dir = Some(PathBuf::from(value)),
            "quad-assembly" => {
                cfg.quad_assembly = if value.eq_ignore_ascii_case("auto") { None } else { Some(uint(value)?) }
            }
            "quad-error" => cfg.quad_error = uint(value)?,
            "workers" => cfg.workers = uint(value)?,
            other => return Err(invalid(format!("unknown setting '{other}'"))),
        }
        Ok(self)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<&mut Self> {
        for (k, v) in parse_settings(text)? {
            self.set(&k, &v)?;
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<StudyConfig> {
        let mut cfg = self.config.clone();
        cfg.n_list = if self.nmax < self.nmin { Vec::new() } else { doubling_sequence(self.nmin, self.nmax)? };
        cfg.validate()?;
        Ok(cfg)
    }
}
