//! Uniform grids over `[a, b]`, grid functions, and the trapezoidal
//! quadrature helpers shared by every module.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The parameter quadruple (α, σ, a, b) governing every tempered operator.
///
/// α ∈ (0, 1] (α = 1 is the classical-derivative limit used by the
/// coherence checks), σ ≥ 0 (σ = 0 recovers classical fractional
/// operators). Modules that require the continuous embedding additionally
/// enforce α ∈ (1/2, 1) and σ > 0 themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperedParams {
    pub alpha: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
}

impl TemperedParams {
    pub fn new(alpha: f64, sigma: f64, a: f64, b: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::Domain(format!("sigma must be >= 0, got {sigma}")));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!("interval requires a < b, got [{a}, {b}]")));
        }
        Ok(Self { alpha, sigma, a, b })
    }

    /// Interval width b − a.
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn with_alpha_sigma(&self, alpha: f64, sigma: f64) -> Result<Self> {
        Self::new(alpha, sigma, self.a, self.b)
    }
}

/// Values of a function at the nodes t_i = a + i·(b−a)/n of a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub params: TemperedParams,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(params: TemperedParams, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 intervals, got {} nodes",
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("grid values must be finite".into()));
        }
        Ok(Self { params, values })
    }

    pub fn zeros(params: TemperedParams, n: usize) -> Self {
        Self { params, values: vec![0.0; n + 1] }
    }

    pub fn from_fn(params: TemperedParams, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = params.width() / n as f64;
        let values = (0..=n).map(|i| f(params.a + i as f64 * h)).collect();
        Self { params, values }
    }

    /// Number of grid intervals.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Grid spacing h = (b − a)/n.
    pub fn h(&self) -> f64 {
        self.params.width() / self.n() as f64
    }

    /// Node coordinate t_i.
    pub fn node(&self, i: usize) -> f64 {
        self.params.a + i as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.node(i)).collect()
    }

    /// Reflection t ↦ a + b − t: reverses the value sequence.
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { params: self.params, values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { params: self.params, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x + y).collect();
        Ok(Self { params: self.params, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x - y).collect();
        Ok(Self { params: self.params, values })
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.params != other.params || self.values.len() != other.values.len() {
            return Err(Error::GridMismatch(format!(
                "grids differ: n={} vs n={}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Linear interpolation at an arbitrary t ∈ [a, b].
    pub fn interp(&self, t: f64) -> f64 {
        let h = self.h();
        let s = ((t - self.params.a) / h).clamp(0.0, self.n() as f64);
        let i = (s.floor() as usize).min(self.n() - 1);
        let w = s - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    /// Max-norm over all nodes, ignoring non-finite entries.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().filter(|v| v.is_finite()).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoidal L² norm on the grid.
    pub fn l2_norm(&self) -> f64 {
        trapezoid(self.h(), &self.values.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt()
    }

    /// Write the grid function as CSV with header `t,value`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "t,value")?;
        for i in 0..self.values.len() {
            writeln!(out, "{},{}", self.node(i), self.values[i])?;
        }
        Ok(())
    }

    /// Read a `t,value` CSV written by [`GridFunction::write_csv`] (or any
    /// uniform-grid two-column file with that header).
    pub fn read_csv(params: TemperedParams, path: &Path) -> Result<Self> {
        let reader = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut values = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if idx == 0 && line.starts_with("t,") {
                continue;
            }
            let mut parts = line.split(',');
            let _t = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("bad CSV line {}", idx + 1)))?;
            let v: f64 = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("bad CSV line {}", idx + 1)))?
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad value on line {}: {e}", idx + 1)))?;
            values.push(v);
        }
        GridFunction::new(params, values)
    }
}

/// Composite trapezoidal rule with spacing `h`.
pub fn trapezoid(h: f64, values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Trapezoidal quadrature weights (h/2, h, …, h, h/2) for n+1 nodes.
pub fn trapezoid_weights(h: f64, len: usize) -> Vec<f64> {
    let mut w = vec![h; len];
    w[0] = 0.5 * h;
    w[len - 1] = 0.5 * h;
    w
}

/// Trapezoidal L² inner product of two node-value slices.
pub fn l2_inner(h: f64, x: &[f64], y: &[f64]) -> f64 {
    let prod: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    trapezoid(h, &prod)
}
