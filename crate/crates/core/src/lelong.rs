//! Lelong number estimates along a geometric radius schedule.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::current::Current;
use crate::error::{domain, Result};
use crate::exec::{Executor, Sequential};
use crate::mass::{mass_closed_form, masses_at_radii, QuadratureConfig};

/// Geometric schedule `r_n = r_start·ratio^n`, `n = 0..steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    /// First radius.
    pub r_start: f64,
    /// Common ratio, in `(0, 1)`.
    pub ratio: f64,
    /// Number of radii.
    pub steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            r_start: 1.0,
            ratio: 0.5,
            steps: 12,
        }
    }
}

impl Schedule {
    /// Halving schedule from 1 with `steps` radii.
    pub fn halving(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    /// Reject empty or non-contracting schedules.
    pub fn validate(&self) -> Result<()> {
        if !(self.r_start > 0.0 && self.r_start <= 1.0) {
            return Err(domain(format!("r_start {} not in (0,1]", self.r_start)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(domain(format!("ratio {} not in (0,1)", self.ratio)));
        }
        if self.steps == 0 {
            return Err(domain("schedule needs at least one step"));
        }
        Ok(())
    }

    /// The radii, strictly decreasing.
    pub fn radii(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|n| self.r_start * self.ratio.powi(n as i32))
            .collect()
    }
}

/// Which mass engine feeds the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Adaptive quadrature (always available).
    #[default]
    Quadrature,
    /// Closed forms, for periodic Fourier currents; errors are zero.
    ClosedForm,
}

/// Least-squares line `ν ≈ intercept + slope·(−log r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Slope against `−log r`.
    pub slope: f64,
    /// Intercept.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Fit `ν` against `−log r`.
pub fn log_fit(rs: &[f64], nus: &[f64]) -> LinearFit {
    let n = rs.len().min(nus.len()) as f64;
    let xs: Vec<f64> = rs.iter().map(|r| -r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = nus.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(nus).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = nus.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r_squared = if sxx > 0.0 && syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}

/// Normalized masses along a schedule, with a monotone limit bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct LelongEstimate {
    /// Radii, strictly decreasing.
    pub rs: Vec<f64>,
    /// `ν(r_n)`.
    pub nus: Vec<f64>,
    /// Error estimates of `ν(r_n)`.
    pub errs: Vec<f64>,
    /// `violations[n]`: `ν` rose from `r_{n−1}` to `r_n` by more than the
    /// combined error. Always false at `n = 0`.
    pub violations: Vec<bool>,
    /// No violations along the schedule.
    pub monotone_ok: bool,
    /// Last `ν`.
    pub limit_estimate: f64,
    /// `(lower, upper)` bracket for the limit.
    pub limit_bracket: (f64, f64),
    /// Fit of `ν` against `−log r`.
    pub fit: LinearFit,
}

/// Default growth factor `ν_last/ν_first` required to call divergence.
pub const DIVERGENCE_GROWTH: f64 = 1.5;

/// Default `R²` threshold for the divergence fit.
pub const DIVERGENCE_R2: f64 = 0.99;

impl LelongEstimate {
    fn from_series(rs: Vec<f64>, nus: Vec<f64>, errs: Vec<f64>) -> Self {
        let violations: Vec<bool> = (0..nus.len())
            .map(|n| n > 0 && nus[n] > nus[n - 1] + errs[n - 1] + errs[n])
            .collect();
        let last = nus.len() - 1;
        let prev = last.saturating_sub(1);
        let lower = (nus[last] - errs[last]).max(0.0);
        let upper = (nus[prev] + errs[prev]).max(nus[last] + errs[last]);
        let fit = log_fit(&rs, &nus);
        Self {
            monotone_ok: !violations.iter().any(|&v| v),
            limit_estimate: nus[last],
            limit_bracket: (lower, upper),
            rs,
            nus,
            errs,
            violations,
            fit,
        }
    }

    /// `ν_last / ν_first`.
    pub fn growth(&self) -> f64 {
        self.nus[self.nus.len() - 1] / self.nus[0]
    }

    /// Linear growth in `−log r`: positive slope, tight fit, real growth.
    pub fn diverges(&self, r_squared: f64, growth: f64) -> bool {
        self.fit.slope > 0.0 && self.fit.r_squared > r_squared && self.growth() > growth
    }
}

/// Estimate the Lelong number by quadrature on a single thread.
pub fn lelong_estimate(
    current: &Current,
    schedule: &Schedule,
    cfg: &QuadratureConfig,
) -> Result<LelongEstimate> {
    lelong_estimate_with(&Sequential, current, schedule, 0, Engine::Quadrature, cfg)
}

/// Estimate the Lelong number with an explicit executor, window and engine.
pub fn lelong_estimate_with<E: Executor>(
    exec: &E,
    current: &Current,
    schedule: &Schedule,
    k0: i64,
    engine: Engine,
    cfg: &QuadratureConfig,
) -> Result<LelongEstimate> {
    schedule.validate()?;
    let rs = schedule.radii();
    let (nus, errs) = match engine {
        Engine::Quadrature => {
            let ms = masses_at_radii(exec, current, &rs, k0, cfg)?;
            (
                ms.iter().map(|m| m.nu()).collect(),
                ms.iter().map(|m| m.nu_error()).collect(),
            )
        }
        Engine::ClosedForm => {
            let nus = rs
                .iter()
                .map(|&r| mass_closed_form(current, r).map(|m| m / (PI * r * r)))
                .collect::<Result<Vec<f64>>>()?;
            let errs = alloc::vec![0.0; rs.len()];
            (nus, errs)
        }
    };
    Ok(LelongEstimate::from_series(rs, nus, errs))
}
