//! Lattice checks of the quantitative inequalities behind the theorems.

use alloc::vec::Vec;
use core::f64::consts::TAU;


use crate::mass::{ia, ib, interval, interval_weight, positive_bracket};
use crate::quadrature::integrate;

/// Tally of a lattice check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LatticeOutcome {
    /// Points evaluated.
    pub checked: usize,
    /// Points where the inequality failed.
    pub violations: usize,
    /// Points outside the lemma's hypotheses, not evaluated.
    pub skipped: usize,
    /// Smallest slack seen (positive means the inequality held).
    pub worst_margin: f64,
}

impl LatticeOutcome {
    fn new() -> Self {
        Self {
            worst_margin: f64::INFINITY,
            ..Self::default()
        }
    }

    fn record(&mut self, margin: f64) {
        self.checked += 1;
        if !(margin > 0.0) {
            self.violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }

    /// No violations and at least one point checked.
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.violations == 0
    }
}

/// Negative eigenvalues of the strip lattices.
pub const NEGATIVE_LAMBDAS: [f64; 3] = [-1.0, -0.5, -0.25];

fn steps(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

/// `(λ, t, r)` with `|α| = t·r^{1−λ}`, `t ∈ {0.1..0.9}`, `r ∈ {0.05..0.95}`.
fn strip_lattice() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for l in NEGATIVE_LAMBDAS {
        for t in steps(0.1, 0.9, 9) {
            for r in steps(0.05, 0.95, 10) {
                out.push((l, t, r));
            }
        }
    }
    out
}

/// The derivative-to-integrand ratios of the Poisson-kernel lemma lie in
/// `(1/2, 2)` for `v ∈ [1/λ, 1/λ + 20]`, `|u − y| ∈ [0, 100]`.
pub fn poisson_ratio_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for l in [0.3, 0.7, 1.0] {
        for v in steps(1.0 / l, 1.0 / l + 20.0, 41) {
            for d in steps(0.0, 100.0, 101) {
                let k = v / (v * v + d * d);
                let r1 = 1.0 - 0.5 / v + k;
                let r2 = 1.0 - 0.5 / (l * v) + k / l;
                for ratio in [r1, r2] {
                    out.record((ratio - 0.5).min(2.0 - ratio));
                }
            }
        }
    }
    out
}

/// `0 < I_a(r) < I_a(1)` on the strip lattice.
pub fn ia_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for (l, t, r) in strip_lattice() {
        let m = t * r.powf(1.0 - l);
        match (ia(l, m, r), ia(l, m, 1.0)) {
            (Ok(x), Ok(one)) => out.record(x.min(one - x)),
            _ => out.skipped += 1,
        }
    }
    out
}

/// `I_b(r) < e^{−1/(λ(1−λ))}·I_b(1)` for `r < e^{1/(2λ(1−λ))}`.
pub fn ib_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for (l, t, r) in strip_lattice() {
        let q = l * (1.0 - l);
        if r >= (0.5 / q).exp() {
            out.skipped += 1;
            continue;
        }
        let m = t * r.powf(1.0 - l);
        match (ib(l, m, r), ib(l, m, 1.0)) {
            (Ok(x), Ok(one)) => out.record((-1.0 / q).exp() * one - x),
            _ => out.skipped += 1,
        }
    }
    out
}

/// `2kπ/((2kπ)² + (u−y)²) ≥ 1/((1 + (|N|+1)²)·2kπ)` for `u ∈ (0, 2π)`,
/// `y ∈ I_N`, `|N| ≤ 20`, `k ∈ {2, 3, 5}`.
pub fn interval_kernel_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for k in [2i64, 3, 5] {
        let w = TAU * k as f64;
        for n in -20i64..=20 {
            let (a, b) = interval(n, k);
            let bound = interval_weight(n) / w;
            for i in 1..16 {
                let u = TAU * i as f64 / 16.0;
                // Half-open interval: sample the closed left end, stop short of
                // the right one.
                for j in 0..32 {
                    let y = a + (b - a) * j as f64 / 32.0;
                    let kern = w / (w * w + (u - y) * (u - y));
                    out.record((kern - bound) / bound);
                }
            }
        }
    }
    out
}

/// Positive eigenvalues of the bracket lattices.
pub const POSITIVE_LAMBDAS: [f64; 5] = [0.3, 0.5, 2.0 / 3.0, 0.9, 1.0];

/// `1 < 1 + λ|α|²r^{2λ−2} < 1 + λ` for `|α| < r^{1−λ}`.
pub fn ineq1_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for l in POSITIVE_LAMBDAS {
        for t in steps(0.05, 0.95, 19) {
            for r in steps(0.05, 0.95, 19) {
                let m = t * r.powf(1.0 - l);
                let (a, _) = positive_bracket(l, m, r);
                out.record((a - 1.0).min(1.0 + l - a));
            }
        }
    }
    out
}

/// `λ < |α|^{−2/λ}r^{2/λ−2} + λ < 1 + λ` for `|α| > r^{1−λ}`.
///
/// At `|α| = r^{1−λ}` the right-hand inequality is an equality, so the
/// lattice starts strictly above the threshold.
pub fn ineq2_lattice() -> LatticeOutcome {
    let mut out = LatticeOutcome::new();
    for l in POSITIVE_LAMBDAS {
        for t in [1.05, 1.3, 2.0, 3.0, 5.0, 10.0] {
            for r in steps(0.05, 0.95, 19) {
                let m = t * r.powf(1.0 - l);
                let (a, _) = positive_bracket(l, m, r);
                out.record((a - l).min(1.0 + l - a));
            }
        }
    }
    out
}

/// Largest absolute gap between the `I_a`/`I_b` closed forms and adaptive
/// quadrature of their defining integrands, over a 27-point lattice.
pub fn ia_ib_discrepancy() -> f64 {
    let mut worst: f64 = 0.0;
    for l in NEGATIVE_LAMBDAS {
        for t in [0.2, 0.5, 0.8] {
            for r in [0.1f64, 0.5, 0.9] {
                let m = t * r.powf(1.0 - l);
                let (v0, v1) = (-r.ln(), (m.ln() - r.ln()) / l);
                let jac = |v: f64| 2.0 * ((-2.0 * v).exp() + l * l * m * m * (-2.0 * l * v).exp());
                let qa = integrate(|v| (1.0 - l * v / m.ln()) * jac(v), v0, v1, 1e-12, 1e-15, 50);
                let qb = integrate(|v| v * jac(v), v0, v1, 1e-12, 1e-15, 50);
                let (Ok(qa), Ok(qb), Ok(ca), Ok(cb)) = (qa, qb, ia(l, m, r), ib(l, m, r)) else {
                    return f64::INFINITY;
                };
                worst = worst
                    .max((qa.value / (r * r) - ca).abs())
                    .max((qb.value / (r * r) - cb).abs());
            }
        }
    }
    worst
}
