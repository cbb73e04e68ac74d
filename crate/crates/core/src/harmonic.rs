//! Positive harmonic functions on a leaf's `(u, v)` domain.
//!
//! Two families: a finite Fourier series, periodic in `u` with period `2πb`,
//! living on a half-plane `v ≥ 0` or a strip `0 ≤ v ≤ C`; and the Poisson
//! extension of a sampled boundary function to the half-plane.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};


use crate::error::{domain, Error, Result};

/// Cutoff on `v` used when sampling half-plane specs for positivity.
pub const POSITIVITY_V_CUTOFF: f64 = 50.0;

const POSITIVITY_SLACK: f64 = 1e-12;

/// One Fourier mode `e^{kv/b}(a cos(ku/b) + b sin(ku/b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Nonzero frequency index.
    pub k: i32,
    /// Cosine coefficient.
    pub a: f64,
    /// Sine coefficient.
    pub b: f64,
}

impl Mode {
    /// A mode from its frequency and coefficients.
    pub fn new(k: i32, a: f64, b: f64) -> Self {
        Self { k, a, b }
    }
}

/// Finite Fourier series on a half-plane or a strip.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpec {
    /// Period multiple: the function has period `2πb` in `u`.
    pub b: u32,
    /// Constant coefficient.
    pub a0: f64,
    /// Coefficient of the linear term `v`.
    pub b0: f64,
    /// Oscillating modes.
    pub modes: Vec<Mode>,
    /// Strip height `C`; `None` on the half-plane.
    pub strip_c: Option<f64>,
}

impl FourierSpec {
    /// `a0 + b0·v` on the half-plane.
    pub fn linear(a0: f64, b0: f64) -> Self {
        Self {
            b: 1,
            a0,
            b0,
            modes: Vec::new(),
            strip_c: None,
        }
    }

    /// The constant function `a0` on the half-plane.
    pub fn constant(a0: f64) -> Self {
        Self::linear(a0, 0.0)
    }

    /// Same series, moved onto the strip `0 ≤ v ≤ c`.
    pub fn on_strip(mut self, c: f64) -> Self {
        self.strip_c = Some(c);
        self
    }

    /// Same series with a different period multiple.
    pub fn with_period(mut self, b: u32) -> Self {
        self.b = b;
        self
    }

    /// Append a mode.
    pub fn with_mode(mut self, k: i32, a: f64, b: f64) -> Self {
        self.modes.push(Mode::new(k, a, b));
        self
    }

    fn modes_at(&self, u: f64, v: f64) -> f64 {
        let b = self.b as f64;
        self.modes
            .iter()
            .map(|m| {
                let f = m.k as f64 / b;
                let (s, c) = (f * u).sin_cos();
                (f * v).exp() * (m.a * c + m.b * s)
            })
            .sum()
    }

    /// The non-oscillating part at height `v`.
    pub fn linear_part(&self, v: f64) -> f64 {
        match self.strip_c {
            Some(c) => self.a0 * (1.0 - v / c) + self.b0 * v,
            None => self.a0 + self.b0 * v,
        }
    }

    /// `Σ(|a_k| + |b_k|)`.
    pub fn mode_l1(&self) -> f64 {
        self.modes.iter().map(|m| m.a.abs() + m.b.abs()).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::InvalidSpec("period multiple b must be >= 1".into()));
        }
        if !(self.a0 >= 0.0 && self.b0 >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "linear coefficients must be nonnegative (a0={}, b0={})",
                self.a0, self.b0
            )));
        }
        if self.modes.iter().any(|m| m.k == 0) {
            return Err(Error::InvalidSpec("mode index k = 0 is the linear part".into()));
        }
        if self.modes.iter().any(|m| !(m.a.is_finite() && m.b.is_finite())) {
            return Err(Error::InvalidSpec("non-finite mode coefficient".into()));
        }
        match self.strip_c {
            Some(c) if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidSpec(format!("strip height {c} must be positive")))
            }
            Some(_) => Ok(()),
            None => {
                if self.modes.iter().any(|m| m.k > 0) {
                    return Err(Error::InvalidSpec(
                        "growing modes (k > 0) are not allowed on the half-plane".into(),
                    ));
                }
                if self.mode_l1() > self.a0 * (1.0 + 1e-12) {
                    return Err(Error::InvalidSpec(format!(
                        "mode mass {} exceeds a0 = {}",
                        self.mode_l1(),
                        self.a0
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Poisson extension of a piecewise-linear boundary function.
///
/// The boundary is sampled on a uniform grid over `[y_min, y_max]` and equal
/// to `tail` outside it. Evaluation integrates the kernel against the
/// interpolant exactly, segment by segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSpec {
    y_min: f64,
    y_max: f64,
    dy: f64,
    values: Vec<f64>,
    tail: f64,
    c_lin: f64,
    // ∫ (B − tail)(y − mid)^n dy, for the far-field expansion.
    moments: [f64; MOMENTS],
}

const MOMENTS: usize = 10;

// Switch to the multipole expansion beyond this many (half-width + v).
const FAR_FIELD: f64 = 64.0;

// 5-point Gauss–Legendre on [-1, 1]: exact for the degree-9 moment integrands.
const GL5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

impl PoissonSpec {
    /// Samples `values` on the uniform grid `y_min + i·dy`.
    pub fn new(y_min: f64, y_max: f64, values: Vec<f64>, tail: f64, c_lin: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSpec("boundary needs at least two samples".into()));
        }
        if !(y_max > y_min) || !y_min.is_finite() || !y_max.is_finite() {
            return Err(Error::InvalidSpec(format!("bad boundary range [{y_min}, {y_max}]")));
        }
        if values.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidSpec("boundary samples must be nonnegative".into()));
        }
        if !(tail >= 0.0 && tail.is_finite()) || !(c_lin >= 0.0 && c_lin.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "tail ({tail}) and c_lin ({c_lin}) must be nonnegative"
            )));
        }
        let dy = (y_max - y_min) / (values.len() - 1) as f64;
        let mut spec = Self {
            y_min,
            y_max,
            dy,
            values,
            tail,
            c_lin,
            moments: [0.0; MOMENTS],
        };
        spec.moments = spec.compute_moments();
        Ok(spec)
    }

    fn compute_moments(&self) -> [f64; MOMENTS] {
        let mid = self.mid();
        let mut out = [0.0; MOMENTS];
        for i in 0..self.values.len() - 1 {
            let (f0, f1) = (self.values[i] - self.tail, self.values[i + 1] - self.tail);
            let y0 = self.node(i);
            for (x, w) in GL5 {
                let s = 0.5 * (x + 1.0);
                let f = f0 + (f1 - f0) * s;
                let t = y0 + s * self.dy - mid;
                let mut p = 0.5 * w * self.dy * f;
                for m in out.iter_mut() {
                    *m += p;
                    p *= t;
                }
            }
        }
        out
    }

    fn mid(&self) -> f64 {
        let (lo, hi) = self.range();
        0.5 * (lo + hi)
    }

    /// From explicit sample abscissae, which must be uniformly spaced.
    pub fn from_samples(ys: &[f64], values: Vec<f64>, tail: f64, c_lin: f64) -> Result<Self> {
        if ys.len() != values.len() {
            return Err(Error::InvalidSpec(format!(
                "{} abscissae but {} values",
                ys.len(),
                values.len()
            )));
        }
        if ys.len() < 2 {
            return Err(Error::InvalidSpec("boundary needs at least two samples".into()));
        }
        let (y0, yn) = (ys[0], ys[ys.len() - 1]);
        let dy = (yn - y0) / (ys.len() - 1) as f64;
        for (i, y) in ys.iter().enumerate() {
            let expect = y0 + i as f64 * dy;
            if (y - expect).abs() > 1e-9 * (1.0 + expect.abs()) {
                return Err(Error::InvalidSpec(format!(
                    "boundary grid not uniform at index {i} ({y} vs {expect})"
                )));
            }
        }
        Self::new(y0, yn, values, tail, c_lin)
    }

    /// Sample `f` on `n` uniform points of `[y_min, y_max]`.
    pub fn sample(
        y_min: f64,
        y_max: f64,
        n: usize,
        f: impl Fn(f64) -> f64,
        tail: f64,
        c_lin: f64,
    ) -> Result<Self> {
        let n = n.max(2);
        let dy = (y_max - y_min) / (n - 1) as f64;
        let values = (0..n).map(|i| f(y_min + i as f64 * dy)).collect();
        Self::new(y_min, y_max, values, tail, c_lin)
    }

    /// Sample abscissae; the last one is `y_max` exactly, so the grid
    /// reloads bit-for-bit through [`PoissonSpec::from_samples`].
    pub fn ys(&self) -> Vec<f64> {
        let n = self.values.len();
        (0..n).map(|i| if i + 1 == n { self.y_max } else { self.node(i) }).collect()
    }

    /// Sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Boundary value outside the sampled range.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Coefficient of the `v` term.
    pub fn c_lin(&self) -> f64 {
        self.c_lin
    }

    /// Sampled range `[y_min, y_max]`.
    pub fn range(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    fn node(&self, i: usize) -> f64 {
        self.y_min + i as f64 * self.dy
    }

    /// Piecewise-linear boundary function.
    pub fn boundary(&self, y: f64) -> f64 {
        let (lo, hi) = self.range();
        if y < lo || y > hi {
            return self.tail;
        }
        let t = (y - self.y_min) / self.dy;
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let s = t - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }

    /// Largest boundary value, tail included.
    pub fn boundary_max(&self) -> f64 {
        self.values.iter().copied().fold(self.tail, f64::max)
    }

    /// `∫ (B − tail) dy` over the sampled range (exact for the interpolant).
    pub fn excess_integral(&self) -> f64 {
        let n = self.values.len();
        let inner: f64 = self.values[1..n - 1].iter().sum();
        let ends = 0.5 * (self.values[0] + self.values[n - 1]);
        (inner + ends) * self.dy - self.tail * (self.range().1 - self.range().0)
    }

    /// Boundary moved left by `du`: `y ↦ B(y + du)`.
    pub fn translate(&self, du: f64) -> Self {
        let mut out = self.clone();
        out.y_min -= du;
        out.y_max -= du;
        out.dy = (out.y_max - out.y_min) / (out.values.len() - 1) as f64;
        out.moments = out.compute_moments();
        out
    }

    /// Same boundary with a new linear coefficient.
    pub fn with_c_lin(mut self, c_lin: f64) -> Self {
        self.c_lin = c_lin;
        self
    }

    /// Poisson integral of the boundary alone (no `c_lin` term).
    ///
    /// The constant tail extends to all of `ℝ` and integrates to itself, so
    /// only the compactly supported excess needs the kernel.
    pub fn poisson(&self, u: f64, v: f64) -> f64 {
        if v == 0.0 {
            return self.boundary(u);
        }
        self.tail + self.excess(u, v)
    }

    /// Poisson integral of the excess `(B − tail)·1_[y_min, y_max]`.
    pub fn excess(&self, u: f64, v: f64) -> f64 {
        let (lo, hi) = self.range();
        if v == 0.0 {
            return if u < lo || u > hi {
                0.0
            } else {
                self.boundary(u) - self.tail
            };
        }
        let mid = self.mid();
        if (u - mid).abs() > FAR_FIELD * (0.5 * (hi - lo) + v) {
            return self.excess_far(mid - u, v);
        }
        let v2 = v * v;
        let mut acc = 0.0;
        for i in 0..self.values.len() - 1 {
            let s0 = self.node(i) - u;
            let s1 = self.node(i + 1) - u;
            let (f0, f1) = (self.values[i] - self.tail, self.values[i + 1] - self.tail);
            let m = (f1 - f0) / self.dy;
            // f = fm + m·(s − sm) on the segment, s = y − u.
            let sm = 0.5 * (s0 + s1);
            let fm = 0.5 * (f0 + f1);
            let d_atan = ((s1 - s0) * v).atan2(v2 + s0 * s1);
            let d_log = ((s1 - s0) * (s1 + s0) / (v2 + s0 * s0)).ln_1p();
            acc += fm * d_atan + m * (0.5 * v * d_log - sm * d_atan);
        }
        acc / PI
    }

    // v/(v² + (s+t)²) = Im 1/(s + t − iv) = Im Σ (−t)^n / (s − iv)^{n+1}.
    fn excess_far(&self, s: f64, v: f64) -> f64 {
        let z = num_complex::Complex64::new(s, -v);
        let inv = z.inv();
        let mut p = inv;
        let mut acc = 0.0;
        for (n, m) in self.moments.iter().enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m * p.im;
            p *= inv;
        }
        acc / PI
    }

    fn eval(&self, u: f64, v: f64) -> f64 {
        self.poisson(u, v) + self.c_lin * v
    }

    fn scale(&mut self, s: f64) {
        for x in &mut self.values {
            *x /= s;
        }
        self.tail /= s;
        self.c_lin /= s;
        self.moments = self.compute_moments();
    }

    /// Least `b ≤ b_max` with `B(y + 2πb) = B(y)` to within `tol`, if any.
    fn boundary_period(&self, b_max: u32, tol: f64) -> Option<u32> {
        let (lo, hi) = self.range();
        (1..=b_max).find(|&b| {
            let shift = TAU * b as f64;
            let (a, z) = (lo - shift - self.dy, hi + self.dy);
            let n = (((z - a) / (0.25 * self.dy)).ceil() as usize).clamp(64, 200_000);
            (0..=n).all(|i| {
                let y = a + (z - a) * i as f64 / n as f64;
                let (p, q) = (self.boundary(y), self.boundary(y + shift));
                (p - q).abs() <= tol * p.abs().max(q.abs()).max(1.0)
            })
        })
    }
}

/// A leafwise harmonic function, in one of the two supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicSpec {
    /// Finite Fourier series.
    Fourier(FourierSpec),
    /// Poisson extension of a sampled boundary function.
    Poisson(PoissonSpec),
}

impl From<FourierSpec> for HarmonicSpec {
    fn from(s: FourierSpec) -> Self {
        HarmonicSpec::Fourier(s)
    }
}

impl From<PoissonSpec> for HarmonicSpec {
    fn from(s: PoissonSpec) -> Self {
        HarmonicSpec::Poisson(s)
    }
}

impl HarmonicSpec {
    /// Strip height, if the spec lives on a strip.
    pub fn strip_height(&self) -> Option<f64> {
        match self {
            HarmonicSpec::Fourier(f) => f.strip_c,
            HarmonicSpec::Poisson(_) => None,
        }
    }

    fn in_domain(&self, v: f64) -> bool {
        let slack = 1e-12;
        v >= -slack
            && match self.strip_height() {
                Some(c) => v <= c * (1.0 + slack) + slack,
                None => v.is_finite(),
            }
    }

    /// Value at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Result<f64> {
        if !self.in_domain(v) || !u.is_finite() {
            return Err(domain(format!("({u}, {v}) outside the spec's domain")));
        }
        Ok(self.eval_unchecked(u, v))
    }

    pub(crate) fn eval_unchecked(&self, u: f64, v: f64) -> f64 {
        match self {
            HarmonicSpec::Fourier(f) => f.linear_part(v) + f.modes_at(u, v),
            HarmonicSpec::Poisson(p) => p.eval(u, v),
        }
    }

    /// Five-point discrete Laplacian with step `h`.
    pub fn laplacian_residual(&self, u: f64, v: f64, h: f64) -> Result<f64> {
        if !(h > 0.0) {
            return Err(domain(format!("stencil step {h} must be positive")));
        }
        if !self.in_domain(v - h) || !self.in_domain(v + h) {
            return Err(domain(format!("stencil at ({u}, {v}) with h={h} leaves the domain")));
        }
        let f = |x, y| self.eval_unchecked(x, y);
        let sum = f(u + h, v) + f(u - h, v) + f(u, v + h) + f(u, v - h) - 4.0 * f(u, v);
        Ok(sum / (h * h))
    }

    /// Sampling window `(u_lo, u_hi, v_hi)` used for lattice checks.
    fn sample_window(&self) -> (f64, f64, f64) {
        match self {
            HarmonicSpec::Fourier(f) => (
                0.0,
                TAU * f.b as f64,
                f.strip_c.unwrap_or(POSITIVITY_V_CUTOFF),
            ),
            HarmonicSpec::Poisson(p) => {
                let (lo, hi) = p.range();
                (lo - TAU, hi + TAU, POSITIVITY_V_CUTOFF)
            }
        }
    }

    /// Whether every sample of a `grid_u × grid_v` lattice is nonnegative.
    pub fn check_positivity(&self, grid_u: usize, grid_v: usize) -> bool {
        let (u0, u1, v1) = self.sample_window();
        let (nu, nv) = (grid_u.max(1), grid_v.max(2));
        (0..nu).all(|i| {
            let u = u0 + (u1 - u0) * i as f64 / nu as f64;
            (0..nv).all(|j| {
                let v = v1 * j as f64 / (nv - 1) as f64;
                self.eval_unchecked(u, v) >= -POSITIVITY_SLACK
            })
        })
    }

    /// Rescale so that the value at the origin is 1.
    pub fn normalize(&self) -> Result<HarmonicSpec> {
        let s = self.eval_unchecked(0.0, 0.0);
        if !(s.abs() > 0.0) || !s.is_finite() {
            return Err(Error::DegenerateNormalization(s));
        }
        let mut out = self.clone();
        match &mut out {
            HarmonicSpec::Fourier(f) => {
                f.a0 /= s;
                f.b0 /= s;
                for m in &mut f.modes {
                    m.a /= s;
                    m.b /= s;
                }
            }
            HarmonicSpec::Poisson(p) => p.scale(s),
        }
        Ok(out)
    }

    /// Structural invariants: sign conditions, domain, half-plane decay.
    pub fn validate(&self) -> Result<()> {
        match self {
            HarmonicSpec::Fourier(f) => f.validate(),
            // Invariants are enforced by the constructors.
            HarmonicSpec::Poisson(_) => Ok(()),
        }
    }

    /// `(u, v) ↦ H(u + du, v)`.
    pub fn translate(&self, du: f64) -> HarmonicSpec {
        match self {
            HarmonicSpec::Fourier(f) => {
                let mut g = f.clone();
                let b = f.b as f64;
                for m in &mut g.modes {
                    let (s, c) = (m.k as f64 * du / b).sin_cos();
                    let (a, bb) = (m.a, m.b);
                    m.a = a * c + bb * s;
                    m.b = bb * c - a * s;
                }
                HarmonicSpec::Fourier(g)
            }
            HarmonicSpec::Poisson(p) => HarmonicSpec::Poisson(p.translate(du)),
        }
    }

    /// Least `b` with period `2πb` in `u`, if one exists up to `b_max`.
    pub fn period_multiple(&self, b_max: u32) -> Option<u32> {
        match self {
            HarmonicSpec::Fourier(f) => Some(f.b),
            HarmonicSpec::Poisson(p) => p.boundary_period(b_max, 1e-8),
        }
    }

    /// Coefficient of the linear growth in `v`: `b0` or `c_lin`.
    pub fn linear_growth(&self) -> f64 {
        match self {
            HarmonicSpec::Fourier(f) => f.b0,
            HarmonicSpec::Poisson(p) => p.c_lin,
        }
    }

    /// Upper bound `(A, B)` with `|H(u, v)| ≤ A + B·v` on the domain.
    pub(crate) fn envelope(&self) -> (f64, f64) {
        match self {
            HarmonicSpec::Fourier(f) => match f.strip_c {
                None => (f.a0 + f.mode_l1(), f.b0),
                Some(c) => {
                    let grow = f
                        .modes
                        .iter()
                        .map(|m| (m.a.abs() + m.b.abs()) * (m.k.max(0) as f64 * c / f.b as f64).exp())
                        .sum::<f64>();
                    (f.a0 + grow, f.b0 + f.a0 / c)
                }
            },
            HarmonicSpec::Poisson(p) => (p.boundary_max(), p.c_lin),
        }
    }
}

/// Check `H_α(u, v) = H_α(2kπ, 0)·H_β(u − 2kπ, v)` on a fixed lattice.
pub fn verify_monodromy_relation(
    spec_alpha: &HarmonicSpec,
    spec_beta: &HarmonicSpec,
    k: i64,
    tol: f64,
) -> bool {
    let shift = TAU * k as f64;
    let scale = spec_alpha.eval_unchecked(shift, 0.0);
    let top = match (spec_alpha.strip_height(), spec_beta.strip_height()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => 8.0,
    };
    (0..=24).all(|i| {
        let u = -12.0 + i as f64;
        (0..=6).all(|j| {
            let v = top * j as f64 / 6.0;
            let lhs = spec_alpha.eval_unchecked(u, v);
            let rhs = scale * spec_beta.eval_unchecked(u - shift, v);
            (lhs - rhs).abs() <= tol * lhs.abs().max(1.0)
        })
    })
}
