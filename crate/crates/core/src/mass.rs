//! Mass of a current on the polydisc `rD²`.
//!
//! Two engines: adaptive quadrature of `∫∫ H·J du dv` per atom, and the
//! closed forms for periodic Fourier currents. Masses carry the factor `r²`
//! natively; the normalized mass is `ν(r) = ‖T‖_{rD²} / (πr²)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};


use crate::current::{Current, TransversalAtom};
use crate::error::{domain, Error, Result};
use crate::exec::{Executor, Sequential};
use crate::foliation::{coordinate_shift, jacobian_coefficients, leaf_domain, Eigenvalue, LeafDomain};
use crate::harmonic::{HarmonicSpec, PoissonSpec};
use crate::quadrature::{integrate, integrate_nested, Estimate};

/// Tolerances for the quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance.
    pub rel_tol: f64,
    /// Absolute tolerance, in units of `r²` (i.e. on the `ν` scale).
    pub abs_tol: f64,
    /// Maximum bisection depth.
    pub max_depth: u32,
    /// Half-plane truncation: stop where the envelope falls below
    /// `abs_tol·r²·10^{-digits}`.
    pub v_tail_cutoff_digits: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 30,
            v_tail_cutoff_digits: 3.0,
        }
    }
}

impl QuadratureConfig {
    /// Reject nonpositive tolerances or a zero depth.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_depth == 0 {
            return Err(domain("max_depth must be at least 1"));
        }
        if !(self.v_tail_cutoff_digits > 0.0) {
            return Err(domain("v_tail_cutoff_digits must be positive"));
        }
        Ok(())
    }
}

/// A mass with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassResult {
    /// `‖T‖_{rD²}`.
    pub value: f64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    /// Radius.
    pub r: f64,
}

impl MassResult {
    /// `ν(r) = value / (πr²)`.
    pub fn nu(&self) -> f64 {
        self.value / (PI * self.r * self.r)
    }

    /// Error estimate on the `ν` scale.
    pub fn nu_error(&self) -> f64 {
        self.error_estimate / (PI * self.r * self.r)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("radius {r} not in (0,1]")))
    }
}

/// `v`-range of the atom's leaf in `rD²`, in the spec's own coordinates.
fn v_range(lambda: Eigenvalue, m: f64, r: f64) -> Result<Option<(f64, Option<f64>)>> {
    Ok(match leaf_domain(lambda, m, r)? {
        LeafDomain::Empty => None,
        LeafDomain::HalfPlane { v_min } => {
            Some(((v_min - coordinate_shift(lambda, m)).max(0.0), None))
        }
        LeafDomain::Strip { v_min, v_max } => Some((v_min, Some(v_max))),
    })
}

struct Leaf<'a> {
    lambda: f64,
    c1: f64,
    c2: f64,
    spec: &'a HarmonicSpec,
}

impl Leaf<'_> {
    fn jacobian(&self, v: f64) -> f64 {
        2.0 * (self.c1 * (-2.0 * v).exp() + self.c2 * (-2.0 * self.lambda * v).exp())
    }

    /// Bound `P + Q·v` on the `u`-integrated density.
    fn inner_bound(&self) -> (f64, f64) {
        let (a, b) = self.spec.envelope();
        match self.spec {
            HarmonicSpec::Poisson(p) => (TAU * a + p.excess_integral().abs(), TAU * b),
            HarmonicSpec::Fourier(_) => (TAU * a, TAU * b),
        }
    }

    /// `∫ H(u, v) du` over the atom's `u`-extent.
    fn inner(&self, v: f64, k0: i64, cfg: &QuadratureConfig) -> Result<Estimate> {
        let (p, q) = self.inner_bound();
        let abs = 1e-2 * cfg.rel_tol * (p + q * v).max(f64::MIN_POSITIVE);
        let rel = 0.1 * cfg.rel_tol;
        match self.spec {
            HarmonicSpec::Fourier(f) => {
                let b = f.b as f64;
                let u0 = TAU * k0 as f64;
                // Average over the b copies of the 2π window that make up one
                // period, so the result is the mass per fundamental window.
                let e = integrate(
                    |u| self.spec.eval_unchecked(u, v),
                    u0,
                    u0 + TAU * b,
                    rel,
                    abs * b,
                    cfg.max_depth,
                )?;
                Ok(e * (1.0 / b))
            }
            HarmonicSpec::Poisson(ps) => {
                let line = TAU * (ps.tail() + ps.c_lin() * v);
                let bump = excess_over_line(ps, v, k0, rel, abs, cfg.max_depth)?;
                Ok(Estimate {
                    value: line + bump.value,
                    error: bump.error,
                })
            }
        }
    }
}

/// `∫_ℝ P_v[B − tail](u) du`, via `u = c + s·tan θ` centred on the `k0` window.
fn excess_over_line(
    p: &PoissonSpec,
    v: f64,
    k0: i64,
    rel: f64,
    abs: f64,
    max_depth: u32,
) -> Result<Estimate> {
    let (lo, hi) = p.range();
    let c = TAU * k0 as f64 + PI;
    let s = 0.5 * (hi - lo) + v + 1.0;
    integrate(
        |th| {
            let (sn, cs) = th.sin_cos();
            if cs <= 0.0 {
                return 0.0;
            }
            p.excess(c + s * sn / cs, v) * s / (cs * cs)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        rel,
        abs,
        max_depth,
    )
}

/// Unweighted mass of one atom on `rD²`.
pub fn atom_mass(
    lambda: Eigenvalue,
    atom: &TransversalAtom,
    r: f64,
    k0: i64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    check_radius(r)?;
    cfg.validate()?;
    let m = atom.modulus();
    let Some((v0, v1)) = v_range(lambda, m, r)? else {
        return Ok(Estimate::default());
    };
    let (c1, c2) = jacobian_coefficients(lambda, m);
    let leaf = Leaf {
        lambda: lambda.value(),
        c1,
        c2,
        spec: &atom.harmonic,
    };
    let abs = cfg.abs_tol * r * r;
    let density = |v: f64| -> Result<Estimate> {
        let e = leaf.inner(v, k0, cfg)?;
        Ok(e * leaf.jacobian(v))
    };
    match v1 {
        Some(v1) => integrate_nested(density, v0, v1, cfg.rel_tol, abs, cfg.max_depth),
        None => {
            // Envelope (P + Qv)·2(c1 + c2)e^{−2γv} of the integrand.
            let g = 2.0 * leaf.lambda.min(1.0);
            let (p, q) = leaf.inner_bound();
            let amp = 2.0 * (c1 + c2);
            let env = |v: f64| (p + q * v) * amp * (-g * v).exp();
            let target = abs * 10f64.powf(-cfg.v_tail_cutoff_digits);
            let mut vc = v0;
            let step = 1.0 / g;
            while env(vc) >= target {
                vc += step;
            }
            let tail = amp * (-g * vc).exp() * ((p + q * vc) / g + q / (g * g));
            // Chunk the half-line so each piece spans about one decay length.
            let chunks = (((vc - v0) / step).ceil() as usize).clamp(1, 256);
            let h = (vc - v0) / chunks as f64;
            let mut total = Estimate::default();
            for i in 0..chunks {
                let (a, b) = (v0 + i as f64 * h, v0 + (i + 1) as f64 * h);
                total = total
                    + integrate_nested(
                        density,
                        a,
                        b,
                        cfg.rel_tol,
                        abs / chunks as f64,
                        cfg.max_depth,
                    )?;
            }
            total.error += tail;
            Ok(total)
        }
    }
}

/// `‖T‖_{rD²}` by quadrature over the `k0`-th fundamental window.
pub fn mass_quadrature(current: &Current, r: f64, k0: i64, cfg: &QuadratureConfig) -> Result<MassResult> {
    mass_quadrature_with(&Sequential, current, r, k0, cfg)
}

/// [`mass_quadrature`] with atoms distributed by `exec`.
pub fn mass_quadrature_with<E: Executor>(
    exec: &E,
    current: &Current,
    r: f64,
    k0: i64,
    cfg: &QuadratureConfig,
) -> Result<MassResult> {
    let rs = [r];
    let mut out = masses_at_radii(exec, current, &rs, k0, cfg)?;
    Ok(out.remove(0))
}

/// Quadrature masses at several radii, parallel over `(atom, r)` tasks.
///
/// Per-radius sums are reduced in atom order, so results do not depend on
/// the executor.
pub fn masses_at_radii<E: Executor>(
    exec: &E,
    current: &Current,
    rs: &[f64],
    k0: i64,
    cfg: &QuadratureConfig,
) -> Result<Vec<MassResult>> {
    let lambda = current.lambda();
    let atoms = current.atoms();
    let tasks: Vec<(usize, usize)> = (0..rs.len())
        .flat_map(|i| (0..atoms.len()).map(move |j| (i, j)))
        .collect();
    let results = exec.map(&tasks, |&(i, j)| atom_mass(lambda, &atoms[j], rs[i], k0, cfg));
    let mut out = Vec::with_capacity(rs.len());
    let mut it = results.into_iter();
    for &r in rs {
        let mut value = 0.0;
        let mut error = 0.0;
        for atom in atoms {
            let e = it.next().expect("one result per task")?;
            value += atom.weight * e.value;
            error += atom.weight * e.error;
        }
        out.push(MassResult {
            value,
            error_estimate: error,
            r,
        });
    }
    Ok(out)
}

/// Per-atom bracket `(A, B)` for `λ > 0`: the atom's mass is
/// `2πr²·(a0·A + b0·B)` for a Fourier spec with linear part `a0 + b0·v`.
pub fn positive_bracket(lambda: f64, alpha_modulus: f64, r: f64) -> (f64, f64) {
    let l = lambda;
    let log_r = r.ln();
    if alpha_modulus < r.powf(1.0 - l) {
        let e = alpha_modulus * alpha_modulus * r.powf(2.0 * l - 2.0);
        (1.0 + l * e, 0.5 - log_r + e * (0.5 - l * log_r))
    } else if alpha_modulus < 1.0 {
        let log_a = alpha_modulus.ln();
        let e = alpha_modulus.powf(-2.0 / l) * r.powf(2.0 / l - 2.0);
        (
            e + l,
            0.5 + 0.5 * e + log_a - log_r + e * (log_a - log_r) / l,
        )
    } else {
        let e = alpha_modulus.powf(-2.0 / l) * r.powf(2.0 / l - 2.0);
        (e + l, 0.5 + 0.5 * e - log_r - e * log_r / l)
    }
}

/// `(a0, b0)` equivalent for the closed forms.
///
/// A Poisson atom integrates like a constant atom carrying its tail plus the
/// window-averaged excess.
fn linear_coefficients(spec: &HarmonicSpec) -> (f64, f64) {
    match spec {
        HarmonicSpec::Fourier(f) => (f.a0, f.b0),
        HarmonicSpec::Poisson(p) => (p.tail() + p.excess_integral() / TAU, p.c_lin()),
    }
}

fn require_positive(current: &Current) -> Result<f64> {
    let l = current.lambda().value();
    if l <= 0.0 {
        return Err(Error::Unsupported("closed form needs a positive eigenvalue".into()));
    }
    Ok(l)
}

/// `‖T‖_{rD²}` from the three-region closed form, for periodic Fourier
/// currents with `λ > 0`.
pub fn mass_closed_form_positive_periodic(current: &Current, r: f64) -> Result<f64> {
    require_positive(current)?;
    if current.is_periodic().is_none() || !current.is_fourier() {
        return Err(Error::Unsupported(
            "closed form needs a periodic Fourier current".into(),
        ));
    }
    mass_closed_form_positive(current, r)
}

/// The same closed form with Poisson atoms replaced by their constant
/// equivalents; exact for the whole-leaf Poisson mass model.
pub fn mass_closed_form_positive(current: &Current, r: f64) -> Result<f64> {
    let l = require_positive(current)?;
    check_radius(r)?;
    let sum: f64 = current
        .atoms()
        .iter()
        .map(|a| {
            let (a0, b0) = linear_coefficients(&a.harmonic);
            let (ca, cb) = positive_bracket(l, a.modulus(), r);
            a.weight * (a0 * ca + if b0 == 0.0 { 0.0 } else { b0 * cb })
        })
        .sum();
    Ok(TAU * r * r * sum)
}

/// `lim_{r→0} ν(r)` for `λ > 0`; infinite if any atom grows linearly.
pub fn closed_form_limit_positive(current: &Current) -> Result<f64> {
    let l = require_positive(current)?;
    let mut sum = 0.0;
    for a in current.atoms() {
        let (a0, b0) = linear_coefficients(&a.harmonic);
        if b0 > 0.0 {
            return Ok(f64::INFINITY);
        }
        let m = a.modulus();
        let lim = if l < 1.0 {
            l
        } else if m < 1.0 {
            1.0 + m * m
        } else {
            1.0 / (m * m) + 1.0
        };
        sum += a.weight * a0 * lim;
    }
    Ok(2.0 * sum)
}

fn check_negative(lambda: f64, alpha_modulus: f64, r: f64) -> Result<()> {
    if !(-1.0..0.0).contains(&lambda) {
        return Err(domain(format!("eigenvalue {lambda} must be in [-1, 0)")));
    }
    check_radius(r)?;
    if !(alpha_modulus > 0.0 && alpha_modulus < r.powf(1.0 - lambda)) {
        return Err(domain(format!(
            "|alpha| = {alpha_modulus} not admissible at r = {r}"
        )));
    }
    Ok(())
}

/// Normalized mass of `a0(1 − λv/log|α|)` on a strip leaf.
pub fn ia(lambda: f64, alpha_modulus: f64, r: f64) -> Result<f64> {
    check_negative(lambda, alpha_modulus, r)?;
    let l = lambda;
    let (log_a, log_r) = (alpha_modulus.ln(), r.ln());
    let p = alpha_modulus.powf(-2.0 / l) * r.powf(2.0 / l - 2.0);
    let q = alpha_modulus * alpha_modulus * r.powf(2.0 * l - 2.0);
    Ok(1.0 + l * q
        + (-2.0 * p * log_r + l * p + 2.0 * l * l * q * log_r - l * q) / (2.0 * log_a))
}

/// Normalized mass of `b0·v` on a strip leaf.
pub fn ib(lambda: f64, alpha_modulus: f64, r: f64) -> Result<f64> {
    check_negative(lambda, alpha_modulus, r)?;
    let l = lambda;
    let (log_a, log_r) = (alpha_modulus.ln(), r.ln());
    let p = alpha_modulus.powf(-2.0 / l) * r.powf(2.0 / l - 2.0);
    let q = alpha_modulus * alpha_modulus * r.powf(2.0 * l - 2.0);
    Ok(0.5 * (-p * (l + 2.0 * log_a - 2.0 * log_r) / l + q * (1.0 - 2.0 * l * log_r) - 2.0 * log_a))
}

/// `‖T‖_{rD²}` for periodic Fourier currents with `λ < 0`.
pub fn mass_closed_form_negative_periodic(current: &Current, r: f64) -> Result<f64> {
    let l = current.lambda().value();
    if l >= 0.0 {
        return Err(Error::Unsupported("closed form needs a negative eigenvalue".into()));
    }
    if current.is_periodic().is_none() || !current.is_fourier() {
        return Err(Error::Unsupported(
            "closed form needs a periodic Fourier current".into(),
        ));
    }
    check_radius(r)?;
    let threshold = r.powf(1.0 - l);
    let mut sum = 0.0;
    for a in current.atoms() {
        let m = a.modulus();
        if m >= threshold {
            continue;
        }
        let (a0, b0) = linear_coefficients(&a.harmonic);
        let mut term = a0 * ia(l, m, r)?;
        if b0 != 0.0 {
            term += b0 * ib(l, m, r)?;
        }
        sum += a.weight * term;
    }
    Ok(TAU * r * r * sum)
}

/// Closed form for whichever sign `λ` has.
pub fn mass_closed_form(current: &Current, r: f64) -> Result<f64> {
    if current.lambda().is_positive() {
        mass_closed_form_positive_periodic(current, r)
    } else {
        mass_closed_form_negative_periodic(current, r)
    }
}

/// Ratio of `(1/r²)∫_{v>v_r} H(u,v)·J(v) dv` to `H(u, v_r)` for a Poisson spec.
///
/// `v_r` is the lower edge of the leaf in `rD²`, in shifted coordinates.
pub fn boundary_reduction_check(
    lambda: f64,
    alpha_modulus: f64,
    spec: &PoissonSpec,
    r: f64,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(domain(format!("eigenvalue {lambda} must be in (0, 1]")));
    }
    if !(r > 0.0 && r <= (-1.0 / lambda).exp() * (1.0 + 1e-15)) {
        return Err(domain(format!("radius {r} must be in (0, e^(-1/lambda)]")));
    }
    if spec.c_lin() != 0.0 {
        return Err(domain("boundary reduction assumes c_lin = 0"));
    }
    let ev = if lambda == 1.0 {
        Eigenvalue::rational(1, 1)?
    } else {
        Eigenvalue::irrational(lambda)?
    };
    let Some((v0, _)) = v_range(ev, alpha_modulus, r)? else {
        return Err(domain("empty leaf"));
    };
    let (c1, c2) = jacobian_coefficients(ev, alpha_modulus);
    let spec_h = HarmonicSpec::Poisson(spec.clone());
    let leaf = Leaf {
        lambda,
        c1,
        c2,
        spec: &spec_h,
    };
    let g = 2.0 * lambda.min(1.0);
    let len = (40.0 + 3.0 * cfg.v_tail_cutoff_digits) / g;
    let chunks = 64;
    let mut total = 0.0;
    for i in 0..chunks {
        let a = v0 + len * i as f64 / chunks as f64;
        let b = v0 + len * (i + 1) as f64 / chunks as f64;
        total += integrate(
            |v| spec.poisson(u, v) * leaf.jacobian(v),
            a,
            b,
            cfg.rel_tol,
            cfg.abs_tol * r * r / chunks as f64,
            cfg.max_depth,
        )?
        .value;
    }
    Ok(total / (r * r) / spec.poisson(u, v0))
}

/// `|I_N|` for the interval decomposition at scale `k`.
pub fn interval(n: i64, k: i64) -> (f64, f64) {
    let w = TAU * k as f64;
    match n {
        0 => (-w + TAU, w),
        n if n > 0 => (w * n as f64, w * (n + 1) as f64),
        n => (w * (n - 1) as f64 + TAU, w * n as f64 + TAU),
    }
}

/// Kernel weight `1/(1 + (|N|+1)²)` of the interval lemma.
pub fn interval_weight(n: i64) -> f64 {
    let m = (n.unsigned_abs() + 1) as f64;
    1.0 / (1.0 + m * m)
}

/// Declared constant relating the raw interval sum to `ν`.
pub fn lower_bound_constant(lambda: f64) -> f64 {
    2.0 * lambda.min(1.0) / PI
}

/// Default truncation of the interval sum.
pub const DEFAULT_N_MAX: i64 = 200;

/// Rigorous lower bound on the Lelong number of a Poisson current.
pub fn lower_bound_nonperiodic(current: &Current, k: i64, cfg: &QuadratureConfig) -> Result<f64> {
    lower_bound_nonperiodic_with(current, k, DEFAULT_N_MAX, cfg)
}

/// [`lower_bound_nonperiodic`] with an explicit truncation `|N| ≤ n_max`.
///
/// The window-averaged boundary integral over `I_N` is `|I_N|` times the
/// atom's equivalent constant `tail + ∫(B − tail)/2π`; the excess integral is
/// computed by quadrature.
pub fn lower_bound_nonperiodic_with(
    current: &Current,
    k: i64,
    n_max: i64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let l = require_positive(current)?;
    if k < 2 {
        return Err(domain(format!("interval scale k = {k} must be >= 2")));
    }
    if !current.has_bounded_growth() {
        return Err(Error::Unsupported("lower bound assumes c_lin = 0".into()));
    }
    let mut per_window = 0.0;
    for a in current.atoms() {
        let mean = match &a.harmonic {
            HarmonicSpec::Poisson(p) => {
                let (lo, hi) = p.range();
                let excess = integrate(
                    |y| p.boundary(y) - p.tail(),
                    lo,
                    hi,
                    cfg.rel_tol,
                    cfg.abs_tol,
                    cfg.max_depth,
                )?;
                p.tail() + excess.value / TAU
            }
            HarmonicSpec::Fourier(f) => f.a0,
        };
        per_window += a.weight * mean;
    }
    let w = TAU * k as f64;
    let raw: f64 = (-n_max..=n_max)
        .map(|n| {
            let (a, b) = interval(n, k);
            interval_weight(n) * (b - a) * per_window / w
        })
        .sum();
    Ok(lower_bound_constant(l) * raw)
}
