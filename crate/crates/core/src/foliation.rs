//! Geometry of the linear foliation `z∂/∂z + λw∂/∂w` on the unit bidisc.
//!
//! Leaves are parametrized by `ψ_α(ζ) = (e^{iζ}, α e^{iλζ})` with
//! `ζ = u + iv`, so that `|z| = e^{-v}` and `|w| = |α| e^{-λv}`. The
//! monodromy around `z = 0` acts on the transversal by `α ↦ α e^{2πiλ}`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Euclid;

use crate::error::{domain, Error, Result};

/// Arithmetic class of the eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenClass {
    /// `λ = a/b` in lowest terms.
    PositiveRational {
        /// Numerator.
        a: u32,
        /// Denominator; also the period multiple of every leaf.
        b: u32,
    },
    /// `λ ∈ (0, 1)` declared irrational by the caller.
    PositiveIrrational,
    /// `λ ∈ [-1, 0)`.
    Negative,
}

/// The eigenvalue `λ`, normalized to `0 < |λ| ≤ 1`.
///
/// The class is always declared, never inferred from the float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    value: f64,
    class: EigenClass,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Eigenvalue {
    /// `λ = a/b` with `gcd(a, b) = 1` and `a ≤ b`.
    pub fn rational(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(domain("rational eigenvalue needs a, b >= 1"));
        }
        if gcd(a, b) != 1 {
            return Err(domain(format!("{a}/{b} is not in lowest terms")));
        }
        if a > b {
            return Err(domain(format!("{a}/{b} exceeds 1")));
        }
        Ok(Self {
            value: a as f64 / b as f64,
            class: EigenClass::PositiveRational { a, b },
        })
    }

    /// A positive irrational eigenvalue in `(0, 1)`.
    pub fn irrational(value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(domain(format!("irrational eigenvalue {value} not in (0,1)")));
        }
        Ok(Self {
            value,
            class: EigenClass::PositiveIrrational,
        })
    }

    /// A negative eigenvalue in `[-1, 0)`.
    pub fn negative(value: f64) -> Result<Self> {
        if !(-1.0..0.0).contains(&value) {
            return Err(domain(format!("negative eigenvalue {value} not in [-1,0)")));
        }
        Ok(Self {
            value,
            class: EigenClass::Negative,
        })
    }

    /// Numerical value of `λ`.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Declared arithmetic class.
    pub fn class(&self) -> EigenClass {
        self.class
    }

    /// `λ > 0`.
    pub fn is_positive(&self) -> bool {
        self.value > 0.0
    }

    /// Fractional part of `kλ` in `[0, 1)`, exact for rational `λ`.
    pub(crate) fn turns(&self, k: i64) -> f64 {
        match self.class {
            EigenClass::PositiveRational { a, b } => {
                let num = (k as i128 * a as i128).rem_euclid(b as i128);
                num as f64 / b as f64
            }
            _ => {
                let x = k as f64 * self.value;
                x - x.floor()
            }
        }
    }
}

/// The `(u, v)` range of a leaf intersected with `rD²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeafDomain {
    /// `v > v_min`, any `u` (`λ > 0`).
    HalfPlane {
        /// Lower edge, in unshifted leaf coordinates.
        v_min: f64,
    },
    /// `v_min < v < v_max` (`λ < 0`).
    Strip {
        /// Lower edge.
        v_min: f64,
        /// Upper edge.
        v_max: f64,
    },
    /// The leaf misses `rD²`.
    Empty,
}

/// A point `(z, w)` of `ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafPoint {
    /// First coordinate.
    pub z: Complex64,
    /// Second coordinate.
    pub w: Complex64,
}

impl LeafPoint {
    /// Whether the point lies in the open unit bidisc.
    pub fn in_bidisc(&self) -> bool {
        self.z.norm() < 1.0 && self.w.norm() < 1.0
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("radius {r} not in (0,1]")))
    }
}

fn check_modulus(alpha_modulus: f64) -> Result<()> {
    if alpha_modulus > 0.0 && alpha_modulus.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("|alpha| = {alpha_modulus} must be positive")))
    }
}

/// Range of `v` for the leaf through `α` inside `rD²`.
pub fn leaf_domain(lambda: Eigenvalue, alpha_modulus: f64, r: f64) -> Result<LeafDomain> {
    check_modulus(alpha_modulus)?;
    check_radius(r)?;
    let l = lambda.value();
    let threshold = r.powf(1.0 - l);
    let log_r = r.ln();
    let far_edge = (alpha_modulus.ln() - log_r) / l;
    if l > 0.0 {
        let v_min = if alpha_modulus >= threshold {
            far_edge
        } else {
            -log_r
        };
        Ok(LeafDomain::HalfPlane { v_min })
    } else if alpha_modulus >= threshold {
        Ok(LeafDomain::Empty)
    } else {
        Ok(LeafDomain::Strip {
            v_min: -log_r,
            v_max: far_edge,
        })
    }
}

/// Shift `log⁺|α| / λ` between leaf coordinates and the coordinates in which
/// the harmonic function of a `λ > 0` atom is stored.
pub fn coordinate_shift(lambda: Eigenvalue, alpha_modulus: f64) -> f64 {
    if lambda.is_positive() && alpha_modulus > 1.0 {
        alpha_modulus.ln() / lambda.value()
    } else {
        0.0
    }
}

/// `ψ_α(ζ) = (e^{iζ}, α e^{iλζ})`.
pub fn psi(lambda: Eigenvalue, alpha: Complex64, zeta: Complex64) -> LeafPoint {
    let i = Complex64::i();
    LeafPoint {
        z: (i * zeta).exp(),
        w: alpha * (i * lambda.value() * zeta).exp(),
    }
}

/// Area density of `i dz∧dz̄ + i dw∧dw̄` pulled back by `ψ_α`, per `du dv`.
///
/// For `|α| ≥ 1` the density is expressed in the shifted coordinate
/// `v ↦ v + log|α|/λ` used for the harmonic function.
pub fn jacobian_density(lambda: Eigenvalue, alpha_modulus: f64, v: f64) -> f64 {
    let (c1, c2) = jacobian_coefficients(lambda, alpha_modulus);
    let l = lambda.value();
    2.0 * (c1 * (-2.0 * v).exp() + c2 * (-2.0 * l * v).exp())
}

/// Coefficients `(c1, c2)` with density `2(c1 e^{-2v} + c2 e^{-2λv})`.
pub(crate) fn jacobian_coefficients(lambda: Eigenvalue, alpha_modulus: f64) -> (f64, f64) {
    let l = lambda.value();
    if l > 0.0 && alpha_modulus >= 1.0 {
        (alpha_modulus.powf(-2.0 / l), l * l)
    } else {
        (1.0, l * l * alpha_modulus * alpha_modulus)
    }
}

/// `α e^{2kπiλ}`.
pub fn monodromy(lambda: Eigenvalue, alpha: Complex64, k: i64) -> Complex64 {
    alpha * Complex64::from_polar(1.0, TAU * lambda.turns(k))
}

/// Angular tolerance used by [`equivalent`].
pub const ANGLE_TOL: f64 = 1e-9;

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = Euclid::rem_euclid(&(a - b), &TAU);
    d.min(TAU - d)
}

/// Smallest `|k| ≤ k_max` with `β = α e^{2kπiλ}`, preferring `k ≥ 0` on ties.
pub fn equivalent(
    lambda: Eigenvalue,
    alpha: Complex64,
    beta: Complex64,
    k_max: u32,
) -> Result<Option<i64>> {
    if alpha == Complex64::new(0.0, 0.0) || beta == Complex64::new(0.0, 0.0) {
        return Err(domain("equivalence needs nonzero transversal points"));
    }
    let (ma, mb) = (alpha.norm(), beta.norm());
    if (ma - mb).abs() > 1e-9 * ma.max(mb) {
        return Ok(None);
    }
    let gap = (beta / alpha).arg();
    for n in 0..=k_max as i64 {
        for k in [n, -n] {
            if angle_distance(gap, TAU * lambda.turns(k)) <= ANGLE_TOL {
                return Ok(Some(k));
            }
            if n == 0 {
                break;
            }
        }
    }
    Ok(None)
}

/// Sample the leaf's trace on the torus `|z| = r, |w| = |α| r^λ` as points
/// `(arg z, arg w)` in `[0, 2π)²` for `u ∈ [0, u_span]`.
pub fn torus_curve(
    lambda: Eigenvalue,
    alpha: Complex64,
    r: f64,
    u_span: f64,
    samples: usize,
) -> Result<Vec<[f64; 2]>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain(format!("torus radius {r} not in (0,1)")));
    }
    if samples < 2 {
        return Err(domain("torus curve needs at least two samples"));
    }
    if !(u_span > 0.0) {
        return Err(Error::Domain(format!("u span {u_span} must be positive")));
    }
    let phase = alpha.arg();
    let l = lambda.value();
    Ok((0..samples)
        .map(|i| {
            let u = u_span * i as f64 / (samples - 1) as f64;
            [Euclid::rem_euclid(&u, &TAU), Euclid::rem_euclid(&(phase + l * u), &TAU)]
        })
        .collect())
}

/// Circular distance between two torus points.
pub fn torus_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    let a = angle_distance(p[0], q[0]);
    let b = angle_distance(p[1], q[1]);
    (a * a + b * b).sqrt()
}
