//! Deterministic test currents covering every theorem branch.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::current::{build_current, Current, TransversalAtom};
use crate::error::Result;
use crate::foliation::Eigenvalue;
use crate::harmonic::{FourierSpec, HarmonicSpec, PoissonSpec};

/// Which theorem a case exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    /// `λ > 0`, bounded growth: positive Lelong number.
    Positive,
    /// `λ < 0`, periodic: zero Lelong number.
    Negative,
    /// Linear growth in `v`: infinite Lelong number.
    Divergent,
}

/// A named current.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    /// Stable identifier.
    pub id: String,
    /// The current.
    pub current: Current,
    /// The branch it exercises.
    pub kind: CaseKind,
}

fn polar(m: f64, arg: f64) -> Complex64 {
    Complex64::from_polar(m, arg)
}

/// Normalized half-plane Fourier spec with random decaying modes.
fn random_fourier(rng: &mut ChaCha8Rng, b: u32, n_modes: usize, b0: f64) -> Result<HarmonicSpec> {
    let mut f = FourierSpec::linear(1.0, b0).with_period(b);
    for i in 0..n_modes {
        let k = -(i as i32 + 1);
        let a: f64 = rng.gen_range(-0.2..0.2);
        let s: f64 = rng.gen_range(-0.2..0.2);
        f = f.with_mode(k, a, s);
    }
    // Keep Σ|coef| ≤ a0 with room to spare.
    let l1 = f.mode_l1();
    if l1 > 0.8 {
        for m in &mut f.modes {
            m.a *= 0.8 / l1;
            m.b *= 0.8 / l1;
        }
    }
    HarmonicSpec::from(f).normalize()
}

/// Strip spec `1 − v/C + b0·v` plus optional decaying modes.
fn strip_spec(c: f64, b: u32, b0: f64, modes: &[(i32, f64, f64)]) -> Result<HarmonicSpec> {
    let mut f = FourierSpec::linear(1.0, b0).with_period(b).on_strip(c);
    for &(k, a, s) in modes {
        f = f.with_mode(k, a, s);
    }
    HarmonicSpec::from(f).normalize()
}

/// Boundary `tail + Σ h_i exp(−(y − c_i)²/2σ²)` sampled on `[−8, 8]`.
pub fn bump_boundary(rng: &mut ChaCha8Rng, tail: f64, bumps: usize, c_lin: f64) -> Result<HarmonicSpec> {
    let params: Vec<(f64, f64, f64)> = (0..bumps)
        .map(|_| {
            (
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.6..1.2),
            )
        })
        .collect();
    let f = |y: f64| {
        tail + params
            .iter()
            .map(|(c, h, s)| h * (-(y - c) * (y - c) / (2.0 * s * s)).exp())
            .sum::<f64>()
    };
    let spec = PoissonSpec::sample(-8.0, 8.0, 161, f, tail, c_lin)?;
    HarmonicSpec::from(spec).normalize()
}

/// `α_j = 4^{−j}`, `w_j = 2^{−j}`, `j = 1..=n`, on strips of height
/// `log|α_j|/λ`, with `H = 1 − v/C + b0_scale·v/C` and optional modes.
pub fn accumulation_family(
    lambda: Eigenvalue,
    n: i32,
    b: u32,
    b0_scale: f64,
    modes: &[(i32, f64, f64)],
) -> Result<Current> {
    let atoms = (1..=n)
        .map(|j| {
            let m = 4f64.powi(-j);
            let c = m.ln() / lambda.value();
            let spec = strip_spec(c, b, b0_scale / c, modes)?;
            Ok(TransversalAtom::new(polar(m, 0.3 * j as f64), 2f64.powi(-j), spec))
        })
        .collect::<Result<Vec<_>>>()?;
    build_current(lambda, atoms)
}

fn single_strip(lambda: Eigenvalue, m: f64, b0_scale: f64) -> Result<Current> {
    let c = m.ln() / lambda.value();
    let spec = strip_spec(c, 1, b0_scale / c, &[])?;
    build_current(lambda, alloc::vec![TransversalAtom::new(polar(m, 0.0), 1.0, spec)])
}

/// Current families for parameter sweeps, defined for either sign of `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// One constant atom (`|α| = 0.5`, or a strip atom at `|α| = 0.3`).
    Constant,
    /// Six (`λ > 0`) or eight (`λ < 0`) atoms accumulating at `α = 0`.
    Accumulating,
    /// One atom growing linearly in `v`.
    Linear,
}

impl Family {
    /// All families, in sweep order.
    pub const ALL: [Family; 3] = [Family::Constant, Family::Accumulating, Family::Linear];

    /// Short name used in files and flags.
    pub fn name(self) -> &'static str {
        match self {
            Family::Constant => "constant",
            Family::Accumulating => "family",
            Family::Linear => "b0",
        }
    }

    /// Inverse of [`Family::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// The family's current for `lambda`.
    pub fn build(self, lambda: Eigenvalue) -> Result<Current> {
        let positive = lambda.is_positive();
        match (self, positive) {
            (Family::Constant, true) => build_current(
                lambda,
                alloc::vec![TransversalAtom::new(polar(0.5, 0.0), 1.0, FourierSpec::constant(1.0))],
            ),
            (Family::Constant, false) => single_strip(lambda, 0.3, 0.0),
            (Family::Accumulating, true) => {
                let atoms = (1..=6)
                    .map(|j| TransversalAtom::new(polar(4f64.powi(-j), 0.3 * j as f64), 2f64.powi(-j), FourierSpec::constant(1.0)))
                    .collect();
                build_current(lambda, atoms)
            }
            (Family::Accumulating, false) => accumulation_family(lambda, 8, 1, 0.0, &[]),
            (Family::Linear, true) => build_current(
                lambda,
                alloc::vec![TransversalAtom::new(polar(0.5, 0.0), 1.0, FourierSpec::linear(1.0, 0.5))],
            ),
            (Family::Linear, false) => single_strip(lambda, 0.3, 0.5),
        }
    }
}

fn case(id: &str, kind: CaseKind, current: Current) -> Case {
    Case {
        id: String::from(id),
        current,
        kind,
    }
}

/// The standard verification corpus.
pub fn standard_corpus(seed: u64) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Eigenvalue::rational(1, 1)?;
    let half = Eigenvalue::rational(1, 2)?;
    let two_thirds = Eigenvalue::rational(2, 3)?;
    let root = Eigenvalue::irrational(SQRT_2 - 1.0)?;
    let inv_pi = Eigenvalue::irrational(1.0 / PI)?;
    let mut out = Vec::new();

    use CaseKind::*;
    out.push(case(
        "pos-1-constant",
        Positive,
        build_current(one, alloc::vec![TransversalAtom::new(polar(0.5, 0.0), 1.0, FourierSpec::constant(1.0))])?,
    ));
    let atoms = [(0.3, 0.0, 0.5), (0.8, 1.0, 0.3), (1.5, 2.0, 0.2)]
        .iter()
        .map(|&(m, arg, w)| Ok(TransversalAtom::new(polar(m, arg), w, random_fourier(&mut rng, 1, 2, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    out.push(case("pos-1-multi", Positive, build_current(one, atoms)?));

    for (id, l, b, mods) in [
        ("pos-1/2-fourier", half, 2u32, [0.2, 0.7, 1.6]),
        ("pos-2/3-fourier", two_thirds, 3, [0.1, 0.5, 2.0]),
    ] {
        let atoms = mods
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                Ok(TransversalAtom::new(
                    polar(m, i as f64),
                    1.0 / mods.len() as f64,
                    random_fourier(&mut rng, b, 3, 0.0)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(case(id, Positive, build_current(l, atoms)?));
    }

    let atoms = (1..=6)
        .map(|j| {
            Ok(TransversalAtom::new(
                polar(4f64.powi(-j), 0.0),
                2f64.powi(-j),
                random_fourier(&mut rng, 2, 1, 0.0)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    out.push(case("pos-1/2-family", Positive, build_current(half, atoms)?));

    for (tag, l) in [("sqrt2m1", root), ("inv-pi", inv_pi)] {
        let atoms = alloc::vec![
            TransversalAtom::new(polar(0.4, 0.0), 0.6, random_fourier(&mut rng, 1, 2, 0.0)?),
            TransversalAtom::new(polar(1.3, 1.0), 0.4, random_fourier(&mut rng, 1, 2, 0.0)?),
        ];
        out.push(case(&format!("pos-{tag}-fourier"), Positive, build_current(l, atoms)?));
        let atoms = alloc::vec![
            TransversalAtom::new(polar(0.5, 0.0), 0.7, bump_boundary(&mut rng, 0.5, 2, 0.0)?),
            TransversalAtom::new(polar(1.2, 2.0), 0.3, bump_boundary(&mut rng, 0.3, 1, 0.0)?),
        ];
        out.push(case(&format!("pos-{tag}-poisson"), Positive, build_current(l, atoms)?));
    }

    out.push(case(
        "div-1-b0",
        Divergent,
        build_current(one, alloc::vec![TransversalAtom::new(polar(0.5, 0.0), 1.0, FourierSpec::linear(1.0, 1.0))])?,
    ));
    let spec = bump_boundary(&mut rng, 0.5, 1, 1.0)?;
    out.push(case(
        "div-1/2-poisson",
        Divergent,
        build_current(half, alloc::vec![TransversalAtom::new(polar(0.5, 0.0), 1.0, spec)])?,
    ));
    let spec = random_fourier(&mut rng, 3, 2, 0.5)?;
    out.push(case(
        "div-2/3-b0",
        Divergent,
        build_current(two_thirds, alloc::vec![TransversalAtom::new(polar(0.7, 0.0), 1.0, spec)])?,
    ));

    let neg1 = Eigenvalue::negative(-1.0)?;
    let neg_half = Eigenvalue::negative(-0.5)?;
    let neg_quarter = Eigenvalue::negative(-0.25)?;
    out.push(case("neg-1-single", Negative, single_strip(neg1, (-1.0f64).exp(), 0.0)?));
    out.push(case("neg-1-family", Negative, accumulation_family(neg1, 8, 1, 0.0, &[])?));
    let modes = [(-1, rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2))];
    out.push(case("neg-1/2-family", Negative, accumulation_family(neg_half, 8, 2, 1.0, &modes)?));
    out.push(case("neg-1/4-family", Negative, accumulation_family(neg_quarter, 8, 1, 0.0, &[])?));
    out.push(case("neg-1-family-b0", Negative, accumulation_family(neg1, 8, 1, 0.5, &[])?));
    out.push(case("neg-1/2-single", Negative, single_strip(neg_half, 0.3, 0.0)?));
    Ok(out)
}

/// Ten periodic currents on which quadrature and closed forms are compared.
pub fn periodic_fixtures() -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = Eigenvalue::rational(1, 1)?;
    let half = Eigenvalue::rational(1, 2)?;
    let two_thirds = Eigenvalue::rational(2, 3)?;
    let neg1 = Eigenvalue::negative(-1.0)?;
    let neg_half = Eigenvalue::negative(-0.5)?;
    let single = |l: Eigenvalue, m: f64, spec: HarmonicSpec| {
        build_current(l, alloc::vec![TransversalAtom::new(polar(m, 0.4), 1.0, spec)])
    };
    use CaseKind::*;
    let mut out = alloc::vec![
        case("fx-1-constant", Positive, single(one, 0.5, FourierSpec::constant(1.0).into())?),
        case("fx-1-modes-b0", Divergent, single(one, 0.7, random_fourier(&mut rng, 1, 3, 0.3)?)?),
        case("fx-1-outer", Positive, single(one, 1.5, random_fourier(&mut rng, 1, 2, 0.0)?)?),
        case("fx-1/2-inner", Positive, single(half, 0.3, random_fourier(&mut rng, 2, 3, 0.0)?)?),
        case("fx-1/2-outer-b0", Divergent, single(half, 1.4, random_fourier(&mut rng, 2, 2, 0.2)?)?),
        case("fx-2/3-modes", Positive, single(two_thirds, 0.6, random_fourier(&mut rng, 3, 3, 0.0)?)?),
    ];
    let atoms = [(0.05, 0.3), (0.9, 0.5), (2.5, 0.2)]
        .iter()
        .map(|&(m, w)| Ok(TransversalAtom::new(polar(m, m), w, random_fourier(&mut rng, 3, 2, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    out.push(case("fx-2/3-multi", Positive, build_current(two_thirds, atoms)?));
    out.push(case("fx-neg1-family", Negative, accumulation_family(neg1, 8, 1, 0.0, &[])?));
    out.push(case("fx-neg1-single-b0", Negative, single_strip(neg1, (-1.0f64).exp(), 0.5)?));
    let modes = [(-1, 0.15, -0.1), (-2, 0.05, 0.05)];
    out.push(case(
        "fx-neg1/2-family-modes",
        Negative,
        accumulation_family(neg_half, 6, 2, 1.0, &modes)?,
    ));
    Ok(out)
}
