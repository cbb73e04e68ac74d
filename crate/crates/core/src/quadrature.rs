//! Adaptive Gauss–Kronrod (7/15) quadrature with priority bisection.
//!
//! Error estimates follow QUADPACK's `qk15` rescaling. Integrands may carry
//! their own error (nested integrals); it is folded into the interval error
//! with the Kronrod weights.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;


use crate::error::{Error, Result};

// Kronrod abscissae (positive half), Gauss abscissae interleave at odd indices.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// An integral together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    /// Approximate value.
    pub value: f64,
    /// Nonnegative absolute error estimate.
    pub error: f64,
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

impl core::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, s: f64) -> Estimate {
        Estimate {
            value: self.value * s,
            error: self.error * s.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    est: Estimate,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.est.error.total_cmp(&o.est.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut resk = fc.value * WGK[7];
    let mut resg = fc.value * WG[3];
    let mut resabs = resk.abs();
    let mut inner = fc.error * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (lo, hi) = (f(c - dx)?, f(c + dx)?);
        fv1[j] = lo.value;
        fv2[j] = hi.value;
        let sum = lo.value + hi.value;
        resk += WGK[j] * sum;
        resabs += WGK[j] * (lo.value.abs() + hi.value.abs());
        inner += WGK[j] * (lo.error + hi.error);
        if j % 2 == 1 {
            resg += WG[j / 2] * sum;
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc.value - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let (resk, resabs, resasc) = (resk * h, resabs * h.abs(), resasc * h.abs());
    let mut err = (resk - resg * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Estimate {
        value: resk,
        error: err + inner * h.abs(),
    })
}

/// Upper limit on live subintervals before giving up.
const MAX_PIECES: usize = 4096;

/// Integrate an integrand that reports its own error.
///
/// Stops when the total error is below `max(abs_tol, rel_tol·|I|)`.
/// Intervals at `max_depth` are never split; if the tolerance cannot be met
/// the best estimate is returned inside [`Error::QuadratureFailure`].
pub fn integrate_nested<F>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    if a == b {
        return Ok(Estimate::default());
    }
    let first = kronrod(&mut f, a, b)?;
    let mut total = first;
    let mut heap = BinaryHeap::new();
    let mut frozen = Estimate::default();
    heap.push(Piece {
        a,
        b,
        est: first,
        depth: 0,
    });
    loop {
        let tol = abs_tol.max(rel_tol * total.value.abs());
        if total.error <= tol {
            return Ok(total);
        }
        let Some(p) = heap.pop() else { break };
        if p.depth >= max_depth || heap.len() >= MAX_PIECES {
            frozen = frozen + p.est;
            if frozen.error > tol {
                // Unsplittable error alone exceeds the budget.
                for q in heap.drain() {
                    frozen = frozen + q.est;
                }
                break;
            }
            continue;
        }
        let m = 0.5 * (p.a + p.b);
        let l = kronrod(&mut f, p.a, m)?;
        let r = kronrod(&mut f, m, p.b)?;
        for (lo, hi, est) in [(p.a, m, l), (m, p.b, r)] {
            heap.push(Piece {
                a: lo,
                b: hi,
                est,
                depth: p.depth + 1,
            });
        }
        // Re-sum rather than update in place: a huge parent estimate would
        // otherwise cancel catastrophically against its children.
        total = heap.iter().fold(frozen, |acc, q| acc + q.est);
    }
    let value = frozen.value;
    let error = frozen.error;
    let tol = abs_tol.max(rel_tol * value.abs());
    if error <= tol {
        return Ok(Estimate { value, error });
    }
    Err(Error::QuadratureFailure {
        estimate: value,
        error,
    })
}

/// Integrate a plain function over `[a, b]`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate_nested(
        |x| {
            Ok(Estimate {
                value: f(x),
                error: 0.0,
            })
        },
        a,
        b,
        rel_tol,
        abs_tol,
        max_depth,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        // Kronrod-15 is exact through degree 22.
        let mut f = |x: f64| Ok(Estimate { value: x.powi(21) + 3.0 * x.powi(4), error: 0.0 });
        let e = kronrod(&mut f, -1.0, 2.0).unwrap();
        let exact = (2f64.powi(22) - 1.0) / 22.0 + 3.0 * (32.0 + 1.0) / 5.0;
        assert_relative_eq!(e.value, exact, max_relative = 1e-14);
    }

    #[test]
    fn classic_integrals() {
        let e = integrate(|x| x.sin(), 0.0, PI, 1e-12, 1e-14, 30).unwrap();
        assert_relative_eq!(e.value, 2.0, max_relative = 1e-12);
        let e = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-10, 1e-14, 40).unwrap();
        assert_relative_eq!(e.value, 2.0 / 3.0, max_relative = 1e-10);
        let e = integrate(|x| (-x).exp(), 0.0, 40.0, 1e-12, 1e-14, 30).unwrap();
        assert_relative_eq!(e.value, 1.0 - (-40f64).exp(), max_relative = 1e-12);
        assert!(e.error <= 1e-12);
    }

    #[test]
    fn reported_error_bounds_true_error() {
        for (a, b) in [(0.0, 1.0), (0.0, 10.0), (-3.0, 7.0)] {
            let e = integrate(|x| 1.0 / (1.0 + x * x), a, b, 1e-9, 1e-15, 30).unwrap();
            let exact = b.atan() - a.atan();
            assert!((e.value - exact).abs() <= e.error.max(1e-15));
        }
    }

    #[test]
    fn depth_limit_reports_failure() {
        let r = integrate(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-14, 1e-16, 2);
        match r {
            Err(Error::QuadratureFailure { estimate, error }) => {
                assert!(estimate > 0.0 && error > 0.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn nested_errors_fold_in() {
        let e = integrate_nested(
            |_| {
                Ok(Estimate {
                    value: 1.0,
                    error: 0.5,
                })
            },
            0.0,
            2.0,
            1.0,
            10.0,
            0,
        )
        .unwrap();
        assert_relative_eq!(e.value, 2.0, max_relative = 1e-14);
        assert!(e.error >= 1.0 - 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-10, 1e-10, 10).unwrap().value, 0.0);
    }
}
