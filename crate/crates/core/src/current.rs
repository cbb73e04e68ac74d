//! Discretized directed harmonic currents `T = Σ w_j h_{α_j} [P_{α_j}]`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::foliation::Eigenvalue;
use crate::harmonic::HarmonicSpec;

/// Largest period multiple tried when scanning Poisson boundaries.
pub const PERIOD_SCAN_MAX: u32 = 12;

const NORMALIZATION_TOL: f64 = 1e-12;

/// One weighted transversal point carrying its leafwise harmonic function.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalAtom {
    /// Transversal coordinate `α`.
    pub alpha: Complex64,
    /// Mass of the atom under the transversal measure.
    pub weight: f64,
    /// Harmonic function on the leaf, in shifted coordinates.
    pub harmonic: HarmonicSpec,
}

impl TransversalAtom {
    /// Bundle an atom; validation happens in [`build_current`].
    pub fn new(alpha: Complex64, weight: f64, harmonic: impl Into<HarmonicSpec>) -> Self {
        Self {
            alpha,
            weight,
            harmonic: harmonic.into(),
        }
    }

    /// `|α|`.
    pub fn modulus(&self) -> f64 {
        self.alpha.norm()
    }
}

/// A validated current.
#[derive(Debug, Clone, PartialEq)]
pub struct Current {
    lambda: Eigenvalue,
    atoms: Vec<TransversalAtom>,
}

impl Current {
    /// The eigenvalue.
    pub fn lambda(&self) -> Eigenvalue {
        self.lambda
    }

    /// The atoms, in construction order.
    pub fn atoms(&self) -> &[TransversalAtom] {
        &self.atoms
    }

    /// Least `b` such that every atom has period dividing `2πb`.
    pub fn is_periodic(&self) -> Option<u32> {
        self.atoms.iter().try_fold(1u32, |acc, a| {
            let b = a.harmonic.period_multiple(PERIOD_SCAN_MAX)?;
            Some(lcm(acc, b))
        })
    }

    /// `Σ w_j`.
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Whether every atom has zero linear growth (`b0 = 0`, `c_lin = 0`).
    pub fn has_bounded_growth(&self) -> bool {
        self.atoms.iter().all(|a| a.harmonic.linear_growth() == 0.0)
    }

    /// Whether every atom carries a Fourier spec.
    pub fn is_fourier(&self) -> bool {
        self.atoms
            .iter()
            .all(|a| matches!(a.harmonic, HarmonicSpec::Fourier(_)))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn check_atom(lambda: Eigenvalue, i: usize, atom: &TransversalAtom) -> Result<()> {
    let m = atom.modulus();
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("atom {i}: alpha must be nonzero and finite")));
    }
    if !(atom.weight > 0.0 && atom.weight.is_finite()) {
        return Err(Error::Domain(format!(
            "atom {i}: weight {} must be positive",
            atom.weight
        )));
    }
    let spec = &atom.harmonic;
    if lambda.is_positive() {
        if spec.strip_height().is_some() {
            return Err(Error::InvalidSpec(format!(
                "atom {i}: positive eigenvalue needs a half-plane spec"
            )));
        }
    } else {
        if m >= 1.0 {
            return Err(Error::EmptyLeaf { modulus: m });
        }
        let want = m.ln() / lambda.value();
        match spec.strip_height() {
            Some(c) if (c - want).abs() <= 1e-9 * want => {}
            Some(c) => {
                return Err(Error::InvalidSpec(format!(
                    "atom {i}: strip height {c} but log|alpha|/lambda = {want}"
                )))
            }
            None => {
                return Err(Error::InvalidSpec(format!(
                    "atom {i}: negative eigenvalue needs a strip spec"
                )))
            }
        }
    }
    spec.validate()
        .map_err(|e| Error::InvalidSpec(format!("atom {i}: {e}")))?;
    let at_origin = spec.eval_unchecked(0.0, 0.0);
    if (at_origin - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { value: at_origin });
    }
    if let HarmonicSpec::Poisson(p) = spec {
        // The mass model splits H into its tail constant plus a
        // nonnegative compactly supported excess.
        if p.values().iter().any(|&y| y < p.tail()) {
            return Err(Error::InvalidSpec(format!(
                "atom {i}: boundary samples must not dip below the tail value"
            )));
        }
    }
    if !spec.check_positivity(64, 32) {
        return Err(Error::InvalidSpec(format!("atom {i}: spec is not positive")));
    }
    Ok(())
}

/// Validate atoms against `λ` and assemble the current.
pub fn build_current(lambda: Eigenvalue, atoms: Vec<TransversalAtom>) -> Result<Current> {
    if atoms.is_empty() {
        return Err(Error::InvalidSpec("a current needs at least one atom".into()));
    }
    for (i, a) in atoms.iter().enumerate() {
        check_atom(lambda, i, a)?;
    }
    Ok(Current { lambda, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{FourierSpec, PoissonSpec};
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn build_examples() {
        let one = Eigenvalue::rational(1, 1).unwrap();
        let t = build_current(one, alloc::vec![TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(1.0))]);
        assert!(t.is_ok());

        let neg = Eigenvalue::negative(-1.0).unwrap();
        let e = build_current(
            neg,
            alloc::vec![TransversalAtom::new(c(2.0), 1.0, FourierSpec::constant(1.0).on_strip(1.0))],
        );
        assert!(matches!(e, Err(Error::EmptyLeaf { .. })));

        let atoms = (1..=8)
            .map(|j| {
                let a = 4f64.powi(-j);
                let cj = j as f64 * 4f64.ln();
                TransversalAtom::new(c(a), 2f64.powi(-j), FourierSpec::constant(1.0).on_strip(cj))
            })
            .collect();
        let t = build_current(neg, atoms).unwrap();
        assert_relative_eq!(t.total_weight(), 255.0 / 256.0, epsilon = 1e-15);
    }

    #[test]
    fn build_rejections() {
        let one = Eigenvalue::rational(1, 1).unwrap();
        let unnorm = build_current(one, alloc::vec![TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(2.0))]);
        assert!(matches!(unnorm, Err(Error::NotNormalized { .. })));
        let strip = build_current(
            one,
            alloc::vec![TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(1.0).on_strip(1.0))],
        );
        assert!(matches!(strip, Err(Error::InvalidSpec(_))));
        let neg = Eigenvalue::negative(-1.0).unwrap();
        let wrong_c = build_current(
            neg,
            alloc::vec![TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(1.0).on_strip(1.0))],
        );
        assert!(matches!(wrong_c, Err(Error::InvalidSpec(_))));
        assert!(build_current(one, alloc::vec![]).is_err());
        let zero_w = build_current(one, alloc::vec![TransversalAtom::new(c(0.5), 0.0, FourierSpec::constant(1.0))]);
        assert!(matches!(zero_w, Err(Error::Domain(_))));
        // Not positive on the strip: mode overwhelms the linear part near v = C.
        let bad = FourierSpec::constant(1.0)
            .with_mode(1, 0.5, 0.0)
            .on_strip(2.0f64.ln());
        let bad = HarmonicSpec::from(bad).normalize().unwrap();
        let r = build_current(neg, alloc::vec![TransversalAtom::new(c(0.5), 1.0, bad)]);
        assert!(matches!(r, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn periodicity_examples() {
        let one = Eigenvalue::rational(1, 1).unwrap();
        let t = build_current(one, alloc::vec![TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(1.0))]).unwrap();
        assert_eq!(t.is_periodic(), Some(1));

        let third = Eigenvalue::rational(1, 3).unwrap();
        let atoms = alloc::vec![
            TransversalAtom::new(c(0.5), 1.0, FourierSpec::constant(1.0).with_period(2)),
            TransversalAtom::new(c(0.7), 1.0, FourierSpec::constant(1.0).with_period(3)),
        ];
        assert_eq!(build_current(third, atoms).unwrap().is_periodic(), Some(6));

        let irr = Eigenvalue::irrational(core::f64::consts::SQRT_2 - 1.0).unwrap();
        let p = PoissonSpec::sample(-6.0, 6.0, 121, |y| 0.5 + (-y * y).exp(), 0.5, 0.0).unwrap();
        let p = HarmonicSpec::from(p).normalize().unwrap();
        let t = build_current(irr, alloc::vec![TransversalAtom::new(c(0.5), 1.0, p)]).unwrap();
        assert_eq!(t.is_periodic(), None);
    }

    #[test]
    fn poisson_dip_below_tail_rejected() {
        let irr = Eigenvalue::irrational(0.3).unwrap();
        let p = PoissonSpec::sample(-6.0, 6.0, 121, |y| 1.0 - 0.5 * (-y * y).exp(), 1.0, 0.0).unwrap();
        let p = HarmonicSpec::from(p).normalize().unwrap();
        assert!(build_current(irr, alloc::vec![TransversalAtom::new(c(0.5), 1.0, p)]).is_err());
    }

    #[test]
    fn rebuild_is_identity() {
        let half = Eigenvalue::rational(1, 2).unwrap();
        let spec = HarmonicSpec::from(FourierSpec::constant(1.0).with_period(2).with_mode(-1, 0.3, 0.1))
            .normalize()
            .unwrap();
        let t = build_current(half, alloc::vec![TransversalAtom::new(c(0.4), 0.7, spec)]).unwrap();
        let again = build_current(t.lambda(), t.atoms().to_vec()).unwrap();
        assert_eq!(t, again);
    }
}
