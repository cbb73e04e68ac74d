//! JSON file formats for currents and command outputs.

use serde::{Deserialize, Serialize};

use lelonglab_core::current::build_current;
use lelonglab_core::lelong::{LelongEstimate, LinearFit};
use lelonglab_core::theorem::{Claim, VerificationReport, Verdict};
use lelonglab_core::{
    Complex64, Current, EigenClass, Eigenvalue, FourierSpec, HarmonicSpec, Mode, PoissonSpec,
    TransversalAtom,
};

use crate::error::CliError;

/// Arithmetic class tag of the eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaClass {
    Rational,
    Irrational,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaJson {
    pub value: f64,
    pub class: LambdaClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Fourier,
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryJson {
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub tail: f64,
}

/// A harmonic spec. Fourier specs use `b`, `a0`, `b0`, `modes`, `strip_c`;
/// Poisson specs use `boundary` and `c_lin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    #[serde(rename = "type")]
    pub kind: SpecKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<(i32, f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strip_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_lin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub alpha: [f64; 2],
    pub weight: f64,
    pub spec: SpecJson,
}

/// On-disk form of a [`Current`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentJson {
    pub lambda: LambdaJson,
    pub atoms: Vec<AtomJson>,
}

fn input(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {e}"))
}

impl LambdaJson {
    pub fn from_eigenvalue(l: Eigenvalue) -> Self {
        let (class, a, b) = match l.class() {
            EigenClass::PositiveRational { a, b } => (LambdaClass::Rational, Some(a), Some(b)),
            EigenClass::PositiveIrrational => (LambdaClass::Irrational, None, None),
            EigenClass::Negative => (LambdaClass::Negative, None, None),
        };
        Self { value: l.value(), class, a, b }
    }

    pub fn to_eigenvalue(&self) -> Result<Eigenvalue, CliError> {
        let l = match self.class {
            LambdaClass::Rational => {
                let (Some(a), Some(b)) = (self.a, self.b) else {
                    return Err(input("lambda", "rational class needs integer fields a and b"));
                };
                let l = Eigenvalue::rational(a, b).map_err(|e| input("lambda", e))?;
                if (l.value() - self.value).abs() > 1e-12 {
                    return Err(input(
                        "lambda.value",
                        format!("{} does not equal {a}/{b}", self.value),
                    ));
                }
                l
            }
            LambdaClass::Irrational => Eigenvalue::irrational(self.value).map_err(|e| input("lambda.value", e))?,
            LambdaClass::Negative => Eigenvalue::negative(self.value).map_err(|e| input("lambda.value", e))?,
        };
        Ok(l)
    }
}

impl SpecJson {
    pub fn from_spec(spec: &HarmonicSpec) -> Self {
        match spec {
            HarmonicSpec::Fourier(f) => Self {
                kind: SpecKind::Fourier,
                b: Some(f.b),
                a0: Some(f.a0),
                b0: Some(f.b0),
                modes: f.modes.iter().map(|m| (m.k, m.a, m.b)).collect(),
                strip_c: f.strip_c,
                boundary: None,
                c_lin: None,
            },
            HarmonicSpec::Poisson(p) => Self {
                kind: SpecKind::Poisson,
                b: None,
                a0: None,
                b0: None,
                modes: Vec::new(),
                strip_c: None,
                boundary: Some(BoundaryJson {
                    ys: p.ys(),
                    values: p.values().to_vec(),
                    tail: p.tail(),
                }),
                c_lin: Some(p.c_lin()),
            },
        }
    }

    pub fn to_spec(&self, path: &str) -> Result<HarmonicSpec, CliError> {
        match self.kind {
            SpecKind::Fourier => {
                if self.boundary.is_some() || self.c_lin.is_some() {
                    return Err(input(path, "fourier spec takes no boundary or c_lin"));
                }
                let a0 = self.a0.ok_or_else(|| input(&format!("{path}.a0"), "missing for fourier spec"))?;
                Ok(FourierSpec {
                    b: self.b.unwrap_or(1),
                    a0,
                    b0: self.b0.unwrap_or(0.0),
                    modes: self.modes.iter().map(|&(k, a, b)| Mode::new(k, a, b)).collect(),
                    strip_c: self.strip_c,
                }
                .into())
            }
            SpecKind::Poisson => {
                if self.a0.is_some() || self.b0.is_some() || !self.modes.is_empty() || self.strip_c.is_some() {
                    return Err(input(path, "poisson spec takes only boundary and c_lin"));
                }
                let bd = self
                    .boundary
                    .as_ref()
                    .ok_or_else(|| input(&format!("{path}.boundary"), "missing for poisson spec"))?;
                let p = PoissonSpec::from_samples(&bd.ys, bd.values.clone(), bd.tail, self.c_lin.unwrap_or(0.0))
                    .map_err(|e| input(&format!("{path}.boundary"), e))?;
                Ok(p.into())
            }
        }
    }
}

impl CurrentJson {
    pub fn from_current(t: &Current) -> Self {
        Self {
            lambda: LambdaJson::from_eigenvalue(t.lambda()),
            atoms: t
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    alpha: [a.alpha.re, a.alpha.im],
                    weight: a.weight,
                    spec: SpecJson::from_spec(&a.harmonic),
                })
                .collect(),
        }
    }

    pub fn to_current(&self) -> Result<Current, CliError> {
        let l = self.lambda.to_eigenvalue()?;
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let spec = a.spec.to_spec(&format!("atoms[{i}].spec"))?;
                let atom = TransversalAtom::new(Complex64::new(a.alpha[0], a.alpha[1]), a.weight, spec);
                // Checked alone first so the error names the offending atom.
                build_current(l, vec![atom.clone()]).map_err(|e| input(&format!("atoms[{i}]"), e))?;
                Ok(atom)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        build_current(l, atoms).map_err(|e| input("atoms", e))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("malformed current at {path}: {}", e.into_inner()))
        })
    }
}

/// Read and validate a current file.
pub fn load_current(path: &std::path::Path) -> Result<Current, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    CurrentJson::parse(&text)
        .and_then(|c| c.to_current())
        .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.message())))
}

#[derive(Debug, Serialize)]
pub struct QuadratureJson {
    pub value: f64,
    pub error_estimate: f64,
    pub nu: f64,
    pub nu_error: f64,
}

#[derive(Debug, Serialize)]
pub struct MassJson {
    pub r: f64,
    pub k0: i64,
    pub quadrature: QuadratureJson,
    pub closed_form: Option<f64>,
    pub discrepancy: Option<f64>,
    pub relative_discrepancy: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct FitJson {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl From<LinearFit> for FitJson {
    fn from(f: LinearFit) -> Self {
        Self { slope: f.slope, intercept: f.intercept, r_squared: f.r_squared }
    }
}

#[derive(Debug, Serialize)]
pub struct LelongJson {
    pub rs: Vec<f64>,
    pub nus: Vec<f64>,
    pub errs: Vec<f64>,
    pub monotone_ok: bool,
    pub limit_estimate: f64,
    pub limit_bracket: (f64, f64),
    pub fit: FitJson,
    pub diverges: bool,
}

impl LelongJson {
    pub fn new(e: &LelongEstimate, diverges: bool) -> Self {
        Self {
            rs: e.rs.clone(),
            nus: e.nus.clone(),
            errs: e.errs.clone(),
            monotone_ok: e.monotone_ok,
            limit_estimate: e.limit_estimate,
            limit_bracket: e.limit_bracket,
            fit: e.fit.into(),
            diverges,
        }
    }
}

/// A verification report; NaN entries of `observed` become `null`.
#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub case_id: String,
    pub lambda: Option<f64>,
    pub claim: &'static str,
    pub observed: Vec<Option<f64>>,
    pub verdict: &'static str,
    pub details: String,
}

fn finite(x: f64) -> Option<f64> {
    (!x.is_nan()).then_some(x)
}

pub fn claim_name(c: Claim) -> &'static str {
    match c {
        Claim::PositiveLelong => "PositiveLelong",
        Claim::ZeroLelong => "ZeroLelong",
        Claim::Divergence => "Divergence",
        Claim::LemmaBound => "LemmaBound",
    }
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        Self {
            case_id: r.case_id.clone(),
            lambda: finite(r.lambda),
            claim: claim_name(r.claim),
            observed: r.observed.iter().map(|&x| finite(x)).collect(),
            verdict: match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            },
            details: r.details.clone(),
        }
    }
}
