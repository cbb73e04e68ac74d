//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use lelonglab_core::corpus::{periodic_fixtures, standard_corpus, Case, CaseKind};
use lelonglab_core::current::build_current;
use lelonglab_core::foliation::{coordinate_shift, equivalent, jacobian_density, leaf_domain};
use lelonglab_core::harmonic::{verify_monodromy_relation, PoissonSpec};
use lelonglab_core::lelong::{lelong_estimate_with, Engine};
use lelonglab_core::lemmas::ia_ib_discrepancy;
use lelonglab_core::mass::{mass_closed_form, mass_quadrature_with};
use lelonglab_core::theorem::{run_case, verify_lemma_bounds, CaseRun, Verdict, VerifyConfig};
use lelonglab_core::{
    Complex64, Current, Eigenvalue, Executor, FourierSpec, HarmonicSpec, LeafDomain, Schedule,
    TransversalAtom,
};

/// Contiguous chunks on scoped threads; output order matches input order.
struct Threads(usize);

impl Executor for Threads {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if items.len() < 2 || self.0 < 2 {
            return items.iter().map(f).collect();
        }
        let chunk = items.len().div_ceil(self.0);
        std::thread::scope(|s| {
            let handles: Vec<_> = items
                .chunks(chunk)
                .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        })
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

// 1
fn closed_form_equivalence(exec: &Threads, cfg: &VerifyConfig) -> Outcome {
    let start = Instant::now();
    let fixtures = periodic_fixtures().unwrap();
    let mut worst: (f64, String) = (0.0, String::new());
    for case in &fixtures {
        for r in [1.0, 0.5, 0.1] {
            let q = mass_quadrature_with(exec, &case.current, r, 0, &cfg.quadrature).unwrap();
            let c = mass_closed_form(&case.current, r).unwrap();
            let e = rel(q.value, c);
            if e > worst.0 {
                worst = (e, format!("{} at r={r}", case.id));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        fixtures.len() == 10 && worst.0 <= 1e-5 && secs < 60.0,
        format!(
            "{} fixtures x 3 radii, worst relative gap {:.2e} ({}), {secs:.1} s",
            fixtures.len(),
            worst.0,
            worst.1
        ),
    )
}

/// Midpoint sum of `H·J` over a `nu × nv` grid, half-plane cut at 40/min(1,λ).
fn riemann_mass(current: &Current, r: f64, nu: usize, nv: usize) -> f64 {
    let l = current.lambda();
    let mut total = 0.0;
    for a in current.atoms() {
        let m = a.modulus();
        let (v0, v1) = match leaf_domain(l, m, r).unwrap() {
            LeafDomain::Empty => continue,
            LeafDomain::HalfPlane { v_min } => {
                let s = coordinate_shift(l, m);
                (v_min - s, v_min - s + 40.0 / l.value().min(1.0))
            }
            LeafDomain::Strip { v_min, v_max } => (v_min, v_max),
        };
        let b = match &a.harmonic {
            HarmonicSpec::Fourier(f) => f.b as f64,
            HarmonicSpec::Poisson(_) => panic!("periodic atoms only"),
        };
        let (hu, hv) = (TAU * b / nu as f64, (v1 - v0) / nv as f64);
        let mut s = 0.0;
        for j in 0..nv {
            let v = v0 + (j as f64 + 0.5) * hv;
            let jac = jacobian_density(l, m, v);
            for i in 0..nu {
                s += a.harmonic.eval((i as f64 + 0.5) * hu, v).unwrap() * jac;
            }
        }
        total += a.weight * s * hu * hv / b;
    }
    total
}

// 2
fn lambda_one_exact(exec: &Threads, cfg: &VerifyConfig) -> Outcome {
    let t = build_current(
        Eigenvalue::rational(1, 1).unwrap(),
        vec![TransversalAtom::new(Complex64::new(0.5, 0.0), 1.0, FourierSpec::constant(1.0))],
    )
    .unwrap();
    let want = 2.5 * PI;
    let q = mass_quadrature_with(exec, &t, 1.0, 0, &cfg.quadrature).unwrap().value;
    let c = mass_closed_form(&t, 1.0).unwrap();
    let coarse = riemann_mass(&t, 1.0, 50, 20_000);
    let est = lelong_estimate_with(exec, &t, &Schedule::default(), 0, Engine::Quadrature, &cfg.quadrature).unwrap();
    let nu_gap = est.nus.iter().map(|n| (n - 2.5).abs() / 2.5).fold(0.0, f64::max);
    let gaps = [rel(q, want), rel(c, want), rel(coarse, want), nu_gap];
    outcome(
        gaps.iter().all(|g| *g <= 1e-5),
        format!(
            "quadrature {:.1e}, closed form {:.1e}, 10^6-point Riemann {:.1e}, max nu gap {:.1e}",
            gaps[0], gaps[1], gaps[2], gaps[3]
        ),
    )
}

// 3
fn monotonicity(exec: &Threads, cfg: &VerifyConfig, corpus: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for case in corpus.iter().filter(|c| c.current.has_bounded_growth()) {
        checked += 1;
        let e = lelong_estimate_with(exec, &case.current, &Schedule::default(), 0, Engine::Quadrature, &cfg.quadrature).unwrap();
        if let Some(n) = e.violations.iter().position(|&v| v) {
            bad.push(format!(
                "{} nu({:.3e})={:.6} > nu({:.3e})={:.6}",
                case.id,
                e.rs[n],
                e.nus[n],
                e.rs[n - 1],
                e.nus[n - 1]
            ));
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} currents, no increase as r shrinks")
    } else {
        format!("{} of {checked} currents increase as r shrinks; first: {}", bad.len(), bad[0])
    };
    outcome(bad.is_empty(), detail)
}

fn runs(exec: &Threads, cfg: &VerifyConfig, corpus: &[Case], kind: CaseKind) -> Vec<(String, CaseRun)> {
    corpus
        .iter()
        .filter(|c| c.kind == kind)
        .map(|c| (c.id.clone(), run_case(exec, c, cfg).unwrap()))
        .collect()
}

// 4
fn positive_lelong(positive: &[(String, CaseRun)], divergent: &[(String, CaseRun)]) -> Outcome {
    let failed: Vec<&str> = positive
        .iter()
        .filter(|(_, r)| r.report.verdict != Verdict::Pass || r.estimate.limit_bracket.0.is_nan() || r.estimate.limit_bracket.0 <= 0.0)
        .map(|(id, _)| id.as_str())
        .collect();
    let div_lower_ok = divergent.iter().all(|(_, r)| r.estimate.limit_bracket.0 > 0.0);
    let worst_closed = positive
        .iter()
        .filter(|(_, r)| !r.report.observed[2].is_nan())
        .map(|(_, r)| rel(r.report.observed[1], r.report.observed[2]))
        .fold(0.0, f64::max);
    outcome(
        failed.is_empty() && div_lower_ok,
        format!(
            "{} bounded + {} divergent currents; worst closed-form limit gap {:.1e}; failing: {:?}",
            positive.len(),
            divergent.len(),
            worst_closed,
            failed
        ),
    )
}

// 5
fn zero_lelong(negative: &[(String, CaseRun)], corpus: &[Case]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (id, run) in negative {
        let e = &run.estimate;
        let case = corpus.iter().find(|c| &c.id == id).unwrap();
        if id.contains("single") {
            let a = &case.current.atoms()[0];
            let l = case.current.lambda().value();
            let r_zero = a.modulus().powf(1.0 / (1.0 - l));
            let below: Vec<f64> = e.rs.iter().zip(&e.nus).filter(|(r, _)| **r <= r_zero).map(|(_, nu)| *nu).collect();
            if below.is_empty() || below.iter().any(|nu| *nu != 0.0) {
                ok = false;
            }
            notes.push(format!("{id} {} radii below cutoff, max nu {:e}", below.len(), below.iter().cloned().fold(0.0, f64::max)));
        } else {
            let ratio = e.nus[e.nus.len() - 1] / e.nus[0];
            if ratio.is_nan() || ratio >= 0.05 {
                ok = false;
            }
            notes.push(format!("{id} ratio {ratio:.2e}"));
        }
        if run.report.verdict != Verdict::Pass {
            ok = false;
            notes.push(format!("{id} verifier failed"));
        }
    }
    outcome(ok, notes.join(", "))
}

// 6
fn divergence(divergent: &[(String, CaseRun)]) -> Outcome {
    let notes: Vec<String> = divergent
        .iter()
        .map(|(id, r)| format!("{id} slope {:.3} R2 {:.4}", r.report.observed[0], r.report.observed[1]))
        .collect();
    let ok = !divergent.is_empty()
        && divergent
            .iter()
            .all(|(_, r)| r.report.observed[0] > 0.0 && r.report.observed[1] > 0.99);
    outcome(ok, notes.join(", "))
}

// 7
fn lemma_lattices(cfg: &VerifyConfig) -> Outcome {
    let start = Instant::now();
    let reps = verify_lemma_bounds(cfg);
    let secs = start.elapsed().as_secs_f64();
    let bad: Vec<&str> = reps
        .iter()
        .filter(|r| r.verdict != Verdict::Pass)
        .map(|r| r.case_id.as_str())
        .collect();
    let checked: f64 = reps.iter().map(|r| r.observed[0]).sum();
    outcome(
        bad.is_empty() && secs < 10.0,
        format!("{} lattices, {checked} points, failing {bad:?}, {secs:.2} s", reps.len()),
    )
}

// 8
fn ia_ib_closed_forms() -> Outcome {
    let d = ia_ib_discrepancy();
    outcome(d <= 1e-10, format!("max discrepancy {d:.2e} on 27 points"))
}

// 9
fn window_independence(exec: &Threads, cfg: &VerifyConfig, corpus: &[Case]) -> Outcome {
    let mut worst = (0.0, String::new());
    let mut ok = true;
    for case in corpus {
        for r in [1.0, 0.1] {
            let a = mass_quadrature_with(exec, &case.current, r, 0, &cfg.quadrature).unwrap();
            let b = mass_quadrature_with(exec, &case.current, r, 5, &cfg.quadrature).unwrap();
            let gap = (a.value - b.value).abs();
            let budget = 2.0 * (a.error_estimate + b.error_estimate);
            if gap > budget {
                ok = false;
            }
            let ratio = if budget > 0.0 { gap / budget } else if gap == 0.0 { 0.0 } else { f64::INFINITY };
            if ratio >= worst.0 {
                worst = (ratio, format!("{} at r={r}", case.id));
            }
        }
    }
    outcome(
        ok,
        format!("{} currents x 2 radii, worst gap/budget {:.2} ({})", corpus.len(), worst.0, worst.1),
    )
}

// 10
fn monodromy() -> Outcome {
    let half = Eigenvalue::rational(1, 2).unwrap();
    let alpha = Complex64::from_polar(0.4, 0.3);
    let fourier: HarmonicSpec = FourierSpec::constant(1.0)
        .with_period(2)
        .with_mode(-1, 0.0, 0.4)
        .with_mode(-3, 0.0, -0.1)
        .into();
    let bump = PoissonSpec::sample(-5.0, 5.0, 201, |y| 0.2 + (-(y - 0.7) * (y - 0.7)).exp(), 0.2, 0.1).unwrap();
    let poisson = HarmonicSpec::from(bump).normalize().unwrap();
    let mut checked = 0;
    let mut ok = true;
    for (spec, ks) in [(&fourier, [1i64, 2, 3]), (&poisson, [1, -2, 4])] {
        for k in ks {
            let beta = alpha * Complex64::from_polar(1.0, TAU * k as f64 * 0.5);
            let found = equivalent(half, alpha, beta, 8).unwrap().expect("points are equivalent");
            // λ = 1/2 identifies k with k mod 2; the relation must hold for the
            // k that built β.
            let spec_beta = spec.translate(TAU * k as f64).normalize().unwrap();
            ok &= (found - k).rem_euclid(2) == 0;
            ok &= verify_monodromy_relation(spec, &spec_beta, k, 1e-6);
            // A mismatched translation must be rejected.
            ok &= !verify_monodromy_relation(spec, &spec_beta, k + 1, 1e-6);
            checked += 1;
        }
    }
    outcome(ok, format!("{checked} triples at tol 1e-6"))
}

fn main() {
    let cfg = VerifyConfig::default();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let exec = Threads(threads);
    let corpus = standard_corpus(42).unwrap();

    let start = Instant::now();
    let positive = runs(&exec, &cfg, &corpus, CaseKind::Positive);
    let negative = runs(&exec, &cfg, &corpus, CaseKind::Negative);
    let divergent = runs(&exec, &cfg, &corpus, CaseKind::Divergent);
    eprintln!("corpus verifiers: {:.1} s", start.elapsed().as_secs_f64());

    let results = [
        ("closed form vs quadrature on periodic fixtures", closed_form_equivalence(&exec, &cfg)),
        ("lambda = 1 constant atom exact mass and nu", lambda_one_exact(&exec, &cfg)),
        ("monotonicity of nu along a 12-step schedule", monotonicity(&exec, &cfg, &corpus)),
        ("positive Lelong number for lambda > 0", positive_lelong(&positive, &divergent)),
        ("zero Lelong number for periodic lambda < 0", zero_lelong(&negative, &corpus)),
        ("divergence detected when b0 > 0", divergence(&divergent)),
        ("lemma lattices", lemma_lattices(&cfg)),
        ("Ia/Ib closed forms vs quadrature", ia_ib_closed_forms()),
        ("mass independent of the window index", window_independence(&exec, &cfg, &corpus)),
        ("monodromy relation", monodromy()),
    ];
    let mut failures = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {}", i + 1, o.detail);
        failures += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
