//! Argument parsing and the five commands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use lelonglab_core::corpus::{standard_corpus, Case, CaseKind, Family};
use lelonglab_core::foliation::torus_curve;
use lelonglab_core::lelong::{lelong_estimate_with, Engine};
use lelonglab_core::mass::{mass_closed_form, mass_quadrature_with};
use lelonglab_core::theorem::{run_case, verify_lemma_bounds, VerificationReport, Verdict, VerifyConfig};
use lelonglab_core::{Complex64, Current, EigenClass, Eigenvalue, QuadratureConfig, Schedule};

use crate::error::CliError;
use crate::format::{claim_name, load_current, LelongJson, MassJson, QuadratureJson, ReportJson};
use crate::output::{nu_plot_svg, torus_svg, write_schedule_csv, write_sweep_csv, SweepRow};
use crate::pool::Pool;

#[derive(Debug, Parser)]
#[command(name = "lelonglab", version, about = "Masses and Lelong numbers of harmonic currents near z∂z + λw∂w")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mass of a current on the bidisc of radius r.
    Mass(MassArgs),
    /// Normalized masses along a radius schedule.
    Lelong(LelongArgs),
    /// Run the verification corpus (or one case of it).
    Verify(VerifyArgs),
    /// Torus-curve and ν-vs-r plots.
    Leafplot(LeafplotArgs),
    /// Lelong estimates over a grid of eigenvalues and current families.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute tolerance on the ν scale.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig, CliError> {
        let cfg = QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            ..QuadratureConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r_start: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
}

impl ScheduleArgs {
    fn schedule(&self) -> Result<Schedule, CliError> {
        let s = Schedule {
            r_start: self.r_start,
            ratio: self.ratio,
            steps: self.steps,
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    /// Current JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Fundamental window index.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k0: i64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct LelongArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for schedule.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k0: i64,
    #[arg(long, value_enum, default_value_t = EngineArg::Quadrature)]
    pub engine: EngineArg,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Corpus seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Run only this corpus case or lemma id.
    #[arg(long)]
    pub case: Option<String>,
    /// Verify this current file instead of the corpus.
    #[arg(long, conflicts_with = "case")]
    pub input: Option<PathBuf>,
    /// Relative tolerance against closed-form limits.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k0: i64,
    /// Also write report.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct LeafplotArgs {
    /// Current JSON; supplies λ and α and enables the ν plot.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Atom of the input whose leaf is drawn.
    #[arg(long, default_value_t = 0)]
    pub atom: usize,
    /// Eigenvalue, as `a/b`, a decimal, or a negative decimal.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
    pub lambda: Option<String>,
    /// Transversal point as `re,im`.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
    pub alpha: Option<String>,
    /// Torus radius.
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Number of turns around `arg z`.
    #[arg(long, default_value_t = 20)]
    pub loops: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated eigenvalues.
    #[arg(long, default_value = "1,1/2,-1", allow_hyphen_values = true)]
    pub lambdas: String,
    /// Comma-separated families: constant, family, b0.
    #[arg(long, default_value = "constant,family,b0")]
    pub families: String,
    /// Also write sweep.csv here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k0: i64,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `a/b`, `-a/b`, `-x`, or a positive decimal. Decimals equal to `a/b` with
/// `b ≤ 1000` are treated as rational.
pub fn parse_lambda(s: &str) -> Result<Eigenvalue, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::Input(format!("lambda {s:?}: {e}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (neg, a) = match a.trim().strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, a.trim()),
        };
        let a: u32 = a.parse().map_err(|e| bad(&e))?;
        let b: u32 = b.trim().parse().map_err(|e| bad(&e))?;
        if neg {
            return Eigenvalue::negative(-(a as f64) / b as f64).map_err(|e| bad(&e));
        }
        let g = gcd(a, b).max(1);
        return Eigenvalue::rational(a / g, b / g).map_err(|e| bad(&e));
    }
    let x: f64 = s.parse().map_err(|e| bad(&e))?;
    if x < 0.0 {
        return Eigenvalue::negative(x).map_err(|e| bad(&e));
    }
    for b in 1..=1000u32 {
        let a = (x * b as f64).round();
        if a >= 1.0 && (x * b as f64 - a).abs() <= 1e-12 * b as f64 {
            return Eigenvalue::rational(a as u32, b).map_err(|e| bad(&e));
        }
    }
    Eigenvalue::irrational(x).map_err(|e| bad(&e))
}

fn lambda_label(l: Eigenvalue) -> String {
    match l.class() {
        EigenClass::PositiveRational { a, b: 1 } => a.to_string(),
        EigenClass::PositiveRational { a, b } => format!("{a}/{b}"),
        _ => l.value().to_string(),
    }
}

fn parse_alpha(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("alpha {s:?}: {e}")))?;
    match nums[..] {
        [re, im] => Ok(Complex64::new(re, im)),
        [re] => Ok(Complex64::new(re, 0.0)),
        _ => Err(CliError::Input(format!("alpha {s:?}: expected re,im"))),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.display().to_string(),
        source,
    })
}

fn print_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("outputs serialize");
    writeln!(out, "{text}").map_err(|source| CliError::Output {
        path: "stdout".into(),
        source,
    })
}

/// Run one command, writing its primary output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = Pool::from_env()?;
    match cli.command {
        Command::Mass(a) => cmd_mass(&pool, a, out),
        Command::Lelong(a) => cmd_lelong(&pool, a, out),
        Command::Verify(a) => cmd_verify(&pool, a, out),
        Command::Leafplot(a) => cmd_leafplot(&pool, a, out),
        Command::Sweep(a) => cmd_sweep(&pool, a, out),
    }
}

fn cmd_mass(pool: &Pool, a: MassArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.quad.config()?;
    let t = load_current(&a.input)?;
    let q = mass_quadrature_with(pool, &t, a.r, a.k0, &cfg)?;
    let closed = mass_closed_form(&t, a.r).ok();
    let report = MassJson {
        r: a.r,
        k0: a.k0,
        quadrature: QuadratureJson {
            value: q.value,
            error_estimate: q.error_estimate,
            nu: q.nu(),
            nu_error: q.nu_error(),
        },
        closed_form: closed,
        discrepancy: closed.map(|c| (q.value - c).abs()),
        relative_discrepancy: closed.map(|c| if c == q.value { 0.0 } else { (q.value - c).abs() / c.abs() }),
    };
    print_json(out, &report)
}

fn cmd_lelong(pool: &Pool, a: LelongArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.quad.config()?;
    let schedule = a.schedule.schedule()?;
    let t = load_current(&a.input)?;
    let engine = match a.engine {
        EngineArg::Quadrature => Engine::Quadrature,
        EngineArg::ClosedForm => Engine::ClosedForm,
    };
    let e = lelong_estimate_with(pool, &t, &schedule, a.k0, engine, &cfg)?;
    let defaults = VerifyConfig::default();
    ensure_dir(&a.out)?;
    let mut buf = Vec::new();
    write_schedule_csv(&mut buf, &e).expect("in-memory csv");
    write_file(&a.out.join("schedule.csv"), &buf)?;
    print_json(out, &LelongJson::new(&e, e.diverges(defaults.divergence_r2, defaults.divergence_growth)))
}

fn corpus_case_for(id: &str, current: Current) -> Case {
    let kind = if !current.has_bounded_growth() {
        CaseKind::Divergent
    } else if current.lambda().is_positive() {
        CaseKind::Positive
    } else {
        CaseKind::Negative
    };
    Case {
        id: id.to_string(),
        current,
        kind,
    }
}

fn print_table(reports: &[VerificationReport]) {
    eprintln!("{:<24} {:<15} {:>8}  verdict", "case", "claim", "lambda");
    for r in reports {
        let v = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
        };
        eprintln!("{:<24} {:<15} {:>8.4}  {v}", r.case_id, claim_name(r.claim), r.lambda);
    }
}

fn cmd_verify(pool: &Pool, a: VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut cfg = VerifyConfig {
        quadrature: a.quad.config()?,
        k0: a.k0,
        ..VerifyConfig::default()
    };
    if let Some(tol) = a.tol {
        if tol.is_nan() || tol < 0.0 {
            return Err(CliError::Input(format!("--tol {tol} must be nonnegative")));
        }
        cfg.limit_rel_tol = tol;
    }
    let lemmas = || verify_lemma_bounds(&cfg);
    let reports: Vec<VerificationReport> = if let Some(path) = &a.input {
        let t = load_current(path)?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
        vec![run_case(pool, &corpus_case_for(id, t), &cfg)?.report]
    } else {
        let corpus = standard_corpus(a.seed)?;
        match &a.case {
            Some(id) => {
                if let Some(c) = corpus.iter().find(|c| &c.id == id) {
                    vec![run_case(pool, c, &cfg)?.report]
                } else if let Some(r) = lemmas().into_iter().find(|r| &r.case_id == id) {
                    vec![r]
                } else {
                    let ids: Vec<String> = corpus
                        .iter()
                        .map(|c| c.id.clone())
                        .chain(lemmas().into_iter().map(|r| r.case_id))
                        .collect();
                    return Err(CliError::Input(format!("unknown case {id:?}; known: {}", ids.join(", "))));
                }
            }
            None => {
                let mut all = corpus
                    .iter()
                    .map(|c| run_case(pool, c, &cfg).map(|r| r.report))
                    .collect::<Result<Vec<_>, _>>()?;
                all.extend(lemmas());
                all
            }
        }
    };
    let json: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        let text = serde_json::to_string_pretty(&json).expect("reports serialize");
        write_file(&dir.join("report.json"), text.as_bytes())?;
    }
    print_json(out, &json)?;
    print_table(&reports);
    let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

/// Torus points split into one vector per loop; each loop shares its end
/// point with the next loop's start.
pub fn torus_strands(lambda: Eigenvalue, alpha: Complex64, r: f64, loops: usize) -> Result<Vec<Vec<[f64; 2]>>, CliError> {
    const PER_LOOP: usize = 256;
    if loops == 0 {
        return Err(CliError::Input("--loops must be at least 1".into()));
    }
    let span = std::f64::consts::TAU * loops as f64;
    let pts = torus_curve(lambda, alpha, r, span, loops * PER_LOOP + 1)?;
    Ok((0..loops).map(|i| pts[i * PER_LOOP..=(i + 1) * PER_LOOP].to_vec()).collect())
}

#[derive(serde::Serialize)]
struct LeafplotJson {
    torus: String,
    strands: usize,
    nu: Option<String>,
}

fn cmd_leafplot(pool: &Pool, a: LeafplotArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let current = a.input.as_deref().map(load_current).transpose()?;
    let lambda = match (&a.lambda, &current) {
        (Some(s), _) => parse_lambda(s)?,
        (None, Some(t)) => t.lambda(),
        (None, None) => unreachable!("clap requires --lambda without --input"),
    };
    let alpha = match (&a.alpha, &current) {
        (Some(s), _) => parse_alpha(s)?,
        (None, Some(t)) => t
            .atoms()
            .get(a.atom)
            .ok_or_else(|| CliError::Input(format!("--atom {} out of range ({} atoms)", a.atom, t.atoms().len())))?
            .alpha,
        (None, None) => unreachable!("clap requires --alpha without --input"),
    };
    let strands = torus_strands(lambda, alpha, a.r, a.loops)?;
    ensure_dir(&a.out)?;
    let title = format!("leaf of lambda={} through alpha={}{:+}i at r={}", lambda_label(lambda), alpha.re, alpha.im, a.r);
    let torus_path = a.out.join("torus.svg");
    write_file(&torus_path, torus_svg(&title, &strands).as_bytes())?;
    let nu = match &current {
        Some(t) => {
            let e = lelong_estimate_with(pool, t, &a.schedule.schedule()?, 0, Engine::Quadrature, &a.quad.config()?)?;
            let path = a.out.join("nu.svg");
            write_file(&path, nu_plot_svg("nu against log r", &e.rs, &e.nus).as_bytes())?;
            Some(path.display().to_string())
        }
        None => None,
    };
    print_json(
        out,
        &LeafplotJson {
            torus: torus_path.display().to_string(),
            strands: strands.len(),
            nu,
        },
    )
}

/// Every `(λ, family)` pair of the grid, in row-major order.
pub fn sweep_rows(
    pool: &Pool,
    lambdas: &[Eigenvalue],
    families: &[Family],
    schedule: &Schedule,
    k0: i64,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepRow>, CliError> {
    let defaults = VerifyConfig::default();
    let mut rows = Vec::new();
    for &l in lambdas {
        for &f in families {
            let t = f.build(l)?;
            let e = lelong_estimate_with(pool, &t, schedule, k0, Engine::Quadrature, cfg)?;
            rows.push(SweepRow {
                lambda: lambda_label(l),
                family: f.name(),
                diverges: e.diverges(defaults.divergence_r2, defaults.divergence_growth),
                estimate: e,
            });
        }
    }
    Ok(rows)
}

fn cmd_sweep(pool: &Pool, a: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let lambdas = a
        .lambdas
        .split(',')
        .map(parse_lambda)
        .collect::<Result<Vec<_>, _>>()?;
    let families = a
        .families
        .split(',')
        .map(|s| {
            Family::from_name(s.trim()).ok_or_else(|| CliError::Input(format!("unknown family {s:?} (constant, family, b0)")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = sweep_rows(pool, &lambdas, &families, &a.schedule.schedule()?, a.k0, &a.quad.config()?)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).expect("in-memory csv");
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        write_file(&dir.join("sweep.csv"), &buf)?;
    }
    out.write_all(&buf).map_err(|source| CliError::Output {
        path: "stdout".into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_strings() {
        assert_eq!(parse_lambda("1/2").unwrap(), Eigenvalue::rational(1, 2).unwrap());
        assert_eq!(parse_lambda("2/4").unwrap(), Eigenvalue::rational(1, 2).unwrap());
        assert_eq!(parse_lambda("0.5").unwrap(), Eigenvalue::rational(1, 2).unwrap());
        assert_eq!(parse_lambda("1").unwrap(), Eigenvalue::rational(1, 1).unwrap());
        assert_eq!(parse_lambda("-1").unwrap(), Eigenvalue::negative(-1.0).unwrap());
        assert_eq!(parse_lambda("-1/2").unwrap(), Eigenvalue::negative(-0.5).unwrap());
        let root = 2f64.sqrt() - 1.0;
        assert_eq!(parse_lambda(&root.to_string()).unwrap(), Eigenvalue::irrational(root).unwrap());
        assert!(parse_lambda("3/2").is_err());
        assert!(parse_lambda("-2").is_err());
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn strands_close_for_rational_lambda() {
        let l = Eigenvalue::rational(1, 2).unwrap();
        let s = torus_strands(l, Complex64::new(0.5, 0.2), 0.5, 2).unwrap();
        let (first, last) = (s[0][0], *s[1].last().unwrap());
        assert!(lelonglab_core::foliation::torus_distance(first, last) < 1e-12);
        assert_eq!(s[0].last(), s[1].first());
    }

    #[test]
    fn alpha_strings() {
        assert_eq!(parse_alpha("0.5,-0.25").unwrap(), Complex64::new(0.5, -0.25));
        assert_eq!(parse_alpha("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert!(parse_alpha("1,2,3").is_err());
    }
}
