//! `shintani`: evaluate Shintani L-functions from problem files and run
//! reproducible verification sweeps.
//!
//! Exit status: 0 on success, 1 when an evaluation fails or a sweep exceeds
//! `--tol`, 2 on invalid input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod problem;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use shintani::kernel::{e_real, gamma_chi};
use shintani::lfunction::{Config, LRequest, MethodChoice, Variant};
use shintani::quadrature::QuadConfig;
use shintani::suite::{self, SuiteReport};
use shintani::taylor::MAX_DEGREE;

use problem::Cplx;
use report::{CheckEcho, CheckRecord, CheckReport, CheckSummary, ConfigEcho, EvalRecord, EvalReport, EvalSummary};

#[derive(Parser)]
#[command(name = "shintani", version, about = "Evaluate and verify Shintani L-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every point of a JSON problem file.
    Eval(EvalArgs),
    /// Run a seeded verification sweep and report the largest residual.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Dirichlet,
    Integral,
    Contour,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => MethodChoice::Auto,
            MethodArg::Dirichlet => MethodChoice::Dirichlet,
            MethodArg::Integral => MethodChoice::Integral,
            MethodArg::Contour => MethodChoice::Contour,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fe,
    Fourier,
    Derivative,
    Oracle,
    Special,
}

impl Kind {
    fn default_samples(self) -> usize {
        match self {
            Kind::Fe => 50,
            Kind::Fourier => 20,
            Kind::Derivative => 10,
            Kind::Oracle => 30,
            Kind::Special => 10,
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            Kind::Derivative => 1e-6,
            Kind::Oracle => 1e-9,
            _ => 1e-8,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Radial quadrature step; the other steps scale with it.
    #[arg(long)]
    quad_step: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    problem: PathBuf,
    /// Overrides the method named in the problem file.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Target absolute error of the Dirichlet series.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Number of variables (1 to 3).
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Random instances to draw; defaults depend on the kind.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for ChaCha8Rng::seed_from_u64.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Pass threshold for the largest residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Frequency bound for `fourier`, largest k_ν for `special`.
    #[arg(long, default_value_t = 2)]
    kmax: u32,
    /// Highest total degree the Taylor engine may be asked for.
    #[arg(long, default_value_t = MAX_DEGREE)]
    taylor_order: usize,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Check(a) => cmd_check(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn build_config(quad_step: Option<f64>, series_tol: Option<f64>) -> Result<Config, Failure> {
    let mut cfg = Config::default();
    if let Some(h) = quad_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::Invalid(format!("--quad-step must be positive, got {h}")));
        }
        cfg.quad = QuadConfig::default().rescaled(h / QuadConfig::default().h);
        cfg.quad.h = h;
    }
    if let Some(t) = series_tol {
        cfg.series.tol = t;
    }
    cfg.validate().map_err(|e| Failure::Invalid(e.to_string()))?;
    Ok(cfg)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_eval(args: EvalArgs) -> Result<bool, Failure> {
    let text = fs::read_to_string(&args.problem)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", args.problem.display())))?;
    let mut prob = problem::parse(&text).map_err(Failure::Invalid)?;
    if let Some(m) = args.method {
        prob.method = m.into();
    }
    let cfg = build_config(args.output.quad_step, args.tol)?;

    let cases: Vec<EvalRecord> = prob
        .points
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let req = LRequest {
                datum: prob.datum.clone(),
                chi: prob.chi.clone(),
                s: s.clone(),
                variant: prob.variant,
                method: prob.method,
            };
            let mut rec = EvalRecord {
                index,
                s: s.values().iter().map(|v| Cplx::from(*v)).collect(),
                value: None,
                err: None,
                method: None,
                error: None,
                normalized: None,
                factor: None,
            };
            match req.evaluate(&cfg) {
                Ok(v) => {
                    rec.value = Some(v.value.into());
                    rec.err = report::finite(v.err);
                    rec.method = Some(v.method.as_str());
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
            if rec.error.is_none() && !matches!(prob.variant, Variant::Ordinary | Variant::Normalized) {
                let plain = LRequest {
                    variant: Variant::Normalized,
                    ..req
                };
                if let (Ok(l), Ok(f)) = (plain.evaluate(&cfg), variant_factor(&plain, prob.variant)) {
                    rec.normalized = Some(l.value.into());
                    rec.factor = Some(f.into());
                }
            }
            rec
        })
        .collect();

    let errors = cases.iter().filter(|c| c.error.is_some()).count();
    let rep = EvalReport {
        command: "eval",
        problem: report::echo_problem(&prob.datum, prob.chi.bits(), prob.variant.as_str(), prob.method.as_str()),
        config: ConfigEcho::from(&cfg),
        seed: None,
        summary: EvalSummary {
            cases: cases.len(),
            errors,
        },
        cases,
    };
    let mut out = open_out(&args.output.out)?;
    match args.output.format {
        Format::Json => report::write_json(&mut out, &rep)?,
        Format::Csv => report::write_eval_csv(&mut out, &rep)?,
    }
    out.flush()?;
    Ok(errors == 0)
}

/// value / L_χ for the completed and R variants, from the closed forms.
fn variant_factor(req: &LRequest, variant: Variant) -> shintani::Result<Complex64> {
    let d = &req.datum;
    let completion = || -> shintani::Result<Complex64> {
        Ok(d.det().abs().sqrt() * gamma_chi(req.s.values(), &req.chi)?)
    };
    let phase = || e_real(d.x().iter().zip(d.y()).map(|(a, b)| a * b).sum());
    Ok(match variant {
        Variant::Ordinary | Variant::Normalized => Complex64::new(1.0, 0.0),
        Variant::Completed => completion()?,
        Variant::R => phase(),
        Variant::RCompleted => completion()? * phase(),
    })
}

fn cmd_check(args: CheckArgs) -> Result<bool, Failure> {
    let max_r = 3;
    if args.r == 0 || args.r > max_r {
        return Err(Failure::Invalid(format!("--r must lie in 1..={max_r}, got {}", args.r)));
    }
    if args.taylor_order > MAX_DEGREE {
        return Err(Failure::Invalid(format!(
            "--taylor-order is at most {MAX_DEGREE}, got {}",
            args.taylor_order
        )));
    }
    if args.kind == Kind::Special && args.r * args.kmax as usize > args.taylor_order {
        return Err(Failure::Invalid(format!(
            "r·kmax = {} exceeds --taylor-order {}",
            args.r * args.kmax as usize,
            args.taylor_order
        )));
    }
    let samples = args.samples.unwrap_or(args.kind.default_samples());
    let tol = args.tol.unwrap_or(args.kind.default_tol());
    if !(tol > 0.0) {
        return Err(Failure::Invalid(format!("--tol must be positive, got {tol}")));
    }
    let cfg = build_config(args.output.quad_step, None)?;

    let (r, seed) = (args.r, args.seed);
    let result: shintani::Result<SuiteReport> = match args.kind {
        Kind::Fe => suite::fe_suite(r, samples, seed, &cfg),
        Kind::Fourier => suite::fourier_suite(r, samples, f64::from(args.kmax), seed, &cfg),
        Kind::Derivative => suite::derivative_suite(r, samples, seed, &cfg),
        Kind::Oracle => suite::oracle_suite(r, samples, seed, &cfg),
        Kind::Special => suite::special_suite(r, samples, args.kmax, seed, &cfg),
    };
    let rep = result.map_err(|e| Failure::Invalid(e.to_string()))?;

    let pass = rep.passed(tol);
    let out_rep = CheckReport {
        command: "check",
        kind: rep.kind,
        seed,
        config: CheckEcho {
            r,
            samples,
            tol,
            kmax: args.kmax,
            taylor_order: args.taylor_order,
            eval: ConfigEcho::from(&cfg),
        },
        cases: rep.cases.iter().map(CheckRecord::from).collect(),
        summary: CheckSummary {
            cases: rep.cases.len(),
            errors: rep.errors(),
            max_residual: report::finite(rep.max_residual()),
            tol,
            pass,
        },
    };
    let mut out = open_out(&args.output.out)?;
    match args.output.format {
        Format::Json => report::write_json(&mut out, &out_rep)?,
        Format::Csv => report::write_check_csv(&mut out, &out_rep)?,
    }
    out.flush()?;
    Ok(pass)
}
