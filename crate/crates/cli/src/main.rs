use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use elliptika::config::parse_case;
use elliptika::laurent::laurent_raw;
use elliptika::{
    elliptic::f_ij_with_estimate, jacobi_basic, laurent_c, parse_complex, run_suite, theta, weierstrass_p,
    write_report, CoefficientMode, ContourConfig, CoprimePair, EllipticContext, OutputFormat, ParityIndex,
    SuiteConfig, ThetaIndex, Tolerances, WeierstrassMode,
};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "elliptika", version, about = "Theta / elliptic function evaluation and reciprocity-identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON or CSV report.
    Verify(VerifyArgs),
    /// Evaluate a single function value.
    Eval(EvalArgs),
    /// Run a grid over coprime pairs and tau values, CSV output.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SuiteFlags {
    /// tau value, repeatable (e.g. `2i`, `0.3+1.5i`).
    #[arg(long, allow_hyphen_values = true)]
    tau: Vec<String>,
    /// Identity case as four digits `ijmn`, repeatable.
    #[arg(long)]
    case: Vec<String>,
    /// Highest derivative order N for the derivative reciprocity checks.
    #[arg(long = "N")]
    n_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Uniform tolerance override for every check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat `key = value` suite file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    suite: SuiteFlags,
}

#[derive(Args)]
struct SweepArgs {
    /// Use every coprime pair with entries up to this bound.
    #[arg(long, default_value_t = 5)]
    pairs_max: u64,
    #[command(flatten)]
    suite: SuiteFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expr {
    Theta,
    Sn,
    Cn,
    Dn,
    F,
    Wp,
    #[value(name = "C")]
    C,
}

#[derive(Clone, Copy, ValueEnum)]
enum WpMode {
    FromF,
    Lattice,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    expr: Expr,
    /// Theta index (1-4) or the two parity digits of f / C.
    indices: Vec<u8>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    z: String,
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// Laurent order for `C`.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Extract `C` by contour integration instead of the closed form.
    #[arg(long)]
    contour: bool,
    #[arg(long, value_enum, default_value = "from-f")]
    mode: WpMode,
}

fn init_logging() {
    let level = match std::env::var("ELLIPTIKA_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Error,
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new().filter_level(level).init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Sweep(args) => sweep(args),
        Command::Eval(args) => eval(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn apply_flags(cfg: &mut SuiteConfig, flags: SuiteFlags) -> Result<()> {
    if !flags.tau.is_empty() {
        cfg.taus = flags.tau.iter().map(|t| parse_complex(t)).collect::<Result<_, _>>()?;
    }
    if !flags.case.is_empty() {
        cfg.cases = flags.case.iter().map(|c| parse_case(c)).collect::<Result<_, _>>()?;
    }
    if let Some(n) = flags.n_max {
        cfg.n_max = n;
    }
    if let Some(s) = flags.samples {
        cfg.samples = s;
    }
    if let Some(t) = flags.tol {
        cfg.tolerances = Tolerances::uniform(t);
    }
    if flags.out.is_some() {
        cfg.out = flags.out;
    }
    Ok(())
}

fn run_and_write(cfg: &SuiteConfig) -> Result<bool> {
    let result = run_suite(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_report(&result, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => write_report(&result, cfg.format, io::stdout().lock())?,
    }
    let s = result.summary;
    log::info!("total {} passed {} failed {} skipped {}", s.total, s.passed, s.failed, s.skipped_not_admissible);
    Ok(s.failed == 0)
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let mut cfg = match &args.config {
        Some(path) => SuiteConfig::from_file(path)?,
        None => SuiteConfig::default(),
    };
    match (args.a, args.b) {
        (Some(a), Some(b)) => cfg.pairs = vec![CoprimePair::new(a, b)?],
        (None, None) => {}
        _ => bail!("--a and --b must be given together"),
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        };
    }
    apply_flags(&mut cfg, args.suite)?;
    cfg.validate()?;
    run_and_write(&cfg)
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let mut cfg = SuiteConfig {
        name: "sweep".to_string(),
        pairs: CoprimePair::all_up_to(args.pairs_max),
        format: OutputFormat::Csv,
        ..SuiteConfig::default()
    };
    apply_flags(&mut cfg, args.suite)?;
    cfg.validate()?;
    run_and_write(&cfg)
}

fn parity_index(indices: &[u8]) -> Result<ParityIndex> {
    match indices {
        [i, j] if *i <= 1 && *j <= 1 => Ok(ParityIndex::new(i64::from(*i), i64::from(*j))),
        _ => bail!("expected two parity digits (0 or 1), got {indices:?}"),
    }
}

fn eval(args: EvalArgs) -> Result<()> {
    let z = parse_complex(&args.z)?;
    let tau = parse_complex(&args.tau)?;
    let ctx = EllipticContext::new(tau)?;
    let eps = f64::EPSILON;
    let (value, estimate): (Complex64, f64) = match args.expr {
        Expr::Theta => {
            let idx = match args.indices.as_slice() {
                [k] => ThetaIndex::try_from(*k)?,
                _ => bail!("theta takes one index 1-4"),
            };
            let v = theta(idx, z, ctx.tau_parameter(), ctx.truncation())?;
            (v.value, v.error_estimate)
        }
        Expr::Sn | Expr::Cn | Expr::Dn => {
            let j = jacobi_basic(z, &ctx)?;
            // relative errors of the four thetas involved add up
            let mut rel = 8.0 * eps;
            for idx in ThetaIndex::ALL {
                let t = theta(idx, z, ctx.tau_parameter(), ctx.truncation())?;
                if t.value.norm() > 0.0 {
                    rel += t.error_estimate / t.value.norm();
                }
            }
            let v = match args.expr {
                Expr::Sn => j.sn,
                Expr::Cn => j.cn,
                _ => j.dn,
            };
            (v, rel * v.norm())
        }
        Expr::F => f_ij_with_estimate(parity_index(&args.indices)?, z, &ctx)?,
        Expr::Wp => match args.mode {
            WpMode::FromF => {
                let (f, err) = f_ij_with_estimate(ParityIndex::CS, z, &ctx)?;
                let v = weierstrass_p(z, &ctx, WeierstrassMode::FromF)?;
                (v, 2.0 * f.norm() * err + 8.0 * eps * v.norm())
            }
            // truncation tail of the 600-box lattice sum
            WpMode::Lattice => (weierstrass_p(z, &ctx, WeierstrassMode::LATTICE_DEFAULT)?, 1e-3),
        },
        Expr::C => {
            let idx = parity_index(&args.indices)?;
            if args.contour || args.s > 2 {
                let cfg = ContourConfig::default();
                let v = laurent_c(idx, args.s, &ctx, CoefficientMode::Contour(cfg))?.value;
                // compare against half the nodes
                let coarse = ContourConfig { n_samples: cfg.n_samples / 2, ..cfg };
                let w = laurent_raw(idx, 2 * args.s as i64 - 1, &ctx, &coarse)?;
                (v, (v - w).norm().max(eps * v.norm()))
            } else {
                let v = laurent_c(idx, args.s, &ctx, CoefficientMode::ClosedForm)?.value;
                (v, 16.0 * eps * v.norm())
            }
        }
    };
    println!("{:.16e}{:+.16e}i {:.3e}", value.re, value.im, estimate);
    Ok(())
}
