//! Batch verification over a grid of cases, pairs and tau values, plus the
//! JSON / CSV encoders for the result.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::{OutputFormat, SuiteConfig};
use crate::elliptic::EllipticContext;
use crate::error::{Error, Result};
use crate::identity::{
    degeneration_check, verify_classical_identity, verify_classical_reciprocity, verify_dedekind_reciprocity,
    verify_derivative_reciprocity, verify_elliptic_identity, CoprimePair, IdentityCase, IdentityKind,
    VerificationReport, SAMPLE_ORIGIN,
};
use crate::laurent::ContourConfig;
use crate::theta::TauParameter;

/// Degeneration checks run only from this imaginary part of tau upward.
pub const DEGENERATION_MIN_IM_TAU: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped_not_admissible: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub config: SuiteConfig,
    pub reports: Vec<VerificationReport>,
    pub summary: SuiteSummary,
    pub elapsed: Duration,
}

enum Cell {
    Elliptic { case: IdentityCase, pair: CoprimePair, tau: usize },
    Classical { case: IdentityCase, pair: CoprimePair },
}

enum CellOutcome {
    Reports(Vec<VerificationReport>),
    Skipped,
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteResult> {
    config.validate()?;
    let start = Instant::now();

    let mut contexts = Vec::with_capacity(config.taus.len());
    for &tau in &config.taus {
        let param = TauParameter::new(tau)?;
        if !param.in_fundamental_domain() {
            log::warn!("tau = {tau} lies outside the fundamental domain of Gamma(2)");
        }
        contexts.push((EllipticContext::new(tau)?, param.in_fundamental_domain()));
    }

    let mut cells = Vec::new();
    for &case in &config.cases {
        for &pair in &config.pairs {
            for tau in 0..config.taus.len() {
                cells.push(Cell::Elliptic { case, pair, tau });
            }
            cells.push(Cell::Classical { case, pair });
        }
    }

    let contour = ContourConfig::default();
    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|cell| match *cell {
            Cell::Elliptic { case, pair, tau } => {
                let (ctx, in_domain) = &contexts[tau];
                run_elliptic_cell(config, &contour, case, pair, ctx, *in_domain)
            }
            Cell::Classical { case, pair } => run_classical_cell(config, case, pair),
        })
        .collect();

    let mut reports = Vec::new();
    let mut summary = SuiteSummary::default();
    for outcome in outcomes {
        match outcome {
            CellOutcome::Skipped => summary.skipped_not_admissible += 1,
            CellOutcome::Reports(rs) => {
                for r in rs {
                    if r.passed {
                        summary.passed += 1;
                    } else {
                        log::warn!("failed: {} {} {} tau={:?} residual={:e}", r.identity, r.case, r.pair, r.tau, r.max_abs_residual);
                        summary.failed += 1;
                    }
                    reports.push(r);
                }
            }
        }
    }
    summary.total = summary.passed + summary.failed + summary.skipped_not_admissible;
    let elapsed = start.elapsed();
    log::info!(
        "suite `{}`: {} passed, {} failed, {} skipped in {:.2?}",
        config.name,
        summary.passed,
        summary.failed,
        summary.skipped_not_admissible,
        elapsed
    );
    Ok(SuiteResult {
        config: config.clone(),
        reports,
        summary,
        elapsed,
    })
}

/// Errors inside a cell become failed reports rather than aborting the run.
fn or_failed(
    result: Result<VerificationReport>,
    identity: IdentityKind,
    case: IdentityCase,
    pair: CoprimePair,
    tau: Option<Complex64>,
    tolerance: f64,
) -> VerificationReport {
    result.unwrap_or_else(|err| VerificationReport {
        identity,
        case,
        pair,
        tau,
        samples: 0,
        max_abs_residual: f64::NAN,
        max_rel_residual: f64::NAN,
        scale: f64::NAN,
        tolerance,
        passed: false,
        metadata: BTreeMap::from([("error".to_string(), err.to_string())]),
    })
}

fn run_elliptic_cell(
    config: &SuiteConfig,
    contour: &ContourConfig,
    case: IdentityCase,
    pair: CoprimePair,
    ctx: &EllipticContext,
    in_domain: bool,
) -> CellOutcome {
    if !case.admissible(pair) {
        return CellOutcome::Skipped;
    }
    let tol = &config.tolerances;
    let tau = Some(ctx.tau());
    let mut out = vec![
        or_failed(
            verify_elliptic_identity(case, pair, ctx, config.samples, tol.elliptic_identity),
            IdentityKind::EllipticIdentity,
            case,
            pair,
            tau,
            tol.elliptic_identity,
        ),
        or_failed(
            verify_dedekind_reciprocity(case, pair, ctx, tol.dedekind),
            IdentityKind::DedekindReciprocity,
            case,
            pair,
            tau,
            tol.dedekind,
        ),
    ];
    for n in 1..=config.n_max {
        out.push(or_failed(
            verify_derivative_reciprocity(case, pair, n, ctx, contour, tol.derivative),
            IdentityKind::DerivativeReciprocity(n),
            case,
            pair,
            tau,
            tol.derivative,
        ));
    }
    if ctx.tau().im >= DEGENERATION_MIN_IM_TAU {
        out.push(or_failed(
            degeneration_check(case, pair, ctx, SAMPLE_ORIGIN, tol.degeneration),
            IdentityKind::Degeneration,
            case,
            pair,
            tau,
            tol.degeneration,
        ));
    }
    if !in_domain {
        for r in &mut out {
            r.metadata
                .insert("warning".to_string(), "tau outside the fundamental domain of Gamma(2)".to_string());
        }
    }
    CellOutcome::Reports(out)
}

fn run_classical_cell(config: &SuiteConfig, case: IdentityCase, pair: CoprimePair) -> CellOutcome {
    if !case.admissible(pair) {
        return CellOutcome::Skipped;
    }
    let tol = config.tolerances.classical;
    CellOutcome::Reports(vec![
        or_failed(
            verify_classical_identity(case, pair, config.samples, tol),
            IdentityKind::ClassicalIdentity,
            case,
            pair,
            None,
            tol,
        ),
        or_failed(
            verify_classical_reciprocity(case, pair, tol),
            IdentityKind::ClassicalReciprocity,
            case,
            pair,
            None,
            tol,
        ),
    ])
}

/// One report as it appears in the JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub identity: String,
    pub case: [u8; 4],
    pub pair: [u64; 2],
    pub tau: Option<[f64; 2]>,
    pub samples: usize,
    pub max_abs_residual: Option<f64>,
    pub max_rel_residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub metadata: BTreeMap<String, String>,
}

impl From<&VerificationReport> for ReportRecord {
    fn from(r: &VerificationReport) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        Self {
            identity: r.identity.to_string(),
            case: r.case.digits(),
            pair: [r.pair.a(), r.pair.b()],
            tau: r.tau.map(|t| [t.re, t.im]),
            samples: r.samples,
            max_abs_residual: finite(r.max_abs_residual),
            max_rel_residual: finite(r.max_rel_residual),
            tolerance: r.tolerance,
            passed: r.passed,
            metadata: r.metadata.clone(),
        }
    }
}

#[derive(Serialize)]
struct ConfigRecord {
    tau: Vec<[f64; 2]>,
    pairs: Vec<[u64; 2]>,
    cases: Vec<[u8; 4]>,
    n_max: usize,
    samples: usize,
    tolerances: BTreeMap<&'static str, f64>,
}

#[derive(Serialize)]
struct Document<'a> {
    suite: &'a str,
    config: ConfigRecord,
    reports: Vec<ReportRecord>,
    summary: SuiteSummary,
}

/// Pretty printing with every float as 17 significant digits in exponent
/// form, so equal results always serialize to equal bytes.
struct FixedFloatFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn write_json<W: Write>(result: &SuiteResult, writer: W) -> Result<()> {
    let cfg = &result.config;
    let t = &cfg.tolerances;
    let doc = Document {
        suite: &cfg.name,
        config: ConfigRecord {
            tau: cfg.taus.iter().map(|t| [t.re, t.im]).collect(),
            pairs: cfg.pairs.iter().map(|p| [p.a(), p.b()]).collect(),
            cases: cfg.cases.iter().map(|c| c.digits()).collect(),
            n_max: cfg.n_max,
            samples: cfg.samples,
            tolerances: BTreeMap::from([
                ("classical", t.classical),
                ("dedekind", t.dedekind),
                ("degeneration", t.degeneration),
                ("derivative", t.derivative),
                ("elliptic_identity", t.elliptic_identity),
            ]),
        },
        reports: result.reports.iter().map(ReportRecord::from).collect(),
        summary: result.summary,
    };
    let mut ser = serde_json::Serializer::with_formatter(writer, FixedFloatFormatter(PrettyFormatter::new()));
    doc.serialize(&mut ser).map_err(|e| Error::Io(e.to_string()))?;
    let mut writer = ser.into_inner();
    writer.write_all(b"\n")?;
    Ok(())
}

/// Flat CSV row; floats use the same 17-digit formatting as the JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub identity: String,
    pub case: String,
    pub a: u64,
    pub b: u64,
    pub tau_re: String,
    pub tau_im: String,
    pub samples: usize,
    pub max_abs_residual: String,
    pub max_rel_residual: String,
    pub tolerance: String,
    pub passed: bool,
}

fn fixed(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

impl From<&ReportRecord> for CsvRecord {
    fn from(r: &ReportRecord) -> Self {
        let digits: String = r.case.iter().map(|d| char::from(b'0' + d)).collect();
        Self {
            identity: r.identity.clone(),
            case: digits,
            a: r.pair[0],
            b: r.pair[1],
            tau_re: fixed(r.tau.map(|t| t[0])),
            tau_im: fixed(r.tau.map(|t| t[1])),
            samples: r.samples,
            max_abs_residual: fixed(r.max_abs_residual),
            max_rel_residual: fixed(r.max_rel_residual),
            tolerance: fixed(Some(r.tolerance)),
            passed: r.passed,
        }
    }
}

pub fn write_csv<W: Write>(result: &SuiteResult, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in &result.reports {
        w.serialize(CsvRecord::from(&ReportRecord::from(r)))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(result: &SuiteResult, format: OutputFormat, writer: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(result, writer),
        OutputFormat::Csv => write_csv(result, writer),
    }
}
