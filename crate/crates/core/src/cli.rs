//! `speclab` command-line front end: one JSON config in, JSON/CSV reports out.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, InequalityReport, LevingerCurve, TheoremId};
use crate::error::Error;
use crate::falsify::{run_campaign, CampaignConfig, CampaignReport};
use crate::linops::PositiveOperator;
use crate::nystrom::{build_grid, discretize_kernel, KernelSpec, Scheme};
use crate::perron::{make_family, perron_pair, regularize, FamilyKind};

/// Process exit status; determined by results only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Passed = 0,
    Violation = 1,
    InputError = 2,
    NumericalFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            ExitStatus::Passed
        } else {
            ExitStatus::Violation
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            status: ExitStatus::InputError,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = if e.is_input_error() {
            ExitStatus::InputError
        } else {
            ExitStatus::NumericalFailure
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "speclab", version, about = "Check spectral-radius inequalities for positive operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one inequality on the operands in the config.
    Check(CommonArgs),
    /// Sample the Levinger curve and check its floor and monotonicity.
    Levinger(CommonArgs),
    /// Evaluate one inequality over a parameter grid.
    Sweep(CommonArgs),
    /// Run a seeded randomized campaign.
    Falsify(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON input document.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Relative tolerance used to judge reports.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Campaign seed override.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Quadrature size for kernel inputs.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Number of Levinger samples.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridInput {
    pub n: Option<usize>,
    #[serde(default)]
    pub scheme: Scheme,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepInput {
    pub param: String,
    pub values: Vec<f64>,
}

/// The input document. Which fields are required depends on the command and theorem.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub theorem: Option<TheoremId>,
    pub matrix: Option<Vec<Vec<f64>>>,
    pub weights: Option<Vec<f64>>,
    /// Second operand of the pair-norm inequality.
    pub b: Option<Vec<Vec<f64>>>,
    pub kernel: Option<KernelSpec>,
    pub grid: Option<GridInput>,
    pub family: Option<FamilyKind>,
    pub regularization: Option<f64>,
    pub u: Option<Vec<f64>>,
    pub d: Option<Vec<f64>>,
    pub e: Option<Vec<f64>>,
    pub ds: Option<Vec<Vec<f64>>>,
    pub es: Option<Vec<Vec<f64>>>,
    pub ts: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub ss: Option<Vec<f64>>,
    pub polys: Option<Vec<Vec<f64>>>,
    pub eps: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub sweep: Option<SweepInput>,
    pub campaign: Option<CampaignConfig>,
}

/// Default quadrature size for kernel inputs.
pub const DEFAULT_GRID_N: usize = 64;

struct Ctx<'a> {
    doc: InputDoc,
    args: &'a CommonArgs,
}

fn missing(field: &str, what: &str) -> CliError {
    CliError::input(format!("field '{field}' is required for {what}"))
}

impl Ctx<'_> {
    fn tol(&self) -> Option<f64> {
        self.args.tol.or(self.doc.tol)
    }

    fn operator_from(&self, rows: &[Vec<f64>], field: &str) -> CliResult<PositiveOperator> {
        let op = PositiveOperator::from_rows(rows).map_err(|e| CliError::input(format!("field '{field}': {e}")))?;
        match &self.doc.weights {
            Some(w) => op
                .with_weights(w.clone())
                .map_err(|e| CliError::input(format!("field 'weights': {e}"))),
            None => Ok(op),
        }
    }

    fn operator(&self) -> CliResult<PositiveOperator> {
        match (&self.doc.matrix, &self.doc.kernel) {
            (Some(m), None) => self.operator_from(m, "matrix"),
            (None, Some(k)) => {
                let grid_in = self.doc.grid.clone().unwrap_or_default();
                let n = self.args.grid_n.or(grid_in.n).unwrap_or(DEFAULT_GRID_N);
                let grid = build_grid(n, grid_in.scheme)?;
                Ok(discretize_kernel(k, &grid)?)
            }
            (Some(_), Some(_)) => Err(CliError::input("give either 'matrix' or 'kernel', not both")),
            (None, None) => Err(CliError::input("an operator is required: field 'matrix' or 'kernel'")),
        }
    }

    fn theorem(&self) -> CliResult<TheoremId> {
        self.doc.theorem.ok_or_else(|| missing("theorem", "this command"))
    }

    fn vec_or_ones(&self, v: &Option<Vec<f64>>, n: usize) -> Vec<f64> {
        v.clone().unwrap_or_else(|| vec![1.0; n])
    }

    fn samples(&self) -> usize {
        self.args.samples.or(self.doc.samples).unwrap_or(bounds::DEFAULT_SAMPLES)
    }
}

/// Evaluate `theorem` on the document's operands, with optional overrides of `t`, `s` and `eps`.
fn evaluate(ctx: &Ctx, theorem: TheoremId, t: Option<f64>, s: Option<f64>, eps: Option<&[f64]>) -> CliResult<Vec<InequalityReport>> {
    use TheoremId::*;
    let doc = &ctx.doc;
    let what = format!("theorem '{theorem}'");
    let reports = match theorem {
        Lemma1 | Lemma2 => {
            let mut k = ctx.operator()?;
            if let Some(eps) = doc.regularization {
                k = regularize(&k, eps)?;
            }
            let pair = perron_pair(&k, None)?;
            let u = doc.u.clone().ok_or_else(|| missing("u", &what))?;
            let n = k.dim();
            let rep = bounds::lemma_pair_bound(&k, &pair, &u, &ctx.vec_or_ones(&doc.d, n), &ctx.vec_or_ones(&doc.e, n))?;
            rep.all().into_iter().cloned().collect()
        }
        Sum | ConvexSum | SeriesSum | ResolventSum => {
            let kind = doc.family.clone().unwrap_or(FamilyKind::Similarity { scales: vec![] });
            let base = match (&kind, &doc.matrix, &doc.kernel) {
                (FamilyKind::Explicit { members }, None, None) => members
                    .first()
                    .cloned()
                    .ok_or_else(|| CliError::input("explicit family needs at least one member"))?,
                _ => ctx.operator()?,
            };
            let fam = make_family(&base, kind, doc.regularization)?;
            let (m, n) = (fam.len(), fam.dim());
            let rep = match theorem {
                Sum => {
                    let ds = doc.ds.clone().unwrap_or_else(|| vec![vec![1.0; n]; m]);
                    let es = doc.es.clone().unwrap_or_else(|| vec![vec![1.0; n]; m]);
                    bounds::sum_bound(&fam, &ds, &es)?
                }
                ConvexSum => bounds::convex_sum_bound(&fam, &ctx.vec_or_ones(&doc.ts, m))?,
                SeriesSum => bounds::series_sum_bound(&fam, doc.polys.as_deref().ok_or_else(|| missing("polys", &what))?)?,
                _ => {
                    let ss = match (s, &doc.ss, doc.s) {
                        (Some(s), _, _) => vec![s; m],
                        (None, Some(ss), _) => ss.clone(),
                        (None, None, Some(s)) => vec![s; m],
                        _ => return Err(missing("ss", &what)),
                    };
                    bounds::resolvent_sum_bound(&fam, &ss)?
                }
            };
            vec![rep]
        }
        SharpeningWeak | SharpeningStrong => {
            let mut k = ctx.operator()?;
            if let Some(eps) = doc.regularization {
                k = regularize(&k, eps)?;
            }
            let pair = perron_pair(&k, None)?;
            let s = s.or(doc.s).ok_or_else(|| missing("s", &what))?;
            let d = ctx.vec_or_ones(&doc.d, k.dim());
            bounds::resolvent_sharpening(&k, &pair, &d, s)?.all().into_iter().cloned().collect()
        }
        LevingerFloor | LevingerMonotone => {
            let k = ctx.operator()?;
            let curve = levinger(ctx, &k)?;
            let tol = ctx.tol().unwrap_or(bounds::DEFAULT_TOL);
            vec![curve.floor_report(tol), curve.monotone_report(tol)]
        }
        NrLinear | NrSquare => {
            let a = ctx.operator()?;
            let t = t.or(doc.t).ok_or_else(|| missing("t", &what))?;
            bounds::numerical_radius_chain(&a, t)?.reports
        }
        NrSymmetric => {
            let a = ctx.operator()?;
            let d = ctx.vec_or_ones(&doc.d, a.dim());
            vec![bounds::symmetric_similarity_bound(&a, &d)?]
        }
        PairNorm | PairNormT => {
            let a = ctx.operator()?;
            let b = ctx.operator_from(doc.b.as_deref().ok_or_else(|| missing("b", &what))?, "b")?;
            let t = match theorem {
                PairNormT => Some(t.or(doc.t).ok_or_else(|| missing("t", &what))?),
                _ => None,
            };
            bounds::pair_norm_bound(&a, &b, t)?.all().cloned().collect()
        }
        DecreasingLimit => {
            let k = ctx.operator()?;
            let eps = eps.or(doc.eps.as_deref()).ok_or_else(|| missing("eps", &what))?;
            vec![bounds::decreasing_limit_check(&k, eps)?.report]
        }
        AdjointRadius => vec![bounds::adjoint_radius_check(&ctx.operator()?)?],
    };
    Ok(match ctx.tol() {
        Some(tol) => reports.into_iter().map(|r| r.with_tol(tol)).collect(),
        None => reports,
    })
}

fn levinger(ctx: &Ctx, k: &PositiveOperator) -> CliResult<LevingerCurve> {
    let d = ctx.vec_or_ones(&ctx.doc.d, k.dim());
    let samples = ctx.samples();
    if samples < 2 {
        return Err(CliError::input("samples must be at least 2"));
    }
    Ok(bounds::levinger_curve(k, &d, &bounds::uniform_samples(samples))?)
}

/// Render floats with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::input(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::input(format!("csv encoding failed: {e}")))
}

fn report_row(r: &InequalityReport) -> Vec<String> {
    vec![
        r.theorem_id.to_string(),
        num(r.lhs),
        num(r.rhs),
        num(r.margin),
        r.pass.to_string(),
        r.context.clone(),
    ]
}

const REPORT_HEADER: [&str; 6] = ["theorem_id", "lhs", "rhs", "margin", "pass", "context"];

fn reports_csv(reports: &[InequalityReport]) -> CliResult<Vec<u8>> {
    csv_bytes(&REPORT_HEADER, reports.iter().map(report_row))
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::input(format!("json encoding failed: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

/// Write via a temporary file in the destination directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn companion(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Files to emit; without `--out` the primary payload goes to stdout.
struct Outputs {
    primary: Vec<u8>,
    companions: Vec<(&'static str, Vec<u8>)>,
}

fn emit(args: &CommonArgs, out: Outputs) -> CliResult<()> {
    let io = |p: &Path, e: std::io::Error| CliError::input(format!("cannot write {}: {e}", p.display()));
    match &args.out {
        Some(path) => {
            write_atomic(path, &out.primary).map_err(|e| io(path, e))?;
            for (suffix, bytes) in &out.companions {
                let p = companion(path, suffix);
                write_atomic(&p, bytes).map_err(|e| io(&p, e))?;
            }
        }
        None => {
            std::io::stdout()
                .write_all(&out.primary)
                .map_err(|e| io(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn summarize(args: &CommonArgs, line: String) {
    // With no --out the data occupies stdout, so the summary moves to stderr.
    if args.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn verdict(reports: &[InequalityReport]) -> (ExitStatus, String) {
    let failed = reports.iter().filter(|r| !r.pass).count();
    let worst = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let status = ExitStatus::from_pass(failed == 0);
    let word = if failed == 0 { "PASS" } else { "FAIL" };
    (status, format!("{word}: {} report(s), {failed} violated, min margin {worst:e}", reports.len()))
}

fn cmd_check(ctx: &Ctx) -> CliResult<ExitStatus> {
    let theorem = ctx.theorem()?;
    let reports = evaluate(ctx, theorem, None, None, None)?;
    let primary = match ctx.args.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&reports)?,
        Format::Csv => reports_csv(&reports)?,
    };
    emit(ctx.args, Outputs { primary, companions: vec![] })?;
    let (status, line) = verdict(&reports);
    summarize(ctx.args, format!("check {theorem} {line}"));
    Ok(status)
}

#[derive(Serialize)]
struct LevingerSummary<'a> {
    samples: usize,
    r_base: f64,
    floor_margin: f64,
    monotone_up_violation: f64,
    monotone_down_violation: f64,
    reports: &'a [InequalityReport],
}

#[derive(Serialize)]
struct LevingerJson<'a> {
    curve: &'a LevingerCurve,
    reports: &'a [InequalityReport],
}

fn cmd_levinger(ctx: &Ctx) -> CliResult<ExitStatus> {
    let k = ctx.operator()?;
    let curve = levinger(ctx, &k)?;
    let tol = ctx.tol().unwrap_or(bounds::DEFAULT_TOL);
    let reports = [curve.floor_report(tol), curve.monotone_report(tol)];
    let summary = LevingerSummary {
        samples: curve.ts.len(),
        r_base: curve.r_base,
        floor_margin: curve.floor_margin(),
        monotone_up_violation: curve.monotone_up_violation,
        monotone_down_violation: curve.monotone_down_violation,
        reports: &reports,
    };
    let out = match ctx.args.format.unwrap_or(Format::Csv) {
        Format::Csv => Outputs {
            primary: csv_bytes(
                &["t", "phi", "r_base"],
                curve
                    .ts
                    .iter()
                    .zip(&curve.phis)
                    .map(|(t, p)| vec![num(*t), num(*p), num(curve.r_base)]),
            )?,
            companions: vec![(".summary.json", json_bytes(&summary)?)],
        },
        Format::Json => Outputs {
            primary: json_bytes(&LevingerJson {
                curve: &curve,
                reports: &reports,
            })?,
            companions: vec![],
        },
    };
    emit(ctx.args, out)?;
    let (status, line) = verdict(&reports);
    summarize(
        ctx.args,
        format!("levinger {line}, floor margin {:e}", curve.floor_margin()),
    );
    Ok(status)
}

/// Name of the per-point quantity column in a sweep table.
fn sweep_quantity(theorem: TheoremId) -> &'static str {
    match theorem {
        TheoremId::DecreasingLimit => "r",
        TheoremId::NrLinear | TheoremId::NrSquare => "w",
        TheoremId::LevingerFloor | TheoremId::LevingerMonotone => "phi",
        _ => "lhs",
    }
}

fn sweep_point(ctx: &Ctx, theorem: TheoremId, param: &str, values: &[f64], i: usize) -> CliResult<(f64, Vec<InequalityReport>)> {
    use TheoremId::*;
    let v = values[i];
    let bad = || CliError::input(format!("theorem '{theorem}' cannot be swept over '{param}'"));
    Ok(match (theorem, param) {
        (DecreasingLimit, "eps") => {
            let k = ctx.operator()?;
            let dl = bounds::decreasing_limit_check(&k, &values[..=i])?;
            let report = match ctx.tol() {
                Some(tol) => dl.report.with_tol(tol),
                None => dl.report,
            };
            (dl.radii[i], vec![report])
        }
        (NrLinear | NrSquare, "t") => {
            let chain = bounds::numerical_radius_chain(&ctx.operator()?, v)?;
            let reports = chain.reports.iter().filter(|r| r.theorem_id == theorem).cloned();
            let reports = match ctx.tol() {
                Some(tol) => reports.map(|r| r.with_tol(tol)).collect(),
                None => reports.collect(),
            };
            let w = if theorem == NrLinear { chain.w_m } else { chain.w_m2 };
            (w, reports)
        }
        (LevingerFloor | LevingerMonotone, "t") => {
            let k = ctx.operator()?;
            let d = ctx.vec_or_ones(&ctx.doc.d, k.dim());
            let scaled = crate::linops::similarity_scale(&k, &d)?;
            let phi = bounds::levinger_phi(&scaled, &crate::linops::adjoint(&k), v)?;
            let r = crate::linops::spectral_radius(&k)?;
            let rep = InequalityReport::new(
                LevingerFloor,
                phi,
                r,
                ctx.tol().unwrap_or(bounds::DEFAULT_TOL),
                format!("t={v}"),
            );
            (phi, vec![rep])
        }
        (NrSymmetric | PairNorm | AdjointRadius | Lemma1 | Lemma2 | Sum | ConvexSum | SeriesSum, _) => {
            return Err(bad())
        }
        (PairNormT, "t") => {
            let reports = evaluate(ctx, theorem, Some(v), None, None)?;
            (reports[0].lhs, reports)
        }
        (ResolventSum | SharpeningWeak | SharpeningStrong, "s") => {
            let reports = evaluate(ctx, theorem, None, Some(v), None)?;
            let pick = match theorem {
                SharpeningStrong => 1,
                _ => 0,
            };
            (reports[pick].lhs, reports)
        }
        _ => return Err(bad()),
    })
}

fn cmd_sweep(ctx: &Ctx) -> CliResult<ExitStatus> {
    let theorem = ctx.theorem()?;
    let sweep = ctx.doc.sweep.as_ref().ok_or_else(|| missing("sweep", "the sweep command"))?;
    if sweep.values.is_empty() {
        return Err(CliError::input("sweep grid 'values' must not be empty"));
    }
    let points = (0..sweep.values.len())
        .map(|i| sweep_point(ctx, theorem, &sweep.param, &sweep.values, i))
        .collect::<CliResult<Vec<_>>>()?;
    let all: Vec<InequalityReport> = points.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    let primary = match ctx.args.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let quantity = sweep_quantity(theorem);
            let mut header = vec![sweep.param.as_str(), quantity];
            header.extend(REPORT_HEADER);
            let rows = sweep.values.iter().zip(&points).flat_map(|(v, (q, reps))| {
                reps.iter().map(move |r| {
                    let mut row = vec![num(*v), num(*q)];
                    row.extend(report_row(r));
                    row
                })
            });
            csv_bytes(&header, rows.collect::<Vec<_>>())?
        }
        Format::Json => json_bytes(&all)?,
    };
    emit(ctx.args, Outputs { primary, companions: vec![] })?;
    let (status, line) = verdict(&all);
    summarize(
        ctx.args,
        format!("sweep {theorem} over {} ({} points) {line}", sweep.param, points.len()),
    );
    Ok(status)
}

fn margins_csv(report: &CampaignReport) -> CliResult<Vec<u8>> {
    csv_bytes(
        &["trial", "seed", "theorem_id", "lhs", "rhs", "margin", "pass", "context"],
        report.rows.iter().map(|r| {
            vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.theorem_id.to_string(),
                num(r.lhs),
                num(r.rhs),
                num(r.margin),
                r.pass.to_string(),
                r.context.clone(),
            ]
        }),
    )
}

fn cmd_falsify(ctx: &Ctx) -> CliResult<ExitStatus> {
    let mut cfg = ctx.doc.campaign.clone().unwrap_or_default();
    if let Some(seed) = ctx.args.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = ctx.tol() {
        cfg.tol = tol;
    }
    let report = run_campaign(&cfg)?;
    let (primary, companion) = match ctx.args.format.unwrap_or(Format::Json) {
        Format::Json => (json_bytes(&report)?, (".margins.csv", margins_csv(&report)?)),
        Format::Csv => (margins_csv(&report)?, (".summary.json", json_bytes(&report)?)),
    };
    emit(
        ctx.args,
        Outputs {
            primary,
            companions: vec![companion],
        },
    )?;
    eprintln!("falsify runtime: {:.3}s", report.runtime.as_secs_f64());
    let violations = report.violation_count();
    let status = ExitStatus::from_pass(violations == 0);
    summarize(
        ctx.args,
        format!(
            "falsify seed {} trials {}: {} theorem(s), {violations} violation(s), {} failed trial(s)",
            cfg.seed,
            cfg.trials,
            report.theorems.len(),
            report.failures.len()
        ),
    );
    Ok(status)
}

fn load(args: &CommonArgs) -> CliResult<InputDoc> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", args.config.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", args.config.display())))
}

pub fn run(cli: Cli) -> CliResult<ExitStatus> {
    let start = Instant::now();
    let (args, cmd): (&CommonArgs, fn(&Ctx) -> CliResult<ExitStatus>) = match &cli.command {
        Command::Check(a) => (a, cmd_check),
        Command::Levinger(a) => (a, cmd_levinger),
        Command::Sweep(a) => (a, cmd_sweep),
        Command::Falsify(a) => (a, cmd_falsify),
    };
    let ctx = Ctx { doc: load(args)?, args };
    if let Some(tol) = ctx.tol() {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::input(format!("tolerance must be a non-negative number, got {tol}")));
        }
    }
    let status = cmd(&ctx);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    status
}

/// Parse `argv`, run, and return the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::InputError.code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status.code()
        }
    }
}
