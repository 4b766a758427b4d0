//! `specpair` command-line front end.
//!
//! Exit codes: 0 on success, 2 when the hypotheses of a construction fail
//! (the diagnostic report is still written), 1 on invalid input.

mod figures;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use specpair::analytics::{build_gram, estimate_frame_bounds, DualBasis, DualSystem, FrameBoundEstimate};
use specpair::constructor::{
    bessel_constant, check_completeness_hypotheses, combine, BesselBound, CombinedPairResult, CompletenessReport,
};
use specpair::domains::{BoxDomain, Spectrum};
use specpair::finite::finite_report;
use specpair::linalg;
use specpair::rational::{format_rational, format_vector, to_f64};
use specpair::sampling::{
    midpoint_grid, reconstruct_spectrum, relative_error, sample_signal, verify_alias_cancellation, AliasReport,
    BandlimitedSignal, SamplePattern,
};
use specpair::search::{enumerate_pairs, hadamard_report, HadamardReport, SearchHit, SearchMode, SearchQuery};
use specpair::PairKind;

use input::{resolve, PairArgs, ResolvedPair};
use output::{num, write_csv, write_json, write_json_lines};

#[derive(Debug, Parser)]
#[command(name = "specpair", version, about = "Frame, Riesz and orthogonal exponential pairs built from finite pairs")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a finite pair (A, J) in Z_N^d.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine a base pair with (A, J) and check every hypothesis.
    Construct {
        #[command(flatten)]
        pair: PairArgs,
        /// Target kind: frame, riesz or orthogonal.
        #[arg(long)]
        kind: Option<PairKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated Gram matrix of the combined pair.
    Gram {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[command(flatten)]
        files: Files,
    },
    /// Estimated frame bounds at increasing truncation radii.
    Bounds {
        #[command(flatten)]
        pair: PairArgs,
        /// Comma-separated increasing radii.
        #[arg(long, default_value = "2,4,8")]
        radii: String,
        #[command(flatten)]
        files: Files,
    },
    /// Finite dual matrix and piecewise dual coefficients.
    Dual {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        files: Files,
    },
    /// Biorthogonality defect of the explicit dual basis.
    Biorth {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the signal with spectrum indicator of [0,1)+A on Z + J/N and reconstruct it.
    SampleRecon {
        #[command(flatten)]
        pair: PairArgs,
        /// Truncation: samples at {-M, ..., M} + J/N.
        #[arg(long = "M", default_value_t = 32)]
        truncation: u32,
        /// Number of evaluation points over the spectral domain.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        files: Files,
    },
    /// Search Z_N^d for Riesz or orthogonal pairs of size k.
    Search(SearchArgs),
    /// Write CSV data for fig1, fig2, fig3 or fig4.
    Figure {
        name: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
struct Files {
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV data path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct SearchArgs {
    #[arg(long = "N")]
    modulus: u64,
    #[arg(long = "d", default_value_t = 1)]
    dimension: usize,
    #[arg(long = "k")]
    cardinality: usize,
    #[arg(long, default_value = "orthogonal")]
    kind: PairKind,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random candidates drawn when N^d exceeds the exhaustive limit.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long = "budget-ms")]
    budget_ms: Option<u64>,
    /// Keep one representative per translation class of A and of J.
    #[arg(long)]
    canonical: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Status {
    Done,
    HypothesesFailed,
}

fn pairs(m: &linalg::CMatrix) -> Vec<Vec<[f64; 2]>> {
    linalg::to_pairs(m)
}

fn report_failures(result: &CombinedPairResult) {
    for h in result.failed_checks() {
        eprintln!("hypothesis {} failed: {}", h.name, h.detail);
    }
}

/// Combines with the requested kind; the pair is absent when translates
/// overlap or shifted spectra coincide.
fn combined(r: &ResolvedPair, target: PairKind) -> CombinedPairResult {
    combine(&r.base, &r.a, &r.j, target, &r.tol)
}

#[derive(Serialize)]
struct ConstructReport {
    result: CombinedPairResult,
    completeness: CompletenessReport,
    bessel: BesselBound,
}

fn cmd_construct(pair: &PairArgs, kind: Option<PairKind>, out: Option<PathBuf>) -> Result<Status> {
    let r = resolve(pair)?;
    let target = kind.or(r.kind).unwrap_or(PairKind::Frame);
    if target < PairKind::Frame {
        bail!("construct targets frame, riesz or orthogonal");
    }
    let result = combined(&r, target);
    let ok = result.succeeded();
    report_failures(&result);
    let report = ConstructReport {
        completeness: check_completeness_hypotheses(&r.base, &r.a, &r.j),
        bessel: bessel_constant(&r.base, &r.a, &r.j),
        result,
    };
    write_json(&report, out.as_deref())?;
    Ok(if ok { Status::Done } else { Status::HypothesesFailed })
}

/// Domain and spectrum of the combined pair, or the diagnostic result when they cannot be formed.
fn combined_geometry(r: &ResolvedPair, out: Option<&std::path::Path>) -> Result<Option<(BoxDomain, Spectrum, CombinedPairResult)>> {
    let result = combined(r, PairKind::Frame);
    match result.pair.clone() {
        Some(p) => Ok(Some((p.domain, p.spectrum, result))),
        None => {
            report_failures(&result);
            write_json(&result, out)?;
            Ok(None)
        }
    }
}

#[derive(Serialize)]
struct GramReport {
    radius: f64,
    measure: String,
    hypotheses_passed: bool,
    points: Vec<String>,
    eigenvalues: Vec<f64>,
    max_off_diagonal: f64,
    deviation_from_measure: f64,
    entries: Vec<Vec<[f64; 2]>>,
}

fn cmd_gram(pair: &PairArgs, radius: f64, files: &Files) -> Result<Status> {
    let r = resolve(pair)?;
    let Some((domain, spectrum, result)) = combined_geometry(&r, files.out.as_deref())? else {
        return Ok(Status::HypothesesFailed);
    };
    let gram = build_gram(&domain, &spectrum, radius)?;
    let measure = domain.measure();
    let report = GramReport {
        radius,
        measure: format_rational(&measure),
        hypotheses_passed: result.succeeded(),
        points: gram.points.iter().map(|p| format_vector(p)).collect(),
        eigenvalues: gram.eigenvalues(),
        max_off_diagonal: gram.max_off_diagonal(),
        deviation_from_measure: gram.deviation_from_scalar(to_f64(&measure)),
        entries: pairs(&gram.entries),
    };
    if let Some(path) = &files.csv {
        let mut rows = Vec::new();
        for i in 0..gram.len() {
            for k in 0..gram.len() {
                let z = gram.entries[(i, k)];
                rows.push(vec![i.to_string(), k.to_string(), num(z.re), num(z.im)]);
            }
        }
        write_csv(path, &["row", "column", "re", "im"], &rows)?;
    }
    write_json(&report, files.out.as_deref())?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct BoundsReport {
    label: &'static str,
    predicted_lower: Option<f64>,
    predicted_upper: Option<f64>,
    hypotheses_passed: bool,
    estimates: Vec<FrameBoundEstimate>,
}

fn parse_radii(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| anyhow::anyhow!("invalid radius {x:?}: {e}")))
        .collect()
}

fn cmd_bounds(pair: &PairArgs, radii: &str, files: &Files) -> Result<Status> {
    let r = resolve(pair)?;
    let radii = parse_radii(radii)?;
    let Some((domain, spectrum, result)) = combined_geometry(&r, files.out.as_deref())? else {
        return Ok(Status::HypothesesFailed);
    };
    let estimates = estimate_frame_bounds(&domain, &spectrum, &radii)?;
    if let Some(path) = &files.csv {
        let rows: Vec<Vec<String>> = estimates
            .iter()
            .map(|e| vec![num(e.radius), e.points.to_string(), num(e.lower), num(e.upper)])
            .collect();
        write_csv(path, &["radius", "points", "lower", "upper"], &rows)?;
    }
    let report = BoundsReport {
        label: "estimated",
        predicted_lower: result.predicted_lower,
        predicted_upper: result.predicted_upper,
        hypotheses_passed: result.succeeded(),
        estimates,
    };
    write_json(&report, files.out.as_deref())?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct DualReport {
    finite_dual: Vec<Vec<[f64; 2]>>,
    piece_coefficients: Vec<Vec<[f64; 2]>>,
    self_dual: bool,
    hadamard: HadamardReport,
}

#[derive(Serialize)]
struct FailureReport {
    error: String,
}

fn cmd_dual(pair: &PairArgs, files: &Files) -> Result<Status> {
    let r = resolve(pair)?;
    let dual = match DualBasis::new(&r.a, &r.j) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            write_json(&FailureReport { error: e.to_string() }, files.out.as_deref())?;
            return Ok(Status::HypothesesFailed);
        }
    };
    if let Some(path) = &files.csv {
        let k = dual.finite_dual.nrows();
        let mut rows = Vec::new();
        for rr in 0..k {
            for s in 0..k {
                let (g, c) = (dual.finite_dual[(rr, s)], dual.piece_coefficients[(rr, s)]);
                rows.push(vec![rr.to_string(), s.to_string(), num(g.re), num(g.im), num(c.re), num(c.im)]);
            }
        }
        write_csv(path, &["r", "s", "dual_re", "dual_im", "coefficient_re", "coefficient_im"], &rows)?;
    }
    let report = DualReport {
        finite_dual: pairs(&dual.finite_dual),
        piece_coefficients: pairs(&dual.piece_coefficients),
        self_dual: dual.is_self_dual(),
        hadamard: hadamard_report(&r.a, &r.j)?,
    };
    write_json(&report, files.out.as_deref())?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct BiorthReport {
    radius: f64,
    points: usize,
    measure: String,
    defect: f64,
}

fn cmd_biorth(pair: &PairArgs, radius: f64, out: Option<PathBuf>) -> Result<Status> {
    let r = resolve(pair)?;
    let result = combined(&r, PairKind::RieszBasis);
    if !result.succeeded() {
        report_failures(&result);
        write_json(&result, out.as_deref())?;
        return Ok(Status::HypothesesFailed);
    }
    let system = DualSystem::new(&r.base.domain, &r.base.spectrum, &r.a, &r.j)?;
    let report = BiorthReport {
        radius,
        points: system.points(radius).len(),
        measure: format_rational(&system.domain().measure()),
        defect: system.biorthogonality_defect(radius),
    };
    write_json(&report, out.as_deref())?;
    Ok(Status::Done)
}

#[derive(Serialize)]
struct SamplingReport {
    truncation: u32,
    grid: usize,
    relative_error: f64,
    alias: AliasReport,
}

fn cmd_sample_recon(pair: &PairArgs, truncation: u32, grid: usize, files: &Files) -> Result<Status> {
    let r = resolve(pair)?;
    if r.a.dimension() != 1 {
        bail!("sample-recon supports d = 1 only");
    }
    if grid == 0 {
        bail!("--grid must be positive");
    }
    let n = r.modulus() as i64;
    let alias = verify_alias_cancellation(&r.a, &r.j, -2 * n..=2 * n)?;
    let domain = specpair::domains::minkowski_translate(&BoxDomain::unit_cube(1), &r.a)?;
    let signal = BandlimitedSignal::indicator(domain.clone())?;
    let pattern = SamplePattern::from_finite(&r.j, truncation)?;
    let points = midpoint_grid(&domain, grid);
    let estimate = reconstruct_spectrum(&sample_signal(&signal, &pattern), &pattern, &r.j, &points)?;
    if let Some(path) = &files.csv {
        let rows: Vec<Vec<String>> = points
            .iter()
            .zip(&estimate)
            .map(|(&xi, z)| {
                let err: Complex64 = z - signal.fourier_transform(xi);
                vec![num(xi), num(z.re), num(z.im), num(err.norm())]
            })
            .collect();
        write_csv(path, &["xi", "re", "im", "error"], &rows)?;
    }
    let ok = alias.passed();
    for v in &alias.violations {
        eprintln!("alias case {} fails at k = {}: {}", v.case, v.k, v.detail);
    }
    let report = SamplingReport {
        truncation,
        grid: points.len(),
        relative_error: relative_error(&signal, &points, &estimate),
        alias,
    };
    write_json(&report, files.out.as_deref())?;
    Ok(if ok { Status::Done } else { Status::HypothesesFailed })
}

#[derive(Serialize)]
struct SearchLine<'a> {
    mode: SearchMode,
    seed: u64,
    #[serde(flatten)]
    hit: &'a SearchHit,
}

fn cmd_search(args: &SearchArgs) -> Result<Status> {
    let mut q = SearchQuery::new(args.modulus, args.dimension, args.cardinality, args.kind);
    q.max_results = args.limit;
    q.time_budget = args.budget_ms.map(std::time::Duration::from_millis);
    q.seed = args.seed;
    q.samples = args.samples;
    q.canonical_only = args.canonical;
    let outcome = enumerate_pairs(&q)?;
    let lines: Vec<SearchLine> = outcome
        .hits
        .iter()
        .map(|hit| SearchLine {
            mode: outcome.mode,
            seed: outcome.seed,
            hit,
        })
        .collect();
    write_json_lines(&lines, args.out.as_deref())?;
    eprintln!(
        "{{\"mode\":{},\"seed\":{},\"examined\":{},\"hits\":{},\"partial\":{},\"truncated\":{}}}",
        serde_json::to_string(&outcome.mode)?,
        outcome.seed,
        outcome.examined,
        outcome.hits.len(),
        outcome.partial,
        outcome.truncated
    );
    Ok(Status::Done)
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Classify { pair, out } => {
            let r = resolve(&pair)?;
            write_json(&finite_report(&r.a, &r.j, &r.tol)?, out.as_deref())?;
            Ok(Status::Done)
        }
        Command::Construct { pair, kind, out } => cmd_construct(&pair, kind, out),
        Command::Gram { pair, radius, files } => cmd_gram(&pair, radius, &files),
        Command::Bounds { pair, radii, files } => cmd_bounds(&pair, &radii, &files),
        Command::Dual { pair, files } => cmd_dual(&pair, &files),
        Command::Biorth { pair, radius, out } => cmd_biorth(&pair, radius, out),
        Command::SampleRecon {
            pair,
            truncation,
            grid,
            files,
        } => cmd_sample_recon(&pair, truncation, grid, &files),
        Command::Search(args) => cmd_search(&args),
        Command::Figure { name, out } => {
            for path in figures::write_figure(&name, &out)? {
                println!("{}", path.display());
            }
            Ok(Status::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if informational { 0 } else { 1 });
        }
    };
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::HypothesesFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
