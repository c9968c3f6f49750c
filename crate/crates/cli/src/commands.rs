use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use nsp_core::bounds::{pi_bound, Params};
use nsp_core::montecarlo::{
    estimate_nsp_failure, estimate_psi_failure, estimate_supx_failure, McReport, Verdict,
};
use nsp_core::par::Exec;
use nsp_core::phase::{
    borne_r_curve, compare_curves, fit_lambert, lambert_curve, pi_curve, uniform_grid, CurveSource,
    LambertCurveParams, PhaseCurve,
};

use crate::csv::{emit, emit_curve, format_number, parse_curve, CsvError, RATIO_HEADER};
use crate::{
    svg, BoundArgs, CompareArgs, CurveArgs, CurveKind, FitArgs, McArgs, McKind, EXIT_IO, EXIT_OK,
    EXIT_USAGE, EXIT_VIOLATED,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(nsp_core::Error),
    Csv {
        path: PathBuf,
        source: CsvError,
    },
    Io {
        path: Option<PathBuf>,
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Csv { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Io {
                path: Some(p),
                source,
            } => write!(f, "{}: {source}", p.display()),
            CliError::Io { path: None, source } => write!(f, "output: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<nsp_core::Error> for CliError {
    fn from(e: nsp_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: None, source }
    }
}

type CmdResult = Result<i32, CliError>;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: Some(path.to_path_buf()),
        source,
    })
}

fn read_curve(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    parse_curve(&text).map_err(|source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn num(x: f64) -> String {
    format_number(x)
}

/// Prints ln Π, Π raw and clamped, the dominant term, and optionally every term.
pub fn cmd_bound(args: &BoundArgs, out: &mut dyn Write) -> CmdResult {
    let params = Params::new(args.c, args.s, args.n, args.p)?;
    let report = pi_bound(&params)?;
    writeln!(
        out,
        "s={} n={} p={} C={} m={}",
        params.s(),
        params.n(),
        params.p(),
        num(params.c()),
        params.m()
    )?;
    writeln!(out, "log_pi = {}", num(report.log_pi))?;
    writeln!(out, "pi_raw = {}", num(report.pi_raw()))?;
    writeln!(out, "pi = {}", num(report.pi_clamped()))?;
    writeln!(out, "dominant_k = {}", report.dominant_k)?;
    let d = &report.diagnostics;
    if d.h_assumption_violations > 0 {
        writeln!(
            out,
            "warning: {} terms use H_k <= m - k + 1 (first at k = {})",
            d.h_assumption_violations,
            d.first_h_violation.unwrap_or(0)
        )?;
    }
    if d.positive_log_q > 0 {
        writeln!(out, "warning: {} terms have ln Q > 0", d.positive_log_q)?;
    }
    if args.terms {
        for (k, t) in report.terms_indexed() {
            writeln!(out, "term k={k} log_term={}", num(t))?;
        }
    }
    Ok(EXIT_OK)
}

fn curve_title(curve: &PhaseCurve) -> String {
    match curve.source() {
        CurveSource::PiBound {
            n,
            c,
            log_threshold,
        } => {
            format!(
                "ln Pi <= {} at n = {n}, C = {}",
                num(*log_threshold),
                num(*c)
            )
        }
        CurveSource::BorneR { c } => format!("asymptotic region boundary, C = {}", num(*c)),
        CurveSource::LambertFamily { a, b } => {
            format!("exp(W-1(-{} delta)) / ({} delta)", num(*b), num(*a))
        }
        CurveSource::External { label } => label.clone(),
    }
}

/// Writes the curve as CSV (file or `out`) and optionally as SVG. Grid
/// points without a solution are reported on `err`.
pub fn cmd_curve(args: &CurveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let grid = uniform_grid(args.delta_min, args.delta_max, args.points)?;
    let exec = Exec::Parallel;
    let curve = match args.kind {
        CurveKind::Pi => pi_curve(args.c, args.n, args.log_threshold, &grid, exec)?,
        CurveKind::Borner => borne_r_curve(args.c, &grid, args.tol, exec)?,
        CurveKind::Lambert => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return Err(CliError::Usage("lambert curves need both -A and -B".into()));
            };
            lambert_curve(&LambertCurveParams::new(a, b)?, &grid)?
        }
    };
    for d in curve.diagnostics() {
        if !d.converged {
            writeln!(
                err,
                "delta={}: no point ({})",
                num(d.delta),
                d.note.as_deref().unwrap_or("unsolved")
            )?;
        } else if !d.all_terms_finite {
            writeln!(err, "delta={}: non-finite bound term", num(d.delta))?;
        }
    }
    let csv = emit_curve(curve.points());
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(path) = &args.svg {
        write_file(path, &svg::render(&curve_title(&curve), curve.points()))?;
    }
    Ok(EXIT_OK)
}

/// Ratio b/a on the δ grid of `a`; the largest ratio is reported on `out`
/// when the CSV goes to a file.
pub fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> CmdResult {
    let load = |path: &Path| -> Result<PhaseCurve, CliError> {
        let pts = read_curve(path)?;
        Ok(PhaseCurve::new(
            pts,
            CurveSource::External {
                label: path.display().to_string(),
            },
            Vec::new(),
        )?)
    };
    let a = load(&args.a)?;
    let b = load(&args.b)?;
    let ratios = compare_curves(&a, &b)?;
    let csv = emit(RATIO_HEADER, &ratios);
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            let (d, r) = ratios
                .iter()
                .copied()
                .fold(
                    (f64::NAN, f64::NEG_INFINITY),
                    |m, x| if x.1 > m.1 { x } else { m },
                );
            writeln!(out, "points = {}", ratios.len())?;
            writeln!(out, "max_ratio = {} at delta = {}", num(r), num(d))?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn require(v: Option<u64>, flag: &str, kind: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("mc {kind} needs {flag}")))
}

fn write_report(out: &mut dyn Write, kind: &str, r: &McReport) -> io::Result<()> {
    writeln!(
        out,
        "failures: {} / {} (discarded {})",
        r.failures, r.trials, r.discarded
    )?;
    writeln!(out, "p_hat: {}", num(r.p_hat))?;
    writeln!(
        out,
        "99% one-sided bounds: [{}, {}]",
        num(r.lower_conf),
        num(r.upper_conf)
    )?;
    writeln!(
        out,
        "theory bound: {} (raw {})",
        num(r.theory_bound.min(1.0)),
        num(r.theory_bound)
    )?;
    writeln!(out, "verdict: {}", r.verdict.as_str())?;
    writeln!(
        out,
        "kind={kind} trials={} failures={} discarded={} p_hat={} lower_conf={} upper_conf={} log_theory_bound={} theory_bound={} verdict={}",
        r.trials,
        r.failures,
        r.discarded,
        num(r.p_hat),
        num(r.lower_conf),
        num(r.upper_conf),
        num(r.log_theory_bound),
        num(r.theory_bound),
        r.verdict.as_str()
    )
}

/// Runs a Monte Carlo suite; exit code 3 when the bound is contradicted.
pub fn cmd_mc(args: &McArgs, out: &mut dyn Write) -> CmdResult {
    let exec = Exec::Parallel;
    let (header, kind, report) = match args.kind {
        McKind::Psi => {
            let l = require(args.l, "-l", "psi")?;
            let report = estimate_psi_failure(l, args.s, args.c, args.trials, args.seed, exec)?;
            (
                format!(
                    "l={l} s={} C={} trials={} seed={}",
                    args.s,
                    num(args.c),
                    args.trials,
                    args.seed
                ),
                "psi",
                report,
            )
        }
        McKind::Nsp | McKind::Supx => {
            let name = if args.kind == McKind::Nsp {
                "nsp"
            } else {
                "supx"
            };
            let n = require(args.n, "-n", name)?;
            let p = require(args.p, "-p", name)?;
            let params = Params::new(args.c, args.s, n, p)?;
            let mut header = format!(
                "s={} n={n} p={p} C={} trials={} seed={}",
                args.s,
                num(args.c),
                args.trials,
                args.seed
            );
            let report = if args.kind == McKind::Nsp {
                estimate_nsp_failure(&params, args.trials, args.seed, exec)?
            } else {
                header.push_str(&format!(" samples={}", args.samples));
                estimate_supx_failure(&params, args.samples, args.trials, args.seed, exec)?
            };
            (header, name, report)
        }
    };
    writeln!(out, "mc {kind}: {header}")?;
    write_report(out, kind, &report)?;
    Ok(if report.verdict == Verdict::Violated {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    })
}

/// Prints least-squares A and B for a curve file.
pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> CmdResult {
    let pts = read_curve(&args.input)?;
    let fit = fit_lambert(&pts)?;
    writeln!(out, "A = {:.6}", fit.params.a())?;
    writeln!(out, "B = {:.6}", fit.params.b())?;
    writeln!(out, "residual = {}", num(fit.sse))?;
    writeln!(out, "points = {}", pts.len())?;
    Ok(EXIT_OK)
}
