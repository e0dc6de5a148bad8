//! Batch front-end: read a potential file, run one analysis, write a report.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::halfline::{halfline_report, HalflineError};
use crate::jost::{Jost, JostConfig, JostError, JostEvaluation};
use crate::locator::{existence_criterion, locate_eigenvalues, EigenvalueSet, Existence, LocatorConfig, LocatorError};
use crate::potential::{Norms, PotentialError, PotentialSpec};
use crate::report::{to_csv, to_json};
use crate::traces::{count_bound_certificate, trace_report, TraceConfig, TraceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Norms, moments and the Rouché existence criterion.
    Norms,
    /// Jost data w, ψ, Ψ over a grid of momenta.
    Jost,
    /// Eigenvalue momenta in the upper half-plane.
    Eigs,
    /// Trace integrals and inferred singular moments.
    Trace,
    /// Zero-count certificate for a disk of radius --rho.
    Certify,
    /// Dirichlet and Neumann half-line analysis.
    Halfline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "spectra-trace",
    version,
    about = "Spectral analysis of 1D Schrodinger operators with complex potentials"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Potential description (JSON)
    #[arg(long, global = true)]
    pub potential: Option<PathBuf>,
    /// Tolerance on w, absolute plus relative [1e-10]
    #[arg(long = "tol-w", global = true)]
    pub tol_w: Option<f64>,
    /// Tolerance of the trace integrals [1e-8]
    #[arg(long = "tol-quad", global = true)]
    pub tol_quad: Option<f64>,
    /// Bound on |w| at a polished eigenvalue [1e-8]
    #[arg(long = "tol-polish", global = true)]
    pub tol_polish: Option<f64>,
    /// Half-width of the eigenvalue search box [max(1.5 r_c, r_c + 1)]
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Floor above the real axis [1e-6 (1 + r_c)]
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Momentum grid for jost: re_min,re_max,im_min,im_max,nx,ny
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Disk radius for certify, at least sqrt(2)·‖q‖
    #[arg(long, global = true)]
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub wronskian_tol: f64,
    pub quadrature_tol: f64,
    pub polish_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            wronskian_tol: JostConfig::default().tol,
            quadrature_tol: TraceConfig::default().tol,
            polish_tol: LocatorConfig::default().polish_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGrid {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl KGrid {
    pub fn parse(s: &str) -> Result<KGrid, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(format!("--grid needs 6 comma-separated values, got {}", parts.len()));
        }
        let f = |i: usize| {
            parts[i]
                .parse::<f64>()
                .map_err(|e| format!("--grid field {}: {e}", i + 1))
        };
        let n = |i: usize| {
            parts[i]
                .parse::<usize>()
                .map_err(|e| format!("--grid field {}: {e}", i + 1))
        };
        let g = KGrid {
            re: [f(0)?, f(1)?],
            im: [f(2)?, f(3)?],
            nx: n(4)?,
            ny: n(5)?,
        };
        if g.nx < 1 || g.ny < 1 {
            return Err("--grid sample counts must be at least 1".into());
        }
        if !(g.re[0] <= g.re[1] && g.im[0] <= g.im[1]) || g.re.iter().chain(&g.im).any(|v| !v.is_finite()) {
            return Err("--grid bounds must be finite with min <= max".into());
        }
        if g.im[0] < 0.0 {
            return Err("--grid must lie in the closed upper half-plane".into());
        }
        Ok(g)
    }

    pub fn points(&self) -> Vec<C64> {
        let at = |r: [f64; 2], n: usize, i: usize| {
            if n == 1 {
                0.5 * (r[0] + r[1])
            } else {
                r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(C64::new(at(self.re, self.nx, i), at(self.im, self.ny, j)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub potential_path: PathBuf,
    pub tolerances: Tolerances,
    pub radius: Option<f64>,
    pub delta: Option<f64>,
    pub k_grid: Option<KGrid>,
    pub rho: Option<f64>,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &Args) -> Result<RunConfig, String> {
        let potential_path = a.potential.clone().ok_or("--potential is required")?;
        let d = Tolerances::default();
        let tolerances = Tolerances {
            wronskian_tol: a.tol_w.unwrap_or(d.wronskian_tol),
            quadrature_tol: a.tol_quad.unwrap_or(d.quadrature_tol),
            polish_tol: a.tol_polish.unwrap_or(d.polish_tol),
        };
        for (name, v) in [
            ("--tol-w", tolerances.wronskian_tol),
            ("--tol-quad", tolerances.quadrature_tol),
            ("--tol-polish", tolerances.polish_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be a positive number"));
            }
        }
        for (name, v) in [("--radius", a.radius), ("--delta", a.delta), ("--rho", a.rho)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(format!("{name} must be a positive number"));
                }
            }
        }
        if a.grid.is_some() && a.command != Command::Jost {
            return Err("--grid applies to the jost command only".into());
        }
        if a.rho.is_some() && a.command != Command::Certify {
            return Err("--rho applies to the certify command only".into());
        }
        let k_grid = a.grid.as_deref().map(KGrid::parse).transpose()?;
        Ok(RunConfig {
            command: a.command,
            potential_path,
            tolerances,
            radius: a.radius,
            delta: a.delta,
            k_grid,
            rho: a.rho,
            output_format: a.format,
            output_path: a.out.clone(),
        })
    }

    pub fn trace_config(&self) -> TraceConfig {
        let mut locator = LocatorConfig {
            polish_tol: self.tolerances.polish_tol,
            radius: self.radius,
            delta: self.delta,
            ..LocatorConfig::default()
        };
        locator.jost.tol = self.tolerances.wronskian_tol;
        TraceConfig {
            tol: self.tolerances.quadrature_tol,
            locator,
            ..TraceConfig::default()
        }
    }
}

/// Result of a run: exit status, the rendered report (if any) and
/// diagnostics for the error stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub report: Option<String>,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn fail(status: i32, msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            status,
            report: None,
            diagnostics: vec![format!("ERROR: {msg}")],
        }
    }
}

fn potential_status(e: &PotentialError) -> i32 {
    match e {
        PotentialError::Divergent(_) => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

fn locator_status(e: &LocatorError) -> i32 {
    match e {
        LocatorError::Jost(JostError::InvalidMomentum { .. }) => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

fn trace_status(e: &TraceError) -> i32 {
    match e {
        TraceError::Potential(p) => potential_status(p),
        TraceError::InvalidRadius { .. } => EXIT_VALIDATION,
        TraceError::Locator(l) => locator_status(l),
        _ => EXIT_NUMERICAL,
    }
}

fn halfline_status(e: &HalflineError) -> i32 {
    match e {
        HalflineError::Potential(p) => potential_status(p),
        HalflineError::Locator(l) => locator_status(l),
        _ => EXIT_NUMERICAL,
    }
}

#[derive(Serialize)]
struct NormsReport {
    norms: Norms,
    support: [f64; 2],
    support_length: f64,
    existence: Existence,
}

#[derive(Serialize)]
struct JostReport {
    points: Vec<JostEvaluation>,
}

#[derive(Serialize)]
struct EigsReport {
    eigenvalues: EigenvalueSet,
    existence: Existence,
}

fn render<T: Serialize>(r: &T, f: Format) -> String {
    match f {
        Format::Json => to_json(r),
        Format::Csv => to_csv(r),
    }
}

fn default_grid(r_c: f64) -> KGrid {
    let r = r_c + 1.0;
    KGrid {
        re: [-r, r],
        im: [0.0, r],
        nx: 9,
        ny: 5,
    }
}

/// Runs one command. Never panics on bad input; the status follows the
/// exit-code table (0 ok, 2 validation, 3 numerical, 4 invariant).
pub fn run(cfg: &RunConfig) -> Outcome {
    let text = match fs::read_to_string(&cfg.potential_path) {
        Ok(t) => t,
        Err(e) => {
            return Outcome::fail(
                EXIT_VALIDATION,
                format!("cannot read {}: {e}", cfg.potential_path.display()),
            )
        }
    };
    let q = match PotentialSpec::from_json(&text).and_then(|q| q.validate().map(|_| q)) {
        Ok(q) => q,
        Err(e) => return Outcome::fail(potential_status(&e), e),
    };
    let tc = cfg.trace_config();
    let mut diagnostics = Vec::new();
    let mut status = EXIT_OK;
    let report = match cfg.command {
        Command::Norms => {
            let n = q.norms();
            let (a, b) = q.support();
            let existence = existence_criterion(&n);
            render(
                &NormsReport {
                    norms: n,
                    support: [a, b],
                    support_length: q.support_length(),
                    existence,
                },
                cfg.output_format,
            )
        }
        Command::Jost => {
            let grid = cfg.k_grid.unwrap_or_else(|| default_grid(q.norms().r_c));
            let j = Jost::new(&q, tc.locator.jost);
            let mut points = Vec::new();
            for k in grid.points() {
                match j.wronskian(k) {
                    Ok(e) => points.push(e),
                    Err(e @ JostError::InvalidMomentum { .. }) => return Outcome::fail(EXIT_VALIDATION, e),
                    Err(e) => return Outcome::fail(EXIT_NUMERICAL, e),
                }
            }
            render(&JostReport { points }, cfg.output_format)
        }
        Command::Eigs => match locate_eigenvalues(&q, &tc.locator) {
            Ok(s) => {
                let existence = existence_criterion(&q.norms());
                let contradicts = match existence {
                    Existence::NoEigenvalues => s.total_count != 0,
                    Existence::ExactlyOneSimple => s.total_count != 1,
                    Existence::Inconclusive => false,
                };
                if contradicts {
                    status = EXIT_INVARIANT;
                    diagnostics.push(format!(
                        "ERROR: existence criterion {existence:?} contradicts {} located eigenvalue(s)",
                        s.total_count
                    ));
                }
                render(
                    &EigsReport {
                        eigenvalues: s,
                        existence,
                    },
                    cfg.output_format,
                )
            }
            Err(e) => return Outcome::fail(locator_status(&e), e),
        },
        Command::Trace => match trace_report(&q, &tc) {
            Ok(r) => {
                diagnostics.extend(r.warnings.iter().map(|w| format!("WARN: {w}")));
                if !r.checks.all_hold() {
                    status = EXIT_INVARIANT;
                    diagnostics.push(format!("ERROR: trace invariant violated: {:?}", r.checks));
                }
                render(&r, cfg.output_format)
            }
            Err(e) => return Outcome::fail(trace_status(&e), e),
        },
        Command::Certify => {
            let rho = cfg.rho.unwrap_or_else(|| {
                diagnostics.push("WARN: --rho not given, using the smallest admissible radius".into());
                2f64.sqrt() * q.norms().l1_norm
            });
            match count_bound_certificate(&q, rho, &tc) {
                Ok(z) => {
                    if !z.holds {
                        status = EXIT_INVARIANT;
                        diagnostics.push(format!(
                            "ERROR: counting bound violated: observed {} > {:.6} or total {} > {:.6}",
                            z.observed_count, z.bound, z.total_count, z.total_bound
                        ));
                    }
                    render(&z, cfg.output_format)
                }
                Err(e) => return Outcome::fail(trace_status(&e), e),
            }
        }
        Command::Halfline => match halfline_report(&q, &tc) {
            Ok(r) => {
                diagnostics.extend(r.warnings.iter().map(|w| format!("WARN: {w}")));
                let mut broken = Vec::new();
                if r.factorization_residual > 1e-10 {
                    broken.push(format!("factorization residual {:.3e}", r.factorization_residual));
                }
                if !r.disjoint {
                    broken.push("Dirichlet and Neumann eigenvalues coincide".into());
                }
                if !r.count_splitting_holds {
                    broken.push("counts of the even extension do not split".into());
                }
                if !r.combined_disk.holds || !r.combined_total.holds {
                    broken.push("combined counting bound".into());
                }
                if !broken.is_empty() {
                    status = EXIT_INVARIANT;
                    diagnostics.push(format!("ERROR: half-line invariant violated: {}", broken.join("; ")));
                }
                render(&r, cfg.output_format)
            }
            Err(e) => return Outcome::fail(halfline_status(&e), e),
        },
    };
    Outcome {
        status,
        report: Some(report),
        diagnostics,
    }
}

/// Caps rayon's pool at SPECTRA_TRACE_THREADS when set.
pub fn configure_threads() -> Result<(), String> {
    match std::env::var("SPECTRA_TRACE_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("SPECTRA_TRACE_THREADS must be a positive integer, got {v:?}"))?;
            if n == 0 {
                return Err("SPECTRA_TRACE_THREADS must be at least 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}

/// Parses `argv`, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("ERROR: {e}");
        return EXIT_VALIDATION;
    }
    let cfg = match RunConfig::from_args(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ERROR: {e}");
            return EXIT_VALIDATION;
        }
    };
    let out = run(&cfg);
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    if let Some(r) = &out.report {
        match &cfg.output_path {
            Some(p) => {
                if let Err(e) = fs::write(p, r) {
                    eprintln!("ERROR: cannot write {}: {e}", p.display());
                    return EXIT_VALIDATION;
                }
            }
            None => print!("{r}"),
        }
    }
    out.status
}
