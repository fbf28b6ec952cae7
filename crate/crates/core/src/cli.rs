//! The `gfc` command-line front end.
//!
//! Results go to standard output as an aligned table, or to a CSV file with
//! `--out`. Exit status: 0 on success, 2 when `verify` finds a residual above
//! tolerance, 1 on any error.

use crate::convops::{gfd, gfi, ConvConfig, OperatorForm, OperatorRequest, OperatorVariant, SingularFunction};
use crate::error::{GfcError, Result};
use crate::grammar::{parse_function, parse_kernel, FunctionSpec};
use crate::kernels::{associated_kernel, resolve, sonine_check_with, KernelSpec, SoninePair};
use crate::series::{geometric_oracle, CoeffSource, ConvolutionSeries, ConvolutionSeriesSpec, RadiusWitness};
use crate::taylor::{caputo_taylor_series_with, extract_coefficients_with, TaylorExpansion, TaylorVariant};
use crate::theorems::{default_battery, linspace, run_battery, verify_with, TheoremId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::io::Write;
use std::path::PathBuf;

pub use crate::grammar::parse_kernel as parse_kernel_spec;

#[derive(Debug, Parser)]
#[command(name = "gfc", version, about = "General fractional calculus with Sonine kernels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Right end X of the working interval [0, X]
    #[arg(long, global = true, default_value_t = 2.0)]
    pub xmax: f64,
    /// Gauss-Jacobi order used in convolutions
    #[arg(long = "quad-order", global = true, default_value_t = 32)]
    pub quad_order: usize,
    /// Chebyshev degree of interpolated regular factors
    #[arg(long, global = true, default_value_t = 48)]
    pub degree: usize,
    /// Tolerance (verify: residual bound; series: tail bound)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write CSV here instead of printing a table
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for `verify --battery --sample`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel evaluation, associated pairs and the Sonine check
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// General fractional integrals and derivatives
    #[command(subcommand)]
    Op(OpCmd),
    /// Convolution series
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Generalized convolution Taylor formulas
    #[command(subcommand)]
    Taylor(TaylorCmd),
    /// Check a fundamental-theorem identity, or the whole default battery
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum KernelCmd {
    /// Evaluate a kernel on a grid
    Eval {
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
    },
    /// Print the associated Sonine kernel
    Pair {
        #[arg(long)]
        kernel: String,
    },
    /// Evaluate (κ * k)(x) - 1 on a geometric grid
    Check {
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Rl,
    Caputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Sequential,
    Nfold,
}

#[derive(Debug, Subcommand)]
pub enum OpCmd {
    /// n-fold general fractional integral κ^{<n>} * f
    Gfi {
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
    },
    /// General fractional derivative with kernel k
    Gfd {
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Rl)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = FormArg::Sequential)]
        form: FormArg,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeriesCmd {
    /// The geometric series Σ λ^j κ^{<j+1>}
    Geometric {
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        lambda: f64,
        /// Single evaluation point (overrides --grid)
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
        /// Compare against the closed form
        #[arg(long)]
        oracle: bool,
    },
    /// Σ a_j κ^{<j+1>} for explicit coefficients
    Eval {
        #[arg(long)]
        kernel: String,
        /// Comma-separated a_0, a_1, ..
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Radius witness z0 (with --m); defaults to z0 = 1, M = max |a_j|
        #[arg(long, requires = "m")]
        z0: Option<f64>,
        #[arg(long, requires = "z0")]
        m: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum TaylorCmd {
    /// Coefficients a_j = (I_k D^{<j>} f)(0)
    Coeffs {
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
    },
    /// Taylor polynomial, remainder and identity residual on a grid
    Approx {
        #[arg(long, value_enum, default_value_t = VariantArg::Rl)]
        variant: VariantArg,
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0.1:2:20")]
        grid: String,
    },
    /// Partial sums of the Caputo Taylor series
    Series {
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        x: f64,
        #[arg(long = "n-max", default_value_t = 25)]
        n_max: usize,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run the default battery instead of a single identity
    #[arg(long, conflicts_with_all = ["theorem", "kappa", "f"])]
    pub battery: bool,
    /// With --battery: run a random subset of this many cases (see --seed)
    #[arg(long, requires = "battery")]
    pub sample: Option<usize>,
    #[arg(long, required_unless_present = "battery")]
    pub theorem: Option<String>,
    #[arg(long, required_unless_present = "battery")]
    pub kappa: Option<String>,
    #[arg(long, required_unless_present = "battery")]
    pub f: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value = "0.05:2:40")]
    pub grid: String,
}

/// Column-oriented output, printed as a table or written as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    /// CSV form: 17 significant digits for reals.
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn pretty(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.10e}"),
            other => other.csv(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| GfcError::Io(e.to_string());
        out.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        out.flush().map_err(|e| GfcError::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| GfcError::Io(e.to_string()))
    }

    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::pretty).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| cells.iter().map(|r| r.get(i).map_or(0, |c| c.len())).chain([self.headers[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ");
        let mut s = line(self.headers.iter().map(String::as_str).collect());
        s.push('\n');
        for r in &cells {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
            s.push('\n');
        }
        s
    }
}

/// Parses `a:b:m` into m evenly spaced points.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(GfcError::Parse { pos: 0, msg: format!("grid must look like a:b:m, got `{text}`") });
    }
    let num = |i: usize| {
        parts[i].trim().parse::<f64>().map_err(|_| GfcError::Parse {
            pos: parts[..i].iter().map(|p| p.len() + 1).sum(),
            msg: format!("expected a number, found `{}`", parts[i]),
        })
    };
    let (a, b) = (num(0)?, num(1)?);
    let m: usize = parts[2].trim().parse().map_err(|_| GfcError::Parse {
        pos: parts[0].len() + parts[1].len() + 2,
        msg: format!("expected a point count, found `{}`", parts[2]),
    })?;
    if !(a > 0.0) || b < a || m == 0 {
        return Err(GfcError::Range { token: text.to_string(), msg: "grid needs 0 < a <= b and m >= 1".into() });
    }
    Ok(linspace(a, b, m))
}

/// What a command produced: a table and whether a tolerance check failed.
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub tolerance_failed: bool,
}

impl Outcome {
    fn table(table: Table) -> Self {
        Self { table, summary: Vec::new(), tolerance_failed: false }
    }
}

fn config(g: &GlobalOpts) -> Result<ConvConfig> {
    let cfg = ConvConfig::default().with_x_max(g.xmax).with_degree(g.degree).with_quad_order(g.quad_order);
    cfg.validate()?;
    if let Some(t) = g.tol {
        if !(t > 0.0) {
            return Err(GfcError::Range { token: t.to_string(), msg: "--tol must be positive".into() });
        }
    }
    Ok(cfg)
}

fn check_grid(grid: &[f64], cfg: &ConvConfig) -> Result<()> {
    match grid.iter().find(|&&x| x > cfg.x_max * (1.0 + 1e-12)) {
        Some(&x) => Err(GfcError::OutOfDomain { x, x_max: cfg.x_max }),
        None => Ok(()),
    }
}

fn function(text: &str, kernel: Option<&KernelSpec>, cfg: &ConvConfig) -> Result<(FunctionSpec, SingularFunction)> {
    let spec = parse_function(text)?;
    let f = spec.build(kernel, cfg)?;
    Ok((spec, f))
}

fn variant(v: VariantArg) -> TaylorVariant {
    match v {
        VariantArg::Rl => TaylorVariant::Rl,
        VariantArg::Caputo => TaylorVariant::Caputo,
    }
}

fn sample_table(name: &str, f: &SingularFunction, grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(&["x", name]);
    for &x in grid {
        t.push(vec![x.into(), f.eval(x)?.into()]);
    }
    Ok(t)
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = config(&cli.global)?;
    let tol = cli.global.tol;
    match &cli.command {
        Command::Kernel(KernelCmd::Eval { kernel, grid }) => {
            let grid = parse_grid(grid)?;
            check_grid(&grid, &cfg)?;
            let k = resolve(&parse_kernel(kernel)?, &cfg)?;
            Ok(Outcome::table(sample_table("value", &k, &grid)?))
        }
        Command::Kernel(KernelCmd::Pair { kernel }) => {
            let spec = parse_kernel(kernel)?;
            let mut t = Table::new(&["kappa", "k"]);
            t.push(vec![spec.to_string().into(), associated_kernel(&spec)?.to_string().into()]);
            Ok(Outcome::table(t))
        }
        Command::Kernel(KernelCmd::Check { kappa, k, points }) => {
            let mut pair = SoninePair::new(parse_kernel(kappa)?, parse_kernel(k)?);
            let report = sonine_check_with(&mut pair, *points, &cfg)?;
            let mut t = Table::new(&["x", "conv", "residual"]);
            for (x, l) in report.grid.iter().zip(&report.lhs) {
                t.push(vec![(*x).into(), (*l).into(), (l - 1.0).into()]);
            }
            Ok(Outcome {
                table: t,
                summary: vec![format!("sonine check {pair}: max residual {:.3e}", report.residual_max)],
                tolerance_failed: false,
            })
        }
        Command::Op(OpCmd::Gfi { kernel, f, n, grid }) => {
            let grid = parse_grid(grid)?;
            check_grid(&grid, &cfg)?;
            let kernel = parse_kernel(kernel)?;
            let (_, f) = function(f, Some(&kernel), &cfg)?;
            Ok(Outcome::table(sample_table("value", &gfi(&kernel, *n, &f, &cfg)?, &grid)?))
        }
        Command::Op(OpCmd::Gfd { kernel, f, n, variant, form, grid }) => {
            let grid = parse_grid(grid)?;
            check_grid(&grid, &cfg)?;
            let kernel = parse_kernel(kernel)?;
            let (_, fun) = function(f, Some(&kernel), &cfg)?;
            let v = match variant {
                VariantArg::Rl => OperatorVariant::GfdRl,
                VariantArg::Caputo => OperatorVariant::GfdCaputo,
            };
            let form = match form {
                FormArg::Sequential => OperatorForm::Sequential,
                FormArg::Nfold => OperatorForm::NfoldAlt,
            };
            let req = OperatorRequest::new(kernel, *n, v, form);
            Ok(Outcome::table(sample_table("value", &gfd(&req, &fun, &cfg)?, &grid)?))
        }
        Command::Series(SeriesCmd::Geometric { kernel, lambda, x, grid, oracle }) => {
            let grid = match x {
                Some(x) => vec![*x],
                None => parse_grid(grid)?,
            };
            check_grid(&grid, &cfg)?;
            let kernel = parse_kernel(kernel)?;
            let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(kernel.clone(), *lambda)?, &cfg)?;
            let tol = tol.unwrap_or(1e-14);
            let mut t = if *oracle { Table::new(&["x", "value", "oracle", "abs_err"]) } else { Table::new(&["x", "value"]) };
            for &x in &grid {
                let v = series.evaluate(x, tol)?.value;
                if *oracle {
                    let o = geometric_oracle(&kernel, *lambda, x)?;
                    t.push(vec![x.into(), v.into(), o.into(), (v - o).abs().into()]);
                } else {
                    t.push(vec![x.into(), v.into()]);
                }
            }
            Ok(Outcome::table(t))
        }
        Command::Series(SeriesCmd::Eval { kernel, coeffs, z0, m, x, grid }) => {
            let grid = match x {
                Some(x) => vec![*x],
                None => parse_grid(grid)?,
            };
            check_grid(&grid, &cfg)?;
            let coeffs = coeffs
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| GfcError::Range { token: c.to_string(), msg: "not a number".into() }))
                .collect::<Result<Vec<_>>>()?;
            let kernel = parse_kernel(kernel)?;
            let spec = match (z0, m) {
                (Some(z0), Some(m)) => ConvolutionSeriesSpec::new(kernel, CoeffSource::Explicit(coeffs), RadiusWitness { z0: *z0, m: *m })?,
                _ => ConvolutionSeriesSpec::explicit(kernel, coeffs)?,
            };
            let series = ConvolutionSeries::new(spec, &cfg)?;
            let tol = tol.unwrap_or(1e-14);
            let mut t = Table::new(&["x", "value", "terms", "tail_bound"]);
            for &x in &grid {
                let v = series.evaluate(x, tol)?;
                t.push(vec![x.into(), v.value.into(), v.terms.into(), v.tail_bound.into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::Taylor(TaylorCmd::Coeffs { kappa, f, n }) => {
            let pair = SoninePair::from_catalog(parse_kernel(kappa)?)?;
            let (_, fun) = function(f, Some(&pair.kappa), &cfg)?;
            let (coeffs, report) = extract_coefficients_with(&fun, &pair, *n, &cfg)?;
            let mut t = Table::new(&["j", "a_j", "richardson"]);
            for (j, (c, d)) in coeffs.iter().zip(&report.coefficients).enumerate() {
                t.push(vec![j.into(), (*c).into(), d.richardson.into()]);
            }
            let summary = match &report.stopped {
                Some(e) if coeffs.len() < *n => vec![format!("stopped after {} coefficients: {e}", coeffs.len())],
                _ => Vec::new(),
            };
            Ok(Outcome { table: t, summary, tolerance_failed: false })
        }
        Command::Taylor(TaylorCmd::Approx { variant: v, kappa, f, n, grid }) => {
            let grid = parse_grid(grid)?;
            check_grid(&grid, &cfg)?;
            let pair = SoninePair::from_catalog(parse_kernel(kappa)?)?;
            let (_, fun) = function(f, Some(&pair.kappa), &cfg)?;
            let expansion = TaylorExpansion::build(&fun, &pair, *n, variant(*v), &cfg)?;
            let mut t = Table::new(&["x", "f", "poly", "remainder", "identity_residual"]);
            for &x in &grid {
                let fx = fun.eval(x)?;
                let (p, r) = (expansion.poly(x)?, expansion.remainder(x)?);
                t.push(vec![x.into(), fx.into(), p.into(), r.into(), (fx - p - r).into()]);
            }
            Ok(Outcome::table(t))
        }
        Command::Taylor(TaylorCmd::Series { kappa, f, x, n_max }) => {
            let pair = SoninePair::from_catalog(parse_kernel(kappa)?)?;
            let (spec, fun) = function(f, Some(&pair.kappa), &cfg)?;
            let s = caputo_taylor_series_with(&fun, &pair, *x, *n_max, tol.unwrap_or(1e-12), &cfg)?;
            let mut t = Table::new(&["x", "value", "terms", "f"]);
            let exact = spec.exact(*x).map_or(f64::NAN, |v| v);
            t.push(vec![(*x).into(), s.value.into(), s.coeffs.len().into(), exact.into()]);
            let summary = if s.converged { Vec::new() } else { vec![format!("not converged within {n_max} terms")] };
            Ok(Outcome { table: t, summary, tolerance_failed: false })
        }
        Command::Verify(args) => verify_command(args, &cfg, tol.unwrap_or(1e-5), cli.global.seed),
    }
}

fn verify_command(args: &VerifyArgs, cfg: &ConvConfig, tol: f64, seed: u64) -> Result<Outcome> {
    if args.battery {
        let mut cases = default_battery();
        if let Some(k) = args.sample {
            cases.shuffle(&mut StdRng::seed_from_u64(seed));
            cases.truncate(k);
        }
        let results = run_battery(&cases, tol, cfg);
        let mut t = Table::new(&["theorem", "kappa", "f", "n", "residual_max", "status"]);
        let mut failed = 0;
        for r in &results {
            let (res, status) = match &r.report {
                Ok(rep) if rep.passes(tol) => (rep.residual_max, "pass".to_string()),
                Ok(rep) => (rep.residual_max, "FAIL".to_string()),
                Err(e) => (f64::NAN, format!("error: {}", e.code())),
            };
            if !r.passed(tol) {
                failed += 1;
            }
            t.push(vec![r.case.theorem.name().into(), r.case.kappa.into(), r.case.f.into(), r.case.n.into(), res.into(), status.into()]);
        }
        return Ok(Outcome {
            table: t,
            summary: vec![format!("{} of {} configurations within {tol:e}", results.len() - failed, results.len())],
            tolerance_failed: failed > 0,
        });
    }
    let theorem: TheoremId = args.theorem.as_deref().unwrap_or_default().parse()?;
    let pair = SoninePair::from_catalog(parse_kernel(args.kappa.as_deref().unwrap_or_default())?)?;
    let (_, f) = function(args.f.as_deref().unwrap_or_default(), Some(&pair.kappa), cfg)?;
    let grid = parse_grid(&args.grid)?;
    check_grid(&grid, cfg)?;
    let report = verify_with(theorem, &pair, &f, args.n, &grid, tol, cfg)?;
    let mut t = Table::new(&["x", "lhs", "rhs", "residual"]);
    for ((x, l), r) in report.grid.iter().zip(&report.lhs).zip(&report.rhs) {
        t.push(vec![(*x).into(), (*l).into(), (*r).into(), (l - r).into()]);
    }
    let passed = report.passes(tol);
    Ok(Outcome {
        table: t,
        summary: vec![format!(
            "{}: max residual {:.3e} ({} at tol {tol:e})",
            report.label,
            report.residual_max,
            if passed { "pass" } else { "FAIL" }
        )],
        tolerance_failed: !passed,
    })
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::File::create(path)
                    .map_err(|e| GfcError::Io(format!("{}: {e}", path.display())))
                    .and_then(|file| outcome.table.write_csv(file)),
                None => {
                    print!("{}", outcome.table.to_pretty());
                    Ok(())
                }
            };
            for line in &outcome.summary {
                println!("{line}");
            }
            match written {
                Err(e) => {
                    eprintln!("error [{}]: {e}", e.code());
                    1
                }
                Ok(()) if outcome.tolerance_failed => 2,
                Ok(()) => 0,
            }
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.5:1:3").unwrap(), vec![0.5, 0.75, 1.0]);
        assert!(matches!(parse_grid("0:1:3"), Err(GfcError::Range { .. })));
        assert!(matches!(parse_grid("0.1:x:3"), Err(GfcError::Parse { pos: 4, .. })));
        assert!(parse_grid("0.1:1").is_err());
    }

    #[test]
    fn csv_has_full_precision() {
        let mut t = Table::new(&["x", "value"]);
        t.push(vec![0.1.into(), (1.0 / 3.0).into()]);
        let s = t.to_csv_string().unwrap();
        assert_eq!(s, "x,value\n1.0000000000000001e-1,3.3333333333333331e-1\n");
        let back: f64 = s.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn text_with_commas_is_quoted() {
        let mut t = Table::new(&["kappa"]);
        t.push(vec!["mlk:0.25,0.625".into()]);
        assert_eq!(t.to_csv_string().unwrap(), "kappa\n\"mlk:0.25,0.625\"\n");
    }

    fn exec(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(args).expect("arguments parse");
        execute(&cli)
    }

    #[test]
    fn kernel_commands() {
        let out = exec(&["gfc", "kernel", "check", "--kappa", "h:0.5", "--k", "h:0.5"]).unwrap();
        assert!(out.summary[0].contains("max residual"));
        let out = exec(&["gfc", "kernel", "pair", "--kernel", "sum:1*h:0.625+1*h:0.375"]).unwrap();
        assert_eq!(out.table.rows[0][1], Cell::Text("mlk:0.25,0.625".into()));
        assert!(exec(&["gfc", "kernel", "pair", "--kernel", "mlk:0.7,0.5"]).is_err());
    }

    #[test]
    fn geometric_with_oracle() {
        let out = exec(&["gfc", "series", "geometric", "--kernel", "h:0.5", "--lambda", "1", "--x", "1", "--oracle"]).unwrap();
        match (&out.table.rows[0][1], &out.table.rows[0][3]) {
            (Cell::Num(v), Cell::Num(err)) => {
                assert!((v - 5.573_169_664_310_04).abs() < 1e-10);
                assert!(*err <= 1e-8);
            }
            other => panic!("unexpected cells {other:?}"),
        }
    }

    #[test]
    fn verify_exit_codes() {
        let ok = ["gfc", "verify", "--theorem", "FT2_RL", "--kappa", "h:0.5", "--f", "lin:1*h:0.5+2*h:1", "--grid", "0.1:2:10"];
        assert_eq!(run(ok), 0);
        let strict =
            ["gfc", "--tol", "1e-300", "verify", "--theorem", "FT1_RL", "--kappa", "mlk:0.25,0.625", "--f", "exp:1", "--grid", "0.1:2:5"];
        assert_eq!(run(strict), 2);
        assert_eq!(run(["gfc", "verify", "--theorem", "FT9", "--kappa", "h:0.5", "--f", "one"]), 1);
        assert_eq!(run(["gfc", "op", "gfi", "--kernel", "h:0.5", "--f", "one", "--grid", "0.1:3:4"]), 1);
    }

    #[test]
    fn help_lists_global_flags() {
        use clap::CommandFactory;
        let help = Cli::command().render_long_help().to_string();
        for flag in ["--xmax", "--quad-order", "--degree", "--tol", "--out", "--seed"] {
            assert!(help.contains(flag), "{flag}");
        }
    }
}
