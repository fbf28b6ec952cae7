//! Verification harness for the fundamental theorems.
//!
//! Each identity is evaluated pointwise on a grid, both sides separately.
//! The preconditions of the theorems (membership of f in the right function
//! space) cannot be decided for an arbitrary f; when an operator on the way
//! fails because f is outside that space, [`verify`] returns
//! [`GfcError::AdmissibilityWarning`].

use crate::convops::{gfd, gfi, ConvConfig, OperatorRequest, SingularFunction};
use crate::error::{GfcError, Result};
use crate::grammar::{parse_function, parse_kernel};
use crate::kernels::SoninePair;
use crate::taylor::{TaylorExpansion, TaylorVariant};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// D_k I_κ f = f.
    Ft1Rl,
    /// *D_k I_κ f = f.
    Ft1C,
    /// D_k^{<n>} I_κ^{<n>} f = f.
    Ft1RlN,
    /// *D_k^{<n>} I_κ^{<n>} f = f.
    Ft1CN,
    /// I_κ D_k f = f - (I_k f)(0) κ.
    Ft2Rl,
    /// I_κ^{<n>} D_k^{<n>} f = f - Σ_{j<n} (I_k D_k^{<j>} f)(0) κ^{<j+1>}.
    Ft2RlN,
    /// I_κ *D_k f = f - f(0).
    Ft2C,
    /// I_κ^{<n>} *D_k^{<n>} f = f - f(0) - Σ_{1<=j<n} (*D_k^{<j>} f)(0) ({1} * κ^{<j>}).
    Ft2CN,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::Ft1Rl,
        TheoremId::Ft1C,
        TheoremId::Ft1RlN,
        TheoremId::Ft1CN,
        TheoremId::Ft2Rl,
        TheoremId::Ft2RlN,
        TheoremId::Ft2C,
        TheoremId::Ft2CN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Ft1Rl => "FT1_RL",
            TheoremId::Ft1C => "FT1_C",
            TheoremId::Ft1RlN => "FT1_RL_N",
            TheoremId::Ft1CN => "FT1_C_N",
            TheoremId::Ft2Rl => "FT2_RL",
            TheoremId::Ft2RlN => "FT2_RL_N",
            TheoremId::Ft2C => "FT2_C",
            TheoremId::Ft2CN => "FT2_C_N",
        }
    }

    /// Whether the fold count n is a free parameter.
    pub fn is_nfold(self) -> bool {
        matches!(self, TheoremId::Ft1RlN | TheoremId::Ft1CN | TheoremId::Ft2RlN | TheoremId::Ft2CN)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = GfcError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s.trim())).ok_or_else(|| GfcError::Range {
            token: s.to_string(),
            msg: "unknown theorem; expected one of FT1_RL, FT1_C, FT1_RL_N, FT1_C_N, FT2_RL, FT2_RL_N, FT2_C, FT2_C_N".into(),
        })
    }
}

/// Pointwise comparison of the two sides of an identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub theorem: Option<TheoremId>,
    pub label: String,
    pub grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual_max: f64,
    /// Kernel, function and fold metadata as key/value pairs.
    pub config: Vec<(String, String)>,
}

impl ResidualReport {
    pub fn new(label: impl Into<String>, theorem: Option<TheoremId>, grid: Vec<f64>, lhs: Vec<f64>, rhs: Vec<f64>) -> Self {
        let residual_max = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Self { theorem, label: label.into(), grid, lhs, rhs, residual_max, config: Vec::new() }
    }

    pub fn with_config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.lhs.iter().zip(&self.rhs).map(|(a, b)| a - b).collect()
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual_max <= tol
    }
}

/// `m` evenly spaced points on [a, b].
pub fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect(),
    }
}

/// The default grid: 40 points on [0.05, X].
pub fn default_grid(x_max: f64) -> Vec<f64> {
    linspace(0.05, x_max, 40)
}

fn admissibility(e: GfcError) -> GfcError {
    match e {
        GfcError::CaputoRequiresContinuity
        | GfcError::NonIntegrable { .. }
        | GfcError::ExtrapolationUnstable { .. }
        | GfcError::DistributionalKernel(_) => GfcError::AdmissibilityWarning(e.to_string()),
        other => other,
    }
}

fn sample(f: &SingularFunction, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter().map(|&x| f.eval(x)).collect()
}

/// Evaluates both sides of `theorem` for f on `grid`. `tol` is recorded in
/// the report; failing it is not an error.
pub fn verify(theorem: TheoremId, pair: &SoninePair, f: &SingularFunction, n: usize, grid: &[f64], tol: f64) -> Result<ResidualReport> {
    verify_with(theorem, pair, f, n, grid, tol, &ConvConfig::default().with_x_max(f.x_max()))
}

pub fn verify_with(
    theorem: TheoremId,
    pair: &SoninePair,
    f: &SingularFunction,
    n: usize,
    grid: &[f64],
    tol: f64,
    cfg: &ConvConfig,
) -> Result<ResidualReport> {
    let n = if theorem.is_nfold() { n } else { 1 };
    if n == 0 {
        return Err(GfcError::InvalidParameter("n must be >= 1".into()));
    }
    let (lhs, rhs) = match theorem {
        TheoremId::Ft1Rl | TheoremId::Ft1RlN | TheoremId::Ft1C | TheoremId::Ft1CN => {
            let integral = gfi(&pair.kappa, n, f, cfg).map_err(admissibility)?;
            let req = match theorem {
                TheoremId::Ft1Rl | TheoremId::Ft1RlN => OperatorRequest::rl(pair.k.clone(), n),
                _ => OperatorRequest::caputo(pair.k.clone(), n),
            };
            let back = gfd(&req, &integral, cfg).map_err(admissibility)?;
            (sample(&back, grid)?, sample(f, grid)?)
        }
        TheoremId::Ft2Rl | TheoremId::Ft2RlN | TheoremId::Ft2C | TheoremId::Ft2CN => {
            let variant = match theorem {
                TheoremId::Ft2Rl | TheoremId::Ft2RlN => TaylorVariant::Rl,
                _ => TaylorVariant::Caputo,
            };
            let t = TaylorExpansion::build(f, pair, n, variant, cfg).map_err(admissibility)?;
            let lhs = grid.iter().map(|&x| t.remainder(x)).collect::<Result<Vec<_>>>()?;
            let rhs = grid.iter().map(|&x| Ok(f.eval(x)? - t.poly(x)?)).collect::<Result<Vec<_>>>()?;
            (lhs, rhs)
        }
    };
    Ok(ResidualReport::new(format!("{theorem} {pair} n={n}"), Some(theorem), grid.to_vec(), lhs, rhs)
        .with_config("theorem", theorem)
        .with_config("kappa", &pair.kappa)
        .with_config("k", &pair.k)
        .with_config("n", n)
        .with_config("tol", tol))
}

/// One entry of the default battery: theorem, κ, f, n in text form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryCase {
    pub theorem: TheoremId,
    pub kappa: &'static str,
    pub f: &'static str,
    pub n: usize,
}

const HALF: &str = "h:0.5";
const QUARTER: &str = "h:0.25";
const ML_SUM: &str = "sum:1*h:0.625+1*h:0.375";
const CLASSICAL: &str = "h1";

/// The default acceptance battery. Every function listed is admissible for
/// its theorem and pair.
pub fn default_battery() -> Vec<BatteryCase> {
    use TheoremId::*;
    let mut cases = Vec::new();
    let mut add = |theorem, kappa, fs: &[&'static str], ns: &[usize]| {
        for &f in fs {
            for &n in ns {
                cases.push(BatteryCase { theorem, kappa, f, n });
            }
        }
    };
    let first = ["one", "h:2", "h:0.7"];
    for theorem in [Ft1Rl, Ft1C] {
        add(theorem, HALF, &first, &[1]);
        add(theorem, ML_SUM, &first, &[1]);
        add(theorem, CLASSICAL, &["exp:1", "h:2"], &[1]);
    }
    add(Ft1Rl, QUARTER, &first, &[1]);
    // I_κ h_{0.7} = h_{0.95} is unbounded at 0, outside the Caputo class
    add(Ft1C, QUARTER, &["one", "h:2", "h:0.8"], &[1]);
    for theorem in [Ft1RlN, Ft1CN] {
        add(theorem, HALF, &["one", "h:0.7", "exp:1"], &[2, 3]);
        add(theorem, ML_SUM, &["one", "h:0.7"], &[2, 3]);
        add(theorem, CLASSICAL, &["exp:1"], &[2, 3]);
    }
    add(Ft2Rl, HALF, &["lin:1*h:0.5+2*h:1", "h:0.7", "exp:1", "one"], &[1]);
    add(Ft2Rl, QUARTER, &["exp:1", "h:0.7"], &[1]);
    add(Ft2Rl, ML_SUM, &["one", "geom:0.5", "h:0.7", "exp:1"], &[1]);
    add(Ft2Rl, CLASSICAL, &["exp:1"], &[1]);
    add(Ft2RlN, HALF, &["exp:1", "geom:0.8", "lin:1*h:0.5+2*h:1", "mlfun:0.5,0.5"], &[2, 3]);
    add(Ft2RlN, ML_SUM, &["geom:0.5", "lin:3*h:0.625+3*h:0.375+1*h:2"], &[2, 3]);
    add(Ft2RlN, CLASSICAL, &["exp:1"], &[2, 3]);
    add(Ft2C, HALF, &["lin:5*h:1", "exp:1", "h:1.7"], &[1]);
    add(Ft2C, QUARTER, &["exp:1", "h:2"], &[1]);
    add(Ft2C, ML_SUM, &["exp:1", "h:2"], &[1]);
    add(Ft2C, CLASSICAL, &["exp:1"], &[1]);
    add(Ft2CN, HALF, &["exp:1", "h:2.5"], &[2, 3]);
    add(Ft2CN, ML_SUM, &["exp:1", "h:2"], &[2, 3]);
    add(Ft2CN, CLASSICAL, &["exp:1"], &[2, 3]);
    cases
}

#[derive(Debug, Clone)]
pub struct BatteryResult {
    pub case: BatteryCase,
    pub report: Result<ResidualReport>,
}

impl BatteryResult {
    pub fn passed(&self, tol: f64) -> bool {
        matches!(&self.report, Ok(r) if r.passes(tol))
    }
}

/// Builds the pair and function of a battery case.
pub fn materialize(case: &BatteryCase, cfg: &ConvConfig) -> Result<(SoninePair, SingularFunction)> {
    let pair = SoninePair::from_catalog(parse_kernel(case.kappa)?)?;
    let f = parse_function(case.f)?.build(Some(&pair.kappa), cfg)?;
    Ok((pair, f))
}

/// Runs every case concurrently on the default grid.
pub fn run_battery(cases: &[BatteryCase], tol: f64, cfg: &ConvConfig) -> Vec<BatteryResult> {
    let grid = default_grid(cfg.x_max);
    cases
        .par_iter()
        .map(|case| {
            let report = materialize(case, cfg)
                .and_then(|(pair, f)| verify_with(case.theorem, &pair, &f, case.n, &grid, tol, cfg).map(|r| r.with_config("f", case.f)));
            BatteryResult { case: *case, report }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;

    fn cfg() -> ConvConfig {
        ConvConfig::default()
    }

    #[test]
    fn names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert!("FT3".parse::<TheoremId>().is_err());
    }

    #[test]
    fn second_theorem_rl_with_correction() {
        let pair = SoninePair::power(0.5).unwrap();
        let f = SingularFunction::from_power_terms(&[(1.0, 0.5), (2.0, 1.0)], &cfg()).unwrap();
        let grid = linspace(0.1, 2.0, 20);
        let r = verify(TheoremId::Ft2Rl, &pair, &f, 1, &grid, 1e-5).unwrap();
        assert!(r.residual_max <= 1e-5, "{}", r.residual_max);
        // the correction constant (I_k f)(0) = 1
        let t = TaylorExpansion::build(&f, &pair, 1, TaylorVariant::Rl, &cfg()).unwrap();
        assert!((t.coeffs[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn caputo_of_constant() {
        let pair = SoninePair::power(0.5).unwrap();
        let f = SingularFunction::constant(5.0, 2.0);
        let r = verify(TheoremId::Ft2C, &pair, &f, 1, &linspace(0.1, 2.0, 10), 1e-5).unwrap();
        assert!(r.lhs.iter().all(|v| v.abs() < 1e-14));
        assert!(r.rhs.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn classical_rl_reduction() {
        // (I_k f)(0) = h_{1.2}(0) = 0, so I D f = f
        let pair = SoninePair::power(0.5).unwrap();
        let f = SingularFunction::power(0.7, &cfg()).unwrap();
        let grid = linspace(0.1, 2.0, 20);
        let r = verify(TheoremId::Ft2Rl, &pair, &f, 1, &grid, 1e-5).unwrap();
        for (l, x) in r.lhs.iter().zip(&grid) {
            assert!((l - f.eval(*x).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn kernel_of_the_derivative() {
        let pair = SoninePair::power(0.5).unwrap();
        for c in [1.0, -3.0] {
            let f = SingularFunction::power(0.5, &cfg()).unwrap().scale_by(c);
            let d = gfd(&OperatorRequest::rl(pair.k.clone(), 1), &f, &cfg()).unwrap();
            for x in linspace(0.1, 2.0, 20) {
                assert!(d.eval(x).unwrap().abs() < 1e-6);
            }
        }
    }

    #[test]
    fn inadmissible_function_is_flagged() {
        let pair = SoninePair::power(0.5).unwrap();
        let f = SingularFunction::power(0.7, &cfg()).unwrap();
        let r = verify(TheoremId::Ft2C, &pair, &f, 1, &linspace(0.1, 2.0, 5), 1e-5);
        assert!(matches!(r, Err(GfcError::AdmissibilityWarning(_))));
    }

    #[test]
    fn extended_caputo_reduction() {
        let pair = SoninePair::extended();
        let f = SingularFunction::exp(1.0, &cfg()).unwrap();
        let r = verify(TheoremId::Ft2C, &pair, &f, 1, &linspace(0.05, 2.0, 40), 1e-8).unwrap();
        assert!(r.residual_max <= 1e-8, "{}", r.residual_max);
        assert_eq!(pair.kappa, KernelSpec::ExtendedH1);
    }
}
