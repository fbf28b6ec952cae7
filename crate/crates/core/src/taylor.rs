//! Generalized convolution Taylor formulas and series.
//!
//! RL form: f = Σ_{j<n} a_j κ^{<j+1>} + r_n with a_j = (I_k D_k^{<j>} f)(0)
//! and r_n = I_κ^{<n>} D_k^{<n>} f.
//!
//! Caputo form: f = f(0) + Σ_{1<=j<n} (*D_k^{<j>} f)(0) ({1} * κ^{<j>}) + R_n
//! with R_n = I_κ^{<n>} *D_k^{<n>} f.

use crate::convops::{conv_power, convolve, derivative_chain, fold_config, gfi, ConvConfig, OperatorVariant, SingularFunction};
use crate::error::{GfcError, Result};
use crate::kernels::{resolve, KernelSpec, SoninePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaylorVariant {
    Rl,
    Caputo,
}

impl TaylorVariant {
    fn operator(self) -> OperatorVariant {
        match self {
            TaylorVariant::Rl => OperatorVariant::GfdRl,
            TaylorVariant::Caputo => OperatorVariant::GfdCaputo,
        }
    }
}

/// How one coefficient was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientDiagnostic {
    pub index: usize,
    /// Limit read off the representation of the function at the origin.
    pub value: f64,
    /// Richardson estimate from samples at x0 2^{-i}, i = 0..=8.
    pub richardson: f64,
    /// Tolerance carried by the operators that produced the function.
    pub achieved_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtractionReport {
    pub coefficients: Vec<CoefficientDiagnostic>,
    /// Why extraction stopped before the requested n, if it did.
    pub stopped: Option<GfcError>,
}

/// Richardson extrapolation of g(x) -> g(0) assuming g(x) = g(0) + c x^p + ..,
/// from samples at x0 2^{-i}. Returns the estimate and the change in the last
/// step.
pub fn richardson_limit(g: impl Fn(f64) -> f64, x0: f64, p: f64, levels: usize) -> (f64, f64) {
    let samples: Vec<f64> = (0..=levels).map(|i| g(x0 / 2f64.powi(i as i32))).collect();
    let factor = 2f64.powf(p);
    let next: Vec<f64> = samples.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
    match next.as_slice() {
        [] => (samples[0], f64::INFINITY),
        [only] => (*only, (only - samples[1]).abs()),
        [.., a, b] => (*b, (b - a).abs()),
    }
}

fn limit_of(g: &SingularFunction, index: usize, p: f64, cfg: &ConvConfig) -> Result<CoefficientDiagnostic> {
    let value = g.limit_at_zero(cfg.zero_tol).ok_or_else(|| {
        let singular = g.terms().iter().filter(|t| t.p < 1.0).map(|t| t.regular.eval(0.0).abs()).fold(0.0, f64::max);
        GfcError::ExtrapolationUnstable { index, residual: singular }
    })?;
    let (richardson, _) = richardson_limit(|x| g.eval_unchecked(x), 0.5_f64.min(g.x_max()), p, 8);
    Ok(CoefficientDiagnostic { index, value, richardson, achieved_tol: g.achieved_tol() })
}

/// I_k g, with I_{h_0} the identity.
fn integrate_with_k(k: &KernelSpec, g: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    gfi(k, 1, g, cfg)
}

/// {1} * κ^{<j>} for j >= 1, and the constant 1 for j = 0.
pub fn unit_conv_power(kappa: &KernelSpec, j: usize, cfg: &ConvConfig) -> Result<SingularFunction> {
    match (kappa, j) {
        (_, 0) => Ok(SingularFunction::constant(1.0, cfg.x_max)),
        (KernelSpec::PowerLaw(a), _) => SingularFunction::power(1.0 + j as f64 * a, cfg),
        (KernelSpec::ExtendedH1, _) => SingularFunction::power(1.0 + j as f64, cfg),
        _ => convolve(&SingularFunction::constant(1.0, cfg.x_max), &conv_power(kappa, j, cfg)?, cfg),
    }
}

/// A Taylor expansion of f of order n together with everything needed to
/// evaluate its polynomial part and remainder.
#[derive(Debug, Clone)]
pub struct TaylorExpansion {
    pub variant: TaylorVariant,
    pub n: usize,
    /// RL: a_0..a_{n-1}. Caputo: f(0) followed by (*D^{<j>} f)(0), j = 1..n-1.
    pub coeffs: Vec<f64>,
    pub pair: SoninePair,
    pub extraction_report: ExtractionReport,
    basis: Vec<SingularFunction>,
    /// D^{<n>} f (sequential, of the variant's type).
    derivative_n: SingularFunction,
    remainder: SingularFunction,
    f: SingularFunction,
}

/// Coefficients and derivative chain of f, stopping early on instability.
fn coefficients(
    f: &SingularFunction,
    pair: &SoninePair,
    n: usize,
    variant: TaylorVariant,
    cfg: &ConvConfig,
) -> Result<(Vec<f64>, ExtractionReport, Vec<SingularFunction>)> {
    if n == 0 {
        return Err(GfcError::InvalidParameter("Taylor order n must be >= 1".into()));
    }
    let (chain, chain_err) = derivative_chain(&pair.k, variant.operator(), f, n, cfg);
    let p = match &pair.k {
        KernelSpec::ExtendedH0 => 1.0,
        k => resolve(&pair.kappa, cfg).map(|kf| kf.exponent_p()).or_else(|_| resolve(k, cfg).map(|kf| kf.exponent_p()))?,
    };
    let mut report = ExtractionReport::default();
    let mut coeffs = Vec::with_capacity(n);
    for (j, dj) in chain.iter().enumerate().take(n) {
        let diag = match variant {
            TaylorVariant::Rl => integrate_with_k(&pair.k, dj, &fold_config(cfg, j + 1)).and_then(|g| limit_of(&g, j, p, cfg)),
            TaylorVariant::Caputo => limit_of(dj, j, p, cfg),
        };
        match diag {
            Ok(d) => {
                coeffs.push(d.value);
                report.coefficients.push(d);
            }
            Err(e) => {
                report.stopped = Some(e);
                break;
            }
        }
    }
    if report.stopped.is_none() && coeffs.len() < n {
        report.stopped = chain_err.clone();
    }
    if coeffs.is_empty() {
        return Err(report.stopped.unwrap_or(GfcError::ExtrapolationUnstable { index: 0, residual: f64::NAN }));
    }
    if report.stopped.is_none() {
        report.stopped = chain_err;
    }
    Ok((coeffs, report, chain))
}

/// a_j = (I_k D_k^{<j>} f)(0) for j < n (RL, sequential derivatives).
///
/// Returns fewer than n coefficients when a limit fails to exist; the
/// report says why.
pub fn extract_coefficients_with(
    f: &SingularFunction,
    pair: &SoninePair,
    n: usize,
    cfg: &ConvConfig,
) -> Result<(Vec<f64>, ExtractionReport)> {
    let (c, r, _) = coefficients(f, pair, n, TaylorVariant::Rl, cfg)?;
    Ok((c, r))
}

pub fn extract_coefficients(f: &SingularFunction, pair: &SoninePair, n: usize) -> Result<Vec<f64>> {
    Ok(extract_coefficients_with(f, pair, n, &ConvConfig::default().with_x_max(f.x_max()))?.0)
}

impl TaylorExpansion {
    pub fn build(f: &SingularFunction, pair: &SoninePair, n: usize, variant: TaylorVariant, cfg: &ConvConfig) -> Result<Self> {
        cfg.validate()?;
        let (coeffs, report, chain) = coefficients(f, pair, n, variant, cfg)?;
        if coeffs.len() < n || chain.len() <= n {
            return Err(report.stopped.unwrap_or(GfcError::ExtrapolationUnstable { index: coeffs.len(), residual: f64::NAN }));
        }
        let basis = (0..n)
            .map(|j| match variant {
                TaylorVariant::Rl => conv_power(&pair.kappa, j + 1, cfg),
                TaylorVariant::Caputo => unit_conv_power(&pair.kappa, j, cfg),
            })
            .collect::<Result<Vec<_>>>()?;
        let derivative_n = chain[n].clone();
        let remainder = gfi(&pair.kappa, n, &derivative_n, &fold_config(cfg, n))?;
        Ok(Self { variant, n, coeffs, pair: pair.clone(), extraction_report: report, basis, derivative_n, remainder, f: f.clone() })
    }

    pub fn poly(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (c, b) in self.coeffs.iter().zip(&self.basis) {
            acc += c * b.eval(x)?;
        }
        Ok(acc)
    }

    pub fn remainder(&self, x: f64) -> Result<f64> {
        self.remainder.eval(x)
    }

    /// f(x) - poly(x) - remainder(x).
    pub fn identity_residual(&self, x: f64) -> Result<f64> {
        Ok(self.f.eval(x)? - self.poly(x)? - self.remainder(x)?)
    }

    pub fn derivative_n(&self) -> &SingularFunction {
        &self.derivative_n
    }

    pub fn remainder_function(&self) -> &SingularFunction {
        &self.remainder
    }
}

/// (poly(x), remainder(x)) of the order-n expansion.
pub fn taylor_approx(f: &SingularFunction, pair: &SoninePair, n: usize, variant: TaylorVariant, x: f64) -> Result<(f64, f64)> {
    let cfg = ConvConfig::default().with_x_max(f.x_max());
    let t = TaylorExpansion::build(f, pair, n, variant, &cfg)?;
    Ok((t.poly(x)?, t.remainder(x)?))
}

/// Mean-value form of the remainder: ratio = remainder / ({1} * κ^{<n>})
/// against the range of D^{<n>} f sampled on (0, x].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueBracket {
    pub lo: f64,
    pub hi: f64,
    pub ratio: f64,
    /// Ratio inside [lo, hi] up to an absolute slack of 1e-6.
    pub holds: bool,
}

pub const BRACKET_SLACK: f64 = 1e-6;

pub fn mean_value_bracket_for(t: &TaylorExpansion, x: f64, grid_m: usize, cfg: &ConvConfig) -> Result<MeanValueBracket> {
    if grid_m == 0 {
        return Err(GfcError::InvalidParameter("grid_m must be >= 1".into()));
    }
    let weight = unit_conv_power(&t.pair.kappa, t.n, cfg)?.eval(x)?;
    let ratio = t.remainder(x)? / weight;
    let d = &t.derivative_n;
    let mut samples: Vec<f64> = (1..=grid_m).map(|i| d.eval_unchecked(x * i as f64 / grid_m as f64)).collect();
    if let Some(v) = d.limit_at_zero(cfg.zero_tol) {
        samples.push(v);
    }
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let holds = ratio >= lo - BRACKET_SLACK && ratio <= hi + BRACKET_SLACK;
    Ok(MeanValueBracket { lo, hi, ratio, holds })
}

pub fn mean_value_bracket(
    f: &SingularFunction,
    pair: &SoninePair,
    n: usize,
    variant: TaylorVariant,
    x: f64,
    grid_m: usize,
) -> Result<MeanValueBracket> {
    let cfg = ConvConfig::default().with_x_max(f.x_max());
    let t = TaylorExpansion::build(f, pair, n, variant, &cfg)?;
    mean_value_bracket_for(&t, x, grid_m, &cfg)
}

/// Partial sums of the Caputo Taylor series.
#[derive(Debug, Clone, PartialEq)]
pub struct CaputoSeriesValue {
    pub value: f64,
    /// f(0), (*D f)(0), (*D^{<2>} f)(0), ..
    pub coeffs: Vec<f64>,
    pub converged: bool,
}

/// Coefficients larger than this multiple of max(1, |f(0)|) count as unbounded.
const COEFF_GROWTH_LIMIT: f64 = 1e8;

pub fn caputo_taylor_series_with(
    f: &SingularFunction,
    pair: &SoninePair,
    x: f64,
    n_max: usize,
    tol: f64,
    cfg: &ConvConfig,
) -> Result<CaputoSeriesValue> {
    let (chain, err) = derivative_chain(&pair.k, OperatorVariant::GfdCaputo, f, n_max, cfg);
    let f0 = f.limit_at_zero(cfg.zero_tol).ok_or(GfcError::CaputoRequiresContinuity)?;
    let mut coeffs = vec![f0];
    let mut value = f0;
    let limit = COEFF_GROWTH_LIMIT * f0.abs().max(1.0);
    for (j, dj) in chain.iter().enumerate().skip(1) {
        let c = match dj.limit_at_zero(cfg.zero_tol) {
            Some(c) => c,
            None => return Err(GfcError::ExtrapolationUnstable { index: j, residual: f64::NAN }),
        };
        if c.abs() > limit {
            return Err(GfcError::SeriesDiverged { terms: j });
        }
        coeffs.push(c);
        let term = c * unit_conv_power(&pair.kappa, j, &fold_config(cfg, j))?.eval(x)?;
        value += term;
        if term.abs() < tol && j >= 2 {
            return Ok(CaputoSeriesValue { value, coeffs, converged: true });
        }
    }
    match err {
        Some(e) if chain.len() < 2 => Err(e),
        _ => Ok(CaputoSeriesValue { value, coeffs, converged: false }),
    }
}

/// f(0) + Σ_{j>=1} (*D^{<j>} f)(0) ({1} * κ^{<j>})(x), summed until successive
/// partial sums differ by less than `tol` or `n_max` terms.
pub fn caputo_taylor_series(f: &SingularFunction, pair: &SoninePair, x: f64, n_max: usize, tol: f64) -> Result<f64> {
    let cfg = ConvConfig::default().with_x_max(f.x_max());
    Ok(caputo_taylor_series_with(f, pair, x, n_max, tol, &cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::rgamma;

    fn cfg() -> ConvConfig {
        ConvConfig::default()
    }

    fn half_pair() -> SoninePair {
        SoninePair::power(0.5).unwrap()
    }

    #[test]
    fn kernel_itself() {
        let f = SingularFunction::power(0.5, &cfg()).unwrap();
        let c = extract_coefficients(&f, &half_pair(), 3).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-10 && c[1].abs() < 1e-10 && c[2].abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn two_term_polynomial() {
        let f = SingularFunction::from_power_terms(&[(1.0, 0.5), (2.0, 1.0)], &cfg()).unwrap();
        let c = extract_coefficients(&f, &half_pair(), 3).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-10 && (c[1] - 2.0).abs() < 1e-10 && c[2].abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn singular_limit_stops_extraction() {
        // a_1 = (k * h_{0.3})(0) = h_{0.8}(0) does not exist
        let f = SingularFunction::from_power_terms(&[(1.0, 0.5), (1.0, 0.8)], &cfg()).unwrap();
        let (c, report) = extract_coefficients_with(&f, &half_pair(), 3, &cfg()).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c[0] - 1.0).abs() < 1e-10);
        assert!(report.stopped.is_some());
    }

    #[test]
    fn rl_polynomial_is_its_own_expansion() {
        let f = SingularFunction::from_power_terms(&[(3.0, 0.5), (0.5, 1.5)], &cfg()).unwrap();
        let (poly, rem) = taylor_approx(&f, &half_pair(), 3, TaylorVariant::Rl, 1.0).unwrap();
        assert!((poly - f.eval(1.0).unwrap()).abs() < 1e-10);
        assert!(rem.abs() < 1e-6);
    }

    #[test]
    fn classical_taylor_of_exp() {
        let f = SingularFunction::exp(1.0, &cfg()).unwrap();
        let (poly, rem) = taylor_approx(&f, &SoninePair::extended(), 4, TaylorVariant::Caputo, 0.5).unwrap();
        let cubic = 1.0 + 0.5 + 0.125 + 0.125 / 6.0;
        assert!((poly - cubic).abs() < 1e-12);
        assert!((rem - (0.5_f64.exp() - cubic)).abs() < 1e-10);
    }

    #[test]
    fn caputo_polynomial_continuous_rl_singular() {
        let f = SingularFunction::from_power_terms(&[(1.0, 1.0), (1.0, 1.5), (0.5, 2.0)], &cfg()).unwrap();
        let pair = half_pair();
        let c = TaylorExpansion::build(&f, &pair, 3, TaylorVariant::Caputo, &cfg()).unwrap();
        let r = TaylorExpansion::build(&f, &pair, 3, TaylorVariant::Rl, &cfg()).unwrap();
        let small = [1e-4, 1e-6, 1e-8];
        let cv: Vec<f64> = small.iter().map(|&x| c.poly(x).unwrap()).collect();
        assert!((cv[2] - 1.0).abs() < 1e-3);
        let rv: Vec<f64> = small.iter().map(|&x| r.poly(x).unwrap().abs()).collect();
        // a_0 = (I_k f)(0) = 0 here, a_1 = 1: RL polynomial still continuous;
        // the leading term is a_0 κ, so check on a function with a_0 != 0
        assert!(rv.iter().all(|v| v.is_finite()));
        let g = SingularFunction::from_power_terms(&[(1.0, 0.5), (1.0, 1.0)], &cfg()).unwrap();
        let r = TaylorExpansion::build(&g, &pair, 2, TaylorVariant::Rl, &cfg()).unwrap();
        let rv: Vec<f64> = small.iter().map(|&x| r.poly(x).unwrap()).collect();
        assert!(rv[2] > 50.0 * rv[0]);
    }

    #[test]
    fn bracket_for_polynomial() {
        // f = 2 κ^{<3>}: D^{<2>} f = 2 κ
        let f = SingularFunction::power(1.5, &cfg()).unwrap().scale_by(2.0);
        let b = mean_value_bracket(&f, &half_pair(), 2, TaylorVariant::Rl, 1.0, 200).unwrap();
        assert!(b.holds, "{b:?}");
        // closed form: ratio = 2 h_{1}(1)... remainder 2 h_{1.5}, weight h_{2}
        assert!((b.ratio - 2.0 * rgamma(1.5)).abs() < 1e-8);
    }

    #[test]
    fn bracket_for_two_term() {
        let f = SingularFunction::from_power_terms(&[(1.0, 0.5), (2.0, 1.0)], &cfg()).unwrap();
        let b = mean_value_bracket(&f, &half_pair(), 1, TaylorVariant::Rl, 1.0, 200).unwrap();
        // D_k f = 2 h_{0.5}; ratio = 2 h_1(1) / h_{1.5}(1) = √π
        assert!(b.holds, "{b:?}");
        assert!((b.ratio - std::f64::consts::PI.sqrt()).abs() < 1e-8);
        assert!((b.lo - 2.0 * rgamma(0.5)).abs() < 1e-8);
    }

    #[test]
    fn exponential_series_classical() {
        let f = SingularFunction::exp(1.0, &cfg()).unwrap();
        let v = caputo_taylor_series(&f, &SoninePair::extended(), 1.0, 25, 1e-12).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-8);
        let c = SingularFunction::constant(3.0, 2.0);
        let v = caputo_taylor_series(&c, &half_pair(), 1.3, 10, 1e-12).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn richardson_on_known_expansion() {
        let (v, _) = richardson_limit(|x| 2.0 + 3.0 * x.powf(0.5), 0.5, 0.5, 8);
        assert!((v - 2.0).abs() < 1e-12);
    }
}
