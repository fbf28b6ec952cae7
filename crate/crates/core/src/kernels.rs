//! Kernel catalog: power laws, sums of power laws, the Mittag-Leffler kernel
//! and the two extended kernels h_0 (a delta) and h_1 (the constant 1).

use crate::convops::{convolve, ConvConfig, SingularFunction};
use crate::error::{GfcError, Result};
use crate::specfun::rgamma;
use crate::theorems::ResidualReport;
use std::fmt;

const TEMPLATE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// h_β(x) = x^{β-1} / Γ(β).
    PowerLaw(f64),
    /// Σ c_i h_{β_i}, stored as (c_i, β_i).
    SumPowerLaw(Vec<(f64, f64)>),
    /// x^{β-1} E_{α,β}(-x^α) with 0 < α < β < 1.
    MLKernel { alpha: f64, beta: f64 },
    /// h_0, the unit of the convolution algebra. Never materialized.
    ExtendedH0,
    /// h_1 ≡ 1.
    ExtendedH1,
    /// A user-supplied function; usable in operators, has no partner.
    Tabulated(SingularFunction),
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::PowerLaw(b) => write!(f, "h:{b}"),
            KernelSpec::SumPowerLaw(terms) => {
                let parts: Vec<String> = terms.iter().map(|(c, b)| format!("{c}*h:{b}")).collect();
                write!(f, "sum:{}", parts.join("+"))
            }
            KernelSpec::MLKernel { alpha, beta } => write!(f, "mlk:{alpha},{beta}"),
            KernelSpec::ExtendedH0 => write!(f, "h0"),
            KernelSpec::ExtendedH1 => write!(f, "h1"),
            KernelSpec::Tabulated(_) => write!(f, "tabulated"),
        }
    }
}

impl KernelSpec {
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(GfcError::InvalidParameter(format!("power-law kernel needs beta > 0, got {beta}")));
        }
        Ok(KernelSpec::PowerLaw(beta))
    }

    pub fn sum(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(GfcError::InvalidParameter("sum kernel needs at least one term".into()));
        }
        if let Some(&(_, b)) = terms.iter().find(|(_, b)| !(*b > 0.0) || !b.is_finite()) {
            return Err(GfcError::InvalidParameter(format!("sum kernel exponents must be positive, got {b}")));
        }
        Ok(KernelSpec::SumPowerLaw(terms))
    }

    pub fn ml(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha < beta && beta < 1.0) {
            return Err(GfcError::InvalidParameter(format!("Mittag-Leffler kernel needs 0 < alpha < beta < 1, got ({alpha}, {beta})")));
        }
        Ok(KernelSpec::MLKernel { alpha, beta })
    }

    /// The sum kernel h_{1-β+α} + h_{1-β} paired with the Mittag-Leffler kernel.
    pub fn ml_partner_sum(alpha: f64, beta: f64) -> Result<Self> {
        Self::ml(alpha, beta)?;
        Ok(KernelSpec::SumPowerLaw(vec![(1.0, 1.0 - beta + alpha), (1.0, 1.0 - beta)]))
    }

    /// Exact expansion as a sum of power functions, where one exists.
    pub fn power_series(&self, x_max: f64) -> Result<PowerSeries> {
        match self {
            KernelSpec::PowerLaw(b) => Ok(PowerSeries::new(vec![(1.0, *b)])),
            KernelSpec::SumPowerLaw(terms) => Ok(PowerSeries::new(terms.clone())),
            KernelSpec::ExtendedH1 => Ok(PowerSeries::new(vec![(1.0, 1.0)])),
            KernelSpec::MLKernel { alpha, beta } => Ok(PowerSeries::ml_kernel(*alpha, *beta, x_max)),
            KernelSpec::ExtendedH0 => Err(GfcError::DistributionalKernel("h0".into())),
            KernelSpec::Tabulated(_) => Err(GfcError::NoOracle("tabulated".into())),
        }
    }

    /// Leading power-law exponent p in (0, 1] of the kernel near the origin.
    pub fn leading_exponent(&self, cfg: &ConvConfig) -> Result<f64> {
        Ok(resolve(self, cfg)?.exponent_p())
    }
}

/// Finite sum Σ c_i h_{β_i} of power functions, closed under convolution
/// through h_a * h_b = h_{a+b}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSeries {
    terms: Vec<(f64, f64)>,
}

impl PowerSeries {
    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        let mut s = Self { terms: Vec::new() };
        for (c, b) in terms {
            s.push(c, b);
        }
        s
    }

    fn push(&mut self, c: f64, beta: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.iter_mut().find(|(_, b)| (b - beta).abs() < 1e-12) {
            Some(t) => t.0 += c,
            None => self.terms.push((c, beta)),
        }
    }

    /// Σ_m (-1)^m h_{αm+β}, truncated once terms are negligible on [0, X].
    pub fn ml_kernel(alpha: f64, beta: f64, x_max: f64) -> Self {
        let mut terms = Vec::new();
        for m in 0..4000 {
            let e = alpha * m as f64 + beta;
            let c = if m % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((c, e));
            if e > 2.0 && x_max.powf(e - 1.0) * rgamma(e) < 1e-20 {
                break;
            }
        }
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { terms: self.terms.iter().map(|&(c, b)| (c * factor, b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &(c, b) in &other.terms {
            out.push(c, b);
        }
        out
    }

    /// Convolution product, dropping terms below `tol` in sup norm on [0, X].
    pub fn convolve(&self, other: &Self, x_max: f64, tol: f64) -> Self {
        let mut products: Vec<(f64, f64)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(c1, b1) in &self.terms {
            for &(c2, b2) in &other.terms {
                products.push((c1 * c2, b1 + b2));
            }
        }
        products.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(products.len());
        for (c, b) in products {
            match merged.last_mut() {
                Some(last) if (last.1 - b).abs() < 1e-12 => last.0 += c,
                _ => merged.push((c, b)),
            }
        }
        merged.retain(|t| t.0 != 0.0);
        let mut out = Self { terms: merged };
        out.truncate(x_max, tol);
        out
    }

    /// κ^{<n>} for n >= 1.
    pub fn power(&self, n: usize, x_max: f64, tol: f64) -> Self {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.convolve(self, x_max, tol);
        }
        acc
    }

    pub fn truncate(&mut self, x_max: f64, tol: f64) {
        self.terms.retain(|&(c, b)| b < 1.0 || (c * x_max.powf(b - 1.0) * rgamma(b)).abs() >= tol);
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(c, b)| c * x.powf(b - 1.0) * rgamma(b)).sum()
    }

    pub fn to_function(&self, cfg: &ConvConfig) -> Result<SingularFunction> {
        SingularFunction::from_power_terms(&self.terms, cfg)
    }
}

/// Materializes a kernel as a function on [0, X].
pub fn resolve(spec: &KernelSpec, cfg: &ConvConfig) -> Result<SingularFunction> {
    match spec {
        KernelSpec::ExtendedH0 => Err(GfcError::DistributionalKernel("h0".into())),
        KernelSpec::Tabulated(f) => {
            f.check_domain(&SingularFunction::zero(cfg.x_max))?;
            Ok(f.clone())
        }
        other => other.power_series(cfg.x_max)?.to_function(cfg),
    }
}

fn matches_ml_template(terms: &[(f64, f64)]) -> Option<(f64, f64)> {
    if terms.len() != 2 || terms.iter().any(|(c, _)| (c - 1.0).abs() > TEMPLATE_EPS) {
        return None;
    }
    let hi = terms[0].1.max(terms[1].1);
    let lo = terms[0].1.min(terms[1].1);
    // h_{1-β+α} + h_{1-β}: β = 1 - lo, α = hi - lo
    if lo > TEMPLATE_EPS && hi - lo > TEMPLATE_EPS && hi < 1.0 - TEMPLATE_EPS {
        Some((hi - lo, 1.0 - lo))
    } else {
        None
    }
}

/// The Sonine partner k of a catalog kernel κ, (κ * k)(x) ≡ 1.
pub fn associated_kernel(spec: &KernelSpec) -> Result<KernelSpec> {
    match spec {
        KernelSpec::PowerLaw(a) if *a > 0.0 && *a < 1.0 => Ok(KernelSpec::PowerLaw(1.0 - a)),
        KernelSpec::SumPowerLaw(terms) => match matches_ml_template(terms) {
            Some((alpha, beta)) => Ok(KernelSpec::MLKernel { alpha, beta }),
            None => Err(GfcError::NoKnownAssociate(spec.to_string())),
        },
        KernelSpec::MLKernel { alpha, beta } => KernelSpec::ml_partner_sum(*alpha, *beta),
        KernelSpec::ExtendedH0 => Ok(KernelSpec::ExtendedH1),
        KernelSpec::ExtendedH1 => Ok(KernelSpec::ExtendedH0),
        _ => Err(GfcError::NoKnownAssociate(spec.to_string())),
    }
}

/// A pair of kernels meant to satisfy the Sonine condition κ * k ≡ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SoninePair {
    pub kappa: KernelSpec,
    pub k: KernelSpec,
    /// Max residual of the last [`sonine_check`], if one was run.
    pub verified_to: Option<f64>,
}

impl SoninePair {
    pub fn new(kappa: KernelSpec, k: KernelSpec) -> Self {
        Self { kappa, k, verified_to: None }
    }

    /// κ together with its catalog partner.
    pub fn from_catalog(kappa: KernelSpec) -> Result<Self> {
        let k = associated_kernel(&kappa)?;
        Ok(Self::new(kappa, k))
    }

    /// (h_α, h_{1-α}).
    pub fn power(alpha: f64) -> Result<Self> {
        Self::from_catalog(KernelSpec::power(alpha)?)
    }

    /// (h_{1-β+α} + h_{1-β}, x^{β-1} E_{α,β}(-x^α)).
    pub fn mittag_leffler(alpha: f64, beta: f64) -> Result<Self> {
        Self::from_catalog(KernelSpec::ml_partner_sum(alpha, beta)?)
    }

    /// The limiting pair (h_1, h_0) of the classical calculus.
    pub fn extended() -> Self {
        Self::new(KernelSpec::ExtendedH1, KernelSpec::ExtendedH0)
    }

    pub fn is_extended(&self) -> bool {
        matches!(self.k, KernelSpec::ExtendedH0 | KernelSpec::ExtendedH1)
    }
}

impl fmt::Display for SoninePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.kappa, self.k)
    }
}

/// Geometric grid of `n` points from x_max * 1e-3 up to x_max.
pub fn geometric_grid(x_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![x_max];
    }
    let lo = x_max * 1e-3;
    let ratio = (x_max / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| if i + 1 == n { x_max } else { lo * ratio.powi(i as i32) }).collect()
}

/// Evaluates (κ * k)(x) - 1 on a geometric grid and records the max residual
/// in the pair.
pub fn sonine_check(pair: &mut SoninePair, x_max: f64, n_points: usize, quad_order: usize) -> Result<ResidualReport> {
    sonine_check_with(pair, n_points, &ConvConfig::default().with_x_max(x_max).with_quad_order(quad_order))
}

pub fn sonine_check_with(pair: &mut SoninePair, n_points: usize, cfg: &ConvConfig) -> Result<ResidualReport> {
    cfg.validate()?;
    if n_points == 0 {
        return Err(GfcError::InvalidParameter("n_points must be >= 1".into()));
    }
    let grid = geometric_grid(cfg.x_max, n_points);
    let lhs: Vec<f64> = match (&pair.kappa, &pair.k) {
        (KernelSpec::ExtendedH0, other) | (other, KernelSpec::ExtendedH0) => {
            // h_0 is the convolution unit
            let f = resolve(other, cfg)?;
            grid.iter().map(|&x| f.eval_unchecked(x)).collect()
        }
        (a, b) => {
            let prod = convolve(&resolve(a, cfg)?, &resolve(b, cfg)?, cfg)?;
            grid.iter().map(|&x| prod.eval_unchecked(x)).collect()
        }
    };
    let rhs = vec![1.0; grid.len()];
    let report = ResidualReport::new(format!("sonine {pair}"), None, grid, lhs, rhs);
    pair.verified_to = Some(report.residual_max);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn associates() {
        assert_eq!(associated_kernel(&KernelSpec::PowerLaw(0.3)).unwrap(), KernelSpec::PowerLaw(0.7));
        let sum = KernelSpec::SumPowerLaw(vec![(1.0, 1.0 - 0.625 + 0.25), (1.0, 1.0 - 0.625)]);
        assert_eq!(associated_kernel(&sum).unwrap(), KernelSpec::MLKernel { alpha: 0.25, beta: 0.625 });
        assert_eq!(associated_kernel(&KernelSpec::ExtendedH1).unwrap(), KernelSpec::ExtendedH0);
        assert!(matches!(associated_kernel(&KernelSpec::PowerLaw(1.4)), Err(GfcError::NoKnownAssociate(_))));
        let off_template = KernelSpec::SumPowerLaw(vec![(2.0, 0.6), (1.0, 0.4)]);
        assert!(associated_kernel(&off_template).is_err());
    }

    #[test]
    fn associate_is_an_involution_on_the_catalog() {
        let catalog = vec![
            KernelSpec::PowerLaw(0.25),
            KernelSpec::PowerLaw(0.5),
            KernelSpec::MLKernel { alpha: 0.25, beta: 0.625 },
            KernelSpec::ml_partner_sum(0.1, 0.8).unwrap(),
            KernelSpec::ExtendedH0,
            KernelSpec::ExtendedH1,
        ];
        for s in catalog {
            let back = associated_kernel(&associated_kernel(&s).unwrap()).unwrap();
            match (&s, &back) {
                (KernelSpec::SumPowerLaw(a), KernelSpec::SumPowerLaw(b)) => {
                    for (x, y) in a.iter().zip(b) {
                        assert!((x.1 - y.1).abs() < 1e-14 && x.0 == y.0);
                    }
                }
                (KernelSpec::MLKernel { alpha: a1, beta: b1 }, KernelSpec::MLKernel { alpha: a2, beta: b2 }) => {
                    assert!((a1 - a2).abs() < 1e-14 && (b1 - b2).abs() < 1e-14);
                }
                _ => assert_eq!(s, back),
            }
        }
    }

    #[test]
    fn resolve_kernels() {
        let cfg = ConvConfig::default();
        let one = resolve(&KernelSpec::PowerLaw(1.0), &cfg).unwrap();
        assert!((one.eval(0.3).unwrap() - 1.0).abs() < 1e-15);
        // E_{0.25,0.625}(-1) from a 400-term high-precision sum
        let k = resolve(&KernelSpec::MLKernel { alpha: 0.25, beta: 0.625 }, &cfg).unwrap();
        assert!((k.eval(1.0).unwrap() - 0.284_600_719_756_410_686_5).abs() < 1e-13);
        assert!(matches!(resolve(&KernelSpec::ExtendedH0, &cfg), Err(GfcError::DistributionalKernel(_))));
        let h1 = resolve(&KernelSpec::ExtendedH1, &cfg).unwrap();
        assert!((h1.eval(1.9).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ml_kernel_parameter_range() {
        assert!(KernelSpec::ml(0.7, 0.5).is_err());
        assert!(KernelSpec::ml(0.25, 1.0).is_err());
        assert!(KernelSpec::ml(0.25, 0.625).is_ok());
    }

    #[test]
    fn power_series_convolution_is_exponent_addition() {
        let a = PowerSeries::new(vec![(1.0, 0.3)]);
        let b = PowerSeries::new(vec![(2.0, 0.9)]);
        let c = a.convolve(&b, 2.0, 0.0);
        assert_eq!(c.terms().len(), 1);
        assert!((c.terms()[0].1 - 1.2).abs() < 1e-15 && c.terms()[0].0 == 2.0);
    }

    #[test]
    fn sonine_power_pair_exact() {
        let mut pair = SoninePair::power(0.5).unwrap();
        let report = sonine_check(&mut pair, 2.0, 20, 32).unwrap();
        assert!(report.residual_max <= 1e-10);
        assert_eq!(pair.verified_to, Some(report.residual_max));
    }

    #[test]
    fn sonine_ml_pair() {
        let mut pair = SoninePair::mittag_leffler(0.25, 0.625).unwrap();
        let report = sonine_check(&mut pair, 2.0, 20, 32).unwrap();
        assert!(report.residual_max <= 1e-6, "{}", report.residual_max);
    }

    #[test]
    fn non_sonine_pair_reports_large_residual() {
        let mut pair = SoninePair::new(KernelSpec::PowerLaw(0.5), KernelSpec::PowerLaw(0.6));
        let report = sonine_check(&mut pair, 2.0, 20, 32).unwrap();
        assert!(report.residual_max > 0.05);
        // closed form: h_{1.1}(x) - 1 at the top of the grid
        let x: f64 = 2.0;
        let expected = x.powf(0.1) * rgamma(1.1) - 1.0;
        assert!((report.lhs.last().unwrap() - 1.0 - expected).abs() < 1e-12);
    }

    #[test]
    fn extended_pair_check() {
        let mut pair = SoninePair::extended();
        let report = sonine_check(&mut pair, 2.0, 10, 8).unwrap();
        assert_eq!(report.residual_max, 0.0);
    }
}
