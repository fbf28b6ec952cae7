//! Convolution series Σ_j a_j κ^{<j+1>}(x) and the geometric series
//! l_{κ,λ} = Σ_j λ^j κ^{<j+1>}.

use crate::convops::{cheb_nodes, convolve, ConvConfig, SingularFunction};
use crate::error::{GfcError, Result};
use crate::kernels::{resolve, KernelSpec, PowerSeries};
use crate::specfun::{gamma, ln_gamma, mittag_leffler, multinomial_ml, CompensatedSum, MLParams, MultiMLParams};
use std::sync::Mutex;

pub const DEFAULT_TERM_BUDGET: usize = 600;

/// Where the coefficients a_j come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSource {
    /// a_0, .., a_{n-1}, all later coefficients zero.
    Explicit(Vec<f64>),
    /// a_j = λ^j.
    Geometric(f64),
}

impl CoeffSource {
    pub fn coeff(&self, j: usize) -> f64 {
        match self {
            CoeffSource::Explicit(c) => c.get(j).copied().unwrap_or(0.0),
            CoeffSource::Geometric(l) => l.powi(j as i32),
        }
    }

    /// Number of nonzero coefficients, if finite.
    pub fn len(&self) -> Option<usize> {
        match self {
            CoeffSource::Explicit(c) => Some(c.len()),
            CoeffSource::Geometric(l) if *l == 0.0 => Some(1),
            CoeffSource::Geometric(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

/// (z0, M) with |a_j| <= M / |z0|^j for every j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusWitness {
    pub z0: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionSeriesSpec {
    pub kernel: KernelSpec,
    pub coeffs: CoeffSource,
    pub witness: RadiusWitness,
}

impl ConvolutionSeriesSpec {
    /// Checks the witness against every explicit coefficient.
    pub fn new(kernel: KernelSpec, coeffs: CoeffSource, witness: RadiusWitness) -> Result<Self> {
        if witness.z0 == 0.0 || !witness.z0.is_finite() || !(witness.m > 0.0) {
            return Err(GfcError::InvalidParameter(format!("radius witness needs z0 != 0 and M > 0, got ({}, {})", witness.z0, witness.m)));
        }
        if let CoeffSource::Explicit(c) = &coeffs {
            for (j, a) in c.iter().enumerate() {
                let bound = witness.m / witness.z0.abs().powi(j as i32);
                if a.abs() > bound * (1.0 + 1e-12) {
                    return Err(GfcError::InvalidRadiusWitness { index: j, value: a.abs(), bound });
                }
            }
        }
        Ok(Self { kernel, coeffs, witness })
    }

    /// Explicit coefficients with the tightest witness at z0 = 1.
    pub fn explicit(kernel: KernelSpec, coeffs: Vec<f64>) -> Result<Self> {
        let m = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);
        Self::new(kernel, CoeffSource::Explicit(coeffs), RadiusWitness { z0: 1.0, m })
    }

    /// a_j = λ^j with witness z0 = 1/λ, M = 1.
    pub fn geometric(kernel: KernelSpec, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(GfcError::InvalidParameter(format!("lambda must be finite, got {lambda}")));
        }
        let z0 = if lambda == 0.0 { 1e300 } else { 1.0 / lambda };
        Self::new(kernel, CoeffSource::Geometric(lambda), RadiusWitness { z0, m: 1.0 })
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.coeff(j)
    }
}

/// M_X = sup |Γ(p) x^{1-p} κ(x)| over [0, X], with p the kernel exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBound {
    pub m_x: f64,
    pub x_max: f64,
    pub p: f64,
}

impl TruncationBound {
    /// Samples the regular factor on 512 Chebyshev points and inflates the
    /// maximum by 5%.
    pub fn estimate(kernel: &KernelSpec, cfg: &ConvConfig) -> Result<Self> {
        let k = resolve(kernel, cfg)?;
        let p = k.exponent_p();
        let g = gamma(p)?;
        let sup = cheb_nodes(511, cfg.x_max).into_iter().chain([0.0, cfg.x_max]).map(|x| (g * k.regular(x)).abs()).fold(0.0, f64::max);
        Ok(Self { m_x: 1.05 * sup, x_max: cfg.x_max, p })
    }

    /// Logarithm of the j-th majorant term M M_X^{j+1} x^{(j+1)p-1} / (|z0|^j Γ((j+1)p)).
    fn ln_term(&self, w: &RadiusWitness, j: usize, x: f64) -> f64 {
        let jf = j as f64;
        let s = (jf + 1.0) * self.p;
        w.m.ln() + (jf + 1.0) * self.m_x.ln() + (s - 1.0) * x.ln() - jf * w.z0.abs().ln() - ln_gamma(s).unwrap_or(f64::INFINITY)
    }
}

/// Majorant of |Σ_{j>=J} a_j κ^{<j+1>}(x)| from the term-wise estimate
/// |a_j κ^{<j+1>}(x)| <= M/|z0|^j M_X^{j+1} h_{(j+1)p}(x).
pub fn tail_bound(spec: &ConvolutionSeriesSpec, tb: &TruncationBound, big_j: usize, x: f64) -> f64 {
    if let Some(n) = spec.coeffs.len() {
        if big_j >= n {
            return 0.0;
        }
    }
    let mut sum = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for j in big_j..big_j + 1_000_000 {
        let ln_t = tb.ln_term(&spec.witness, j, x);
        let t = ln_t.exp();
        sum += t;
        let ratio = (ln_t - prev).exp();
        if j > big_j && ratio < 0.5 && t <= 1e-17 * sum.max(f64::MIN_POSITIVE) {
            // terms decay at least geometrically from here on
            return sum + t * ratio / (1.0 - ratio);
        }
        if sum == 0.0 && j > big_j + 10 && ln_t < prev {
            return 0.0;
        }
        prev = ln_t;
    }
    sum
}

enum PowerCache {
    Exact { base: PowerSeries, powers: Vec<PowerSeries> },
    Numeric { base: SingularFunction, powers: Vec<SingularFunction> },
}

/// A convolution series together with its cached convolution powers.
pub struct ConvolutionSeries {
    spec: ConvolutionSeriesSpec,
    cfg: ConvConfig,
    bound: TruncationBound,
    budget: usize,
    cache: Mutex<PowerCache>,
}

/// Value of a truncated series and the certificate that justified stopping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

impl ConvolutionSeries {
    pub fn new(spec: ConvolutionSeriesSpec, cfg: &ConvConfig) -> Result<Self> {
        cfg.validate()?;
        let bound = TruncationBound::estimate(&spec.kernel, cfg)?;
        let cache = match &spec.kernel {
            KernelSpec::PowerLaw(_) | KernelSpec::SumPowerLaw(_) | KernelSpec::ExtendedH1 => {
                let base = spec.kernel.power_series(cfg.x_max)?;
                PowerCache::Exact { powers: vec![base.clone()], base }
            }
            other => {
                let base = resolve(other, cfg)?;
                PowerCache::Numeric { powers: vec![base.clone()], base }
            }
        };
        Ok(Self { spec, cfg: *cfg, bound, budget: DEFAULT_TERM_BUDGET, cache: Mutex::new(cache) })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn spec(&self) -> &ConvolutionSeriesSpec {
        &self.spec
    }

    pub fn bound(&self) -> &TruncationBound {
        &self.bound
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(x > 0.0) || x > self.cfg.x_max * (1.0 + 1e-12) {
            return Err(GfcError::OutOfDomain { x, x_max: self.cfg.x_max });
        }
        Ok(())
    }

    fn extend(&self, j: usize) -> Result<()> {
        let mut cache = self.cache.lock().expect("power cache poisoned");
        match &mut *cache {
            PowerCache::Exact { base, powers } => {
                while powers.len() <= j {
                    let next = powers.last().expect("non-empty").convolve(base, self.cfg.x_max, 0.0);
                    powers.push(next);
                }
            }
            PowerCache::Numeric { base, powers } => {
                while powers.len() <= j {
                    let next = convolve(powers.last().expect("non-empty"), base, &self.cfg)?;
                    powers.push(next);
                }
            }
        }
        Ok(())
    }

    /// κ^{<j+1>}(x).
    pub fn power_value(&self, j: usize, x: f64) -> Result<f64> {
        self.check_x(x)?;
        if let KernelSpec::PowerLaw(a) = self.spec.kernel {
            return Ok(PowerSeries::new(vec![(1.0, (j + 1) as f64 * a)]).eval(x));
        }
        if let KernelSpec::ExtendedH1 = self.spec.kernel {
            return Ok(PowerSeries::new(vec![(1.0, (j + 1) as f64)]).eval(x));
        }
        self.extend(j)?;
        let cache = self.cache.lock().expect("power cache poisoned");
        Ok(match &*cache {
            PowerCache::Exact { powers, .. } => powers[j].eval(x),
            PowerCache::Numeric { powers, .. } => powers[j].eval(x)?,
        })
    }

    /// Σ_{j<J} a_j κ^{<j+1>}(x).
    pub fn partial_sum(&self, big_j: usize, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let mut acc = CompensatedSum::new();
        for j in 0..big_j {
            let a = self.spec.coeff(j);
            if a != 0.0 {
                acc.add(a * self.power_value(j, x)?);
            }
        }
        Ok(acc.value())
    }

    pub fn tail_bound(&self, big_j: usize, x: f64) -> f64 {
        tail_bound(&self.spec, &self.bound, big_j, x)
    }

    /// Smallest J whose tail bound at x is below `tol`.
    pub fn terms_needed(&self, x: f64, tol: f64) -> Result<usize> {
        self.check_x(x)?;
        let mut big_j = 0;
        while self.tail_bound(big_j, x) >= tol {
            big_j += 1;
            if big_j > self.budget {
                return Err(GfcError::SeriesDiverged { terms: self.budget });
            }
        }
        Ok(big_j)
    }

    /// Partial sums until the certified tail drops below `tol`.
    pub fn evaluate(&self, x: f64, tol: f64) -> Result<SeriesValue> {
        let terms = self.terms_needed(x, tol)?;
        Ok(SeriesValue { value: self.partial_sum(terms, x)?, terms, tail_bound: self.tail_bound(terms, x) })
    }

    /// The series truncated after J terms, as a function on [0, X].
    pub fn truncated_function(&self, big_j: usize) -> Result<SingularFunction> {
        let mut out = SingularFunction::zero(self.cfg.x_max);
        if big_j == 0 {
            return Ok(out);
        }
        if matches!(self.spec.kernel, KernelSpec::PowerLaw(_) | KernelSpec::ExtendedH1) {
            let base = self.spec.kernel.power_series(self.cfg.x_max)?;
            let (c, b) = base.terms()[0];
            let terms: Vec<(f64, f64)> = (0..big_j).map(|j| (self.spec.coeff(j) * c.powi(j as i32 + 1), b * (j + 1) as f64)).collect();
            return SingularFunction::from_power_terms(&terms, &self.cfg);
        }
        self.extend(big_j - 1)?;
        let cache = self.cache.lock().expect("power cache poisoned");
        match &*cache {
            PowerCache::Exact { powers, .. } => {
                let mut acc = PowerSeries::default();
                for (j, pw) in powers.iter().enumerate().take(big_j) {
                    acc = acc.add(&pw.scale(self.spec.coeff(j)));
                }
                acc.to_function(&self.cfg)
            }
            PowerCache::Numeric { powers, .. } => {
                for (j, pw) in powers.iter().enumerate().take(big_j) {
                    out = out.add(&pw.scale_by(self.spec.coeff(j)))?;
                }
                Ok(out)
            }
        }
    }
}

/// Evaluates the series at x with the default configuration.
pub fn eval_series(spec: &ConvolutionSeriesSpec, x: f64, tol: f64) -> Result<f64> {
    let cfg = ConvConfig::default().with_x_max(x.max(ConvConfig::default().x_max));
    Ok(ConvolutionSeries::new(spec.clone(), &cfg)?.evaluate(x, tol)?.value)
}

/// Closed form of l_{κ,λ}(x) for the kernels that have one.
pub fn geometric_oracle(kernel: &KernelSpec, lambda: f64, x: f64) -> Result<f64> {
    match kernel {
        KernelSpec::ExtendedH1 => Ok((lambda * x).exp()),
        KernelSpec::PowerLaw(a) => {
            let p = MLParams::new(*a, *a)?;
            Ok(x.powf(a - 1.0) * mittag_leffler(&p, lambda * x.powf(*a))?)
        }
        KernelSpec::SumPowerLaw(terms) if terms.len() == 2 && terms.iter().all(|t| t.0 == 1.0) => {
            if lambda == 0.0 {
                return Ok(PowerSeries::new(terms.clone()).eval(x));
            }
            let alphas: Vec<f64> = terms.iter().map(|t| t.1).collect();
            let zs: Vec<f64> = alphas.iter().map(|a| lambda * x.powf(*a)).collect();
            let params = MultiMLParams::new(alphas, 0.0, 2000)?;
            Ok(multinomial_ml(&params, &zs)? / (lambda * x))
        }
        other => Err(GfcError::NoOracle(other.to_string())),
    }
}

/// l_{κ,λ}(x) summed as a convolution series, optionally with its closed form.
pub fn geometric_l(kernel: &KernelSpec, lambda: f64, x: f64, with_oracle: bool) -> Result<(f64, Option<f64>)> {
    geometric_l_with(kernel, lambda, x, with_oracle, &ConvConfig::default(), 1e-14)
}

pub fn geometric_l_with(
    kernel: &KernelSpec,
    lambda: f64,
    x: f64,
    with_oracle: bool,
    cfg: &ConvConfig,
    tol: f64,
) -> Result<(f64, Option<f64>)> {
    let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(kernel.clone(), lambda)?, cfg)?;
    let value = series.evaluate(x, tol)?.value;
    let oracle = if with_oracle { Some(geometric_oracle(kernel, lambda, x)?) } else { None };
    Ok((value, oracle))
}
