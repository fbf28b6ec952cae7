use super::chebyshev::{cheb_nodes, ChebSeries};
use super::function::{ConvConfig, SingularFunction, Term, EXPONENT_EPS};
use super::jacobi::{cached_rule, weight_mass};
use crate::error::{GfcError, Result};
use crate::kernels::{resolve, KernelSpec};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorVariant {
    Gfi,
    GfdRl,
    GfdCaputo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorForm {
    /// n-fold composition of the single-fold operator.
    Sequential,
    /// d^n/dx^n (k^{<n>} * f) for RL, k^{<n>} * f^{(n)} for Caputo.
    NfoldAlt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorRequest {
    pub kernel: KernelSpec,
    pub fold_n: usize,
    pub variant: OperatorVariant,
    pub form: OperatorForm,
}

impl OperatorRequest {
    pub fn new(kernel: KernelSpec, fold_n: usize, variant: OperatorVariant, form: OperatorForm) -> Self {
        Self { kernel, fold_n, variant, form }
    }

    pub fn rl(kernel: KernelSpec, fold_n: usize) -> Self {
        Self::new(kernel, fold_n, OperatorVariant::GfdRl, OperatorForm::Sequential)
    }

    pub fn caputo(kernel: KernelSpec, fold_n: usize) -> Self {
        Self::new(kernel, fold_n, OperatorVariant::GfdCaputo, OperatorForm::Sequential)
    }

    pub fn with_form(mut self, form: OperatorForm) -> Self {
        self.form = form;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.fold_n == 0 {
            return Err(GfcError::InvalidParameter("fold_n must be >= 1".into()));
        }
        Ok(())
    }
}

/// Regular factor of x^{p_f + p_g - 1} ∫_0^1 (1-t)^{p_f-1} t^{p_g-1} H_f(x(1-t)) H_g(xt) dt
/// sampled at the Chebyshev nodes.
fn pair_values(tf: &Term, tg: &Term, nodes: &[f64], order: usize) -> Result<Vec<f64>> {
    let rule = cached_rule(tf.p - 1.0, tg.p - 1.0, order)?;
    Ok(nodes.iter().map(|&x| rule.integrate(|t| tf.regular.eval(x * (1.0 - t)) * tg.regular.eval(x * t))).collect())
}

/// Laplace convolution (f * g)(x) = ∫_0^x f(x - ξ) g(ξ) dξ.
///
/// Every pair of terms is reduced to a Gauss-Jacobi integral whose weight
/// carries both endpoint singularities, so only the smooth factors are
/// sampled.
pub fn convolve(f: &SingularFunction, g: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    cfg.validate()?;
    f.check_domain(g)?;
    let x_max = f.x_max();
    let nodes = cheb_nodes(cfg.degree, x_max);
    let pairs: Vec<(&Term, &Term)> = f.terms().iter().flat_map(|a| g.terms().iter().map(move |b| (a, b))).collect();
    let results: Vec<Result<(Term, f64)>> = pairs
        .par_iter()
        .map(|(tf, tg)| {
            let fine = pair_values(tf, tg, &nodes, 2 * cfg.quad_order)?;
            let mut delta = 0.0;
            if cfg.check_quadrature {
                let coarse = pair_values(tf, tg, &nodes, cfg.quad_order)?;
                // relative to a bound on the integral, since cancellation can make the values tiny
                let bound = tf.regular.norm_bound() * tg.regular.norm_bound() * weight_mass(tf.p - 1.0, tg.p - 1.0);
                let scale = fine.iter().fold(bound, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
                delta = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
                if delta > cfg.quad_tol {
                    return Err(GfcError::QuadratureNotConverged { delta, tol: cfg.quad_tol });
                }
            }
            let series = ChebSeries::from_node_values(&fine, x_max);
            let s = tf.p + tg.p;
            let term = if s > 1.0 + EXPONENT_EPS {
                Term { p: s - 1.0, regular: series.mul_x() }
            } else if s >= 1.0 - EXPONENT_EPS {
                Term { p: 1.0, regular: series }
            } else {
                Term { p: s, regular: series }
            };
            Ok((term, delta))
        })
        .collect();
    let mut terms = Vec::with_capacity(results.len());
    let mut worst = f.achieved_tol().max(g.achieved_tol());
    for r in results {
        let (t, delta) = r?;
        worst = worst.max(delta);
        terms.push(t);
    }
    Ok(SingularFunction::from_terms(terms, x_max).pruned(cfg.prune_tol).with_tol(worst))
}

/// κ^{<n>}, the n-fold convolution power.
pub fn conv_power(kappa: &KernelSpec, n: usize, cfg: &ConvConfig) -> Result<SingularFunction> {
    if n == 0 {
        return Err(GfcError::DistributionalKernel(format!("{kappa}^<0>")));
    }
    match kappa {
        KernelSpec::PowerLaw(a) => SingularFunction::power(n as f64 * a, cfg),
        KernelSpec::ExtendedH1 => SingularFunction::power(n as f64, cfg),
        KernelSpec::ExtendedH0 => Err(GfcError::DistributionalKernel("h0".into())),
        other => {
            let base = resolve(other, cfg)?;
            let mut acc = base.clone();
            for _ in 1..n {
                acc = convolve(&acc, &base, cfg)?;
            }
            Ok(acc)
        }
    }
}

/// The n-fold general fractional integral I_κ^{<n>} f = κ^{<n>} * f.
pub fn gfi(kernel: &KernelSpec, n: usize, f: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    if n == 0 {
        return Err(GfcError::InvalidParameter("fold count must be >= 1".into()));
    }
    match kernel {
        KernelSpec::ExtendedH0 => Ok(f.clone()),
        _ => convolve(&conv_power(kernel, n, cfg)?, f, cfg),
    }
}

/// (I_κ^{<n>} f)(x).
pub fn apply_gfi(kernel: &KernelSpec, n: usize, f: &SingularFunction, x: f64) -> Result<f64> {
    apply_gfi_with(kernel, n, f, x, &ConvConfig::default().with_x_max(f.x_max()))
}

pub fn apply_gfi_with(kernel: &KernelSpec, n: usize, f: &SingularFunction, x: f64, cfg: &ConvConfig) -> Result<f64> {
    gfi(kernel, n, f, cfg)?.eval(x)
}

fn max_gap(a: &SingularFunction, b: &SingularFunction) -> f64 {
    let x_max = a.x_max();
    let xs: Vec<f64> = (0..64).map(|i| x_max * (0.025 + 0.975 * i as f64 / 63.0)).collect();
    let scale = xs.iter().map(|&x| a.eval_unchecked(x).abs()).fold(1.0, f64::max);
    xs.iter().map(|&x| (a.eval_unchecked(x) - b.eval_unchecked(x)).abs()).fold(0.0, f64::max) / scale
}

fn caputo_derivative(f: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    if !f.is_continuous_at_zero(cfg.zero_tol) {
        return Err(GfcError::CaputoRequiresContinuity);
    }
    f.derivative(cfg.zero_tol).map_err(|e| match e {
        GfcError::NonIntegrable { .. } => GfcError::CaputoRequiresContinuity,
        other => other,
    })
}

/// d/dx (k * f), checked against the same computation at a higher degree.
fn rl_single(k: &KernelSpec, f: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    if matches!(k, KernelSpec::ExtendedH0) {
        return f.derivative(cfg.zero_tol);
    }
    let kernel = resolve(k, cfg)?;
    let d = convolve(&kernel, f, cfg)?.derivative(cfg.zero_tol)?;
    if cfg.check_derivative {
        let fine_cfg = cfg.with_degree(cfg.degree + 16);
        let fine = convolve(&resolve(k, &fine_cfg)?, f, &fine_cfg)?.derivative(cfg.zero_tol)?;
        let delta = max_gap(&fine, &d);
        if delta > cfg.deriv_tol {
            return Err(GfcError::DifferentiationUnstable { delta, tol: cfg.deriv_tol });
        }
        return Ok(d.with_tol(delta));
    }
    Ok(d)
}

/// k * f'.
fn caputo_single(k: &KernelSpec, f: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    let df = caputo_derivative(f, cfg)?;
    match k {
        KernelSpec::ExtendedH0 => Ok(df),
        _ => convolve(&resolve(k, cfg)?, &df, cfg),
    }
}

/// Degree used for fold `i` (1-based) of a sequential operator: 48, 64, 80
/// for the default degree, then flat.
pub fn fold_config(cfg: &ConvConfig, fold: usize) -> ConvConfig {
    cfg.with_degree(cfg.degree + 16 * (fold.max(1) - 1).min(2))
}

/// [f, D f, D^{<2>} f, ..] for a sequential RL or Caputo derivative, up to
/// `n` folds. Stops at the first fold that fails and returns its error next
/// to the folds computed so far.
pub fn derivative_chain(
    kernel: &KernelSpec,
    variant: OperatorVariant,
    f: &SingularFunction,
    n: usize,
    cfg: &ConvConfig,
) -> (Vec<SingularFunction>, Option<GfcError>) {
    let mut chain = vec![f.clone()];
    for fold in 1..=n {
        let fc = fold_config(cfg, fold);
        let prev = chain.last().expect("non-empty");
        let next = match variant {
            OperatorVariant::GfdRl => rl_single(kernel, prev, &fc),
            OperatorVariant::GfdCaputo => caputo_single(kernel, prev, &fc),
            OperatorVariant::Gfi => gfi(kernel, 1, prev, &fc),
        };
        match next {
            Ok(g) => chain.push(g),
            Err(e) => return (chain, Some(e)),
        }
    }
    (chain, None)
}

/// General fractional derivative as a function on [0, X].
pub fn gfd(req: &OperatorRequest, f: &SingularFunction, cfg: &ConvConfig) -> Result<SingularFunction> {
    req.validate()?;
    cfg.validate()?;
    let n = req.fold_n;
    match (req.variant, req.form) {
        (OperatorVariant::Gfi, _) => gfi(&req.kernel, n, f, cfg),
        (variant, OperatorForm::Sequential) => match derivative_chain(&req.kernel, variant, f, n, cfg) {
            (_, Some(e)) => Err(e),
            (mut chain, None) => Ok(chain.pop().expect("non-empty")),
        },
        (OperatorVariant::GfdRl, OperatorForm::NfoldAlt) => {
            let hi = fold_config(cfg, n);
            let mut acc = match &req.kernel {
                KernelSpec::ExtendedH0 => f.clone(),
                k => convolve(&conv_power(k, n, &hi)?, f, &hi)?,
            };
            for _ in 0..n {
                acc = acc.derivative(cfg.zero_tol)?;
            }
            Ok(acc)
        }
        (OperatorVariant::GfdCaputo, OperatorForm::NfoldAlt) => {
            let hi = fold_config(cfg, n);
            let mut df = f.clone();
            for _ in 0..n {
                df = caputo_derivative(&df, &hi)?;
            }
            match &req.kernel {
                KernelSpec::ExtendedH0 => Ok(df),
                k => convolve(&conv_power(k, n, &hi)?, &df, &hi),
            }
        }
    }
}

/// (D f)(x) for the operator described by `req`.
pub fn apply_gfd(req: &OperatorRequest, f: &SingularFunction, x: f64) -> Result<f64> {
    apply_gfd_with(req, f, x, &ConvConfig::default().with_x_max(f.x_max()))
}

pub fn apply_gfd_with(req: &OperatorRequest, f: &SingularFunction, x: f64, cfg: &ConvConfig) -> Result<f64> {
    gfd(req, f, cfg)?.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, rgamma};
    use std::f64::consts::PI;

    fn cfg() -> ConvConfig {
        ConvConfig::default()
    }

    fn h(beta: f64) -> SingularFunction {
        SingularFunction::power(beta, &cfg()).unwrap()
    }

    #[test]
    fn half_half_is_one() {
        let c = convolve(&h(0.5), &h(0.5), &cfg()).unwrap();
        assert!((c.eval(0.7).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_star_one_is_x() {
        let c = convolve(&h(1.0), &h(1.0), &cfg()).unwrap();
        assert!((c.eval(2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn power_rule_at_one() {
        let c = convolve(&h(0.3), &h(0.9), &cfg()).unwrap();
        // 1/Γ(1.2), high-precision reference
        assert!((c.eval(1.0).unwrap() - 1.089_124_421_058_336_3).abs() < 1e-12);
    }

    #[test]
    fn convolution_with_smooth_factor() {
        // (h_1 * e^x)(x) = e^x - 1
        let e = SingularFunction::exp(1.0, &cfg()).unwrap();
        let c = convolve(&h(1.0), &e, &cfg()).unwrap();
        for &x in &[0.1, 1.0, 2.0] {
            assert!((c.eval(x).unwrap() - (x.exp() - 1.0)).abs() < 1e-13);
        }
        // (h_{0.5} * h_{0.5}·x^0...) mixes classes: h_{0.5} * (h_{0.5} + h_1) = h_1 + h_{1.5}
        let f = SingularFunction::from_power_terms(&[(1.0, 0.5), (1.0, 1.0)], &cfg()).unwrap();
        let c = convolve(&h(0.5), &f, &cfg()).unwrap();
        let x: f64 = 1.3;
        assert!((c.eval(x).unwrap() - (1.0 + x.sqrt() * rgamma(1.5))).abs() < 1e-13);
    }

    #[test]
    fn powers_of_kernels() {
        let p = conv_power(&KernelSpec::PowerLaw(0.5), 2, &cfg()).unwrap();
        assert!((p.eval(0.4).unwrap() - 1.0).abs() < 1e-15);
        let p = conv_power(&KernelSpec::PowerLaw(0.4), 3, &cfg()).unwrap();
        assert!((p.eval(1.0).unwrap() - 1.0 / gamma(1.2).unwrap()).abs() < 1e-14);
        assert!(matches!(conv_power(&KernelSpec::PowerLaw(0.4), 0, &cfg()), Err(GfcError::DistributionalKernel(_))));
        // numeric route agrees with the exponent rule
        let sum = KernelSpec::SumPowerLaw(vec![(1.0, 0.4)]);
        let p = conv_power(&sum, 3, &cfg()).unwrap();
        assert!((p.eval(1.0).unwrap() - 1.0 / gamma(1.2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn gfi_values() {
        let one = SingularFunction::constant(1.0, 2.0);
        let v = apply_gfi(&KernelSpec::PowerLaw(0.5), 1, &one, 1.0).unwrap();
        assert!((v - 2.0 / PI.sqrt()).abs() < 1e-13);
        let v = apply_gfi(&KernelSpec::PowerLaw(0.5), 2, &one, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        let f = SingularFunction::exp(1.0, &cfg()).unwrap();
        let v = apply_gfi(&KernelSpec::ExtendedH0, 1, &f, 0.8).unwrap();
        assert!((v - 0.8_f64.exp()).abs() < 1e-14);
        let v = apply_gfi(&KernelSpec::ExtendedH1, 1, &f, 0.8).unwrap();
        assert!((v - (0.8_f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn gfd_values() {
        let one = SingularFunction::constant(1.0, 2.0);
        let rl = OperatorRequest::rl(KernelSpec::PowerLaw(0.5), 1);
        let v = apply_gfd(&rl, &one, 1.0).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-10);
        let c = OperatorRequest::caputo(KernelSpec::PowerLaw(0.5), 1);
        for &x in &[0.1, 1.0, 2.0] {
            assert!(apply_gfd(&c, &one, x).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn extended_kernel_derivatives() {
        let cfg = cfg();
        let f = SingularFunction::from_power_terms(&[(3.0, 1.0), (1.0, 2.0)], &cfg).unwrap();
        let x = 2.0;
        let rl_h0 = apply_gfd(&OperatorRequest::rl(KernelSpec::ExtendedH0, 1), &f, x).unwrap();
        assert!((rl_h0 - 1.0).abs() < 1e-12);
        let c_h0 = apply_gfd(&OperatorRequest::caputo(KernelSpec::ExtendedH0, 1), &f, x).unwrap();
        assert!((c_h0 - 1.0).abs() < 1e-12);
        let rl_h1 = apply_gfd(&OperatorRequest::rl(KernelSpec::ExtendedH1, 1), &f, x).unwrap();
        assert!((rl_h1 - 5.0).abs() < 1e-10);
        // ∫_0^x f' = f(x) - f(0) = 2
        let c_h1 = apply_gfd(&OperatorRequest::caputo(KernelSpec::ExtendedH1, 1), &f, x).unwrap();
        assert!((c_h1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn caputo_rejects_singular_functions() {
        let f = h(0.7);
        let req = OperatorRequest::caputo(KernelSpec::PowerLaw(0.5), 1);
        assert!(matches!(apply_gfd(&req, &f, 1.0), Err(GfcError::CaputoRequiresContinuity)));
    }

    #[test]
    fn sequential_and_alternate_forms_agree() {
        let cfg = cfg();
        let rl_f = SingularFunction::from_power_terms(&[(1.0, 2.3), (2.0, 1.0), (-1.0, 1.7)], &cfg).unwrap();
        let caputo_f = SingularFunction::from_power_terms(&[(1.0, 2.3), (2.0, 1.0), (1.0, 3.1)], &cfg).unwrap();
        for (variant, f) in [(OperatorVariant::GfdRl, &rl_f), (OperatorVariant::GfdCaputo, &caputo_f)] {
            let seq = OperatorRequest::new(KernelSpec::PowerLaw(0.6), 2, variant, OperatorForm::Sequential);
            let alt = seq.clone().with_form(OperatorForm::NfoldAlt);
            let a = gfd(&seq, f, &cfg).unwrap();
            let b = gfd(&alt, f, &cfg).unwrap();
            for &x in &[0.2, 1.0, 1.9] {
                assert!((a.eval(x).unwrap() - b.eval(x).unwrap()).abs() < 1e-8, "{variant:?} x={x}");
            }
        }
    }

    #[test]
    fn zero_fold_rejected() {
        let one = SingularFunction::constant(1.0, 2.0);
        let req = OperatorRequest::rl(KernelSpec::PowerLaw(0.5), 0);
        assert!(apply_gfd(&req, &one, 1.0).is_err());
    }
}
