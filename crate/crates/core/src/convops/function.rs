use super::chebyshev::ChebSeries;
use crate::error::{GfcError, Result};
use crate::specfun::rgamma;

/// Two exponents closer than this belong to the same class.
pub(crate) const EXPONENT_EPS: f64 = 1e-10;

/// Numerical settings shared by every operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvConfig {
    /// Right end of the working interval [0, X].
    pub x_max: f64,
    /// Degree of the Chebyshev interpolants of regular factors.
    pub degree: usize,
    /// Order of the Gauss-Jacobi rule used in convolutions.
    pub quad_order: usize,
    /// Re-run every convolution with twice the order and compare.
    pub check_quadrature: bool,
    pub quad_tol: f64,
    /// Cross-validate RL derivatives at `degree` and `degree + 16`.
    pub check_derivative: bool,
    pub deriv_tol: f64,
    /// Relative size below which a regular factor counts as vanishing at 0.
    pub zero_tol: f64,
    /// Relative size below which a whole term is dropped.
    pub prune_tol: f64,
}

impl Default for ConvConfig {
    fn default() -> Self {
        Self {
            x_max: 2.0,
            degree: 48,
            quad_order: 32,
            check_quadrature: true,
            quad_tol: 1e-10,
            check_derivative: true,
            deriv_tol: 1e-6,
            zero_tol: 1e-8,
            prune_tol: 1e-15,
        }
    }
}

impl ConvConfig {
    pub fn with_x_max(mut self, x_max: f64) -> Self {
        self.x_max = x_max;
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_quad_order(mut self, quad_order: usize) -> Self {
        self.quad_order = quad_order;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > 0.0) || !self.x_max.is_finite() {
            return Err(GfcError::InvalidParameter(format!("x_max must be positive, got {}", self.x_max)));
        }
        if self.degree == 0 || self.quad_order == 0 {
            return Err(GfcError::InvalidParameter("degree and quad_order must be >= 1".into()));
        }
        Ok(())
    }
}

/// One summand x^{p-1} H(x) with p in (0, 1] and H smooth on [0, X].
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub p: f64,
    pub regular: ChebSeries,
}

impl Term {
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.regular.eval(x);
        if self.p == 1.0 {
            h
        } else {
            x.powf(self.p - 1.0) * h
        }
    }
}

/// A member of C_{-1}(0, X]: f(x) = Σ_i x^{p_i - 1} H_i(x).
///
/// Each H_i is a Chebyshev interpolant and the exponents p_i lie in (0, 1]
/// and are pairwise distinct. Surplus integer powers of x live inside the
/// H_i, so the representation stays smooth under convolution. Collapsing
/// the sum onto a single exponent gives the usual form x^{p-1} g(x) with
/// p = min p_i, see [`SingularFunction::exponent_p`] and
/// [`SingularFunction::regular`].
#[derive(Debug, Clone, PartialEq)]
pub struct SingularFunction {
    terms: Vec<Term>,
    x_max: f64,
    achieved_tol: f64,
}

/// Maps a positive exponent onto its class in (0, 1] and the integer power
/// of x that has to be moved into the regular factor.
pub(crate) fn split_exponent(beta: f64) -> (f64, i32) {
    let rounded = beta.round();
    if (beta - rounded).abs() < 1e-12 && rounded >= 1.0 {
        return (1.0, rounded as i32 - 1);
    }
    let shift = beta.ceil() - 1.0;
    (beta - shift, shift as i32)
}

impl SingularFunction {
    pub fn zero(x_max: f64) -> Self {
        Self { terms: Vec::new(), x_max, achieved_tol: 0.0 }
    }

    pub fn constant(c: f64, x_max: f64) -> Self {
        Self::from_terms(vec![Term { p: 1.0, regular: ChebSeries::constant(c, x_max) }], x_max)
    }

    pub(crate) fn from_terms(terms: Vec<Term>, x_max: f64) -> Self {
        let mut f = Self { terms: Vec::new(), x_max, achieved_tol: 0.0 };
        for t in terms {
            f.push_term(t);
        }
        f
    }

    pub(crate) fn with_tol(mut self, tol: f64) -> Self {
        self.achieved_tol = self.achieved_tol.max(tol);
        self
    }

    fn push_term(&mut self, term: Term) {
        if let Some(existing) = self.terms.iter_mut().find(|t| (t.p - term.p).abs() < EXPONENT_EPS) {
            existing.regular = existing.regular.add(&term.regular);
        } else {
            self.terms.push(term);
            self.terms.sort_by(|a, b| a.p.total_cmp(&b.p));
        }
    }

    /// x^{p-1} g(x) for a smooth closure g, interpolated at `degree`.
    pub fn from_regular(p: f64, g: impl Fn(f64) -> f64, cfg: &ConvConfig) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(GfcError::InvalidParameter(format!("exponent p must lie in (0, 1], got {p}")));
        }
        let regular = ChebSeries::interpolate(g, cfg.degree, cfg.x_max);
        Ok(Self::from_terms(vec![Term { p, regular }], cfg.x_max))
    }

    /// The power function h_β(x) = x^{β-1} / Γ(β).
    pub fn power(beta: f64, cfg: &ConvConfig) -> Result<Self> {
        Self::from_power_terms(&[(1.0, beta)], cfg)
    }

    /// Σ c_i h_{β_i}(x) for finitely many positive β_i.
    pub fn from_power_terms(terms: &[(f64, f64)], cfg: &ConvConfig) -> Result<Self> {
        let mut classes: Vec<(f64, Vec<(f64, i32)>)> = Vec::new();
        for &(c, beta) in terms {
            if !(beta > 0.0) || !beta.is_finite() {
                return Err(GfcError::InvalidParameter(format!("power exponent must be positive, got {beta}")));
            }
            if c == 0.0 {
                continue;
            }
            let (p, shift) = split_exponent(beta);
            let scaled = c * rgamma(beta);
            match classes.iter_mut().find(|(q, _)| (q - p).abs() < EXPONENT_EPS) {
                Some((_, list)) => list.push((scaled, shift)),
                None => classes.push((p, vec![(scaled, shift)])),
            }
        }
        let mut out = Self::zero(cfg.x_max);
        for (p, monomials) in classes {
            let monomials: Vec<(f64, usize)> = monomials.into_iter().map(|(c, k)| (c, k as usize)).collect();
            let regular = ChebSeries::from_monomials(&monomials, cfg.x_max);
            out.push_term(Term { p, regular });
        }
        Ok(out)
    }

    /// e^{λx}.
    pub fn exp(lambda: f64, cfg: &ConvConfig) -> Result<Self> {
        Self::from_regular(1.0, |x| (lambda * x).exp(), cfg)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Worst tolerance recorded by the operations that produced this function.
    pub fn achieved_tol(&self) -> f64 {
        self.achieved_tol
    }

    /// Leading exponent p in (0, 1] of the collapsed form x^{p-1} g(x).
    pub fn exponent_p(&self) -> f64 {
        self.terms.iter().map(|t| t.p).fold(1.0, f64::min)
    }

    /// The continuous factor g(x) = x^{1-p} f(x).
    pub fn regular(&self, x: f64) -> f64 {
        let p = self.exponent_p();
        self.terms
            .iter()
            .map(|t| {
                let h = t.regular.eval(x);
                if (t.p - p).abs() < EXPONENT_EPS {
                    h
                } else {
                    x.powf(t.p - p) * h
                }
            })
            .sum()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || x > self.x_max * (1.0 + 1e-12) {
            return Err(GfcError::OutOfDomain { x, x_max: self.x_max });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Largest coefficient 1-norm among the regular factors.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.regular.norm_bound()).fold(0.0, f64::max)
    }

    pub fn check_domain(&self, other: &Self) -> Result<()> {
        if (self.x_max - other.x_max).abs() > 1e-12 * self.x_max {
            return Err(GfcError::DomainMismatch(self.x_max, other.x_max));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for t in &other.terms {
            out.push_term(t.clone());
        }
        out.achieved_tol = self.achieved_tol.max(other.achieved_tol);
        Ok(out)
    }

    pub fn scale_by(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|t| Term { p: t.p, regular: t.regular.scale(factor) }).collect();
        Self { terms, x_max: self.x_max, achieved_tol: self.achieved_tol }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_by(-1.0))
    }

    /// Drops terms that are negligible next to the largest one.
    pub fn pruned(mut self, rel_tol: f64) -> Self {
        let scale = self.scale();
        self.terms.retain(|t| t.regular.norm_bound() > rel_tol * scale && t.regular.norm_bound() > 0.0);
        self
    }

    /// The function is continuous at 0 iff every singular class vanishes there.
    pub fn is_continuous_at_zero(&self, zero_tol: f64) -> bool {
        let scale = self.scale().max(f64::MIN_POSITIVE);
        self.terms.iter().filter(|t| t.p < 1.0).all(|t| t.regular.eval(0.0).abs() <= zero_tol * scale)
    }

    /// lim_{x -> 0+} f(x) read off the representation, or `None` when a
    /// singular class does not vanish at the origin.
    pub fn limit_at_zero(&self, zero_tol: f64) -> Option<f64> {
        if !self.is_continuous_at_zero(zero_tol) {
            return None;
        }
        Some(self.terms.iter().filter(|t| t.p == 1.0).map(|t| t.regular.eval(0.0)).sum())
    }

    /// Exact derivative of the power factors, spectral derivative of the
    /// regular factors.
    ///
    /// For a class p < 1 the derivative is x^{p-1} [(p - 1) H(x)/x + H'(x)],
    /// which requires H(0) = 0; otherwise the result leaves C_{-1}.
    pub fn derivative(&self, zero_tol: f64) -> Result<Self> {
        let scale = self.scale().max(f64::MIN_POSITIVE);
        let mut out = Self::zero(self.x_max);
        let mut dropped = 0.0_f64;
        for t in &self.terms {
            let dh = t.regular.derivative();
            if t.p == 1.0 {
                out.push_term(Term { p: 1.0, regular: dh });
                continue;
            }
            let (quotient, h0) = t.regular.div_x();
            if h0.abs() > zero_tol * scale {
                return Err(GfcError::NonIntegrable { exponent: t.p - 2.0 });
            }
            dropped = dropped.max(h0.abs() / scale);
            out.push_term(Term { p: t.p, regular: quotient.scale(t.p - 1.0).add(&dh) });
        }
        out.achieved_tol = self.achieved_tol.max(dropped);
        Ok(out)
    }

    /// Resamples every regular factor onto `degree`.
    pub fn resampled(&self, degree: usize) -> Self {
        let terms = self.terms.iter().map(|t| Term { p: t.p, regular: t.regular.resample(degree) }).collect();
        Self { terms, x_max: self.x_max, achieved_tol: self.achieved_tol }
    }
}
