//! Special functions: gamma, two-parameter and multinomial Mittag-Leffler.
//!
//! All routines take real arguments. The Mittag-Leffler functions are summed
//! from their defining power series only, so they are meant for moderate
//! arguments (|z| up to a few tens); outside that range the series fails to
//! settle within the term budget and an error is returned.

use crate::error::{GfcError, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments above this use the logarithmic route in the series summations.
const LOG_ROUTE_ABOVE: f64 = 20.0;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1)
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Euler's gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(GfcError::Pole(x));
    }
    Ok(gamma_raw(x))
}

fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn gamma_raw(x: f64) -> f64 {
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        factorial(x as u32 - 1)
    } else if x < 0.5 {
        PI / ((PI * x).sin() * gamma_raw(1.0 - x))
    } else if x > 171.7 {
        f64::INFINITY
    } else {
        let z = x - 1.0;
        let w = z + LANCZOS_G + 0.5;
        // split the power to delay overflow near the top of the range
        let p = w.powf(0.5 * (z + 0.5));
        (2.0 * PI).sqrt() * p * (p * (-w).exp()) * lanczos_sum(z)
    }
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(GfcError::InvalidParameter(format!("ln_gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        factorial(x as u32 - 1).ln()
    } else if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x)
    } else {
        let z = x - 1.0;
        let w = z + LANCZOS_G + 0.5;
        HALF_LN_2PI + (z + 0.5) * w.ln() - w + lanczos_sum(z).ln()
    }
}

/// Reciprocal gamma 1/Γ(x), an entire function: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x > LOG_ROUTE_ABOVE {
        (-ln_gamma_pos(x)).exp()
    } else {
        1.0 / gamma_raw(x)
    }
}

/// Computes sign * exp(log_mag) / Γ(arg) without intermediate overflow.
fn scaled_rgamma(sign: f64, log_mag: f64, arg: f64) -> f64 {
    if is_nonpositive_integer(arg) || log_mag == f64::NEG_INFINITY {
        0.0
    } else if arg > LOG_ROUTE_ABOVE {
        sign * (log_mag - ln_gamma_pos(arg)).exp()
    } else {
        sign * log_mag.exp() * rgamma(arg)
    }
}

/// Neumaier's variant of compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Parameters of the two-parameter Mittag-Leffler function E_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub max_terms: usize,
    /// Absolute tolerance on the running term magnitude.
    pub tol: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_budget(alpha, beta, 1000, 1e-17)
    }

    pub fn with_budget(alpha: f64, beta: f64, max_terms: usize, tol: f64) -> Result<Self> {
        if !(alpha > 0.0) || !beta.is_finite() {
            return Err(GfcError::InvalidParameter(format!("Mittag-Leffler needs alpha > 0 and finite beta, got ({alpha}, {beta})")));
        }
        if max_terms == 0 || !(tol > 0.0) {
            return Err(GfcError::InvalidParameter("max_terms >= 1 and tol > 0 required".into()));
        }
        Ok(Self { alpha, beta, max_terms, tol })
    }
}

/// Largest term over |sum| beyond which an alternating series has lost more
/// than eight digits.
const CANCELLATION_LIMIT: f64 = 1e8;

fn settle(acc: &CompensatedSum, peak: f64) -> Result<f64> {
    let sum = acc.value();
    if peak > CANCELLATION_LIMIT * sum.abs() {
        return Err(GfcError::Cancellation { peak, sum });
    }
    Ok(sum)
}

/// E_{α,β}(z) = Σ_k z^k / Γ(αk + β), summed until the terms fall below `tol`
/// while decreasing.
///
/// Fails with [`GfcError::Cancellation`] when negative z makes the terms
/// grow so far beyond the result that fewer than eight digits survive.
pub fn mittag_leffler(params: &MLParams, z: f64) -> Result<f64> {
    let MLParams { alpha, beta, max_terms, tol } = *params;
    let ln_abs_z = z.abs().ln();
    let mut acc = CompensatedSum::new();
    let mut peak = 0.0_f64;
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    for k in 0..max_terms {
        let arg = alpha * k as f64 + beta;
        let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let log_mag = if k == 0 { 0.0 } else { k as f64 * ln_abs_z };
        let term = scaled_rgamma(sign, log_mag, arg);
        acc.add(term);
        last = term.abs();
        peak = peak.max(last);
        // past the minimum of Γ the terms are eventually monotone
        if arg > 1.5 && last < tol && last <= prev {
            return settle(&acc, peak);
        }
        prev = last;
    }
    Err(GfcError::NotConverged { terms: max_terms, last_term: last })
}

/// Parameters of the multinomial Mittag-Leffler function E_{(α_1..α_m),β}.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMLParams {
    pub alphas: Vec<f64>,
    pub beta: f64,
    pub max_total_degree: usize,
    /// Relative tolerance on the magnitude of one total-degree block.
    pub tol: f64,
}

impl MultiMLParams {
    pub fn new(alphas: Vec<f64>, beta: f64, max_total_degree: usize) -> Result<Self> {
        if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0)) {
            return Err(GfcError::InvalidParameter("multinomial Mittag-Leffler needs at least one alpha, all positive".into()));
        }
        if max_total_degree == 0 || !beta.is_finite() {
            return Err(GfcError::InvalidParameter("max_total_degree >= 1 and finite beta required".into()));
        }
        Ok(Self { alphas, beta, max_total_degree, tol: 1e-17 })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Visits every composition (l_1, .., l_m) of `total` into `m` non-negative parts.
fn for_each_composition(m: usize, total: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(parts: &mut Vec<usize>, m: usize, left: usize, f: &mut impl FnMut(&[usize])) {
        if parts.len() + 1 == m {
            parts.push(left);
            f(parts);
            parts.pop();
            return;
        }
        for l in 0..=left {
            parts.push(l);
            rec(parts, m, left - l, f);
            parts.pop();
        }
    }
    let mut parts = Vec::with_capacity(m);
    rec(&mut parts, m, total, f);
}

/// Multinomial Mittag-Leffler function
/// Σ_j Σ_{l_1+..+l_m=j} j!/(l_1!..l_m!) Π z_i^{l_i} / Γ(β + Σ α_i l_i).
pub fn multinomial_ml(params: &MultiMLParams, zs: &[f64]) -> Result<f64> {
    let m = params.alphas.len();
    if zs.len() != m {
        return Err(GfcError::ArityMismatch { expected: m, got: zs.len() });
    }
    let ln_abs: Vec<f64> = zs.iter().map(|z| z.abs().ln()).collect();
    let min_alpha = params.alphas.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut acc = CompensatedSum::new();
    let mut peak = 0.0_f64;
    let mut prev_block = f64::INFINITY;
    let mut last_block = f64::INFINITY;
    for j in 0..=params.max_total_degree {
        let ln_j_fact = ln_gamma_pos(j as f64 + 1.0);
        let mut block = CompensatedSum::new();
        let mut block_mag = 0.0;
        for_each_composition(m, j, &mut |ls| {
            let mut log_mag = ln_j_fact;
            let mut sign = 1.0;
            let mut arg = params.beta;
            for i in 0..m {
                let l = ls[i];
                if l == 0 {
                    continue;
                }
                log_mag += l as f64 * ln_abs[i] - ln_gamma_pos(l as f64 + 1.0);
                if zs[i] < 0.0 && l % 2 == 1 {
                    sign = -sign;
                }
                arg += params.alphas[i] * l as f64;
            }
            let term = scaled_rgamma(sign, log_mag, arg);
            block.add(term);
            block_mag += term.abs();
        });
        acc.add(block.value());
        last_block = block_mag;
        peak = peak.max(block_mag);
        let settled = params.beta + min_alpha * j as f64 > 1.5;
        if j >= 1 && settled && block_mag <= params.tol * acc.value().abs().max(1.0) && block_mag <= prev_block {
            return settle(&acc, peak);
        }
        prev_block = block_mag;
    }
    Err(GfcError::NotConverged { terms: params.max_total_degree, last_term: last_block })
}
