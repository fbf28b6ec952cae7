//! Chebyshev series on an interval [0, X].
//!
//! The series is stored by its coefficients in T_k(s), s = 2x/X - 1. Values
//! are sampled at Chebyshev points of the first kind, which never touch the
//! endpoints, so closures that are singular at x = 0 can still be sampled.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
    x_max: f64,
}

/// First-kind Chebyshev points mapped to [0, x_max], `degree + 1` of them.
pub fn cheb_nodes(degree: usize, x_max: f64) -> Vec<f64> {
    let n = degree + 1;
    (0..n)
        .map(|j| {
            let s = (PI * (j as f64 + 0.5) / n as f64).cos();
            0.5 * x_max * (1.0 + s)
        })
        .collect()
}

impl ChebSeries {
    pub fn zero(x_max: f64) -> Self {
        Self { coeffs: vec![0.0], x_max }
    }

    pub fn constant(c: f64, x_max: f64) -> Self {
        Self { coeffs: vec![c], x_max }
    }

    pub fn from_coeffs(coeffs: Vec<f64>, x_max: f64) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self { coeffs, x_max }
    }

    /// Interpolates values given at `cheb_nodes(values.len() - 1, x_max)`.
    pub fn from_node_values(values: &[f64], x_max: f64) -> Self {
        let n = values.len();
        let mut coeffs = vec![0.0; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, v) in values.iter().enumerate() {
                // reduce k (2j + 1) modulo 4n so the cosine argument stays small
                let m = (k * (2 * j + 1)) % (4 * n);
                acc += v * (PI * m as f64 / (2 * n) as f64).cos();
            }
            *c = 2.0 * acc / n as f64;
        }
        coeffs[0] *= 0.5;
        // trailing coefficients at rounding level only add noise to derivatives
        let top = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= 4.0 * f64::EPSILON * top) {
            coeffs.pop();
        }
        Self { coeffs, x_max }
    }

    pub fn interpolate(f: impl Fn(f64) -> f64, degree: usize, x_max: f64) -> Self {
        let values: Vec<f64> = cheb_nodes(degree, x_max).into_iter().map(f).collect();
        Self::from_node_values(&values, x_max)
    }

    /// Σ c x^k for (c, k) pairs, built exactly by Horner's rule in the
    /// coefficient basis.
    pub fn from_monomials(monomials: &[(f64, usize)], x_max: f64) -> Self {
        let top = monomials.iter().map(|m| m.1).max().unwrap_or(0);
        let mut by_power = vec![0.0; top + 1];
        for &(c, k) in monomials {
            by_power[k] += c;
        }
        let mut acc = Self::constant(by_power[top], x_max);
        for k in (0..top).rev() {
            acc = acc.mul_x();
            acc.coeffs[0] += by_power[k];
        }
        acc
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let s = 2.0 * x / self.x_max - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + self.coeffs[0]
    }

    /// Upper bound of the sup norm on [0, X]: the coefficient 1-norm.
    pub fn norm_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n == 1 {
            return Self::zero(self.x_max);
        }
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * self.coeffs[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        let scale = 2.0 / self.x_max;
        Self::from_coeffs(d.into_iter().map(|c| c * scale).collect(), self.x_max)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect(), self.x_max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + other.coeffs.get(k).copied().unwrap_or(0.0)).collect();
        Self::from_coeffs(coeffs, self.x_max)
    }

    /// Exact product with x; the degree grows by one.
    pub fn mul_x(&self) -> Self {
        let n = self.coeffs.len();
        // (1 + s) * sum c_k T_k, using s T_0 = T_1 and s T_k = (T_{k+1} + T_{k-1}) / 2
        let mut out = vec![0.0; n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
            if k == 0 {
                out[1] += c;
            } else {
                out[k + 1] += 0.5 * c;
                out[k - 1] += 0.5 * c;
            }
        }
        let half = 0.5 * self.x_max;
        Self::from_coeffs(out.into_iter().map(|c| c * half).collect(), self.x_max)
    }

    /// Quotient (H(x) - H(0)) / x, computed exactly in the coefficient basis.
    ///
    /// Returns the quotient together with the dropped value H(0).
    pub fn div_x(&self) -> (Self, f64) {
        let h0 = self.eval(0.0);
        let n = self.coeffs.len();
        if n == 1 {
            return (Self::zero(self.x_max), h0);
        }
        let mut c = self.coeffs.clone();
        c[0] -= h0;
        // solve (1 + s) Q = c from the top coefficient down
        let mut q = vec![0.0; n + 1];
        for k in (1..n).rev() {
            let qk = q[k];
            let qk1 = q[k + 1];
            q[k - 1] = if k == 1 { c[1] - qk - 0.5 * qk1 } else { 2.0 * (c[k] - qk) - qk1 };
        }
        q.truncate(n - 1);
        let scale = 2.0 / self.x_max;
        (Self::from_coeffs(q.into_iter().map(|v| v * scale).collect(), self.x_max), h0)
    }

    /// Resamples onto a different degree.
    pub fn resample(&self, degree: usize) -> Self {
        Self::interpolate(|x| self.eval(x), degree, self.x_max)
    }
}
