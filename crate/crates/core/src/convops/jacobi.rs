//! Gauss-Jacobi rules on (0, 1) for the weight (1 - t)^a t^b.

use crate::error::{GfcError, Result};
use crate::specfun::{gamma, ln_gamma};
use nalgebra::{DMatrix, SymmetricEigen};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    /// Exponent on (1 - t).
    pub a: f64,
    /// Exponent on t.
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    /// Σ w_i g(t_i) ≈ ∫_0^1 (1 - t)^a t^b g(t) dt.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).sum()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Beta function B(a + 1, b + 1), the total mass of the weight.
pub fn weight_mass(a: f64, b: f64) -> f64 {
    match (ln_gamma(a + 1.0), ln_gamma(b + 1.0), ln_gamma(a + b + 2.0)) {
        (Ok(x), Ok(y), Ok(z)) => (x + y - z).exp(),
        _ => f64::NAN,
    }
}

/// Golub-Welsch construction from the three-term recurrence of the Jacobi
/// polynomials, mapped from [-1, 1] onto (0, 1).
pub fn jacobi_rule(a: f64, b: f64, m: usize) -> Result<JacobiRule> {
    if !(a > -1.0) || !(b > -1.0) || m == 0 {
        return Err(GfcError::InvalidParameter(format!("Jacobi rule needs a, b > -1 and m >= 1, got a = {a}, b = {b}, m = {m}")));
    }
    // On [-1, 1] the weight is (1 - s)^a (1 + s)^b; s = 2t - 1.
    let ab = a + b;
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m.saturating_sub(1)];
    for (n, d) in diag.iter_mut().enumerate() {
        let nf = n as f64;
        *d = if n == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / ((2.0 * nf + ab) * (2.0 * nf + ab + 2.0)) };
    }
    for (i, o) in off.iter_mut().enumerate() {
        let n = (i + 1) as f64;
        let beta_n = if i == 0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * n * (n + a) * (n + b) * (n + ab) / ((2.0 * n + ab).powi(2) * (2.0 * n + ab + 1.0) * (2.0 * n + ab - 1.0))
        };
        *o = beta_n.sqrt();
    }
    let mut mat = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        mat[(i, i)] = diag[i];
        if i + 1 < m {
            mat[(i, i + 1)] = off[i];
            mat[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::try_new(mat, 1e-15, 10_000).ok_or(GfcError::EigenFailure(m))?;
    let mass = weight_mass(a, b);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let s = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (1.0 + s), mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(JacobiRule { a, b, nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}

type RuleKey = (u64, u64, usize);

/// Memoized [`jacobi_rule`]; rules are shared read-only between threads.
pub fn cached_rule(a: f64, b: f64, m: usize) -> Result<Arc<JacobiRule>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<JacobiRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (a.to_bits(), b.to_bits(), m);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(jacobi_rule(a, b, m)?);
    cache.lock().expect("rule cache poisoned").insert(key, rule.clone());
    Ok(rule)
}

/// B(x, y) through the gamma function; used by tests and moment checks.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    Ok(gamma(x)? * gamma(y)? / gamma(x + y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_on_unit_interval() {
        let r = jacobi_rule(0.0, 0.0, 5).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        // degree 9 is integrated exactly
        assert!((r.integrate(|t| t.powi(9)) - 0.1).abs() < 1e-14);
        assert!(r.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
    }

    #[test]
    fn chebyshev_weight_mass_is_pi() {
        let r = jacobi_rule(-0.5, -0.5, 8).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total - PI).abs() < 1e-12);
    }

    #[test]
    fn beta_moment() {
        let r = jacobi_rule(-0.5, 0.0, 16).unwrap();
        let exact = beta_fn(0.5, 4.0).unwrap();
        assert!((r.integrate(|t| t.powi(3)) - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn weights_positive_and_sum_to_beta() {
        for &(a, b) in &[(-0.9, 0.3), (0.7, -0.6), (-0.375, -0.625), (2.0, 1.0)] {
            let r = jacobi_rule(a, b, 24).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            let total: f64 = r.weights.iter().sum();
            assert!((total - weight_mass(a, b)).abs() < 1e-10 * weight_mass(a, b));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(jacobi_rule(-1.0, 0.0, 4).is_err());
        assert!(jacobi_rule(0.0, -1.5, 4).is_err());
        assert!(jacobi_rule(0.0, 0.0, 0).is_err());
    }

    #[test]
    fn single_node_rule() {
        let r = jacobi_rule(0.5, 0.5, 1).unwrap();
        assert_eq!(r.order(), 1);
        assert!((r.nodes[0] - 0.5).abs() < 1e-15);
    }
}
