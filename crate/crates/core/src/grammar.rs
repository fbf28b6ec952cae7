//! Text forms of kernels and test functions.
//!
//! Kernels: `h:<b>`, `sum:<c1>*h:<b1>+<c2>*h:<b2>+..`, `mlk:<a>,<b>`, `h0`, `h1`.
//!
//! Functions: `one`, `h:<b>`, `lin:<c0>*h:<b0>+<c1>*h:<b1>+..`, `exp:<l>`,
//! `mlfun:<a>,<l>` for x^{a-1} E_{a,a}(l x^a), and `geom:<l>` for the
//! geometric convolution series of the session kernel.

use crate::convops::{ConvConfig, SingularFunction};
use crate::error::{GfcError, Result};
use crate::kernels::{KernelSpec, PowerSeries};
use crate::series::{ConvolutionSeries, ConvolutionSeriesSpec};
use std::fmt;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn error(&self, msg: impl Into<String>) -> GfcError {
        GfcError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    /// A floating-point literal; signs are allowed up front and after an exponent marker.
    fn number(&mut self) -> Result<(f64, String)> {
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        while end < bytes.len() {
            let c = bytes[end] as char;
            let sign_ok = end == start || matches!(bytes[end - 1] as char, 'e' | 'E');
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || ((c == '+' || c == '-') && sign_ok) {
                end += 1;
            } else {
                break;
            }
        }
        let token = &self.text[start..end];
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok((v, token.to_string()))
            }
            _ => Err(self.error(format!("expected a number, found `{}`", if token.is_empty() { self.rest() } else { token }))),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing input `{}`", self.rest())))
        }
    }

    /// `<c>*h:<b>` terms separated by `+`.
    fn power_terms(&mut self) -> Result<Vec<(f64, f64)>> {
        let mut terms = Vec::new();
        loop {
            let (c, _) = self.number()?;
            self.expect("*h:")?;
            let (b, tok) = self.number()?;
            if !(b > 0.0) {
                return Err(range(tok, "power exponents must be positive"));
            }
            terms.push((c, b));
            if !self.eat("+") {
                break;
            }
        }
        Ok(terms)
    }
}

fn range(token: impl Into<String>, msg: impl Into<String>) -> GfcError {
    GfcError::Range { token: token.into(), msg: msg.into() }
}

pub fn parse_kernel(text: &str) -> Result<KernelSpec> {
    let text = text.trim();
    let mut cur = Cursor::new(text);
    let spec = if cur.eat("sum:") {
        KernelSpec::SumPowerLaw(cur.power_terms()?)
    } else if cur.eat("mlk:") {
        let (a, ta) = cur.number()?;
        cur.expect(",")?;
        let (b, tb) = cur.number()?;
        if !(0.0 < a && a < b && b < 1.0) {
            return Err(range(format!("{ta},{tb}"), "mlk requires 0 < alpha < beta < 1"));
        }
        KernelSpec::MLKernel { alpha: a, beta: b }
    } else if cur.eat("h:") {
        let (b, tok) = cur.number()?;
        if !(b > 0.0) {
            return Err(range(tok, "power-law exponent must be positive"));
        }
        KernelSpec::PowerLaw(b)
    } else if cur.eat("h0") {
        KernelSpec::ExtendedH0
    } else if cur.eat("h1") {
        KernelSpec::ExtendedH1
    } else {
        return Err(cur.error("expected `h:`, `sum:`, `mlk:`, `h0` or `h1`"));
    };
    cur.finish()?;
    Ok(spec)
}

/// A parsed test function, built into a [`SingularFunction`] on demand.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    One,
    Power(f64),
    Linear(Vec<(f64, f64)>),
    Exp(f64),
    MlFun { alpha: f64, lambda: f64 },
    Geometric(f64),
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::One => write!(f, "one"),
            FunctionSpec::Power(b) => write!(f, "h:{b}"),
            FunctionSpec::Linear(t) => {
                let parts: Vec<String> = t.iter().map(|(c, b)| format!("{c}*h:{b}")).collect();
                write!(f, "lin:{}", parts.join("+"))
            }
            FunctionSpec::Exp(l) => write!(f, "exp:{l}"),
            FunctionSpec::MlFun { alpha, lambda } => write!(f, "mlfun:{alpha},{lambda}"),
            FunctionSpec::Geometric(l) => write!(f, "geom:{l}"),
        }
    }
}

pub fn parse_function(text: &str) -> Result<FunctionSpec> {
    let text = text.trim();
    let mut cur = Cursor::new(text);
    let spec = if cur.eat("one") {
        FunctionSpec::One
    } else if cur.eat("h:") {
        let (b, tok) = cur.number()?;
        if !(b > 0.0) {
            return Err(range(tok, "power exponent must be positive"));
        }
        FunctionSpec::Power(b)
    } else if cur.eat("lin:") {
        FunctionSpec::Linear(cur.power_terms()?)
    } else if cur.eat("exp:") {
        FunctionSpec::Exp(cur.number()?.0)
    } else if cur.eat("mlfun:") {
        let (a, ta) = cur.number()?;
        cur.expect(",")?;
        let (l, _) = cur.number()?;
        if !(a > 0.0 && a <= 1.0) {
            return Err(range(ta, "mlfun requires 0 < alpha <= 1"));
        }
        FunctionSpec::MlFun { alpha: a, lambda: l }
    } else if cur.eat("geom:") {
        FunctionSpec::Geometric(cur.number()?.0)
    } else {
        return Err(cur.error("expected `one`, `h:`, `lin:`, `exp:`, `mlfun:` or `geom:`"));
    };
    cur.finish()?;
    Ok(spec)
}

/// Number of terms used when a series-defined function is materialized:
/// enough for a certified tail below this on the whole interval.
const SERIES_FUNCTION_TOL: f64 = 1e-15;

impl FunctionSpec {
    /// Builds the function on [0, X]; `geom` needs the session kernel.
    pub fn build(&self, kernel: Option<&KernelSpec>, cfg: &ConvConfig) -> Result<SingularFunction> {
        match self {
            FunctionSpec::One => Ok(SingularFunction::constant(1.0, cfg.x_max)),
            FunctionSpec::Power(b) => SingularFunction::power(*b, cfg),
            FunctionSpec::Linear(t) => SingularFunction::from_power_terms(t, cfg),
            FunctionSpec::Exp(l) => SingularFunction::exp(*l, cfg),
            FunctionSpec::MlFun { alpha, lambda } => {
                let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(KernelSpec::PowerLaw(*alpha), *lambda)?, cfg)?;
                series.truncated_function(series.terms_needed(cfg.x_max, SERIES_FUNCTION_TOL)?)
            }
            FunctionSpec::Geometric(l) => {
                let kernel =
                    kernel.ok_or_else(|| GfcError::InvalidParameter("geom: needs a session kernel (--kappa or --kernel)".into()))?;
                let series = ConvolutionSeries::new(ConvolutionSeriesSpec::geometric(kernel.clone(), *l)?, cfg)?;
                series.truncated_function(series.terms_needed(cfg.x_max, SERIES_FUNCTION_TOL)?)
            }
        }
    }

    /// Closed-form value at x, where one is known independently of the
    /// function's representation.
    pub fn exact(&self, x: f64) -> Option<f64> {
        match self {
            FunctionSpec::One => Some(1.0),
            FunctionSpec::Power(b) => Some(PowerSeries::new(vec![(1.0, *b)]).eval(x)),
            FunctionSpec::Linear(t) => Some(PowerSeries::new(t.clone()).eval(x)),
            FunctionSpec::Exp(l) => Some((l * x).exp()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels() {
        assert_eq!(parse_kernel("h:0.5").unwrap(), KernelSpec::PowerLaw(0.5));
        assert_eq!(parse_kernel("mlk:0.25,0.625").unwrap(), KernelSpec::MLKernel { alpha: 0.25, beta: 0.625 });
        assert_eq!(parse_kernel("sum:1*h:0.625+1*h:0.375").unwrap(), KernelSpec::SumPowerLaw(vec![(1.0, 0.625), (1.0, 0.375)]));
        assert_eq!(parse_kernel("h0").unwrap(), KernelSpec::ExtendedH0);
        assert_eq!(parse_kernel(" h1 ").unwrap(), KernelSpec::ExtendedH1);
        assert_eq!(parse_kernel("sum:-2*h:1e-1+3*h:1.5e+0").unwrap(), KernelSpec::SumPowerLaw(vec![(-2.0, 0.1), (3.0, 1.5)]));
    }

    #[test]
    fn kernel_errors() {
        assert!(matches!(parse_kernel("mlk:0.7,0.5"), Err(GfcError::Range { .. })));
        assert!(matches!(parse_kernel("h:-1"), Err(GfcError::Range { .. })));
        assert_eq!(parse_kernel("h:0.5x").unwrap_err(), GfcError::Parse { pos: 5, msg: "unexpected trailing input `x`".into() });
        assert!(matches!(parse_kernel("sum:1*k:0.5"), Err(GfcError::Parse { pos: 5, .. })));
        assert!(matches!(parse_kernel("q"), Err(GfcError::Parse { pos: 0, .. })));
    }

    #[test]
    fn functions() {
        assert_eq!(parse_function("one").unwrap(), FunctionSpec::One);
        assert_eq!(parse_function("lin:1*h:0.5+2*h:1").unwrap(), FunctionSpec::Linear(vec![(1.0, 0.5), (2.0, 1.0)]));
        assert_eq!(parse_function("mlfun:0.5,0.5").unwrap(), FunctionSpec::MlFun { alpha: 0.5, lambda: 0.5 });
        assert_eq!(parse_function("geom:-0.5").unwrap(), FunctionSpec::Geometric(-0.5));
        assert!(parse_function("exp:").is_err());
        for s in ["one", "h:0.7", "lin:1*h:0.5+2*h:1", "exp:1", "mlfun:0.5,0.5", "geom:0.8"] {
            assert_eq!(parse_function(&parse_function(s).unwrap().to_string()).unwrap(), parse_function(s).unwrap());
        }
    }

    #[test]
    fn built_functions() {
        let cfg = ConvConfig::default();
        let f = parse_function("mlfun:0.5,0.5").unwrap().build(None, &cfg).unwrap();
        let p = crate::specfun::MLParams::new(0.5, 0.5).unwrap();
        let x: f64 = 1.0;
        let expected = crate::specfun::mittag_leffler(&p, 0.5).unwrap();
        assert!((f.eval(x).unwrap() - expected).abs() < 1e-12);
        assert!(parse_function("geom:1").unwrap().build(None, &cfg).is_err());
        let g = parse_function("geom:0.8").unwrap().build(Some(&KernelSpec::PowerLaw(0.5)), &cfg).unwrap();
        assert!((g.eval(1.0).unwrap() - 3.207_278_519_057_187_05).abs() < 1e-12);
    }
}
