//! General fractional calculus with Sonine kernels.
//!
//! Functions of the form x^{p-1} g(x) on [0, X] are stored as a few exponent
//! classes with Chebyshev regular factors ([`convops::SingularFunction`]).
//! Laplace convolutions of such functions are computed by Gauss-Jacobi
//! product quadrature, which carries the endpoint singularities in the
//! weight. On top of that sit:
//!
//! - [`kernels`]: power-law, sum, Mittag-Leffler and extended kernels and
//!   their associated Sonine partners;
//! - [`convops`]: general fractional integrals and derivatives (RL and
//!   Caputo type, sequential and n-fold);
//! - [`series`]: convolution series with a certified truncation bound;
//! - [`taylor`]: convolution Taylor formulas and series;
//! - [`theorems`]: a residual harness for the fundamental theorems;
//! - [`specfun`]: gamma and Mittag-Leffler functions;
//! - [`cli`]: the `gfc` command-line front end.
//!
//! ```
//! use gfc::convops::{apply_gfd_with, ConvConfig, OperatorRequest, SingularFunction};
//! use gfc::kernels::KernelSpec;
//!
//! let cfg = ConvConfig::default();
//! let f = SingularFunction::from_power_terms(&[(1.0, 1.5)], &cfg).unwrap();
//! // D^{1/2} h_{3/2} = h_1 = 1
//! let d = apply_gfd_with(&OperatorRequest::rl(KernelSpec::PowerLaw(0.5), 1), &f, 0.7, &cfg).unwrap();
//! assert!((d - 1.0).abs() < 1e-10);
//! ```

pub mod cli;
pub mod convops;
pub mod error;
pub mod grammar;
pub mod kernels;
pub mod series;
pub mod specfun;
pub mod taylor;
pub mod theorems;

pub use error::{GfcError, Result};
