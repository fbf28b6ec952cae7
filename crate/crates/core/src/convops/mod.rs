//! The numerical engine: functions of the form x^{p-1} g(x), weakly singular
//! convolutions by Gauss-Jacobi product quadrature, and the general
//! fractional integrals and derivatives built on them.

mod chebyshev;
mod function;
mod jacobi;
mod operators;

pub use chebyshev::{cheb_nodes, ChebSeries};
pub use function::{ConvConfig, SingularFunction, Term};
pub use jacobi::{beta_fn, cached_rule, jacobi_rule, weight_mass, JacobiRule};
pub use operators::{
    apply_gfd, apply_gfd_with, apply_gfi, apply_gfi_with, conv_power, convolve, derivative_chain, fold_config, gfd, gfi, OperatorForm,
    OperatorRequest, OperatorVariant,
};
