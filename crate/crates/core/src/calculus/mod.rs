//! Exact symbolic calculus on finite sums `sum c x^a (ln x)^k` with exponents
//! and coefficients in `Q(sqrt(1/4 + beta))`.

mod lbeta;
mod remark11;
mod surd;
mod term;

pub use lbeta::{
    admissible, admissible_sum, apply_lbeta, indicial_residual, indicial_roots, kernel_basis, particular_solution, Beta,
};
pub use remark11::{
    indicial_report, published_exponents, published_particular, remark11_report, IndicialReport, KernelEntry,
    Remark11Report, Vieta,
};
pub use surd::{format_rational, parse_rational, rational, rational_to_f64, Rational, SurdValue};
pub use term::{differentiate, differentiate_n, evaluate, PowerLogTerm, TermSum};
