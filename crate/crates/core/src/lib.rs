//! Verification laboratory for the linearized degenerate thin-film operator
//!
//! ```text
//!     u_t + div(x_N^2 grad(Lap u) - beta grad u) = f      on {x_N > 0}
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`calculus`]: exact power-log calculus for the 1-D operator
//!   `l_beta v = (x^2 v''' - beta v')'`, its kernel, admissibility and the
//!   discrepancy audit of the published exponents.
//! * [`grid`]: graded strip grids, parabolic cylinders and local quadrature.
//! * [`operator`]: flux-form discretization with tangential mode decoupling.
//! * [`evolution`]: theta-scheme time stepping, steady solves, manufactured data.
//! * [`estimates`]: Hardy, interpolation, cutoff, mollifier, iteration-lemma and
//!   Caccioppoli checks.
//! * [`harness`]: configuration files, scenarios and JSON/CSV reports.

pub mod banded;
pub mod calculus;
pub mod error;
pub mod estimates;
pub mod evolution;
pub mod exec;
pub mod grid;
pub mod harness;
pub mod operator;
pub mod series;

pub use error::{Error, Result};
pub use exec::Exec;
