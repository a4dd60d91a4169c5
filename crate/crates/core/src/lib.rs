//! Radial Dirichlet eigenvalues of the p-Laplacian on annuli.
//!
//! The radial problem on `R < |x| < Rbar` in `R^N` is mapped onto the weighted
//! one-dimensional problem
//!
//! ```text
//! (|v'|^{p-2} v')' + lambda q(t) |v|^{p-2} v = 0 on (0, 1),   v(0) = v(1) = 0,
//! ```
//!
//! whose eigenvalues are bracketed by
//! `(k pi_p / qbar_plus)^p <= lambda_k <= (k pi_p / qbar_minus)^p` and computed by
//! Pruefer-angle shooting. The [`asymptotics`] module runs the thin-shell sweeps
//! `Rbar = R + 1`, `R -> infinity`, where `lambda_k -> (k pi_p)^p`.

// `!(x > 0.0)` is the intended spelling: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod cli;
pub mod csv_io;
pub mod eigensolver;
pub mod error;
pub mod ode;
pub mod ptrig;
pub mod quadrature;
pub mod weight;

pub use asymptotics::{convergence_report, run_sweep, Family, SweepRecord, SweepSpec};
pub use bounds::{eigen_bracket, q_bar_minus, q_bar_plus, EigenBracket};
pub use eigensolver::{eigenvalue, shoot, EigenResult, ShootingResult, SolverOptions};
pub use error::{Error, Result};
pub use ptrig::{pi_p, sin_p, PExponent, PTrigTable};
pub use weight::{ProblemConfig, WeightCase, WeightProfile};
