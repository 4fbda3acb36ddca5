//! Tempered fractional calculus on a real interval and the variational
//! machinery built on top of it.
//!
//! The crate provides, on uniform grids over `[a, b]`:
//!
//! - left/right tempered Riemann-Liouville integrals and derivatives and
//!   tempered Caputo derivatives, with verification routines for the
//!   composition and integration-by-parts identities ([`tempered_ops`]);
//! - a discrete realization of the zero-boundary tempered Sobolev-type
//!   space: norms, inner products, embedding and Poincaré diagnostics,
//!   and a hat-function Galerkin basis ([`fnspace`]);
//! - Lagrangian functionals, Gâteaux derivatives, Euler-Lagrange
//!   residuals, and a direct projected-gradient minimizer ([`variational`]);
//! - symmetry/invariance checking and the associated conserved-quantity
//!   diagnostics ([`noether`]);
//! - a Galerkin solver for the linear tempered boundary value problem,
//!   with manufactured-solution support ([`bvp`]);
//! - a numerical mountain-pass (elastic string) solver ([`mountain_pass`]);
//! - the special functions everything else depends on ([`specfun`]).
//!
//! The `tempvar` binary exposes all of it from the command line, reading
//! and writing CSV and JSON.

pub mod bvp;
pub mod cli;
pub mod expr;
pub mod fnspace;
pub mod grid;
pub mod mountain_pass;
pub mod noether;
pub mod specfun;
pub mod tempered_ops;
pub mod variational;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
