//! Hahn-Exton q-Bessel functions and the q-series machinery around them.
//!
//! The crate is organised bottom-up:
//!
//! * [`qseries`] holds q-shifted factorials, the q-gamma function, basic
//!   hypergeometric series and an adaptive bilateral summation engine.
//! * [`qbessel`] evaluates the Hahn-Exton q-Bessel function, the classical
//!   Bessel function, Wall and Chebyshev polynomials, the three-term
//!   recurrence family in the order-scaled variable and magnitude bounds.
//! * [`identities`] computes both sides of the q-Graf addition formula, the
//!   product formula, the q-Hankel orthogonality relations and their
//!   companions, returning residual reports.
//! * [`limits`] drives the q → 1 limit transitions towards the classical
//!   Bessel identities.
//!
//! All functions are pure; every value is immutable after construction.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod identities;
pub mod limits;
pub mod qbessel;
pub mod qseries;

pub use error::{Error, Result};
pub use num_complex::Complex64;
