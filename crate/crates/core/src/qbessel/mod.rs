//! Hahn-Exton q-Bessel functions and their classical counterparts.
//!
//! `J_α(z;q) = z^α (q^{α+1};q)_∞/(q;q)_∞ · 1φ1(0; q^{α+1}; q, q z²)`.
//!
//! Evaluation works with `ln z` rather than `z`. The power `z^α` is
//! `exp(α ln z)`, so callers passing `ln R + t ln q` for an argument
//! `R q^t` get the analytic continuation in `t` instead of whatever branch
//! the principal logarithm of the product would pick.

mod bounds;
mod classical;
mod hahn_exton;
mod polys;
mod recurrence;

pub use bounds::{tail_bound, tail_bound_exp};
pub use classical::{classical_bessel_j, gamma, ln_gamma, rgamma};
pub use hahn_exton::{
    hahn_exton_j, hahn_exton_j_direct, hahn_exton_j_direct_exp, hahn_exton_j_exp, hahn_exton_j_exp_ln,
    hahn_exton_j_ladder, hahn_exton_j_lattice, hahn_exton_j_lattice_ln, hahn_exton_j_neg_int, BesselOrder, LnValue,
};
pub use polys::{chebyshev_t, wall_polynomial};
pub use recurrence::{p_k, recurrence_coeffs, RecurrenceFamily};
