//! q-series primitives.
//!
//! Conventions: `q` is always a validated [`QParam`]; complex powers use the
//! principal branch `exp(a * Log z)` unless a function takes a logarithm
//! explicitly, in which case the caller chooses the branch.

mod bilateral;
mod hyper;
mod products;
mod types;

pub use bilateral::{
    bilateral_sum, one_sided_sum, q_integral_dmq, q_integral_dmq_lattice, try_bilateral_sum,
    Decay, TailHint,
};
pub use hyper::{phi_rs, phi_rs_raw, PhiRaw};
pub use products::{
    cln1p, ln_q_pochhammer_inf, q_gamma, q_pochhammer, q_pochhammer_inf, LnProduct,
};
pub use types::{QParam, SeriesValue, Truncation};
