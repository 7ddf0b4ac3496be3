//! Closed-form mutual information of the memoryless noncoherent Rayleigh-fading
//! channel under a two-mass-point input, and the capacity machinery built on it.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its arguments; IO, file formats and threading live in `noncoh-cli`.
//!
//! Layout:
//!
//! * [`specfun`]: Pochhammer symbols, hypergeometric series, digamma,
//!   incomplete beta and the Lerch-type family used by the closed forms.
//! * [`channel`]: channel/input model and the derived α, β, y*² quantities.
//! * [`mi`]: the three closed forms of J(x), I(X;Y), entropies, identities
//!   and the analytic derivative with respect to a₂.
//! * [`oracle`]: quadrature, Monte-Carlo and finite-difference cross-checks.
//! * [`capacity`]: a₂* root finding and SNR sweeps.
//! * [`verify`]: residual families shared by the CLI `verify` command.

#![no_std]
// num_traits::Float is shadowed by inherent float methods whenever std is
// linked somewhere in the build graph.
#![allow(unused_imports)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod capacity;
pub mod channel;
mod error;
pub mod mi;
pub mod oracle;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
