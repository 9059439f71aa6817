//! Numerical core for equivariant free boundary minimal surfaces in the
//! unit ball.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computations:
//!
//! * [`ode`]: adaptive Dormand–Prince integration with dense output and
//!   event location, plus [`root`] bracketing and [`quad`] quadrature.
//! * [`equivariant`]: the `O(m)×O(n)` orbit-space system, its singular
//!   points, the shooting constructions of the families `Σ_{m,n,k}` and of
//!   the annuli `Σ_{m,n}`.
//! * [`catenoid`]: `n`-catenoid profiles, the critical catenoid, tangency
//!   roots of shifted profiles and the certificates behind uniqueness of
//!   the free boundary `n`-catenoid.
//! * [`balancing`]: flux, torque and balancing integrals over latitude
//!   spheres of catenoids.
//!
//! File formats and the command line live in the companion `fbms` crate.

#![no_std]
// `num_traits::Float` goes unused whenever std is linked into the build
#![allow(unused_imports)]
// oracle constants carry every digit on purpose; `!(x < y)` is the NaN-rejecting form
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod balancing;
pub mod catenoid;
pub mod equivariant;
mod error;
pub mod ode;
pub mod quad;
pub mod root;

pub use error::{Error, ExitReason, Result};
