//! Rate-region computations for a two-user uplink MAC and downlink BC aided
//! by passive reflecting surfaces, under two deployment strategies:
//!
//! * **distributed** — the `M` reflecting elements form two surfaces, one near
//!   each user, for which capacity and TDMA/FDMA regions are closed-form;
//! * **centralized** — all `M` elements form one surface near the AP, for
//!   which this crate computes a rate-profile inner bound (alternating
//!   per-element optimization with a tight unit-modulus lift), a
//!   semidefinite-relaxation outer bound, and TDMA/FDMA regions.
//!
//! Downlink (BC) regions are obtained from the uplink ones through
//! uplink-downlink duality: each BC region is the convex hull of the dual MAC
//! regions over all power splits.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`. IO, file formats and the experiment CLI live in the companion
//! `irs-regions` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bc;
pub mod centralized;
pub mod channel;
pub mod distributed;
pub mod error;
pub mod region;
pub mod sdr;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
