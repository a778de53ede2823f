//! Ergodic capacity of the Jacobi MIMO channel: an `m_r x m_t` corner of an
//! `m x m` Haar unitary, as used to model mode and core coupling in
//! multimode or multicore fiber.
//!
//! Three routes to the same number are provided and cross-checked against
//! each other:
//!
//! * [`capacity::capacity_sum_form`]: the weighted Christoffel–Darboux kernel
//!   summed over degrees,
//! * [`capacity::capacity_cd_form`]: the closed two-product form of that
//!   kernel,
//! * [`haar::mc_capacity`]: Monte Carlo over sampled Haar unitaries,
//!
//! plus the lower bound [`capacity::capacity_lower_bound`] and the
//! first-order small-SNR law [`capacity::capacity_low_snr`].
//!
//! The crate is `no_std` and only needs `alloc`. Parallel sampling, rule
//! caching and the command line live in the `jacobi-mimo` crate.

#![no_std]

extern crate alloc;

pub mod capacity;
pub mod error;
pub mod haar;
pub mod jacobi;
pub mod linalg;
pub mod quadrature;
pub mod special;
pub mod tridiag;

pub use capacity::{CapacityCurve, CapacityMethod, ChannelConfig, CurvePoint, Snr};
pub use error::{Error, Result};
pub use haar::{Corner, MonteCarloEstimate};
pub use jacobi::{JacobiParams, KernelConstants};
pub use quadrature::{FreshRules, LocalRuleCache, QuadratureRule, RuleSource, DEFAULT_NODES};
