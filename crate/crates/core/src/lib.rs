//! A desk-scale laboratory for the circle-method machinery behind the
//! ternary Goldbach theorem.
//!
//! The crate evaluates, at scales a workstation can reach, every concrete
//! object that enters the modern proof that every odd number greater than 5
//! is a sum of three primes: smoothed prime exponential sums
//! `S_eta(alpha, x) = sum Lambda(n) e(alpha n) eta(n/x)`, their major-arc
//! predictions, the explicit minor-arc bound, Vaughan's identity and the
//! large-sieve inequalities that power it, the singular series, and the
//! prime-ladder verification algorithm. Each analytic bound is paired with
//! a brute-force oracle so that the inequalities can be checked empirically
//! rather than taken on faith.
//!
//! Modules map one-to-one onto the mathematical subsystems:
//!
//! - [`arith`] — primes, the von Mangoldt and Möbius functions, Dirichlet
//!   characters, continued-fraction approximation.
//! - [`smoothing`] — the smoothing weights (Gaussian, `eta2`, `eta_circ`,
//!   `eta_plus`, `eta_star`, ...), their Fourier and Mellin transforms, and
//!   Mellin convolution.
//! - [`expsum`] — direct evaluation of the exponential sums and exact
//!   representation counting by DFT convolution.
//! - [`majorarc`] — arc geometry, main-term predictions with explicit error
//!   envelopes, the singular series `C0`, and the smoothing double integral.
//! - [`minorarc`] — Vaughan's identity, type-I/type-II bound machinery, and
//!   the explicit minor-arc theorem evaluator.
//! - [`sieve`] — large-sieve inequalities, delta-scattered point sets, and
//!   the prime-support gain measurements.
//! - [`ladder`] — Proth certificates, binary Goldbach checks, prime-ladder
//!   construction, and ternary verification.
//! - [`rigor`] — interval arithmetic, rigorous bisection maximization, and
//!   enclosure quadrature for the certified reruns.
//! - [`config`] / [`commands`] — the CLI surface.

pub mod arith;
pub mod commands;
pub mod config;
pub mod error;
pub mod expsum;
pub mod ladder;
pub mod majorarc;
pub mod minorarc;
pub mod report;
pub mod rigor;
pub mod sieve;
pub mod smoothing;
pub mod util;

pub use error::{Error, Result};
pub use report::BoundReport;
