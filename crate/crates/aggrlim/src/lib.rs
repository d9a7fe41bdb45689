//! Simulation and numerical verification toolkit for panels of
//! random-coefficient AR(1) and INAR(1) processes under heavy-tailed
//! mixing of the autoregression coefficient.
//!
//! The crate simulates `N` independent copies of a stationary AR(1) or
//! INAR(1) process whose coefficient `alpha` is drawn once per copy from a
//! mixing density proportional to `psi(x) (1-x)^beta` on `[0, 1)`, with
//! `psi` bounded, left-continuous at 1 and `psi(1) > 0`. Centered partial
//! sums over `m = floor(n t)` steps are aggregated across copies and
//! normalized in one of two iterated-limit orders:
//!
//! * copies first: divide by `sqrt(n ln n * N)`,
//! * time first:   divide by `sqrt(n * N ln N)`.
//!
//! At the critical exponent `beta = 1` both orders give Brownian limits
//! whose variance constants differ by an explicit factor, and the crate's
//! purpose is to verify those constants (and the finite-size covariance
//! formulas behind them) numerically. [`theory`] holds the exact formulas,
//! [`aggregation`] the panel simulator, [`stats`] the heavy-tail-aware
//! estimators, and the `aggrlim` binary wires them into reproducible
//! verification runs.
//!
//! All randomness flows through [`rng::Streams`], which derives one
//! counter-based stream per (replicate, copy) pair, so every simulated
//! quantity is bit-reproducible for a fixed master seed regardless of how
//! many worker threads run the panel.

pub mod aggregation;
pub mod cli;
pub mod mixing;
pub mod processes;
pub mod quad;
pub mod rng;
pub mod stats;
pub mod sum;
pub mod theory;
pub mod verify;
