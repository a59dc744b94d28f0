//! Exact arithmetic for intermediate beta-transformations.
//!
//! This crate implements, over arbitrary-precision rationals:
//!
//! * the two-parameter family of interval maps `x ↦ βx + α (mod 1)` and their
//!   digit expansions ([`dynamics`]),
//! * the symbolic shift spaces those maps generate, together with a decision
//!   procedure for the specification property based on synchronization sets of
//!   the two critical itineraries ([`shiftspace`]),
//! * rigorous thickness and dimension estimates for the self-similar Cantor
//!   sets that arise as digit-restricted survivor sets ([`cantor`]),
//! * construction and verification of parameter pairs `(α, β)` whose critical
//!   orbits are fixed points of the map, which yields specification witnesses
//!   and lower bounds on the dimension of the exceptional parameter set
//!   ([`paramlab`]).
//!
//! All set arithmetic is exact: intervals carry `BigRational` endpoints and
//! every reported enclosure or verdict is a theorem about the stated rationals,
//! not a floating-point approximation. Where an irrational quantity must be
//! reported (logarithms, square roots), [`real`] produces certified two-sided
//! rational bounds with directed rounding.
//!
//! Heavy scans (synchronization search, interval-tree expansion, parameter
//! sweeps) run data-parallel by default via `rayon`; the `parallel` feature can
//! be disabled for a fully sequential build, and `*_seq` entry points expose
//! the sequential paths for benchmarking either way.

pub mod cantor;
pub mod dynamics;
pub mod error;
pub mod numeric;
pub mod paramlab;
pub mod real;
pub mod shiftspace;

pub(crate) mod par;

pub use error::{Error, Result};
pub use numeric::Rational;
