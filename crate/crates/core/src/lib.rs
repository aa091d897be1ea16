//! Union-intersecting set systems over small ground sets: predicates, exact
//! bounds, extremal constructions, sunflower extraction, level matchings and
//! exhaustive search.
//!
//! Sets are bitmasks over `[n] = {1, ..., n}` with `n <= 30`; element `p` is
//! bit `p - 1`.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod io;
pub mod matching;
pub mod predicates;
pub mod reproduce;
pub mod sample;
pub mod search;
pub mod setcore;
pub mod sunflower;

pub use error::{Error, Result};
pub use setcore::{Family, ProblemSpec, Regime, SetMask, MAX_N};
