//! Tri-colored sum-free sets in F₂ⁿ.
//!
//! A tri-colored sum-free set is a list of triples `(aᵢ, bᵢ, cᵢ)` of vectors
//! such that `aᵢ + bⱼ + c_k = 0` holds exactly when `i = j = k`. This crate
//! provides:
//!
//! * [`group`]: packed F₂ⁿ vectors, `ℤ/Mℤ` helpers and exact binomials.
//! * [`apfree`]: subsets of `ℤ/Mℤ` and of the integers with no three-term
//!   arithmetic progression (greedy, Behrend spheres, exact search).
//! * [`construction`]: the randomized hashing construction that filters the
//!   weight-`(n/3, n/3, 2n/3)` triples and prunes them to a sum-free core.
//! * [`verify`]: decision procedures for tri-colored sum-free sets and
//!   perfectly matched sequences.
//! * [`bounds`]: the polynomial-method upper bound `3·dim L_{n,d}` and the
//!   closed-form upper and lower bound formulas.
//! * [`oracle`]: exhaustive search for maximum sets at tiny `n`.
//! * [`io`]: the JSON and JSON-lines file formats.
//! * [`cli`]: the `tcsfs` command-line front end.
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod apfree;
pub mod bounds;
pub mod cli;
pub mod construction;
pub mod error;
pub mod group;
pub mod io;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use group::{binomial, BitVec, ModContext, Triple, TripleSet};
