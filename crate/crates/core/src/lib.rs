//! Randomized identity testing for noncommutative arithmetic circuits.
//!
//! A circuit is evaluated on the transition matrices of a finite automaton;
//! the `(start, final)` entry of the output matrix sums the coefficients of
//! the monomials the automaton accepts. Layered automata that track the
//! isolation-lemma weight of a word turn this into a one-sided-error test
//! ([`pit::nc_pit`]). The crate also carries brute-force expansion oracles,
//! isolation-lemma estimators, the commutative univariate-substitution test
//! and a constructor for polynomials that vanish on a fixed collection of
//! weight-derived automata.

pub mod algebra;
pub mod automata;
pub mod circuit;
mod error;
pub mod isolation;
pub mod ncpoly;
pub mod pit;
pub mod trials;

pub use error::{Error, Result};
