//! Exact-arithmetic engine for skew-linear dynamical systems over ℚ.
//!
//! A skew-linear self-map is a rational map f(x, y) = (g(x), A(x)·y) on
//! ℙ¹ × 𝔸ᴺ, where g is a rational self-map of the line and A is an N×N
//! matrix of rational functions. This crate computes with such systems in
//! exact rational arithmetic:
//!
//! * [`algebra`] — rationals, dense polynomials, rational functions, and
//!   matrices over them, including Smith normal form over ℚ[x];
//! * [`projective`] — points of ℙ¹(ℚ), base maps, iteration, heights, and
//!   a certified height-escape argument;
//! * [`skew`] — orbits, cocycles, singular loci, orbit–variety
//!   intersections, image filtrations, and invariance certificates;
//! * [`recurrence`] — non-autonomous linear recurrences, their companion
//!   systems, zero sets, decomposition into arithmetic progressions, and
//!   symbolic certification of all-zero progressions;
//! * [`padic`] — good-reduction prime selection, residue dynamics, attuned
//!   iterates, Mahler finite-difference profiles, and Strassmann zero
//!   bounds;
//! * [`seqring`] — the ring of sequences at finite truncation: shifts,
//!   fundamental solution matrices, recurrence discovery, and the
//!   unit / zero-divisor dichotomy.
//!
//! Everything is deterministic and exact; no floating point anywhere.

pub mod algebra;
pub mod error;
pub mod padic;
pub mod projective;
pub mod recurrence;
pub mod seqring;
pub mod skew;

pub use error::{Error, Result};
