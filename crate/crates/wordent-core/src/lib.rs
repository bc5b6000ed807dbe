//! Exact combinatorics of infinite words over finite alphabets: factor
//! complexity profiles, entropy brackets for complexity-bounded word
//! families, and box dimensions of the digit sets they define.
//!
//! Everything here is deterministic and certified: counts are exact big
//! integers, real quantities are two-sided dyadic enclosures with proven
//! error bounds, and every reported lower bound is backed by a replayable
//! certificate. The crate is `no_std` (with `alloc`); file formats, the
//! command line and parallel drivers live in the companion `wordent-cli`
//! crate.
//!
//! The central objects:
//!
//! * `p_w(n)`, the number of distinct length-`n` factors of a word `w`,
//!   computed incrementally by a suffix automaton ([`factors`]);
//! * bound functions `f` with the family `W(f)` of words satisfying
//!   `p_w(n) <= f(n)` for all `n` ([`bounds`]);
//! * the growth exponents `e0(f) = liminf (1/n) log f(n)` and the word
//!   entropy `ew(f) = sup { E(w) : w in W(f) }`, bracketed from both sides
//!   ([`engine`]);
//! * the set of reals in `[0,1]` whose digit expansion lies in `W(f)`,
//!   whose box dimension is `ew(f) / log q` ([`fractal`]).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alphabet; // alphabets of size 2..=36, letter displays
pub mod bounds; // bound functions: expression DSL, presets, growth data
pub mod certified; // dyadic interval arithmetic with rigorous ln/exp
pub mod engine; // slice enumeration, follower graphs, entropy brackets
pub mod error; // shared error type
pub mod factors; // suffix automaton, complexity profiles, special factors
pub mod fractal; // digit maps, box counts, Moran roots, cover audits
pub mod generate; // word generators: Champernowne, morphic, SFT, beta
pub mod stream; // lazily materialized infinite words
pub mod word; // finite words

pub use alphabet::Alphabet;
pub use error::Error;
pub use word::FiniteWord;

/// Convenience alias used throughout: exact arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
