//! Word generators: infinite words with prescribed factor complexity.
//!
//! Each generator produces a [`WordStream`](crate::stream::WordStream)
//! and, where the construction admits one, a saturating prefix length —
//! a finite window provably containing every factor of a given length,
//! so complexity profiles measured on it are exact rather than lower
//! bounds.
//!
//! * [`champernowne`]: the base-`q` counting word, complexity exactly
//!   `q^n`.
//! * [`apply_morphism`] / [`prop6_word`]: images of words under letter
//!   morphisms; the spacing morphism of [`prop6_word`] turns the binary
//!   counting word into one whose complexity sits between `n + 1` and
//!   `max(n + 1, e^{cn})` with infinitely many touches of both sides.
//! * [`SftSystem`] and [`transitive_word`]: finite-memory languages
//!   given by forbidden words, their exact complexity tables, entropy,
//!   and a one-word witness realizing the whole language.
//! * [`BetaFactorSet`] and [`exp_order_word`]: admissible words of a
//!   real base `beta > 1` and the padded concatenation whose complexity
//!   has exponential order exactly `log beta`.

pub mod beta;
pub mod champernowne;
pub mod morphism;
pub mod sft;

pub use beta::{exp_order_word, exp_order_word_for, pad_map, BetaBase, BetaFactorSet, ExpOrderMeta};
pub use champernowne::champernowne;
pub use morphism::{apply_morphism, prop6_word, Morphism};
pub use sft::{sft_complexity, sft_entropy, sft_from_forbidden, transitive_word, SftSystem};
