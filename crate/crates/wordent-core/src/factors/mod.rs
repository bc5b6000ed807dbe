//! Distinct-factor counting and complexity profiles.
//!
//! The complexity profile of a word `w` is `p_w(n)`, the number of distinct
//! length-`n` factors (blocks) of `w`. [`FactorIndex`] maintains the whole
//! profile of a growing word online in amortized constant time per appended
//! letter; [`profile`] and [`factor_count`] are the batch entry points, and
//! [`envelope_checks`] validates the structural inequalities every profile
//! of a one-sided infinite word must satisfy:
//!
//! * `p(0) = 1`, `p` non-decreasing for factor-closed languages;
//! * submultiplicativity `p(n + n') <= p(n) p(n')`;
//! * the iterated form `p(n) <= p(n0)^ceil(n/n0)` for every `n0`;
//! * the Fekete consequence that `min_k (1/k) log p(k)` is the best
//!   entropy upper bound the profile witnesses (all comparisons of
//!   `p(a)^(1/a)` against `p(b)^(1/b)` are done exactly as `p(a)^b`
//!   against `p(b)^a`).

mod automaton;
mod checks;
mod special;

pub use automaton::FactorIndex;
pub use checks::{envelope_checks, EnvelopeReport};
pub use special::{special_factor_stats, SpecialFactorStats};

use crate::alphabet::Alphabet;
use crate::error::Result;
use alloc::vec::Vec;
use num_bigint::BigUint;

/// How the counts of a [`ComplexityProfile`] are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ProfileKind {
    /// Counts equal the factor complexity of the full infinite word or
    /// language (the measured prefix saturates every reported length).
    Exact,
    /// Counts are the profile of a finite prefix: a lower bound for the
    /// infinite word, exact for the prefix itself.
    PrefixLowerBound,
}

/// A factor-complexity profile `p(0), p(1), ..., p(n_max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexityProfile {
    pub counts: Vec<BigUint>,
    pub kind: ProfileKind,
    /// Length of the prefix the counts were measured on, when applicable.
    pub measured_prefix: Option<u64>,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }
}

/// Number of distinct length-`n` factors of a finite word.
pub fn factor_count(alphabet: Alphabet, letters: &[u8], n: usize) -> Result<BigUint> {
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    if n > letters.len() {
        return Ok(BigUint::ZERO);
    }
    let mut idx = FactorIndex::new(alphabet);
    for &c in letters {
        idx.append(c)?;
    }
    Ok(BigUint::from(idx.distinct_count(n)))
}

/// Profile of a finite word up to `n_max` (inclusive).
pub fn profile(
    alphabet: Alphabet,
    letters: &[u8],
    n_max: usize,
) -> Result<ComplexityProfile> {
    let mut idx = FactorIndex::new(alphabet);
    for &c in letters {
        idx.append(c)?;
    }
    let counts = idx
        .counts_up_to(n_max)
        .into_iter()
        .map(BigUint::from)
        .collect();
    Ok(ComplexityProfile {
        counts,
        kind: ProfileKind::PrefixLowerBound,
        measured_prefix: Some(letters.len() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FiniteWord;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    /// Naive distinct-factor count by materializing the factor set.
    fn naive_count(letters: &[u8], n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        if n > letters.len() {
            return 0;
        }
        letters.windows(n).collect::<BTreeSet<_>>().len() as u64
    }

    #[test]
    fn profile_matches_naive_on_samples() {
        let a2 = Alphabet::new(2).unwrap();
        let words = ["0", "01", "0110100110010110", "0000000", "0101010101"];
        for t in words {
            let w = FiniteWord::parse(a2, t).unwrap();
            for n in 0..=w.len() + 1 {
                assert_eq!(
                    factor_count(a2, w.letters(), n).unwrap(),
                    BigUint::from(naive_count(w.letters(), n)),
                    "word {t} n {n}"
                );
            }
        }
    }

    #[test]
    fn exhaustive_binary_words_up_to_len_12() {
        // Oracle equivalence on every binary word of length <= 12.
        let a2 = Alphabet::new(2).unwrap();
        for len in 0..=12usize {
            for bits in 0..(1u32 << len) {
                let letters: Vec<u8> =
                    (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                let mut idx = FactorIndex::new(a2);
                for &c in &letters {
                    idx.append(c).unwrap();
                }
                for n in 0..=len {
                    assert_eq!(
                        idx.distinct_count(n),
                        naive_count(&letters, n),
                        "bits {bits:b} len {len} n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn fibonacci_word_profile_is_n_plus_1() {
        // The Fibonacci word is Sturmian: p(n) = n + 1.
        let a2 = Alphabet::new(2).unwrap();
        let mut s = vec![0u8];
        while s.len() < 4000 {
            // 0 -> 01, 1 -> 0
            let mut t = Vec::with_capacity(s.len() * 2);
            for &c in &s {
                if c == 0 {
                    t.extend_from_slice(&[0, 1]);
                } else {
                    t.push(0);
                }
            }
            s = t;
        }
        let p = profile(a2, &s, 40).unwrap();
        for n in 0..=40usize {
            assert_eq!(p.counts[n], BigUint::from(n as u64 + 1));
        }
    }

    #[test]
    fn thue_morse_profile_known_values() {
        // p(n) for Thue-Morse: 1, 2, 4, 6, 10, 12, 16, 20, 22, 24, ...
        let a2 = Alphabet::new(2).unwrap();
        let mut s = vec![0u8];
        while s.len() < 1 << 14 {
            let mut t = Vec::with_capacity(s.len() * 2);
            for &c in &s {
                t.extend_from_slice(&[c, 1 - c]);
            }
            s = t;
        }
        let p = profile(a2, &s, 9).unwrap();
        let expect = [1u32, 2, 4, 6, 10, 12, 16, 20, 22, 24];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(p.counts[n], BigUint::from(*e));
        }
    }

    #[test]
    fn newest_threshold_marks_new_factor_lengths() {
        let a2 = Alphabet::new(2).unwrap();
        let letters = [0u8, 1, 1, 0, 1, 0, 0, 1, 1, 0];
        let mut idx = FactorIndex::new(a2);
        let mut prev: Vec<u64> = vec![1];
        for (i, &c) in letters.iter().enumerate() {
            idx.append(c).unwrap();
            let now = idx.counts_up_to(i + 1);
            let k_star = idx.newest_factor_threshold();
            for k in 1..=i + 1 {
                let before = prev.get(k).copied().unwrap_or(0);
                let gained = now[k] - before;
                assert_eq!(gained, u64::from(k >= k_star), "k {k} at step {i}");
            }
            prev = now;
        }
    }
}
