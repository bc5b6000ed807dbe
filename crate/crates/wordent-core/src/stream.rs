//! Lazily materialized infinite words.
//!
//! A [`WordStream`] wraps a deterministic [`LetterSource`] and memoizes the
//! generated prefix, so repeated window accesses never regenerate letters.
//! Sources may know a *saturating prefix length* for a block length `n`:
//! a prefix length `L(n)` such that the prefix of length `L(n)` already
//! contains every length-`n` factor of the infinite word. Profiles measured
//! at or beyond that length are exact, not just lower bounds.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::factors::{ComplexityProfile, FactorIndex, ProfileKind};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Deterministic producer of an infinite word.
pub trait LetterSource {
    fn alphabet(&self) -> Alphabet;

    /// Extends `buf` until it holds at least `target` letters.
    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()>;

    /// A prefix length whose factors of length `n` are provably all the
    /// factors of the infinite word, when the construction knows one.
    fn saturating_prefix(&mut self, _n: usize) -> Option<u64> {
        None
    }

    /// One-line human-readable description of the construction.
    fn describe(&self) -> String;
}

/// Default cap on materialized letters (64 Mi).
pub const DEFAULT_LENGTH_BUDGET: usize = 1 << 26;

/// An infinite word with a memoized prefix and a length budget.
pub struct WordStream {
    source: Box<dyn LetterSource>,
    prefix: Vec<u8>,
    budget: usize,
}

impl WordStream {
    pub fn new(source: Box<dyn LetterSource>) -> Self {
        Self::with_budget(source, DEFAULT_LENGTH_BUDGET)
    }

    pub fn with_budget(source: Box<dyn LetterSource>, budget: usize) -> Self {
        WordStream { source, prefix: Vec::new(), budget }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.source.alphabet()
    }

    pub fn describe(&self) -> String {
        self.source.describe()
    }

    pub fn materialized_len(&self) -> usize {
        self.prefix.len()
    }

    fn ensure(&mut self, n: usize) -> Result<()> {
        if n > self.budget {
            return Err(Error::Budget(format!(
                "prefix length {n} exceeds budget {}",
                self.budget
            )));
        }
        if self.prefix.len() < n {
            self.source.fill(&mut self.prefix, n)?;
            if self.prefix.len() < n {
                return Err(Error::Budget(format!(
                    "source stopped at {} letters, needed {n}",
                    self.prefix.len()
                )));
            }
        }
        Ok(())
    }

    /// The prefix of length `n`.
    pub fn prefix(&mut self, n: usize) -> Result<&[u8]> {
        self.ensure(n)?;
        Ok(&self.prefix[..n])
    }

    /// The factor `w[offset .. offset + n]` (0-based).
    pub fn segment(&mut self, offset: usize, n: usize) -> Result<&[u8]> {
        let end = offset
            .checked_add(n)
            .ok_or_else(|| Error::Domain(String::from("segment overflow")))?;
        self.ensure(end)?;
        Ok(&self.prefix[offset..end])
    }

    /// Saturating prefix length for block length `n`, when known.
    pub fn saturating_prefix(&mut self, n: usize) -> Option<u64> {
        self.source.saturating_prefix(n)
    }

    /// Profile of the prefix of length `prefix_len`, marked exact when the
    /// construction guarantees saturation of every reported block length.
    pub fn profile(
        &mut self,
        n_max: usize,
        prefix_len: usize,
    ) -> Result<ComplexityProfile> {
        if n_max > prefix_len {
            return Err(Error::Domain(format!(
                "n_max {n_max} exceeds prefix length {prefix_len}"
            )));
        }
        self.ensure(prefix_len)?;
        let mut idx = FactorIndex::new(self.alphabet());
        for &c in &self.prefix[..prefix_len] {
            idx.append(c)?;
        }
        let counts = idx
            .counts_up_to(n_max)
            .into_iter()
            .map(num_bigint::BigUint::from)
            .collect();
        let exact = self
            .source
            .saturating_prefix(n_max)
            .is_some_and(|l| l <= prefix_len as u64);
        Ok(ComplexityProfile {
            counts,
            kind: if exact { ProfileKind::Exact } else { ProfileKind::PrefixLowerBound },
            measured_prefix: Some(prefix_len as u64),
        })
    }

    /// Profile measured on the shortest saturating prefix for `n_max`.
    pub fn exact_profile(&mut self, n_max: usize) -> Result<ComplexityProfile> {
        let sat = self.saturating_prefix(n_max).ok_or_else(|| {
            Error::Domain(String::from(
                "construction does not expose a saturating prefix",
            ))
        })?;
        let sat = usize::try_from(sat)
            .map_err(|_| Error::Budget(String::from("saturating prefix too long")))?;
        self.profile(n_max, sat.max(n_max))
    }
}

/// A finite word replayed as a source (errors past its end).
pub struct FixedSource {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl FixedSource {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Self {
        FixedSource { alphabet, letters }
    }
}

impl LetterSource for FixedSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
        if buf.len() >= self.letters.len() && target > self.letters.len() {
            return Err(Error::Budget(format!(
                "fixed word of length {} exhausted",
                self.letters.len()
            )));
        }
        let take = target.min(self.letters.len());
        buf.extend_from_slice(&self.letters[buf.len()..take]);
        Ok(())
    }

    fn describe(&self) -> String {
        format!("fixed word of length {}", self.letters.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    struct Alternating;

    impl LetterSource for Alternating {
        fn alphabet(&self) -> Alphabet {
            Alphabet::new(2).unwrap()
        }
        fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
            while buf.len() < target {
                buf.push((buf.len() % 2) as u8);
            }
            Ok(())
        }
        fn saturating_prefix(&mut self, n: usize) -> Option<u64> {
            Some(n as u64 + 2)
        }
        fn describe(&self) -> String {
            String::from("alternating 0101...")
        }
    }

    #[test]
    fn segments_and_profiles() {
        let mut w = WordStream::new(Box::new(Alternating));
        assert_eq!(w.segment(3, 4).unwrap(), &[1, 0, 1, 0]);
        assert_eq!(w.prefix(5).unwrap(), &[0, 1, 0, 1, 0]);
        let p = w.profile(3, 64).unwrap();
        assert_eq!(p.kind, ProfileKind::Exact);
        assert_eq!(
            p.counts,
            vec![1u32.into(), 2u32.into(), 2u32.into(), 2u32.into()]
        );
        let p = w.exact_profile(4).unwrap();
        assert_eq!(p.counts[4], 2u32.into());
    }

    #[test]
    fn budget_respected() {
        let mut w = WordStream::with_budget(Box::new(Alternating), 10);
        assert!(w.prefix(10).is_ok());
        assert!(matches!(w.prefix(11), Err(Error::Budget(_))));
    }

    #[test]
    fn fixed_source_ends() {
        let a = Alphabet::new(2).unwrap();
        let mut w =
            WordStream::new(Box::new(FixedSource::new(a, vec![0, 1, 1, 0])));
        assert_eq!(w.prefix(4).unwrap(), &[0, 1, 1, 0]);
        assert!(w.prefix(5).is_err());
    }
}
