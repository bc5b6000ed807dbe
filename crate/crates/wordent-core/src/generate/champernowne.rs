//! The base-`q` counting word: the digits of 0, 1, 2, ... concatenated.
//!
//! Over the binary alphabet the word starts `0 1 10 11 100 ...`, i.e.
//! `0110111001...`. Every finite word over the alphabet occurs (prefix a
//! `1` and read the result as a numeral), so the word has full factor
//! complexity `q^n`, and a crude but explicit saturating prefix length is
//! known for every block length.

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::stream::{LetterSource, WordStream};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

struct CountingSource {
    alphabet: Alphabet,
    next: u64,
    scratch: Vec<u8>,
}

impl CountingSource {
    fn push_numeral(&mut self, buf: &mut Vec<u8>) {
        let q = u64::from(self.alphabet.size());
        let mut k = self.next;
        self.scratch.clear();
        loop {
            self.scratch.push((k % q) as u8);
            k /= q;
            if k == 0 {
                break;
            }
        }
        buf.extend(self.scratch.iter().rev());
        self.next += 1;
    }
}

impl LetterSource for CountingSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
        while buf.len() < target {
            self.push_numeral(buf);
        }
        Ok(())
    }

    fn saturating_prefix(&mut self, n: usize) -> Option<u64> {
        // Every length-n word v occurs inside the numeral of some number
        // below q^(n+1) (prepend the digit 1 to v and strip leading
        // zeros), and the first q^(n+1) numerals together use fewer than
        // q^(n+2) * (n+2) letters.
        let q = u64::from(self.alphabet.size());
        let e = u32::try_from(n).ok()?.checked_add(2)?;
        let p = q.checked_pow(e)?;
        p.checked_mul(n as u64 + 2)
    }

    fn describe(&self) -> String {
        format!("base-{} counting word", self.alphabet.size())
    }
}

/// The infinite word listing every base-`q` numeral in increasing order.
pub fn champernowne(q: u32) -> Result<WordStream> {
    let alphabet = Alphabet::new(q)?;
    Ok(WordStream::new(alloc::boxed::Box::new(CountingSource {
        alphabet,
        next: 0,
        scratch: Vec::new(),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::ProfileKind;

    #[test]
    fn binary_prefix_is_the_concatenated_numerals() {
        let mut w = champernowne(2).unwrap();
        assert_eq!(w.prefix(10).unwrap(), &[0, 1, 1, 0, 1, 1, 1, 0, 0, 1]);
        assert_eq!(w.prefix(1).unwrap(), &[0]);
    }

    #[test]
    fn ternary_prefix() {
        // 0 1 2 10 11 12 20 ...
        let mut w = champernowne(3).unwrap();
        assert_eq!(w.prefix(11).unwrap(), &[0, 1, 2, 1, 0, 1, 1, 1, 2, 2, 0]);
    }

    #[test]
    fn full_complexity_on_a_saturated_prefix() {
        let mut w = champernowne(2).unwrap();
        let profile = w.exact_profile(8).unwrap();
        assert_eq!(profile.kind, ProfileKind::Exact);
        for (n, count) in profile.counts.iter().enumerate() {
            assert_eq!(count, &num_bigint::BigUint::from(1u64 << n));
        }
    }

    #[test]
    fn saturating_prefix_is_conservative() {
        let mut w = champernowne(2).unwrap();
        // 2^(3+2) * (3+2) = 160 letters certainly hold all 8 long-3 blocks.
        assert_eq!(w.saturating_prefix(3), Some(160));
        let counts = w.profile(3, 160).unwrap().counts;
        assert_eq!(counts[3], num_bigint::BigUint::from(8u32));
    }

    #[test]
    fn rejects_degenerate_alphabets() {
        assert!(champernowne(0).is_err());
        assert!(champernowne(1).is_err());
    }
}
