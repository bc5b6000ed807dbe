use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A finite word over an [`Alphabet`], stored one letter per byte.
///
/// Display and parsing use the canonical `0-9a-z` letter characters, so
/// `FiniteWord` round-trips through text for every supported alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiniteWord {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| !alphabet.contains(l)) {
            return Err(Error::BadAlphabet(format!(
                "letter {bad} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(FiniteWord { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        FiniteWord { alphabet, letters: Vec::new() }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .map(|c| alphabet.char_to_letter(c))
            .collect::<Result<Vec<u8>>>()?;
        Ok(FiniteWord { alphabet, letters })
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn to_text(&self) -> String {
        self.letters.iter().map(|&l| Alphabet::letter_to_char(l)).collect()
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", Alphabet::letter_to_char(l))?;
        }
        Ok(())
    }
}

/// Packs a short word into a `u128`, letter-by-letter, most significant
/// first, with an implicit leading 1 marker so that words of different
/// lengths never collide. Panics if the word does not fit.
pub fn pack(letters: &[u8], bits: u32) -> u128 {
    assert!(letters.len() as u32 * bits < 128, "word too long to pack");
    let mut v: u128 = 1;
    for &l in letters {
        v = (v << bits) | l as u128;
    }
    v
}

/// Inverse of [`pack`].
pub fn unpack(mut v: u128, bits: u32) -> Vec<u8> {
    let mask = (1u128 << bits) - 1;
    let mut out = Vec::new();
    while v > 1 {
        out.push((v & mask) as u8);
        v >>= bits;
    }
    out.reverse();
    out
}

/// Number of letters in a packed word.
pub fn packed_len(v: u128, bits: u32) -> usize {
    ((127 - v.leading_zeros()) / bits) as usize
}
