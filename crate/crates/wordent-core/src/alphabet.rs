use crate::error::{Error, Result};
use alloc::format;

/// A finite alphabet identified with `{0, 1, ..., q-1}` for `2 <= q <= 36`.
///
/// Letters display as `0-9a-z`, so words over any supported alphabet have a
/// canonical one-character-per-letter text form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Alphabet {
    size: u8,
}

pub const MAX_ALPHABET: u8 = 36;

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if !(2..=MAX_ALPHABET as u32).contains(&size) {
            return Err(Error::BadAlphabet(format!(
                "size {size} outside 2..=36"
            )));
        }
        Ok(Alphabet { size: size as u8 })
    }

    #[inline]
    pub fn size(&self) -> u8 {
        self.size
    }

    #[inline]
    pub fn contains(&self, letter: u8) -> bool {
        letter < self.size
    }

    /// Bits needed to pack one letter.
    #[inline]
    pub fn bits_per_letter(&self) -> u32 {
        u8::BITS - (self.size - 1).leading_zeros()
    }

    pub fn letter_to_char(letter: u8) -> char {
        match letter {
            0..=9 => (b'0' + letter) as char,
            10..=35 => (b'a' + letter - 10) as char,
            _ => '?',
        }
    }

    pub fn char_to_letter(&self, c: char) -> Result<u8> {
        let v = match c {
            '0'..='9' => c as u8 - b'0',
            'a'..='z' => c as u8 - b'a' + 10,
            'A'..='Z' => c as u8 - b'A' + 10,
            _ => {
                return Err(Error::BadAlphabet(format!(
                    "character {c:?} is not a letter"
                )))
            }
        };
        if !self.contains(v) {
            return Err(Error::BadAlphabet(format!(
                "letter {c:?} requires alphabet size > {}",
                self.size
            )));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(37).is_err());
        assert_eq!(Alphabet::new(2).unwrap().bits_per_letter(), 1);
        assert_eq!(Alphabet::new(3).unwrap().bits_per_letter(), 2);
        assert_eq!(Alphabet::new(4).unwrap().bits_per_letter(), 2);
        assert_eq!(Alphabet::new(5).unwrap().bits_per_letter(), 3);
        assert_eq!(Alphabet::new(36).unwrap().bits_per_letter(), 6);
    }

    #[test]
    fn chars_roundtrip() {
        let a = Alphabet::new(36).unwrap();
        for l in 0..36u8 {
            let c = Alphabet::letter_to_char(l);
            assert_eq!(a.char_to_letter(c).unwrap(), l);
        }
        assert!(a.char_to_letter('!').is_err());
        let b = Alphabet::new(2).unwrap();
        assert!(b.char_to_letter('2').is_err());
    }
}
