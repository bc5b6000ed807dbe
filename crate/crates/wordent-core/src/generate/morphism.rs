//! Letter-to-word substitutions and the slow-growth block word.
//!
//! A [`Morphism`] maps each letter of a domain alphabet to a non-empty
//! word over a target alphabet; applying it to an infinite word yields
//! another infinite word, materialised lazily. The module also builds
//! the block word obtained by substituting long zero blocks into the
//! binary counting word, whose complexity stays linear for short blocks
//! but eventually exceeds any rate below a prescribed exponential.

use crate::alphabet::Alphabet;
use crate::bounds::LogParam;
use crate::certified::{adaptive, Enclosure};
use crate::error::{Error, Result};
use crate::generate::champernowne::champernowne;
use crate::stream::{LetterSource, WordStream};
use crate::word::FiniteWord;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_rational::BigRational as Rational;

/// A non-erasing substitution: one non-empty image word per letter.
#[derive(Debug, Clone)]
pub struct Morphism {
    domain: Alphabet,
    target: Alphabet,
    images: Vec<FiniteWord>,
}

impl Morphism {
    /// Builds a morphism from `images[letter]`, one per domain letter.
    pub fn new(domain: Alphabet, target: Alphabet, images: Vec<FiniteWord>) -> Result<Morphism> {
        if images.len() != usize::from(domain.size()) {
            return Err(Error::Domain(format!(
                "need {} images, got {}",
                domain.size(),
                images.len()
            )));
        }
        for (letter, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::Domain(format!("image of letter {letter} is empty")));
            }
            if image.alphabet() != target {
                return Err(Error::BadAlphabet(format!(
                    "image of letter {letter} is over a different alphabet"
                )));
            }
        }
        Ok(Morphism {
            domain,
            target,
            images,
        })
    }

    /// The identity substitution on `alphabet`.
    pub fn identity(alphabet: Alphabet) -> Morphism {
        let images = (0..alphabet.size())
            .map(|c| FiniteWord::new(alphabet, vec![c]).expect("single letter"))
            .collect();
        Morphism {
            domain: alphabet,
            target: alphabet,
            images,
        }
    }

    pub fn domain(&self) -> Alphabet {
        self.domain
    }

    pub fn target(&self) -> Alphabet {
        self.target
    }

    /// Image of one letter.
    pub fn image(&self, letter: u8) -> Result<&FiniteWord> {
        self.images.get(usize::from(letter)).ok_or_else(|| {
            Error::BadAlphabet(format!(
                "letter {letter} has no image under the substitution"
            ))
        })
    }

    /// Applies the substitution to a finite word.
    pub fn apply_finite(&self, letters: &[u8]) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for &c in letters {
            out.extend_from_slice(self.image(c)?.letters());
        }
        Ok(out)
    }
}

struct MorphicSource {
    inner: WordStream,
    morphism: Morphism,
    consumed: usize,
}

impl LetterSource for MorphicSource {
    fn alphabet(&self) -> Alphabet {
        self.morphism.target()
    }

    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
        while buf.len() < target {
            let letter = self.inner.segment(self.consumed, 1)?[0];
            buf.extend_from_slice(self.morphism.image(letter)?.letters());
            self.consumed += 1;
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("substitution applied to {}", self.inner.describe())
    }
}

/// Applies a substitution to an infinite word, lazily.
pub fn apply_morphism(inner: WordStream, morphism: Morphism) -> Result<WordStream> {
    if usize::from(inner.alphabet().size()) != morphism.images.len() {
        return Err(Error::BadAlphabet(format!(
            "substitution has {} images but the word uses {} letters",
            morphism.images.len(),
            inner.alphabet().size()
        )));
    }
    Ok(WordStream::new(Box::new(MorphicSource {
        inner,
        morphism,
        consumed: 0,
    })))
}

/// Smallest `m >= 1` with `log(m+1)/m < c`, i.e. `m + 1 < e^{cm}`.
///
/// `log(n+1)/n` is strictly decreasing, so blocks of length `n <= 2m-1`
/// keep the complexity of the block word below `e^{cn}` while longer
/// blocks eventually push it above any smaller rate. The comparison is
/// exact: for `c = log t` both sides are rational, and for rational `c`
/// the two sides are never equal, so interval refinement terminates.
fn smallest_exponential_majority(c: &LogParam) -> Result<u64> {
    const CAP: u64 = 1 << 20;
    for m in 1..CAP {
        let target = Rational::from_integer((m + 1).into());
        let ord = adaptive(
            |prec| {
                let e: Enclosure = c.exp_n_enclosure(m, prec)?;
                Ok(e.cmp_rational(&target))
            },
            "compare e^{cm} with m+1",
        )?;
        if ord == Ordering::Greater {
            return Ok(m);
        }
    }
    Err(Error::Budget(String::from(
        "growth rate too small: no block length below 2^20 works",
    )))
}

/// The zero-block substitution word for a rate `0 < c <= log 2`.
///
/// Returns the word together with the block length `K = 2m - 1`, where
/// `m` is the smallest block count with `log(m+1)/m < c`: the letter `0`
/// of the binary counting word becomes `0^{K+1}` and the letter `1`
/// becomes `0^K 1`. Every numeral boundary is then marked by an isolated
/// `1`, the complexity is `n + 1` for `n <= K + 1`, and it grows like a
/// power of two in `n / (K + 1)` beyond.
pub fn prop6_word(c: &LogParam) -> Result<(WordStream, u64)> {
    if !c.is_positive() {
        return Err(Error::Domain(String::from("rate must be positive")));
    }
    let two = Rational::from_integer(2.into());
    if c.cmp_ln_rational(&two)? == Ordering::Greater {
        return Err(Error::Domain(String::from("rate must be at most log 2")));
    }
    let m = smallest_exponential_majority(c)?;
    let k = 2 * m - 1;
    let ku = usize::try_from(k).map_err(|_| Error::Budget(String::from("block too long")))?;
    let binary = Alphabet::new(2)?;
    let zero_image = vec![0u8; ku + 1];
    let mut one_image = vec![0u8; ku + 1];
    one_image[ku] = 1;
    let morphism = Morphism::new(
        binary,
        binary,
        vec![
            FiniteWord::new(binary, zero_image)?,
            FiniteWord::new(binary, one_image)?,
        ],
    )?;
    let word = apply_morphism(champernowne(2)?, morphism)?;
    Ok((word, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::FixedSource;

    fn stream_of(letters: &[u8], q: u32) -> WordStream {
        let alphabet = Alphabet::new(q).unwrap();
        WordStream::new(Box::new(FixedSource::new(alphabet, letters.to_vec())))
    }

    #[test]
    fn identity_is_a_no_op() {
        let a = Alphabet::new(3).unwrap();
        let m = Morphism::identity(a);
        assert_eq!(m.apply_finite(&[0, 2, 1]).unwrap(), vec![0, 2, 1]);
        let w = apply_morphism(champernowne(3).unwrap(), m).unwrap();
        let mut w = w;
        assert_eq!(w.prefix(5).unwrap(), &[0, 1, 2, 1, 0]);
    }

    #[test]
    fn doubling_substitution() {
        let a = Alphabet::new(2).unwrap();
        let m = Morphism::new(
            a,
            a,
            vec![
                FiniteWord::parse(a, "00").unwrap(),
                FiniteWord::parse(a, "11").unwrap(),
            ],
        )
        .unwrap();
        let mut w = apply_morphism(stream_of(&[0, 1, 1, 0], 2), m).unwrap();
        assert_eq!(w.prefix(8).unwrap(), &[0, 0, 1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn empty_images_are_rejected() {
        let a = Alphabet::new(2).unwrap();
        let err = Morphism::new(
            a,
            a,
            vec![FiniteWord::empty(a), FiniteWord::parse(a, "1").unwrap()],
        );
        assert!(err.is_err());
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let a2 = Alphabet::new(2).unwrap();
        let a3 = Alphabet::new(3).unwrap();
        let m = Morphism::identity(a2);
        assert!(apply_morphism(champernowne(3).unwrap(), m).is_err());
        let m3 = Morphism::identity(a3);
        assert!(apply_morphism(champernowne(2).unwrap(), m3).is_err());
    }

    #[test]
    fn block_length_for_rational_rate() {
        // c = 3/10: log(m+1)/m first drops below 0.3 at m = 7
        // (log 8 = 2.079... < 2.1), so K = 13.
        let c = LogParam::parse("3/10").unwrap();
        let (_, k) = prop6_word(&c).unwrap();
        assert_eq!(k, 13);
    }

    #[test]
    fn block_length_for_log_two() {
        // c = log 2: m = 1 fails because log(2)/1 is not strictly below
        // log 2, and m = 2 gives log(3)/2 < log 2 (3 < 4). So K = 3.
        let c = LogParam::parse("log(2)").unwrap();
        let (_, k) = prop6_word(&c).unwrap();
        assert_eq!(k, 3);
    }

    #[test]
    fn block_word_prefix_shape() {
        // K = 3: images 0 -> 0000, 1 -> 0001, counting word 0 1 10 11...
        let c = LogParam::parse("log(2)").unwrap();
        let (mut w, k) = prop6_word(&c).unwrap();
        assert_eq!(k, 3);
        let expect: Vec<u8> = [
            "0000", "0001", "0001", "0000", "0001", "0001", "0001", "0000", "0000", "0001",
        ]
        .concat()
        .bytes()
        .map(|b| b - b'0')
        .collect();
        assert_eq!(w.prefix(40).unwrap(), &expect[..]);
    }

    #[test]
    fn block_word_has_two_one_letter_factors() {
        let c = LogParam::parse("3/10").unwrap();
        let (mut w, _) = prop6_word(&c).unwrap();
        let profile = w.profile(1, 4096).unwrap();
        assert_eq!(profile.counts[1], num_bigint::BigUint::from(2u32));
    }

    #[test]
    fn rates_out_of_range_are_rejected() {
        assert!(prop6_word(&LogParam::parse("0").unwrap()).is_err());
        assert!(prop6_word(&LogParam::parse("7/10").unwrap()).is_err());
        assert!(prop6_word(&LogParam::parse("log(3)").unwrap()).is_err());
    }
}
