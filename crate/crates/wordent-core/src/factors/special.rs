//! Right-extension statistics of length-`n` factors.
//!
//! For a factor `v` of `u`, `d+(v)` is the number of letters `a` such that
//! `va` also occurs in `u`. Factors with `d+(v) >= 2` are the right-special
//! factors; their excess `sum (d+(v) - 1)` equals `p(n+1) - p(n)` when the
//! sum runs over all length-`n` factors (a factor occurring only as the
//! final suffix contributes `-1`). Both the signed total and the sum
//! restricted to extendable factors are reported, since the two natural
//! conventions differ exactly when the final suffix is a dead end.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::word::FiniteWord;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpecialFactorStats {
    pub n: usize,
    /// Right-special factors (`d+ >= 2`) in lexicographic order.
    pub special: Vec<(FiniteWord, u32)>,
    /// `sum over all length-n factors of (d+(v) - 1) = p(n+1) - p(n)`.
    pub signed_excess: i64,
    /// Same sum restricted to factors with at least one extension.
    pub extendable_excess: u64,
    /// True when some length-`n` factor has no right extension in `u`
    /// (necessarily the final suffix, occurring nowhere else).
    pub has_dead_end: bool,
}

/// Computes extension statistics for the length-`n` factors of `letters`.
pub fn special_factor_stats(
    alphabet: Alphabet,
    letters: &[u8],
    n: usize,
) -> Result<SpecialFactorStats> {
    if n == 0 || n > letters.len() {
        return Err(Error::Domain(format!(
            "need 1 <= n <= |u|, got n={n}, |u|={}",
            letters.len()
        )));
    }
    if let Some(&bad) = letters.iter().find(|&&l| !alphabet.contains(l)) {
        return Err(Error::BadAlphabet(format!("letter {bad} out of range")));
    }
    let mut ext: BTreeMap<&[u8], u64> = BTreeMap::new();
    for i in 0..=letters.len() - n {
        let window = &letters[i..i + n];
        let mask = ext.entry(window).or_insert(0);
        if i + n < letters.len() {
            *mask |= 1u64 << letters[i + n];
        }
    }
    let mut special = Vec::new();
    let mut signed: i64 = 0;
    let mut extendable: u64 = 0;
    let mut dead_end = false;
    for (window, mask) in &ext {
        let d = mask.count_ones();
        signed += d as i64 - 1;
        if d == 0 {
            dead_end = true;
        } else {
            extendable += (d - 1) as u64;
        }
        if d >= 2 {
            special.push((
                FiniteWord::new(alphabet, window.to_vec())?,
                d,
            ));
        }
    }
    Ok(SpecialFactorStats {
        n,
        special,
        signed_excess: signed,
        extendable_excess: extendable,
        has_dead_end: dead_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::factor_count;
    use num_traits::ToPrimitive;

    #[test]
    fn excess_equals_profile_difference() {
        let a = Alphabet::new(2).unwrap();
        let letters = [0u8, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0];
        for n in 1..letters.len() {
            let st = special_factor_stats(a, &letters, n).unwrap();
            let p_n = factor_count(a, &letters, n).unwrap().to_i64().unwrap();
            let p_n1 = factor_count(a, &letters, n + 1).unwrap().to_i64().unwrap();
            assert_eq!(st.signed_excess, p_n1 - p_n, "n={n}");
            assert_eq!(
                st.extendable_excess as i64,
                st.signed_excess + i64::from(st.has_dead_end),
            );
        }
    }

    #[test]
    fn sturmian_prefix_has_one_special_factor_per_length() {
        // In a Sturmian word exactly one factor of each length is
        // right-special with two extensions.
        let a = Alphabet::new(2).unwrap();
        let mut s = alloc::vec![0u8];
        while s.len() < 500 {
            let mut t = Vec::new();
            for &c in &s {
                if c == 0 {
                    t.extend_from_slice(&[0, 1]);
                } else {
                    t.push(0);
                }
            }
            s = t;
        }
        for n in 1..=8usize {
            let st = special_factor_stats(a, &s, n).unwrap();
            assert_eq!(st.special.len(), 1, "n={n}");
            assert_eq!(st.special[0].1, 2);
        }
    }
}
