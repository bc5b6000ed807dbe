//! Online suffix automaton with per-length distinct-factor counts.
//!
//! Construction follows the classical online algorithm (see
//! <https://cp-algorithms.com/string/suffix-automaton.html>). On top of it
//! we maintain a difference array over factor lengths: appending a letter
//! to a prefix of length `n-1` creates exactly one new factor of every
//! length in `[L+1, n]`, where `L` is the length of the longest suffix of
//! the new prefix that occurred before (the link length of the new state).
//! Prefix sums of the difference array therefore give the whole profile.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    len: u32,
    link: u32,
    first_edge: u32,
}

#[derive(Debug, Clone)]
struct Edge {
    letter: u8,
    to: u32,
    next: u32,
}

/// Suffix automaton of a growing word, indexing its distinct factors.
#[derive(Debug, Clone)]
pub struct FactorIndex {
    alphabet: Alphabet,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    last: u32,
    len: usize,
    /// `delta[k]` difference array: `p(k) = sum(delta[1..=k])`.
    delta: Vec<i64>,
    newest_threshold: usize,
}

impl FactorIndex {
    pub fn new(alphabet: Alphabet) -> Self {
        FactorIndex {
            alphabet,
            nodes: vec![Node { len: 0, link: NONE, first_edge: NONE }],
            edges: Vec::new(),
            last: 0,
            len: 0,
            delta: vec![0, 0],
            newest_threshold: 1,
        }
    }

    pub fn from_letters(alphabet: Alphabet, letters: &[u8]) -> Result<Self> {
        let mut idx = FactorIndex::new(alphabet);
        for &c in letters {
            idx.append(c)?;
        }
        Ok(idx)
    }

    /// Length of the indexed word.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of automaton states (at most `2 |w| - 1` plus the root).
    pub fn state_count(&self) -> usize {
        self.nodes.len()
    }

    /// After the most recent [`append`](Self::append): the smallest length
    /// `k*` such that the append created a new factor of length `k` for
    /// every `k` in `k* ..= len` (and none shorter).
    #[inline]
    pub fn newest_factor_threshold(&self) -> usize {
        self.newest_threshold
    }

    fn trans(&self, node: u32, c: u8) -> Option<u32> {
        let mut e = self.nodes[node as usize].first_edge;
        while e != NONE {
            let edge = &self.edges[e as usize];
            if edge.letter == c {
                return Some(edge.to);
            }
            e = edge.next;
        }
        None
    }

    fn set_trans(&mut self, node: u32, c: u8, to: u32) {
        let mut e = self.nodes[node as usize].first_edge;
        while e != NONE {
            let edge = &mut self.edges[e as usize];
            if edge.letter == c {
                edge.to = to;
                return;
            }
            e = edge.next;
        }
        let head = self.nodes[node as usize].first_edge;
        self.edges.push(Edge { letter: c, to, next: head });
        self.nodes[node as usize].first_edge = (self.edges.len() - 1) as u32;
    }

    pub fn append(&mut self, c: u8) -> Result<()> {
        if !self.alphabet.contains(c) {
            return Err(Error::BadAlphabet(format!(
                "letter {c} outside alphabet of size {}",
                self.alphabet.size()
            )));
        }
        let cur = self.nodes.len() as u32;
        let cur_len = self.nodes[self.last as usize].len + 1;
        self.nodes.push(Node { len: cur_len, link: NONE, first_edge: NONE });
        let mut p = self.last;
        while p != NONE && self.trans(p, c).is_none() {
            self.set_trans(p, c, cur);
            p = self.nodes[p as usize].link;
        }
        if p == NONE {
            self.nodes[cur as usize].link = 0;
        } else {
            let q = self.trans(p, c).expect("loop exit implies edge");
            if self.nodes[p as usize].len + 1 == self.nodes[q as usize].len {
                self.nodes[cur as usize].link = q;
            } else {
                let clone = self.nodes.len() as u32;
                let clone_node = Node {
                    len: self.nodes[p as usize].len + 1,
                    link: self.nodes[q as usize].link,
                    first_edge: NONE,
                };
                self.nodes.push(clone_node);
                // Copy q's outgoing transitions.
                let mut e = self.nodes[q as usize].first_edge;
                while e != NONE {
                    let Edge { letter, to, next } = self.edges[e as usize];
                    self.set_trans(clone, letter, to);
                    e = next;
                }
                let mut pp = p;
                while pp != NONE && self.trans(pp, c) == Some(q) {
                    self.set_trans(pp, c, clone);
                    pp = self.nodes[pp as usize].link;
                }
                self.nodes[q as usize].link = clone;
                self.nodes[cur as usize].link = clone;
            }
        }
        self.last = cur;
        self.len += 1;
        // One new factor per length in [L+1, len].
        let link = self.nodes[cur as usize].link;
        let l = self.nodes[link as usize].len as usize;
        self.newest_threshold = l + 1;
        self.delta.resize(self.len + 2, 0);
        self.delta[l + 1] += 1;
        self.delta[self.len + 1] -= 1;
        Ok(())
    }

    /// `p(n)`: distinct factors of length `n` (`p(0) = 1`).
    pub fn distinct_count(&self, n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        if n > self.len {
            return 0;
        }
        let mut acc: i64 = 0;
        for k in 1..=n {
            acc += self.delta[k];
        }
        debug_assert!(acc >= 0);
        acc as u64
    }

    /// The profile `p(0..=n_max)` in one pass.
    pub fn counts_up_to(&self, n_max: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(1u64);
        let mut acc: i64 = 0;
        for k in 1..=n_max {
            if k <= self.len {
                acc += self.delta[k];
                out.push(acc as u64);
            } else {
                out.push(0);
            }
        }
        out
    }

    /// Total number of distinct non-empty factors.
    pub fn total_factors(&self) -> u64 {
        let mut acc: i64 = 0;
        let mut total: i64 = 0;
        for k in 1..=self.len {
            acc += self.delta[k];
            total += acc;
        }
        total as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_distinct_substrings_abcbc() {
        // 12 distinct non-empty substrings of "abcbc".
        let a = Alphabet::new(3).unwrap();
        let idx = FactorIndex::from_letters(a, &[0, 1, 2, 1, 2]).unwrap();
        let total: u64 = (1..=5).map(|n| idx.distinct_count(n)).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn state_count_stays_linear() {
        let a = Alphabet::new(2).unwrap();
        let letters: Vec<u8> = (0..2000u32)
            .map(|i| ((i * i * 31 + i * 7 + 3) % 5 == 0) as u8)
            .collect();
        let idx = FactorIndex::from_letters(a, &letters).unwrap();
        assert!(idx.state_count() <= 2 * letters.len());
    }
}
