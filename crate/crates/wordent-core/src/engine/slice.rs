//! Exact enumeration of the length-`n` slice of a complexity-bounded
//! family: all words `w` of length `n` with `p_w(k) <= floor(f(k))` for
//! every `k <= n`.
//!
//! The slice count `|S_n|` yields the certified upper bound
//! `(1/n) log |S_n|` on the entropy of the family (every factor of a
//! member word lies in the slice, so `p_w(N) <= |S_n|^{ceil(N/n)}`),
//! and the retained slice words seed the follower graphs from which
//! lower-bound certificates are built.
//!
//! Enumeration is breadth-first, level by level: the result always
//! reports the deepest *completed* level, so a budget abort can only
//! shorten the answer, never corrupt a count. Within a level, rows are
//! kept in lexicographic order; a slice rooted at a fixed prefix
//! enumerates exactly the rows extending that prefix, so disjoint roots
//! can be processed independently (even on different machines) and
//! merged back into the sequential result byte for byte.

use crate::alphabet::Alphabet;
use crate::bounds::BoundSpec;
use crate::certified::{adaptive, ln_rational, Enclosure};
use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational as Rational;

/// Resource limits for slice enumeration.
#[derive(Debug, Clone)]
pub struct EnumBudget {
    /// Hard cap on rows per level; exceeding it aborts the level and
    /// reports the previous level as the completed depth.
    pub max_rows: u64,
    /// Largest final level that is retained as explicit rows.
    pub keep_leaves: u64,
}

impl Default for EnumBudget {
    fn default() -> EnumBudget {
        EnumBudget {
            max_rows: 1 << 22,
            keep_leaves: 1 << 20,
        }
    }
}

/// The enumerated slice: exact per-level counts and, when small enough,
/// the rows of the deepest completed level.
#[derive(Debug, Clone)]
pub struct Slice {
    alphabet: Alphabet,
    root: Vec<u8>,
    requested: usize,
    completed: usize,
    counts: Vec<u64>,
    leaves: Option<Vec<u8>>,
    truncated: bool,
    rows_expanded: u64,
    desc: String,
}

impl Slice {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// The fixed prefix this slice was rooted at (empty for the full
    /// slice).
    pub fn root(&self) -> &[u8] {
        &self.root
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    /// Deepest level whose count is exact and complete.
    pub fn completed(&self) -> usize {
        self.completed
    }

    /// `counts[k]` = number of slice words of length `k`, for
    /// `k <= completed()`. In a rooted slice, levels at or below the
    /// root length count only the root chain.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_at(&self, n: usize) -> Option<u64> {
        self.counts.get(n).copied()
    }

    /// Rows of the deepest completed level, lexicographic, when retained.
    pub fn leaf_rows(&self) -> Option<impl Iterator<Item = &[u8]> + '_> {
        if self.completed == 0 {
            return None;
        }
        self.leaves
            .as_ref()
            .map(|flat| flat.chunks_exact(self.completed))
    }

    /// Whether enumeration stopped early on a budget.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Total rows expanded across all levels (a work measure).
    pub fn rows_expanded(&self) -> u64 {
        self.rows_expanded
    }

    pub fn describe(&self) -> &str {
        &self.desc
    }
}

/// Enumerates the slice of `spec`'s family at depth `n`.
pub fn enumerate_slice(spec: &BoundSpec, n: usize, budget: &EnumBudget) -> Result<Slice> {
    enumerate_slice_rooted(spec, n, budget, &[])
}

/// Enumerates only the slice words extending `root`. Counts at levels
/// at or below the root length describe the root's own prefix chain
/// (one word per level while the prefix itself is in the family).
pub fn enumerate_slice_rooted(
    spec: &BoundSpec,
    n: usize,
    budget: &EnumBudget,
    root: &[u8],
) -> Result<Slice> {
    let alphabet = Alphabet::new(spec.alphabet_size())?;
    let caps = spec.floor_table_clamped(n as u64, u64::MAX)?;
    enumerate_slice_with_caps(alphabet, &caps, spec.describe(), n, budget, root)
}

/// Enumeration against an explicit per-length cap table (`caps[k]` is
/// the largest allowed number of distinct length-`k` windows,
/// `0 <= k <= n`). Used for pointwise-minimum experiments where the cap
/// table is not a single bound's floor table.
pub(crate) fn enumerate_slice_with_caps(
    alphabet: Alphabet,
    caps: &[u64],
    desc: String,
    n: usize,
    budget: &EnumBudget,
    root: &[u8],
) -> Result<Slice> {
    let q = alphabet.size();
    if root.len() > n {
        return Err(Error::Domain(format!(
            "root of length {} exceeds the requested depth {n}",
            root.len()
        )));
    }
    if caps.len() != n + 1 {
        return Err(Error::Domain(format!(
            "cap table has {} entries, need {}",
            caps.len(),
            n + 1
        )));
    }
    for &c in root {
        if !alphabet.contains(c) {
            return Err(Error::BadAlphabet(format!(
                "root letter {c} outside the {q}-letter alphabet"
            )));
        }
    }

    // Validate the root prefix by prefix; a violation at depth d zeroes
    // every level from d on.
    let mut counts = vec![1u64];
    let mut valid_root_depth = root.len();
    'root: for d in 1..=root.len() {
        for k in 1..=d {
            if distinct_windows(&root[..d], k) > caps[k] {
                valid_root_depth = d - 1;
                break 'root;
            }
        }
        counts.push(1);
    }
    if valid_root_depth < root.len() {
        counts.resize(n + 1, 0);
        return Ok(Slice {
            alphabet,
            root: root.to_vec(),
            requested: n,
            completed: n,
            counts,
            leaves: Some(Vec::new()),
            truncated: false,
            rows_expanded: 0,
            desc,
        });
    }

    let mut level = root.len();
    let mut rows: Vec<u8> = root.to_vec();
    let mut row_count: u64 = 1;
    let mut rows_expanded: u64 = 0;
    let mut truncated = false;

    while level < n {
        let child_len = level + 1;
        let binding = binding_scales(caps, q, child_len);
        let mut next_rows: Vec<u8> = Vec::new();
        let mut next_count: u64 = 0;
        let mut aborted = false;

        let parents: Box<dyn Iterator<Item = &[u8]>> = if level == 0 {
            Box::new(core::iter::once(&rows[..0]))
        } else {
            Box::new(rows.chunks_exact(level))
        };
        'parents: for parent in parents {
            rows_expanded += 1;
            // Window sets of the parent at each binding scale.
            let sets: Vec<KeySet> = binding
                .iter()
                .map(|&k| KeySet::of_windows(alphabet, parent, k))
                .collect();
            for c in 0..q {
                let mut ok = true;
                for (&k, set) in binding.iter().zip(sets.iter()) {
                    // The child's windows are the parent's plus the one
                    // ending at the new letter.
                    if !set.contains_suffix(alphabet, parent, c, k)
                        && set.len() as u64 + 1 > caps[k]
                    {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                if next_count + 1 > budget.max_rows {
                    aborted = true;
                    next_rows.clear();
                    break 'parents;
                }
                next_count += 1;
                next_rows.extend_from_slice(parent);
                next_rows.push(c);
            }
        }

        if aborted {
            truncated = true;
            break;
        }
        counts.push(next_count);
        rows = next_rows;
        row_count = next_count;
        level = child_len;
        if next_count == 0 {
            // The family is empty from here on; all deeper counts are 0.
            counts.resize(n + 1, 0);
            level = n;
            rows.clear();
            break;
        }
    }

    let leaves = if row_count <= budget.keep_leaves {
        Some(rows)
    } else {
        None
    };
    Ok(Slice {
        alphabet,
        root: root.to_vec(),
        requested: n,
        completed: level,
        counts,
        leaves,
        truncated,
        rows_expanded,
        desc,
    })
}

/// Scales at which the cap can actually bite at depth `d`: those `k`
/// with `floor f(k)` below the unconstrained window count
/// `min(q^k, d - k + 1)`.
fn binding_scales(caps: &[u64], q: u8, d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..=d {
        let qk = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        let free = qk.min((d - k + 1) as u128);
        if (caps[k] as u128) < free {
            out.push(k);
        }
    }
    out
}

fn distinct_windows(word: &[u8], k: usize) -> u64 {
    if k > word.len() {
        return 0;
    }
    let set: BTreeSet<&[u8]> = word.windows(k).collect();
    set.len() as u64
}

/// Set of length-`k` windows, packed into `u128` keys when they fit.
enum KeySet {
    Packed(BTreeSet<u128>),
    Bytes(BTreeSet<Vec<u8>>),
}

impl KeySet {
    fn packable(alphabet: Alphabet, k: usize) -> bool {
        (k as u32) * alphabet.bits_per_letter() <= 126
    }

    fn of_windows(alphabet: Alphabet, word: &[u8], k: usize) -> KeySet {
        if KeySet::packable(alphabet, k) {
            let bits = alphabet.bits_per_letter();
            let mut set = BTreeSet::new();
            if k <= word.len() && k > 0 {
                let mask: u128 = (1u128 << (bits as usize * k)) - 1;
                let mut key: u128 = 0;
                for (i, &c) in word.iter().enumerate() {
                    key = ((key << bits) | c as u128) & mask;
                    if i + 1 >= k {
                        set.insert(key);
                    }
                }
            }
            KeySet::Packed(set)
        } else {
            let set = if k <= word.len() && k > 0 {
                word.windows(k).map(<[u8]>::to_vec).collect()
            } else {
                BTreeSet::new()
            };
            KeySet::Bytes(set)
        }
    }

    fn len(&self) -> usize {
        match self {
            KeySet::Packed(s) => s.len(),
            KeySet::Bytes(s) => s.len(),
        }
    }

    /// Whether the window formed by the last `k - 1` letters of `parent`
    /// followed by `c` is already present.
    fn contains_suffix(&self, alphabet: Alphabet, parent: &[u8], c: u8, k: usize) -> bool {
        if k > parent.len() + 1 {
            return false;
        }
        let tail = &parent[parent.len() + 1 - k..];
        match self {
            KeySet::Packed(s) => {
                let bits = alphabet.bits_per_letter();
                let mut key: u128 = 0;
                for &x in tail {
                    key = (key << bits) | x as u128;
                }
                key = (key << bits) | c as u128;
                s.contains(&key)
            }
            KeySet::Bytes(s) => {
                let mut w = Vec::with_capacity(k);
                w.extend_from_slice(tail);
                w.push(c);
                s.contains(&w)
            }
        }
    }
}

/// Merges rooted slices back into the full result. `base` must be the
/// full slice at the fan-out depth with its rows retained; `parts` must
/// be one rooted slice per base row, in base row order.
pub fn merge_rooted(base: &Slice, parts: &[Slice]) -> Result<Slice> {
    if !base.root.is_empty() || base.truncated {
        return Err(Error::Domain(String::from(
            "merge base must be an untruncated full slice",
        )));
    }
    let rows: Vec<&[u8]> = match base.leaf_rows() {
        Some(it) => it.collect(),
        None => {
            return Err(Error::Domain(String::from(
                "merge base did not retain its rows",
            )))
        }
    };
    if rows.len() != parts.len() {
        return Err(Error::Domain(format!(
            "{} parts for {} base rows",
            parts.len(),
            rows.len()
        )));
    }
    let requested = parts
        .first()
        .map(|p| p.requested)
        .unwrap_or(base.requested);
    let mut completed = requested;
    let mut truncated = false;
    let mut rows_expanded = base.rows_expanded;
    for (part, &row) in parts.iter().zip(rows.iter()) {
        if part.root != row {
            return Err(Error::Domain(String::from(
                "part roots do not match base rows",
            )));
        }
        if part.alphabet != base.alphabet || part.requested != requested {
            return Err(Error::Domain(String::from(
                "parts disagree on alphabet or depth",
            )));
        }
        completed = completed.min(part.completed);
        truncated |= part.truncated;
        rows_expanded += part.rows_expanded;
    }
    let mut counts = base.counts[..=base.completed].to_vec();
    for level in base.completed + 1..=completed {
        let mut total: u64 = 0;
        for part in parts {
            total = total
                .checked_add(part.counts[level])
                .ok_or_else(|| Error::Budget(String::from("slice count overflowed u64")))?;
        }
        counts.push(total);
    }
    let leaves = if parts
        .iter()
        .all(|p| p.completed == completed && p.leaves.is_some())
    {
        let mut flat = Vec::new();
        for part in parts {
            flat.extend_from_slice(part.leaves.as_ref().unwrap());
        }
        Some(flat)
    } else {
        None
    };
    Ok(Slice {
        alphabet: base.alphabet,
        root: Vec::new(),
        requested,
        completed,
        counts,
        leaves,
        truncated,
        rows_expanded,
        desc: base.desc.clone(),
    })
}

/// A certified entropy upper bound read off a slice.
#[derive(Debug, Clone)]
pub struct UpperBound {
    /// Enclosure of `min_n (1/n) log |S_n|` over the completed levels.
    pub value: Enclosure,
    /// The level attaining the minimum.
    pub witness_n: usize,
    /// The slice count at the witness level.
    pub witness_count: u64,
}

/// `min_{1 <= n <= completed} (1/n) log |S_n|`, an upper bound on the
/// entropy of every word in the family.
pub fn upper_bound(slice: &Slice, tol: &Rational) -> Result<UpperBound> {
    if !slice.root.is_empty() {
        return Err(Error::Domain(String::from(
            "upper bounds need the full slice, not a rooted part",
        )));
    }
    if slice.completed == 0 {
        return Err(Error::Domain(String::from(
            "no completed level to bound from",
        )));
    }
    for n in 1..=slice.completed {
        if slice.counts[n] == 0 {
            return Err(Error::EmptyLanguage);
        }
    }
    let (value, witness_n) = adaptive(
        |prec| {
            let mut vals = Vec::with_capacity(slice.completed);
            for n in 1..=slice.completed {
                let c = Rational::from_integer(slice.counts[n].into());
                let per = Rational::new(1.into(), (n as u64).into());
                vals.push(ln_rational(&c, prec)?.scale(&per));
            }
            let mut best = vals[0].clone();
            for v in &vals[1..] {
                best = best.min(v);
            }
            if best.width() > *tol {
                return Ok(None);
            }
            let witness = vals
                .iter()
                .position(|v| v.lo() <= best.hi())
                .expect("some level attains the minimum")
                + 1;
            Ok(Some((best, witness)))
        },
        "slice entropy upper bound",
    )?;
    Ok(UpperBound {
        value,
        witness_n,
        witness_count: slice.counts[witness_n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{parse_bound, BoundSpec};

    fn golden() -> BoundSpec {
        BoundSpec::golden()
    }

    fn naive_slice_count(spec: &BoundSpec, q: u8, n: usize) -> u64 {
        // Oracle: enumerate all q^n words, check every scale directly.
        let caps = spec.floor_table_clamped(n as u64, u64::MAX).unwrap();
        let mut count = 0u64;
        let mut word = vec![0u8; n];
        'words: loop {
            let ok = (1..=n).all(|k| distinct_windows(&word, k) <= caps[k]);
            if ok {
                count += 1;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    break 'words;
                }
                pos -= 1;
                if word[pos] + 1 < q {
                    word[pos] += 1;
                    break;
                }
                word[pos] = 0;
            }
        }
        count
    }

    #[test]
    fn matches_naive_enumeration_binary() {
        let spec = golden();
        let slice = enumerate_slice(&spec, 12, &EnumBudget::default()).unwrap();
        for n in 1..=12usize {
            assert_eq!(
                slice.counts()[n],
                naive_slice_count(&spec, 2, n),
                "level {n}"
            );
        }
    }

    #[test]
    fn matches_naive_enumeration_ternary() {
        let spec = parse_bound("2*n + 1").unwrap().with_alphabet(3).unwrap();
        let slice = enumerate_slice(&spec, 7, &EnumBudget::default()).unwrap();
        for n in 1..=7usize {
            assert_eq!(
                slice.counts()[n],
                naive_slice_count(&spec, 3, n),
                "level {n}"
            );
        }
    }

    #[test]
    fn golden_slice_counts() {
        let slice = enumerate_slice(&golden(), 20, &EnumBudget::default()).unwrap();
        assert_eq!(slice.completed(), 20);
        assert!(!slice.truncated());
        assert_eq!(slice.counts()[5], 28);
        assert_eq!(slice.counts()[6], 46);
        assert_eq!(slice.counts()[20], 35454);
        let rows: Vec<&[u8]> = slice.leaf_rows().unwrap().collect();
        assert_eq!(rows.len(), 35454);
        // Lexicographic order of the retained rows.
        assert!(rows.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn golden_upper_bounds() {
        let tol = Rational::new(1.into(), 1_000_000_000.into());
        let s6 = enumerate_slice(&golden(), 6, &EnumBudget::default()).unwrap();
        let u6 = upper_bound(&s6, &tol).unwrap();
        assert_eq!(u6.witness_n, 6);
        assert_eq!(u6.witness_count, 46);
        // (1/6) ln 46 = 0.638107...
        assert!((u6.value.mid_f64() - 0.638_107_24).abs() < 1e-6);

        let s20 = enumerate_slice(&golden(), 20, &EnumBudget::default()).unwrap();
        let u20 = upper_bound(&s20, &tol).unwrap();
        assert_eq!(u20.witness_n, 20);
        // (1/20) ln 35454 = 0.523790...
        assert!((u20.value.mid_f64() - 0.523_790_8).abs() < 1e-5);
    }

    #[test]
    fn upper_bound_is_monotone_in_depth() {
        let tol = Rational::new(1.into(), 1_000_000.into());
        let mut prev = f64::INFINITY;
        for n in 4..=14usize {
            let s = enumerate_slice(&golden(), n, &EnumBudget::default()).unwrap();
            let u = upper_bound(&s, &tol).unwrap();
            let mid = u.value.mid_f64();
            assert!(mid <= prev + 1e-9, "n={n}: {mid} > {prev}");
            prev = mid;
        }
    }

    #[test]
    fn budget_abort_reports_last_completed_level() {
        let budget = EnumBudget {
            max_rows: 40,
            keep_leaves: 1 << 20,
        };
        let slice = enumerate_slice(&golden(), 20, &budget).unwrap();
        assert!(slice.truncated());
        // |S_5| = 28 fits in 40 rows, |S_6| = 46 does not.
        assert_eq!(slice.completed(), 5);
        assert_eq!(slice.counts().len(), 6);
        assert_eq!(slice.counts()[5], 28);
        let rows: Vec<&[u8]> = slice.leaf_rows().unwrap().collect();
        assert_eq!(rows.len(), 28);
    }

    #[test]
    fn vanishing_bound_empties_the_family() {
        // floor f = 4,3,2,1,0: no word of length 4 has zero 4-windows.
        let spec = parse_bound("4 - n").unwrap().with_alphabet(2).unwrap();
        let slice = enumerate_slice(&spec, 4, &EnumBudget::default()).unwrap();
        assert_eq!(slice.counts(), &[1, 2, 4, 8, 0]);
        assert!(matches!(
            upper_bound(&slice, &Rational::new(1.into(), 1000.into())),
            Err(Error::EmptyLanguage)
        ));
    }

    #[test]
    fn rooted_parts_merge_to_the_full_slice() {
        let budget = EnumBudget::default();
        let direct = enumerate_slice(&golden(), 10, &budget).unwrap();
        let base = enumerate_slice(&golden(), 3, &budget).unwrap();
        let parts: Vec<Slice> = base
            .leaf_rows()
            .unwrap()
            .map(|root| enumerate_slice_rooted(&golden(), 10, &budget, root).unwrap())
            .collect();
        let merged = merge_rooted(&base, &parts).unwrap();
        assert_eq!(merged.counts(), direct.counts());
        assert_eq!(merged.completed(), direct.completed());
        let a: Vec<&[u8]> = merged.leaf_rows().unwrap().collect();
        let b: Vec<&[u8]> = direct.leaf_rows().unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_root_yields_empty_part() {
        // 11 already has two distinct 1-windows? No: it has one distinct
        // 2-window and one 1-window; it violates nothing at the golden
        // caps until scale 2 at depth 2: p(2)=1 <= 3. Use a genuinely
        // invalid root: 0110 has windows 01,11,10 = 3 <= 3 ok; extend to
        // depth 5 root 01100 -> windows 01,11,10,00 = 4 > 3.
        let root = [0u8, 1, 1, 0, 0];
        let slice =
            enumerate_slice_rooted(&golden(), 8, &EnumBudget::default(), &root).unwrap();
        assert_eq!(slice.counts()[5..], [0, 0, 0, 0]);
        assert_eq!(slice.counts()[..5], [1, 1, 1, 1, 1]);
    }
}
