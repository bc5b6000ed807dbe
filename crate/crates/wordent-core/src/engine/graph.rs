//! Graph machinery behind the entropy engine: strongly connected
//! components, certified spectral radii of nonnegative integer
//! matrices, and follower graphs distilled from enumerated slices.
//!
//! The spectral radius is bracketed by the classical two-sided bounds
//! `min_i (Mv)_i / v_i <= rho(M) <= max_i (Mv)_i / v_i`, valid for every
//! strictly positive vector `v` when `M` is irreducible. Because the
//! bounds hold for *any* positive vector, the iteration is free to round
//! its vectors to fixed precision — rounding can slow convergence but
//! never invalidate an emitted bound. Iterating on `M + I` (primitive
//! whenever `M` is irreducible) removes the usual failure of power
//! iteration on periodic matrices.

use crate::alphabet::Alphabet;
use crate::certified::Enclosure;
use crate::engine::slice::Slice;
use crate::error::{Error, Result};
use crate::generate::sft::SftSystem;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational as Rational;
use num_traits::{One, Signed};

/// Strongly connected components of a digraph on `0..adj.len()`, each
/// sorted ascending, in reverse topological order of discovery.
pub fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    const UNSEEN: u32 = u32::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, usize)> = Vec::new();
    let mut next_index: u32 = 0;
    let mut comps: Vec<Vec<u32>> = Vec::new();

    for start in 0..n as u32 {
        if index[start as usize] != UNSEEN {
            continue;
        }
        index[start as usize] = next_index;
        low[start as usize] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start as usize] = true;
        frames.push((start, 0));
        while let Some(&(v, cursor)) = frames.last() {
            let vi = v as usize;
            if cursor < adj[vi].len() {
                frames.last_mut().expect("nonempty").1 += 1;
                let w = adj[vi][cursor];
                let wi = w as usize;
                if index[wi] == UNSEEN {
                    index[wi] = next_index;
                    low[wi] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[wi] = true;
                    frames.push((w, 0));
                } else if on_stack[wi] {
                    low[vi] = low[vi].min(index[wi]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    let pi = parent as usize;
                    low[pi] = low[pi].min(low[vi]);
                }
                if low[vi] == index[vi] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("root still on stack");
                        on_stack[w as usize] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Smallest `b` with `2^-b <= tol`.
fn tol_bits(tol: &Rational) -> u32 {
    let d = tol.denom().magnitude().bits();
    let n = tol.numer().magnitude().bits();
    let b = (d + 1).saturating_sub(n);
    (b as u32).min(1 << 14)
}

/// A certified enclosure of width at most `tol` around the spectral
/// radius of an irreducible nonnegative integer matrix.
pub fn spectral_radius(matrix: &[Vec<u64>], tol: &Rational) -> Result<Enclosure> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::Domain(String::from("empty matrix")));
    }
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Domain(String::from("matrix is not square")));
    }
    if !tol.is_positive() {
        return Err(Error::Domain(String::from("tolerance must be positive")));
    }
    if n == 1 {
        return Ok(Enclosure::point(Rational::from_integer(matrix[0][0].into())));
    }
    let support: Vec<Vec<u32>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    if tarjan_scc(&support).len() != 1 {
        return Err(Error::Reducible);
    }

    // Iterate on M + I with a fixed-point vector of scale 2^shift.
    let shift = (tol_bits(tol) + 48) as usize;
    let unit = BigUint::one() << shift;
    let mut v: Vec<BigUint> = vec![unit; n];
    let one = Rational::one();
    let mut lo_best: Option<Rational> = None;
    let mut hi_best: Option<Rational> = None;

    for _ in 0..200_000u32 {
        let w: Vec<BigUint> = (0..n)
            .map(|i| {
                let mut acc = v[i].clone(); // the +I term
                for (j, &m) in matrix[i].iter().enumerate() {
                    if m > 0 {
                        acc += &v[j] * BigUint::from(m);
                    }
                }
                acc
            })
            .collect();
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (wi, vi) in w.iter().zip(v.iter()) {
            let ratio = Rational::new(
                BigInt::from(wi.clone()),
                BigInt::from(vi.clone()),
            );
            lo = Some(match lo {
                Some(x) => x.min(ratio.clone()),
                None => ratio.clone(),
            });
            hi = Some(match hi {
                Some(x) => x.max(ratio),
                None => ratio,
            });
        }
        let lo = lo.expect("n >= 1");
        let hi = hi.expect("n >= 1");
        lo_best = Some(match lo_best.take() {
            Some(x) => x.max(lo),
            None => lo,
        });
        hi_best = Some(match hi_best.take() {
            Some(x) => x.min(hi),
            None => hi,
        });
        let lb = lo_best.as_ref().expect("set above");
        let hb = hi_best.as_ref().expect("set above");
        if hb - lb <= *tol {
            return Ok(Enclosure::new(lb - &one, hb - &one));
        }
        // Renormalize so the largest entry is 2^shift; floor rounding is
        // sound (bounds hold for any positive vector), and clamping to 1
        // preserves positivity.
        let maxw = w.iter().max().expect("n >= 1").clone();
        v = w
            .into_iter()
            .map(|wi| ((wi << shift) / &maxw).max(BigUint::one()))
            .collect();
    }
    Err(Error::PrecisionExhausted(String::from(
        "spectral radius iteration did not converge",
    )))
}

/// The empirical follower graph of a slice: vertices are the
/// `memory`-windows observed in the retained rows, edges the observed
/// `(memory + 1)`-window transitions.
///
/// The graph is a *candidate* generator for a subshift inside the
/// family; nothing here certifies that every walk on it obeys the
/// complexity bound. Certification happens downstream, by exact finite
/// checks plus an envelope tail argument.
#[derive(Debug, Clone)]
pub struct FollowerGraph {
    alphabet: Alphabet,
    memory: usize,
    vertices: Vec<Vec<u8>>,
    adj: Vec<Vec<u32>>,
}

/// Builds the follower graph of `slice` at the given memory.
pub fn follower_graph(slice: &Slice, memory: usize) -> Result<FollowerGraph> {
    let alphabet = slice.alphabet();
    if memory == 0 {
        return Err(Error::Domain(String::from("memory must be at least 1")));
    }
    if slice.completed() < memory + 1 {
        return Err(Error::Domain(format!(
            "slice depth {} below the window length {}",
            slice.completed(),
            memory + 1
        )));
    }
    let bits = alphabet.bits_per_letter();
    if (memory as u32 + 1) * bits > 126 {
        return Err(Error::Budget(format!("memory {memory} too large to pack")));
    }
    let rows = slice.leaf_rows().ok_or_else(|| {
        Error::Domain(String::from(
            "slice did not retain its rows; raise the leaf budget",
        ))
    })?;
    let long_mask: u128 = (1u128 << (bits as usize * (memory + 1))) - 1;
    let short_mask: u128 = (1u128 << (bits as usize * memory)) - 1;
    let mut short: BTreeSet<u128> = BTreeSet::new();
    let mut long: BTreeSet<u128> = BTreeSet::new();
    for row in rows {
        let mut key: u128 = 0;
        for (i, &c) in row.iter().enumerate() {
            key = ((key << bits) | c as u128) & long_mask;
            if i + 1 >= memory {
                short.insert(key & short_mask);
            }
            if i + 1 >= memory + 1 {
                long.insert(key);
            }
        }
    }
    let vertices: Vec<Vec<u8>> = short
        .iter()
        .map(|&k| unpack_window(bits, memory, k))
        .collect();
    let rank: alloc::collections::BTreeMap<u128, u32> = short
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
    let short_mask: u128 = (1u128 << (bits as usize * memory)) - 1;
    for &w in &long {
        let u = w >> bits;
        let v = w & short_mask;
        adj[rank[&u] as usize].push(rank[&v]);
    }
    for targets in &mut adj {
        targets.sort_unstable();
        targets.dedup();
    }
    Ok(FollowerGraph {
        alphabet,
        memory,
        vertices,
        adj,
    })
}

fn unpack_window(bits: u32, len: usize, key: u128) -> Vec<u8> {
    let mask = (1u128 << bits) - 1;
    let mut out = vec![0u8; len];
    let mut k = key;
    for cell in out.iter_mut().rev() {
        *cell = (k & mask) as u8;
        k >>= bits;
    }
    out
}

impl FollowerGraph {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Observed windows, lexicographically sorted.
    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Strongly connected components, largest first (ties broken by the
    /// smallest contained vertex, for determinism).
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut comps = tarjan_scc(&self.adj);
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        comps
    }

    /// The subgraph induced by `keep` (ascending vertex ids), with
    /// vertices renumbered to their rank in `keep`.
    pub fn induced(&self, keep: &[u32]) -> Result<FollowerGraph> {
        if keep.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        if keep.windows(2).any(|p| p[0] >= p[1])
            || keep.last().map_or(false, |&v| v as usize >= self.vertices.len())
        {
            return Err(Error::Domain(String::from(
                "kept vertices must be ascending and in range",
            )));
        }
        let mut rank = vec![u32::MAX; self.vertices.len()];
        for (i, &v) in keep.iter().enumerate() {
            rank[v as usize] = i as u32;
        }
        let vertices: Vec<Vec<u8>> = keep
            .iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect();
        let adj: Vec<Vec<u32>> = keep
            .iter()
            .map(|&v| {
                self.adj[v as usize]
                    .iter()
                    .filter(|&&w| rank[w as usize] != u32::MAX)
                    .map(|&w| rank[w as usize])
                    .collect()
            })
            .collect();
        Ok(FollowerGraph {
            alphabet: self.alphabet,
            memory: self.memory,
            vertices,
            adj,
        })
    }

    /// Packages the graph as a finite-memory system (pruning dead
    /// vertices, recomputing connectivity).
    pub fn system(&self) -> Result<SftSystem> {
        SftSystem::from_parts(
            self.alphabet,
            self.memory,
            self.vertices.clone(),
            self.adj.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundSpec;
    use crate::certified::real_root;
    use crate::engine::slice::{enumerate_slice, EnumBudget};

    #[test]
    fn tarjan_partitions_a_two_component_graph() {
        // 0 -> 1 -> 2 -> 0 is a cycle; 3 <-> 4 is another; 2 -> 3 links.
        let adj: Vec<Vec<u32>> = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3]];
        let mut comps = tarjan_scc(&adj);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4]]);
    }

    #[test]
    fn tarjan_handles_isolated_vertices() {
        let adj: Vec<Vec<u32>> = vec![vec![], vec![], vec![]];
        let comps = tarjan_scc(&adj);
        assert_eq!(comps.len(), 3);
    }

    #[test]
    fn spectral_radius_of_the_golden_matrix() {
        let m = vec![vec![1, 1], vec![1, 0]];
        let tol = Rational::new(1.into(), BigInt::from(10u64).pow(12));
        let rho = spectral_radius(&m, &tol).unwrap();
        assert!(rho.width() <= tol);
        let phi = real_root(
            &[BigInt::from(-1), BigInt::from(-1), BigInt::from(1)],
            Rational::one(),
            Rational::from_integer(2.into()),
            &tol,
        )
        .unwrap();
        // The two enclosures must overlap.
        assert!(rho.lo() <= phi.hi() && phi.lo() <= rho.hi());
    }

    #[test]
    fn spectral_radius_is_exact_on_regular_matrices() {
        // Every row sums to 3: the bounds pinch at the first iteration.
        let m = vec![vec![1, 2], vec![2, 1]];
        let tol = Rational::new(1.into(), 1000.into());
        let rho = spectral_radius(&m, &tol).unwrap();
        assert!(rho.contains(&Rational::from_integer(3.into())));
        assert!(rho.width() <= tol);
    }

    #[test]
    fn spectral_radius_of_a_periodic_matrix() {
        // Pure 2-cycle: power iteration alone oscillates, the +I shift
        // makes it exact immediately.
        let m = vec![vec![0, 1], vec![1, 0]];
        let tol = Rational::new(1.into(), 1_000_000.into());
        let rho = spectral_radius(&m, &tol).unwrap();
        assert!(rho.contains(&Rational::one()));
    }

    #[test]
    fn spectral_radius_rejects_reducible_matrices() {
        let m = vec![vec![1, 1], vec![0, 1]];
        let tol = Rational::new(1.into(), 1000.into());
        assert!(matches!(spectral_radius(&m, &tol), Err(Error::Reducible)));
    }

    #[test]
    fn one_by_one_matrices_are_points() {
        let tol = Rational::new(1.into(), 1000.into());
        let rho = spectral_radius(&[vec![7]], &tol).unwrap();
        assert!(rho.is_point());
        assert_eq!(*rho.lo(), Rational::from_integer(7.into()));
    }

    #[test]
    fn golden_memory_one_follower_graph_is_complete() {
        // At depth 6 the retained rows include words like 110000, so
        // every pair transition — 11 included — is genuinely observed.
        let slice = enumerate_slice(&BoundSpec::golden(), 6, &EnumBudget::default()).unwrap();
        let g = follower_graph(&slice, 1).unwrap();
        assert_eq!(g.vertices(), &[vec![0], vec![1]]);
        assert_eq!(g.adjacency(), &[vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn golden_memory_two_induced_subgraph_reaches_the_golden_rate() {
        let slice = enumerate_slice(&BoundSpec::golden(), 8, &EnumBudget::default()).unwrap();
        let g = follower_graph(&slice, 2).unwrap();
        assert_eq!(
            g.vertices(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        // Drop the vertex 11: the remaining graph presents the shift
        // avoiding 11, whose growth rate is the golden ratio.
        let h = g.induced(&[0, 1, 2]).unwrap();
        let x = h.system().unwrap();
        assert!(x.is_strongly_connected());
        let tol = Rational::new(1.into(), 1_000_000_000.into());
        let ent = x.entropy(&tol).unwrap();
        assert!((ent.mid_f64() - 1.618_033_988_7_f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn components_order_largest_first() {
        let slice = enumerate_slice(&BoundSpec::golden(), 8, &EnumBudget::default()).unwrap();
        let g = follower_graph(&slice, 2).unwrap();
        let comps = g.components();
        assert!(!comps.is_empty());
        assert!(comps.windows(2).all(|p| p[0].len() >= p[1].len()));
        let total: usize = comps.iter().map(Vec::len).sum();
        assert_eq!(total, g.vertex_count());
    }
}
