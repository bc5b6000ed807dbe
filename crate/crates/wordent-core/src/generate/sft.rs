//! Shifts of finite type: languages defined by finitely many forbidden
//! factors.
//!
//! A shift with forbidden words of length at most `m + 1` is presented
//! on the de Bruijn graph of allowed `m`-words: vertices are the
//! `m`-words that occur in bi-infinite allowed sequences (obtained by
//! iteratively discarding words with no predecessor or successor), and
//! edges are the allowed `(m+1)`-words. Factor counts come from path
//! counts, the entropy is the logarithm of the adjacency spectral
//! radius, and for strongly connected presentations an explicit infinite
//! word is produced that realises every factor of the language, with
//! known positions by which all factors of each length have appeared.

use crate::alphabet::Alphabet;
use crate::certified::{adaptive, Enclosure};
use crate::error::{Error, Result};
use crate::stream::{LetterSource, WordStream, DEFAULT_LENGTH_BUDGET};
use crate::word::FiniteWord;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_rational::BigRational as Rational;
use num_traits::{One, Zero};

/// Largest number of candidate vertices (`q^m`) enumerated when building
/// a presentation from forbidden words.
const MAX_VERTEX_ENUMERATION: u64 = 1 << 20;

/// A shift of finite type presented on its allowed-`m`-word graph.
#[derive(Debug, Clone)]
pub struct SftSystem {
    alphabet: Alphabet,
    memory: usize,
    forbidden: Vec<FiniteWord>,
    /// Allowed `m`-words surviving the bi-extendability pruning, sorted.
    vertices: Vec<Vec<u8>>,
    /// `adj[u]` lists the successors of vertex `u`, sorted ascending;
    /// the transition letter of an edge is the last letter of its target.
    adj: Vec<Vec<u32>>,
    strongly_connected: bool,
    /// Sizes of the strongly connected components, largest first.
    scc_sizes: Vec<usize>,
}

impl SftSystem {
    /// Builds the shift over `q` letters avoiding the given factors.
    ///
    /// Every forbidden word must have length at least 2; the memory `m`
    /// is one less than the longest forbidden word. Fails with
    /// [`Error::EmptyLanguage`] when nothing survives.
    pub fn from_forbidden(q: u32, forbidden: &[FiniteWord]) -> Result<SftSystem> {
        let alphabet = Alphabet::new(q)?;
        if forbidden.is_empty() {
            return Err(Error::Domain(String::from(
                "need at least one forbidden word; use full_shift for the free case",
            )));
        }
        let mut max_len = 0usize;
        for w in forbidden {
            if w.alphabet() != alphabet {
                return Err(Error::BadAlphabet(String::from(
                    "forbidden word over a different alphabet",
                )));
            }
            if w.len() < 2 {
                return Err(Error::Domain(String::from(
                    "forbidden words must have length at least 2",
                )));
            }
            max_len = max_len.max(w.len());
        }
        let memory = max_len - 1;
        let mut count = 1u64;
        for _ in 0..memory {
            count = count.saturating_mul(u64::from(alphabet.size()));
            if count > MAX_VERTEX_ENUMERATION {
                return Err(Error::Budget(format!(
                    "{}^{} candidate states exceed the enumeration budget",
                    q, memory
                )));
            }
        }
        let mut short: BTreeSet<&[u8]> = BTreeSet::new();
        let mut long: BTreeSet<&[u8]> = BTreeSet::new();
        let mut short_lens: BTreeSet<usize> = BTreeSet::new();
        for w in forbidden {
            if w.len() == memory + 1 {
                long.insert(w.letters());
            } else {
                short.insert(w.letters());
                short_lens.insert(w.len());
            }
        }
        let clean = |word: &[u8]| -> bool {
            for &len in &short_lens {
                if word.len() < len {
                    continue;
                }
                for window in word.windows(len) {
                    if short.contains(window) {
                        return false;
                    }
                }
            }
            true
        };

        // Enumerate allowed m-words in lexicographic order.
        let q8 = alphabet.size();
        let mut vertices: Vec<Vec<u8>> = Vec::new();
        let mut word = vec![0u8; memory];
        'outer: loop {
            if clean(&word) {
                vertices.push(word.clone());
            }
            let mut pos = memory;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if word[pos] + 1 < q8 {
                    word[pos] += 1;
                    for cell in word.iter_mut().skip(pos + 1) {
                        *cell = 0;
                    }
                    break;
                }
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptyLanguage);
        }

        let index: BTreeMap<&[u8], u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i as u32))
            .collect();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        let mut extended = Vec::with_capacity(memory + 1);
        for (u, uw) in vertices.iter().enumerate() {
            for c in 0..q8 {
                extended.clear();
                extended.extend_from_slice(uw);
                extended.push(c);
                if long.contains(extended.as_slice()) {
                    continue;
                }
                // Shorter forbidden factors inside u.c either lie in u or
                // in the shifted suffix, both of which are checked via
                // the vertex set; only the full (m+1)-window is new.
                if let Some(&v) = index.get(&extended[1..]) {
                    adj[u].push(v);
                }
            }
        }

        finish_system(alphabet, memory, forbidden.to_vec(), vertices, adj)
    }

    /// Builds a shift directly from a graph presentation.
    ///
    /// `vertices` are distinct `memory`-words and `adj` lists successor
    /// indices; every edge must be a one-letter overlap. The graph is
    /// pruned to its bi-extendable part. Used for sub-systems carved out
    /// of a larger presentation and for full shifts.
    pub fn from_parts(
        alphabet: Alphabet,
        memory: usize,
        vertices: Vec<Vec<u8>>,
        adj: Vec<Vec<u32>>,
    ) -> Result<SftSystem> {
        if memory == 0 {
            return Err(Error::Domain(String::from("memory must be at least 1")));
        }
        if vertices.len() != adj.len() {
            return Err(Error::Domain(String::from(
                "adjacency size disagrees with vertex count",
            )));
        }
        // Sort vertices, remap edges, and validate overlaps.
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut rank = vec![0u32; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u32;
        }
        let mut sorted_vertices = Vec::with_capacity(vertices.len());
        let mut sorted_adj: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for &old in &order {
            sorted_vertices.push(vertices[old].clone());
        }
        for w in sorted_vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain(String::from("duplicate state word")));
            }
        }
        for v in &sorted_vertices {
            if v.len() != memory {
                return Err(Error::Domain(String::from(
                    "state word length disagrees with the memory",
                )));
            }
            for &c in v {
                if !alphabet.contains(c) {
                    return Err(Error::BadAlphabet(format!("letter {c} out of range")));
                }
            }
        }
        for (old_u, targets) in adj.iter().enumerate() {
            let new_u = rank[old_u] as usize;
            for &old_v in targets {
                let old_v = old_v as usize;
                if old_v >= vertices.len() {
                    return Err(Error::Domain(String::from("edge target out of range")));
                }
                if memory > 1
                    && vertices[old_u][1..] != vertices[old_v][..memory - 1]
                {
                    return Err(Error::Domain(String::from(
                        "edge endpoints do not overlap",
                    )));
                }
                sorted_adj[new_u].push(rank[old_v]);
            }
        }
        for targets in &mut sorted_adj {
            targets.sort_unstable();
            targets.dedup();
        }
        finish_system(alphabet, memory, Vec::new(), sorted_vertices, sorted_adj)
    }

    /// The unrestricted shift on `q` letters, presented with memory `m`.
    pub fn full_shift(q: u32, memory: usize) -> Result<SftSystem> {
        let alphabet = Alphabet::new(q)?;
        if memory == 0 {
            return Err(Error::Domain(String::from("memory must be at least 1")));
        }
        let mut count = 1u64;
        for _ in 0..memory {
            count = count.saturating_mul(u64::from(alphabet.size()));
            if count > MAX_VERTEX_ENUMERATION {
                return Err(Error::Budget(String::from(
                    "full shift presentation too large",
                )));
            }
        }
        let q8 = alphabet.size();
        let total = count as usize;
        let mut vertices = Vec::with_capacity(total);
        let mut word = vec![0u8; memory];
        for _ in 0..total {
            vertices.push(word.clone());
            for pos in (0..memory).rev() {
                if word[pos] + 1 < q8 {
                    word[pos] += 1;
                    break;
                }
                word[pos] = 0;
            }
        }
        let index: BTreeMap<&[u8], u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i as u32))
            .collect();
        let mut adj = vec![Vec::new(); total];
        let mut extended = Vec::with_capacity(memory + 1);
        for (u, uw) in vertices.iter().enumerate() {
            for c in 0..q8 {
                extended.clear();
                extended.extend_from_slice(&uw[1..]);
                extended.push(c);
                adj[u].push(index[extended.as_slice()]);
            }
        }
        finish_system(alphabet, memory, Vec::new(), vertices, adj)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// One less than the longest forbidden word: the graph word length.
    pub fn memory(&self) -> usize {
        self.memory
    }

    /// The forbidden factors this system was built from, when known.
    pub fn forbidden(&self) -> &[FiniteWord] {
        &self.forbidden
    }

    /// Allowed `memory`-words in lexicographic order.
    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    /// Successor lists parallel to [`SftSystem::vertices`].
    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    /// Sizes of the strongly connected components, largest first.
    pub fn component_sizes(&self) -> &[usize] {
        &self.scc_sizes
    }

    /// The 0/1 adjacency matrix of the presentation.
    pub fn transition_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0u64; n]; n];
        for (u, targets) in self.adj.iter().enumerate() {
            for &v in targets {
                m[u][v as usize] = 1;
            }
        }
        m
    }

    /// Number of length-`n` words in the language.
    pub fn complexity(&self, n: u64) -> BigUint {
        self.complexity_table(n).pop().expect("table nonempty")
    }

    /// `[p(0), ..., p(n_max)]`, computed in one pass.
    pub fn complexity_table(&self, n_max: u64) -> Vec<BigUint> {
        let m = self.memory as u64;
        let mut out = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max.min(m) {
            out.push(BigUint::from(self.short_word_count(n as usize)));
        }
        if n_max <= m {
            return out;
        }
        // Path counts: p(m + t) = sum over vertices of the number of
        // outgoing paths with t edges.
        let mut paths: Vec<BigUint> = vec![BigUint::one(); self.vertices.len()];
        for _ in (m + 1)..=n_max {
            let next: Vec<BigUint> = self
                .adj
                .iter()
                .map(|targets| {
                    let mut acc = BigUint::zero();
                    for &v in targets {
                        acc += &paths[v as usize];
                    }
                    acc
                })
                .collect();
            paths = next;
            out.push(paths.iter().sum());
        }
        out
    }

    fn short_word_count(&self, n: usize) -> u64 {
        if n == 0 {
            return 1;
        }
        if n == self.memory {
            return self.vertices.len() as u64;
        }
        let mut seen: BTreeSet<&[u8]> = BTreeSet::new();
        for v in &self.vertices {
            for w in v.windows(n) {
                seen.insert(w);
            }
        }
        seen.len() as u64
    }

    /// All language words of one length, lexicographically sorted.
    ///
    /// Fails with a budget error when the language has more than `cap`
    /// words of that length.
    pub fn language_words(&self, len: usize, cap: u64) -> Result<Vec<FiniteWord>> {
        if self.complexity(len as u64) > BigUint::from(cap) {
            return Err(Error::Budget(format!(
                "more than {cap} words of length {len}"
            )));
        }
        let mut out = Vec::new();
        if len <= self.memory {
            let mut seen: BTreeSet<&[u8]> = BTreeSet::new();
            for v in &self.vertices {
                for w in v.windows(len) {
                    seen.insert(w);
                }
            }
            for w in seen {
                out.push(FiniteWord::new(self.alphabet, w.to_vec())?);
            }
        } else {
            let graph = TransGraph::of(self);
            let mut cursor = BlockCursor::new(&graph, len);
            let mut word = Vec::new();
            while cursor.next(&graph, &mut word) {
                out.push(FiniteWord::new(self.alphabet, word.clone())?);
            }
        }
        Ok(out)
    }

    /// Certified enclosure of the topological entropy `log lambda`.
    ///
    /// Requires a strongly connected presentation.
    pub fn entropy(&self, tol: &Rational) -> Result<Enclosure> {
        if !self.strongly_connected {
            return Err(Error::Reducible);
        }
        let matrix = self.transition_matrix();
        let half = tol / Rational::from_integer(2.into());
        let lambda = crate::engine::spectral_radius(&matrix, &half)?;
        adaptive(
            |prec| {
                let l = lambda.ln(prec)?;
                Ok((l.width() <= *tol).then_some(l))
            },
            "entropy of the shift",
        )
    }

    /// An infinite word whose factors are exactly the language.
    ///
    /// Requires strong connectivity. The word starts at the smallest
    /// state and embeds every language word of length 1, then 2, and so
    /// on, each block in lexicographic order, words joined by the
    /// shortest (then lexicographically smallest) connecting paths. The
    /// stream reports the block-end positions as saturating prefixes:
    /// after block `n` ends, all length-`n` factors have occurred.
    pub fn transitive_word(&self) -> Result<WordStream> {
        if !self.strongly_connected {
            return Err(Error::Reducible);
        }
        let graph = TransGraph::of(self);
        Ok(WordStream::new(Box::new(TransitiveSource {
            alphabet: self.alphabet,
            gen: TransitiveGen::new(graph),
            q: u32::from(self.alphabet.size()),
        })))
    }

    pub fn describe(&self) -> String {
        if self.forbidden.is_empty() {
            format!(
                "shift with memory {} on {} states over {} letters",
                self.memory,
                self.vertices.len(),
                self.alphabet.size()
            )
        } else {
            let words: Vec<String> = self.forbidden.iter().map(FiniteWord::to_text).collect();
            format!(
                "shift over {} letters avoiding {}",
                self.alphabet.size(),
                words.join(",")
            )
        }
    }
}

/// Prunes to the bi-extendable part, computes components, and assembles
/// the system. Vertex order (and hence all downstream output) is the
/// lexicographic order of the surviving words.
fn finish_system(
    alphabet: Alphabet,
    memory: usize,
    forbidden: Vec<FiniteWord>,
    vertices: Vec<Vec<u8>>,
    adj: Vec<Vec<u32>>,
) -> Result<SftSystem> {
    let n = vertices.len();
    let mut alive = vec![true; n];
    loop {
        let mut in_deg = vec![0u32; n];
        let mut out_deg = vec![0u32; n];
        for u in 0..n {
            if !alive[u] {
                continue;
            }
            for &v in &adj[u] {
                if alive[v as usize] {
                    out_deg[u] += 1;
                    in_deg[v as usize] += 1;
                }
            }
        }
        let mut changed = false;
        for u in 0..n {
            if alive[u] && (in_deg[u] == 0 || out_deg[u] == 0) {
                alive[u] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&u| alive[u]).collect();
    if survivors.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let mut rank = vec![u32::MAX; n];
    for (new, &old) in survivors.iter().enumerate() {
        rank[old] = new as u32;
    }
    let pruned_vertices: Vec<Vec<u8>> = survivors.iter().map(|&u| vertices[u].clone()).collect();
    let pruned_adj: Vec<Vec<u32>> = survivors
        .iter()
        .map(|&u| {
            adj[u]
                .iter()
                .filter(|&&v| alive[v as usize])
                .map(|&v| rank[v as usize])
                .collect()
        })
        .collect();
    let mut scc_sizes: Vec<usize> = crate::engine::tarjan_scc(&pruned_adj)
        .into_iter()
        .map(|c| c.len())
        .collect();
    scc_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let strongly_connected = scc_sizes.len() == 1;
    Ok(SftSystem {
        alphabet,
        memory,
        forbidden,
        vertices: pruned_vertices,
        adj: pruned_adj,
        strongly_connected,
        scc_sizes,
    })
}

/// Builds the shift over `q` letters avoiding the given factors.
pub fn sft_from_forbidden(q: u32, forbidden: &[FiniteWord]) -> Result<SftSystem> {
    SftSystem::from_forbidden(q, forbidden)
}

/// Number of length-`n` words in the language of `x`.
pub fn sft_complexity(x: &SftSystem, n: u64) -> BigUint {
    x.complexity(n)
}

/// Certified enclosure of the entropy of `x`.
pub fn sft_entropy(x: &SftSystem, tol: &Rational) -> Result<Enclosure> {
    x.entropy(tol)
}

/// An infinite word realising the full language of `x`.
pub fn transitive_word(x: &SftSystem) -> Result<WordStream> {
    x.transitive_word()
}

/// The graph data a transitive-word generator walks on.
#[derive(Clone)]
struct TransGraph {
    memory: usize,
    vertices: Vec<Vec<u8>>,
    adj: Vec<Vec<u32>>,
}

impl TransGraph {
    fn of(sys: &SftSystem) -> TransGraph {
        TransGraph {
            memory: sys.memory,
            vertices: sys.vertices.clone(),
            adj: sys.adj.clone(),
        }
    }

    /// The letter read along an edge into `v`.
    fn letter(&self, v: u32) -> u8 {
        self.vertices[v as usize][self.memory - 1]
    }

    /// Follows the edge from `u` labelled `c`, if present.
    fn step(&self, u: u32, c: u8) -> Option<u32> {
        self.adj[u as usize]
            .iter()
            .copied()
            .find(|&v| self.letter(v) == c)
    }

    /// Whether the word can be read starting from state `u`.
    fn readable(&self, u: u32, word: &[u8]) -> bool {
        let mut cur = u;
        for &c in word {
            match self.step(cur, c) {
                Some(v) => cur = v,
                None => return false,
            }
        }
        true
    }

    fn walk(&self, u: u32, word: &[u8]) -> u32 {
        let mut cur = u;
        for &c in word {
            cur = self.step(cur, c).expect("checked readable");
        }
        cur
    }
}

/// Lexicographic cursor over all language words of one length.
///
/// Words of length `len > m` are paths `v0 -> c1 -> ... -> c_{len-m}`;
/// iterating vertices in index order and edges in target order yields
/// the words in lexicographic order without materialising the block.
struct BlockCursor {
    len: usize,
    /// Materialised list for `len <= m` (always small).
    short: Option<Vec<Vec<u8>>>,
    short_idx: usize,
    v0: usize,
    /// Edge-choice indices along the current path.
    choices: Vec<usize>,
    /// States visited: `states[0] = v0`, then one per chosen edge.
    states: Vec<u32>,
    primed: bool,
    done: bool,
}

impl BlockCursor {
    fn new(g: &TransGraph, len: usize) -> BlockCursor {
        let short = (len <= g.memory).then(|| {
            let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
            for v in &g.vertices {
                for w in v.windows(len) {
                    seen.insert(w.to_vec());
                }
            }
            seen.into_iter().collect::<Vec<_>>()
        });
        BlockCursor {
            len,
            short,
            short_idx: 0,
            v0: 0,
            choices: Vec::new(),
            states: Vec::new(),
            primed: false,
            done: false,
        }
    }

    /// Extends the current path with lexicographically smallest edges.
    fn descend(&mut self, g: &TransGraph) {
        let steps = self.len - g.memory;
        while self.choices.len() < steps {
            let cur = *self.states.last().expect("path nonempty");
            let next = g.adj[cur as usize][0];
            self.choices.push(0);
            self.states.push(next);
        }
    }

    fn emit(&self, g: &TransGraph, out: &mut Vec<u8>) {
        out.clear();
        out.extend_from_slice(&g.vertices[self.states[0] as usize]);
        for &s in &self.states[1..] {
            out.push(g.letter(s));
        }
    }

    /// Writes the next word into `out`; returns `false` when exhausted.
    fn next(&mut self, g: &TransGraph, out: &mut Vec<u8>) -> bool {
        if self.done {
            return false;
        }
        if let Some(short) = &self.short {
            if self.short_idx >= short.len() {
                self.done = true;
                return false;
            }
            out.clear();
            out.extend_from_slice(&short[self.short_idx]);
            self.short_idx += 1;
            return true;
        }
        if !self.primed {
            self.primed = true;
            self.states = vec![0];
            self.choices.clear();
            self.descend(g);
            self.emit(g, out);
            return true;
        }
        loop {
            match self.choices.pop() {
                Some(choice) => {
                    self.states.pop();
                    let cur = *self.states.last().expect("path nonempty");
                    let targets = &g.adj[cur as usize];
                    if choice + 1 < targets.len() {
                        self.choices.push(choice + 1);
                        self.states.push(targets[choice + 1]);
                        self.descend(g);
                        self.emit(g, out);
                        return true;
                    }
                }
                None => {
                    self.v0 += 1;
                    if self.v0 >= g.vertices.len() {
                        self.done = true;
                        return false;
                    }
                    self.states = vec![self.v0 as u32];
                    self.choices.clear();
                    self.descend(g);
                    self.emit(g, out);
                    return true;
                }
            }
        }
    }
}

/// Streaming generator of the transitive word.
struct TransitiveGen {
    g: TransGraph,
    state: u32,
    started: bool,
    cursor: BlockCursor,
    word: Vec<u8>,
    emitted: u64,
    /// `(block length, position after the block's last word)`.
    block_ends: Vec<(usize, u64)>,
}

impl TransitiveGen {
    fn new(g: TransGraph) -> TransitiveGen {
        let cursor = BlockCursor::new(&g, 1);
        TransitiveGen {
            g,
            state: 0,
            started: false,
            cursor,
            word: Vec::new(),
            emitted: 0,
            block_ends: Vec::new(),
        }
    }

    /// Shortest connector from `from` to a state where the current word
    /// is readable; ties broken by lexicographically smallest letters.
    fn connector(&self, from: u32) -> Result<(Vec<u8>, u32)> {
        if self.g.readable(from, &self.word) {
            return Ok((Vec::new(), from));
        }
        let n = self.g.vertices.len();
        let mut parent: Vec<Option<(u32, u8)>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[from as usize] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &v in &self.g.adj[u as usize] {
                if visited[v as usize] {
                    continue;
                }
                visited[v as usize] = true;
                parent[v as usize] = Some((u, self.g.letter(v)));
                if self.g.readable(v, &self.word) {
                    let mut path = Vec::new();
                    let mut cur = v;
                    while let Some((p, c)) = parent[cur as usize] {
                        path.push(c);
                        cur = p;
                    }
                    path.reverse();
                    return Ok((path, v));
                }
                queue.push_back(v);
            }
        }
        // Unreachable for strongly connected presentations.
        Err(Error::Reducible)
    }

    /// Appends the next chunk (head word, or connector plus block word).
    fn advance(&mut self, sink: &mut Vec<u8>) -> Result<()> {
        if !self.started {
            self.started = true;
            self.state = 0;
            sink.extend_from_slice(&self.g.vertices[0]);
            self.emitted += self.g.memory as u64;
            return Ok(());
        }
        loop {
            let mut word = core::mem::take(&mut self.word);
            let got = self.cursor.next(&self.g, &mut word);
            self.word = word;
            if got {
                break;
            }
            self.block_ends.push((self.cursor.len, self.emitted));
            let next_len = self.cursor.len + 1;
            self.cursor = BlockCursor::new(&self.g, next_len);
        }
        let (path, t) = self.connector(self.state)?;
        sink.extend_from_slice(&path);
        sink.extend_from_slice(&self.word);
        self.state = self.g.walk(t, &self.word);
        self.emitted += (path.len() + self.word.len()) as u64;
        Ok(())
    }

    /// Position after which all length-`n` factors have appeared.
    fn block_end(&mut self, n: usize, cap: u64) -> Option<u64> {
        if n == 0 {
            return Some(0);
        }
        let mut scratch = Vec::new();
        loop {
            if let Some(&(_, e)) = self.block_ends.iter().find(|&&(l, _)| l == n) {
                return Some(e);
            }
            if self.emitted > cap || self.cursor.len > n {
                return None;
            }
            scratch.clear();
            self.advance(&mut scratch).ok()?;
        }
    }
}

struct TransitiveSource {
    alphabet: Alphabet,
    gen: TransitiveGen,
    q: u32,
}

impl LetterSource for TransitiveSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
        while buf.len() < target {
            self.gen.advance(buf)?;
        }
        Ok(())
    }

    fn saturating_prefix(&mut self, n: usize) -> Option<u64> {
        // Replay a fresh generator: generation is deterministic, so the
        // block boundaries match the live stream.
        let mut replica = TransitiveGen::new(self.gen.g.clone());
        replica.block_end(n, DEFAULT_LENGTH_BUDGET as u64)
    }

    fn describe(&self) -> String {
        format!(
            "transitive word of a memory-{} shift on {} states over {} letters",
            self.gen.g.memory,
            self.gen.g.vertices.len(),
            self.q
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::ProfileKind;

    fn binary_words(words: &[&str]) -> Vec<FiniteWord> {
        let a = Alphabet::new(2).unwrap();
        words.iter().map(|w| FiniteWord::parse(a, w).unwrap()).collect()
    }

    fn tol(num: i64, den: u64) -> Rational {
        Rational::new(num.into(), den.into())
    }

    #[test]
    fn golden_presentation() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        assert_eq!(x.memory(), 1);
        assert_eq!(x.vertices(), &[vec![0], vec![1]]);
        assert_eq!(x.transition_matrix(), vec![vec![1, 1], vec![1, 0]]);
        assert!(x.is_strongly_connected());
    }

    #[test]
    fn golden_complexity_is_fibonacci() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        let table = x.complexity_table(10);
        let fib: Vec<u64> = vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for (n, expect) in fib.iter().enumerate() {
            assert_eq!(table[n], BigUint::from(*expect), "n={n}");
        }
        assert_eq!(x.complexity(5), BigUint::from(13u32));
    }

    #[test]
    fn tribonacci_style_counts() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["111"])).unwrap();
        assert_eq!(x.memory(), 2);
        assert_eq!(x.vertex_count(), 4);
        // p(n) = p(n-1) + p(n-2) + p(n-3) with p(1)=2, p(2)=4, p(3)=7.
        let table = x.complexity_table(8);
        let expect: Vec<u64> = vec![1, 2, 4, 7, 13, 24, 44, 81, 149];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(table[n], BigUint::from(*e), "n={n}");
        }
    }

    #[test]
    fn full_shift_counts_and_entropy() {
        let x = SftSystem::full_shift(2, 2).unwrap();
        for n in 0..10u64 {
            assert_eq!(x.complexity(n), BigUint::from(1u64 << n));
        }
        let e = x.entropy(&tol(1, 1_000_000_000)).unwrap();
        // log 2 = 0.6931471805...
        let mid = e.mid_f64();
        assert!((mid - core::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn golden_entropy_is_log_phi() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        let e = x.entropy(&tol(1, 1_000_000_000_000)).unwrap();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((e.mid_f64() - phi.ln()).abs() < 1e-10);
    }

    #[test]
    fn empty_language_is_detected() {
        let err = SftSystem::from_forbidden(2, &binary_words(&["00", "01", "10", "11"]));
        assert!(matches!(err, Err(Error::EmptyLanguage)));
        // Forbidding 10 and 01 leaves the two constant sequences.
        let x = SftSystem::from_forbidden(2, &binary_words(&["10", "01"])).unwrap();
        assert_eq!(x.vertex_count(), 2);
        assert!(!x.is_strongly_connected());
        assert_eq!(x.component_sizes(), &[1, 1]);
    }

    #[test]
    fn pruning_discards_dead_ends() {
        // Forbidding 00 and 01 kills every continuation of 0: only the
        // all-ones sequence survives.
        let x = SftSystem::from_forbidden(2, &binary_words(&["00", "01"])).unwrap();
        assert_eq!(x.vertices(), &[vec![1]]);
        assert_eq!(x.complexity(6), BigUint::one());
    }

    #[test]
    fn language_words_are_sorted_and_complete() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        let words = x.language_words(4, 1 << 16).unwrap();
        let texts: Vec<String> = words.iter().map(FiniteWord::to_text).collect();
        assert_eq!(
            texts,
            vec!["0000", "0001", "0010", "0100", "0101", "1000", "1001", "1010"]
        );
        assert_eq!(words.len(), 8);
    }

    #[test]
    fn naive_window_filter_agrees() {
        // Independent oracle: enumerate all binary words and keep those
        // whose m-windows are allowed states and (m+1)-windows edges.
        let x = SftSystem::from_forbidden(2, &binary_words(&["110", "0000"])).unwrap();
        let m = x.memory();
        let states: BTreeSet<&[u8]> = x.vertices().iter().map(|v| v.as_slice()).collect();
        let mut edges: BTreeSet<Vec<u8>> = BTreeSet::new();
        for (u, targets) in x.adjacency().iter().enumerate() {
            for &v in targets {
                let mut e = x.vertices()[u].clone();
                e.push(*x.vertices()[v as usize].last().unwrap());
                edges.insert(e);
            }
        }
        for n in (m + 1)..=9usize {
            let mut count = 0u64;
            for code in 0..(1u32 << n) {
                let word: Vec<u8> = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
                let states_ok = word.windows(m).all(|w| states.contains(w));
                let edges_ok = word.windows(m + 1).all(|w| edges.contains(w));
                if states_ok && edges_ok {
                    count += 1;
                }
            }
            assert_eq!(x.complexity(n as u64), BigUint::from(count), "n={n}");
        }
    }

    #[test]
    fn transitive_word_over_a_single_cycle() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["00", "11"])).unwrap();
        let mut w = x.transitive_word().unwrap();
        assert_eq!(w.prefix(7).unwrap(), &[0, 1, 0, 1, 0, 1, 0]);
        let profile = w.profile(4, 64).unwrap();
        for n in 1..=4usize {
            assert_eq!(profile.counts[n], BigUint::from(2u32), "n={n}");
        }
    }

    #[test]
    fn golden_transitive_word_realises_the_language() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        let mut w = x.transitive_word().unwrap();
        // Head "0", then blocks: "0","1" | "00","01","10" | ...
        assert_eq!(w.prefix(10).unwrap(), &[0, 0, 1, 0, 0, 0, 1, 0, 1, 0]);
        let profile = w.exact_profile(8).unwrap();
        assert_eq!(profile.kind, ProfileKind::Exact);
        let fib: Vec<u64> = vec![1, 2, 3, 5, 8, 13, 21, 34, 55];
        for (n, expect) in fib.iter().enumerate() {
            assert_eq!(profile.counts[n], BigUint::from(*expect), "n={n}");
        }
        // No factor may leave the language.
        let letters = w.prefix(2000).unwrap().to_vec();
        assert!(letters.windows(2).all(|p| p != [1, 1]));
    }

    #[test]
    fn transitive_word_requires_strong_connectivity() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["10", "01"])).unwrap();
        assert!(matches!(x.transitive_word(), Err(Error::Reducible)));
        assert!(matches!(x.entropy(&tol(1, 1000)), Err(Error::Reducible)));
    }

    #[test]
    fn from_parts_roundtrip() {
        let x = SftSystem::from_forbidden(2, &binary_words(&["11"])).unwrap();
        let y = SftSystem::from_parts(
            x.alphabet(),
            x.memory(),
            x.vertices().to_vec(),
            x.adjacency().to_vec(),
        )
        .unwrap();
        assert_eq!(y.vertices(), x.vertices());
        assert_eq!(y.adjacency(), x.adjacency());
        assert_eq!(y.complexity(7), x.complexity(7));
    }

    #[test]
    fn from_parts_rejects_bad_overlaps() {
        let a = Alphabet::new(2).unwrap();
        let err = SftSystem::from_parts(
            a,
            2,
            vec![vec![0, 0], vec![1, 1]],
            vec![vec![1], vec![0]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn forbidden_words_must_be_long_enough() {
        let a = Alphabet::new(2).unwrap();
        let short = vec![FiniteWord::parse(a, "1").unwrap()];
        assert!(SftSystem::from_forbidden(2, &short).is_err());
        assert!(SftSystem::from_forbidden(2, &[]).is_err());
    }
}
