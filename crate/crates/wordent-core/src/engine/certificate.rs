//! Certified entropy lower bounds from finite subsystems.
//!
//! A certificate names a strongly connected shift of finite type whose
//! complexity stays at or below the bound's integer floor up to a finite
//! horizon `N0`, together with a witness length `n0` whose count closes
//! the comparison for every longer length. Soundness rests on two facts:
//!
//! - factor counts of a shift space are submultiplicative, so
//!   `p(n) <= p(n0)^{ceil(n/n0)} <= exp(s * (n + n0))` for `n > 0`,
//!   where `s = log(p(n0)) / n0`;
//! - the bound carries a pointwise envelope `f(n) >= c * rate^n` valid
//!   for all `n >= 0`.
//!
//! With `s <= log rate` and `s * (N0 + n0) <= log c + N0 * log rate`, the
//! deficit `log c + n log rate - s (n + n0)` is nondecreasing in `n` and
//! nonnegative at `N0`, hence `p(n) <= f(n)` for every `n > N0` as well.
//! Both inequalities are decided exactly: rational-root rates reduce to
//! integer power comparisons; exponential rates reduce to certified
//! logarithm enclosures (equality can only occur at `p(n0) = 1`, which
//! the enclosure decides as a point).
//!
//! The transitive words of a certified subsystem realize every factor the
//! system allows, so the subsystem's entropy is an attained lower bound
//! for the family of the bound.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::alphabet::Alphabet;
use crate::bounds::{BoundSpec, EnvelopeCert, GrowthRate};
use crate::certified::{adaptive, ln_rational, pow_rational, Enclosure};
use crate::engine::graph::{follower_graph, FollowerGraph};
use crate::engine::slice::{
    enumerate_slice_with_caps, upper_bound, EnumBudget, Slice, UpperBound,
};
use crate::error::{Error, Result};
use crate::generate::sft::SftSystem;
use crate::Rational;

/// Tuning knobs for the bracket and certificate search.
#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Depth of the slice enumeration (and of the follower graphs).
    pub max_n: usize,
    /// Largest follower-graph memory tried.
    pub memory_cap: usize,
    /// Preferred submultiplicativity witness length `n0`.
    pub witness_n: u64,
    /// First finite horizon `N0`; doubled on tail failures.
    pub finite_start: u64,
    /// Largest finite horizon tried.
    pub finite_cap: u64,
    /// Depth of the cheap complexity screen applied to candidates.
    pub screen_horizon: u64,
    /// Exhaustive vertex-subset search is used while `2^V` stays at or
    /// below this; larger graphs fall back to greedy peeling.
    pub subset_cap: u64,
    /// Rounds of greedy vertex removal in the fallback search.
    pub max_removals: usize,
    /// Width goal for entropy enclosures.
    pub tol: Rational,
    /// Row budgets for the slice enumeration.
    pub budget: EnumBudget,
}

impl Default for CertifyOptions {
    fn default() -> CertifyOptions {
        CertifyOptions {
            max_n: 20,
            memory_cap: 3,
            witness_n: 20,
            finite_start: 200,
            finite_cap: 6400,
            screen_horizon: 48,
            subset_cap: 4096,
            max_removals: 8,
            tol: Rational::new(BigInt::one(), BigInt::from(10_000_000_000u64)),
            budget: EnumBudget::default(),
        }
    }
}

/// A checked entropy lower bound: a strongly connected subsystem, the
/// horizon of the exact count comparison, and the tail witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Alphabet size shared by the bound and the subsystem.
    pub alphabet: u32,
    /// Window length of the subsystem presentation.
    pub memory: usize,
    /// Allowed windows, lexicographically sorted.
    pub vertices: Vec<Vec<u8>>,
    /// Sorted successor lists over `vertices`.
    pub adjacency: Vec<Vec<u32>>,
    /// Horizon `N0` of the exact count-versus-floor comparison.
    pub finite_horizon: u64,
    /// Submultiplicativity witness length `n0`.
    pub witness_n: u64,
    /// Exact subsystem count at the witness length.
    pub witness_count: BigUint,
    /// Pointwise envelope of the bound used for the tail.
    pub envelope: EnvelopeCert,
    /// Enclosure of the subsystem entropy (the certified lower bound).
    pub entropy: Enclosure,
    /// Width goal the entropy enclosure was computed to.
    pub tol: Rational,
    /// Human-readable account of every checked inequality.
    pub transcript: Vec<String>,
}

impl Certificate {
    /// Rebuilds the subsystem from the stored presentation.
    pub fn system(&self) -> Result<SftSystem> {
        SftSystem::from_parts(
            Alphabet::new(self.alphabet)?,
            self.memory,
            self.vertices.clone(),
            self.adjacency.clone(),
        )
    }
}

/// Why a certification attempt did not go through.
#[derive(Debug, Clone, PartialEq)]
pub enum CertifyFailure {
    /// The bound has no certified exponential lower envelope.
    NoEnvelope,
    /// The subsystem count exceeds the floor of the bound at `n`.
    FiniteCheck { n: u64, count: BigUint, bound: BigUint },
    /// Both finite checks pass but the tail inequality does not close.
    TailGap { finite_horizon: u64, witness_n: u64 },
}

impl CertifyFailure {
    pub fn describe(&self) -> String {
        match self {
            CertifyFailure::NoEnvelope => String::from(
                "the bound has no certified exponential lower envelope",
            ),
            CertifyFailure::FiniteCheck { n, count, bound } => format!(
                "subsystem count {count} exceeds the floor {bound} at length {n}"
            ),
            CertifyFailure::TailGap { finite_horizon, witness_n } => format!(
                "tail inequality open at horizon {finite_horizon} with witness {witness_n}"
            ),
        }
    }
}

/// Result of a certification attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum CertifyOutcome {
    Certified(Box<Certificate>),
    Failed(CertifyFailure),
}

impl CertifyOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified(_))
    }

    pub fn certificate(self) -> Option<Box<Certificate>> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Failed(_) => None,
        }
    }
}

// ---------------------------------------------------------------------
// Bound stacks: one or more bounds compared pointwise by minimum.

/// One bound, or the pointwise minimum of several over one alphabet.
struct BoundStack<'a> {
    specs: Vec<&'a BoundSpec>,
}

impl<'a> BoundStack<'a> {
    fn single(spec: &'a BoundSpec) -> BoundStack<'a> {
        BoundStack { specs: vec![spec] }
    }

    fn min_of(f: &'a BoundSpec, g: &'a BoundSpec) -> Result<BoundStack<'a>> {
        if f.alphabet_size() != g.alphabet_size() {
            return Err(Error::BadAlphabet(format!(
                "pointwise minimum needs one alphabet, got {} and {}",
                f.alphabet_size(),
                g.alphabet_size()
            )));
        }
        Ok(BoundStack { specs: vec![f, g] })
    }

    fn alphabet_size(&self) -> u32 {
        self.specs[0].alphabet_size()
    }

    fn describe(&self) -> String {
        let mut parts = self.specs.iter().map(|s| s.describe());
        let first = parts.next().expect("non-empty stack");
        match parts.next() {
            None => first,
            Some(second) => format!("min({first}, {second})"),
        }
    }

    /// Elementwise-minimum floor table over `0..=n_max`.
    fn floor_table(&self, n_max: u64) -> Result<Vec<BigUint>> {
        let mut out = self.specs[0].floor_table(n_max)?;
        for spec in &self.specs[1..] {
            for (acc, v) in out.iter_mut().zip(spec.floor_table(n_max)?) {
                if v < *acc {
                    *acc = v;
                }
            }
        }
        Ok(out)
    }

    fn floor_table_clamped(&self, n_max: u64, cap: u64) -> Result<Vec<u64>> {
        let mut out = self.specs[0].floor_table_clamped(n_max, cap)?;
        for spec in &self.specs[1..] {
            for (acc, v) in
                out.iter_mut().zip(spec.floor_table_clamped(n_max, cap)?)
            {
                *acc = (*acc).min(v);
            }
        }
        Ok(out)
    }

    /// Min-combined envelope: `min(f, g) >= min(c_f, c_g) * min(rate)^n`
    /// termwise, since every constant and rate is positive.
    fn envelope_cert(&self) -> Result<Option<EnvelopeCert>> {
        let mut acc: Option<EnvelopeCert> = None;
        for spec in &self.specs {
            let Some(cert) = spec.envelope_cert()? else {
                return Ok(None);
            };
            if !cert.c.is_positive() {
                return Ok(None);
            }
            acc = Some(match acc {
                None => cert,
                Some(prev) => {
                    let rate = match prev.rate.cmp(&cert.rate)? {
                        Ordering::Greater => cert.rate,
                        _ => prev.rate,
                    };
                    let c = if cert.c < prev.c { cert.c } else { prev.c };
                    EnvelopeCert { c, rate }
                }
            });
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------
// The tail inequality, decided exactly.

fn positive_parts(x: &Rational) -> Result<(BigUint, BigUint)> {
    if !x.is_positive() {
        return Err(Error::Certificate(format!(
            "envelope constant {x} is not positive"
        )));
    }
    let n = x.numer().magnitude().clone();
    let d = x.denom().magnitude().clone();
    Ok((n, d))
}

fn pow_exp(base: &BigUint, exp: u64) -> Result<BigUint> {
    let e: u32 = exp.try_into().map_err(|_| {
        Error::Budget(format!("tail exponent {exp} exceeds the power budget"))
    })?;
    Ok(base.pow(e))
}

/// Decides `log x <= bound` through certified logarithm enclosures.
/// Termination: `log x` is irrational for rational `x != 1`, and at
/// `x = 1` the enclosure is the exact point `0`.
fn ln_le(x: &Rational, bound: &Rational, what: &str) -> Result<bool> {
    if x.is_one() {
        return Ok(&Rational::zero() <= bound);
    }
    adaptive(
        |prec| {
            Ok(match ln_rational(x, prec)?.cmp_rational(bound) {
                Some(Ordering::Greater) => Some(false),
                Some(_) => Some(true),
                None => None,
            })
        },
        what,
    )
}

/// Checks the two tail inequalities for witness count `p` at length
/// `n0` against an `N0`-horizon envelope `f(n) >= c * rate^n`:
///
/// - step: `log(p) / n0 <= log rate`;
/// - anchor: `(N0 + n0) * log(p) / n0 <= log c + N0 * log rate`.
///
/// Both comparisons are non-strict and decided exactly.
fn tail_holds(
    env: &EnvelopeCert,
    p: &BigUint,
    finite_horizon: u64,
    witness_n: u64,
) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    let n0 = witness_n;
    let big_n = finite_horizon;
    let overflow = || Error::Budget(String::from("tail exponent exceeds the power budget"));
    let total = big_n.checked_add(n0).ok_or_else(overflow)?;
    match &env.rate {
        GrowthRate::RationalRoot { base, root } => {
            let v = u64::from(*root);
            let (a, b) = positive_parts(base)?;
            let (cn, cd) = positive_parts(&env.c)?;
            // Step: p^v * b^{n0} <= a^{n0}.
            if pow_exp(p, v)? * pow_exp(&b, n0)? > pow_exp(&a, n0)? {
                return Ok(false);
            }
            // Anchor, cross-multiplied to integers:
            // p^{v(N0+n0)} * cd^{v n0} * b^{N0 n0} <= cn^{v n0} * a^{N0 n0}.
            let e_span = v.checked_mul(total).ok_or_else(overflow)?;
            let e_c = v.checked_mul(n0).ok_or_else(overflow)?;
            let e_rate = big_n.checked_mul(n0).ok_or_else(overflow)?;
            let lhs = pow_exp(p, e_span)? * pow_exp(&cd, e_c)? * pow_exp(&b, e_rate)?;
            let rhs = pow_exp(&cn, e_c)? * pow_exp(&a, e_rate)?;
            Ok(lhs <= rhs)
        }
        GrowthRate::ExpRational { t } => {
            if !env.c.is_positive() {
                return Ok(false);
            }
            let p_rat = Rational::from_integer(BigInt::from(p.clone()));
            // Step: log p <= n0 * t.
            let step_bound = t * Rational::from_integer(n0.into());
            if !ln_le(&p_rat, &step_bound, "tail step inequality")? {
                return Ok(false);
            }
            // Anchor: log(p^{N0+n0} / c^{n0}) <= N0 * n0 * t.
            let inner = pow_rational(&p_rat, total) / pow_rational(&env.c, n0);
            if !inner.is_positive() {
                return Ok(false);
            }
            let anchor_bound =
                t * Rational::from_integer(BigInt::from(big_n) * BigInt::from(n0));
            ln_le(&inner, &anchor_bound, "tail anchor inequality")
        }
    }
}

// ---------------------------------------------------------------------
// Certification of a fixed subsystem.

fn first_violation(
    counts: &[BigUint],
    floors: &[BigUint],
) -> Option<(u64, BigUint, BigUint)> {
    counts
        .iter()
        .zip(floors.iter())
        .enumerate()
        .find(|(_, (c, f))| c > f)
        .map(|(n, (c, f))| (n as u64, c.clone(), f.clone()))
}

/// Witness lengths tried at each horizon, preference first.
fn witness_candidates(preferred: u64, horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for cand in [preferred, preferred * 2, preferred / 2, 1] {
        if (1..=horizon).contains(&cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// One horizon: the exact count comparison once, then each witness in
/// order. Finite-check failures are final for every larger horizon.
fn certify_horizon(
    stack: &BoundStack<'_>,
    x: &SftSystem,
    finite_horizon: u64,
    witnesses: &[u64],
    tol: &Rational,
) -> Result<CertifyOutcome> {
    let Some(env) = stack.envelope_cert()? else {
        return Ok(CertifyOutcome::Failed(CertifyFailure::NoEnvelope));
    };
    let floors = stack.floor_table(finite_horizon)?;
    let counts = x.complexity_table(finite_horizon);
    if let Some((n, count, bound)) = first_violation(&counts, &floors) {
        return Ok(CertifyOutcome::Failed(CertifyFailure::FiniteCheck {
            n,
            count,
            bound,
        }));
    }
    for &n0 in witnesses {
        let p = &counts[n0 as usize];
        if !tail_holds(&env, p, finite_horizon, n0)? {
            continue;
        }
        let entropy = x.entropy(tol)?;
        let transcript = vec![
            format!(
                "subsystem: {} windows of length {} over {} letters, {} edges",
                x.vertex_count(),
                x.memory(),
                stack.alphabet_size(),
                x.edge_count()
            ),
            format!(
                "finite check: p(n) <= floor({}) exactly for all n <= {}",
                stack.describe(),
                finite_horizon
            ),
            format!("witness: n0 = {n0} with p(n0) = {p}"),
            format!("envelope: {}", env.describe()),
            format!(
                "tail: log(p(n0))/n0 <= log(rate) and (N0+n0) log(p(n0))/n0 \
                 <= log(c) + N0 log(rate) at N0 = {finite_horizon}; \
                 submultiplicativity closes every n > N0"
            ),
            format!(
                "entropy: log of the spectral radius lies in [{:.12}, {:.12}]",
                entropy.lo_f64(),
                entropy.hi_f64()
            ),
        ];
        return Ok(CertifyOutcome::Certified(Box::new(Certificate {
            alphabet: stack.alphabet_size(),
            memory: x.memory(),
            vertices: x.vertices().to_vec(),
            adjacency: x.adjacency().to_vec(),
            finite_horizon,
            witness_n: n0,
            witness_count: p.clone(),
            envelope: env,
            entropy,
            tol: tol.clone(),
            transcript,
        })));
    }
    Ok(CertifyOutcome::Failed(CertifyFailure::TailGap {
        finite_horizon,
        witness_n: witnesses.first().copied().unwrap_or(0),
    }))
}

/// Horizon ladder: doubling `N0` from `finite_start` to `finite_cap`,
/// trying the witness ladder at each rung. Count violations stop the
/// search immediately; only tail gaps justify a longer horizon.
fn certify_with_options(
    stack: &BoundStack<'_>,
    x: &SftSystem,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome> {
    let cap = opts.finite_cap.max(1);
    let mut horizon = opts.finite_start.clamp(1, cap);
    loop {
        let witnesses = witness_candidates(opts.witness_n.max(1), horizon);
        let outcome = certify_horizon(stack, x, horizon, &witnesses, &opts.tol)?;
        match &outcome {
            CertifyOutcome::Certified(_) => return Ok(outcome),
            CertifyOutcome::Failed(CertifyFailure::TailGap { .. }) => {
                if horizon >= cap {
                    return Ok(outcome);
                }
                horizon = (horizon * 2).min(cap);
            }
            CertifyOutcome::Failed(_) => return Ok(outcome),
        }
    }
}

/// Checks one subsystem against the bound at a fixed horizon and witness
/// length. The count comparison is exact; the tail is decided exactly
/// through the bound's envelope.
pub fn certify_lower(
    spec: &BoundSpec,
    x: &SftSystem,
    finite_horizon: u64,
    witness_n: u64,
    tol: &Rational,
) -> Result<CertifyOutcome> {
    if u32::from(x.alphabet().size()) != spec.alphabet_size() {
        return Err(Error::BadAlphabet(format!(
            "subsystem alphabet {} differs from the bound's {}",
            x.alphabet().size(),
            spec.alphabet_size()
        )));
    }
    if witness_n == 0 || witness_n > finite_horizon {
        return Err(Error::Domain(format!(
            "witness length {witness_n} outside 1..={finite_horizon}"
        )));
    }
    let stack = BoundStack::single(spec);
    certify_horizon(&stack, x, finite_horizon, &[witness_n], tol)
}

/// Re-derives every inequality a certificate claims. Errors with
/// [`Error::Certificate`] at the first discrepancy.
pub fn verify_certificate(spec: &BoundSpec, cert: &Certificate) -> Result<()> {
    let stack = BoundStack::single(spec);
    if cert.alphabet != stack.alphabet_size() {
        return Err(Error::Certificate(format!(
            "certificate alphabet {} does not match the bound's {}",
            cert.alphabet,
            stack.alphabet_size()
        )));
    }
    let sys = cert.system()?;
    if sys.vertices() != &cert.vertices[..] || sys.adjacency() != &cert.adjacency[..] {
        return Err(Error::Certificate(String::from(
            "stored presentation is not closed under extension pruning",
        )));
    }
    if !sys.is_strongly_connected() {
        return Err(Error::Certificate(String::from(
            "stored subsystem is not strongly connected",
        )));
    }
    let env = stack.envelope_cert()?.ok_or_else(|| {
        Error::Certificate(String::from("bound carries no envelope to verify against"))
    })?;
    if env != cert.envelope {
        return Err(Error::Certificate(String::from(
            "stored envelope differs from the bound's",
        )));
    }
    let floors = stack.floor_table(cert.finite_horizon)?;
    let counts = sys.complexity_table(cert.finite_horizon);
    if let Some((n, count, bound)) = first_violation(&counts, &floors) {
        return Err(Error::Certificate(format!(
            "count {count} exceeds floor {bound} at length {n}"
        )));
    }
    if cert.witness_n == 0 || cert.witness_n > cert.finite_horizon {
        return Err(Error::Certificate(format!(
            "witness length {} outside the horizon {}",
            cert.witness_n, cert.finite_horizon
        )));
    }
    if counts[cert.witness_n as usize] != cert.witness_count {
        return Err(Error::Certificate(format!(
            "witness count {} does not match the recomputed {}",
            cert.witness_count, counts[cert.witness_n as usize]
        )));
    }
    if !tail_holds(&env, &cert.witness_count, cert.finite_horizon, cert.witness_n)? {
        return Err(Error::Certificate(String::from(
            "tail inequality does not hold for the stored witness",
        )));
    }
    let entropy = sys.entropy(&cert.tol)?;
    if entropy.intersect(&cert.entropy).is_none() {
        return Err(Error::Certificate(format!(
            "stored entropy [{:.12}, {:.12}] misses the recomputed enclosure",
            cert.entropy.lo_f64(),
            cert.entropy.hi_f64()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Candidate search inside follower graphs.

/// Power-iteration estimate of the spectral radius (an ordering key for
/// the candidate queue, never part of any certified statement).
fn radius_estimate(adj: &[Vec<u32>]) -> f64 {
    let n = adj.len();
    let mut v = vec![1.0f64; n];
    let mut norm = 1.0f64;
    for _ in 0..64 {
        // One step of (A + I) keeps the iteration aperiodic.
        let mut w = v.clone();
        for (i, targets) in adj.iter().enumerate() {
            for &t in targets {
                w[i] += v[t as usize];
            }
        }
        norm = w.iter().cloned().fold(0.0f64, f64::max);
        if norm <= 0.0 {
            return 0.0;
        }
        for x in &mut w {
            *x /= norm;
        }
        v = w;
    }
    norm - 1.0
}

/// Left/right principal-vector products, the classical "keep the heavy
/// vertices" score for greedy peeling.
fn peel_scores(adj: &[Vec<u32>]) -> Vec<f64> {
    let n = adj.len();
    let mut right = vec![1.0f64; n];
    let mut left = vec![1.0f64; n];
    for _ in 0..48 {
        let mut r2 = right.clone();
        let mut l2 = left.clone();
        for (i, targets) in adj.iter().enumerate() {
            for &t in targets {
                r2[i] += right[t as usize];
                l2[t as usize] += left[i];
            }
        }
        for v in [&mut r2, &mut l2] {
            let m = v.iter().cloned().fold(0.0f64, f64::max);
            if m > 0.0 {
                for x in v.iter_mut() {
                    *x /= m;
                }
            }
        }
        right = r2;
        left = l2;
    }
    (0..n).map(|i| left[i] * right[i]).collect()
}

fn passes_screen(sys: &SftSystem, floors: &[BigUint], horizon: u64) -> bool {
    sys.complexity_table(horizon)
        .iter()
        .zip(floors.iter())
        .all(|(p, f)| p <= f)
}

/// Exhaustive search over vertex subsets: every subset is reduced to the
/// largest strongly connected core it induces, deduplicated, screened
/// against the floor table, and queued by estimated growth.
fn subset_search(
    stack: &BoundStack<'_>,
    graph: &FollowerGraph,
    screen_floors: &[BigUint],
    opts: &CertifyOptions,
    notes: &mut Vec<String>,
) -> Result<Option<Box<Certificate>>> {
    let v = graph.vertex_count();
    let memory = graph.memory();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue: Vec<(f64, Vec<u32>, SftSystem)> = Vec::new();
    for mask in 1u64..(1u64 << v) {
        let keep: Vec<u32> =
            (0..v as u32).filter(|&i| (mask >> i) & 1 == 1).collect();
        let induced = graph.induced(&keep)?;
        let component = induced
            .components()
            .into_iter()
            .next()
            .expect("non-empty graph has a component");
        let canonical: Vec<u32> =
            component.iter().map(|&r| keep[r as usize]).collect();
        if !seen.insert(canonical.clone()) {
            continue;
        }
        let core = graph.induced(&canonical)?;
        if core.edge_count() == 0 {
            continue;
        }
        let sys = match core.system() {
            Ok(sys) => sys,
            Err(Error::EmptyLanguage) => continue,
            Err(e) => return Err(e),
        };
        if sys.vertex_count() != core.vertex_count() {
            continue;
        }
        if !passes_screen(&sys, screen_floors, opts.screen_horizon) {
            continue;
        }
        let estimate = radius_estimate(core.adjacency());
        queue.push((estimate, canonical, sys));
    }
    queue.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    notes.push(format!(
        "memory {memory}: {v} windows, {} candidate cores pass the screen",
        queue.len()
    ));
    let mut rejections = 0usize;
    for (_, canonical, sys) in queue {
        match certify_with_options(stack, &sys, opts)? {
            CertifyOutcome::Certified(cert) => {
                notes.push(format!(
                    "memory {memory}: certified a {}-window core, entropy at least {:.9}",
                    canonical.len(),
                    cert.entropy.lo_f64()
                ));
                return Ok(Some(cert));
            }
            CertifyOutcome::Failed(failure) => {
                rejections += 1;
                match rejections.cmp(&7) {
                    Ordering::Less => notes.push(format!(
                        "memory {memory}: {}-window core rejected: {}",
                        canonical.len(),
                        failure.describe()
                    )),
                    Ordering::Equal => notes.push(format!(
                        "memory {memory}: further rejections suppressed"
                    )),
                    Ordering::Greater => {}
                }
            }
        }
    }
    Ok(None)
}

/// Greedy fallback for graphs too large to enumerate: repeatedly try the
/// dominant strongly connected component, then peel the vertex with the
/// lightest principal-vector weight.
fn greedy_search(
    stack: &BoundStack<'_>,
    graph: &FollowerGraph,
    screen_floors: &[BigUint],
    opts: &CertifyOptions,
    notes: &mut Vec<String>,
) -> Result<Option<Box<Certificate>>> {
    let memory = graph.memory();
    notes.push(format!(
        "memory {memory}: {} windows, greedy peeling (subset budget exceeded)",
        graph.vertex_count()
    ));
    let components = graph.components();
    let mut current = graph.induced(&components[0])?;
    for round in 0..=opts.max_removals {
        if current.edge_count() > 0 {
            let attempt = match current.system() {
                Ok(sys) if sys.vertex_count() == current.vertex_count() => Some(sys),
                Ok(_) | Err(Error::EmptyLanguage) => None,
                Err(e) => return Err(e),
            };
            if let Some(sys) = attempt {
                if passes_screen(&sys, screen_floors, opts.screen_horizon) {
                    match certify_with_options(stack, &sys, opts)? {
                        CertifyOutcome::Certified(cert) => {
                            notes.push(format!(
                                "memory {memory}: certified after {round} removals, \
                                 entropy at least {:.9}",
                                cert.entropy.lo_f64()
                            ));
                            return Ok(Some(cert));
                        }
                        CertifyOutcome::Failed(failure) => notes.push(format!(
                            "memory {memory}: core after {round} removals rejected: {}",
                            failure.describe()
                        )),
                    }
                }
            }
        }
        if current.vertex_count() <= 1 || round == opts.max_removals {
            break;
        }
        let scores = peel_scores(current.adjacency());
        let worst = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i as u32)
            .expect("non-empty scores");
        let keep: Vec<u32> = (0..current.vertex_count() as u32)
            .filter(|&i| i != worst)
            .collect();
        let peeled = current.induced(&keep)?;
        let comps = peeled.components();
        current = peeled.induced(&comps[0])?;
    }
    Ok(None)
}

fn search_memory(
    stack: &BoundStack<'_>,
    graph: &FollowerGraph,
    screen_floors: &[BigUint],
    opts: &CertifyOptions,
    notes: &mut Vec<String>,
) -> Result<Option<Box<Certificate>>> {
    let v = graph.vertex_count();
    let exhaustive = v < 64 && (1u128 << v) <= u128::from(opts.subset_cap);
    if exhaustive {
        subset_search(stack, graph, screen_floors, opts, notes)
    } else {
        greedy_search(stack, graph, screen_floors, opts, notes)
    }
}

// ---------------------------------------------------------------------
// Brackets.

/// Two-sided entropy information for one bound: a certified attained
/// lower bound (when a subsystem certifies) and the slice upper bound.
#[derive(Debug, Clone)]
pub struct EntropyBracket {
    /// Entropy of the best certified subsystem; the point `0` when no
    /// certificate was found (the empty product is always attained).
    pub lower: Enclosure,
    /// `min_n (1/n) log |S_n|` over the enumerated slice.
    pub upper: UpperBound,
    /// Whether `lower` is backed by a verified certificate.
    pub certified: bool,
    pub certificate: Option<Box<Certificate>>,
    /// The enumerated slice behind the upper bound.
    pub slice: Slice,
    /// Search narrative: candidate counts, rejections, budget cuts.
    pub notes: Vec<String>,
}

fn bracket_for(stack: &BoundStack<'_>, opts: &CertifyOptions) -> Result<EntropyBracket> {
    if opts.max_n < 2 {
        return Err(Error::Domain(String::from("bracket depth must be at least 2")));
    }
    let alphabet = Alphabet::new(stack.alphabet_size())?;
    let caps = stack.floor_table_clamped(opts.max_n as u64, u64::MAX)?;
    let slice = enumerate_slice_with_caps(
        alphabet,
        &caps,
        stack.describe(),
        opts.max_n,
        &opts.budget,
        &[],
    )?;
    bracket_from_slice(stack, slice, opts)
}

fn bracket_from_slice(
    stack: &BoundStack<'_>,
    slice: Slice,
    opts: &CertifyOptions,
) -> Result<EntropyBracket> {
    let upper = upper_bound(&slice, &opts.tol)?;
    let mut notes = Vec::new();
    if slice.truncated() {
        notes.push(format!(
            "slice truncated by the row budget at depth {}",
            slice.completed()
        ));
    }
    let mut best: Option<Box<Certificate>> = None;
    if stack.envelope_cert()?.is_none() {
        notes.push(String::from(
            "no exponential envelope: certificates unavailable for this bound",
        ));
    } else {
        let screen_floors = stack.floor_table(opts.screen_horizon)?;
        let memory_limit = opts.memory_cap.min(slice.completed().saturating_sub(1));
        for memory in 1..=memory_limit {
            let graph = match follower_graph(&slice, memory) {
                Ok(graph) => graph,
                Err(Error::Budget(msg)) | Err(Error::Domain(msg)) => {
                    notes.push(format!("memory {memory}: {msg}"));
                    break;
                }
                Err(e) => return Err(e),
            };
            let Some(cert) =
                search_memory(stack, &graph, &screen_floors, opts, &mut notes)?
            else {
                continue;
            };
            let better = match &best {
                None => true,
                Some(current) => cert.entropy.lo() > current.entropy.hi(),
            };
            if better {
                best = Some(cert);
            } else {
                notes.push(format!(
                    "memory {memory}: certificate does not improve the held bound"
                ));
            }
        }
    }
    let lower = match &best {
        Some(cert) => cert.entropy.clone(),
        None => Enclosure::point(Rational::zero()),
    };
    Ok(EntropyBracket {
        lower,
        upper,
        certified: best.is_some(),
        certificate: best,
        slice,
        notes,
    })
}

/// Computes the entropy bracket of a bound: the slice upper bound plus
/// the best subsystem certificate the search finds.
pub fn ew_bracket(spec: &BoundSpec, opts: &CertifyOptions) -> Result<EntropyBracket> {
    bracket_for(&BoundStack::single(spec), opts)
}

/// [`ew_bracket`] against a slice the caller already enumerated (for
/// example, sharded across workers and merged back in row order). The
/// slice must come from `spec` at depth `opts.max_n`.
pub fn ew_bracket_sliced(
    spec: &BoundSpec,
    slice: Slice,
    opts: &CertifyOptions,
) -> Result<EntropyBracket> {
    if opts.max_n < 2 {
        return Err(Error::Domain(String::from("bracket depth must be at least 2")));
    }
    if u32::from(slice.alphabet().size()) != spec.alphabet_size() {
        return Err(Error::Domain(String::from(
            "slice alphabet does not match the bound",
        )));
    }
    if slice.describe() != spec.describe() {
        return Err(Error::Domain(format!(
            "slice was enumerated for {:?}, not {:?}",
            slice.describe(),
            spec.describe()
        )));
    }
    bracket_from_slice(&BoundStack::single(spec), slice, opts)
}

/// Exact complexity bracket at one length: the certified subsystem's
/// count from below (realized by its transitive words), the slice count
/// from above.
pub fn pf_bracket(bracket: &EntropyBracket, n: usize) -> Result<(BigUint, BigUint)> {
    let upper = bracket.slice.count_at(n).ok_or_else(|| {
        Error::Budget(format!("slice does not reach depth {n}"))
    })?;
    let lower = match &bracket.certificate {
        Some(cert) => cert.system()?.complexity(n as u64),
        None => BigUint::one(),
    };
    Ok((lower, BigUint::from(upper)))
}

/// Brackets for two bounds and their pointwise minimum, with the
/// upper-bound consistency comparison.
#[derive(Debug, Clone)]
pub struct MinExperiment {
    pub left: EntropyBracket,
    pub right: EntropyBracket,
    pub min: EntropyBracket,
    /// Whether `upper(min)` stays at or below both individual uppers.
    pub upper_consistent: bool,
    pub notes: Vec<String>,
}

/// Runs the pointwise-minimum experiment `min(f, g)` against `f` and `g`
/// separately. The minimum's slice is enumerated against the
/// elementwise-minimum floor table, and its certificates use the
/// min-combined envelope.
pub fn min_experiment(
    f: &BoundSpec,
    g: &BoundSpec,
    opts: &CertifyOptions,
) -> Result<MinExperiment> {
    let stack = BoundStack::min_of(f, g)?;
    let left = bracket_for(&BoundStack::single(f), opts)?;
    let right = bracket_for(&BoundStack::single(g), opts)?;
    let min = bracket_for(&stack, opts)?;
    let individual = left.upper.value.hi().clone().min(right.upper.value.hi().clone());
    let upper_consistent = min.upper.value.lo() <= &individual;
    let notes = vec![
        format!(
            "upper(min) <= {:.9}; min of the individual uppers is {:.9}",
            min.upper.value.hi_f64(),
            crate::certified::rational_to_f64(&individual)
        ),
        format!(
            "lower(min) is {:.9} (certified: {})",
            min.lower.lo_f64(),
            min.certified
        ),
    ];
    Ok(MinExperiment { left, right, min, upper_consistent, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_bound;
    use crate::generate::sft::{sft_from_forbidden, SftSystem};
    use crate::word::FiniteWord;

    const LN_PHI: f64 = 0.481_211_825_059_603_45;
    const LN_TRIBONACCI: f64 = 0.609_377_863_436_000_3;
    const LN_2: f64 = core::f64::consts::LN_2;

    fn word(letters: &[u8]) -> FiniteWord {
        FiniteWord::new(Alphabet::new(2).unwrap(), letters.to_vec()).unwrap()
    }

    #[test]
    fn default_options_are_sane() {
        let opts = CertifyOptions::default();
        assert_eq!(opts.max_n, 20);
        assert!(opts.finite_start <= opts.finite_cap);
        assert!(opts.tol.is_positive());
    }

    #[test]
    fn golden_bracket_certifies_the_fibonacci_core() {
        let spec = parse_bound("preset:golden").unwrap();
        let opts = CertifyOptions::default();
        let bracket = ew_bracket(&spec, &opts).unwrap();

        assert!(bracket.certified, "notes: {:?}", bracket.notes);
        let cert = bracket.certificate.as_ref().unwrap();
        assert_eq!(cert.memory, 2);
        assert_eq!(cert.vertices, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(cert.finite_horizon, 200);
        assert_eq!(cert.witness_n, 20);
        // Count at the witness: the Fibonacci number F_22.
        assert_eq!(cert.witness_count, BigUint::from(17_711u32));
        assert!((cert.entropy.lo_f64() - LN_PHI).abs() < 1e-9);
        assert!((cert.entropy.hi_f64() - LN_PHI).abs() < 1e-9);
        assert_eq!(bracket.lower, cert.entropy);

        // Upper bound from the slice: (1/20) log 35454.
        assert_eq!(bracket.upper.witness_n, 20);
        assert_eq!(bracket.upper.witness_count, 35_454);
        assert!((bracket.upper.value.hi_f64() - 0.523_790_8).abs() < 1e-4);

        verify_certificate(&spec, cert).unwrap();

        let (lo, hi) = pf_bracket(&bracket, 5).unwrap();
        assert_eq!(lo, BigUint::from(13u32));
        assert_eq!(hi, BigUint::from(28u32));

        // The whole pipeline is deterministic.
        let again = ew_bracket(&spec, &opts).unwrap();
        assert_eq!(again.certificate.as_deref(), Some(cert.as_ref()));
        assert_eq!(again.upper.value, bracket.upper.value);
        assert_eq!(again.notes, bracket.notes);
    }

    #[test]
    fn staircase_recurrence_bracket_certifies_the_tribonacci_core() {
        let spec = parse_bound("preset:cassaigne").unwrap();
        let opts = CertifyOptions::default();
        let bracket = ew_bracket(&spec, &opts).unwrap();

        assert!(bracket.certified, "notes: {:?}", bracket.notes);
        let cert = bracket.certificate.as_ref().unwrap();
        assert_eq!(cert.memory, 3);
        assert_eq!(cert.vertices.len(), 7);
        assert!(!cert.vertices.contains(&vec![1, 1, 1]));
        assert_eq!(cert.finite_horizon, 3200);
        assert_eq!(cert.witness_n, 20);
        assert_eq!(cert.witness_count, BigUint::from(223_317u32));

        // Independent oracle: log of the positive root of x^3 = x^2+x+1.
        let coeffs: Vec<BigInt> =
            [-1, -1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let cubic_root = crate::certified::real_root(
            &coeffs,
            Rational::from_integer(1.into()),
            Rational::from_integer(2.into()),
            &opts.tol,
        )
        .unwrap();
        let expected = adaptive(
            |prec| Ok(Some(ln_rational(cubic_root.lo(), prec)?)),
            "oracle entropy",
        )
        .unwrap();
        assert!((cert.entropy.lo_f64() - expected.lo_f64()).abs() < 1e-9);
        assert!((cert.entropy.lo_f64() - LN_TRIBONACCI).abs() < 1e-9);

        // Same language as the forbidden-word presentation.
        let direct = sft_from_forbidden(2, &[word(&[1, 1, 1])]).unwrap();
        let sys = cert.system().unwrap();
        assert_eq!(sys.complexity_table(12), direct.complexity_table(12));

        // Bracket sandwich: lower fits under the slice upper bound.
        assert!(bracket.lower.hi() <= bracket.upper.value.hi());

        verify_certificate(&spec, cert).unwrap();

        let (lo, hi) = pf_bracket(&bracket, 4).unwrap();
        assert_eq!(lo, BigUint::from(13u32));
        assert_eq!(hi, BigUint::from(16u32));
    }

    #[test]
    fn loose_full_shift_bound_certifies_the_full_shift() {
        // floor(2 * 2^n) over the binary alphabet admits the whole
        // shift; the anchor inequality only closes at the witness
        // length 1, which the witness ladder must find.  The alphabet
        // is pinned because the parser defaults to floor(f(1)) = 4.
        let spec = parse_bound("2*2^n").unwrap().with_alphabet(2).unwrap();
        let opts = CertifyOptions::default();
        let bracket = ew_bracket(&spec, &opts).unwrap();

        assert!(bracket.certified, "notes: {:?}", bracket.notes);
        let cert = bracket.certificate.as_ref().unwrap();
        assert_eq!(cert.memory, 1);
        assert_eq!(cert.vertices, vec![vec![0], vec![1]]);
        assert_eq!(cert.finite_horizon, 200);
        assert_eq!(cert.witness_n, 1);
        assert_eq!(cert.witness_count, BigUint::from(2u32));
        assert!((cert.entropy.lo_f64() - LN_2).abs() < 1e-9);
        assert!((bracket.upper.value.lo_f64() - LN_2).abs() < 1e-9);
        verify_certificate(&spec, cert).unwrap();
    }

    #[test]
    fn full_shift_fails_the_golden_finite_check() {
        let spec = parse_bound("preset:golden").unwrap();
        let shift = SftSystem::full_shift(2, 1).unwrap();
        let tol = CertifyOptions::default().tol;
        let outcome = certify_lower(&spec, &shift, 200, 20, &tol).unwrap();
        assert_eq!(
            outcome,
            CertifyOutcome::Failed(CertifyFailure::FiniteCheck {
                n: 2,
                count: BigUint::from(4u32),
                bound: BigUint::from(3u32),
            })
        );
    }

    #[test]
    fn oversized_witness_leaves_a_tail_gap() {
        // At n0 = N0 = 200 the anchor needs 400 s <= 200 log rate with
        // s near log phi > (1/2) log 3: impossible, and the single-shot
        // entry point must report the gap rather than escalate.
        let spec = parse_bound("preset:golden").unwrap();
        let fib = sft_from_forbidden(2, &[word(&[1, 1])]).unwrap();
        let tol = CertifyOptions::default().tol;
        let outcome = certify_lower(&spec, &fib, 200, 200, &tol).unwrap();
        assert_eq!(
            outcome,
            CertifyOutcome::Failed(CertifyFailure::TailGap {
                finite_horizon: 200,
                witness_n: 200,
            })
        );
    }

    #[test]
    fn verification_rejects_tampered_certificates() {
        let spec = parse_bound("preset:golden").unwrap();
        let bracket = ew_bracket(&spec, &CertifyOptions::default()).unwrap();
        let cert = bracket.certificate.unwrap();

        let mut forged = (*cert).clone();
        forged.witness_count += BigUint::one();
        assert!(matches!(
            verify_certificate(&spec, &forged),
            Err(Error::Certificate(_))
        ));

        let mut shifted = (*cert).clone();
        let one = Rational::one();
        shifted.entropy = Enclosure::new(
            shifted.entropy.lo() + &one,
            shifted.entropy.hi() + &one,
        );
        assert!(matches!(
            verify_certificate(&spec, &shifted),
            Err(Error::Certificate(_))
        ));

        let mut cross = (*cert).clone();
        cross.alphabet = 3;
        assert!(matches!(
            verify_certificate(&spec, &cross),
            Err(Error::Certificate(_))
        ));
    }

    #[test]
    fn linear_bound_certifies_zero_entropy() {
        // f(n) = n + 1 has a rate-one envelope; the only certifiable
        // cores are single loops, and the certified lower bound is the
        // attained zero.
        let spec = parse_bound("n + 1").unwrap();
        let bracket = ew_bracket(&spec, &CertifyOptions::default()).unwrap();
        assert!(bracket.certified, "notes: {:?}", bracket.notes);
        let cert = bracket.certificate.as_ref().unwrap();
        assert_eq!(cert.memory, 1);
        assert_eq!(cert.vertices, vec![vec![0]]);
        assert!(cert.entropy.hi_f64().abs() < 1e-9);
        // Slice counts under caps k + 1 (brute-force oracle):
        // 28 at n = 5, 46 at n = 6, 1382 at n = 20, where the minimum
        // of (1/n) log |S_n| is attained.
        assert_eq!(bracket.slice.counts()[5], 28);
        assert_eq!(bracket.slice.counts()[20], 1382);
        assert_eq!(bracket.upper.witness_n, 20);
        assert_eq!(bracket.upper.witness_count, 1382);
        let expected = (1382f64).ln() / 20.0;
        assert!((bracket.upper.value.lo_f64() - expected).abs() < 1e-9);
        verify_certificate(&spec, cert).unwrap();
    }

    #[test]
    fn greedy_peeling_still_finds_a_positive_core() {
        // Forcing the greedy fallback: it peels the full graph down to
        // the mirror-image core (first index wins score ties) and still
        // lands on the golden entropy.
        let spec = parse_bound("preset:golden").unwrap();
        let opts = CertifyOptions { subset_cap: 0, ..CertifyOptions::default() };
        let bracket = ew_bracket(&spec, &opts).unwrap();
        assert!(bracket.certified, "notes: {:?}", bracket.notes);
        let cert = bracket.certificate.as_ref().unwrap();
        assert_eq!(cert.memory, 2);
        assert_eq!(cert.vertices, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!((cert.entropy.lo_f64() - LN_PHI).abs() < 1e-9);
        verify_certificate(&spec, cert).unwrap();
    }

    #[test]
    fn minimum_experiment_agrees_with_the_tighter_bound() {
        // min(golden, 2*2^n) = golden pointwise, so the minimum bracket
        // must reproduce the golden lower bound while both inputs keep
        // their own certificates.
        let golden = parse_bound("preset:golden").unwrap();
        let loose = parse_bound("2*2^n").unwrap().with_alphabet(2).unwrap();
        let opts = CertifyOptions { max_n: 14, ..CertifyOptions::default() };
        let report = min_experiment(&golden, &loose, &opts).unwrap();

        assert!(report.upper_consistent);
        assert!(report.left.certified && report.right.certified && report.min.certified);
        let left = report.left.certificate.as_ref().unwrap();
        let right = report.right.certificate.as_ref().unwrap();
        let min = report.min.certificate.as_ref().unwrap();
        assert!((left.entropy.lo_f64() - LN_PHI).abs() < 1e-9);
        assert!((right.entropy.lo_f64() - LN_2).abs() < 1e-9);
        assert!((min.entropy.lo_f64() - LN_PHI).abs() < 1e-9);
        assert_eq!(min.vertices, left.vertices);
        // The slice of the minimum coincides with the tighter slice.
        assert_eq!(
            report.min.slice.counts().to_vec(),
            report.left.slice.counts().to_vec()
        );
    }

    #[test]
    fn witness_ladder_is_ordered_and_bounded() {
        assert_eq!(witness_candidates(20, 200), vec![20, 40, 10, 1]);
        assert_eq!(witness_candidates(20, 30), vec![20, 10, 1]);
        assert_eq!(witness_candidates(1, 200), vec![1, 2]);
        assert_eq!(witness_candidates(1, 1), vec![1]);
    }

    #[test]
    fn tail_decides_boundary_cases_exactly() {
        // Envelope c * 2^n, witness count 2 at n0 = 1, horizon 200. The
        // anchor compares 2^201 against c * 2^200: exact equality at
        // c = 2 must pass (non-strict), c = 1 must fail, and a witness
        // count above the rate must fail the step inequality outright.
        let rate = GrowthRate::RationalRoot {
            base: Rational::from_integer(2.into()),
            root: 1,
        };
        let tight = EnvelopeCert { c: Rational::one(), rate: rate.clone() };
        assert!(!tail_holds(&tight, &BigUint::from(2u32), 200, 1).unwrap());
        let padded = EnvelopeCert { c: Rational::from_integer(2.into()), rate };
        assert!(tail_holds(&padded, &BigUint::from(2u32), 200, 1).unwrap());
        assert!(!tail_holds(&padded, &BigUint::from(3u32), 200, 1).unwrap());

        // Exponential rates take the logarithmic path: e^{0.7n} clears a
        // witness count of 2 (log 2 < 0.7) but not 3 (log 3 > 0.7).
        let exp = EnvelopeCert {
            c: Rational::one(),
            rate: GrowthRate::ExpRational { t: Rational::new(7.into(), 10.into()) },
        };
        assert!(tail_holds(&exp, &BigUint::from(2u32), 200, 1).unwrap());
        assert!(!tail_holds(&exp, &BigUint::from(3u32), 200, 1).unwrap());
    }
}
