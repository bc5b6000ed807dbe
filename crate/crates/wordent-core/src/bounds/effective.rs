//! Effective prefix lengths for factor richness, and the search that
//! uses them.
//!
//! For an infinite word over `q` letters whose topological entropy
//! exceeds `c`, a window of length
//!
//! ```text
//! g(n) = n * ceil( (n log 2 + e^{cn} (1 + n (log q - c)))
//!                  / (cn - log(ceil(e^{cn}) - 1)) )
//! ```
//!
//! around some position contains at least `ceil(e^{cn})` distinct
//! factors of length `n`. Taking the maximum `f(N) = max_{1<=n<=N} g(n)`
//! yields a single factor length whose prefixes witness richness at all
//! block lengths up to `N` simultaneously. A companion variant replaces
//! the denominator by `log 2`; it is monotone in `n` and avoids the
//! denominator's blow-ups near integer values of `e^{cn}`.
//!
//! All ceilings are decided by adaptive-precision enclosures. The
//! denominator `cn - log(ceil(e^{cn}) - 1)` is positive but can be
//! arbitrarily small (the function is not locally bounded in `c`); when
//! a ceiling remains undecided at the precision cap, evaluation fails
//! with an explicit precision-exhausted error rather than guessing.

use crate::bounds::spec::LogParam;
use crate::certified::series::{ln2, ln_rational};
use crate::certified::{adaptive, pow_rational, Enclosure};
use crate::error::{Error, Result};
use crate::factors::FactorIndex;
use crate::stream::WordStream;
use crate::word::FiniteWord;
use crate::Rational;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

/// Which member of the effective-length family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqcVariant {
    /// `g(n)`: the sharp per-block-length window.
    G,
    /// The regular variant with denominator `log 2`.
    Tilde,
    /// `f(N) = max_{1<=n<=N} g(n)`.
    F,
}

fn validate(q: u32, c: &LogParam) -> Result<()> {
    if q < 2 {
        return Err(Error::BadAlphabet(format!("alphabet size {q} < 2")));
    }
    if !c.is_positive() {
        return Err(Error::Domain(String::from(
            "entropy parameter must be positive",
        )));
    }
    let qr = Rational::from_integer(q.into());
    if c.cmp_ln_rational(&qr)? == Ordering::Greater {
        return Err(Error::Domain(format!(
            "entropy parameter {c} exceeds log {q}"
        )));
    }
    Ok(())
}

/// `ceil(e^{cn})`, exact for symbolic-log parameters and decided
/// adaptively otherwise (`e^{cn}` is irrational for rational `c != 0`).
fn exp_n_ceil(c: &LogParam, n: u64) -> Result<BigUint> {
    let v: BigInt = match c.exp_n_exact(n) {
        Some(x) => x.ceil().to_integer(),
        None => crate::certified::adaptive_ceil(
            |prec| c.exp_n_enclosure(n, prec),
            "ceiling of e^{cn}",
        )?,
    };
    v.to_biguint()
        .ok_or_else(|| Error::Domain(format!("negative ceiling {v}")))
}

/// Shared evaluator for `g` and its regular variant.
fn g_eval(q: u32, c: &LogParam, n: u64, tilde: bool) -> Result<BigUint> {
    validate(q, c)?;
    if n < 1 {
        return Err(Error::Domain(String::from("block length must be >= 1")));
    }
    let e_ceil = exp_n_ceil(c, n)?;
    // E = ceil(e^{cn}) >= 2 because e^{cn} > 1; the denominator argument
    // E - 1 >= 1 and e^{cn} > E - 1 holds strictly, so the denominator
    // of g is positive.
    let e_minus_1 = Rational::from_integer(
        BigInt::from(e_ceil.clone()) - BigInt::one(),
    );
    if !e_minus_1.is_positive() {
        return Err(Error::Domain(format!(
            "ceil(e^{{cn}}) = {e_ceil} leaves an empty factor requirement"
        )));
    }
    let nr = Rational::from_integer(n.into());
    adaptive(
        |prec| {
            // Numerator n log 2 + e^{cn} (1 + n (log q - c)).
            let qr = Rational::from_integer(q.into());
            let lnq_minus_c = match c {
                // log q - log t = log(q/t) in one evaluation.
                LogParam::LnRational(t) => ln_rational(&(&qr / t), prec)?,
                LogParam::Rational(cr) => {
                    ln_rational(&qr, prec)?.sub(&Enclosure::point(cr.clone()))
                }
            };
            let exp_cn = c.exp_n_enclosure(n, prec)?;
            let inner = Enclosure::point(Rational::one()).add(&lnq_minus_c.scale(&nr));
            let a = ln2(prec).scale(&nr).add(&exp_cn.mul(&inner));

            // Denominator: log 2, or cn - log(E - 1).
            let b = if tilde {
                ln2(prec)
            } else {
                match c {
                    // cn - log(E-1) = log(t^n / (E-1)) in one evaluation.
                    LogParam::LnRational(t) => {
                        let arg = pow_rational(t, n) / &e_minus_1;
                        ln_rational(&arg, prec)?
                    }
                    LogParam::Rational(cr) => {
                        let cn = cr * &nr;
                        Enclosure::point(cn).sub(&ln_rational(&e_minus_1, prec)?)
                    }
                }
            };
            if !b.lo().is_positive() {
                return Ok(None); // not yet separated from zero
            }
            let ratio = a.div(&b)?;
            let cl = ratio.lo().ceil().to_integer();
            let ch = ratio.hi().ceil().to_integer();
            if cl != ch {
                return Ok(None);
            }
            let k = cl
                .to_biguint()
                .ok_or_else(|| Error::Domain(format!("negative window ratio {cl}")))?;
            Ok(Some(k * n))
        },
        "effective window-length ceiling",
    )
}

/// The per-block-length window `g(n)`.
pub fn g_qc(q: u32, c: &LogParam, n: u64) -> Result<BigUint> {
    g_eval(q, c, n, false)
}

/// The regular variant with denominator `log 2`; monotone in `n`.
pub fn g_qc_tilde(q: u32, c: &LogParam, n: u64) -> Result<BigUint> {
    g_eval(q, c, n, true)
}

/// `f(N) = max_{1<=n<=N} g(n)` — the single window length that
/// witnesses richness at every block length up to `N`.
pub fn f_qc(q: u32, c: &LogParam, n_max: u64) -> Result<BigUint> {
    if n_max < 1 {
        return Err(Error::Domain(String::from("n_max must be >= 1")));
    }
    let mut best = BigUint::ZERO;
    for n in 1..=n_max {
        best = best.max(g_qc(q, c, n)?);
    }
    Ok(best)
}

/// Dispatcher over the family.
pub fn g_qc_family(q: u32, c: &LogParam, n: u64, which: GqcVariant) -> Result<BigUint> {
    match which {
        GqcVariant::G => g_qc(q, c, n),
        GqcVariant::Tilde => g_qc_tilde(q, c, n),
        GqcVariant::F => f_qc(q, c, n),
    }
}

/// Outcome of [`rich_factor_search`].
#[derive(Debug, Clone)]
pub enum RichOutcome {
    /// A factor of length `f(N)` of the scanned window, each of whose
    /// prefixes of length `g(n)` contains at least `ceil(e^{cn})`
    /// distinct length-`n` factors.
    Found { gamma: FiniteWord, position: u64 },
    /// No position in the window qualifies: either the window is too
    /// small to hold a factor of the required length (then
    /// `scanned_positions = 0`), or every start position failed a
    /// richness checkpoint — evidence that the word's entropy is below
    /// `c` at this scale.
    NotFound { scanned_positions: u64, required_len: u64 },
}

/// Scans a window of `w` for a factor rich at all block lengths up to
/// `n_max`. Positions are tried left to right; at each position the
/// factor's checkpoints are verified in increasing length order with a
/// shared incremental factor index, so a poor position is abandoned at
/// its first failing checkpoint.
pub fn rich_factor_search(
    w: &mut WordStream,
    q: u32,
    c: &LogParam,
    n_max: u64,
    window: usize,
) -> Result<RichOutcome> {
    validate(q, c)?;
    if n_max < 1 {
        return Err(Error::Domain(String::from("n_max must be >= 1")));
    }
    let alphabet = w.alphabet();
    if u32::from(alphabet.size()) != q {
        return Err(Error::BadAlphabet(format!(
            "word uses {} letters but the window formulas were asked for q = {q}",
            alphabet.size()
        )));
    }

    // Checkpoints: (prefix length g(n), block length n, required count).
    let mut checks: Vec<(u64, u64, u64)> = Vec::with_capacity(n_max as usize);
    let mut required: u64 = 0;
    for n in 1..=n_max {
        let g = g_qc(q, c, n)?
            .to_u64()
            .ok_or_else(|| Error::Budget(format!("window g({n}) exceeds u64")))?;
        let thr = exp_n_ceil(c, n)?
            .to_u64()
            .ok_or_else(|| Error::Budget(format!("factor requirement at {n} exceeds u64")))?;
        checks.push((g, n, thr));
        required = required.max(g);
    }
    checks.sort_unstable();

    if required as usize > window {
        return Ok(RichOutcome::NotFound { scanned_positions: 0, required_len: required });
    }
    let letters: Vec<u8> = w.prefix(window)?.into();
    let last_start = window - required as usize;

    for pos in 0..=last_start {
        let mut idx = FactorIndex::new(alphabet);
        let mut appended = 0usize;
        let mut rich = true;
        for &(g, n, thr) in &checks {
            while appended < g as usize {
                idx.append(letters[pos + appended])?;
                appended += 1;
            }
            if idx.distinct_count(n as usize) < thr {
                rich = false;
                break;
            }
        }
        if rich {
            let gamma = FiniteWord::new(
                alphabet,
                letters[pos..pos + required as usize].to_vec(),
            )?;
            return Ok(RichOutcome::Found { gamma, position: pos as u64 });
        }
    }
    Ok(RichOutcome::NotFound {
        scanned_positions: last_start as u64 + 1,
        required_len: required,
    })
}
