//! Non-integer-base digit systems and the exponential-order word.
//!
//! For a real base `beta > 1` the greedy expansion of 1 yields a digit
//! sequence; its quasi-greedy variant `alpha` (the greedy sequence
//! itself when infinite, the periodised form when the greedy expansion
//! terminates) governs admissibility: a finite word over the digits
//! `0..ceil(beta)-1` occurs in some expansion exactly when every suffix
//! is lexicographically at most `alpha`. The number of admissible words
//! of length `n` is at least `beta^n`, which makes these languages exact
//! witnesses for prescribed exponential complexities.
//!
//! Bases are represented exactly — as rationals, as `e^h` for rational
//! `h`, or as roots of integer polynomials — so digits, admissibility,
//! and counts are decided, never guessed from floating point.

use crate::alphabet::Alphabet;
use crate::bounds::LogParam;
use crate::certified::{adaptive, adaptive_ceil, eval_poly, exp_rational, pow_rational, Enclosure};
use crate::error::{Error, Result};
use crate::stream::{LetterSource, WordStream};
use crate::word::FiniteWord;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational as Rational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Longest digit prefix the expansion engine will compute.
const MAX_ALPHA_DIGITS: usize = 1 << 14;

/// An exactly represented real base `beta > 1`.
#[derive(Debug, Clone)]
pub enum BetaBase {
    /// A rational base, given exactly.
    Rational(Rational),
    /// `beta = e^h` for rational `h > 0` (transcendental by the
    /// Lindemann–Weierstrass theorem, which is what makes every digit
    /// comparison decidable).
    ExpRational(Rational),
    /// The unique root of an irreducible integer polynomial in `(lo, hi)`
    /// with `lo >= 1`. Coefficients are listed from the constant term up.
    /// Irreducibility is the caller's responsibility: it is what makes
    /// the exact zero test (a smaller-degree polynomial never vanishes at
    /// the root) sound. A reducible polynomial can only cause an honest
    /// precision-exhausted error, never a wrong digit.
    AlgebraicRoot {
        minpoly: Vec<BigInt>,
        lo: Rational,
        hi: Rational,
    },
}

impl BetaBase {
    /// Interprets a growth rate `h > 0` as the base `e^h`: exactly
    /// rational for `h = log t`, transcendental otherwise.
    pub fn from_log_param(h: &LogParam) -> Result<BetaBase> {
        if !h.is_positive() {
            return Err(Error::Domain(String::from("growth rate must be positive")));
        }
        match h {
            LogParam::Rational(c) => Ok(BetaBase::ExpRational(c.clone())),
            LogParam::LnRational(t) => Ok(BetaBase::Rational(t.clone())),
        }
    }

    /// The golden ratio, as the root of `x^2 - x - 1` in `(3/2, 2)`.
    pub fn golden_ratio() -> BetaBase {
        BetaBase::AlgebraicRoot {
            minpoly: vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)],
            lo: Rational::new(3.into(), 2.into()),
            hi: Rational::from_integer(2.into()),
        }
    }

    /// Validates the representation and that `beta > 1`.
    fn validate(&self) -> Result<()> {
        match self {
            BetaBase::Rational(t) => {
                if *t <= Rational::one() {
                    return Err(Error::Domain(String::from("base must exceed 1")));
                }
            }
            BetaBase::ExpRational(h) => {
                if !h.is_positive() {
                    return Err(Error::Domain(String::from("exponent must be positive")));
                }
            }
            BetaBase::AlgebraicRoot { minpoly, lo, hi } => {
                if minpoly.len() < 3 {
                    return Err(Error::Domain(String::from(
                        "polynomial bases need degree at least 2; use a rational base instead",
                    )));
                }
                if minpoly.last().map_or(true, Zero::is_zero) {
                    return Err(Error::Domain(String::from("leading coefficient is zero")));
                }
                if lo < &Rational::one() || hi <= lo {
                    return Err(Error::Domain(String::from(
                        "root interval must satisfy 1 <= lo < hi",
                    )));
                }
                let s_lo = eval_poly(minpoly, lo);
                let s_hi = eval_poly(minpoly, hi);
                if s_lo.is_zero() || s_hi.is_zero() || s_lo.is_positive() == s_hi.is_positive() {
                    return Err(Error::NoSignChange);
                }
            }
        }
        Ok(())
    }

    /// A certified enclosure of `beta` of width at most `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> Result<Enclosure> {
        match self {
            BetaBase::Rational(t) => Ok(Enclosure::point(t.clone())),
            BetaBase::ExpRational(h) => exp_rational(h, prec),
            BetaBase::AlgebraicRoot { minpoly, lo, hi } => {
                let mut lo = lo.clone();
                let mut hi = hi.clone();
                let s_lo = eval_poly(minpoly, &lo).is_positive();
                let tol = Rational::new(BigInt::one(), BigInt::one() << prec as usize);
                let two = Rational::from_integer(2.into());
                while &hi - &lo > tol {
                    let mid = (&lo + &hi) / &two;
                    let v = eval_poly(minpoly, &mid);
                    if v.is_zero() {
                        // Rational root: contradicts irreducibility of a
                        // degree >= 2 polynomial, but handle it exactly.
                        return Ok(Enclosure::point(mid));
                    }
                    if v.is_positive() == s_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(Enclosure::new(lo, hi))
            }
        }
    }

    /// The digit alphabet size `ceil(beta)` (at most 36 letters).
    pub fn digit_count(&self) -> Result<u32> {
        self.validate()?;
        let q = match self {
            BetaBase::Rational(t) => t.ceil().to_integer(),
            _ => adaptive_ceil(|prec| self.enclosure(prec), "alphabet of the base")?,
        };
        let q = q
            .to_u32()
            .ok_or_else(|| Error::Domain(String::from("base out of range")))?;
        if q > 36 {
            return Err(Error::BadAlphabet(format!(
                "base needs {q} digits; only alphabets up to 36 letters are supported"
            )));
        }
        Ok(q)
    }

    pub fn describe(&self) -> String {
        match self {
            BetaBase::Rational(t) => format!("rational base {}", t),
            BetaBase::ExpRational(h) => format!("base e^({})", h),
            BetaBase::AlgebraicRoot { minpoly, .. } => {
                format!("algebraic base of degree {}", minpoly.len() - 1)
            }
        }
    }

    fn fresh_remainder(&self) -> Remainder {
        match self {
            BetaBase::Rational(_) => Remainder::Rat(Rational::one()),
            BetaBase::ExpRational(_) => Remainder::Exp(vec![BigInt::one()]),
            BetaBase::AlgebraicRoot { minpoly, .. } => {
                let mut c = vec![Rational::zero(); minpoly.len() - 1];
                c[0] = Rational::one();
                Remainder::Alg(c)
            }
        }
    }

    /// One greedy digit step: from `x` compute `y = beta * x`, the digit
    /// `floor(y)`, the new remainder `y - digit`, and whether it is
    /// exactly zero (terminating expansion).
    fn digit_step(&self, x: &Remainder, q: u32) -> Result<(u8, Remainder, bool)> {
        let y = self.times_beta(x)?;
        let digit = self.floor_of(&y, q)?;
        let rem = y.sub_integer(digit);
        let finite = rem.is_syntactically_zero();
        Ok((digit, rem, finite))
    }

    fn times_beta(&self, x: &Remainder) -> Result<Remainder> {
        match (self, x) {
            (BetaBase::Rational(t), Remainder::Rat(v)) => Ok(Remainder::Rat(t * v)),
            (BetaBase::ExpRational(_), Remainder::Exp(coeffs)) => {
                let mut out = Vec::with_capacity(coeffs.len() + 1);
                out.push(BigInt::zero());
                out.extend_from_slice(coeffs);
                Ok(Remainder::Exp(out))
            }
            (BetaBase::AlgebraicRoot { minpoly, .. }, Remainder::Alg(coeffs)) => {
                // Shift by one power of beta, then reduce the overflow
                // term with beta^d = -(c_0 + ... + c_{d-1} beta^{d-1})/c_d.
                let d = minpoly.len() - 1;
                let mut out = vec![Rational::zero(); d];
                for (i, c) in coeffs.iter().enumerate().take(d - 1) {
                    out[i + 1] = c.clone();
                }
                let top = &coeffs[d - 1];
                if !top.is_zero() {
                    let lead = Rational::from_integer(minpoly[d].clone());
                    for (i, m) in minpoly.iter().enumerate().take(d) {
                        let delta = top * Rational::from_integer(m.clone()) / &lead;
                        out[i] -= delta;
                    }
                }
                Ok(Remainder::Alg(out))
            }
            _ => Err(Error::Domain(String::from("remainder/base mismatch"))),
        }
    }

    /// Exact floor of a remainder value known to lie in `[0, q]`.
    fn floor_of(&self, y: &Remainder, q: u32) -> Result<u8> {
        match y {
            Remainder::Rat(v) => {
                let f = v.floor().to_integer();
                f.to_u8()
                    .ok_or_else(|| Error::Domain(String::from("digit out of range")))
            }
            _ => {
                // Largest k in 0..=q with y >= k, each comparison decided
                // exactly (equality only in the syntactic-zero case).
                let mut floor = 0u8;
                for k in 1..=q {
                    let diff = y.sub_integer_checked(k as u8)?;
                    if diff.is_syntactically_zero() {
                        return u8::try_from(k)
                            .map_err(|_| Error::Domain(String::from("digit out of range")));
                    }
                    match self.sign_of(&diff)? {
                        Ordering::Less => break,
                        _ => {
                            floor = u8::try_from(k).map_err(|_| {
                                Error::Domain(String::from("digit out of range"))
                            })?;
                        }
                    }
                }
                Ok(floor)
            }
        }
    }

    /// Sign of a nonzero remainder, by enclosure refinement. Soundness
    /// of termination: an `Exp` remainder with any nonconstant term is
    /// never zero (linear independence of exponentials), and an `Alg`
    /// remainder of degree below the minimal polynomial is never zero.
    fn sign_of(&self, x: &Remainder) -> Result<Ordering> {
        match x {
            Remainder::Rat(v) => Ok(v.cmp(&Rational::zero())),
            Remainder::Exp(coeffs) => {
                if coeffs.iter().skip(1).all(Zero::is_zero) {
                    return Ok(coeffs[0].cmp(&BigInt::zero()));
                }
                adaptive(
                    |prec| {
                        let beta = self.enclosure(prec)?;
                        let v = eval_with_enclosure_int(coeffs, &beta);
                        Ok(v.cmp_rational(&Rational::zero()))
                    },
                    "sign of digit remainder",
                )
            }
            Remainder::Alg(coeffs) => {
                if coeffs.iter().skip(1).all(Zero::is_zero) {
                    return Ok(coeffs[0].cmp(&Rational::zero()));
                }
                adaptive(
                    |prec| {
                        let beta = self.enclosure(prec)?;
                        let v = eval_with_enclosure_rat(coeffs, &beta);
                        Ok(v.cmp_rational(&Rational::zero()))
                    },
                    "sign of digit remainder",
                )
            }
        }
    }

    /// `ceil(beta^n)`, exactly.
    pub fn pow_ceil(&self, n: u64) -> Result<BigUint> {
        self.validate()?;
        let v = match self {
            BetaBase::Rational(t) => {
                let p = pow_rational(t, n);
                p.ceil().to_integer()
            }
            BetaBase::ExpRational(h) => {
                let t = h * Rational::from_integer(n.into());
                adaptive_ceil(|prec| exp_rational(&t, prec), "ceil of power of the base")?
            }
            BetaBase::AlgebraicRoot { .. } => adaptive_ceil(
                |prec| Ok(self.enclosure(prec.max(64))?.pow_nonneg(n)),
                "ceil of power of the base",
            )?,
        };
        v.to_biguint()
            .ok_or_else(|| Error::Domain(String::from("negative power")))
    }
}

/// The exact state of a greedy expansion: the remainder `x_i`.
#[derive(Debug, Clone)]
enum Remainder {
    Rat(Rational),
    /// Integer-coefficient polynomial in the transcendental base.
    Exp(Vec<BigInt>),
    /// Rational-coefficient polynomial of degree below the minimal
    /// polynomial of the algebraic base.
    Alg(Vec<Rational>),
}

impl Remainder {
    fn sub_integer(&self, k: u8) -> Remainder {
        self.sub_integer_checked(k).expect("same representation")
    }

    fn sub_integer_checked(&self, k: u8) -> Result<Remainder> {
        let mut out = self.clone();
        match &mut out {
            Remainder::Rat(v) => *v -= Rational::from_integer(k.into()),
            Remainder::Exp(c) => c[0] -= BigInt::from(k),
            Remainder::Alg(c) => c[0] -= Rational::from_integer(k.into()),
        }
        Ok(out)
    }

    fn is_syntactically_zero(&self) -> bool {
        match self {
            Remainder::Rat(v) => v.is_zero(),
            Remainder::Exp(c) => c.iter().all(Zero::is_zero),
            Remainder::Alg(c) => c.iter().all(Zero::is_zero),
        }
    }
}

fn eval_with_enclosure_int(coeffs: &[BigInt], x: &Enclosure) -> Enclosure {
    let mut acc = Enclosure::zero();
    for c in coeffs.iter().rev() {
        acc = acc
            .mul(x)
            .add(&Enclosure::point(Rational::from_integer(c.clone())));
    }
    acc
}

fn eval_with_enclosure_rat(coeffs: &[Rational], x: &Enclosure) -> Enclosure {
    let mut acc = Enclosure::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&Enclosure::point(c.clone()));
    }
    acc
}

/// The quasi-greedy expansion digits of 1, extended on demand.
#[derive(Debug, Clone)]
struct AlphaDigits {
    base: BetaBase,
    q: u32,
    digits: Vec<u8>,
    state: ExpansionState,
}

#[derive(Debug, Clone)]
enum ExpansionState {
    /// Still following the greedy expansion.
    Greedy(Remainder),
    /// The greedy expansion of 1 terminated; digits repeat this block
    /// (the greedy digits with the last one decremented).
    Periodic(Vec<u8>),
}

impl AlphaDigits {
    fn new(base: BetaBase, q: u32) -> AlphaDigits {
        let rem = base.fresh_remainder();
        AlphaDigits {
            base,
            q,
            digits: Vec::new(),
            state: ExpansionState::Greedy(rem),
        }
    }

    fn extend_to(&mut self, n: usize) -> Result<()> {
        if n > MAX_ALPHA_DIGITS {
            return Err(Error::Budget(format!(
                "digit expansion beyond {MAX_ALPHA_DIGITS} digits"
            )));
        }
        while self.digits.len() < n {
            match &self.state {
                ExpansionState::Periodic(period) => {
                    let next = period[self.digits.len() % period.len()];
                    self.digits.push(next);
                }
                ExpansionState::Greedy(rem) => {
                    let (digit, next, finite) = self.base.digit_step(rem, self.q)?;
                    if finite {
                        if digit == 0 {
                            return Err(Error::Domain(String::from(
                                "expansion terminated with digit 0",
                            )));
                        }
                        let mut period = self.digits.clone();
                        period.push(digit - 1);
                        self.digits.push(digit - 1);
                        self.state = ExpansionState::Periodic(period);
                    } else {
                        if u32::from(digit) >= self.q {
                            return Err(Error::Domain(String::from(
                                "digit exceeded the alphabet",
                            )));
                        }
                        self.digits.push(digit);
                        self.state = ExpansionState::Greedy(next);
                    }
                }
            }
        }
        Ok(())
    }
}

/// The admissible-word language of a base: all factors of expansions.
#[derive(Debug, Clone)]
pub struct BetaFactorSet {
    base: BetaBase,
    q: u32,
    alphabet: Alphabet,
    alpha: AlphaDigits,
}

impl BetaFactorSet {
    pub fn new(base: BetaBase) -> Result<BetaFactorSet> {
        let q = base.digit_count()?;
        let alphabet = Alphabet::new(q)?;
        let alpha = AlphaDigits::new(base.clone(), q);
        Ok(BetaFactorSet {
            base,
            q,
            alphabet,
            alpha,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn digit_count(&self) -> u32 {
        self.q
    }

    pub fn base(&self) -> &BetaBase {
        &self.base
    }

    /// First `n` digits of the quasi-greedy expansion of 1.
    pub fn alpha_prefix(&mut self, n: usize) -> Result<Vec<u8>> {
        self.alpha.extend_to(n)?;
        Ok(self.alpha.digits[..n].to_vec())
    }

    /// Whether every suffix of `word` is lexicographically at most the
    /// expansion digits — the exact membership test for the language.
    pub fn is_admissible(&mut self, word: &[u8]) -> Result<bool> {
        let alpha = self.alpha_prefix(word.len())?;
        for start in 0..word.len() {
            let suffix = &word[start..];
            if !suffix_within(suffix, &alpha) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All admissible words of length `n`, lexicographically sorted.
    pub fn words(&mut self, n: usize, cap: u64) -> Result<Vec<FiniteWord>> {
        let alpha = self.alpha_prefix(n)?;
        let mut cursor = AdmissibleCursor::new(alpha, self.q as u8, n);
        let mut out = Vec::new();
        let mut word = Vec::new();
        while cursor.next(&mut word) {
            if out.len() as u64 >= cap {
                return Err(Error::Budget(format!("more than {cap} words of length {n}")));
            }
            out.push(FiniteWord::new(self.alphabet, word.clone())?);
        }
        Ok(out)
    }

    /// Number of admissible words of length `n`.
    pub fn count(&mut self, n: usize, cap: u64) -> Result<u64> {
        let alpha = self.alpha_prefix(n)?;
        let mut cursor = AdmissibleCursor::new(alpha, self.q as u8, n);
        let mut count = 0u64;
        let mut word = Vec::new();
        while cursor.next(&mut word) {
            count += 1;
            if count > cap {
                return Err(Error::Budget(format!("more than {cap} words of length {n}")));
            }
        }
        Ok(count)
    }

    /// The guaranteed minimum `ceil(beta^n)` of the length-`n` count.
    pub fn floor_guarantee(&self, n: u64) -> Result<BigUint> {
        self.base.pow_ceil(n)
    }
}

/// `suffix <= alpha` in lexicographic order (prefix equality counts as
/// within, since the expansion continues past the compared prefix).
fn suffix_within(suffix: &[u8], alpha: &[u8]) -> bool {
    for (s, a) in suffix.iter().zip(alpha.iter()) {
        match s.cmp(a) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    true
}

/// Lexicographic cursor over admissible words of a fixed length.
///
/// Tracks, per position, the set of suffix lengths currently equal to a
/// prefix of `alpha`; the next letter is bounded by the minimum of
/// `alpha` over those positions, so candidates form an initial segment
/// of the alphabet and the odometer never scans dead letters.
struct AdmissibleCursor {
    alpha: Vec<u8>,
    q: u8,
    len: usize,
    word: Vec<u8>,
    /// `tights[j]` = suffix lengths equal to an `alpha` prefix after the
    /// first `j + 1` letters.
    tights: Vec<Vec<u32>>,
    primed: bool,
    done: bool,
}

impl AdmissibleCursor {
    fn new(alpha: Vec<u8>, q: u8, len: usize) -> AdmissibleCursor {
        AdmissibleCursor {
            alpha,
            q,
            len,
            word: Vec::new(),
            tights: Vec::new(),
            primed: false,
            done: false,
        }
    }

    fn max_allowed(&self, pos: usize) -> u8 {
        let mut bound = self.alpha[0];
        if pos > 0 {
            for &k in &self.tights[pos - 1] {
                bound = bound.min(self.alpha[k as usize]);
            }
        }
        bound.min(self.q - 1)
    }

    fn tights_after(&self, pos: usize, c: u8) -> Vec<u32> {
        let mut out = Vec::new();
        if c == self.alpha[0] {
            out.push(1);
        }
        if pos > 0 {
            for &k in &self.tights[pos - 1] {
                if self.alpha[k as usize] == c {
                    out.push(k + 1);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Fills positions `from..len` with the smallest admissible letters
    /// (always 0, which every admissible language allows).
    fn descend(&mut self, from: usize) {
        for pos in from..self.len {
            let t = self.tights_after(pos, 0);
            self.word.push(0);
            self.tights.push(t);
        }
    }

    fn next(&mut self, out: &mut Vec<u8>) -> bool {
        if self.done || self.len == 0 {
            // The empty word is not enumerated; a zero-length request
            // yields nothing.
            self.done = true;
            return false;
        }
        if !self.primed {
            self.primed = true;
            self.descend(0);
            out.clear();
            out.extend_from_slice(&self.word);
            return true;
        }
        while let Some(c) = self.word.pop() {
            self.tights.pop();
            let pos = self.word.len();
            if c < self.max_allowed(pos) {
                let t = self.tights_after(pos, c + 1);
                self.word.push(c + 1);
                self.tights.push(t);
                self.descend(pos + 1);
                out.clear();
                out.extend_from_slice(&self.word);
                return true;
            }
        }
        self.done = true;
        false
    }
}

/// The order-preserving padding of a word: a zero is inserted just
/// before the last nonzero letter (binary), or the last nonzero letter
/// is decremented and followed by `r` (larger alphabets). All-zero words
/// gain a trailing zero. The map is injective on words of a fixed
/// length, never creates a forbidden suffix, and increases the length by
/// exactly one.
pub fn pad_map(v: &FiniteWord, q: u32, r: u32) -> Result<FiniteWord> {
    let alphabet = v.alphabet();
    if u32::from(alphabet.size()) != q {
        return Err(Error::BadAlphabet(format!(
            "word is over {} letters, not {q}",
            alphabet.size()
        )));
    }
    if v.is_empty() {
        return Err(Error::Domain(String::from("cannot pad the empty word")));
    }
    if q == 2 {
        if r != 1 {
            return Err(Error::Domain(String::from(
                "the binary padding map is unique; r must be 1",
            )));
        }
    } else if r == 0 || r > q - 2 {
        return Err(Error::Domain(format!(
            "padding letter must satisfy 1 <= r <= {}",
            q - 2
        )));
    }
    let a = v.letters();
    let n = a.len();
    let last_nonzero = a.iter().rposition(|&c| c != 0);
    let mut b = Vec::with_capacity(n + 1);
    match last_nonzero {
        None => b.extend(core::iter::repeat(0).take(n + 1)),
        Some(i) => {
            b.extend_from_slice(&a[..i]);
            if q == 2 {
                // ... a_{i-1} 0 a_i 0...0
                b.push(0);
                b.push(a[i]);
            } else {
                // ... a_{i-1} (a_i - 1) r 0...0
                b.push(a[i] - 1);
                b.push(r as u8);
            }
            b.extend(core::iter::repeat(0).take(n - 1 - i));
        }
    }
    FiniteWord::new(alphabet, b)
}

/// Construction data reported alongside an exponential-order word.
#[derive(Debug, Clone)]
pub struct ExpOrderMeta {
    /// Alphabet size `ceil(e^h)`.
    pub q: u32,
    /// Zero-filler length between padded blocks (binary alphabets only).
    pub filler: Option<u32>,
    /// The constant `C` with `p_w(n) <= C e^{hn}`: `2^{r+1}` for the
    /// binary construction, `(q+1)/(q-2)` otherwise.
    pub big_c: Rational,
}

/// An infinite word whose complexity has exponential order exactly `h`:
/// `e^{hn} <= p_w(n) <= C e^{hn}` with the explicit constant in the
/// returned metadata.
///
/// The word concatenates the padded admissible words of the base `e^h`,
/// length block by length block in lexicographic order. On a binary
/// alphabet consecutive padded words are separated by `0^r`, where `r`
/// is the smallest integer with `alpha > 1 0^{r-1} 1 0^infinity`; larger
/// alphabets need no filler. Padding keeps every block admissible while
/// the blocks exhaust all admissible words, which pins the complexity
/// between the count of admissible words and a bounded multiple of it.
pub fn exp_order_word(h: &LogParam) -> Result<(WordStream, ExpOrderMeta)> {
    let base = BetaBase::from_log_param(h)?;
    exp_order_word_for(base)
}

/// [`exp_order_word`] for an arbitrary exactly represented base.
pub fn exp_order_word_for(base: BetaBase) -> Result<(WordStream, ExpOrderMeta)> {
    let mut factors = BetaFactorSet::new(base)?;
    let q = factors.digit_count();
    let (filler, big_c) = if q == 2 {
        let r = binary_filler_length(&mut factors)?;
        let big_c = Rational::from_integer(BigInt::one() << (r as usize + 1));
        (Some(r), big_c)
    } else {
        let big_c = Rational::new(BigInt::from(q + 1), BigInt::from(q - 2));
        (None, big_c)
    };
    let meta = ExpOrderMeta {
        q,
        filler,
        big_c,
    };
    let alphabet = factors.alphabet();
    let alpha = factors.alpha_prefix(1)?;
    let source = ExpOrderSource {
        factors,
        alphabet,
        filler,
        block_len: 0,
        cursor: AdmissibleCursor::new(alpha, q as u8, 0),
        word: Vec::new(),
    };
    Ok((WordStream::new(Box::new(source)), meta))
}

/// Smallest `r >= 1` with `alpha > 1 0^{r-1} 1 0^infinity`, i.e. one
/// less than the position of the second nonzero expansion digit. The
/// expansion never ends in all zeros, so the scan terminates.
fn binary_filler_length(factors: &mut BetaFactorSet) -> Result<u32> {
    const SCAN: usize = 4096;
    let alpha = factors.alpha_prefix(SCAN)?;
    if alpha[0] != 1 {
        return Err(Error::Domain(String::from(
            "binary construction needs a base in (1, 2]",
        )));
    }
    for (j, &d) in alpha.iter().enumerate().skip(1) {
        if d >= 1 {
            return Ok(j as u32);
        }
    }
    Err(Error::Budget(String::from(
        "no second nonzero expansion digit within the scan window",
    )))
}

struct ExpOrderSource {
    factors: BetaFactorSet,
    alphabet: Alphabet,
    filler: Option<u32>,
    block_len: usize,
    cursor: AdmissibleCursor,
    word: Vec<u8>,
}

impl LetterSource for ExpOrderSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn fill(&mut self, buf: &mut Vec<u8>, target: usize) -> Result<()> {
        let q = self.factors.digit_count();
        while buf.len() < target {
            let mut word = core::mem::take(&mut self.word);
            let got = self.cursor.next(&mut word);
            self.word = word;
            if !got {
                self.block_len += 1;
                let alpha = self.factors.alpha_prefix(self.block_len)?;
                self.cursor = AdmissibleCursor::new(alpha, q as u8, self.block_len);
                continue;
            }
            let gamma = FiniteWord::new(self.alphabet, self.word.clone())?;
            let padded = pad_map(&gamma, q, 1)?;
            buf.extend_from_slice(padded.letters());
            if let Some(r) = self.filler {
                buf.extend(core::iter::repeat(0).take(r as usize));
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        match self.filler {
            Some(r) => format!(
                "exponential-order word over 2 letters (filler 0^{r}) for {}",
                self.factors.base().describe()
            ),
            None => format!(
                "exponential-order word over {} letters for {}",
                self.factors.digit_count(),
                self.factors.base().describe()
            ),
        }
    }
}
