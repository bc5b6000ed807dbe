//! The [`BoundSpec`] type: a candidate complexity bound in one of four
//! forms (expression, table, linear recurrence, named preset), with exact
//! evaluation where the value is rational and certified enclosures
//! otherwise.

use crate::bounds::ast::{parse_expr, ExprAst};
use crate::bounds::envelope::{self, EnvelopeCert};
use crate::certified::roots::integer_root_floor;
use crate::certified::series::{exp_rational, ln_rational};
use crate::certified::{adaptive, adaptive_ceil, pow_rational, Enclosure};
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parses a rational from `"p/q"`, an integer, or a decimal such as
/// `"0.3"` (decimals are converted exactly).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let n = num.trim().parse::<BigInt>().map_err(|_| bad())?;
        let d = den.trim().parse::<BigInt>().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Domain(String::from("zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let i = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse::<BigInt>().map_err(|_| bad())?
        };
        let digits = frac.parse::<BigInt>().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Rational::new(digits, scale);
        let int_part = Rational::from_integer(i);
        return Ok(if negative {
            int_part - frac_part
        } else {
            int_part + frac_part
        });
    }
    let n = text.parse::<BigInt>().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical text for a rational: `"p"` or `"p/q"` in lowest terms.
pub fn rational_to_text(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A positive real growth constant given exactly: either a rational `c`,
/// or `c = log t` for a rational `t > 1`.
///
/// The distinction matters for decidability: with `c = log t` the quantity
/// `e^{cn} = t^n` is an exact rational, so ceilings such as
/// `ceil(e^{cn})` are computed exactly even when `e^{cn}` is an integer.
/// With rational `c != 0`, `e^{cn}` is transcendental (Lindemann), so the
/// same ceilings are decidable by refining an enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LogParam {
    Rational(Rational),
    LnRational(Rational),
}

impl LogParam {
    /// Parses `"log(R)"` or a plain rational/decimal.
    pub fn parse(text: &str) -> Result<LogParam> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("log(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unclosed log in {text:?}")))?;
            return Ok(LogParam::LnRational(parse_rational(inner)?));
        }
        Ok(LogParam::Rational(parse_rational(text)?))
    }

    /// True when the constant is strictly positive.
    pub fn is_positive(&self) -> bool {
        match self {
            LogParam::Rational(c) => c.is_positive(),
            LogParam::LnRational(t) => t > &Rational::one(),
        }
    }

    /// Certified enclosure of the constant.
    pub fn enclosure(&self, prec: u32) -> Result<Enclosure> {
        match self {
            LogParam::Rational(c) => Ok(Enclosure::point(c.clone())),
            LogParam::LnRational(t) => ln_rational(t, prec),
        }
    }

    /// `e^{cn}` as an exact rational, when it is one.
    pub fn exp_n_exact(&self, n: u64) -> Option<Rational> {
        match self {
            LogParam::LnRational(t) => Some(pow_rational(t, n)),
            LogParam::Rational(_) if n == 0 => Some(Rational::one()),
            LogParam::Rational(_) => None,
        }
    }

    /// Certified enclosure of `e^{cn}`.
    pub fn exp_n_enclosure(&self, n: u64, prec: u32) -> Result<Enclosure> {
        if let Some(x) = self.exp_n_exact(n) {
            return Ok(Enclosure::point(x));
        }
        match self {
            LogParam::Rational(c) => {
                let arg = c * Rational::from_integer(n.into());
                exp_rational(&arg, prec)
            }
            LogParam::LnRational(_) => unreachable!("exact above"),
        }
    }

    /// `c * n` when the constant itself is rational.
    pub fn times_n_exact(&self, n: u64) -> Option<Rational> {
        match self {
            LogParam::Rational(c) => Some(c * Rational::from_integer(n.into())),
            LogParam::LnRational(_) => None,
        }
    }

    /// Certified three-way comparison against `log t2`. Decidable because
    /// a nonzero rational is never the log of a rational.
    pub fn cmp_ln_rational(&self, t2: &Rational) -> Result<Ordering> {
        match self {
            LogParam::LnRational(t) => Ok(t.cmp(t2)),
            LogParam::Rational(c) => adaptive(
                |prec| {
                    let other = ln_rational(t2, prec)?;
                    Ok(other.cmp_rational(c).map(Ordering::reverse))
                },
                "compare growth constant to log",
            ),
        }
    }
}

impl fmt::Display for LogParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogParam::Rational(c) => write!(f, "{}", rational_to_text(c)),
            LogParam::LnRational(t) => write!(f, "log({})", rational_to_text(t)),
        }
    }
}

/// What a table-form bound does past its last entry.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TailRule {
    /// Hold the last value forever.
    Hold,
    /// Multiply by a fixed rational ratio per step past the end.
    Grow(Rational),
}

/// Named bounds with exactly known constants.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Preset {
    /// `f(n) = ceil(3^{n/2})`; growth constant `sqrt 3`.
    Golden,
    /// `f(0)=1, f(1)=2, f(2)=4, f(n)=f(n-1)+3f(n-3)`; growth constant the
    /// real root of `x^3 - x^2 - 3`.
    Cassaigne,
    /// `f(0)=1`, `f(n)=n+q-1` for `1 <= n <= n0`, `f(n)=theta^n` beyond.
    ThetaStaircase { q: u32, theta: Rational, n0: u32 },
    /// `f(n) = max(n+1, e^{cn})` over a binary alphabet, `0 < c <= log 2`.
    Prop6Envelope { c: LogParam },
    /// `f(n) = max(n+1, C e^{hn})` over the alphabet of size `ceil(e^h)`.
    ExpOrder { h: LogParam, big_c: Rational },
}

/// The structural form of a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BoundForm {
    Expr(ExprAst),
    Table { values: Vec<Rational>, tail: TailRule },
    Recurrence { weights: Vec<BigUint>, init: Vec<BigUint> },
    Preset(Preset),
}

/// How an analytically known growth constant `E_0` is defined.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum E0Kind {
    /// `E_0 = log(base) / root`.
    LnRationalRoot { base: Rational, root: u32 },
    /// `E_0` is the rational value itself.
    ExactValue(Rational),
    /// `E_0 = log lambda` for the dominant root `lambda` of the
    /// recurrence with these coefficients.
    LnRecurrenceRoot { weights: Vec<BigUint> },
}

/// A candidate complexity bound plus its alphabet size.
///
/// The alphabet defaults to `floor(f(1))` (the number of letters a word
/// obeying the bound can actually use); the exponential-order preset
/// instead uses `ceil(e^h)`, the alphabet of the word the bound is
/// modelled on. Override with [`BoundSpec::with_alphabet`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundSpec {
    form: BoundForm,
    q: u32,
}

impl BoundSpec {
    pub fn golden() -> BoundSpec {
        BoundSpec { form: BoundForm::Preset(Preset::Golden), q: 2 }
    }

    pub fn cassaigne() -> BoundSpec {
        BoundSpec { form: BoundForm::Preset(Preset::Cassaigne), q: 2 }
    }

    pub fn theta_staircase(q: u32, theta: Rational, n0: u32) -> Result<BoundSpec> {
        if q < 2 {
            return Err(Error::Domain(String::from("staircase needs q >= 2")));
        }
        if n0 < 1 {
            return Err(Error::Domain(String::from("staircase needs n0 >= 1")));
        }
        if theta <= Rational::one() {
            return Err(Error::Domain(String::from("staircase needs theta > 1")));
        }
        Ok(BoundSpec {
            form: BoundForm::Preset(Preset::ThetaStaircase { q, theta, n0 }),
            q,
        })
    }

    /// `f(n) = max(n+1, e^{cn})` with `0 < c <= log 2`.
    pub fn prop6_envelope(c: LogParam) -> Result<BoundSpec> {
        if !c.is_positive() {
            return Err(Error::Domain(String::from("need c > 0")));
        }
        if c.cmp_ln_rational(&Rational::from_integer(2.into()))? == Ordering::Greater {
            return Err(Error::Domain(String::from("need c <= log 2")));
        }
        Ok(BoundSpec { form: BoundForm::Preset(Preset::Prop6Envelope { c }), q: 2 })
    }

    /// `f(n) = max(n+1, C e^{hn})` with `h > 0`, `C >= 1`; alphabet
    /// `ceil(e^h)`.
    pub fn exp_order(h: LogParam, big_c: Rational) -> Result<BoundSpec> {
        if !h.is_positive() {
            return Err(Error::Domain(String::from("need h > 0")));
        }
        if big_c < Rational::one() {
            return Err(Error::Domain(String::from("need C >= 1")));
        }
        let q = exp_ceil(&h)?;
        Ok(BoundSpec {
            form: BoundForm::Preset(Preset::ExpOrder { h, big_c }),
            q,
        })
    }

    /// `f(n) = sum_i weights[i] * f(n-1-i)` with initial segment `init`
    /// (`init[k] = f(k)`).
    pub fn recurrence(weights: Vec<BigUint>, init: Vec<BigUint>) -> Result<BoundSpec> {
        let d = weights.len();
        if d == 0 || init.len() != d {
            return Err(Error::Domain(String::from(
                "recurrence needs order >= 1 and exactly d initial values",
            )));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::Domain(String::from("all-zero recurrence")));
        }
        if weights[d - 1].is_zero() {
            return Err(Error::Domain(String::from(
                "last recurrence coefficient must be nonzero (true order)",
            )));
        }
        if init.iter().any(|v| v.is_zero()) {
            return Err(Error::Domain(String::from("initial values must be >= 1")));
        }
        let form = BoundForm::Recurrence { weights, init };
        let q = default_alphabet(&form)?;
        Ok(BoundSpec { form, q })
    }

    pub fn table(values: Vec<Rational>, tail: TailRule) -> Result<BoundSpec> {
        if values.len() < 2 {
            return Err(Error::Domain(String::from("table needs f(0) and f(1)")));
        }
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Domain(String::from("table values must be positive")));
        }
        if let TailRule::Grow(r) = &tail {
            if !r.is_positive() {
                return Err(Error::Domain(String::from("tail ratio must be positive")));
            }
        }
        let form = BoundForm::Table { values, tail };
        let q = default_alphabet(&form)?;
        Ok(BoundSpec { form, q })
    }

    pub fn expr(ast: ExprAst) -> Result<BoundSpec> {
        let form = BoundForm::Expr(ast);
        let q = default_alphabet(&form)?;
        Ok(BoundSpec { form, q })
    }

    pub fn with_alphabet(mut self, q: u32) -> Result<BoundSpec> {
        if q < 2 {
            return Err(Error::BadAlphabet(format!("alphabet size {q} < 2")));
        }
        self.q = q;
        Ok(self)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn form(&self) -> &BoundForm {
        &self.form
    }

    /// Exact rational value of `f(n)`, when provably rational.
    pub fn eval_exact(&self, n: u64) -> Result<Option<Rational>> {
        match &self.form {
            BoundForm::Expr(ast) => eval_ast_exact(ast, n),
            BoundForm::Table { values, tail } => {
                Ok(Some(table_value(values, tail, n)))
            }
            BoundForm::Recurrence { weights, init } => Ok(Some(
                Rational::from_integer(recurrence_value(weights, init, n).into()),
            )),
            BoundForm::Preset(p) => preset_exact(p, n),
        }
    }

    /// Certified enclosure of `f(n)` at a working precision; `None` asks
    /// the caller to retry with a higher precision (used by the adaptive
    /// drivers, never surfaced to end users).
    pub fn eval_enclosure(&self, n: u64, prec: u32) -> Result<Option<Enclosure>> {
        if let Some(x) = self.eval_exact(n)? {
            return Ok(Some(Enclosure::point(x)));
        }
        match &self.form {
            BoundForm::Expr(ast) => eval_ast_enclosure(ast, n, prec),
            BoundForm::Preset(p) => preset_enclosure(p, n, prec).map(Some),
            // Tables and recurrences are always exact.
            _ => unreachable!("exact forms handled above"),
        }
    }

    /// `log f(n)` as an exact rational, when provably one. Drives exact
    /// comparisons between values that are themselves transcendental
    /// (e.g. `e^{cn}` against `e^{cm}`).
    pub fn ln_exact(&self, n: u64) -> Result<Option<Rational>> {
        match &self.form {
            BoundForm::Preset(Preset::Prop6Envelope { c: LogParam::Rational(c) }) => {
                if n == 0 {
                    return Ok(Some(Rational::zero()));
                }
                // In the exponential regime log f(n) = c*n exactly.
                if exp_dominates(&LogParam::Rational(c.clone()), &Rational::one(), n)? {
                    Ok(Some(c * Rational::from_integer(n.into())))
                } else {
                    Ok(None)
                }
            }
            BoundForm::Preset(Preset::ExpOrder {
                h: LogParam::Rational(h),
                big_c,
            }) if big_c.is_one() => {
                if n == 0 {
                    return Ok(Some(Rational::zero()));
                }
                if exp_dominates(&LogParam::Rational(h.clone()), big_c, n)? {
                    Ok(Some(h * Rational::from_integer(n.into())))
                } else {
                    Ok(None)
                }
            }
            BoundForm::Expr(ExprAst::Exp(arg)) => eval_ast_exact(arg, n),
            _ => Ok(None),
        }
    }

    /// Exact representation `f(n) = k * e^t` with rational `k > 0` and
    /// `t`, when provably available: exact values give `t = 0`, the
    /// max-envelope presets give `(C, c n)` in their exponential
    /// regimes. Sums of such terms with *distinct* exponents are
    /// nonzero unless empty (exponentials of distinct algebraic numbers
    /// are linearly independent over the rationals), which makes every
    /// comparison between products and differences of such values
    /// decidable by enclosure refinement.
    pub(crate) fn kexp_value(&self, n: u64) -> Result<Option<(Rational, Rational)>> {
        if let Some(v) = self.eval_exact(n)? {
            return Ok(Some((v, Rational::zero())));
        }
        match &self.form {
            BoundForm::Preset(Preset::Prop6Envelope { c: LogParam::Rational(c) }) => {
                if n >= 1
                    && exp_dominates(&LogParam::Rational(c.clone()), &Rational::one(), n)?
                {
                    let t = c * Rational::from_integer(n.into());
                    return Ok(Some((Rational::one(), t)));
                }
                Ok(None)
            }
            BoundForm::Preset(Preset::ExpOrder { h: LogParam::Rational(h), big_c }) => {
                if n >= 1 && exp_dominates(&LogParam::Rational(h.clone()), big_c, n)? {
                    let t = h * Rational::from_integer(n.into());
                    return Ok(Some((big_c.clone(), t)));
                }
                Ok(None)
            }
            BoundForm::Expr(ExprAst::Exp(arg)) => {
                Ok(eval_ast_exact(arg, n)?.map(|t| (Rational::one(), t)))
            }
            _ => Ok(None),
        }
    }

    /// `floor(f(n))` as a nonnegative big integer.
    pub fn floor_at(&self, n: u64) -> Result<BigUint> {
        if let Some(x) = self.eval_exact(n)? {
            return rational_floor_nonneg(&x);
        }
        let v = adaptive(
            |prec| {
                let e = match self.eval_enclosure(n, prec)? {
                    Some(e) => e,
                    None => return Ok(None),
                };
                let fl = e.lo().floor().to_integer();
                let fh = e.hi().floor().to_integer();
                Ok((fl == fh).then_some(fl))
            },
            "floor of bound value",
        )?;
        biguint_of(&v)
    }

    /// `min(floor(f(n)), cap)` without resolving astronomically large
    /// values: once the enclosure is entirely above the cap, the cap is
    /// returned directly.
    pub fn floor_clamped(&self, n: u64, cap: u64) -> Result<u64> {
        let cap_r = Rational::from_integer(cap.into());
        if let Some(x) = self.eval_exact(n)? {
            if x >= cap_r {
                return Ok(cap);
            }
            let f = rational_floor_nonneg(&x)?;
            return Ok(f.to_u64().expect("below cap"));
        }
        adaptive(
            |prec| {
                let e = match self.eval_enclosure(n, prec)? {
                    Some(e) => e,
                    None => return Ok(None),
                };
                if e.lo() >= &cap_r {
                    return Ok(Some(cap));
                }
                let fl = e.lo().floor().to_integer();
                let fh = e.hi().floor().to_integer();
                if fl != fh {
                    return Ok(None);
                }
                if fl.is_negative() {
                    return Err(Error::Domain(String::from("negative bound value")));
                }
                Ok(Some(fl.to_u64().map_or(cap, |v| v.min(cap))))
            },
            "clamped floor of bound value",
        )
    }

    /// `floor(f(n))` for `n in 0..=n_max`; linear time for recurrences.
    pub fn floor_table(&self, n_max: u64) -> Result<Vec<BigUint>> {
        match &self.form {
            BoundForm::Recurrence { weights, init } => {
                Ok(recurrence_values(weights, init, n_max))
            }
            BoundForm::Preset(Preset::Cassaigne) => {
                let (w, i) = cassaigne_coefficients();
                Ok(recurrence_values(&w, &i, n_max))
            }
            _ => (0..=n_max).map(|n| self.floor_at(n)).collect(),
        }
    }

    /// Clamped floor table for slice enumeration.
    pub fn floor_table_clamped(&self, n_max: u64, cap: u64) -> Result<Vec<u64>> {
        match &self.form {
            BoundForm::Recurrence { .. } | BoundForm::Preset(Preset::Cassaigne) => {
                let cap_b = BigUint::from(cap);
                Ok(self
                    .floor_table(n_max)?
                    .into_iter()
                    .map(|v| if v >= cap_b { cap } else { v.to_u64().unwrap() })
                    .collect())
            }
            _ => (0..=n_max).map(|n| self.floor_clamped(n, cap)).collect(),
        }
    }

    /// A certified pointwise envelope `f(n) >= c * rate^n` for all `n`,
    /// when one can be established (structurally for closed forms and
    /// presets, by dominant-root induction for recurrences).
    pub fn envelope_cert(&self) -> Result<Option<EnvelopeCert>> {
        envelope::cert_for(self)
    }

    /// The analytically known growth constant `E_0(f)`, for forms that
    /// carry one. `certified` is true when both one-sided envelopes are
    /// established (all current kinds).
    pub fn analytic_e0(&self) -> Option<E0Kind> {
        match &self.form {
            BoundForm::Preset(Preset::Golden) => Some(E0Kind::LnRationalRoot {
                base: Rational::from_integer(3.into()),
                root: 2,
            }),
            BoundForm::Preset(Preset::Cassaigne) => {
                let (w, _) = cassaigne_coefficients();
                Some(E0Kind::LnRecurrenceRoot { weights: w })
            }
            BoundForm::Preset(Preset::ThetaStaircase { theta, .. }) => {
                Some(E0Kind::LnRationalRoot { base: theta.clone(), root: 1 })
            }
            BoundForm::Preset(Preset::Prop6Envelope { c })
            | BoundForm::Preset(Preset::ExpOrder { h: c, .. }) => match c {
                LogParam::Rational(c) => Some(E0Kind::ExactValue(c.clone())),
                LogParam::LnRational(t) => {
                    Some(E0Kind::LnRationalRoot { base: t.clone(), root: 1 })
                }
            },
            BoundForm::Recurrence { weights, .. } => {
                Some(E0Kind::LnRecurrenceRoot { weights: weights.clone() })
            }
            BoundForm::Table { tail, .. } => match tail {
                TailRule::Hold => Some(E0Kind::ExactValue(Rational::zero())),
                TailRule::Grow(r) if r >= &Rational::one() => {
                    Some(E0Kind::LnRationalRoot { base: r.clone(), root: 1 })
                }
                TailRule::Grow(_) => None,
            },
            BoundForm::Expr(_) => None,
        }
    }

    /// True when submultiplicativity (`f(m+n) <= f(m) f(n)`) holds for
    /// all pairs by construction, not just to a scanned horizon. The two
    /// counterexample presets carry documented proofs: the golden bound
    /// because `ceil(x)ceil(y) >= ceil(xy)`, the Cassaigne bound by the
    /// doubling induction on its recurrence.
    pub fn submultiplicative_declared(&self) -> bool {
        matches!(
            &self.form,
            BoundForm::Preset(Preset::Golden) | BoundForm::Preset(Preset::Cassaigne)
        )
    }

    /// Canonical, re-parseable description.
    pub fn describe(&self) -> String {
        match &self.form {
            BoundForm::Expr(ast) => ast.to_string(),
            BoundForm::Table { values, tail } => {
                let vals: Vec<String> = values.iter().map(rational_to_text).collect();
                let tail = match tail {
                    TailRule::Hold => String::from("hold"),
                    TailRule::Grow(r) => format!("grow={}", rational_to_text(r)),
                };
                format!("table({};{})", vals.join(","), tail)
            }
            BoundForm::Recurrence { weights, init } => {
                let ws: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                let is: Vec<String> = init.iter().map(|v| v.to_string()).collect();
                format!("rec({};{})", ws.join(","), is.join(","))
            }
            BoundForm::Preset(Preset::Golden) => String::from("preset:golden"),
            BoundForm::Preset(Preset::Cassaigne) => String::from("preset:cassaigne"),
            BoundForm::Preset(Preset::ThetaStaircase { q, theta, n0 }) => format!(
                "preset:theta-staircase(q={q},theta={},n0={n0})",
                rational_to_text(theta)
            ),
            BoundForm::Preset(Preset::Prop6Envelope { c }) => {
                format!("preset:prop6-envelope(c={c})")
            }
            BoundForm::Preset(Preset::ExpOrder { h, big_c }) => format!(
                "preset:exp-order(h={h},C={})",
                rational_to_text(big_c)
            ),
        }
    }
}

/// Parses the bound grammar: `preset:NAME`,
/// `preset:theta-staircase(q=..,theta=..,n0=..)`,
/// `preset:prop6-envelope(c=..)`, `preset:exp-order(h=..,C=..)`,
/// `rec(w1,..,wd;f0,..,f_{d-1})`, `table(v0,v1,..;hold|grow=R)`, or an
/// expression in the bound DSL (see [`crate::bounds::ast`]).
pub fn parse_bound(text: &str) -> Result<BoundSpec> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("preset:") {
        return parse_preset(rest);
    }
    if let Some(rest) = text.strip_prefix("rec(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(String::from("unclosed rec(")))?;
        let (ws, is) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(String::from("rec needs weights;init")))?;
        let weights = parse_uint_list(ws)?;
        let init = parse_uint_list(is)?;
        return BoundSpec::recurrence(weights, init);
    }
    if let Some(rest) = text.strip_prefix("table(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(String::from("unclosed table(")))?;
        let (vals, tail) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(String::from("table needs values;tail")))?;
        let values = vals
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        let tail = match tail.trim() {
            "hold" => TailRule::Hold,
            other => match other.strip_prefix("grow=") {
                Some(r) => TailRule::Grow(parse_rational(r)?),
                None => {
                    return Err(Error::Parse(format!("unknown tail rule {other:?}")))
                }
            },
        };
        return BoundSpec::table(values, tail);
    }
    BoundSpec::expr(parse_expr(text)?)
}

fn parse_preset(rest: &str) -> Result<BoundSpec> {
    match rest {
        "golden" => return Ok(BoundSpec::golden()),
        "cassaigne" => return Ok(BoundSpec::cassaigne()),
        _ => {}
    }
    let (name, args) = rest
        .split_once('(')
        .ok_or_else(|| Error::Parse(format!("unknown preset {rest:?}")))?;
    let args = args
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unclosed preset args in {rest:?}")))?;
    let mut map: Vec<(&str, &str)> = Vec::new();
    for part in args.split(',') {
        // log(3/2) contains no comma, so a flat split is safe here.
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        map.push((k.trim(), v.trim()));
    }
    let get = |key: &str| -> Result<&str> {
        map.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Parse(format!("preset {name} missing {key}=")))
    };
    match name {
        "theta-staircase" => {
            let q: u32 = get("q")?
                .parse()
                .map_err(|_| Error::Parse(String::from("bad q")))?;
            let theta = parse_rational(get("theta")?)?;
            let n0: u32 = get("n0")?
                .parse()
                .map_err(|_| Error::Parse(String::from("bad n0")))?;
            BoundSpec::theta_staircase(q, theta, n0)
        }
        "prop6-envelope" => BoundSpec::prop6_envelope(LogParam::parse(get("c")?)?),
        "exp-order" => BoundSpec::exp_order(
            LogParam::parse(get("h")?)?,
            parse_rational(get("C")?)?,
        ),
        other => Err(Error::Parse(format!("unknown preset {other:?}"))),
    }
}

fn parse_uint_list(text: &str) -> Result<Vec<BigUint>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        })
        .collect()
}

// ---------------------------------------------------------------------
// Form-specific evaluation.

pub(crate) fn cassaigne_coefficients() -> (Vec<BigUint>, Vec<BigUint>) {
    (
        [1u32, 0, 3].map(BigUint::from).to_vec(),
        [1u32, 2, 4].map(BigUint::from).to_vec(),
    )
}

fn table_value(values: &[Rational], tail: &TailRule, n: u64) -> Rational {
    if let Some(v) = values.get(n as usize) {
        return v.clone();
    }
    let last = values.last().expect("validated non-empty").clone();
    match tail {
        TailRule::Hold => last,
        TailRule::Grow(r) => last * pow_rational(r, n - (values.len() as u64 - 1)),
    }
}

fn recurrence_value(weights: &[BigUint], init: &[BigUint], n: u64) -> BigUint {
    recurrence_values(weights, init, n).pop().expect("n+1 values")
}

fn recurrence_values(weights: &[BigUint], init: &[BigUint], n_max: u64) -> Vec<BigUint> {
    let mut vals: Vec<BigUint> = init.to_vec();
    vals.truncate((n_max + 1) as usize);
    for n in vals.len()..=(n_max as usize) {
        let mut acc = BigUint::zero();
        for (i, w) in weights.iter().enumerate() {
            if !w.is_zero() {
                acc += w * &vals[n - 1 - i];
            }
        }
        vals.push(acc);
    }
    vals
}

/// `ceil(3^{n/2})` exactly: a power of three for even `n`, and
/// `isqrt(3^n) + 1` for odd `n` (3^odd is never a perfect square).
fn golden_value(n: u64) -> BigUint {
    if n % 2 == 0 {
        num_traits::pow(BigUint::from(3u32), (n / 2) as usize)
    } else {
        let p = num_traits::pow(BigUint::from(3u32), n as usize);
        integer_root_floor(&p, 2) + 1u32
    }
}

fn staircase_value(q: u32, theta: &Rational, n0: u32, n: u64) -> Rational {
    if n == 0 {
        Rational::one()
    } else if n <= n0 as u64 {
        Rational::from_integer((n + q as u64 - 1).into())
    } else {
        pow_rational(theta, n)
    }
}

/// Decides whether `C e^{cn} >= n+1` (exponential part of a max-envelope
/// bound dominates). Requires `n >= 1` or `C` rational; ties can only
/// occur in exact arithmetic and are counted as domination.
fn exp_dominates(c: &LogParam, big_c: &Rational, n: u64) -> Result<bool> {
    let lin = Rational::from_integer((n + 1).into());
    if let Some(e) = c.exp_n_exact(n) {
        return Ok(big_c * e >= lin);
    }
    // C e^{cn} is transcendental here (rational c != 0, n >= 1), so the
    // comparison against the integer n+1 is decidable.
    adaptive(
        |prec| {
            let e = c.exp_n_enclosure(n, prec)?.scale(big_c);
            Ok(e.cmp_rational(&lin).map(|o| o != Ordering::Less))
        },
        "compare exponential part to n+1",
    )
}

fn preset_exact(p: &Preset, n: u64) -> Result<Option<Rational>> {
    match p {
        Preset::Golden => Ok(Some(Rational::from_integer(golden_value(n).into()))),
        Preset::Cassaigne => {
            let (w, i) = cassaigne_coefficients();
            Ok(Some(Rational::from_integer(recurrence_value(&w, &i, n).into())))
        }
        Preset::ThetaStaircase { q, theta, n0 } => {
            Ok(Some(staircase_value(*q, theta, *n0, n)))
        }
        Preset::Prop6Envelope { c } => max_envelope_exact(c, &Rational::one(), n),
        Preset::ExpOrder { h, big_c } => max_envelope_exact(h, big_c, n),
    }
}

fn max_envelope_exact(
    c: &LogParam,
    big_c: &Rational,
    n: u64,
) -> Result<Option<Rational>> {
    let lin = Rational::from_integer((n + 1).into());
    if let Some(e) = c.exp_n_exact(n) {
        return Ok(Some(lin.max(big_c * e)));
    }
    // Exponential side irrational: the max is exact only when the linear
    // side wins.
    if exp_dominates(c, big_c, n)? {
        Ok(None)
    } else {
        Ok(Some(lin))
    }
}

fn preset_enclosure(p: &Preset, n: u64, prec: u32) -> Result<Enclosure> {
    match p {
        Preset::Prop6Envelope { c } => {
            let lin = Enclosure::point(Rational::from_integer((n + 1).into()));
            Ok(lin.max(&c.exp_n_enclosure(n, prec)?))
        }
        Preset::ExpOrder { h, big_c } => {
            let lin = Enclosure::point(Rational::from_integer((n + 1).into()));
            Ok(lin.max(&h.exp_n_enclosure(n, prec)?.scale(big_c)))
        }
        _ => unreachable!("other presets are exact"),
    }
}

/// `ceil(e^h)` for a growth constant.
fn exp_ceil(h: &LogParam) -> Result<u32> {
    let v = match h {
        LogParam::LnRational(t) => t.ceil().to_integer(),
        LogParam::Rational(c) => adaptive_ceil(
            |prec| exp_rational(c, prec),
            "alphabet size ceil(e^h)",
        )?,
    };
    v.to_u32()
        .ok_or_else(|| Error::BadAlphabet(format!("alphabet size {v} out of range")))
}

fn default_alphabet(form: &BoundForm) -> Result<u32> {
    let spec = BoundSpec { form: form.clone(), q: 2 };
    let f1 = spec.floor_at(1)?;
    let q = f1
        .to_u32()
        .ok_or_else(|| Error::BadAlphabet(format!("floor(f(1)) = {f1} out of range")))?;
    if q < 2 {
        return Err(Error::BadAlphabet(format!(
            "floor(f(1)) = {q} < 2: no binary word can obey this bound"
        )));
    }
    Ok(q)
}

fn rational_floor_nonneg(x: &Rational) -> Result<BigUint> {
    let f = x.floor().to_integer();
    if f.is_negative() {
        return Err(Error::Domain(format!("negative bound value {x}")));
    }
    Ok(f.magnitude().clone())
}

fn biguint_of(v: &BigInt) -> Result<BigUint> {
    if v.is_negative() {
        return Err(Error::Domain(format!("negative bound value {v}")));
    }
    Ok(v.magnitude().clone())
}

// ---------------------------------------------------------------------
// Expression evaluation: exact pre-pass, then interval arithmetic.

/// Crate-internal access to the exact expression evaluator (used by the
/// envelope extractor for variable-free subtrees).
pub(crate) fn eval_ast_exact_at(ast: &ExprAst, n: u64) -> Result<Option<Rational>> {
    eval_ast_exact(ast, n)
}

const MAX_INT_EXPONENT: u64 = 1 << 20;

fn eval_ast_exact(ast: &ExprAst, n: u64) -> Result<Option<Rational>> {
    let value = |v: &ExprAst| eval_ast_exact(v, n);
    Ok(match ast {
        ExprAst::Int(v) => Some(Rational::from_integer(v.clone())),
        ExprAst::Var => Some(Rational::from_integer(n.into())),
        ExprAst::Add(a, b) => binop(value(a)?, value(b)?, |a, b| a + b),
        ExprAst::Sub(a, b) => binop(value(a)?, value(b)?, |a, b| a - b),
        ExprAst::Mul(a, b) => binop(value(a)?, value(b)?, |a, b| a * b),
        ExprAst::Div(a, b) => match (value(a)?, value(b)?) {
            (Some(a), Some(b)) => {
                if b.is_zero() {
                    return Err(Error::Domain(String::from("division by zero")));
                }
                Some(a / b)
            }
            _ => None,
        },
        ExprAst::Neg(a) => value(a)?.map(|a| -a),
        ExprAst::Pow(a, b) => match (value(a)?, value(b)?) {
            (Some(base), Some(exp)) => exact_pow(&base, &exp)?,
            _ => None,
        },
        ExprAst::Ceil(a) => value(a)?.map(|a| a.ceil()),
        ExprAst::Floor(a) => value(a)?.map(|a| a.floor()),
        ExprAst::Exp(a) => match value(a)? {
            Some(a) if a.is_zero() => Some(Rational::one()),
            _ => None,
        },
        ExprAst::Log(a) => match value(a)? {
            Some(a) if a.is_one() => Some(Rational::zero()),
            Some(a) if !a.is_positive() => {
                return Err(Error::Domain(String::from("log of non-positive value")))
            }
            _ => None,
        },
        ExprAst::Max(a, b) => binop(value(a)?, value(b)?, Rational::max),
        ExprAst::Min(a, b) => binop(value(a)?, value(b)?, Rational::min),
    })
}

fn binop(
    a: Option<Rational>,
    b: Option<Rational>,
    f: impl Fn(Rational, Rational) -> Rational,
) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(f(a, b)),
        _ => None,
    }
}

/// Exact `base^exp` for rational `exp`: integer exponents always work;
/// fractional exponents only when the base is a perfect power.
fn exact_pow(base: &Rational, exp: &Rational) -> Result<Option<Rational>> {
    let p = exp.numer();
    let r = exp.denom(); // > 0 after normalization
    if p.magnitude().bits() > 40 {
        return Err(Error::Budget(format!("exponent {exp} too large")));
    }
    let p_abs = p.magnitude().to_u64().expect("checked bits");
    if p_abs > MAX_INT_EXPONENT {
        return Err(Error::Budget(format!("exponent {exp} too large")));
    }
    let rooted = if r.is_one() {
        Some(base.clone())
    } else {
        let r = r.to_u32().ok_or_else(|| {
            Error::Budget(format!("root degree {r} too large"))
        })?;
        if base.is_negative() {
            return Err(Error::Domain(String::from(
                "fractional power of negative base",
            )));
        }
        exact_root(base, r)
    };
    let Some(rooted) = rooted else { return Ok(None) };
    if p.sign() == Sign::Minus && rooted.is_zero() {
        return Err(Error::Domain(String::from("zero to a negative power")));
    }
    let mag = pow_rational(&rooted, p_abs);
    Ok(Some(if p.sign() == Sign::Minus {
        mag.recip()
    } else {
        mag
    }))
}

/// Exact `x^{1/r}` for nonnegative rational `x`, when it is rational.
fn exact_root(x: &Rational, r: u32) -> Option<Rational> {
    let nr = integer_root_floor(x.numer().magnitude(), r);
    let dr = integer_root_floor(x.denom().magnitude(), r);
    let pow = |v: &BigUint| num_traits::pow(v.clone(), r as usize);
    if &pow(&nr) == x.numer().magnitude() && &pow(&dr) == x.denom().magnitude() {
        Some(Rational::new(nr.into(), dr.into()))
    } else {
        None
    }
}

/// Interval power with integer exponent (handles sign-straddling bases
/// correctly through interval multiplication).
fn int_pow_enclosure(e: &Enclosure, k: u64) -> Enclosure {
    let mut acc = Enclosure::point(Rational::one());
    let mut base = e.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        k >>= 1;
    }
    acc
}

fn eval_ast_enclosure(ast: &ExprAst, n: u64, prec: u32) -> Result<Option<Enclosure>> {
    if let Some(x) = eval_ast_exact(ast, n)? {
        return Ok(Some(Enclosure::point(x)));
    }
    let value = |v: &ExprAst| eval_ast_enclosure(v, n, prec);
    macro_rules! both {
        ($a:expr, $b:expr) => {
            match (value($a)?, value($b)?) {
                (Some(a), Some(b)) => (a, b),
                _ => return Ok(None),
            }
        };
    }
    macro_rules! one {
        ($a:expr) => {
            match value($a)? {
                Some(a) => a,
                None => return Ok(None),
            }
        };
    }
    Ok(match ast {
        ExprAst::Int(_) | ExprAst::Var => unreachable!("exact"),
        ExprAst::Add(a, b) => {
            let (a, b) = both!(a, b);
            Some(a.add(&b))
        }
        ExprAst::Sub(a, b) => {
            let (a, b) = both!(a, b);
            Some(a.sub(&b))
        }
        ExprAst::Mul(a, b) => {
            let (a, b) = both!(a, b);
            Some(a.mul(&b))
        }
        ExprAst::Div(a, b) => {
            let (a, b) = both!(a, b);
            if b.contains(&Rational::zero()) {
                // A zero denominator that is exactly zero errors in the
                // exact pass; an interval straddling zero needs precision.
                None
            } else {
                Some(a.div(&b)?)
            }
        }
        ExprAst::Neg(a) => Some(one!(a).neg()),
        ExprAst::Pow(a, b) => {
            let base = one!(a);
            if let Some(exp) = eval_ast_exact(b, n)? {
                pow_enclosure_rational_exp(&base, &exp, prec)?
            } else {
                let exp = one!(b);
                // General power via exp(exp * log base); base must be
                // strictly positive.
                if !base.lo().is_positive() {
                    if base.hi().is_positive() {
                        None
                    } else {
                        return Err(Error::Domain(String::from(
                            "power of non-positive base with irrational exponent",
                        )));
                    }
                } else {
                    Some(exp.mul(&base.ln(prec)?).exp(prec)?)
                }
            }
        }
        ExprAst::Ceil(a) => {
            let e = one!(a);
            Some(Enclosure::new(
                e.lo().ceil(),
                e.hi().ceil(),
            ))
        }
        ExprAst::Floor(a) => {
            let e = one!(a);
            Some(Enclosure::new(e.lo().floor(), e.hi().floor()))
        }
        ExprAst::Exp(a) => Some(one!(a).exp(prec)?),
        ExprAst::Log(a) => {
            let e = one!(a);
            if e.lo().is_positive() {
                Some(e.ln(prec)?)
            } else if e.hi().is_positive() {
                None
            } else {
                return Err(Error::Domain(String::from("log of non-positive value")));
            }
        }
        ExprAst::Max(a, b) => {
            let (a, b) = both!(a, b);
            Some(a.max(&b))
        }
        ExprAst::Min(a, b) => {
            let (a, b) = both!(a, b);
            Some(a.min(&b))
        }
    })
}

fn pow_enclosure_rational_exp(
    base: &Enclosure,
    exp: &Rational,
    prec: u32,
) -> Result<Option<Enclosure>> {
    let p = exp.numer();
    let r = exp.denom();
    if p.magnitude().bits() > 40 || p.magnitude().to_u64().unwrap() > MAX_INT_EXPONENT {
        return Err(Error::Budget(format!("exponent {exp} too large")));
    }
    let p_abs = p.magnitude().to_u64().unwrap();
    let rooted = if r.is_one() {
        base.clone()
    } else {
        let r = r
            .to_u32()
            .ok_or_else(|| Error::Budget(format!("root degree {r} too large")))?;
        if base.lo().is_negative() {
            if !base.hi().is_negative() {
                return Ok(None); // straddles zero; needs precision
            }
            return Err(Error::Domain(String::from(
                "fractional power of negative base",
            )));
        }
        let lo = crate::certified::roots::root_enclosure(base.lo(), r, prec)?;
        let hi = crate::certified::roots::root_enclosure(base.hi(), r, prec)?;
        Enclosure::new(lo.lo().clone(), hi.hi().clone())
    };
    let powered = int_pow_enclosure(&rooted, p_abs);
    if p.sign() == Sign::Minus {
        if powered.contains(&Rational::zero()) {
            if powered.is_point() {
                return Err(Error::Domain(String::from("zero to a negative power")));
            }
            return Ok(None);
        }
        return Ok(Some(powered.recip()?));
    }
    Ok(Some(powered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/10").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(rational_to_text(&rat(6, 4)), "3/2");
        assert_eq!(rational_to_text(&rat(8, 4)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a.b").is_err());
    }

    #[test]
    fn golden_values() {
        let f = BoundSpec::golden();
        // ceil(3^{n/2}) for n = 0..8: 1, 2, 3, 6, 9, 16, 27, 47, 81.
        let want = [1u64, 2, 3, 6, 9, 16, 27, 47, 81];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(f.floor_at(n as u64).unwrap(), BigUint::from(*w), "n={n}");
        }
        assert_eq!(f.alphabet_size(), 2);
    }

    #[test]
    fn cassaigne_values() {
        let f = BoundSpec::cassaigne();
        // 1, 2, 4, 7, 13, 25, 46, 85, 160
        let want = [1u64, 2, 4, 7, 13, 25, 46, 85, 160];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(f.floor_at(n as u64).unwrap(), BigUint::from(*w), "n={n}");
        }
        assert_eq!(f.floor_at(5).unwrap(), BigUint::from(25u32));
        assert_eq!(f.alphabet_size(), 2);
    }

    #[test]
    fn staircase_values() {
        let f = BoundSpec::theta_staircase(2, rat(2, 1), 4).unwrap();
        assert_eq!(f.floor_at(0).unwrap(), BigUint::from(1u32));
        assert_eq!(f.floor_at(3).unwrap(), BigUint::from(4u32));
        assert_eq!(f.floor_at(4).unwrap(), BigUint::from(5u32));
        assert_eq!(f.floor_at(5).unwrap(), BigUint::from(32u32));
        assert_eq!(f.alphabet_size(), 2);
        let f3 = BoundSpec::theta_staircase(3, rat(3, 2), 5).unwrap();
        assert_eq!(f3.floor_at(2).unwrap(), BigUint::from(4u32));
        assert_eq!(f3.alphabet_size(), 3);
    }

    #[test]
    fn prop6_values() {
        // c = log 2: f(n) = max(n+1, 2^n), exactly rational everywhere.
        let f = BoundSpec::prop6_envelope(LogParam::LnRational(rat(2, 1))).unwrap();
        let want = [1u64, 2, 4, 8, 16];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(
                f.eval_exact(n as u64).unwrap().unwrap(),
                Rational::from_integer((*w).into()),
                "n={n}"
            );
        }
        // c = 3/10: linear part wins until e^{3n/10} > n+1 (first at n=6:
        // e^1.8 = 6.049 > 7 is false, e^2.1 = 8.17 > 8 at n=7).
        let f = BoundSpec::prop6_envelope(LogParam::Rational(rat(3, 10))).unwrap();
        assert_eq!(f.floor_at(6).unwrap(), BigUint::from(7u32));
        assert_eq!(f.floor_at(7).unwrap(), BigUint::from(8u32));
        assert_eq!(f.eval_exact(6).unwrap().unwrap(), rat(7, 1));
        assert!(f.eval_exact(7).unwrap().is_none());
        // c > log 2 rejected.
        assert!(BoundSpec::prop6_envelope(LogParam::Rational(rat(7, 10))).is_err());
        assert!(
            BoundSpec::prop6_envelope(LogParam::LnRational(rat(2, 1))).is_ok(),
            "c = log 2 is allowed"
        );
    }

    #[test]
    fn exp_order_alphabet() {
        // h = log(3/2): alphabet ceil(3/2) = 2.
        let f = BoundSpec::exp_order(LogParam::LnRational(rat(3, 2)), rat(8, 1)).unwrap();
        assert_eq!(f.alphabet_size(), 2);
        // h = 1: alphabet ceil(e) = 3.
        let f = BoundSpec::exp_order(LogParam::Rational(rat(1, 1)), rat(4, 1)).unwrap();
        assert_eq!(f.alphabet_size(), 3);
        // f(2) = max(3, 4e^2) -> floor 29.
        assert_eq!(f.floor_at(2).unwrap(), BigUint::from(29u32));
    }

    #[test]
    fn expression_bounds() {
        let f = parse_bound("2*2^n").unwrap();
        assert_eq!(f.floor_at(10).unwrap(), BigUint::from(2048u32));
        assert_eq!(f.alphabet_size(), 4);
        let f = parse_bound("ceil(3^(n/2))").unwrap();
        for n in 0..12u64 {
            assert_eq!(
                f.floor_at(n).unwrap(),
                BoundSpec::golden().floor_at(n).unwrap(),
                "n={n}"
            );
        }
        let f = parse_bound("n + 1").unwrap();
        assert_eq!(f.floor_at(41).unwrap(), BigUint::from(42u32));
        assert_eq!(f.alphabet_size(), 2);
        // max(n+1, exp(n/2)) exercises the enclosure path.
        let f = parse_bound("max(n + 1, exp(n/2))").unwrap();
        assert_eq!(f.floor_at(10).unwrap(), BigUint::from(148u32)); // e^5 = 148.41
    }

    #[test]
    fn clamped_floor_avoids_huge_values() {
        let f = parse_bound("exp(n)").unwrap();
        // e^100000 would be ~43k digits; the clamp must avoid computing it
        // to full precision.
        assert_eq!(f.floor_clamped(100_000, 1 << 20).unwrap(), 1 << 20);
        assert_eq!(f.floor_clamped(2, 1 << 20).unwrap(), 7); // e^2 = 7.389
    }

    #[test]
    fn tables_and_recurrences() {
        let f = BoundSpec::table(
            vec![rat(1, 1), rat(2, 1), rat(4, 1)],
            TailRule::Grow(rat(3, 2)),
        )
        .unwrap();
        assert_eq!(f.eval_exact(4).unwrap().unwrap(), rat(9, 1));
        assert_eq!(f.floor_at(5).unwrap(), BigUint::from(13u32)); // 27/2
        let f = BoundSpec::table(vec![rat(1, 1), rat(3, 1)], TailRule::Hold).unwrap();
        assert_eq!(f.eval_exact(17).unwrap().unwrap(), rat(3, 1));
        assert_eq!(f.alphabet_size(), 3);

        let fib = BoundSpec::recurrence(
            [1u32, 1].map(BigUint::from).to_vec(),
            [2u32, 3].map(BigUint::from).to_vec(),
        )
        .unwrap();
        let want = [2u64, 3, 5, 8, 13, 21, 34];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(fib.floor_at(n as u64).unwrap(), BigUint::from(*w), "n={n}");
        }
        assert_eq!(
            fib.floor_table(6).unwrap(),
            want.map(BigUint::from).to_vec()
        );
    }

    #[test]
    fn describe_roundtrips() {
        let specs = [
            BoundSpec::golden(),
            BoundSpec::cassaigne(),
            BoundSpec::theta_staircase(2, rat(2, 1), 4).unwrap(),
            BoundSpec::prop6_envelope(LogParam::Rational(rat(3, 10))).unwrap(),
            BoundSpec::prop6_envelope(LogParam::LnRational(rat(2, 1))).unwrap(),
            BoundSpec::exp_order(LogParam::LnRational(rat(3, 2)), rat(8, 1)).unwrap(),
            parse_bound("max(n + 1, 2*2^n)").unwrap(),
            parse_bound("rec(1,0,3;1,2,4)").unwrap(),
            parse_bound("table(1,2,4;grow=3/2)").unwrap(),
        ];
        for s in &specs {
            let text = s.describe();
            let back = parse_bound(&text)
                .unwrap_or_else(|e| panic!("reparse {text:?}: {e}"));
            assert_eq!(&back, s, "{text}");
        }
    }

    #[test]
    fn rec_text_matches_preset() {
        let via_text = parse_bound("rec(1,0,3;1,2,4)").unwrap();
        let preset = BoundSpec::cassaigne();
        for n in 0..24 {
            assert_eq!(via_text.floor_at(n).unwrap(), preset.floor_at(n).unwrap());
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(parse_bound("preset:nope").is_err());
        assert!(parse_bound("rec(1,1;1)").is_err()); // init length mismatch
        assert!(parse_bound("table(1;hold)").is_err()); // too short
        assert!(parse_bound("preset:theta-staircase(q=1,theta=2,n0=3)").is_err());
        assert!(BoundSpec::table(vec![rat(1, 1), rat(0, 1)], TailRule::Hold).is_err());
        // floor(f(1)) < 2 means no usable alphabet.
        assert!(parse_bound("n/2 + 1").is_err());
    }

    #[test]
    fn exact_pow_perfect_roots() {
        // (9/4)^{3/2} = 27/8 exactly, through the parser and directly.
        let f = parse_bound("(9/4)^(3/2)").unwrap();
        assert_eq!(f.eval_exact(5).unwrap().unwrap(), rat(27, 8));
        let v = exact_pow(&rat(9, 4), &rat(3, 2)).unwrap().unwrap();
        assert_eq!(v, rat(27, 8));
        assert!(exact_pow(&rat(3, 1), &rat(1, 2)).unwrap().is_none());
        let v = exact_pow(&rat(2, 3), &rat(-2, 1)).unwrap().unwrap();
        assert_eq!(v, rat(9, 4));
    }

    #[test]
    fn f64_helpers() {
        let x = Rational::from_f64(0.5).unwrap();
        assert_eq!(x, rat(1, 2));
    }
}
