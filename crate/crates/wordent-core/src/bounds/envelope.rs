//! Certified pointwise envelopes `f(n) >= c * rate^n` valid for *all* n.
//!
//! The subshift certificate tail needs a true for-all-n lower envelope of
//! the bound, not a sampled one. Envelopes are established two ways:
//!
//! - structurally, for closed forms where the inequality is syntactically
//!   evident (`ceil(3^{n/2}) >= 3^{n/2}`, `max(n+1, e^{cn}) >= e^{cn}`);
//! - by induction, for linear recurrences with nonnegative coefficients:
//!   any rational `lambda` with `lambda^d <= sum w_i lambda^{d-i}`
//!   (automatic for `lambda` at or below the dominant root) satisfies
//!   `f(n) >= c lambda^n` for all `n` once the `d` initial values do.

use crate::bounds::ast::ExprAst;
use crate::bounds::spec::{
    cassaigne_coefficients, BoundForm, BoundSpec, LogParam, Preset, TailRule,
};
use crate::certified::roots::dominant_recurrence_root;
use crate::certified::series::ln_rational;
use crate::certified::{adaptive, pow_rational, Enclosure};
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exactly-described exponential growth rate.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GrowthRate {
    /// `rate = base^{1/root}` for a positive rational base.
    RationalRoot { base: Rational, root: u32 },
    /// `rate = e^t` for a rational `t` (so `log rate = t` exactly).
    ExpRational { t: Rational },
}

impl GrowthRate {
    pub fn one() -> GrowthRate {
        GrowthRate::ExpRational { t: Rational::zero() }
    }

    /// Certified enclosure of `log rate`.
    pub fn ln_enclosure(&self, prec: u32) -> Result<Enclosure> {
        match self {
            GrowthRate::RationalRoot { base, root } => {
                let l = ln_rational(base, prec)?;
                Ok(l.scale(&Rational::new(1.into(), (*root).into())))
            }
            GrowthRate::ExpRational { t } => Ok(Enclosure::point(t.clone())),
        }
    }

    /// Decides rate ordering. Exact for pairs of rational roots; for
    /// mixed pairs decidable because `e^t` is irrational for rational
    /// `t != 0`.
    pub fn cmp(&self, other: &GrowthRate) -> Result<Ordering> {
        use GrowthRate::*;
        match (self, other) {
            (RationalRoot { base: b1, root: r1 }, RationalRoot { base: b2, root: r2 }) => {
                // b1^{1/r1} vs b2^{1/r2}  <=>  b1^{r2} vs b2^{r1}.
                Ok(pow_rational(b1, *r2 as u64).cmp(&pow_rational(b2, *r1 as u64)))
            }
            (ExpRational { t: t1 }, ExpRational { t: t2 }) => Ok(t1.cmp(t2)),
            _ => {
                let (rr, ex, flip) = match (self, other) {
                    (RationalRoot { base, root }, ExpRational { t }) => {
                        ((base, root), t, false)
                    }
                    (ExpRational { t }, RationalRoot { base, root }) => {
                        ((base, root), t, true)
                    }
                    _ => unreachable!(),
                };
                // log(base)/root vs t; equality only when both are zero.
                let (base, root) = rr;
                if ex.is_zero() && base.is_one() {
                    return Ok(Ordering::Equal);
                }
                let scaled = ex * Rational::from_integer((*root).into());
                let ord = adaptive(
                    |prec| Ok(ln_rational(base, prec)?.cmp_rational(&scaled)),
                    "compare growth rates",
                )?;
                Ok(if flip { ord.reverse() } else { ord })
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GrowthRate::RationalRoot { base, root } if *root == 1 => {
                format!("{base}")
            }
            GrowthRate::RationalRoot { base, root } => format!("{base}^(1/{root})"),
            GrowthRate::ExpRational { t } => format!("exp({t})"),
        }
    }
}

/// A certificate that `f(n) >= c * rate^n` for every `n >= 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeCert {
    pub c: Rational,
    pub rate: GrowthRate,
}

impl EnvelopeCert {
    /// Certified enclosure of `log c` (signed; `c < 1` is allowed).
    pub fn ln_c_enclosure(&self, prec: u32) -> Result<Enclosure> {
        ln_rational(&self.c, prec)
    }

    /// Certified enclosure of `log rate`.
    pub fn ln_rate_enclosure(&self, prec: u32) -> Result<Enclosure> {
        self.rate.ln_enclosure(prec)
    }

    pub fn describe(&self) -> String {
        format!("f(n) >= {} * ({})^n", self.c, self.rate.describe())
    }
}

/// Builds the envelope certificate for a bound, if one is established.
pub(crate) fn cert_for(spec: &BoundSpec) -> Result<Option<EnvelopeCert>> {
    match spec.form() {
        BoundForm::Preset(Preset::Golden) => Ok(Some(EnvelopeCert {
            // ceil(3^{n/2}) >= 3^{n/2} termwise.
            c: Rational::one(),
            rate: GrowthRate::RationalRoot {
                base: Rational::from_integer(3.into()),
                root: 2,
            },
        })),
        BoundForm::Preset(Preset::Cassaigne) => {
            let (w, i) = cassaigne_coefficients();
            recurrence_envelope(&w, &i).map(Some)
        }
        BoundForm::Preset(Preset::ThetaStaircase { q, theta, n0 }) => {
            // c = min over the staircase head of f(k)/theta^k; beyond n0
            // the bound is exactly theta^n.
            let mut c = Rational::one(); // k = 0: f(0)/theta^0 = 1
            for k in 1..=(*n0 as u64) {
                let fk = Rational::from_integer((k + *q as u64 - 1).into());
                let ratio = fk / pow_rational(theta, k);
                if ratio < c {
                    c = ratio;
                }
            }
            Ok(Some(EnvelopeCert {
                c,
                rate: GrowthRate::RationalRoot { base: theta.clone(), root: 1 },
            }))
        }
        BoundForm::Preset(Preset::Prop6Envelope { c }) => Ok(Some(EnvelopeCert {
            c: Rational::one(),
            rate: rate_of_log_param(c),
        })),
        BoundForm::Preset(Preset::ExpOrder { h, big_c }) => Ok(Some(EnvelopeCert {
            c: big_c.clone(),
            rate: rate_of_log_param(h),
        })),
        BoundForm::Recurrence { weights, init } => {
            recurrence_envelope(weights, init).map(Some)
        }
        BoundForm::Table { values, tail } => Ok(Some(table_envelope(values, tail))),
        BoundForm::Expr(ast) => envelope_of_ast(ast),
    }
}

fn rate_of_log_param(c: &LogParam) -> GrowthRate {
    match c {
        LogParam::Rational(t) => GrowthRate::ExpRational { t: t.clone() },
        LogParam::LnRational(t) => {
            GrowthRate::RationalRoot { base: t.clone(), root: 1 }
        }
    }
}

fn table_envelope(values: &[Rational], tail: &TailRule) -> EnvelopeCert {
    match tail {
        TailRule::Hold => {
            let c = values.iter().min().expect("non-empty").clone();
            EnvelopeCert { c, rate: GrowthRate::one() }
        }
        TailRule::Grow(r) => {
            // Past the table f(L-1+j) = last*r^j = (last/r^{L-1}) r^{L-1+j};
            // fold the head values in as well.
            let len = values.len() as u64;
            let mut c = values.last().expect("non-empty") / pow_rational(r, len - 1);
            for (k, v) in values.iter().enumerate() {
                let ratio = v / pow_rational(r, k as u64);
                if ratio < c {
                    c = ratio;
                }
            }
            EnvelopeCert {
                c,
                rate: GrowthRate::RationalRoot { base: r.clone(), root: 1 },
            }
        }
    }
}

/// Inductive envelope for `f(n) = sum_i w_i f(n-1-i)`: take a rational
/// `lambda` at the lower end of the dominant-root enclosure; then
/// `lambda^d <= sum w_i lambda^{d-i}` holds (the characteristic
/// polynomial is nonpositive below its unique positive root), and with
/// `c = min_k f(k)/lambda^k` over the initial values, induction gives
/// `f(n) >= c lambda^n` for all n.
pub(crate) fn recurrence_envelope(
    weights: &[BigUint],
    init: &[BigUint],
) -> Result<EnvelopeCert> {
    let root = dominant_recurrence_root(weights, &root_tolerance())?;
    let lambda = root.lo().clone();
    if !lambda.is_positive() {
        return Err(Error::Certificate(String::from(
            "dominant root enclosure not positive",
        )));
    }
    verify_char_inequality(weights, &lambda, false)?;
    let c = init_ratio(init, &lambda, false);
    Ok(EnvelopeCert {
        c,
        rate: GrowthRate::RationalRoot { base: lambda, root: 1 },
    })
}

/// Upper companion to [`recurrence_envelope`]: `f(n) <= c_hi lambda_hi^n`
/// for all n, with `lambda_hi` the upper end of the root enclosure.
pub(crate) fn recurrence_upper(
    weights: &[BigUint],
    init: &[BigUint],
) -> Result<(Rational, Rational)> {
    let root = dominant_recurrence_root(weights, &root_tolerance())?;
    let lambda = root.hi().clone();
    verify_char_inequality(weights, &lambda, true)?;
    let c = init_ratio(init, &lambda, true);
    Ok((c, lambda))
}

fn root_tolerance() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 48))
}

/// Checks `lambda^d <= sum_i w_i lambda^{d-1-i}` (or `>=` when `upper`).
fn verify_char_inequality(
    weights: &[BigUint],
    lambda: &Rational,
    upper: bool,
) -> Result<()> {
    let d = weights.len() as u64;
    let lhs = pow_rational(lambda, d);
    let mut rhs = Rational::zero();
    for (i, w) in weights.iter().enumerate() {
        let wr = Rational::from_integer(w.clone().into());
        rhs += wr * pow_rational(lambda, d - 1 - i as u64);
    }
    let ok = if upper { lhs >= rhs } else { lhs <= rhs };
    if !ok {
        return Err(Error::Certificate(format!(
            "characteristic inequality failed at lambda = {lambda}"
        )));
    }
    Ok(())
}

/// `min_k init[k]/lambda^k` (or max when `upper`).
fn init_ratio(init: &[BigUint], lambda: &Rational, upper: bool) -> Rational {
    let mut best: Option<Rational> = None;
    for (k, v) in init.iter().enumerate() {
        let ratio =
            Rational::from_integer(v.clone().into()) / pow_rational(lambda, k as u64);
        best = Some(match best {
            None => ratio,
            Some(b) => {
                if upper {
                    b.max(ratio)
                } else {
                    b.min(ratio)
                }
            }
        });
    }
    best.expect("non-empty init")
}

// ---------------------------------------------------------------------
// Structural envelope extraction from expression trees.

fn contains_var(ast: &ExprAst) -> bool {
    use ExprAst::*;
    match ast {
        Int(_) => false,
        Var => true,
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) | Max(a, b)
        | Min(a, b) => contains_var(a) || contains_var(b),
        Neg(a) | Ceil(a) | Floor(a) | Exp(a) | Log(a) => contains_var(a),
    }
}

/// The exact rational value of a variable-free subtree, if it has one.
fn const_exact(ast: &ExprAst) -> Result<Option<Rational>> {
    if contains_var(ast) {
        return Ok(None);
    }
    crate::bounds::spec::eval_ast_exact_at(ast, 0)
}

/// Coefficient `t` when the subtree is structurally `t * n`.
fn linear_coefficient(ast: &ExprAst) -> Result<Option<Rational>> {
    use ExprAst::*;
    Ok(match ast {
        Var => Some(Rational::one()),
        Int(v) if v.is_zero() => Some(Rational::zero()),
        Neg(a) => linear_coefficient(a)?.map(|t| -t),
        Add(a, b) => match (linear_coefficient(a)?, linear_coefficient(b)?) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        },
        Sub(a, b) => match (linear_coefficient(a)?, linear_coefficient(b)?) {
            (Some(x), Some(y)) => Some(x - y),
            _ => None,
        },
        Mul(a, b) => {
            if let (Some(k), Some(t)) = (const_exact(a)?, linear_coefficient(b)?) {
                Some(k * t)
            } else if let (Some(t), Some(k)) =
                (linear_coefficient(a)?, const_exact(b)?)
            {
                Some(t * k)
            } else {
                None
            }
        }
        Div(a, b) => match (linear_coefficient(a)?, const_exact(b)?) {
            (Some(t), Some(k)) if !k.is_zero() => Some(t / k),
            _ => None,
        },
        _ => None,
    })
}

/// Structural nonnegativity: true only when every evaluation is >= 0.
fn nonneg(ast: &ExprAst) -> bool {
    use ExprAst::*;
    match ast {
        Int(v) => !v.is_negative(),
        Var | Exp(_) => true,
        Add(a, b) | Mul(a, b) | Div(a, b) | Min(a, b) => nonneg(a) && nonneg(b),
        Max(a, b) => nonneg(a) || nonneg(b),
        Pow(a, _) => nonneg(a),
        Ceil(a) | Floor(a) => nonneg(a),
        Neg(_) | Sub(..) | Log(_) => false,
    }
}

/// Picks the envelope with the faster rate (either is sound for `max`
/// and for sums of nonnegative terms); ties prefer the first.
fn better_of(
    a: Option<EnvelopeCert>,
    b: Option<EnvelopeCert>,
) -> Result<Option<EnvelopeCert>> {
    Ok(match (a, b) {
        (Some(a), Some(b)) => match a.rate.cmp(&b.rate)? {
            Ordering::Less => Some(b),
            _ => Some(a),
        },
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    })
}

pub(crate) fn envelope_of_ast(ast: &ExprAst) -> Result<Option<EnvelopeCert>> {
    use ExprAst::*;
    Ok(match ast {
        Int(v) => {
            if v.is_positive() {
                Some(EnvelopeCert {
                    c: Rational::from_integer(v.clone()),
                    rate: GrowthRate::one(),
                })
            } else {
                None
            }
        }
        // f(n) = n vanishes at 0; no positive envelope exists.
        Var => None,
        Add(a, b) if nonneg(a) && nonneg(b) => {
            better_of(envelope_of_ast(a)?, envelope_of_ast(b)?)?
        }
        Mul(a, b) => match (envelope_of_ast(a)?, envelope_of_ast(b)?) {
            (Some(ea), Some(eb)) => combine_product(ea, eb),
            _ => None,
        },
        Div(a, b) => match (envelope_of_ast(a)?, const_exact(b)?) {
            (Some(ea), Some(k)) if k.is_positive() => {
                Some(EnvelopeCert { c: ea.c / k, rate: ea.rate })
            }
            _ => None,
        },
        Pow(a, b) => pow_envelope(a, b)?,
        Exp(arg) => {
            if let Some(t) = linear_coefficient(arg)? {
                Some(EnvelopeCert {
                    c: Rational::one(),
                    rate: GrowthRate::ExpRational { t },
                })
            } else if let Some(k) = const_exact(arg)? {
                // Constant e^k: certified rational lower bound.
                let e = crate::certified::series::exp_rational(
                    &k,
                    crate::certified::START_PREC,
                )?;
                Some(EnvelopeCert { c: e.lo().clone(), rate: GrowthRate::one() })
            } else {
                None
            }
        }
        Ceil(a) => envelope_of_ast(a)?,
        Max(a, b) => better_of(envelope_of_ast(a)?, envelope_of_ast(b)?)?,
        Min(a, b) => match (envelope_of_ast(a)?, envelope_of_ast(b)?) {
            (Some(ea), Some(eb)) => {
                let c = ea.c.clone().min(eb.c.clone());
                match ea.rate.cmp(&eb.rate)? {
                    Ordering::Less | Ordering::Equal => {
                        Some(EnvelopeCert { c, rate: ea.rate })
                    }
                    Ordering::Greater => Some(EnvelopeCert { c, rate: eb.rate }),
                }
            }
            _ => None,
        },
        _ => None,
    })
}

fn pow_envelope(base: &ExprAst, exp: &ExprAst) -> Result<Option<EnvelopeCert>> {
    let Some(b) = const_exact(base)? else {
        return Ok(None);
    };
    if !b.is_positive() {
        return Ok(None);
    }
    if let Some(t) = linear_coefficient(exp)? {
        // b^{(u/v) n} = (b^u)^{n/v}; negative coefficients flip to the
        // reciprocal base.
        let u = t.numer().magnitude();
        let v = t.denom().to_u32();
        let (Some(u), Some(v)) = (u.to_u64(), v) else {
            return Ok(None);
        };
        if u > 1 << 16 {
            return Ok(None);
        }
        let base_pow = pow_rational(&b, u);
        let base_pow = if t.is_negative() {
            base_pow.recip()
        } else {
            base_pow
        };
        return Ok(Some(EnvelopeCert {
            c: Rational::one(),
            rate: GrowthRate::RationalRoot { base: base_pow, root: v },
        }));
    }
    Ok(None)
}

fn combine_product(a: EnvelopeCert, b: EnvelopeCert) -> Option<EnvelopeCert> {
    use GrowthRate::*;
    let rate = match (a.rate, b.rate) {
        (ExpRational { t: t1 }, ExpRational { t: t2 }) => ExpRational { t: t1 + t2 },
        (RationalRoot { base: b1, root: r1 }, RationalRoot { base: b2, root: r2 }) => {
            let l = lcm_u32(r1, r2);
            RationalRoot {
                base: pow_rational(&b1, (l / r1) as u64)
                    * pow_rational(&b2, (l / r2) as u64),
                root: l,
            }
        }
        // e^t * b^{1/r}: representable only when one side is trivial.
        (ExpRational { t }, RationalRoot { base, root })
        | (RationalRoot { base, root }, ExpRational { t }) => {
            if t.is_zero() {
                RationalRoot { base, root }
            } else if base.is_one() {
                ExpRational { t }
            } else {
                return None;
            }
        }
    };
    Some(EnvelopeCert { c: a.c * b.c, rate })
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_bound;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check_envelope(spec: &BoundSpec, n_max: u64) {
        let cert = spec.envelope_cert().unwrap().expect("envelope expected");
        for n in 0..=n_max {
            // f(n) >= c * rate^n, verified through enclosures: the floor
            // comparison uses exact values where available.
            let bound = match &cert.rate {
                GrowthRate::RationalRoot { base, root } => {
                    // rate^n = base^{n/root}: compare f(n)^root >= c^root*base^n
                    let f = spec
                        .eval_exact(n)
                        .unwrap()
                        .unwrap_or_else(|| panic!("exact value needed at {n}"));
                    let lhs = pow_rational(&f, *root as u64);
                    let rhs = pow_rational(&cert.c, *root as u64)
                        * pow_rational(base, n);
                    assert!(lhs >= rhs, "{}: violated at n={n}", spec.describe());
                    continue;
                }
                GrowthRate::ExpRational { t } => t.clone(),
            };
            // Exponential rate: check floor(f(n)) + 1 > c e^{tn} lower end.
            let arg = bound * Rational::from_integer(n.into());
            let e = crate::certified::series::exp_rational(&arg, 128).unwrap();
            let fv = spec.floor_at(n).unwrap();
            let fv = Rational::from_integer(BigInt::from(fv) + 1);
            assert!(
                fv > e.lo().clone() * cert.c.clone(),
                "{}: exp-envelope violated at n={n}",
                spec.describe()
            );
        }
    }

    #[test]
    fn preset_envelopes_hold() {
        check_envelope(&BoundSpec::golden(), 30);
        check_envelope(&BoundSpec::cassaigne(), 40);
        check_envelope(
            &BoundSpec::theta_staircase(2, rat(2, 1), 4).unwrap(),
            20,
        );
        check_envelope(
            &BoundSpec::prop6_envelope(LogParam::LnRational(rat(2, 1))).unwrap(),
            16,
        );
    }

    #[test]
    fn recurrence_envelope_constants() {
        // Fibonacci-style: dominant root phi, init 1, 2 dominates.
        let w = [1u32, 1].map(BigUint::from).to_vec();
        let i = [1u32, 2].map(BigUint::from).to_vec();
        let cert = recurrence_envelope(&w, &i).unwrap();
        match &cert.rate {
            GrowthRate::RationalRoot { base, root } => {
                assert_eq!(*root, 1);
                // lambda just below phi = 1.6180...
                let phi_lo = rat(1618, 1000);
                let phi_hi = rat(1619, 1000);
                assert!(base > &phi_lo && base < &phi_hi, "lambda = {base}");
            }
            other => panic!("unexpected rate {other:?}"),
        }
        assert!(cert.c >= Rational::one(), "c = {}", cert.c);

        let (c_hi, l_hi) = recurrence_upper(&w, &i).unwrap();
        assert!(l_hi > rat(1618, 1000) && l_hi < rat(1619, 1000));
        assert!(c_hi >= Rational::one());
    }

    #[test]
    fn expression_envelopes() {
        let spec = parse_bound("ceil(3^(n/2))").unwrap();
        let cert = spec.envelope_cert().unwrap().unwrap();
        assert_eq!(
            cert.rate,
            GrowthRate::RationalRoot { base: rat(3, 1), root: 2 }
        );
        assert_eq!(cert.c, Rational::one());

        let spec = parse_bound("2*2^n").unwrap();
        let cert = spec.envelope_cert().unwrap().unwrap();
        assert_eq!(cert.c, rat(2, 1));
        assert_eq!(
            cert.rate,
            GrowthRate::RationalRoot { base: rat(2, 1), root: 1 }
        );

        let spec = parse_bound("max(n + 1, exp(3*n/10))").unwrap();
        let cert = spec.envelope_cert().unwrap().unwrap();
        assert_eq!(cert.rate, GrowthRate::ExpRational { t: rat(3, 10) });

        // min picks the slower rate and the smaller constant.
        let spec = parse_bound("min(2^n, 3*3^n)").unwrap();
        let cert = spec.envelope_cert().unwrap().unwrap();
        assert_eq!(
            cert.rate,
            GrowthRate::RationalRoot { base: rat(2, 1), root: 1 }
        );
        assert_eq!(cert.c, Rational::one());

        // n + 1: rate-one envelope with c = 1 via the Int leaf.
        let spec = parse_bound("n + 1").unwrap();
        let cert = spec.envelope_cert().unwrap().unwrap();
        assert_eq!(cert.rate, GrowthRate::one());
    }

    #[test]
    fn growth_rate_comparisons() {
        let sqrt3 = GrowthRate::RationalRoot { base: rat(3, 1), root: 2 };
        let two = GrowthRate::RationalRoot { base: rat(2, 1), root: 1 };
        assert_eq!(sqrt3.cmp(&two).unwrap(), Ordering::Less);
        let e_half = GrowthRate::ExpRational { t: rat(1, 2) };
        // e^{1/2} = 1.6487 < sqrt 3 = 1.7320
        assert_eq!(e_half.cmp(&sqrt3).unwrap(), Ordering::Less);
        assert_eq!(sqrt3.cmp(&e_half).unwrap(), Ordering::Greater);
        let one_a = GrowthRate::one();
        let one_b = GrowthRate::RationalRoot { base: rat(1, 1), root: 3 };
        assert_eq!(one_a.cmp(&one_b).unwrap(), Ordering::Equal);
    }
}
