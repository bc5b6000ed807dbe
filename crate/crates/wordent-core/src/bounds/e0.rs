//! Bounds on the growth constant `E_0(f) = liminf (1/n) log f(n)`.
//!
//! Three sources are combined:
//!
//! - a finite-window upper bound `min_{1<=n<=W} (1/n) log f(n)`, which is
//!   a true upper bound on `E_0` when `f` is submultiplicative (the
//!   subadditivity argument applied to `log f`) and heuristic otherwise;
//! - a certified lower bound from a for-all-n envelope
//!   `f(n) >= c * rate^n` (see [`crate::bounds::EnvelopeCert`]);
//! - an analytically known value carried by presets and recurrences
//!   (certified two-sided: dominant-root envelopes above and below).

use crate::bounds::envelope::{self, EnvelopeCert};
use crate::bounds::spec::{BoundForm, BoundSpec, E0Kind, Preset};
use crate::certified::series::ln_rational;
use crate::certified::{adaptive, Enclosure};
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::String;
use num_traits::Signed;

/// Finite-window Fekete upper bound.
#[derive(Debug, Clone)]
pub struct FeketeUpper {
    /// Certified enclosure of `min_{1<=n<=window} (1/n) log f(n)`.
    pub value: Enclosure,
    /// Index attaining the smallest certified upper endpoint (ties break
    /// to the smallest index).
    pub argmin: u64,
    pub window: u64,
}

/// `min_{1 <= n <= window} (1/n) log f(n)` to within `tol`.
///
/// This is an upper bound for `E_0(f)` whenever `f` is submultiplicative
/// (and then the liminf is an infimum, attained along multiples of the
/// argmin); for general `f` it is only an observed statistic.
pub fn fekete_upper(f: &BoundSpec, window: u64, tol: &Rational) -> Result<FeketeUpper> {
    if window < 1 {
        return Err(Error::Domain(String::from("window must be >= 1")));
    }
    if !tol.is_positive() {
        return Err(Error::Domain(String::from("tolerance must be positive")));
    }
    adaptive(
        |prec| {
            let mut encs = alloc::vec::Vec::with_capacity(window as usize);
            for n in 1..=window {
                let e = match f.eval_enclosure(n, prec)? {
                    Some(e) => e,
                    None => return Ok(None),
                };
                if !e.lo().is_positive() {
                    return Ok(None); // log needs a positive lower end
                }
                encs.push(e.ln(prec)?.scale(&Rational::new(1.into(), n.into())));
            }
            let mut best = encs[0].clone();
            for e in &encs[1..] {
                best = best.min(e);
            }
            if &best.width() > tol {
                return Ok(None);
            }
            // Smallest index whose value is indistinguishable from the
            // certified minimum (exact ties are common: scaling laws
            // often repeat the minimum along multiples of the argmin).
            let argmin = encs
                .iter()
                .position(|e| e.lo() <= best.hi())
                .expect("some enclosure attains the minimum") as u64
                + 1;
            Ok(Some(FeketeUpper { value: best, argmin, window }))
        },
        "Fekete window upper bound",
    )
}

/// How a certified lower bound on `E_0` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E0LowerMethod {
    /// Envelope read off the shape of a closed form or preset.
    SyntacticEnvelope,
    /// Dominant-root induction on a linear recurrence.
    DominantRoot,
}

/// A certified `E_0(f) >= value.lo` claim with its supporting envelope.
#[derive(Debug, Clone)]
pub struct E0Lower {
    /// Enclosure of `log rate`; only the lower end is a certified bound.
    pub value: Enclosure,
    pub cert: EnvelopeCert,
    pub method: E0LowerMethod,
}

/// An analytically known `E_0` value.
#[derive(Debug, Clone)]
pub struct AnalyticValue {
    pub kind: E0Kind,
    pub value: Enclosure,
    /// True when the value is certified two-sided (all current kinds).
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct E0Bounds {
    pub lower: Option<E0Lower>,
    pub upper: FeketeUpper,
    /// True when the Fekete upper bound is unconditional (f is
    /// submultiplicative by construction, not just to a horizon).
    pub upper_unconditional: bool,
    pub analytic: Option<AnalyticValue>,
    /// Best certified lower endpoint (None when no certified source).
    pub best_lo: Option<Rational>,
    /// Best upper endpoint, and whether it is certified.
    pub best_hi: Rational,
    pub best_hi_certified: bool,
}

/// Evaluates an [`E0Kind`] to a certified enclosure of width <= tol.
pub fn analytic_enclosure(kind: &E0Kind, tol: &Rational) -> Result<Enclosure> {
    match kind {
        E0Kind::ExactValue(t) => Ok(Enclosure::point(t.clone())),
        E0Kind::LnRationalRoot { base, root } => adaptive(
            |prec| {
                let e = ln_rational(base, prec)?
                    .scale(&Rational::new(1.into(), (*root).into()));
                Ok((&e.width() <= tol).then_some(e))
            },
            "log of analytic growth constant",
        ),
        E0Kind::LnRecurrenceRoot { weights } => adaptive(
            |prec| {
                let rtol = Rational::new(
                    1.into(),
                    num_bigint::BigInt::from(2u8).pow(prec.min(1 << 12)),
                );
                let root = crate::certified::roots::dominant_recurrence_root(
                    weights, &rtol,
                )?;
                if !root.lo().is_positive() {
                    return Err(Error::Certificate(format!(
                        "non-positive dominant root enclosure [{}, {}]",
                        root.lo(),
                        root.hi()
                    )));
                }
                let lo = ln_rational(root.lo(), prec)?;
                let hi = ln_rational(root.hi(), prec)?;
                let e = Enclosure::new(lo.lo().clone(), hi.hi().clone());
                Ok((&e.width() <= tol).then_some(e))
            },
            "log of dominant recurrence root",
        ),
    }
}

/// Certified two-sided `E_0` for a recurrence: verifies both the lower
/// and upper inductive envelopes and returns the enclosure of `log` of
/// the dominant root.
fn recurrence_analytic(
    weights: &[num_bigint::BigUint],
    init: &[num_bigint::BigUint],
    tol: &Rational,
) -> Result<Enclosure> {
    // The envelope constructions *verify* the inductive inequalities; a
    // failure here is a real error, not a missing feature.
    let lower = envelope::recurrence_envelope(weights, init)?;
    let (_c_hi, lambda_hi) = envelope::recurrence_upper(weights, init)?;
    let lambda_lo = match &lower.rate {
        crate::bounds::envelope::GrowthRate::RationalRoot { base, .. } => base.clone(),
        _ => unreachable!("recurrence envelopes use rational rates"),
    };
    adaptive(
        |prec| {
            let lo = ln_rational(&lambda_lo, prec)?;
            let hi = ln_rational(&lambda_hi, prec)?;
            let e = Enclosure::new(lo.lo().clone(), hi.hi().clone());
            Ok((&e.width() <= tol).then_some(e))
        },
        "two-sided recurrence growth constant",
    )
}

/// Computes all available `E_0` information for a bound.
pub fn e0_bounds(f: &BoundSpec, window: u64, tol: &Rational) -> Result<E0Bounds> {
    let upper = fekete_upper(f, window, tol)?;

    let lower = match f.envelope_cert()? {
        Some(cert) => {
            let value = adaptive(
                |prec| {
                    let e = cert.ln_rate_enclosure(prec)?;
                    Ok((&e.width() <= tol).then_some(e))
                },
                "log of envelope rate",
            )?;
            let method = match f.form() {
                BoundForm::Recurrence { .. }
                | BoundForm::Preset(Preset::Cassaigne) => E0LowerMethod::DominantRoot,
                _ => E0LowerMethod::SyntacticEnvelope,
            };
            Some(E0Lower { value, cert, method })
        }
        None => None,
    };

    let analytic = match f.analytic_e0() {
        Some(kind) => {
            let value = match (&kind, f.form()) {
                // Recurrences get the fully verified two-sided argument.
                (E0Kind::LnRecurrenceRoot { weights }, BoundForm::Recurrence { init, .. }) => {
                    recurrence_analytic(weights, init, tol)?
                }
                (E0Kind::LnRecurrenceRoot { weights }, BoundForm::Preset(Preset::Cassaigne)) => {
                    let (_, init) = crate::bounds::spec::cassaigne_coefficients();
                    recurrence_analytic(weights, &init, tol)?
                }
                _ => analytic_enclosure(&kind, tol)?,
            };
            Some(AnalyticValue { kind, value, certified: true })
        }
        None => None,
    };

    let mut best_lo: Option<Rational> = lower.as_ref().map(|l| l.value.lo().clone());
    if let Some(a) = &analytic {
        if a.certified {
            let lo = a.value.lo().clone();
            best_lo = Some(match best_lo {
                None => lo,
                Some(b) => b.max(lo),
            });
        }
    }
    let (best_hi, best_hi_certified) = match &analytic {
        Some(a) if a.certified => (a.value.hi().clone(), true),
        _ => (
            upper.value.hi().clone(),
            f.submultiplicative_declared(),
        ),
    };

    Ok(E0Bounds {
        lower,
        upper,
        upper_unconditional: f.submultiplicative_declared(),
        analytic,
        best_lo,
        best_hi,
        best_hi_certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::spec::{parse_bound, LogParam};
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tol9() -> Rational {
        Rational::new(1.into(), BigInt::from(1_000_000_000u64))
    }

    fn assert_close(e: &Enclosure, want: f64, eps: f64) {
        let mid = e.mid_f64();
        assert!(
            (mid - want).abs() < eps,
            "enclosure [{}, {}] mid {mid} vs {want}",
            e.lo(),
            e.hi()
        );
    }

    #[test]
    fn golden_e0() {
        let f = BoundSpec::golden();
        let b = e0_bounds(&f, 8, &tol9()).unwrap();
        // E0 = log sqrt(3) = 0.5493061443...
        let want = 0.549_306_144_3;
        assert_close(&b.analytic.as_ref().unwrap().value, want, 1e-9);
        assert_close(&b.lower.as_ref().unwrap().value, want, 1e-9);
        // The window minimum is attained at n = 2 ((1/2) log 3 exactly).
        assert_eq!(b.upper.argmin, 2);
        assert_close(&b.upper.value, want, 1e-9);
        assert!(b.upper_unconditional);
        assert!(b.best_hi_certified);
        let lo = b.best_lo.unwrap();
        assert!(
            crate::certified::rational_to_f64(&lo) > want - 1e-9,
            "best_lo too small"
        );
    }

    #[test]
    fn cassaigne_e0() {
        let f = BoundSpec::cassaigne();
        let b = e0_bounds(&f, 20, &tol9()).unwrap();
        // alpha = 1.8637065... the root of x^3 - x^2 - 3; log alpha =
        // 0.6225680...
        let want = 0.622_568_0;
        assert_close(&b.analytic.as_ref().unwrap().value, want, 1e-6);
        assert_eq!(
            b.lower.as_ref().unwrap().method,
            E0LowerMethod::DominantRoot
        );
        assert_close(&b.lower.as_ref().unwrap().value, want, 1e-6);
        // Fekete window values stay above the limit for this recurrence.
        assert!(
            b.upper.value.hi() > b.analytic.as_ref().unwrap().value.lo(),
            "window min cannot undercut the limit"
        );
    }

    #[test]
    fn staircase_e0() {
        let f = BoundSpec::theta_staircase(2, rat(2, 1), 4).unwrap();
        let b = e0_bounds(&f, 12, &tol9()).unwrap();
        // E0 = log 2.
        assert_close(&b.analytic.as_ref().unwrap().value, core::f64::consts::LN_2, 1e-9);
        assert!(!b.upper_unconditional, "staircase is not submultiplicative");
    }

    #[test]
    fn prop6_e0_exact() {
        let f = BoundSpec::prop6_envelope(LogParam::Rational(rat(3, 10))).unwrap();
        let b = e0_bounds(&f, 40, &tol9()).unwrap();
        let a = b.analytic.unwrap();
        assert!(a.value.is_point(), "rational c gives an exact E0");
        assert_eq!(a.value.lo(), &rat(3, 10));
        assert_eq!(b.best_lo.unwrap(), rat(3, 10));
    }

    #[test]
    fn window_minimum_is_monotone_in_window() {
        // Fekete invariant: enlarging the window can only lower the min.
        let f = BoundSpec::golden();
        let mut prev: Option<Rational> = None;
        for w in [2u64, 4, 8, 16] {
            let b = fekete_upper(&f, w, &tol9()).unwrap();
            if let Some(p) = prev {
                assert!(b.value.hi() <= &p, "window {w} increased the minimum");
            }
            prev = Some(b.value.hi().clone());
        }
    }

    #[test]
    fn expression_bound_gets_syntactic_lower() {
        let f = parse_bound("2*2^n").unwrap();
        let b = e0_bounds(&f, 8, &tol9()).unwrap();
        let l = b.lower.unwrap();
        assert_eq!(l.method, E0LowerMethod::SyntacticEnvelope);
        assert_close(&l.value, core::f64::consts::LN_2, 1e-9);
        assert!(b.analytic.is_none());
        // Upper: min over n of (1/n)log(2*2^n) = log 2 + log(2)/n -> at
        // n = 8: 0.7796...
        assert!(b.best_hi > rat(693, 1000));
        assert!(!b.best_hi_certified);
    }
}
