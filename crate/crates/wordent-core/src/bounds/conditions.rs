//! Finite-horizon verification of bound admissibility conditions, and
//! the regularization transform that repairs submultiplicativity.
//!
//! The conditions checked for a candidate bound `f`:
//!
//! * `cstar_i`: `f(n+1) > f(n)` and `f(n) >= n+1`;
//! * `cstar_ii`: `f(n+m) <= f(n) f(m)` (submultiplicativity);
//! * `cassaigne`: `f(n+m+1) - f(n+m) <= f(n) (f(m+1) - f(m))` — the
//!   first-difference condition satisfied by every complexity function
//!   (independent of the two above; e.g. `ceil(3^{n/2})` meets both
//!   `cstar` conditions yet fails this one at `(1,1)`);
//! * `envelope`: `f(n) >= exp(E_0(f) n)` against a certified value or
//!   lower bound for the growth constant.
//!
//! Every comparison is decided exactly. Values that are not rational
//! are handled through their exact `k e^t` representation: a vanishing
//! combination of exponentials with distinct rational exponents must be
//! trivial, so after cancelling syntactically equal terms the sign of
//! what remains is decidable by enclosure refinement. Only opaque
//! expression bounds mixing other irrationals fall back to plain
//! enclosure comparison, where a true tie would surface as an explicit
//! precision-exhausted error rather than a wrong verdict.

use crate::bounds::e0::analytic_enclosure;
use crate::bounds::spec::{rational_to_text, BoundSpec, E0Kind};
use crate::certified::series::exp_rational;
use crate::certified::{adaptive, pow_rational, Enclosure};
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

/// Result of scanning one condition over a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionOutcome {
    Pass,
    /// First counterexample; `m` is present for two-index conditions.
    FailAt { n: u64, m: Option<u64> },
    /// The condition could not be checked; the payload says why.
    Skipped(String),
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self, ConditionOutcome::FailAt { .. })
    }
}

/// Report of all condition checks to a horizon.
#[derive(Debug, Clone)]
pub struct ConditionsReport {
    pub horizon: u64,
    /// Strict growth and `f(n) >= n+1`.
    pub cstar_i: ConditionOutcome,
    /// Submultiplicativity `f(n+m) <= f(n) f(m)`.
    pub cstar_ii: ConditionOutcome,
    /// First-difference condition.
    pub cassaigne: ConditionOutcome,
    /// `f(n) >= exp(E_0 n)` against a certified growth constant.
    pub envelope: ConditionOutcome,
    /// Description of the growth-constant threshold used by `envelope`.
    pub e0_used: Option<String>,
}

impl ConditionsReport {
    /// True when no condition produced a counterexample (skipped checks
    /// do not count against the bound).
    pub fn no_failures(&self) -> bool {
        !(self.cstar_i.failed()
            || self.cstar_ii.failed()
            || self.cassaigne.failed()
            || self.envelope.failed())
    }
}

/// A finite sum `sum_i k_i e^{t_i}` with rational coefficients and
/// pairwise distinct rational exponents. Such a sum vanishes only when
/// it is syntactically empty (linear independence of exponentials of
/// distinct algebraic numbers), so its sign is decidable: cancel equal
/// exponents exactly, then refine enclosures until the sign separates.
#[derive(Debug, Clone, Default)]
struct ExpSum {
    terms: Vec<(Rational, Rational)>,
}

impl ExpSum {
    fn push(&mut self, k: Rational, t: Rational) {
        if k.is_zero() {
            return;
        }
        for (kk, tt) in self.terms.iter_mut() {
            if *tt == t {
                *kk += k;
                if kk.is_zero() {
                    let keep = t;
                    self.terms.retain(|(_, u)| *u != keep);
                }
                return;
            }
        }
        self.terms.push((k, t));
    }

    fn push_view(&mut self, sign: i8, view: &(Rational, Rational)) {
        let k = if sign < 0 { -view.0.clone() } else { view.0.clone() };
        self.push(k, view.1.clone());
    }

    /// Product of two single-value views, scaled by `sign`.
    fn push_product(
        &mut self,
        sign: i8,
        a: &(Rational, Rational),
        b: &(Rational, Rational),
    ) {
        let k = &a.0 * &b.0;
        let k = if sign < 0 { -k } else { k };
        self.push(k, &a.1 + &b.1);
    }

    fn sign(&self) -> Result<Ordering> {
        if self.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        // Pure-rational fast path (all exponents zero after merging
        // means a single t = 0 term).
        if self.terms.len() == 1 && self.terms[0].1.is_zero() {
            return Ok(rational_sign(&self.terms[0].0));
        }
        let zero = Rational::zero();
        adaptive(
            |prec| {
                let mut total = Enclosure::zero();
                for (k, t) in &self.terms {
                    let e = if t.is_zero() {
                        Enclosure::point(Rational::one())
                    } else {
                        exp_rational(t, prec)?
                    };
                    total = total.add(&e.scale(k));
                }
                Ok(total.cmp_rational(&zero))
            },
            "sign of exponential combination",
        )
    }
}

fn rational_sign(x: &Rational) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Sign of `f(a) - f(b)`.
fn cmp_f_f(f: &BoundSpec, a: u64, b: u64) -> Result<Ordering> {
    if let (Some(va), Some(vb)) = (f.kexp_value(a)?, f.kexp_value(b)?) {
        let mut s = ExpSum::default();
        s.push_view(1, &va);
        s.push_view(-1, &vb);
        return s.sign();
    }
    adaptive(
        |prec| {
            let (ea, eb) = match (f.eval_enclosure(a, prec)?, f.eval_enclosure(b, prec)?) {
                (Some(x), Some(y)) => (x, y),
                _ => return Ok(None),
            };
            Ok(ea.cmp_enclosure(&eb))
        },
        "comparison of bound values",
    )
}

/// Sign of `f(s) - f(n) f(m)`.
fn cmp_f_prod(f: &BoundSpec, s: u64, n: u64, m: u64) -> Result<Ordering> {
    if let (Some(vs), Some(vn), Some(vm)) =
        (f.kexp_value(s)?, f.kexp_value(n)?, f.kexp_value(m)?)
    {
        let mut sum = ExpSum::default();
        sum.push_view(1, &vs);
        sum.push_product(-1, &vn, &vm);
        return sum.sign();
    }
    let zero = Rational::zero();
    adaptive(
        |prec| {
            let es = f.eval_enclosure(s, prec)?;
            let en = f.eval_enclosure(n, prec)?;
            let em = f.eval_enclosure(m, prec)?;
            let (es, en, em) = match (es, en, em) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Ok(None),
            };
            Ok(es.sub(&en.mul(&em)).cmp_rational(&zero))
        },
        "submultiplicativity comparison",
    )
}

/// Sign of `[f(u+1) - f(u)] - f(n) [f(m+1) - f(m)]` with `u = n + m`.
fn cmp_first_difference(f: &BoundSpec, n: u64, m: u64) -> Result<Ordering> {
    let u = n + m;
    let views = (
        f.kexp_value(u + 1)?,
        f.kexp_value(u)?,
        f.kexp_value(n)?,
        f.kexp_value(m + 1)?,
        f.kexp_value(m)?,
    );
    if let (Some(a), Some(b), Some(c), Some(d), Some(e)) = views {
        let mut sum = ExpSum::default();
        sum.push_view(1, &a);
        sum.push_view(-1, &b);
        sum.push_product(-1, &c, &d);
        sum.push_product(1, &c, &e);
        return sum.sign();
    }
    let zero = Rational::zero();
    adaptive(
        |prec| {
            let vals = [
                f.eval_enclosure(u + 1, prec)?,
                f.eval_enclosure(u, prec)?,
                f.eval_enclosure(n, prec)?,
                f.eval_enclosure(m + 1, prec)?,
                f.eval_enclosure(m, prec)?,
            ];
            let mut it = vals.into_iter();
            let mut next = || it.next().unwrap();
            let (a, b, c, d, e) = match (next(), next(), next(), next(), next()) {
                (Some(a), Some(b), Some(c), Some(d), Some(e)) => (a, b, c, d, e),
                _ => return Ok(None),
            };
            let lhs = a.sub(&b);
            let rhs = c.mul(&d.sub(&e));
            Ok(lhs.sub(&rhs).cmp_rational(&zero))
        },
        "first-difference comparison",
    )
}

/// Sign of `f(n) - k e^t` for rational `k > 0`, `t`.
fn cmp_f_kexp(f: &BoundSpec, n: u64, k: &Rational, t: &Rational) -> Result<Ordering> {
    if let Some(v) = f.kexp_value(n)? {
        let mut sum = ExpSum::default();
        sum.push_view(1, &v);
        sum.push(-k.clone(), t.clone());
        return sum.sign();
    }
    let zero = Rational::zero();
    adaptive(
        |prec| {
            let e = match f.eval_enclosure(n, prec)? {
                Some(e) => e,
                None => return Ok(None),
            };
            let thr = if t.is_zero() {
                Enclosure::point(Rational::one())
            } else {
                exp_rational(t, prec)?
            };
            Ok(e.sub(&thr.scale(k)).cmp_rational(&zero))
        },
        "envelope threshold comparison",
    )
}

/// Sign of `f(n)^r - b^n` (used for thresholds of the form `b^{n/r}`).
fn cmp_f_pow(f: &BoundSpec, n: u64, r: u32, b: &Rational) -> Result<Ordering> {
    let bn = pow_rational(b, n);
    if let Some(v) = f.eval_exact(n)? {
        return Ok(pow_rational(&v, r as u64).cmp(&bn));
    }
    if let Some((k, t)) = f.kexp_value(n)? {
        // (k e^t)^r = k^r e^{rt}.
        let mut sum = ExpSum::default();
        sum.push(
            pow_rational(&k, r as u64),
            &t * Rational::from_integer(r.into()),
        );
        sum.push(-bn, Rational::zero());
        return sum.sign();
    }
    adaptive(
        |prec| {
            let e = match f.eval_enclosure(n, prec)? {
                Some(e) => e,
                None => return Ok(None),
            };
            if e.hi().is_negative() {
                // f(n) < 0 < b^{n/r}: the threshold comparison fails.
                return Ok(Some(Ordering::Less));
            }
            if e.lo().is_negative() {
                return Ok(None);
            }
            Ok(e.pow_nonneg(r as u64).cmp_rational(&bn))
        },
        "root-threshold comparison",
    )
}

/// The growth-constant threshold used by the envelope condition:
/// compare `f(n)` against `k e^{t n}` or `b^{n/r}`.
enum Threshold {
    Exp { t: Rational },
    Root { base: Rational, root: u32 },
}

fn threshold_for(f: &BoundSpec) -> Result<Option<(Threshold, String)>> {
    if let Some(kind) = f.analytic_e0() {
        return Ok(Some(match kind {
            E0Kind::ExactValue(t) => {
                let d = format!("exp({} n), exact growth constant", rational_to_text(&t));
                (Threshold::Exp { t }, d)
            }
            E0Kind::LnRationalRoot { base, root } => {
                let d = if root == 1 {
                    format!("{}^n, exact growth constant", rational_to_text(&base))
                } else {
                    format!("{}^(n/{root}), exact growth constant", rational_to_text(&base))
                };
                (Threshold::Root { base, root }, d)
            }
            E0Kind::LnRecurrenceRoot { .. } => {
                // Use the lower end of the certified enclosure; the
                // check is then conservative by the enclosure width
                // (at most 1e-12 here).
                let tol = Rational::new(1.into(), num_bigint::BigInt::from(10u64.pow(12)));
                let enc = analytic_enclosure(&kind, &tol)?;
                let t = enc.lo().clone();
                let d = format!(
                    "exp(L n), L >= {} certified (dominant recurrence root)",
                    rational_to_text(&t)
                );
                (Threshold::Exp { t }, d)
            }
        }));
    }
    // No analytic constant: fall back to a certified envelope rate,
    // which lower-bounds the growth constant.
    match f.envelope_cert()? {
        Some(cert) => {
            let d = format!(
                "certified envelope rate {} (lower bound on the growth constant)",
                cert.rate.describe()
            );
            let thr = match cert.rate {
                crate::bounds::envelope::GrowthRate::RationalRoot { base, root } => {
                    Threshold::Root { base, root }
                }
                crate::bounds::envelope::GrowthRate::ExpRational { t } => {
                    Threshold::Exp { t }
                }
            };
            Ok(Some((thr, d)))
        }
        None => Ok(None),
    }
}

/// Checks all conditions for `f` over indices up to `horizon`.
///
/// Scan orders put the smallest total index first, so the reported
/// counterexample is the lexicographically earliest one.
pub fn check_conditions(f: &BoundSpec, horizon: u64) -> Result<ConditionsReport> {
    if horizon < 2 {
        return Err(Error::Domain(String::from("condition horizon must be >= 2")));
    }

    // (i) f(n) >= n+1 and f strictly increasing.
    let mut cstar_i = ConditionOutcome::Pass;
    for n in 0..=horizon {
        let lin = Rational::from_integer((n + 1).into());
        if cmp_f_kexp(f, n, &lin, &Rational::zero())? == Ordering::Less {
            cstar_i = ConditionOutcome::FailAt { n, m: None };
            break;
        }
        if n > 0 && cmp_f_f(f, n, n - 1)? != Ordering::Greater {
            cstar_i = ConditionOutcome::FailAt { n, m: None };
            break;
        }
    }

    // (ii) f(n+m) <= f(n) f(m), scanned by total s = n+m.
    let mut cstar_ii = ConditionOutcome::Pass;
    'outer: for s in 2..=horizon {
        for n in 1..=s / 2 {
            let m = s - n;
            if cmp_f_prod(f, s, n, m)? == Ordering::Greater {
                cstar_ii = ConditionOutcome::FailAt { n, m: Some(m) };
                break 'outer;
            }
        }
    }

    // First-difference condition over all (n, m) with n+m+1 <= horizon.
    let mut cassaigne = ConditionOutcome::Pass;
    'outer2: for s in 0..horizon {
        for n in 0..=s {
            let m = s - n;
            if cmp_first_difference(f, n, m)? == Ordering::Greater {
                cassaigne = ConditionOutcome::FailAt { n, m: Some(m) };
                break 'outer2;
            }
        }
    }

    // Envelope condition f(n) >= exp(E0 n).
    let (envelope, e0_used) = match threshold_for(f)? {
        None => (
            ConditionOutcome::Skipped(String::from(
                "no certified growth constant available for this form",
            )),
            None,
        ),
        Some((thr, desc)) => {
            let mut out = ConditionOutcome::Pass;
            for n in 1..=horizon {
                let ord = match &thr {
                    Threshold::Exp { t } => {
                        let tn = t * Rational::from_integer(n.into());
                        cmp_f_kexp(f, n, &Rational::one(), &tn)?
                    }
                    Threshold::Root { base, root } => cmp_f_pow(f, n, *root, base)?,
                };
                if ord == Ordering::Less {
                    out = ConditionOutcome::FailAt { n, m: None };
                    break;
                }
            }
            (out, Some(desc))
        }
    };

    Ok(ConditionsReport {
        horizon,
        cstar_i,
        cstar_ii,
        cassaigne,
        envelope,
        e0_used,
    })
}

/// How the tail `inf_{k >= n} floor(f(k))` is justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    /// The caller asserts `f` is non-decreasing, so the infimum over
    /// `k >= n` is attained at `k = n`.
    Declared,
    /// Scan floors out to this horizon and take suffix minima; the
    /// result is valid provided `f` attains its tail infimum there.
    ScanTo(u64),
}

/// Evidence recorded for the tail infimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailEvidence {
    DeclaredMonotone,
    ScannedTo(u64),
}

/// A regularized bound: non-decreasing integer values satisfying
/// submultiplicativity, plus the strictly-increasing rational repair.
#[derive(Debug, Clone)]
pub struct Regularized {
    /// `t(0) = 1`, `t(1) = floor(f(1))`,
    /// `t(n) = min{inf_{k>=n} floor(f(k)), min_{0<k<n} t(k) t(n-k)}`.
    pub tilde: Vec<BigUint>,
    /// `t(n) + n/(n+1)`: strictly increasing and still submultiplicative.
    pub tilde_tilde: Vec<Rational>,
    pub evidence: TailEvidence,
}

/// Regularizes `f` on `0..=n_max`.
///
/// Requires `f(n) >= 1` on the scanned range (intended for bounds with
/// `f(n) >= n+1`). The construction forces submultiplicativity — every
/// split product participates in the minimum — and the result is
/// re-verified before returning.
pub fn regularize(f: &BoundSpec, n_max: u64, tail: Monotonicity) -> Result<Regularized> {
    if n_max < 1 {
        return Err(Error::Domain(String::from("regularization needs n_max >= 1")));
    }
    let (scan_to, evidence) = match tail {
        Monotonicity::Declared => (n_max, TailEvidence::DeclaredMonotone),
        Monotonicity::ScanTo(h) => {
            if h < n_max {
                return Err(Error::Domain(format!(
                    "scan horizon {h} is below the requested range {n_max}"
                )));
            }
            (h, TailEvidence::ScannedTo(h))
        }
    };

    let floors = f.floor_table(scan_to)?;
    for (k, v) in floors.iter().enumerate().skip(1) {
        if v.is_zero() {
            return Err(Error::Domain(format!(
                "regularization requires f(n) >= 1; floor(f({k})) = 0"
            )));
        }
    }

    // inf_{k >= n} floor(f(k)) on the scanned range.
    let n_max_us = n_max as usize;
    let mut tail_inf: Vec<BigUint> = vec![BigUint::ZERO; n_max_us + 1];
    match tail {
        Monotonicity::Declared => {
            tail_inf[..=n_max_us].clone_from_slice(&floors[..=n_max_us]);
        }
        Monotonicity::ScanTo(_) => {
            let mut running = floors.last().expect("nonempty").clone();
            let mut suffix = vec![BigUint::ZERO; floors.len()];
            for k in (0..floors.len()).rev() {
                running = running.min(floors[k].clone());
                suffix[k] = running.clone();
            }
            tail_inf[..=n_max_us].clone_from_slice(&suffix[..=n_max_us]);
        }
    }

    let mut tilde: Vec<BigUint> = Vec::with_capacity(n_max_us + 1);
    tilde.push(BigUint::from(1u8));
    tilde.push(floors[1].clone());
    for n in 2..=n_max_us {
        let mut best = tail_inf[n].clone();
        for k in 1..n {
            let prod = &tilde[k] * &tilde[n - k];
            if prod < best {
                best = prod;
            }
        }
        tilde.push(best);
    }

    // Verification pass: submultiplicativity holds by construction;
    // this check guards the implementation, not the mathematics.
    for n in 1..=n_max_us {
        for m in 1..=n_max_us - n {
            if tilde[n + m] > &tilde[n] * &tilde[m] {
                return Err(Error::Certificate(format!(
                    "regularized table violates submultiplicativity at ({n}, {m})"
                )));
            }
        }
    }

    let tilde_tilde = tilde
        .iter()
        .enumerate()
        .map(|(n, t)| {
            let n = n as u64;
            Rational::from_integer(t.clone().into())
                + Rational::new(n.into(), (n + 1).into())
        })
        .collect();

    Ok(Regularized { tilde, tilde_tilde, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::spec::{parse_bound, LogParam, TailRule};
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn golden_satisfies_growth_conditions() {
        let f = BoundSpec::golden();
        let r = check_conditions(&f, 64).unwrap();
        assert_eq!(r.cstar_i, ConditionOutcome::Pass);
        assert_eq!(r.cstar_ii, ConditionOutcome::Pass);
        assert_eq!(r.envelope, ConditionOutcome::Pass);
        // The first-difference condition is genuinely independent:
        // f(3)-f(2) = 3 > f(1)(f(2)-f(1)) = 2.
        assert_eq!(r.cassaigne, ConditionOutcome::FailAt { n: 1, m: Some(1) });
    }

    #[test]
    fn cassaigne_satisfies_everything() {
        let f = BoundSpec::cassaigne();
        let r = check_conditions(&f, 64).unwrap();
        assert_eq!(r.cstar_i, ConditionOutcome::Pass);
        assert_eq!(r.cstar_ii, ConditionOutcome::Pass);
        assert_eq!(r.cassaigne, ConditionOutcome::Pass);
        assert_eq!(r.envelope, ConditionOutcome::Pass);
        assert!(r.no_failures());
    }

    #[test]
    fn staircase_fails_submultiplicativity() {
        // theta^{n0} far above n0+q-1 breaks f(1+4) <= f(1) f(4):
        // 32 > 2 * 5.
        let f = BoundSpec::theta_staircase(2, rat(2, 1), 4).unwrap();
        let r = check_conditions(&f, 64).unwrap();
        assert_eq!(r.cstar_ii, ConditionOutcome::FailAt { n: 1, m: Some(4) });
        // And the values dip below the exponential envelope:
        // f(2) = 3 < 2^2.
        assert_eq!(r.envelope, ConditionOutcome::FailAt { n: 2, m: None });
    }

    #[test]
    fn prop6_envelope_passes_exactly() {
        // Rational c: values in the exponential regime are e^{cn};
        // equalities are decided through the exact k*e^t views.
        let f = BoundSpec::prop6_envelope(LogParam::Rational(rat(3, 10))).unwrap();
        let r = check_conditions(&f, 48).unwrap();
        assert_eq!(r.cstar_i, ConditionOutcome::Pass);
        assert_eq!(r.cstar_ii, ConditionOutcome::Pass);
        assert_eq!(r.envelope, ConditionOutcome::Pass);
        assert!(r.e0_used.unwrap().contains("3/10"));
    }

    #[test]
    fn prop6_symbolic_log_passes() {
        let f = BoundSpec::prop6_envelope(LogParam::parse("log(2)").unwrap()).unwrap();
        let r = check_conditions(&f, 32).unwrap();
        assert_eq!(r.cstar_i, ConditionOutcome::Pass);
        assert_eq!(r.cstar_ii, ConditionOutcome::Pass);
        assert_eq!(r.envelope, ConditionOutcome::Pass);
    }

    #[test]
    fn decreasing_bound_fails_cstar_i() {
        let f = BoundSpec::table(
            vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(3, 1)],
            TailRule::Hold,
        )
        .unwrap();
        let r = check_conditions(&f, 8).unwrap();
        // f(3) = f(2) breaks strict growth first at n = 3.
        assert_eq!(r.cstar_i, ConditionOutcome::FailAt { n: 3, m: None });
    }

    #[test]
    fn regularize_monotone_keeps_floor_at_one() {
        let f = parse_bound("n+2").unwrap();
        let r = regularize(&f, 8, Monotonicity::Declared).unwrap();
        assert_eq!(r.tilde[1], BigUint::from(3u8));
        assert_eq!(r.evidence, TailEvidence::DeclaredMonotone);
    }

    #[test]
    fn regularize_power_is_fixed_point() {
        // 2^n: split products tie with the tail floor, so the table is
        // unchanged.
        let f = parse_bound("2^n").unwrap();
        let r = regularize(&f, 12, Monotonicity::Declared).unwrap();
        for n in 0..=12u32 {
            assert_eq!(r.tilde[n as usize], BigUint::from(2u8).pow(n));
        }
        // And the strictly-increasing repair adds n/(n+1).
        assert_eq!(r.tilde_tilde[3], rat(8 * 4 + 3, 4));
    }

    #[test]
    fn regularize_clips_spike() {
        // f = n+2 except f(3) = 100 with a monotone tail: the spike is
        // clipped by the tail infimum 6, not by split products (12).
        let mut vals: Vec<Rational> = (0..=8).map(|n| rat(n + 2, 1)).collect();
        vals[3] = rat(100, 1);
        let f = BoundSpec::table(vals, TailRule::Hold).unwrap();
        let r = regularize(&f, 8, Monotonicity::ScanTo(8)).unwrap();
        assert_eq!(r.tilde[3], BigUint::from(6u8));
        assert_eq!(r.evidence, TailEvidence::ScannedTo(8));
    }

    #[test]
    fn regularize_scan_horizon_must_cover_range() {
        let f = parse_bound("n+2").unwrap();
        assert!(matches!(
            regularize(&f, 8, Monotonicity::ScanTo(4)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn regularized_tables_are_submultiplicative() {
        // The verification pass plus a re-check through the public
        // condition scanner on the rational repair.
        let mut vals: Vec<Rational> = (0..=10).map(|n| rat(n + 2, 1)).collect();
        vals[4] = rat(77, 1);
        vals[7] = rat(500, 1);
        let f = BoundSpec::table(vals, TailRule::Hold).unwrap();
        let r = regularize(&f, 10, Monotonicity::ScanTo(10)).unwrap();
        let g = BoundSpec::table(r.tilde_tilde.clone(), TailRule::Hold).unwrap();
        let rep = check_conditions(&g, 10).unwrap();
        assert_eq!(rep.cstar_ii, ConditionOutcome::Pass);
    }
}
