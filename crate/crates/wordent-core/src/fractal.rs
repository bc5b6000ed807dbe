//! Digit sets of complexity-bounded words and their box dimensions.
//!
//! A real `x` in `[0, 1)` is identified with its base-`q` digit stream
//! `w(x)` through `x = sum w_i / q^{i+1}`, with `q`-adic rationals taking
//! the expansion ending in `0^infinity`. The digit set of a bound `f`
//! collects the reals whose stream satisfies the complexity bound; its
//! Hausdorff and upper-box dimensions coincide and equal the word
//! entropy divided by `log q`, so an entropy bracket converts directly
//! into a dimension bracket.
//!
//! Depth-`n` block intervals (length `q^{-n}`) correspond to digit
//! cylinders, so the enumerated slice doubles as a box count: `|S_n|`
//! intervals of size `q^{-n}` cover the digit set. The classical Moran
//! equation `sum q^{-r_j lambda} = 1` for a cover by block intervals of
//! depths `r_j` is solved exactly in `y = q^{-lambda}` (an integer
//! polynomial) and transported back through certified logarithms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::certified::{adaptive, ln_rational, real_root, Enclosure};
use crate::engine::{EntropyBracket, Slice};
use crate::error::{Error, Result};
use crate::Rational;

/// A real in `[0, 1)` carried as a finite prefix of its digit stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitReal {
    base: u32,
    digits: Vec<u8>,
}

impl DigitReal {
    /// The first `n` digits of `x` in base `q`, by exact rational
    /// arithmetic. `q`-adic rationals terminate in zeros.
    pub fn from_value(x: &Rational, q: u32, n: usize) -> Result<DigitReal> {
        check_base(q)?;
        if x.is_negative() || x >= &Rational::one() {
            return Err(Error::Domain(format!(
                "digit expansions live on [0, 1); got {x}"
            )));
        }
        let q_rat = Rational::from_integer(BigInt::from(q));
        let mut rest = x.clone();
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            rest *= &q_rat;
            let d = rest.floor();
            rest -= &d;
            let d = d.to_integer().to_u8().expect("digit below the base");
            digits.push(d);
        }
        Ok(DigitReal { base: q, digits })
    }

    pub fn from_digits(q: u32, digits: Vec<u8>) -> Result<DigitReal> {
        check_base(q)?;
        if let Some(&bad) = digits.iter().find(|&&d| u32::from(d) >= q) {
            return Err(Error::Domain(format!("digit {bad} outside base {q}")));
        }
        Ok(DigitReal { base: q, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The exact value of the stored prefix, `sum w_i / q^{i+1}`.
    pub fn value(&self) -> Rational {
        let q = BigInt::from(self.base);
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * &q + BigInt::from(d);
        }
        let den = pow_bigint(&q, self.digits.len());
        Rational::new(num, den)
    }

    /// Two-sided bounds on every real whose stream extends this prefix:
    /// the truncation error of `n` digits is below `q^{-n}`.
    pub fn value_enclosure(&self) -> Enclosure {
        let v = self.value();
        let err = Rational::new(
            BigInt::one(),
            pow_bigint(&BigInt::from(self.base), self.digits.len()),
        );
        Enclosure::new(v.clone(), v + err)
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (i, &d) in self.digits.iter().enumerate() {
            if self.base > 10 && i > 0 {
                out.push(',');
            }
            if d < 10 {
                out.push((b'0' + d) as char);
            } else {
                out.push((b'a' + (d - 10)) as char);
            }
        }
        out
    }
}

fn check_base(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::BadAlphabet(format!("base {q} below 2")));
    }
    Ok(())
}

fn pow_bigint(base: &BigInt, exp: usize) -> BigInt {
    let mut out = BigInt::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// The shift map on digit streams seen on values: `psi(x) = {q x}`,
/// the fractional part of `q x`.
pub fn shift_apply(x: &Rational, q: u32) -> Result<Rational> {
    check_base(q)?;
    if x.is_negative() || x > &Rational::one() {
        return Err(Error::Domain(format!("shift domain is [0, 1]; got {x}")));
    }
    let scaled = x * Rational::from_integer(BigInt::from(q));
    Ok(&scaled - scaled.floor())
}

/// Number of depth-`n` block intervals (base-`q` cylinders) meeting the
/// enumerated superset of the digit set: exactly `|S_n|`. An over-count
/// of the minimal cover, never an under-count.
pub fn box_count(slice: &Slice, n: usize) -> Result<BigUint> {
    slice
        .count_at(n)
        .map(BigUint::from)
        .ok_or_else(|| Error::Budget(format!("slice does not reach depth {n}")))
}

/// A dimension bracket for the digit set of a bound.
#[derive(Debug, Clone)]
pub struct DimensionReport {
    /// Base of the digit expansion.
    pub q: u32,
    /// Certified lower bound on the Hausdorff (= upper-box) dimension.
    pub dim_lower: Enclosure,
    /// Upper bound from the box counts of the slice.
    pub dim_upper: Enclosure,
    /// Whether the lower bound is backed by a subsystem certificate.
    pub certified: bool,
    pub notes: Vec<String>,
}

/// Converts an entropy bracket into a dimension bracket by dividing
/// both sides by `log q`, clamped into `[0, 1]`.
pub fn dimension_report(
    bracket: &EntropyBracket,
    tol: &Rational,
) -> Result<DimensionReport> {
    let q = u32::from(bracket.slice.alphabet().size());
    let dim_lower = divide_by_log(&bracket.lower, q, tol)?;
    let dim_upper = divide_by_log(&bracket.upper.value, q, tol)?;
    let mut notes = Vec::new();
    notes.push(String::from(
        "Hausdorff and upper-box dimensions of the digit set coincide; \
         one bracket serves both",
    ));
    notes.push(if bracket.certified {
        String::from("lower bound backed by a replayable subsystem certificate")
    } else {
        String::from("no certificate found; lower bound is the trivial zero")
    });
    Ok(DimensionReport {
        q,
        dim_lower,
        dim_upper,
        certified: bracket.certified,
        notes,
    })
}

/// `value / log q` as an enclosure of width at most `tol`, clamped into
/// `[0, 1]` (sound: dimensions of subsets of `[0, 1]` live there).
fn divide_by_log(value: &Enclosure, q: u32, tol: &Rational) -> Result<Enclosure> {
    check_base(q)?;
    if !tol.is_positive() {
        return Err(Error::Domain(format!("non-positive tolerance {tol}")));
    }
    let q_rat = Rational::from_integer(BigInt::from(q));
    adaptive(
        |prec| {
            let den = ln_rational(&q_rat, prec)?;
            // Denominator is positive; the numerator may straddle zero,
            // so take the extreme quotient on each side.
            let lo = (value.lo() / den.lo()).min(value.lo() / den.hi());
            let hi = (value.hi() / den.lo()).max(value.hi() / den.hi());
            let zero = Rational::zero();
            let one = Rational::one();
            let lo = lo.max(zero.clone()).min(one.clone());
            let hi = hi.max(zero).min(one);
            let enc = Enclosure::new(lo, hi);
            Ok((enc.width() <= *tol).then_some(enc))
        },
        "dimension quotient",
    )
}

/// A cover of `[0, 1]` by block intervals, recorded by their depths:
/// the `j`-th interval has length `q^{-r_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCover {
    depths: Vec<u32>,
}

impl BlockCover {
    pub fn new(depths: Vec<u32>) -> Result<BlockCover> {
        if depths.is_empty() {
            return Err(Error::DegenerateCover(String::from(
                "cover needs at least one block interval",
            )));
        }
        Ok(BlockCover { depths })
    }

    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> =
            self.depths.iter().map(|d| format!("{d}")).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Solves the Moran equation `sum_j q^{-r_j lambda} = 1` for the cover's
/// similarity exponent, to an enclosure of width at most `tol`.
///
/// The substitution `y = q^{-lambda}` turns the equation into the
/// integer polynomial `sum_j y^{r_j} = 1`, monotone on `(0, 1)`; the
/// root is bracketed exactly and mapped back through certified
/// logarithms. Degenerate covers resolve at the boundaries: a single
/// proper interval pins `lambda = 0`; any depth-0 interval already
/// covers everything, pinning `lambda = 1`.
pub fn moran_root(cover: &BlockCover, q: u32, tol: &Rational) -> Result<Enclosure> {
    check_base(q)?;
    if !tol.is_positive() {
        return Err(Error::Domain(format!("non-positive tolerance {tol}")));
    }
    if cover.depths().contains(&0) {
        return Ok(Enclosure::point(Rational::one()));
    }
    if cover.depths().len() == 1 {
        return Ok(Enclosure::point(Rational::zero()));
    }
    // Coefficients of sum_j y^{r_j} - 1, ascending powers.
    let max_depth = *cover.depths().iter().max().expect("non-empty cover") as usize;
    let mut coeffs = alloc::vec![BigInt::zero(); max_depth + 1];
    coeffs[0] = -BigInt::one();
    for &r in cover.depths() {
        coeffs[r as usize] += BigInt::one();
    }
    let q_rat = Rational::from_integer(BigInt::from(q));
    adaptive(
        |prec| {
            let root_tol = Rational::new(BigInt::one(), BigInt::one() << prec);
            let y = real_root(&coeffs, Rational::zero(), Rational::one(), &root_tol)?;
            if !y.lo().is_positive() {
                // Tighten until the enclosure clears zero.
                return Ok(None);
            }
            // lambda = log(1/y) / log(q), decreasing in y.
            let inv_lo = y.hi().recip();
            let inv_hi = y.lo().recip();
            let num_lo = ln_rational(&inv_lo, prec)?;
            let num_hi = ln_rational(&inv_hi, prec)?;
            let den = ln_rational(&q_rat, prec)?;
            let lo = (num_lo.lo() / den.hi()).max(Rational::zero());
            let hi = num_hi.hi() / den.lo();
            if lo > hi {
                return Ok(None);
            }
            let enc = Enclosure::new(lo, hi);
            Ok((enc.width() <= *tol).then_some(enc))
        },
        "moran exponent",
    )
}

/// Result of auditing the canonical depth-`n` covers against the mass
/// inequality of the dimension lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverAudit {
    pub s: Rational,
    pub depth: usize,
    /// Whether `|S_n| * q^{-n s} >= q^{-s} / 2` held for every audited
    /// `n`, decided exactly on integers.
    pub passes: bool,
    /// The first depth where the inequality failed.
    pub first_failure: Option<usize>,
}

impl CoverAudit {
    pub fn describe(&self) -> String {
        match (self.passes, self.first_failure) {
            (true, _) => format!(
                "mass inequality holds at exponent {} through depth {}",
                self.s, self.depth
            ),
            (false, Some(n)) => format!(
                "mass inequality fails at exponent {} first at depth {n}",
                self.s
            ),
            (false, None) => unreachable!("failed audits record the depth"),
        }
    }
}

/// Checks `|S_n| * (q^{-n})^s >= q^{-s} / 2` for every `1 <= n <= depth`
/// on the enumerated slice: the finite cover estimate behind the
/// dimension lower bound, decided exactly. With `s = a/b` the test is
/// `(2 |S_n|)^b >= q^{a (n-1)}` in integers.
pub fn cover_audit(slice: &Slice, s: &Rational, depth: usize) -> Result<CoverAudit> {
    if s.is_negative() {
        return Err(Error::Domain(format!("audit exponent {s} below zero")));
    }
    if depth > slice.completed() {
        return Err(Error::Budget(format!(
            "slice reaches depth {}, audit wants {depth}",
            slice.completed()
        )));
    }
    let a = s.numer().magnitude().to_u64().ok_or_else(|| {
        Error::Domain(String::from("audit exponent numerator too large"))
    })?;
    let b = s.denom().magnitude().to_u32().ok_or_else(|| {
        Error::Domain(String::from("audit exponent denominator too large"))
    })?;
    let q = BigUint::from(u32::from(slice.alphabet().size()));
    let mut first_failure = None;
    for n in 1..=depth {
        let count = slice.count_at(n).expect("audited depth is enumerated");
        let doubled = BigUint::from(count) * 2u32;
        let exp = a
            .checked_mul(n as u64 - 1)
            .and_then(|e| u32::try_from(e).ok())
            .ok_or_else(|| {
                Error::Budget(String::from("audit exponent exceeds the power budget"))
            })?;
        if doubled.pow(b) < q.pow(exp) {
            first_failure = Some(n);
            break;
        }
    }
    Ok(CoverAudit {
        s: s.clone(),
        depth,
        passes: first_failure.is_none(),
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_bound;
    use crate::engine::{enumerate_slice, ew_bracket, CertifyOptions, EnumBudget};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tol9() -> Rational {
        rat(1, 1_000_000_000)
    }

    #[test]
    fn digit_expansions_follow_the_terminating_convention() {
        let half = DigitReal::from_value(&rat(1, 2), 2, 8).unwrap();
        assert_eq!(half.digits(), &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(half.value(), rat(1, 2));

        let third = DigitReal::from_value(&rat(1, 3), 2, 10).unwrap();
        assert_eq!(third.digits(), &[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let enc = third.value_enclosure();
        assert!(enc.lo() <= &rat(1, 3) && &rat(1, 3) <= enc.hi());

        // Exact round trips on q-adic rationals.
        let x = rat(5, 8);
        let d = DigitReal::from_value(&x, 2, 3).unwrap();
        assert_eq!(d.digits(), &[1, 0, 1]);
        assert_eq!(d.value(), x);
        let rebuilt = DigitReal::from_digits(2, d.digits().to_vec()).unwrap();
        assert_eq!(rebuilt.value(), x);
    }

    #[test]
    fn periodic_streams_round_trip_within_truncation_error() {
        for (num, den) in [(1i64, 3i64), (1, 5), (1, 7), (2, 7)] {
            let x = rat(num, den);
            let d = DigitReal::from_value(&x, 2, 24).unwrap();
            let enc = d.value_enclosure();
            assert!(enc.lo() <= &x && &x <= enc.hi(), "{num}/{den}");
            assert!(enc.width() <= rat(1, 1 << 24));
        }
        let ten = DigitReal::from_value(&rat(1, 7), 10, 12).unwrap();
        assert_eq!(ten.digits(), &[1, 4, 2, 8, 5, 7, 1, 4, 2, 8, 5, 7]);
        assert_eq!(ten.describe(), "142857142857");
    }

    #[test]
    fn shift_is_the_digit_shift() {
        assert_eq!(shift_apply(&rat(1, 3), 2).unwrap(), rat(2, 3));
        assert_eq!(shift_apply(&rat(2, 3), 2).unwrap(), rat(1, 3));
        assert_eq!(shift_apply(&rat(1, 2), 2).unwrap(), rat(0, 1));
        // psi composed with the value map equals dropping one digit.
        let x = rat(3, 7);
        let shifted = shift_apply(&x, 2).unwrap();
        let d_full = DigitReal::from_value(&x, 2, 12).unwrap();
        let d_shift = DigitReal::from_value(&shifted, 2, 11).unwrap();
        assert_eq!(&d_full.digits()[1..], d_shift.digits());
    }

    #[test]
    fn box_counts_are_the_slice_counts() {
        let spec = parse_bound("preset:golden").unwrap();
        let slice = enumerate_slice(&spec, 6, &EnumBudget::default()).unwrap();
        assert_eq!(box_count(&slice, 5).unwrap(), BigUint::from(28u32));
        assert_eq!(box_count(&slice, 6).unwrap(), BigUint::from(46u32));
        assert!(box_count(&slice, 7).is_err());
    }

    #[test]
    fn moran_root_matches_the_golden_ratio_cover() {
        let cover = BlockCover::new(alloc::vec![1, 2]).unwrap();
        let lambda = moran_root(&cover, 2, &tol9()).unwrap();
        // 2^{-lambda} + 4^{-lambda} = 1 at lambda = log phi / log 2.
        let expected = 0.694_241_913_630_617_3_f64;
        assert!((lambda.lo_f64() - expected).abs() < 1e-8);
        assert!(lambda.width() <= tol9());

        let halves = BlockCover::new(alloc::vec![1, 1]).unwrap();
        let one = moran_root(&halves, 2, &tol9()).unwrap();
        assert!((one.lo_f64() - 1.0).abs() < 1e-9);

        let single = BlockCover::new(alloc::vec![1]).unwrap();
        assert!(moran_root(&single, 2, &tol9()).unwrap().is_point());
        assert_eq!(
            moran_root(&single, 2, &tol9()).unwrap().lo(),
            &Rational::zero()
        );

        let full = BlockCover::new(alloc::vec![0, 3]).unwrap();
        assert_eq!(
            moran_root(&full, 2, &tol9()).unwrap().lo(),
            &Rational::one()
        );

        assert!(BlockCover::new(alloc::vec![]).is_err());
    }

    #[test]
    fn golden_dimension_report_hits_log_phi_over_log_two() {
        let spec = parse_bound("preset:golden").unwrap();
        let bracket = ew_bracket(&spec, &CertifyOptions::default()).unwrap();
        let report = dimension_report(&bracket, &tol9()).unwrap();
        assert!(report.certified);
        assert_eq!(report.q, 2);
        let expected = 0.694_241_913_630_617_3_f64;
        assert!((report.dim_lower.lo_f64() - expected).abs() < 1e-6);
        assert!(report.dim_lower.hi() <= report.dim_upper.hi());
        assert!(report.dim_upper.hi() <= &Rational::one());
        // (1/20) log 35454 / log 2 = 0.7557...
        assert!((report.dim_upper.hi_f64() - 0.755_7).abs() < 1e-3);
    }

    #[test]
    fn cover_audit_flips_across_the_dimension() {
        let spec = parse_bound("preset:golden").unwrap();
        let slice = enumerate_slice(&spec, 20, &EnumBudget::default()).unwrap();

        let below = cover_audit(&slice, &rat(69, 100), 20).unwrap();
        assert!(below.passes, "{}", below.describe());
        assert_eq!(below.first_failure, None);

        let above = cover_audit(&slice, &rat(12, 10), 20).unwrap();
        assert!(!above.passes);
        assert_eq!(above.first_failure, Some(8));

        let zero = cover_audit(&slice, &Rational::zero(), 20).unwrap();
        assert!(zero.passes);

        assert!(cover_audit(&slice, &rat(-1, 2), 20).is_err());
        assert!(cover_audit(&slice, &rat(1, 2), 21).is_err());
    }
}
