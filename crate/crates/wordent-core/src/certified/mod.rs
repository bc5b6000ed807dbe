//! Certified real arithmetic on exact rational enclosures.
//!
//! An [`Enclosure`] is a pair of rationals `lo <= hi` guaranteed to contain
//! the mathematical value. Field operations are exact on the endpoints, so
//! width is introduced only by the transcendental routines, which carry
//! explicit truncation bounds:
//!
//! * `ln m = 2 atanh z` with `z = (m-1)/(m+1)` after reducing `m` to
//!   `[1, 2)`; the series tail is below `z^(2K+3)/((2K+3)(1-z^2))`;
//! * `exp x` by Taylor series after subtracting a multiple of `ln 2`;
//!   the tail is below `2 |r|^(J+1)/(J+1)!` for `|r| < 1`.
//!
//! Comparisons against exact rationals and integer ceilings/floors are
//! decided adaptively: precision doubles until the enclosure separates,
//! failing with [`Error::PrecisionExhausted`] at [`MAX_PREC`] bits. All
//! quantities this crate feeds through here (logs of integers, `e^cn` for
//! dyadic `c`, algebraic roots) are irrational whenever they are not
//! syntactically exact, so the loops terminate.

use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::String;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) mod roots;
pub(crate) mod series;

pub use roots::{dominant_recurrence_root, eval_poly, integer_root_floor, real_root, root_enclosure};
pub use series::{exp_rational, ln2, ln_rational};

/// Starting precision (bits) for adaptive evaluation.
pub const START_PREC: u32 = 64;
/// Hard ceiling for adaptive precision doubling.
pub const MAX_PREC: u32 = 1 << 14;

/// Two-sided rational bounds on a real number.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "inverted enclosure");
        Enclosure { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Enclosure::point(Rational::zero())
    }

    #[inline]
    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn mid_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi)
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        Enclosure::new(lo, hi)
    }

    pub fn scale(&self, k: &Rational) -> Enclosure {
        if k.is_negative() {
            Enclosure::new(&self.hi * k, &self.lo * k)
        } else {
            Enclosure::new(&self.lo * k, &self.hi * k)
        }
    }

    /// Reciprocal; errors when the enclosure straddles zero.
    pub fn recip(&self) -> Result<Enclosure> {
        if self.lo.is_negative() != self.hi.is_negative()
            || self.lo.is_zero()
            || self.hi.is_zero()
        {
            return Err(Error::Domain(String::from(
                "reciprocal of enclosure containing zero",
            )));
        }
        Ok(Enclosure::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, o: &Enclosure) -> Result<Enclosure> {
        Ok(self.mul(&o.recip()?))
    }

    /// `self^k` for a non-negative integer power, assuming `lo >= 0`.
    pub fn pow_nonneg(&self, k: u64) -> Enclosure {
        debug_assert!(!self.lo.is_negative());
        Enclosure::new(pow_rational(&self.lo, k), pow_rational(&self.hi, k))
    }

    /// Natural log of the enclosure; requires `lo > 0`.
    pub fn ln(&self, prec: u32) -> Result<Enclosure> {
        if !self.lo.is_positive() {
            return Err(Error::Domain(String::from("log of non-positive value")));
        }
        let l = ln_rational(&self.lo, prec)?;
        let h = ln_rational(&self.hi, prec)?;
        Ok(Enclosure::new(l.lo, h.hi))
    }

    /// Exponential of the enclosure.
    pub fn exp(&self, prec: u32) -> Result<Enclosure> {
        let l = exp_rational(&self.lo, prec)?;
        let h = exp_rational(&self.hi, prec)?;
        Ok(Enclosure::new(l.lo, h.hi))
    }

    /// Three-way comparison with an exact rational, `None` if undecided.
    pub fn cmp_rational(&self, x: &Rational) -> Option<core::cmp::Ordering> {
        use core::cmp::Ordering::*;
        if &self.hi < x {
            Some(Less)
        } else if &self.lo > x {
            Some(Greater)
        } else if self.is_point() && &self.lo == x {
            Some(Equal)
        } else {
            None
        }
    }

    /// Decides `self < other` / `self > other`; `None` when overlapping.
    pub fn cmp_enclosure(&self, o: &Enclosure) -> Option<core::cmp::Ordering> {
        use core::cmp::Ordering::*;
        if self.hi < o.lo {
            Some(Less)
        } else if self.lo > o.hi {
            Some(Greater)
        } else if self.is_point() && o.is_point() && self.lo == o.lo {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn min(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            self.lo.clone().min(o.lo.clone()),
            self.hi.clone().min(o.hi.clone()),
        )
    }

    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(
            self.lo.clone().max(o.lo.clone()),
            self.hi.clone().max(o.hi.clone()),
        )
    }

    pub fn intersect(&self, o: &Enclosure) -> Option<Enclosure> {
        let lo = self.lo.clone().max(o.lo.clone());
        let hi = self.hi.clone().min(o.hi.clone());
        (lo <= hi).then(|| Enclosure::new(lo, hi))
    }
}

/// Runs `f` at doubling precision until it resolves.
pub fn adaptive<T>(
    mut f: impl FnMut(u32) -> Result<Option<T>>,
    what: &str,
) -> Result<T> {
    let mut prec = START_PREC;
    loop {
        if let Some(t) = f(prec)? {
            return Ok(t);
        }
        if prec >= MAX_PREC {
            return Err(Error::PrecisionExhausted(String::from(what)));
        }
        prec *= 2;
    }
}

/// Adaptive integer ceiling of a real given by an enclosure builder.
pub fn adaptive_ceil(
    mut value: impl FnMut(u32) -> Result<Enclosure>,
    what: &str,
) -> Result<BigInt> {
    adaptive(
        |prec| {
            let e = value(prec)?;
            let cl = e.lo.ceil().to_integer();
            let ch = e.hi.ceil().to_integer();
            Ok((cl == ch).then_some(cl))
        },
        what,
    )
}

/// Adaptive integer floor of a real given by an enclosure builder.
pub fn adaptive_floor(
    mut value: impl FnMut(u32) -> Result<Enclosure>,
    what: &str,
) -> Result<BigInt> {
    adaptive(
        |prec| {
            let e = value(prec)?;
            let fl = e.lo.floor().to_integer();
            let fh = e.hi.floor().to_integer();
            Ok((fl == fh).then_some(fl))
        },
        what,
    )
}

/// Exact rational power with integer exponent.
pub fn pow_rational(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    acc
}

/// The exact rational value of a finite `f64` (every finite `f64` is a
/// dyadic rational).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite float {x}")));
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mant, exp2) = if exponent == 0 {
        (fraction, -1074i64)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let mut num = BigInt::from(mant) * BigInt::from(sign);
    let mut den = BigInt::one();
    if exp2 >= 0 {
        num <<= exp2 as u64;
    } else {
        den <<= (-exp2) as u64;
    }
    Ok(Rational::new(num, den))
}

/// Nearest `f64` for display purposes (not used in any certified path).
/// Delegates to num-rational's correctly rounded conversion.
pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Floor division of signed big integers (rounds toward minus infinity).
pub(crate) fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Ceiling division of signed big integers.
pub(crate) fn div_ceil_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// `floor(x * 2^prec)` for rational `x`.
pub(crate) fn fixed_floor(x: &Rational, prec: u32) -> BigInt {
    div_floor_big(&(x.numer() << prec), x.denom())
}

/// `ceil(x * 2^prec)` for rational `x`.
pub(crate) fn fixed_ceil(x: &Rational, prec: u32) -> BigInt {
    div_ceil_big(&(x.numer() << prec), x.denom())
}

/// Rational `n / 2^prec`.
pub(crate) fn from_fixed(n: BigInt, prec: u32) -> Rational {
    Rational::new(n, BigInt::one() << prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn f64_roundtrip_exact() {
        for x in [0.5, -3.25, 1.0e-12, 12345.678, 0.3] {
            let r = rational_from_f64(x).unwrap();
            assert_eq!(rational_to_f64(&r), x);
        }
        let r = rational_from_f64(0.3).unwrap();
        // 0.3 is not 3/10 as a float; the conversion must be bit-exact.
        assert_ne!(r, rat(3, 10));
    }

    #[test]
    fn enclosure_arith() {
        let a = Enclosure::new(rat(1, 2), rat(2, 3));
        let b = Enclosure::new(rat(-1, 3), rat(1, 4));
        let s = a.add(&b);
        assert_eq!(s.lo, rat(1, 6));
        assert_eq!(s.hi, rat(11, 12));
        let m = a.mul(&b);
        assert_eq!(m.lo, rat(-2, 9));
        assert_eq!(m.hi, rat(1, 6));
        assert!(a.cmp_rational(&rat(1, 3)) == Some(core::cmp::Ordering::Greater));
        assert!(a.cmp_rational(&rat(3, 5)).is_none());
    }

    #[test]
    fn pow_matches_f64() {
        let x = rat(3, 2);
        let p = pow_rational(&x, 10);
        assert_eq!(
            p,
            Rational::from_f64(57.6650390625).unwrap() // (3/2)^10
        );
    }
}
