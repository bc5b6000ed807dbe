//! Power-series kernels for `ln` and `exp` with rigorous truncation bounds.

use super::{
    div_ceil_big, div_floor_big, fixed_ceil, fixed_floor, from_fixed, Enclosure,
};
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::string::String;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Signed fixed-point interval `[lo, hi] * 2^-prec` used inside kernels.
struct Fx {
    lo: BigInt,
    hi: BigInt,
}

impl Fx {
    fn mul(&self, o: &Fx, prec: u32) -> Fx {
        let cands = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
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
        let scale = BigInt::one() << prec;
        Fx { lo: div_floor_big(&lo, &scale), hi: div_ceil_big(&hi, &scale) }
    }

    fn div_int(&self, k: u64) -> Fx {
        let k = BigInt::from(k);
        Fx { lo: div_floor_big(&self.lo, &k), hi: div_ceil_big(&self.hi, &k) }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn abs_hi(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }
}

/// `atanh` of a fixed-point interval `z` with `0 <= z <= 1/3 + eps`.
///
/// Tail after the `z^(2K+1)` term is below `z^(2K+3) / ((2K+3)(1 - z^2))
/// <= (9/8) z^(2K+3) / (2K+3)`.
fn atanh_kernel(z: Fx, prec: u32) -> Fx {
    let z2 = z.mul(&z, prec);
    let mut term = Fx { lo: z.lo.clone(), hi: z.hi.clone() };
    let mut acc = term.div_int(1);
    let mut k: u64 = 1;
    loop {
        term = term.mul(&z2, prec);
        let contrib = term.div_int(2 * k + 1);
        // Max truncation threshold: stop once the remainder bound fits in
        // a few ulps.
        let tail_hi = &term.abs_hi() * 9u32 / 8u32 / (2 * k + 1);
        acc = acc.add(&contrib);
        if tail_hi <= BigInt::from(4) {
            // Remainder of the alternating-free positive series plus the
            // rounding slack of the last additions.
            acc.hi += tail_hi + 4u32;
            return acc;
        }
        k += 1;
    }
}

/// Natural log of 2 as an enclosure with roughly `prec` significant bits.
pub fn ln2(prec: u32) -> Enclosure {
    // ln 2 = 2 atanh(1/3): z = 1/3 exactly in fixed point.
    let work = prec + 32;
    let scale = BigInt::one() << work;
    let z = Fx {
        lo: div_floor_big(&scale, &BigInt::from(3)),
        hi: div_ceil_big(&scale, &BigInt::from(3)),
    };
    let a = atanh_kernel(z, work);
    Enclosure::new(from_fixed(a.lo * 2, work), from_fixed(a.hi * 2, work))
}

/// Natural log of a positive rational as a certified enclosure.
pub fn ln_rational(x: &Rational, prec: u32) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(String::from("ln of non-positive rational")));
    }
    let work = prec + 32;
    // Normalize x = m * 2^e with m in [1, 2).
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut e: i64 = num.bits() as i64 - den.bits() as i64;
    if e >= 0 {
        den <<= e as u64;
    } else {
        num <<= (-e) as u64;
    }
    // Now num/den in [1/2, 2); fix up to [1, 2).
    if num < den {
        num <<= 1u32;
        e -= 1;
    }
    debug_assert!(num >= den && num < (&den << 1u32));
    // z = (m - 1)/(m + 1) = (num - den)/(num + den) in [0, 1/3).
    let zn = &num - &den;
    let zd = &num + &den;
    let z = Fx {
        lo: div_floor_big(&(&zn << work), &zd),
        hi: div_ceil_big(&(&zn << work), &zd),
    };
    let a = atanh_kernel(z, work);
    let ln_m = Enclosure::new(from_fixed(a.lo * 2, work), from_fixed(a.hi * 2, work));
    if e == 0 {
        return Ok(ln_m);
    }
    let l2 = ln2(work + 16);
    Ok(ln_m.add(&l2.scale(&Rational::from_integer(BigInt::from(e)))))
}

/// `exp` of an exact rational as a certified enclosure.
///
/// The argument is range-reduced by `k = round(x / ln 2)`; the Taylor tail
/// for `|r| <= 0.75` after `J` terms is below `2 |r|^(J+1) / (J+1)!`.
pub fn exp_rational(x: &Rational, prec: u32) -> Result<Enclosure> {
    let work = prec + 40;
    // Crude estimate of x / ln2 is fine: it only centers the reduction.
    let approx = super::rational_to_f64(x) / core::f64::consts::LN_2;
    if !approx.is_finite() || approx.abs() > 1.0e9 {
        return Err(Error::Domain(format!(
            "exp argument too large: ~2^{approx:.3e}"
        )));
    }
    let k = if approx >= 0.0 { (approx + 0.5) as i64 } else { (approx - 0.5) as i64 };
    let l2 = ln2(work + 16);
    let r = Enclosure::point(x.clone())
        .sub(&l2.scale(&Rational::from_integer(BigInt::from(k))));
    debug_assert!(
        r.lo().abs() < Rational::new(BigInt::from(3), BigInt::from(4))
            && r.hi().abs() < Rational::new(BigInt::from(3), BigInt::from(4)),
        "range reduction failed"
    );
    let rf = Fx { lo: fixed_floor(r.lo(), work), hi: fixed_ceil(r.hi(), work) };
    let one = BigInt::one() << work;
    let mut acc = Fx { lo: one.clone(), hi: one.clone() };
    let mut term = Fx { lo: one.clone(), hi: one };
    let mut j: u64 = 1;
    loop {
        term = term.mul(&rf, work).div_int(j);
        acc = acc.add(&term);
        let tail = &term.abs_hi() * 2u32;
        if tail <= BigInt::from(4) {
            acc.hi += tail + 4u32;
            acc.lo -= BigInt::from(8);
            break;
        }
        j += 1;
        if j > 10_000 {
            return Err(Error::PrecisionExhausted(String::from(
                "exp series did not converge",
            )));
        }
    }
    let mut lo = from_fixed(acc.lo, work);
    let mut hi = from_fixed(acc.hi, work);
    if lo.is_negative() {
        lo = Rational::zero();
    }
    // Scale by 2^k exactly.
    let two_k = if k >= 0 {
        Rational::from_integer(BigInt::one() << k as u64)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    };
    lo *= &two_k;
    hi *= &two_k;
    Ok(Enclosure::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::rational_from_f64;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn check_encloses(e: &Enclosure, x: f64, max_width: f64) {
        assert!(e.lo_f64() <= x + 1e-15, "lo {} > {}", e.lo_f64(), x);
        assert!(e.hi_f64() >= x - 1e-15, "hi {} < {}", e.hi_f64(), x);
        assert!(e.width() < rational_from_f64(max_width).unwrap());
    }

    #[test]
    fn ln2_value() {
        let e = ln2(128);
        check_encloses(&e, core::f64::consts::LN_2, 1e-30);
    }

    #[test]
    fn ln_various() {
        for (n, d) in [(3i64, 1i64), (1, 3), (10, 7), (1, 1), (100000, 1), (1, 65536)] {
            let x = rat(n, d);
            let e = ln_rational(&x, 96).unwrap();
            check_encloses(&e, (n as f64 / d as f64).ln(), 1e-24);
        }
    }

    #[test]
    fn exp_various() {
        for (n, d) in [(0i64, 1i64), (1, 1), (-1, 1), (3, 10), (22, 7), (-1, 3), (200, 1)] {
            let x = rat(n, d);
            let e = exp_rational(&x, 96).unwrap();
            let v = (n as f64 / d as f64).exp();
            assert!(e.lo_f64() <= v * (1.0 + 1e-12));
            assert!(e.hi_f64() >= v * (1.0 - 1e-12));
        }
    }

    #[test]
    fn exp_ln_consistency() {
        let x = rat(17, 5);
        let l = ln_rational(&x, 160).unwrap();
        let back_lo = exp_rational(l.lo(), 160).unwrap();
        let back_hi = exp_rational(l.hi(), 160).unwrap();
        assert!(back_lo.lo() <= &x && &x <= back_hi.hi());
        assert!((back_hi.hi() - back_lo.lo()) < rat(1, 1 << 30) * rat(1, 1 << 30));
    }
}
