//! Integer roots and certified real roots of integer polynomials.

use super::Enclosure;
use crate::error::{Error, Result};
use crate::Rational;
use alloc::format;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// `floor(n^(1/r))` for non-negative `n`, exact.
pub fn integer_root_floor(n: &BigUint, r: u32) -> BigUint {
    assert!(r >= 1);
    n.nth_root(r)
}

/// Certified enclosure of `x^(1/r)` for a non-negative rational `x`.
///
/// Uses that `floor(y^(1/r)) = floor(floor(y)^(1/r))` for real `y >= 0`,
/// so the scaled integer root gives a one-ulp bracket at scale `2^-prec`.
/// The result is a point enclosure whenever `x` is an exact `r`-th power
/// of a dyadic rational.
pub fn root_enclosure(x: &Rational, r: u32, prec: u32) -> Result<Enclosure> {
    if x.is_negative() {
        return Err(Error::Domain(format!("{r}-th root of negative value")));
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    // floor(x * 2^(r*prec)) = floor(num << (r*prec) / den)
    let scaled = (num << (r as u64 * prec as u64)) / den;
    let m = scaled.nth_root(r);
    let lo = Rational::new(
        BigInt::from(m.clone()),
        BigInt::one() << prec,
    );
    // Exactness check: m^r * den == num << (r*prec) means the root is the
    // dyadic rational m * 2^-prec itself.
    if m.pow(r) * den == (num << (r as u64 * prec as u64)) {
        return Ok(Enclosure::point(lo));
    }
    let hi = Rational::new(
        BigInt::from(m + BigUint::one()),
        BigInt::one() << prec,
    );
    Ok(Enclosure::new(lo, hi))
}

/// Evaluates an integer polynomial `c0 + c1 x + ... + cd x^d` at a rational.
pub fn eval_poly(coeffs: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc
}

/// Certified real root of an integer polynomial by exact bisection.
///
/// Requires a sign change (in the weak sense: one endpoint may be a root)
/// on `[lo, hi]`; returns an enclosure of width at most `tol` containing a
/// root. Exact rational roots collapse to point enclosures.
pub fn real_root(
    coeffs: &[BigInt],
    lo: Rational,
    hi: Rational,
    tol: &Rational,
) -> Result<Enclosure> {
    if lo > hi {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    if !tol.is_positive() {
        return Err(Error::Domain(format!("non-positive tolerance {tol}")));
    }
    let flo = eval_poly(coeffs, &lo);
    let fhi = eval_poly(coeffs, &hi);
    if flo.is_zero() {
        return Ok(Enclosure::point(lo));
    }
    if fhi.is_zero() {
        return Ok(Enclosure::point(hi));
    }
    if flo.is_positive() == fhi.is_positive() {
        return Err(Error::NoSignChange);
    }
    let neg_left = flo.is_negative();
    let mut a = lo;
    let mut b = hi;
    while &(&b - &a) > tol {
        let mid = (&a + &b) / Rational::from_integer(BigInt::from(2));
        let fm = eval_poly(coeffs, &mid);
        if fm.is_zero() {
            return Ok(Enclosure::point(mid));
        }
        if fm.is_negative() == neg_left {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Enclosure::new(a, b))
}

/// Largest real root of `x^d - c1 x^(d-1) - ... - cd` for non-negative
/// integer weights `c` (the characteristic polynomial of a non-negative
/// linear recurrence), bracketed to `tol`.
pub fn dominant_recurrence_root(
    weights: &[BigUint],
    tol: &Rational,
) -> Result<Enclosure> {
    if weights.is_empty() || weights.iter().all(|w| w.is_zero()) {
        return Err(Error::Domain(format!(
            "recurrence needs a positive weight"
        )));
    }
    // coeffs ascending: -c_d, ..., -c_1, then 1 for x^d.
    let mut coeffs: Vec<BigInt> = weights
        .iter()
        .rev()
        .map(|w| -BigInt::from(w.clone()))
        .collect();
    coeffs.push(BigInt::one());
    // Root is in (0, 1 + sum(c)]: for x > 1 + sum(c),
    // x^d > sum(c) max(1, x^(d-1)) >= sum of the other terms.
    let mut upper = BigInt::one();
    for w in weights {
        upper += BigInt::from(w.clone());
    }
    let lo = Rational::new(BigInt::one(), BigInt::from(1u32 << 8));
    let hi = Rational::from_integer(upper);
    // The polynomial is negative at 0+ (value -c_d <= 0; if c_d = 0 divide
    // down implicitly: x^k factors do not affect the dominant root since
    // some weight is positive, giving p(eps) < 0 for small eps > 0 anyway
    // unless all low weights vanish; nudge by scanning for a negative
    // point).
    let mut a = lo;
    let one = Rational::one();
    let mut guard = 0;
    while !eval_poly(&coeffs, &a).is_negative() {
        a = &a + &one;
        guard += 1;
        if Rational::from_integer(BigInt::from(guard)) > hi {
            return Err(Error::NoSignChange);
        }
    }
    real_root(&coeffs, a, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::rational_from_f64;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root_floor(&BigUint::from(26u32), 3), BigUint::from(2u32));
        assert_eq!(integer_root_floor(&BigUint::from(27u32), 3), BigUint::from(3u32));
        let n = BigUint::from(3u32).pow(29);
        let r = integer_root_floor(&n, 2);
        assert!(&r * &r <= n);
        let r1 = &r + BigUint::one();
        assert!(&r1 * &r1 > n);
    }

    #[test]
    fn sqrt3_enclosure() {
        let e = root_enclosure(&rat(3, 1), 2, 100).unwrap();
        let s3 = 1.7320508075688772f64;
        assert!(e.lo_f64() <= s3 && s3 <= e.hi_f64());
        assert!(e.width() <= rat(1, 1) / Rational::from_integer(BigInt::one() << 99));
        // Exact dyadic root: (9/4)^(1/2) = 3/2.
        let e = root_enclosure(&rat(9, 4), 2, 16).unwrap();
        assert!(e.is_point());
        assert_eq!(e.lo(), &rat(3, 2));
    }

    #[test]
    fn golden_ratio_root() {
        // x^2 - x - 1
        let coeffs = [BigInt::from(-1), BigInt::from(-1), BigInt::from(1)];
        let tol = rational_from_f64(1e-15).unwrap();
        let e = real_root(&coeffs, rat(1, 1), rat(2, 1), &tol).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!(e.lo_f64() <= phi && phi <= e.hi_f64());
        assert!(e.width() <= tol);
    }

    #[test]
    fn exact_rational_root_found() {
        // (2x - 3)(x + 1) = 2x^2 - x - 3, root 3/2 hit exactly by bisection
        // from [1, 2].
        let coeffs = [BigInt::from(-3), BigInt::from(-1), BigInt::from(2)];
        let e = real_root(&coeffs, rat(1, 1), rat(2, 1), &rat(1, 1 << 20)).unwrap();
        assert!(e.is_point());
        assert_eq!(e.lo(), &rat(3, 2));
    }

    #[test]
    fn tribonacci_root() {
        let w = [BigUint::one(), BigUint::one(), BigUint::one()];
        let e = dominant_recurrence_root(&w, &rat(1, 1 << 40)).unwrap();
        let t = 1.8392867552141612f64;
        assert!(e.lo_f64() <= t && t <= e.hi_f64());
    }

    #[test]
    fn no_sign_change() {
        let coeffs = [BigInt::from(1), BigInt::from(0), BigInt::from(1)]; // x^2+1
        assert_eq!(
            real_root(&coeffs, rat(0, 1), rat(1, 1), &rat(1, 100)).unwrap_err(),
            Error::NoSignChange
        );
    }
}
