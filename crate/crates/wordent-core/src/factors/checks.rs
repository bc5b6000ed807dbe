//! Structural validity checks for complexity profiles.

use super::ComplexityProfile;
use crate::error::{Error, Result};
use alloc::format;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Outcome of [`envelope_checks`]; `None` fields mean "no violation".
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeReport {
    /// First `n` with `p(n) > p(n+1)`, if any.
    pub decreasing_at: Option<usize>,
    /// First pair `(n, n')` with `p(n + n') > p(n) p(n')`, if any.
    pub submultiplicative_violation: Option<(usize, usize)>,
    /// First pair `(n0, n)` with `p(n) > p(n0)^ceil(n/n0)`, if any.
    pub power_envelope_violation: Option<(usize, usize)>,
    /// Argmin over `1..=n_max` of `(1/n) log p(n)` (exact comparisons);
    /// ties resolve to the smallest `n`.
    pub fekete_argmin: usize,
    pub passed: bool,
}

/// Checks the inequalities a complexity profile of an infinite word must
/// satisfy, using exact big-integer arithmetic throughout.
pub fn envelope_checks(profile: &ComplexityProfile) -> Result<EnvelopeReport> {
    let p = &profile.counts;
    let n_max = profile.n_max();
    if n_max < 1 {
        return Err(Error::Domain(format!(
            "profile needs n_max >= 1, got {n_max}"
        )));
    }
    if !p[0].is_one() {
        return Err(Error::Domain(format!("p(0) = {} != 1", p[0])));
    }
    if p.iter().any(|c| c.is_zero()) {
        return Err(Error::Domain(format!(
            "zero count in profile; not a profile of an infinite word"
        )));
    }

    let mut decreasing_at = None;
    for n in 0..n_max {
        if p[n] > p[n + 1] {
            decreasing_at = Some(n);
            break;
        }
    }

    let mut submult = None;
    'outer: for n in 1..=n_max {
        for m in n..=n_max {
            if n + m > n_max {
                break;
            }
            if p[n + m] > &p[n] * &p[m] {
                submult = Some((n, m));
                break 'outer;
            }
        }
    }

    let mut power_env = None;
    'outer2: for n0 in 1..=n_max {
        let mut bound = BigUint::one();
        let mut covered = 0usize;
        // bound = p(n0)^k once covered = k * n0 >= n.
        for n in 1..=n_max {
            while covered < n {
                bound *= &p[n0];
                covered += n0;
            }
            if p[n] > bound {
                power_env = Some((n0, n));
                break 'outer2;
            }
        }
    }

    // argmin of (1/n) log p(n): compare p(a)^b vs p(b)^a exactly.
    let mut best = 1usize;
    for n in 2..=n_max {
        let lhs = p[n].pow(best as u32);
        let rhs = p[best].pow(n as u32);
        if lhs < rhs {
            best = n;
        }
    }

    let passed =
        decreasing_at.is_none() && submult.is_none() && power_env.is_none();
    Ok(EnvelopeReport {
        decreasing_at,
        submultiplicative_violation: submult,
        power_envelope_violation: power_env,
        fekete_argmin: best,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factors::ProfileKind;
    use alloc::vec::Vec;

    fn profile_of(counts: &[u64]) -> ComplexityProfile {
        ComplexityProfile {
            counts: counts.iter().map(|&c| BigUint::from(c)).collect(),
            kind: ProfileKind::Exact,
            measured_prefix: None,
        }
    }

    #[test]
    fn fibonacci_counts_pass() {
        let p = profile_of(&[1, 2, 3, 5, 8, 13, 21]);
        let r = envelope_checks(&p).unwrap();
        assert!(r.passed);
        // (1/n) log F_{n+2} decreases toward log phi on this range.
        assert_eq!(r.fekete_argmin, 6);
    }

    #[test]
    fn supermultiplicative_counts_fail_at_1_1() {
        let p = profile_of(&[1, 2, 5]);
        let r = envelope_checks(&p).unwrap();
        assert!(!r.passed);
        assert_eq!(r.submultiplicative_violation, Some((1, 1)));
    }

    #[test]
    fn power_envelope_subsumes_submultiplicativity_here() {
        let p = profile_of(&[1, 2, 5]);
        let r = envelope_checks(&p).unwrap();
        assert_eq!(r.power_envelope_violation, Some((1, 2)));
    }

    #[test]
    fn full_shift_counts() {
        let counts: Vec<u64> = (0..=10u32).map(|n| 1u64 << n).collect();
        let r = envelope_checks(&profile_of(&counts)).unwrap();
        assert!(r.passed);
        assert_eq!(r.fekete_argmin, 1);
    }

    #[test]
    fn decreasing_profile_reported() {
        let p = profile_of(&[1, 3, 2]);
        let r = envelope_checks(&p).unwrap();
        assert_eq!(r.decreasing_at, Some(1));
        assert!(!r.passed);
    }

    #[test]
    fn rejects_zero_and_bad_p0() {
        assert!(envelope_checks(&profile_of(&[1, 2, 0])).is_err());
        assert!(envelope_checks(&profile_of(&[2, 2, 2])).is_err());
    }
}
