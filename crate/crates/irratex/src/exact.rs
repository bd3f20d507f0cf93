//! Integer numeric kernels: exact rational-exponent power floors and a
//! certified upper bound for power-sum tails.  No floating point.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_from_biguint, Rat};

/// Environment variable capping the size (in bits) of intermediate big
/// integers produced by the power kernels.  Unset means unlimited.
pub const MAX_BITS_ENV: &str = "IRRATEX_MAX_BITS";

fn max_bits_cap() -> Option<u64> {
    std::env::var(MAX_BITS_ENV).ok().and_then(|v| v.parse::<u64>().ok())
}

/// Errors out when an intermediate of roughly `needed` bits would exceed the
/// configured cap.
pub fn check_bit_budget(needed: u64) -> Result<()> {
    if let Some(cap) = max_bits_cap() {
        if needed > cap {
            return Err(Error::BitBudgetExceeded { needed, cap });
        }
    }
    Ok(())
}

/// Splits a non-negative rational exponent into (u, v) with r = u/v in lowest
/// terms and machine-sized components.
fn exponent_parts(r: &Rat) -> Result<(u64, u32)> {
    if r.is_negative() {
        return Err(Error::Domain(format!("negative exponent {r}")));
    }
    let u = r
        .numer()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("exponent numerator {} too large", r.numer())))?;
    let v = r
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Overflow(format!("exponent denominator {} too large", r.denom())))?;
    Ok((u, v))
}

/// Raises q to the integer power u with a bit-budget check.
pub fn pow_checked(q: &BigUint, u: u64) -> Result<BigUint> {
    if u == 0 {
        return Ok(BigUint::one());
    }
    check_bit_budget(q.bits().saturating_mul(u))?;
    let u32exp = u
        .to_u32()
        .ok_or_else(|| Error::Overflow(format!("integer exponent {u} too large")))?;
    Ok(q.pow(u32exp))
}

/// ⌊q^r⌋ for q ≥ 1 and rational r = u/v ≥ 0, via the exact integer v-th root
/// of q^u.  The result w satisfies w^v ≤ q^u < (w+1)^v.
pub fn floor_pow(q: &BigUint, r: &Rat) -> Result<BigUint> {
    if q.is_zero() {
        return Err(Error::Domain("floor_pow requires q >= 1".into()));
    }
    let (u, v) = exponent_parts(r)?;
    let powered = pow_checked(q, u)?;
    Ok(powered.nth_root(v))
}

/// ⌈q^r⌉ under the same conventions as [`floor_pow`].
pub fn ceil_pow(q: &BigUint, r: &Rat) -> Result<BigUint> {
    if q.is_zero() {
        return Err(Error::Domain("ceil_pow requires q >= 1".into()));
    }
    let (u, v) = exponent_parts(r)?;
    let powered = pow_checked(q, u)?;
    let root = powered.nth_root(v);
    if pow_checked(&root, v as u64)? == powered {
        Ok(root)
    } else {
        Ok(root + BigUint::one())
    }
}

/// A rational U with Σ_{q ≥ q0} q^{−t} ≤ U, from the integral comparison
/// bound U = q0^{−t} + q0^{1−t}/(t−1), every intermediate rounded upward.
///
/// Requires t > 1; smaller exponents make the series diverge.
pub fn tail_sum_upper(q0: &BigUint, t: &Rat) -> Result<Rat> {
    let one = Rat::one();
    if t <= &one {
        return Err(Error::Divergence { exponent: t.to_string() });
    }
    if q0 < &BigUint::from(2u32) {
        return Err(Error::Domain("tail_sum_upper requires q0 >= 2".into()));
    }
    // q0^{−t} ≤ 1/⌊q0^t⌋ and q0^{−(t−1)} ≤ 1/⌊q0^{t−1}⌋: floors only shrink
    // the denominator, so both replacements round upward.
    let t_minus_1 = t - &one;
    let head_den = floor_pow(q0, t)?;
    let tail_den = floor_pow(q0, &t_minus_1)?;
    let head = Rat::one() / rat_from_biguint(&head_den);
    let tail = Rat::one() / (rat_from_biguint(&tail_den) * t_minus_1);
    Ok(head + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn floor_pow_identity_exponent() {
        assert_eq!(floor_pow(&big(27), &rat_int(1)).unwrap(), big(27));
    }

    #[test]
    fn floor_pow_square_root() {
        assert_eq!(floor_pow(&big(5), &rat(1, 2)).unwrap(), big(2));
    }

    #[test]
    fn floor_pow_three_halves() {
        // ⌊2^{3/2}⌋ = ⌊√8⌋ = 2
        assert_eq!(floor_pow(&big(2), &rat(3, 2)).unwrap(), big(2));
    }

    #[test]
    fn floor_pow_zero_exponent() {
        for q in [1u64, 7, 1000] {
            assert_eq!(floor_pow(&big(q), &rat_int(0)).unwrap(), big(1));
        }
    }

    #[test]
    fn ceil_pow_exact_and_inexact() {
        assert_eq!(ceil_pow(&big(4), &rat(1, 2)).unwrap(), big(2));
        assert_eq!(ceil_pow(&big(5), &rat(1, 2)).unwrap(), big(3));
        assert_eq!(ceil_pow(&big(2), &rat(5, 2)).unwrap(), big(6)); // 2^{2.5} ≈ 5.66
    }

    #[test]
    fn tail_sum_upper_known_values() {
        assert_eq!(tail_sum_upper(&big(2), &rat_int(2)).unwrap(), rat(3, 4));
        assert_eq!(tail_sum_upper(&big(10), &rat_int(3)).unwrap(), rat(3, 500));
    }

    #[test]
    fn tail_sum_upper_divergent() {
        assert!(matches!(
            tail_sum_upper(&big(2), &rat_int(1)),
            Err(Error::Divergence { .. })
        ));
        assert!(matches!(
            tail_sum_upper(&big(2), &rat(1, 2)),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn bit_budget_is_honored() {
        // The cap is read from the environment at call time; exercise the
        // checker directly to avoid cross-test env races.
        std::env::set_var(MAX_BITS_ENV, "64");
        let r = check_bit_budget(65);
        std::env::remove_var(MAX_BITS_ENV);
        assert!(matches!(r, Err(Error::BitBudgetExceeded { .. })));
        assert!(check_bit_budget(1 << 40).is_ok());
    }

    proptest! {
        #[test]
        fn floor_pow_bracket(q in 1u64..1_000_000, u in 0u64..6, v in 1u64..6) {
            let r = rat(u as i64, v as i64);
            let (ru, rv) = (r.numer().to_u64().unwrap(), r.denom().to_u32().unwrap());
            let w = floor_pow(&big(q), &r).unwrap();
            let qu = big(q).pow(ru as u32);
            prop_assert!(w.pow(rv) <= qu);
            prop_assert!((w + 1u32).pow(rv) > qu);
        }

        #[test]
        fn ceil_pow_dominates_floor_pow(q in 1u64..100_000, u in 0u64..5, v in 1u64..5) {
            let r = rat(u as i64, v as i64);
            let f = floor_pow(&big(q), &r).unwrap();
            let c = ceil_pow(&big(q), &r).unwrap();
            prop_assert!(f <= c);
            prop_assert!(&c - &f <= big(1));
        }
    }
}
