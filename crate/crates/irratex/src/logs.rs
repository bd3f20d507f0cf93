//! Certified logarithm and rational-power enclosures.
//!
//! Logarithms are base-2, computed with integer arithmetic only: the integer
//! part comes from the bit length and the fractional part from repeated
//! squaring of a scaled mantissa.  Two passes — one rounding every step down,
//! one rounding up — give one-sided bounds regardless of precision, so the
//! enclosures are sound by construction and the precision parameter only
//! controls their width.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Default enclosure width for exponent profiles: 10^{-6}.
pub fn default_log_precision() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(1_000_000))
}

fn two_pow(k: u64) -> BigUint {
    BigUint::one() << k
}

/// One squaring-and-normalize pass extracting `frac_bits` bits of
/// log2(m/2^scale), with the requested rounding direction.
fn frac_bits_pass(m0: BigUint, scale: u64, frac_bits: u64, round_up: bool) -> BigUint {
    let norm = two_pow(scale + 1); // 2^{scale+1}: normalization threshold
    let mut m = m0;
    let mut acc = BigUint::zero();
    for _ in 0..frac_bits {
        let sq = &m * &m;
        m = if round_up {
            (&sq + (two_pow(scale) - BigUint::one())) >> scale
        } else {
            sq >> scale
        };
        acc <<= 1;
        if m >= norm {
            m >>= 1;
            acc += BigUint::one();
        }
    }
    acc
}

/// Rational bounds (lo, hi) with lo ≤ log2(n) ≤ hi, for n ≥ 1.
/// `frac_bits` fractional bits are certified; width is O(2^{-frac_bits}).
pub fn log2_bounds_uint(n: &BigUint, frac_bits: u64) -> Result<(Rat, Rat)> {
    if n.is_zero() {
        return Err(Error::Domain("log2 of zero".into()));
    }
    let e = n.bits() - 1;
    if n == &two_pow(e) {
        let exact = Rat::from_integer(BigInt::from(e));
        return Ok((exact.clone(), exact));
    }
    // Guard bits: squaring doubles the relative width per step, so seed the
    // mantissa with ~2x the requested bits to keep the final width near one ulp.
    let scale = 2 * frac_bits + 8;
    // Scaled mantissa bounds: m_lo ≤ n·2^scale/2^e < m_lo + 1 = m_hi.
    let m_lo = if e >= scale { n >> (e - scale) } else { n << (scale - e) };
    let m_hi = &m_lo + BigUint::one();

    let acc_lo = frac_bits_pass(m_lo, scale, frac_bits, false);
    let acc_hi = frac_bits_pass(m_hi, scale, frac_bits, true);

    let denom = BigInt::from(two_pow(frac_bits));
    let e_rat = Rat::from_integer(BigInt::from(e));
    let lo = &e_rat + Rat::new(BigInt::from(acc_lo), denom.clone());
    let hi = &e_rat + Rat::new(BigInt::from(acc_hi) + BigInt::one(), denom);
    Ok((lo, hi))
}

/// Rational bounds on log2(x) for a positive rational x, by outward
/// combination of numerator and denominator bounds.
pub fn log2_bounds_rat(x: &Rat, frac_bits: u64) -> Result<(Rat, Rat)> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("log2 of non-positive value {x}")));
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let (n_lo, n_hi) = log2_bounds_uint(n, frac_bits)?;
    let (d_lo, d_hi) = log2_bounds_uint(d, frac_bits)?;
    Ok((n_lo - d_hi, n_hi - d_lo))
}

/// Number of fractional bits needed so the enclosure width is ≤ `width`.
pub fn frac_bits_for_width(width: &Rat) -> Result<u64> {
    if !width.is_positive() {
        return Err(Error::Domain("requested log precision must be positive".into()));
    }
    let inv = width.recip();
    let nb = inv.numer().magnitude().bits();
    let db = inv.denom().magnitude().bits();
    let mut bits = nb.saturating_sub(db.saturating_sub(1)) + 2;
    if bits < 8 {
        bits = 8;
    }
    Ok(bits)
}

/// Rational bounds (lo, hi) with lo ≤ x^d ≤ hi for x ≥ 0 and rational d =
/// u/v ≥ 0, via exact u-th powers and scaled integer v-th roots.
/// `frac_bits` controls the dyadic grid: width ≤ 2^{1-frac_bits} · x^d-scale.
pub fn pow_bounds(x: &Rat, d: &Rat, frac_bits: u64) -> Result<(Rat, Rat)> {
    if x.is_negative() {
        return Err(Error::Domain(format!("pow_bounds of negative base {x}")));
    }
    if d.is_negative() {
        return Err(Error::Domain(format!("pow_bounds of negative exponent {d}")));
    }
    if x.is_zero() {
        if d.is_zero() {
            return Ok((Rat::one(), Rat::one()));
        }
        return Ok((Rat::zero(), Rat::zero()));
    }
    let u = d
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Overflow(format!("exponent numerator {} too large", d.numer())))?;
    let v = d
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Overflow(format!("exponent denominator {} too large", d.denom())))?;
    // A = x^u exactly, then bracket A^{1/v} on the 2^{-frac_bits} grid.
    let a_num = x.numer().magnitude().pow(u);
    let a_den = x.denom().magnitude().pow(u);
    let scaled_num = &a_num << (frac_bits * v as u64);
    let t_lo = &scaled_num / &a_den;
    let t_hi = if (&t_lo * &a_den) == scaled_num { t_lo.clone() } else { &t_lo + BigUint::one() };
    let r_lo = t_lo.nth_root(v);
    let r_hi = t_hi.nth_root(v) + BigUint::one();
    let denom = BigInt::from(two_pow(frac_bits));
    Ok((
        Rat::new(BigInt::from(r_lo), denom.clone()),
        Rat::new(BigInt::from(r_hi), denom),
    ))
}

/// Divides two positive log enclosures outward: bounds on num/den.
pub fn div_bounds(num: &(Rat, Rat), den: &(Rat, Rat)) -> Result<(Rat, Rat)> {
    if !num.0.is_positive() || !den.0.is_positive() {
        return Err(Error::Domain("div_bounds requires positive enclosures".into()));
    }
    Ok((&num.0 / &den.1, &num.1 / &den.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn contains_f64(lo: &Rat, hi: &Rat, x: f64) -> bool {
        lo.to_f64().unwrap() <= x + 1e-12 && x - 1e-12 <= hi.to_f64().unwrap()
    }

    #[test]
    fn log2_powers_of_two_exact() {
        for k in [0u64, 1, 5, 40] {
            let (lo, hi) = log2_bounds_uint(&(BigUint::one() << k), 20).unwrap();
            assert_eq!(lo, rat_int(k as i64));
            assert_eq!(hi, rat_int(k as i64));
        }
    }

    #[test]
    fn log2_known_values() {
        let (lo, hi) = log2_bounds_uint(&BigUint::from(10u32), 24).unwrap();
        assert!(contains_f64(&lo, &hi, 10f64.log2()));
        assert!((&hi - &lo) < rat(1, 1 << 20));
    }

    #[test]
    fn log2_rational_value() {
        let x = rat(3, 7);
        let (lo, hi) = log2_bounds_rat(&x, 24).unwrap();
        assert!(contains_f64(&lo, &hi, (3f64 / 7f64).log2()));
    }

    #[test]
    fn pow_bounds_known() {
        // (1/4)^{1/2} = 1/2 exactly on the dyadic grid.
        let (lo, hi) = pow_bounds(&rat(1, 4), &rat(1, 2), 30).unwrap();
        assert!(lo <= rat(1, 2) && rat(1, 2) <= hi);
        assert!((&hi - &lo) < rat(1, 1 << 28));
    }

    #[test]
    fn frac_bits_scaling() {
        assert!(frac_bits_for_width(&rat(1, 1_000_000)).unwrap() >= 21);
        assert!(frac_bits_for_width(&rat_int(0)).is_err());
    }

    proptest! {
        #[test]
        fn log2_uint_encloses_float(n in 2u64..1_000_000_000u64) {
            let (lo, hi) = log2_bounds_uint(&BigUint::from(n), 30).unwrap();
            prop_assert!(contains_f64(&lo, &hi, (n as f64).log2()));
            prop_assert!(&hi - &lo < rat(1, 1 << 26));
        }

        #[test]
        fn pow_bounds_enclose_float(num in 1i64..2000, den in 1i64..2000, u in 0i64..4, v in 1i64..6) {
            let x = rat(num, den);
            let d = rat(u, v);
            let (lo, hi) = pow_bounds(&x, &d, 32).unwrap();
            let truth = (num as f64 / den as f64).powf(u as f64 / v as f64);
            prop_assert!(contains_f64(&lo, &hi, truth));
            prop_assert!(lo <= hi);
        }
    }
}
