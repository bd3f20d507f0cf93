//! Prime-indexed approximation bands: the building blocks of the fractal
//! levels.  A band around p/q has radius 1/⌊q^b⌋ (the exact-rational
//! surrogate for 1/q^b; it is never larger, so every derived bound stays
//! valid), clipped to the window (radius, 1 − radius).

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::floor_pow;
use crate::rational::{rat_int, Interval, Rat};

/// All primes p with m < p < upper, ascending.
pub fn primes_between(m: u64, upper: u64) -> Result<Vec<u64>> {
    if m < 2 || upper <= m {
        return Err(Error::Domain(format!(
            "primes_between needs 2 <= M < upper, got ({m}, {upper})"
        )));
    }
    let n = upper as usize;
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            if p as u64 > m && (p as u64) < upper {
                primes.push(p as u64);
            }
            let mut q = p * p;
            while q <= n {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    Ok(primes)
}

/// The band radius 1/⌊q^b⌋ as an exact rational.
pub fn band_radius(q: u64, b: &Rat) -> Result<Rat> {
    let denom = floor_pow(&BigUint::from(q), b)?;
    if denom.is_one() {
        return Err(Error::Domain(format!("band radius at q = {q}, b = {b} is not < 1/2")));
    }
    Ok(Rat::new(BigInt::one(), BigInt::from(denom)))
}

/// The open intervals (p/q − r, p/q + r) for 0 < p < q with r = 1/⌊q^b⌋,
/// clipped to the window (r, 1 − r); empty pieces dropped.  Endpoints are
/// exact rationals; the open/closed distinction carries zero measure.
pub fn approximation_band(q: u64, b: &Rat) -> Result<Vec<Interval>> {
    if q < 2 {
        return Err(Error::Domain(format!("approximation_band needs q >= 2, got {q}")));
    }
    if b <= &rat_int(2) {
        return Err(Error::Domain(format!("approximation_band needs b > 2, got {b}")));
    }
    let r = band_radius(q, b)?;
    let win_lo = r.clone();
    let win_hi = Rat::one() - &r;
    let mut out = Vec::new();
    for p in 1..q {
        let center = Rat::new(BigInt::from(p), BigInt::from(q));
        let lo = (&center - &r).max(win_lo.clone());
        let hi = (&center + &r).min(win_hi.clone());
        if lo < hi {
            out.push(Interval::new(lo, hi)?);
        }
    }
    Ok(out)
}

/// Exact check that `len` ≤ 2/M^b for rational b = u/v, by comparing
/// len^v · M^u against 2^v without leaving the rationals.
pub fn length_within_power_bound(len: &Rat, m: u64, b: &Rat) -> Result<bool> {
    let u: u64 = b
        .numer()
        .try_into()
        .map_err(|_| Error::Overflow(format!("exponent numerator {} out of range", b.numer())))?;
    let v: u64 = b
        .denom()
        .try_into()
        .map_err(|_| Error::Overflow(format!("exponent denominator {} out of range", b.denom())))?;
    let v32: u32 = v.try_into().map_err(|_| Error::Overflow("exponent denominator".into()))?;
    let u32_: u32 = u.try_into().map_err(|_| Error::Overflow("exponent numerator".into()))?;
    let lhs_num = len.numer().magnitude().pow(v32) * BigUint::from(m).pow(u32_);
    let lhs_den = len.denom().magnitude().pow(v32);
    // len^v · M^u ≤ 2^v  ⟺  lhs_num ≤ 2^v · lhs_den
    Ok(lhs_num <= (lhs_den << v))
}

/// Sorted disjoint union of the bands G_p(b) over primes M < p < 2M, with
/// the gap (≥ 1/(8M²)) and length (≤ 2/M^b) guarantees verified exactly.
/// Returns, per interval, the prime it came from alongside the interval.
pub fn level_union_tagged(m: u64, b: &Rat) -> Result<Vec<(u64, Interval)>> {
    let primes = primes_between(m, 2 * m)?;
    if primes.is_empty() {
        return Err(Error::InadmissibleM(format!("no primes strictly between {m} and {}", 2 * m)));
    }
    let mut tagged: Vec<(u64, Interval)> = Vec::new();
    for p in primes {
        for iv in approximation_band(p, b)? {
            tagged.push((p, iv));
        }
    }
    tagged.sort_by(|a, b| a.1.lo().cmp(b.1.lo()));
    let gap_bound = Rat::new(BigInt::one(), BigInt::from(8 * m * m));
    for w in tagged.windows(2) {
        let (p1, i1) = &w[0];
        let (p2, i2) = &w[1];
        let gap = i2.lo() - i1.hi();
        if gap < gap_bound {
            return Err(Error::InadmissibleM(format!(
                "bands of primes {p1} and {p2} at M = {m}, b = {b} are {} apart, below 1/(8M^2) = {}",
                crate::rational::format_rat(&gap),
                crate::rational::format_rat(&gap_bound),
            )));
        }
    }
    for (p, iv) in &tagged {
        if !length_within_power_bound(&iv.width(), m, b)? {
            return Err(Error::InadmissibleM(format!(
                "band of prime {p} at M = {m} exceeds the 2/M^b length bound"
            )));
        }
    }
    Ok(tagged)
}

/// `level_union_tagged` with the prime tags dropped.
pub fn level_union(m: u64, b: &Rat) -> Result<Vec<Interval>> {
    Ok(level_union_tagged(m, b)?.into_iter().map(|(_, iv)| iv).collect())
}
