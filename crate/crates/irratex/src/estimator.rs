//! Empirical irrationality-exponent measurement: continued-fraction
//! expansion of enclosure oracles, per-convergent exponent profiles with
//! certified log enclosures, tail estimates, and an exhaustive
//! best-approximation scan used as a cross-validation oracle.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::bugeaud::GapSequence;
use crate::error::{Error, Result};
use crate::jarnik::ContinuedFraction;
use crate::logs::{div_bounds, frac_bits_for_width, log2_bounds_rat, log2_bounds_uint};
use crate::rational::{format_rat, pow2_inv, rat_int, Rat};
use crate::real::RealSpec;

/// Result of expanding an oracle-backed real into partial quotients.
#[derive(Debug, Clone)]
pub struct CfExpansion {
    pub cf: ContinuedFraction,
    /// True when the value turned out rational and the expansion terminated.
    pub exact: bool,
}

/// Euclidean expansion of a rational in (0, 1); canonical form (last
/// quotient ≥ 2 except for single-step expansions).
fn euclid_quotients(x: &Rat) -> Vec<BigUint> {
    let mut n = x.numer().magnitude().clone();
    let mut d = x.denom().magnitude().clone();
    let mut out = Vec::new();
    while !n.is_zero() {
        let a = &d / &n;
        let r = &d % &n;
        out.push(a);
        d = n;
        n = r;
    }
    out
}

/// Expands `x` (value must lie in (0,1)) to `max_quotients` partial
/// quotients.  Every quotient is certified: the enclosure is refined until
/// ⌊1/lo⌋ = ⌊1/hi⌋, halving the width each round down to `eps_budget`.
pub fn cf_expand(x: &RealSpec, max_quotients: usize, eps_budget: &Rat) -> Result<CfExpansion> {
    if max_quotients == 0 {
        return Err(Error::Domain("need at least one quotient".into()));
    }
    let mut eps = pow2_inv(16);
    if &eps < eps_budget {
        eps = eps_budget.clone();
    }
    let mut quotients: Vec<BigUint> = Vec::new();
    loop {
        let enc = x.enclosure(&eps)?;
        if enc.width().is_zero() {
            // Exact rational value: finite Euclidean expansion.
            let v = enc.lo();
            if !v.is_positive() || v >= &Rat::one() {
                return Err(Error::Domain(format!(
                    "cf_expand needs a value in (0,1), got {v}"
                )));
            }
            let mut qs = euclid_quotients(v);
            let exact = qs.len() <= max_quotients;
            qs.truncate(max_quotients);
            return Ok(CfExpansion { cf: ContinuedFraction::new(qs)?, exact });
        }
        if enc.hi() <= &Rat::zero() || enc.lo() >= &Rat::one() {
            return Err(Error::Domain("cf_expand needs a value in (0,1)".into()));
        }

        // Replay already-certified quotients on the fresh enclosure, then
        // keep extending while each next quotient is unambiguous.
        let mut lo = enc.lo().clone();
        let mut hi = enc.hi().clone();
        let mut ok = lo.is_positive() && hi < Rat::one();
        if ok {
            let step = |a: &BigUint, lo: &mut Rat, hi: &mut Rat| -> bool {
                let a_rat = Rat::from_integer(BigInt::from(a.clone()));
                let new_lo = hi.recip() - &a_rat;
                let new_hi = lo.recip() - &a_rat;
                *lo = new_lo;
                *hi = new_hi;
                lo.is_positive() && *hi < Rat::one()
            };
            for a in &quotients {
                if !step(a, &mut lo, &mut hi) {
                    ok = false;
                    break;
                }
            }
            while ok && quotients.len() < max_quotients {
                let fl = hi.recip().floor();
                let fh = lo.recip().floor();
                if fl != fh {
                    ok = false;
                    break;
                }
                let a = fl
                    .to_integer()
                    .to_biguint()
                    .ok_or_else(|| Error::Domain("negative quotient".into()))?;
                quotients.push(a.clone());
                if quotients.len() == max_quotients {
                    return Ok(CfExpansion { cf: ContinuedFraction::new(quotients)?, exact: false });
                }
                if !step(&a, &mut lo, &mut hi) {
                    ok = false;
                }
            }
        }
        // Ambiguous somewhere: refine and retry.
        if &eps <= eps_budget {
            return Err(Error::PrecisionExhausted { budget: format_rat(eps_budget) });
        }
        eps /= rat_int(2);
        if &eps < eps_budget {
            eps = eps_budget.clone();
        }
    }
}

/// One profile row: the growth exponent e_k = 1 + log q_{k+1} / log q_k as
/// a certified enclosure, together with the convergent it belongs to.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub e: (Rat, Rat),
    /// Certified bounds on log2 q_k.
    pub logq: (Rat, Rat),
    /// Certified bounds on log2 q_{k+1}.
    pub logq_next: (Rat, Rat),
}

#[derive(Debug, Clone)]
pub struct ExponentProfile {
    pub entries: Vec<ProfileEntry>,
}

/// Computes the exponent profile of a strictly increasing convergent list.
/// Indices with q_k = 1 are skipped (log 1 = 0); `precision` bounds the
/// width of each log enclosure.
pub fn exponent_profile(convergents: &[(BigInt, BigInt)], precision: &Rat) -> Result<ExponentProfile> {
    if convergents.len() < 2 {
        return Err(Error::Domain("profile needs at least two convergents".into()));
    }
    for w in convergents.windows(2) {
        if w[1].1 <= w[0].1 {
            return Err(Error::Domain("convergent denominators must strictly increase".into()));
        }
    }
    let frac_bits = frac_bits_for_width(precision)?;
    let logs: Vec<Option<(Rat, Rat)>> = convergents
        .iter()
        .map(|(_, q)| {
            if q <= &BigInt::one() {
                Ok(None)
            } else {
                log2_bounds_uint(q.magnitude(), frac_bits).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for k in 0..convergents.len() - 1 {
        let (Some(lq), Some(lq_next)) = (&logs[k], &logs[k + 1]) else {
            continue;
        };
        let ratio = div_bounds(lq_next, lq)?;
        let one = Rat::one();
        entries.push(ProfileEntry {
            k: k + 1,
            p: convergents[k].0.clone(),
            q: convergents[k].1.clone(),
            e: (&one + ratio.0, one.clone() + ratio.1),
            logq: lq.clone(),
            logq_next: lq_next.clone(),
        });
    }
    if entries.is_empty() {
        return Err(Error::Domain("all denominators were 1; empty profile".into()));
    }
    Ok(ExponentProfile { entries })
}

/// Tail summary of a profile.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    /// Enclosure of max_{k ≥ tail_from} e_k (the finite limsup proxy).
    pub proxy_limsup: (Rat, Rat),
    /// The last profile value.
    pub last: (Rat, Rat),
    /// Log-log slope across the tail: how fast log(1/err) grows against
    /// log q.  Converges much faster than the raw profile values.
    pub trend: (Rat, Rat),
}

fn outward_div(num: (Rat, Rat), den: (Rat, Rat)) -> Result<(Rat, Rat)> {
    if !den.0.is_positive() {
        return Err(Error::Domain("trend window too flat to divide".into()));
    }
    let c1 = &num.0 / &den.0;
    let c2 = &num.0 / &den.1;
    let c3 = &num.1 / &den.0;
    let c4 = &num.1 / &den.1;
    let lo = c1.clone().min(c2.clone()).min(c3.clone()).min(c4.clone());
    let hi = c1.max(c2).max(c3).max(c4);
    Ok((lo, hi))
}

/// Summarizes the profile tail starting at profile index `tail_from`
/// (1-based, inclusive).
pub fn exponent_estimate(profile: &ExponentProfile, tail_from: usize) -> Result<EstimateReport> {
    let tail: Vec<&ProfileEntry> =
        profile.entries.iter().filter(|e| e.k >= tail_from).collect();
    if tail.is_empty() {
        return Err(Error::Domain(format!("empty profile tail from k = {tail_from}")));
    }
    let mut max_lo = tail[0].e.0.clone();
    let mut max_hi = tail[0].e.1.clone();
    for e in &tail[1..] {
        if e.e.0 > max_lo {
            max_lo = e.e.0.clone();
        }
        if e.e.1 > max_hi {
            max_hi = e.e.1.clone();
        }
    }
    let last = tail.last().unwrap().e.clone();
    let trend = if tail.len() < 2 {
        last.clone()
    } else {
        let first = tail[0];
        let end = tail.last().unwrap();
        // slope of log(1/err_k) ≈ log q_k + log q_{k+1} against log q_k
        // between the two ends of the tail.
        let num = (
            (&end.logq.0 + &end.logq_next.0) - (&first.logq.1 + &first.logq_next.1),
            (&end.logq.1 + &end.logq_next.1) - (&first.logq.0 + &first.logq_next.0),
        );
        let den = (&end.logq.0 - &first.logq.1, &end.logq.1 - &first.logq.0);
        outward_div(num, den)?
    };
    Ok(EstimateReport { proxy_limsup: (max_lo, max_hi), last, trend })
}

/// CSV export (k, p, q, e_lo, e_hi) of a profile.
pub fn profile_to_csv(profile: &ExponentProfile) -> String {
    let mut out = String::from("k,p,q,e_lo,e_hi\n");
    for e in &profile.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.k,
            e.p,
            e.q,
            format_rat(&e.e.0),
            format_rat(&e.e.1)
        ));
    }
    out
}

/// One certified best approximation.
#[derive(Debug, Clone)]
pub struct ApproximationRecord {
    pub p: BigInt,
    pub q: u64,
    /// Bounds on the first-kind error |x − p/q|.
    pub err_lo: Rat,
    pub err_hi: Rat,
    /// Bounds on log(1/|x − p/q|) / log q; None when the error is exactly 0.
    pub exponent_bounds: Option<(Rat, Rat)>,
    pub exact: bool,
}

/// CSV export (k, p, q, e_lo, e_hi) of records; exact hits print empty
/// exponent cells.
pub fn records_to_csv(records: &[ApproximationRecord]) -> String {
    let mut out = String::from("k,p,q,e_lo,e_hi\n");
    for (i, r) in records.iter().enumerate() {
        let (lo, hi) = match &r.exponent_bounds {
            Some((a, b)) => (format_rat(a), format_rat(b)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!("{},{},{},{lo},{hi}\n", i + 1, r.p, r.q));
    }
    out
}

fn exponent_bounds_from_err(err_lo: &Rat, err_hi: &Rat, q: u64, frac_bits: u64) -> Result<(Rat, Rat)> {
    // log(1/err) ∈ [−log(err_hi) bounds reversed]
    let (ehl, ehh) = log2_bounds_rat(err_hi, frac_bits)?;
    let (ell, elh) = log2_bounds_rat(err_lo, frac_bits)?;
    let num = (-ehh, -ell);
    let _ = (ehl, elh);
    let den = log2_bounds_uint(&BigUint::from(q), frac_bits)?;
    outward_div(num, den)
}

/// Exhaustive scan: for every q ≤ qmax find the nearest p and keep the
/// strict best approximations of the second kind (|q·x − p| strictly below
/// every smaller denominator's error; q = 1 seeds the baseline but is not
/// recorded).  Deterministic; enclosure precision is refined automatically.
pub fn best_approximations_brute(x: &RealSpec, qmax: u64) -> Result<Vec<ApproximationRecord>> {
    if qmax < 2 {
        return Err(Error::Domain("qmax must be at least 2".into()));
    }
    let frac_bits = 40;
    // Start well below the scale where distinct candidates can collide.
    let mut shift = 2 * 64u64.saturating_sub(qmax.leading_zeros() as u64) + 48;
    for _attempt in 0..4 {
        let eps = pow2_inv(shift);
        let enc = x.enclosure(&eps)?;
        if enc.width().is_zero() {
            return brute_exact(enc.lo(), qmax, frac_bits);
        }
        match brute_interval(enc.lo(), enc.hi(), qmax, frac_bits)? {
            Some(records) => return Ok(records),
            None => shift *= 2,
        }
    }
    Err(Error::PrecisionExhausted { budget: format_rat(&pow2_inv(shift)) })
}

/// Nearest integer to an exact rational, ties to the smaller integer.
fn nearest_int(t: &Rat) -> BigInt {
    let shifted = t + Rat::new(BigInt::one(), BigInt::from(2));
    if shifted.is_integer() {
        shifted.to_integer() - BigInt::one()
    } else {
        shifted.floor().to_integer()
    }
}

fn brute_exact(x: &Rat, qmax: u64, frac_bits: u64) -> Result<Vec<ApproximationRecord>> {
    let mut records = Vec::new();
    // Baseline from q = 1.
    let mut best = {
        let p = nearest_int(x);
        (x - Rat::from_integer(p)).abs()
    };
    for q in 2..=qmax {
        let t = x * rat_int(q as i64);
        let p = nearest_int(&t);
        let err2 = (&t - Rat::from_integer(p.clone())).abs();
        if err2 < best {
            let err = &err2 / rat_int(q as i64);
            let exact = err2.is_zero();
            let exponent_bounds = if exact {
                None
            } else {
                Some(exponent_bounds_from_err(&err, &err, q, frac_bits)?)
            };
            records.push(ApproximationRecord {
                p,
                q,
                err_lo: err.clone(),
                err_hi: err,
                exponent_bounds,
                exact,
            });
            if err2.is_zero() {
                // Nothing can be strictly better than an exact hit.
                break;
            }
            best = err2;
        }
    }
    Ok(records)
}

/// Returns None when the enclosure is too wide to certify some comparison.
fn brute_interval(
    xl: &Rat,
    xh: &Rat,
    qmax: u64,
    frac_bits: u64,
) -> Result<Option<Vec<ApproximationRecord>>> {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let scaled_err = |q: u64| -> Option<(BigInt, Rat, Rat)> {
        let q_rat = rat_int(q as i64);
        let t_lo = xl * &q_rat;
        let t_hi = xh * &q_rat;
        // Unique nearest integer requires both ends to round the same way.
        let p_lo = nearest_int(&t_lo);
        let p_hi = nearest_int(&t_hi);
        if p_lo != p_hi {
            return None;
        }
        let p_rat = Rat::from_integer(p_lo.clone());
        let d_lo = &t_lo - &p_rat;
        let d_hi = &t_hi - &p_rat;
        // |q·x − p| bounds; both offsets are within (−1/2, 1/2].
        let (e_lo, e_hi) = if d_lo >= Rat::zero() {
            (d_lo, d_hi)
        } else if d_hi <= Rat::zero() {
            (-d_hi, -d_lo)
        } else {
            (Rat::zero(), (-d_lo).max(d_hi))
        };
        debug_assert!(e_hi <= half);
        Some((p_lo, e_lo, e_hi))
    };

    let Some((_, mut best_lo, mut best_hi)) = scaled_err(1) else {
        return Ok(None);
    };
    let mut records = Vec::new();
    for q in 2..=qmax {
        let Some((p, e_lo, e_hi)) = scaled_err(q) else {
            return Ok(None);
        };
        if e_hi < best_lo {
            // Certified strictly better than everything smaller.
            let q_rat = rat_int(q as i64);
            let err_lo = &e_lo / &q_rat;
            let err_hi = &e_hi / &q_rat;
            if err_lo.is_zero() {
                // Cannot certify the exponent; demand more precision.
                return Ok(None);
            }
            let exponent_bounds = Some(exponent_bounds_from_err(&err_lo, &err_hi, q, frac_bits)?);
            records.push(ApproximationRecord {
                p,
                q,
                err_lo,
                err_hi,
                exponent_bounds,
                exact: false,
            });
            best_lo = e_lo;
            best_hi = e_hi;
        } else if e_lo < best_hi {
            // Overlapping error intervals: ambiguous.
            return Ok(None);
        }
    }
    Ok(Some(records))
}

/// Exponent record for the J-th truncation of ξ = Σ base^{−n_j}: the
/// approximation p_J / base^{n_J} has error strictly inside
/// (base^{−n_{J+1}}, 2·base^{−n_{J+1}}), so its exponent
/// log(1/err)/log(q) is bracketed by exact rationals.
#[derive(Debug, Clone)]
pub struct TruncationExponent {
    pub j: usize,
    /// Exponent position n_J (q = base^{n_J}).
    pub n: u64,
    pub e_lo: Rat,
    pub e_hi: Rat,
}

/// Exponent brackets for truncations J = 1..=jmax (needs term jmax+1).
pub fn truncation_exponents(
    gaps: &GapSequence,
    base: u64,
    jmax: usize,
) -> Result<Vec<TruncationExponent>> {
    if base < 2 {
        return Err(Error::Domain("base must be at least 2".into()));
    }
    let mut out = Vec::with_capacity(jmax);
    for j in 1..=jmax {
        let n_j = gaps.term(j)?;
        let n_next = gaps.term(j + 1)?;
        // err ∈ (b^{−n_{J+1}}, 2·b^{−n_{J+1}}) gives, in base-b logs,
        // log_b(1/err) ∈ (n_{J+1} − log_b 2, n_{J+1}) ⊇-safe bracket below.
        let e_lo = rat_int(n_next as i64 - 1) / rat_int(n_j as i64);
        let e_hi = rat_int(n_next as i64) / rat_int(n_j as i64);
        out.push(TruncationExponent { j, n: n_j, e_lo, e_hi });
    }
    Ok(out)
}
