//! Truncated well-approximable sets V(q0, b) = ⋃_{q ≥ q0} G_q(b), kept
//! finite by cutting at qmax and carrying a certified upper bound on the
//! ν-mass of the omitted tail: ν(V(q0, b1)) ≤ 2·C(2/b2)·Σ_{q≥q0}
//! q^{1−2b1/b2}, bounded through `tail_sum_upper`.

use num_bigint::BigUint;
use num_traits::Signed;

use crate::cantor::bands::approximation_band;
use crate::error::{Error, Result};
use crate::exact::tail_sum_upper;
use crate::rational::{rat_int, Interval, Rat};

/// A finite stand-in for an infinite band union.
#[derive(Debug, Clone)]
pub struct TruncatedV {
    /// Merged, sorted, pairwise disjoint band union for q0 ≤ q ≤ qmax.
    pub intervals: Vec<Interval>,
    pub q0: u64,
    pub qmax: u64,
    /// Certified upper bound on the ν-mass of the omitted q > qmax part
    /// (and of all of V(q0, ·) when the explicit part is empty).
    pub tail_bound: Rat,
}

/// Merges a sorted list of intervals, joining pieces that overlap or touch.
pub fn merge_sorted(mut intervals: Vec<Interval>) -> Vec<Interval> {
    intervals.sort_by(|a, b| a.lo().cmp(b.lo()));
    let mut out: Vec<Interval> = Vec::new();
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo() <= last.hi() => {
                if iv.hi() > last.hi() {
                    *last = Interval::new(last.lo().clone(), iv.hi().clone()).unwrap();
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// The ν-mass bound for the tail q ≥ q_from: 2·C·Σ_{q ≥ q_from}
/// q^{1−2b1/b2}, with the sum bounded by `tail_sum_upper`.
pub fn v_tail_bound(q_from: &BigUint, b1: &Rat, b2: &Rat, c_val: &Rat) -> Result<Rat> {
    if !c_val.is_positive() {
        return Err(Error::Domain(format!("holder constant must be positive, got {c_val}")));
    }
    if b1 <= b2 {
        return Err(Error::Domain(format!("tail bound needs b1 > b2, got {b1} <= {b2}")));
    }
    let exponent = rat_int(2) * b1 / b2 - rat_int(1);
    let sum = tail_sum_upper(q_from, &exponent)?;
    Ok(rat_int(2) * c_val * sum)
}

/// Bands of G_q(b1) for q0 ≤ q ≤ qmax, merged and sorted, with the q >
/// qmax remainder certified through (b2, C).  qmax < q0 yields an empty
/// explicit part whose certificate covers all of V(q0, b1).
pub fn truncated_v_set(
    q0: u64,
    b1: &Rat,
    qmax: u64,
    b2: &Rat,
    c_val: &Rat,
) -> Result<TruncatedV> {
    if q0 < 2 {
        return Err(Error::Domain(format!("truncated_v_set needs q0 >= 2, got {q0}")));
    }
    let mut intervals = Vec::new();
    if qmax >= q0 {
        for q in q0..=qmax {
            intervals.extend(approximation_band(q, b1)?);
        }
    }
    let tail_from = BigUint::from(if qmax >= q0 { qmax + 1 } else { q0 });
    let tail_bound = v_tail_bound(&tail_from, b1, b2, c_val)?;
    Ok(TruncatedV { intervals: merge_sorted(intervals), q0, qmax, tail_bound })
}

/// Smallest power of two h with 2·C·tail_sum_upper(h, 2b1/b2 − 1) <
/// budget.  The exponent must exceed 1, i.e. b1 > b2.  The result is
/// arbitrary-precision: later selection steps need h far beyond u64.
pub fn choose_h(c_val: &Rat, b1: &Rat, b2: &Rat, budget: &Rat) -> Result<BigUint> {
    if !budget.is_positive() {
        return Err(Error::Domain(format!("budget must be positive, got {budget}")));
    }
    let mut h = BigUint::from(2u32);
    loop {
        if &v_tail_bound(&h, b1, b2, c_val)? < budget {
            return Ok(h);
        }
        if h.bits() > 4096 {
            return Err(Error::Overflow("choose_h exceeded 2^4096".into()));
        }
        h <<= 1;
    }
}
