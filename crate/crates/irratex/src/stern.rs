//! Canonical rational enumeration and interval search.
//!
//! The canonical order is breadth-first over the Stern–Brocot tree (zero
//! first, then positives interleaved with their negatives level by level).
//! The first enumerated rational inside an open interval is exactly the root
//! of the Stern–Brocot subtree spanning it, which the search below finds
//! directly without enumerating.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{rat_from_bigint, Rat};

/// Simplest positive rational strictly inside (lo, hi), with hi = None
/// meaning +∞.  Requires lo ≥ 0 and (when bounded) lo < hi.
fn simplest_positive(lo: &Rat, hi: Option<&Rat>) -> Rat {
    let fl = lo.floor().to_integer();
    let candidate = rat_from_bigint(&fl + BigInt::one());
    let inside = match hi {
        None => true,
        Some(h) => &candidate < h,
    };
    if inside {
        return candidate;
    }
    let h = hi.expect("unbounded interval always contains an integer");
    // No integer strictly inside: fl ≤ lo < hi ≤ fl+1.  Recurse on the
    // reciprocal of the fractional parts (interval endpoints swap).
    let fl_rat = rat_from_bigint(fl);
    let new_lo = (h - &fl_rat).recip();
    let frac_lo = lo - &fl_rat;
    let inner = if frac_lo.is_zero() {
        simplest_positive(&new_lo, None)
    } else {
        let new_hi = frac_lo.recip();
        simplest_positive(&new_lo, Some(&new_hi))
    };
    fl_rat + inner.recip()
}

/// First rational in the canonical enumeration lying strictly inside the open
/// interval (lo, hi).  Panics if lo ≥ hi (callers guarantee non-degeneracy).
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "simplest_in requires a nonempty open interval");
    let zero = Rat::zero();
    if lo < &zero && &zero < hi {
        return zero;
    }
    if lo >= &zero {
        simplest_positive(lo, Some(hi))
    } else {
        -simplest_positive(&-hi.clone(), Some(&-lo.clone()))
    }
}
