//! Exact rationals and closed rational intervals.
//!
//! `Rat` is a canonical-form arbitrary-precision fraction; every value in the
//! toolkit is either a `Rat` or an `Interval` of them.  Rationals serialize as
//! the string `num/den`, intervals as `[num/den, num/den]`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_from_bigint(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

pub fn rat_from_biguint(n: &BigUint) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

/// 1/2^k as an exact rational.
pub fn pow2_inv(k: u64) -> Rat {
    let one = BigInt::one();
    Rat::new(one.clone(), one << k)
}

/// Canonical textual form `num/den` (the denominator is printed even when 1).
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Smallest integer ≥ x, as a Rat.
pub fn ceil_rat(x: &Rat) -> Rat {
    Rat::from_integer(x.ceil().to_integer())
}

/// A closed interval [lo, hi] with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "interval endpoints out of order: [{}, {}]",
                format_rat(&lo),
                format_rat(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed-interval overlap test (shared endpoint counts as overlap).
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Length of the overlap with `other` (zero when disjoint or degenerate).
    pub fn overlap_len(&self, other: &Interval) -> Rat {
        match self.intersection(other) {
            Some(i) => i.width(),
            None => Rat::zero(),
        }
    }

    pub fn to_text(&self) -> String {
        format!("[{}, {}]", format_rat(&self.lo), format_rat(&self.hi))
    }
}

/// |x| for rationals (convenience re-export of Signed::abs).
pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}
