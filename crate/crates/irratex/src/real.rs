//! Computable-real enclosure oracles: every representable number can be
//! boxed in a rational interval of any requested width, deterministically,
//! with successive enclosures nested.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::bugeaud::{xi_tail_bounds, xi_truncation, GapSequence};
use crate::error::{Error, Result};
use crate::jarnik::ContinuedFraction;
use crate::rational::{Interval, Rat};

/// Partial-quotient supply for [`RealSpec::CfNumber`].
#[derive(Debug, Clone)]
pub enum QuotientSource {
    Finite(Vec<BigUint>),
    Periodic { prefix: Vec<BigUint>, period: Vec<BigUint> },
}

impl QuotientSource {
    fn quotient(&self, k: usize) -> Option<BigUint> {
        match self {
            QuotientSource::Finite(v) => v.get(k).cloned(),
            QuotientSource::Periodic { prefix, period } => {
                if k < prefix.len() {
                    Some(prefix[k].clone())
                } else {
                    Some(period[(k - prefix.len()) % period.len()].clone())
                }
            }
        }
    }
}

/// A computable real in [0, 1), given by one of four oracle-backed forms.
#[derive(Clone)]
pub enum RealSpec {
    RationalValue(Rat),
    /// The fractional part of √d for a non-square positive integer d.
    SqrtInt { d: u64 },
    /// ξ = Σ_j base^{−n_j} over a gap sequence.
    SumOfPowers { base: u64, gaps: Arc<GapSequence> },
    /// [0; a_1, a_2, …] from a quotient source.
    CfNumber { quotients: QuotientSource },
}

impl RealSpec {
    pub fn rational(x: Rat) -> Self {
        RealSpec::RationalValue(x)
    }

    pub fn sqrt_int(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("sqrt target must be positive".into()));
        }
        let s = BigUint::from(d).sqrt();
        if &s * &s == BigUint::from(d) {
            return Err(Error::Domain(format!("{d} is a perfect square; value would be rational")));
        }
        Ok(RealSpec::SqrtInt { d })
    }

    pub fn sum_of_powers(base: u64, gaps: Arc<GapSequence>) -> Result<Self> {
        if base < 2 {
            return Err(Error::Domain("base must be at least 2".into()));
        }
        Ok(RealSpec::SumOfPowers { base, gaps })
    }

    pub fn cf_number(quotients: QuotientSource) -> Result<Self> {
        let ok = match &quotients {
            QuotientSource::Finite(v) => !v.is_empty() && v.iter().all(|a| !a.is_zero()),
            QuotientSource::Periodic { prefix, period } => {
                !period.is_empty()
                    && prefix.iter().chain(period.iter()).all(|a| !a.is_zero())
            }
        };
        if !ok {
            return Err(Error::Domain("quotient source must be nonempty with quotients >= 1".into()));
        }
        Ok(RealSpec::CfNumber { quotients })
    }

    /// A deterministic interval of width ≤ eps containing the value.
    /// Enclosures at smaller eps are nested inside those at larger eps.
    pub fn enclosure(&self, eps: &Rat) -> Result<Interval> {
        if !eps.is_positive() {
            return Err(Error::Domain("enclosure width must be positive".into()));
        }
        match self {
            RealSpec::RationalValue(x) => Ok(Interval::point(x.clone())),
            RealSpec::SqrtInt { d } => sqrt_enclosure(*d, eps),
            RealSpec::SumOfPowers { base, gaps } => sum_enclosure(*base, gaps, eps),
            RealSpec::CfNumber { quotients } => cf_enclosure(quotients, eps),
        }
    }

    /// A short printable description.
    pub fn describe(&self) -> String {
        match self {
            RealSpec::RationalValue(x) => format!("rational {x}"),
            RealSpec::SqrtInt { d } => format!("frac(sqrt({d}))"),
            RealSpec::SumOfPowers { base, .. } => format!("power sum in base {base}"),
            RealSpec::CfNumber { .. } => "continued fraction".into(),
        }
    }
}

/// Least k with 2^{-k} ≤ eps.
fn dyadic_bits(eps: &Rat) -> u64 {
    let mut k = 0u64;
    let mut scale = Rat::one();
    let two = Rat::from_integer(BigInt::from(2));
    // Jump close using bit lengths, then settle by steps.
    let inv = eps.recip();
    if inv > Rat::one() {
        let approx = inv.numer().magnitude().bits().saturating_sub(inv.denom().magnitude().bits());
        k = approx;
        scale = Rat::new(BigInt::one(), BigInt::one() << k);
    }
    while &scale > eps {
        scale /= &two;
        k += 1;
    }
    k
}

fn sqrt_enclosure(d: u64, eps: &Rat) -> Result<Interval> {
    let k = dyadic_bits(eps);
    let scale = BigUint::one() << k;
    let s = BigUint::from(d).sqrt();
    // ⌊√d · 2^k⌋ = ⌊√(d · 4^k)⌋
    let root = (BigUint::from(d) * (&scale * &scale)).sqrt();
    let denom = BigInt::from(scale.clone());
    let lo = Rat::new(BigInt::from(root - &s * &scale), denom.clone());
    let hi = &lo + Rat::new(BigInt::one(), denom);
    Interval::new(lo, hi)
}

fn sum_enclosure(base: u64, gaps: &Arc<GapSequence>, eps: &Rat) -> Result<Interval> {
    let mut j_terms = 1usize;
    loop {
        match xi_tail_bounds(gaps, base, j_terms) {
            Ok((_, hi)) => {
                if &hi <= eps {
                    let lo_end = xi_truncation(gaps, base, j_terms)?;
                    let hi_end = &lo_end + hi;
                    return Interval::new(lo_end, hi_end);
                }
                j_terms += 1;
            }
            Err(Error::HorizonExhausted { horizon, .. }) => {
                // Finite sum: the value is exactly the full truncation.
                let exact = xi_truncation(gaps, base, horizon)?;
                return Ok(Interval::point(exact));
            }
            Err(e) => return Err(e),
        }
    }
}

fn cf_enclosure(source: &QuotientSource, eps: &Rat) -> Result<Interval> {
    let mut cf = ContinuedFraction::new(vec![source
        .quotient(0)
        .expect("validated nonempty")])?;
    loop {
        match source.quotient(cf.len()) {
            Some(a) => {
                cf.push(a)?;
                let enc = cf.enclosure(cf.len())?;
                if &enc.width() <= eps {
                    return Ok(enc);
                }
            }
            None => {
                // Finite expansion: exact rational value.
                return Ok(Interval::point(cf.value()?));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::seq::SeqGen;
    use num_traits::ToPrimitive;

    fn sqrt2() -> RealSpec {
        RealSpec::sqrt_int(2).unwrap()
    }

    #[test]
    fn rational_is_a_point() {
        let e = RealSpec::rational(rat(1, 3)).enclosure(&rat(1, 100)).unwrap();
        assert_eq!(e.lo(), &rat(1, 3));
        assert_eq!(e.hi(), &rat(1, 3));
    }

    #[test]
    fn sqrt_two_enclosure() {
        let e = sqrt2().enclosure(&rat(1, 100)).unwrap();
        assert!(e.width() <= rat(1, 100));
        let truth = 2f64.sqrt() - 1.0;
        assert!(e.lo().to_f64().unwrap() <= truth && truth <= e.hi().to_f64().unwrap());
    }

    #[test]
    fn sqrt_rejects_squares() {
        assert!(RealSpec::sqrt_int(9).is_err());
        assert!(RealSpec::sqrt_int(0).is_err());
        assert!(RealSpec::sqrt_int(5).is_ok());
    }

    #[test]
    fn sum_of_powers_bracket() {
        // Lazy gaps 2, 6, 18, …: at eps = 2^{-10} truncation stops at J = 2
        // with tail bound 2^{-17}.
        let gaps = Arc::new(GapSequence::from_targets(SeqGen::constant(rat_int(3))));
        let x = RealSpec::sum_of_powers(2, gaps).unwrap();
        let e = x.enclosure(&rat(1, 1 << 10)).unwrap();
        assert_eq!(e.lo(), &rat(17, 64));
        assert_eq!(e.hi(), &(rat(17, 64) + rat(1, 1 << 17)));
    }

    #[test]
    fn finite_sum_is_exact_point() {
        let gaps = Arc::new(GapSequence::from_positions(vec![2, 6]).unwrap());
        let x = RealSpec::sum_of_powers(2, gaps).unwrap();
        let e = x.enclosure(&rat(1, 1_000_000_000)).unwrap();
        assert_eq!(e.lo(), &rat(17, 64));
        assert_eq!(e.width(), rat_int(0));
    }

    #[test]
    fn cf_number_enclosures() {
        // [0; 2, 2, 2, …] = √2 − 1.
        let x = RealSpec::cf_number(QuotientSource::Periodic {
            prefix: vec![],
            period: vec![BigUint::from(2u32)],
        })
        .unwrap();
        let e = x.enclosure(&rat(1, 10_000)).unwrap();
        let truth = 2f64.sqrt() - 1.0;
        assert!(e.lo().to_f64().unwrap() <= truth && truth <= e.hi().to_f64().unwrap());
        assert!(e.width() <= rat(1, 10_000));

        let y = RealSpec::cf_number(QuotientSource::Finite(vec![
            BigUint::from(3u32),
            BigUint::from(1u32),
            BigUint::from(3u32),
            BigUint::from(4u32),
        ]))
        .unwrap();
        let ey = y.enclosure(&rat(1, u32::MAX as i64)).unwrap();
        assert_eq!(ey.lo(), &rat(17, 64));
        assert_eq!(ey.width(), rat_int(0));
    }

    #[test]
    fn enclosures_nest_across_widths() {
        let gaps = Arc::new(GapSequence::from_targets(SeqGen::constant(rat(5, 2))));
        let specs: Vec<RealSpec> = vec![
            sqrt2(),
            RealSpec::sum_of_powers(2, gaps).unwrap(),
            RealSpec::cf_number(QuotientSource::Periodic {
                prefix: vec![BigUint::from(1u32)],
                period: vec![BigUint::from(2u32), BigUint::from(3u32)],
            })
            .unwrap(),
            RealSpec::rational(rat(3, 7)),
        ];
        for x in &specs {
            let mut eps = rat(1, 4);
            let mut prev = x.enclosure(&eps).unwrap();
            for _ in 0..12 {
                eps = &eps / rat_int(3);
                let next = x.enclosure(&eps).unwrap();
                assert!(prev.contains(&next), "nesting violated for {}", x.describe());
                assert!(next.width() <= eps);
                prev = next;
            }
        }
    }

    #[test]
    fn enclosure_is_replayable() {
        let x = sqrt2();
        let a = x.enclosure(&rat(1, 12345)).unwrap();
        let b = x.enclosure(&rat(1, 12345)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_eps() {
        assert!(sqrt2().enclosure(&rat_int(0)).is_err());
        assert!(sqrt2().enclosure(&rat(-1, 2)).is_err());
    }
}
