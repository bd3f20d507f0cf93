//! Gap sequences n_1 < n_2 < … with prescribed ratio limsup, and the numbers
//! ξ = Σ_j b^{−n_j} they define: digits, exact truncations, and the
//! truncation error bracket b^{−n_{J+1}} < ξ − ξ_J < 2·b^{−n_{J+1}}.

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::check_bit_budget;
use crate::rational::{rat_from_biguint, rat_int, Rat};
use crate::seq::SeqGen;

/// A strictly increasing sequence of exponent positions, either generated
/// lazily from a ratio-target sequence (n_1 = 2, next-term rule below) or
/// given explicitly.
pub struct GapSequence {
    source: GapSource,
}

enum GapSource {
    Generated { gen: SeqGen, state: Mutex<GenState> },
    Explicit(Vec<u64>),
}

struct GenState {
    /// terms[i] = n_{i+1} (1-based sequence stored 0-based).
    terms: Vec<u64>,
    /// clamped[i] = the clamped ratio target used to produce terms[i], i ≥ 1.
    clamped: Vec<Rat>,
}

impl GapSequence {
    /// Lazy construction from a ratio-target sequence: n_1 = 2 and n_{j+1} is
    /// the least integer n with n/n_j ≥ max(2, a_{j+1}).
    pub fn from_targets(gen: SeqGen) -> Self {
        GapSequence {
            source: GapSource::Generated {
                gen,
                state: Mutex::new(GenState { terms: vec![2], clamped: vec![rat_int(2)] }),
            },
        }
    }

    /// Explicit positions; must be strictly increasing and ≥ 1.
    pub fn from_positions(positions: Vec<u64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Domain("empty position list".into()));
        }
        if positions[0] == 0 {
            return Err(Error::Domain("positions must be >= 1".into()));
        }
        for w in positions.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain(format!(
                    "positions must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(GapSequence { source: GapSource::Explicit(positions) })
    }

    /// n_j for 1-based j.
    pub fn term(&self, j: usize) -> Result<u64> {
        if j == 0 {
            return Err(Error::Domain("gap-sequence indices start at 1".into()));
        }
        match &self.source {
            GapSource::Explicit(v) => v
                .get(j - 1)
                .copied()
                .ok_or(Error::HorizonExhausted { index: j, horizon: v.len() }),
            GapSource::Generated { gen, state } => {
                let mut st = state.lock().unwrap();
                while st.terms.len() < j {
                    let idx = st.terms.len(); // producing n_{idx+1}
                    let prev = *st.terms.last().unwrap();
                    let raw = gen.eval(idx + 1)?;
                    let two = rat_int(2);
                    let target = if raw < two { two } else { raw };
                    // least n with n ≥ target · n_prev
                    let next = (&target * rat_int(prev as i64)).ceil().to_integer();
                    let next = next
                        .to_u64()
                        .ok_or_else(|| Error::Overflow(format!("gap term n_{} overflows u64", idx + 1)))?;
                    st.terms.push(next);
                    st.clamped.push(target);
                }
                Ok(st.terms[j - 1])
            }
        }
    }

    /// The clamped ratio target that produced n_j (j ≥ 2).
    pub fn clamped_target(&self, j: usize) -> Result<Rat> {
        if j < 2 {
            return Err(Error::Domain("clamped targets exist from j = 2".into()));
        }
        match &self.source {
            GapSource::Explicit(_) => {
                Err(Error::Domain("explicit gap sequences carry no targets".into()))
            }
            GapSource::Generated { state, .. } => {
                self.term(j)?; // force
                let st = state.lock().unwrap();
                Ok(st.clamped[j - 1].clone())
            }
        }
    }

    pub fn prefix(&self, j_terms: usize) -> Result<Vec<u64>> {
        (1..=j_terms).map(|j| self.term(j)).collect()
    }

    /// Number of terms when the sequence is an explicit finite list.
    pub fn finite_len(&self) -> Option<usize> {
        match &self.source {
            GapSource::Explicit(v) => Some(v.len()),
            GapSource::Generated { .. } => None,
        }
    }
}

/// Forces the first `j_terms` terms of the generated sequence and returns it.
pub fn build_gap_sequence(targets: &SeqGen, j_terms: usize) -> Result<GapSequence> {
    if j_terms < 1 {
        return Err(Error::Domain("need at least one term".into()));
    }
    let g = GapSequence::from_targets(targets.clone());
    g.prefix(j_terms)?;
    Ok(g)
}

/// The digit of ξ at fractional position `pos` (1 when pos is one of the
/// n_j, else 0; base-independent since all coefficients are 0/1).
pub fn xi_digit(n: &GapSequence, pos: u64) -> Result<u8> {
    if pos == 0 {
        return Err(Error::Domain("digit positions start at 1".into()));
    }
    let mut j = 1;
    loop {
        match n.term(j) {
            Ok(t) => {
                if t == pos {
                    return Ok(1);
                }
                if t > pos {
                    return Ok(0);
                }
                j += 1;
            }
            // A finite explicit list with all terms < pos: digit is 0.
            Err(Error::HorizonExhausted { .. }) => return Ok(0),
            Err(e) => return Err(e),
        }
    }
}

/// The first `count` fractional digits of ξ as a 0/1 string.
pub fn xi_digits(n: &GapSequence, count: u64) -> Result<String> {
    (1..=count)
        .map(|p| xi_digit(n, p).map(|d| if d == 1 { '1' } else { '0' }))
        .collect()
}

fn pow_biguint(base: u64, exp: u64) -> Result<BigUint> {
    let b = BigUint::from(base);
    check_bit_budget(b.bits().saturating_mul(exp))?;
    let e = exp
        .to_u32()
        .ok_or_else(|| Error::Overflow(format!("exponent {exp} too large")))?;
    Ok(b.pow(e))
}

/// Exact truncation ξ_J = Σ_{j=1}^{J} b^{−n_j} = p_J / b^{n_J}.
pub fn xi_truncation(n: &GapSequence, base: u64, j_terms: usize) -> Result<Rat> {
    if base < 2 {
        return Err(Error::Domain("base must be at least 2".into()));
    }
    if j_terms < 1 {
        return Err(Error::Domain("need at least one term".into()));
    }
    let terms = n.prefix(j_terms)?;
    let n_last = *terms.last().unwrap();
    let mut numer = BigUint::zero();
    for t in &terms {
        numer += pow_biguint(base, n_last - t)?;
    }
    let denom = pow_biguint(base, n_last)?;
    Ok(Rat::new(numer.into(), denom.into()))
}

/// Exact bracket (lo, hi) with lo < ξ − ξ_J < hi, namely
/// (b^{−n_{J+1}}, 2·b^{−n_{J+1}}).  Needs term J+1.
pub fn xi_tail_bounds(n: &GapSequence, base: u64, j_terms: usize) -> Result<(Rat, Rat)> {
    if base < 2 {
        return Err(Error::Domain("base must be at least 2".into()));
    }
    let next = n.term(j_terms + 1)?;
    let unit = Rat::one() / rat_from_biguint(&pow_biguint(base, next)?);
    Ok((unit.clone(), rat_int(2) * unit))
}

/// Window proxy for the exponent target: max_{lo ≤ j < hi} n_{j+1}/n_j.
pub fn xi_exponent_target(n: &GapSequence, lo: usize, hi: usize) -> Result<Rat> {
    if lo < 1 || lo >= hi {
        return Err(Error::Domain(format!("bad ratio window [{lo}, {hi})")));
    }
    let mut best: Option<Rat> = None;
    for j in lo..hi {
        let a = n.term(j)?;
        let b = n.term(j + 1)?;
        let ratio = rat_int(b as i64) / rat_int(a as i64);
        if best.as_ref().map_or(true, |m| &ratio > m) {
            best = Some(ratio);
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn constant_three_prefix() {
        let g = build_gap_sequence(&SeqGen::constant(rat_int(3)), 4).unwrap();
        assert_eq!(g.prefix(4).unwrap(), vec![2, 6, 18, 54]);
    }

    #[test]
    fn constant_five_halves_prefix() {
        let g = build_gap_sequence(&SeqGen::constant(rat(5, 2)), 4).unwrap();
        assert_eq!(g.prefix(4).unwrap(), vec![2, 5, 13, 33]);
    }

    #[test]
    fn clamped_to_doubling() {
        let g = build_gap_sequence(&SeqGen::constant(rat_int(1)), 4).unwrap();
        assert_eq!(g.prefix(4).unwrap(), vec![2, 4, 8, 16]);
    }

    #[test]
    fn ratio_error_bound_holds() {
        for target in [rat(5, 2), rat_int(3), rat(7, 2)] {
            let g = build_gap_sequence(&SeqGen::constant(target), 20).unwrap();
            for j in 1..20usize {
                let ratio = rat_int(g.term(j + 1).unwrap() as i64) / rat_int(g.term(j).unwrap() as i64);
                let a = g.clamped_target(j + 1).unwrap();
                let diff = &ratio - &a;
                assert!(diff >= rat_int(0), "ratio below target at j={j}");
                assert!(diff <= rat(1, 1 << j), "ratio error too large at j={j}");
            }
        }
    }

    #[test]
    fn digits_and_membership() {
        let g = GapSequence::from_positions(vec![2, 6, 18]).unwrap();
        assert_eq!(xi_digit(&g, 6).unwrap(), 1);
        assert_eq!(xi_digit(&g, 5).unwrap(), 0);
        assert_eq!(xi_digit(&g, 19).unwrap(), 0);
        let g2 = GapSequence::from_positions(vec![1, 2, 4]).unwrap();
        assert_eq!(xi_digits(&g2, 7).unwrap(), "1101000");
    }

    #[test]
    fn truncation_examples() {
        let g = GapSequence::from_positions(vec![2, 6, 18]).unwrap();
        assert_eq!(xi_truncation(&g, 2, 2).unwrap(), rat(17, 64));
        assert_eq!(xi_truncation(&g, 2, 1).unwrap(), rat(1, 4));
        let expect = Rat::new(
            ((BigUint::one() << 16u32) + (BigUint::one() << 12u32) + BigUint::one()).into(),
            (BigUint::one() << 18u32).into(),
        );
        assert_eq!(xi_truncation(&g, 2, 3).unwrap(), expect);
    }

    #[test]
    fn digit_truncation_consistency() {
        let g = build_gap_sequence(&SeqGen::constant(rat(5, 2)), 5).unwrap();
        let n4 = g.term(4).unwrap();
        let digits = xi_digits(&g, n4).unwrap();
        let mut acc = Rat::zero();
        for (i, c) in digits.chars().enumerate() {
            if c == '1' {
                acc += Rat::one() / rat_from_biguint(&pow_biguint(2, i as u64 + 1).unwrap());
            }
        }
        assert_eq!(acc, xi_truncation(&g, 2, 4).unwrap());
    }

    #[test]
    fn truncation_bracketing_against_later_truncations() {
        let g = build_gap_sequence(&SeqGen::constant(rat_int(3)), 10).unwrap();
        for j_terms in 1..=4usize {
            let xi_j = xi_truncation(&g, 2, j_terms).unwrap();
            let xi_far = xi_truncation(&g, 2, j_terms + 5).unwrap();
            let (lo, hi) = xi_tail_bounds(&g, 2, j_terms).unwrap();
            // ξ_{J+5} underestimates ξ, so strict lower bracket applies to it.
            assert!(&xi_far - &xi_j > lo);
            assert!(&xi_far - &xi_j < hi);
        }
    }

    #[test]
    fn exponent_target_windows() {
        let g = GapSequence::from_positions(vec![2, 6, 18, 54]).unwrap();
        assert_eq!(xi_exponent_target(&g, 1, 4).unwrap(), rat_int(3));
        let d = GapSequence::from_positions(vec![2, 4, 8, 16]).unwrap();
        assert_eq!(xi_exponent_target(&d, 1, 4).unwrap(), rat_int(2));
        let h = build_gap_sequence(&SeqGen::constant(rat(5, 2)), 4).unwrap();
        let m = xi_exponent_target(&h, 1, 4).unwrap();
        assert!(m >= rat(5, 2) && m <= rat(5, 2) + rat(1, 4));
    }

    #[test]
    fn explicit_validation() {
        assert!(GapSequence::from_positions(vec![]).is_err());
        assert!(GapSequence::from_positions(vec![0, 1]).is_err());
        assert!(GapSequence::from_positions(vec![2, 2]).is_err());
        let g = GapSequence::from_positions(vec![2, 6]).unwrap();
        assert!(matches!(g.term(3), Err(Error::HorizonExhausted { .. })));
    }
}
