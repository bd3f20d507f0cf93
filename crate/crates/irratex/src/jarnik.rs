//! Continued fractions [0; a_1, a_2, …] with exact convergents, and the
//! quotient recurrence a_1 = 2, a_{n+1} = ⌊q_n^{a−2}⌋ that realizes a
//! prescribed exponent target a > 2.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::floor_pow;
use crate::rational::{rat_int, Interval, Rat};

/// Partial quotients with cached convergents.  Convergent indexing is
/// 1-based: (p_1, q_1) = (1, a_1) with seeds p_0 = 0, q_0 = 1, p_{-1} = 1,
/// q_{-1} = 0.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    quotients: Vec<BigUint>,
    /// convergents[k] = (p_k, q_k) for k ≥ 0; index 0 holds the seed (0, 1).
    convergents: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<BigUint>) -> Result<Self> {
        if quotients.iter().any(|a| a.is_zero()) {
            return Err(Error::Domain("partial quotients must be >= 1".into()));
        }
        let mut cf = ContinuedFraction {
            quotients: Vec::new(),
            convergents: vec![(BigInt::zero(), BigInt::one())],
        };
        for a in quotients {
            cf.push(a)?;
        }
        Ok(cf)
    }

    pub fn push(&mut self, a: BigUint) -> Result<()> {
        if a.is_zero() {
            return Err(Error::Domain("partial quotients must be >= 1".into()));
        }
        let k = self.quotients.len(); // becoming index k+1
        let (p_prev, q_prev) = self.convergents[k].clone();
        let (p_prev2, q_prev2) = if k == 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            self.convergents[k - 1].clone()
        };
        let a_int = BigInt::from(a.clone());
        let p = &a_int * &p_prev + p_prev2;
        let q = &a_int * &q_prev + q_prev2;
        self.quotients.push(a);
        self.convergents.push((p, q));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// a_k for 1-based k.
    pub fn quotient(&self, k: usize) -> Result<&BigUint> {
        if k == 0 || k > self.quotients.len() {
            return Err(Error::InsufficientQuotients { needed: k, available: self.quotients.len() });
        }
        Ok(&self.quotients[k - 1])
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    /// (p_k, q_k) for 1-based k.
    pub fn convergent(&self, k: usize) -> Result<(BigInt, BigInt)> {
        if k == 0 || k >= self.convergents.len() {
            return Err(Error::InsufficientQuotients { needed: k, available: self.quotients.len() });
        }
        Ok(self.convergents[k].clone())
    }

    /// All convergents (p_i, q_i) for 1 ≤ i ≤ k.
    pub fn convergents_upto(&self, k: usize) -> Result<Vec<(BigInt, BigInt)>> {
        if k > self.quotients.len() {
            return Err(Error::InsufficientQuotients { needed: k, available: self.quotients.len() });
        }
        Ok(self.convergents[1..=k].to_vec())
    }

    /// The exact value of the finite continued fraction.
    pub fn value(&self) -> Result<Rat> {
        let (p, q) = self.convergent(self.len())?;
        Ok(Rat::new(p, q))
    }

    /// Bracket of the (possibly infinite) value by consecutive convergents
    /// k−1 and k; width 1/(q_{k−1} q_k).
    pub fn enclosure(&self, k: usize) -> Result<Interval> {
        if k < 2 {
            return Err(Error::InsufficientQuotients { needed: 2, available: k });
        }
        let (p1, q1) = self.convergent(k - 1)?;
        let (p2, q2) = self.convergent(k)?;
        let a = Rat::new(p1, q1);
        let b = Rat::new(p2, q2);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    /// Display form "[0; 2, 2, 5, 27]".
    pub fn to_text(&self) -> String {
        let inner: Vec<String> = self.quotients.iter().map(|a| a.to_string()).collect();
        format!("[0; {}]", inner.join(", "))
    }

    /// CSV rows (k, a_k, p_k, q_k) with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,a_k,p_k,q_k\n");
        for k in 1..=self.len() {
            let (p, q) = &self.convergents[k];
            out.push_str(&format!("{k},{},{p},{q}\n", self.quotients[k - 1]));
        }
        out
    }
}

/// Builds the quotient sequence a_1 = 2, a_{n+1} = ⌊q_n^{a−2}⌋ for a target
/// a > 2, producing `n_quotients` quotients.
pub fn build_cf(a: &Rat, n_quotients: usize) -> Result<ContinuedFraction> {
    if a <= &rat_int(2) {
        return Err(Error::Domain(format!(
            "target {a} <= 2: the recurrence needs a > 2 (for a = 2 use the sqrt(2) oracle)"
        )));
    }
    if n_quotients < 1 {
        return Err(Error::Domain("need at least one quotient".into()));
    }
    let exp = a - rat_int(2);
    let mut cf = ContinuedFraction::new(vec![BigUint::from(2u32)])?;
    while cf.len() < n_quotients {
        let (_, q) = cf.convergent(cf.len())?;
        let next = floor_pow(q.magnitude(), &exp)?;
        // q_1 = 2 and a−2 > 0 keep every quotient ≥ 1.
        cf.push(next)?;
    }
    Ok(cf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    fn quots(cf: &ContinuedFraction) -> Vec<u64> {
        cf.quotients().iter().map(|a| a.to_u64().unwrap()).collect()
    }

    #[test]
    fn cubic_target_quotients() {
        let cf = build_cf(&rat_int(3), 5).unwrap();
        assert_eq!(quots(&cf), vec![2, 2, 5, 27, 734]);
        let dens: Vec<u64> = (1..=4).map(|k| cf.convergent(k).unwrap().1.to_u64().unwrap()).collect();
        assert_eq!(dens, vec![2, 5, 27, 734]);
    }

    #[test]
    fn five_halves_target_quotients() {
        let cf = build_cf(&rat(5, 2), 7).unwrap();
        assert_eq!(quots(&cf), vec![2, 1, 1, 2, 3, 6, 16]);
        let dens: Vec<u64> = (1..=7).map(|k| cf.convergent(k).unwrap().1.to_u64().unwrap()).collect();
        assert_eq!(dens, vec![2, 3, 5, 13, 44, 277, 4476]);
    }

    #[test]
    fn single_quotient_seed() {
        let cf = build_cf(&rat_int(3), 1).unwrap();
        assert_eq!(quots(&cf), vec![2]);
        assert_eq!(cf.value().unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_low_targets() {
        assert!(build_cf(&rat_int(2), 3).is_err());
        assert!(build_cf(&rat(3, 2), 3).is_err());
    }

    #[test]
    fn convergents_examples() {
        let cf = ContinuedFraction::new(vec![BigUint::from(2u32); 2]).unwrap();
        let cs = cf.convergents_upto(2).unwrap();
        assert_eq!(cs[0], (BigInt::from(1), BigInt::from(2)));
        assert_eq!(cs[1], (BigInt::from(2), BigInt::from(5)));
        assert!(cf.convergents_upto(3).is_err());
    }

    #[test]
    fn fibonacci_denominators() {
        let cf = ContinuedFraction::new(vec![BigUint::one(); 5]).unwrap();
        let dens: Vec<u64> = (1..=5).map(|k| cf.convergent(k).unwrap().1.to_u64().unwrap()).collect();
        assert_eq!(dens, vec![1, 2, 3, 5, 8]);
    }

    #[test]
    fn determinant_identity() {
        let cf = build_cf(&rat(5, 2), 8).unwrap();
        for k in 2..=8usize {
            let (p1, q1) = cf.convergent(k - 1).unwrap();
            let (p2, q2) = cf.convergent(k).unwrap();
            let det = &p2 * &q1 - &p1 * &q2;
            let expect = if k % 2 == 0 { BigInt::from(-1) } else { BigInt::one() };
            assert_eq!(det, expect, "determinant at k={k}");
            assert_eq!(p2.gcd(&q2), BigInt::one());
        }
    }

    #[test]
    fn cubic_target_quotient_equals_denominator() {
        // For a = 3 the exponent is 1, so a_{n+1} = q_n exactly.
        let cf = build_cf(&rat_int(3), 6).unwrap();
        for n in 1..6usize {
            let (_, qn) = cf.convergent(n).unwrap();
            assert_eq!(cf.quotient(n + 1).unwrap(), qn.magnitude());
        }
    }

    #[test]
    fn enclosure_bracket() {
        let cf = ContinuedFraction::new(vec![
            BigUint::from(2u32),
            BigUint::from(2u32),
            BigUint::from(5u32),
        ])
        .unwrap();
        let e = cf.enclosure(3).unwrap();
        assert_eq!(e.lo(), &rat(2, 5));
        assert_eq!(e.hi(), &rat(11, 27));
        assert_eq!(e.width(), rat(1, 135));
        assert!(cf.enclosure(1).is_err());
    }

    #[test]
    fn enclosures_nest() {
        let cf = build_cf(&rat(5, 2), 8).unwrap();
        for k in 3..=8usize {
            let outer = cf.enclosure(k - 1).unwrap();
            let inner = cf.enclosure(k).unwrap();
            assert!(outer.contains(&inner), "nesting failed at k={k}");
            let (q1, q2) = (cf.convergent(k - 1).unwrap().1, cf.convergent(k).unwrap().1);
            assert_eq!(inner.width(), Rat::new(BigInt::one(), q1 * q2));
        }
    }

    #[test]
    fn text_and_csv_exports() {
        let cf = build_cf(&rat_int(3), 4).unwrap();
        assert_eq!(cf.to_text(), "[0; 2, 2, 5, 27]");
        let csv = cf.to_csv();
        assert!(csv.starts_with("k,a_k,p_k,q_k\n"));
        assert!(csv.contains("4,27,299,734"));
    }
}
