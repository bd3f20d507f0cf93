//! The three representations of an exponent target and the constructive
//! conversions among them:
//!
//! 1. a computable rational sequence whose limsup is the target
//!    ([`SeqGen`]),
//! 2. a strictly decreasing rational sequence converging to it from above,
//!    presented through staged approximations ([`StagedDecreasing`]),
//! 3. a doubly-indexed staged table a(j, s) ([`StagedApproximation`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{ceil_rat, format_rat, parse_rat, pow2_inv, rat_from_bigint, rat_int, Rat};
use crate::stern::simplest_in;

/// A total deterministic rational sequence j ↦ a_j with an optional declared
/// horizon past which evaluation is an error.
#[derive(Clone)]
pub struct SeqGen {
    f: Arc<dyn Fn(usize) -> Rat + Send + Sync>,
    horizon: Option<usize>,
}

impl SeqGen {
    pub fn from_fn<F>(f: F, horizon: Option<usize>) -> Self
    where
        F: Fn(usize) -> Rat + Send + Sync + 'static,
    {
        SeqGen { f: Arc::new(f), horizon }
    }

    pub fn constant(r: Rat) -> Self {
        SeqGen::from_fn(move |_| r.clone(), None)
    }

    /// c + (−1)^j · amp/(j+1): oscillates around c with limsup c (amp > 0
    /// approaches from above on even indices).
    pub fn oscillate(c: Rat, amp: Rat) -> Self {
        SeqGen::from_fn(
            move |j| {
                let step = &amp / rat_int(j as i64 + 1);
                if j % 2 == 0 {
                    &c + step
                } else {
                    &c - step
                }
            },
            None,
        )
    }

    pub fn from_table(values: Vec<Rat>) -> Self {
        let horizon = values.len();
        SeqGen::from_fn(move |j| values[j].clone(), Some(horizon))
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn eval(&self, j: usize) -> Result<Rat> {
        if let Some(h) = self.horizon {
            if j >= h {
                return Err(Error::HorizonExhausted { index: j, horizon: h });
            }
        }
        Ok((self.f)(j))
    }
}

/// max_{lo ≤ j < hi} a_j — the finite-window stand-in for a limsup.
pub fn limsup_window_estimate(a: &SeqGen, lo: usize, hi: usize) -> Result<Rat> {
    if lo >= hi {
        return Err(Error::Domain(format!("empty window [{lo}, {hi})")));
    }
    let mut best = a.eval(lo)?;
    for j in lo + 1..hi {
        let v = a.eval(j)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Staged approximations b_j[s] of a strictly decreasing sequence; `None`
/// means the stage-s computation has not yet produced a value (read as the
/// default 2).
#[derive(Clone)]
pub struct StagedDecreasing {
    f: Arc<dyn Fn(usize, usize) -> Option<Rat> + Send + Sync>,
    stage_constant: bool,
}

impl StagedDecreasing {
    pub fn from_fn<F>(f: F, stage_constant: bool) -> Self
    where
        F: Fn(usize, usize) -> Option<Rat> + Send + Sync + 'static,
    {
        StagedDecreasing { f: Arc::new(f), stage_constant }
    }

    /// A sequence already stable at every stage (finite prefix known).
    pub fn from_stable(values: Vec<Rat>) -> Self {
        StagedDecreasing::from_fn(move |j, _| values.get(j).cloned(), true)
    }

    pub fn value(&self, j: usize, s: usize) -> Rat {
        (self.f)(j, s).unwrap_or_else(|| rat_int(2))
    }

    pub fn is_stage_constant(&self) -> bool {
        self.stage_constant
    }
}

/// The doubly-indexed table a(j, s): integer ceiling a(0,0), first column
/// constant, and each stage row strictly decreasing in j.
#[derive(Clone)]
pub struct StagedApproximation {
    source: StagedSource,
    ceiling: BigInt,
}

#[derive(Clone)]
enum StagedSource {
    General(Arc<dyn Fn(usize, usize) -> Rat + Send + Sync>),
    /// a(j, s) does not depend on s for s ≥ 1 (and row 0 is the ceiling).
    StageConstant(Arc<dyn Fn(usize) -> Rat + Send + Sync>),
}

impl StagedApproximation {
    pub fn from_fn<F>(ceiling: BigInt, f: F) -> Self
    where
        F: Fn(usize, usize) -> Rat + Send + Sync + 'static,
    {
        StagedApproximation { source: StagedSource::General(Arc::new(f)), ceiling }
    }

    /// Table whose rows are the same at every stage s ≥ 1; stage 0 is the
    /// constant ceiling row, per invariant (b).
    pub fn stage_constant<F>(f: F) -> Result<Self>
    where
        F: Fn(usize) -> Rat + Send + Sync + 'static,
    {
        let top = f(0);
        if !top.is_integer() {
            return Err(Error::Domain(format!(
                "staged ceiling a(0,0) = {top} is not an integer"
            )));
        }
        let ceiling = top.to_integer();
        Ok(StagedApproximation {
            source: StagedSource::StageConstant(Arc::new(f)),
            ceiling,
        })
    }

    /// The pure midpoint-fallback table: row M, (M+2)/2, (M+6)/4, … at every
    /// stage.
    pub fn pure_fallback(m: i64) -> Self {
        let col = move |j: usize| {
            let mut v = rat_int(m);
            let two = rat_int(2);
            for _ in 0..j {
                v = (v + &two) / &two;
            }
            v
        };
        StagedApproximation {
            source: StagedSource::StageConstant(Arc::new(col)),
            ceiling: BigInt::from(m),
        }
    }

    /// Finite grid storage (CSV import); indices past the grid clamp to its
    /// last row/stage.
    pub fn from_grid(grid: BTreeMap<(usize, usize), Rat>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Domain("empty staged grid".into()));
        }
        let jmax = grid.keys().map(|k| k.0).max().unwrap();
        let smax = grid.keys().map(|k| k.1).max().unwrap();
        let top = grid
            .get(&(0, 0))
            .ok_or_else(|| Error::Domain("staged grid missing (0,0)".into()))?;
        if !top.is_integer() {
            return Err(Error::Domain(format!(
                "staged ceiling a(0,0) = {top} is not an integer"
            )));
        }
        let ceiling = top.to_integer();
        let f = move |j: usize, s: usize| {
            let j = j.min(jmax);
            let s = s.min(smax);
            grid.get(&(j, s))
                .cloned()
                .unwrap_or_else(|| rat_int(2))
        };
        Ok(StagedApproximation { source: StagedSource::General(Arc::new(f)), ceiling })
    }

    pub fn value(&self, j: usize, s: usize) -> Rat {
        match &self.source {
            StagedSource::General(f) => f(j, s),
            StagedSource::StageConstant(f) => {
                if s == 0 {
                    rat_from_bigint(self.ceiling.clone())
                } else {
                    f(j)
                }
            }
        }
    }

    pub fn ceiling(&self) -> &BigInt {
        &self.ceiling
    }

    pub fn is_stage_constant(&self) -> bool {
        matches!(self.source, StagedSource::StageConstant(_))
    }
}

/// One grid-check finding from [`validate_staged`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StagedViolation {
    CeilingExceeded { j: usize, s: usize },
    StageZeroNotCeiling { j: usize },
    RowNotStrictlyDecreasing { j: usize, s: usize },
}

impl fmt::Display for StagedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StagedViolation::CeilingExceeded { j, s } => {
                write!(f, "a({j},{s}) exceeds the ceiling a(0,0)")
            }
            StagedViolation::StageZeroNotCeiling { j } => {
                write!(f, "a({j},0) differs from a(0,0)")
            }
            StagedViolation::RowNotStrictlyDecreasing { j, s } => {
                write!(f, "a({j},{s}) is not strictly below a({},{s})", j - 1)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StagedReport {
    pub violations: Vec<StagedViolation>,
    /// Per j ≤ jmax: the last stage s ≤ smax at which a(j,·) changed.
    pub last_change: Vec<Option<usize>>,
}

impl StagedReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks invariants (a)–(c) on the finite grid [0,jmax] × [0,smax] and
/// reports empirical stabilization stages.  Violations are reported, never
/// thrown.
pub fn validate_staged(a: &StagedApproximation, jmax: usize, smax: usize) -> StagedReport {
    let mut violations = Vec::new();
    let ceiling = rat_from_bigint(a.ceiling().clone());
    for s in 0..=smax {
        let mut prev: Option<Rat> = None;
        for j in 0..=jmax {
            let v = a.value(j, s);
            if v > ceiling {
                violations.push(StagedViolation::CeilingExceeded { j, s });
            }
            if s == 0 && v != ceiling {
                violations.push(StagedViolation::StageZeroNotCeiling { j });
            }
            if let Some(p) = &prev {
                if s > 0 && &v >= p {
                    violations.push(StagedViolation::RowNotStrictlyDecreasing { j, s });
                }
            }
            prev = Some(v);
        }
    }
    let mut last_change = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let mut last = None;
        for s in 1..=smax {
            if a.value(j, s) != a.value(j, s - 1) {
                last = Some(s);
            }
        }
        last_change.push(last);
    }
    StagedReport { violations, last_change }
}

/// Table → limsup sequence: s ↦ a(ℓ(s), s) where ℓ(0) = 0 and ℓ(s) is the
/// least j ≤ s−1 with a(j, s−1) ≠ a(j, s), defaulting to s−1 when no row
/// changed.
pub fn staged_to_limsup(a: &StagedApproximation) -> SeqGen {
    let a = a.clone();
    SeqGen::from_fn(
        move |s| {
            if s == 0 {
                return a.value(0, 0);
            }
            let ell = if a.is_stage_constant() {
                // Rows never change between stages s−1, s ≥ 1; stage 0 → 1
                // changes every row except row 0, making ℓ(1) = ... the rule
                // below still applies, so only s ≥ 2 can take the shortcut.
                if s >= 2 {
                    s - 1
                } else {
                    (0..s)
                        .find(|&j| a.value(j, s - 1) != a.value(j, s))
                        .unwrap_or(s - 1)
                }
            } else {
                (0..s)
                    .find(|&j| a.value(j, s - 1) != a.value(j, s))
                    .unwrap_or(s - 1)
            };
            a.value(ell, s)
        },
        None,
    )
}

/// Staged-decreasing → table, with the midpoint fallback: a(0,s) = M and,
/// while the approximations form a strictly decreasing chain above 2 below
/// M, a(j,s) tracks the chain; as soon as the chain breaks the row continues
/// by midpoints toward 2, which keeps every row strictly decreasing.
pub fn decreasing_to_staged(b: &StagedDecreasing, m: i64) -> Result<StagedApproximation> {
    if m <= 2 {
        return Err(Error::Domain(format!("staged ceiling M = {m} must exceed 2")));
    }
    let two = rat_int(2);
    let m_rat = rat_int(m);
    let row = {
        let b = b.clone();
        let two = two.clone();
        let m_rat = m_rat.clone();
        move |j: usize, s: usize| -> Rat {
            let mut prev = m_rat.clone();
            let mut chain_ok = true;
            for row_j in 1..=j {
                let approx = b.value(row_j - 1, s);
                // The chain survives while b_0[s] > b_1[s] > … stays strictly
                // decreasing, above 2, and below M.
                chain_ok = chain_ok && approx > two && approx < prev;
                prev = if chain_ok { approx } else { (&prev + &two) / &two };
            }
            prev
        }
    };
    if b.is_stage_constant() {
        // Row values do not depend on the stage; memoize the single column
        // together with the chain flag (a broken chain stays broken).
        let b = b.clone();
        let cache: Mutex<Vec<(Rat, bool)>> = Mutex::new(vec![(m_rat.clone(), true)]);
        let col = move |j: usize| -> Rat {
            let mut cache = cache.lock().unwrap();
            for next in cache.len()..=j {
                let (prev, prev_ok) = cache[next - 1].clone();
                let approx = b.value(next - 1, 1);
                let chain_ok = prev_ok && approx > two && approx < prev;
                let v = if chain_ok { approx } else { (&prev + &two) / &two };
                cache.push((v, chain_ok));
            }
            cache[j].0.clone()
        };
        StagedApproximation::stage_constant(col)
    } else {
        Ok(StagedApproximation::from_fn(BigInt::from(m), move |j, s| row(j, s)))
    }
}

/// Limsup sequence → staged decreasing, simulating the oracle construction
/// with every unbounded search restricted to indices below `horizon`:
/// b_0 = 1 + ⌈max_{j<horizon} a_j⌉, and each b_{n+1} is the first rational
/// in the canonical enumeration strictly between the tail supremum
/// max_{min(n+1, horizon−1) ≤ j < horizon} a_j and b_n.
pub fn limsup_to_decreasing(a: &SeqGen, horizon: usize) -> Result<StagedDecreasing> {
    if horizon < 1 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let mut vals = Vec::with_capacity(horizon);
    for j in 0..horizon {
        vals.push(a.eval(j)?);
    }
    let mut suffix_max = vals.clone();
    for j in (0..horizon.saturating_sub(1)).rev() {
        if suffix_max[j + 1] > suffix_max[j] {
            suffix_max[j] = suffix_max[j + 1].clone();
        }
    }
    let b0 = ceil_rat(&suffix_max[0]) + Rat::one();
    let cache: Mutex<Vec<Rat>> = Mutex::new(vec![b0]);
    let f = move |j: usize, _s: usize| -> Option<Rat> {
        let mut cache = cache.lock().unwrap();
        while cache.len() <= j {
            let n = cache.len();
            let tail_sup = &suffix_max[n.min(horizon - 1)];
            let prev = cache.last().unwrap().clone();
            cache.push(simplest_in(tail_sup, &prev));
        }
        Some(cache[j].clone())
    };
    Ok(StagedDecreasing::from_fn(f, true))
}

/// The rational-limit variant: when the limsup is known to be the rational
/// a, the sequence a + 1/2^j is already strictly decreasing to it.
pub fn limsup_to_decreasing_rational(limit: &Rat) -> StagedDecreasing {
    let limit = limit.clone();
    StagedDecreasing::from_fn(move |j, _s| Some(&limit + pow2_inv(j as u64)), true)
}

/// CSV export of a staged table over the grid [0,jmax] × [0,smax];
/// header `j,s,value`.
pub fn staged_to_csv(a: &StagedApproximation, jmax: usize, smax: usize) -> String {
    let mut out = String::from("j,s,value\n");
    for j in 0..=jmax {
        for s in 0..=smax {
            out.push_str(&format!("{j},{s},{}\n", format_rat(&a.value(j, s))));
        }
    }
    out
}

/// CSV import matching [`staged_to_csv`].
pub fn staged_from_csv(text: &str) -> Result<StagedApproximation> {
    let mut grid = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("j,")) {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let j: usize = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad j on line {}", lineno + 1)))?;
        let s: usize = parts
            .next()
            .and_then(|p| p.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad s on line {}", lineno + 1)))?;
        let v = parse_rat(
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing value on line {}", lineno + 1)))?,
        )?;
        grid.insert((j, s), v);
    }
    StagedApproximation::from_grid(grid)
}

/// CSV export of a plain sequence prefix; header `j,value`.
pub fn seq_to_csv(a: &SeqGen, len: usize) -> Result<String> {
    let mut out = String::from("j,value\n");
    for j in 0..len {
        out.push_str(&format!("{j},{}\n", format_rat(&a.eval(j)?)));
    }
    Ok(out)
}

/// CSV import matching [`seq_to_csv`] (rows must be consecutive from j = 0).
pub fn seq_from_csv(text: &str) -> Result<SeqGen> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("j,")) {
            continue;
        }
        let (j_part, v_part) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("missing comma on line {}", lineno + 1)))?;
        let j: usize = j_part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index on line {}", lineno + 1)))?;
        if j != values.len() {
            return Err(Error::Parse(format!(
                "non-consecutive index {j} on line {}",
                lineno + 1
            )));
        }
        values.push(parse_rat(v_part)?);
    }
    if values.is_empty() {
        return Err(Error::Parse("empty sequence file".into()));
    }
    Ok(SeqGen::from_table(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Signed;

    #[test]
    fn window_estimate_examples() {
        let osc = SeqGen::oscillate(rat_int(3), rat_int(1));
        assert_eq!(limsup_window_estimate(&osc, 50, 100).unwrap(), rat_int(3) + rat(1, 51));
        let c = SeqGen::constant(rat_int(2));
        assert_eq!(limsup_window_estimate(&c, 0, 10).unwrap(), rat_int(2));
        let dec = SeqGen::from_fn(|j| rat_int(-(j as i64)), None);
        assert_eq!(limsup_window_estimate(&dec, 0, 5).unwrap(), rat_int(0));
    }

    #[test]
    fn staged_to_limsup_no_changes() {
        // a(j,s) = 3 + 1/(j+1) for every stage: ℓ(s) = s−1, output 3 + 1/s.
        let a = StagedApproximation::stage_constant(|j| rat_int(3) + rat(1, j as i64 + 1)).unwrap();
        let seq = staged_to_limsup(&a);
        for s in 1..30usize {
            assert_eq!(seq.eval(s).unwrap(), rat_int(3) + rat(1, s as i64));
        }
        assert_eq!(limsup_window_estimate(&seq, 100, 200).unwrap(), rat_int(3) + rat(1, 100));
    }

    #[test]
    fn staged_to_limsup_constant_table() {
        let a = StagedApproximation::from_fn(BigInt::from(4), |_, _| rat_int(4));
        let seq = staged_to_limsup(&a);
        for s in 0..10 {
            assert_eq!(seq.eval(s).unwrap(), rat_int(4));
        }
    }

    #[test]
    fn staged_to_limsup_single_change() {
        // A change at (j=2, s=5) makes ℓ(5) = 2.
        let a = StagedApproximation::from_fn(BigInt::from(9), |j, s| {
            let base = rat_int(9) - rat_int(j as i64);
            if j == 2 && s >= 5 {
                base - rat(1, 2)
            } else {
                base
            }
        });
        let seq = staged_to_limsup(&a);
        assert_eq!(seq.eval(5).unwrap(), a.value(2, 5));
    }

    #[test]
    fn decreasing_to_staged_monotone_chain() {
        let b = StagedDecreasing::from_stable(vec![rat(7, 2), rat_int(3)]);
        let a = decreasing_to_staged(&b, 4).unwrap();
        assert_eq!(a.value(0, 1), rat_int(4));
        assert_eq!(a.value(1, 1), rat(7, 2));
        assert_eq!(a.value(2, 1), rat_int(3));
        // Chain exhausted at j = 3: midpoint fallback from 3.
        assert_eq!(a.value(3, 1), rat(5, 2));
    }

    #[test]
    fn decreasing_to_staged_broken_chain() {
        // b_0 undefined (default 2): chain broken immediately, pure midpoints.
        let b = StagedDecreasing::from_fn(|j, _| if j == 1 { Some(rat_int(2)) } else { None }, true);
        let a = decreasing_to_staged(&b, 4).unwrap();
        assert_eq!(a.value(1, 1), rat_int(3));
        assert_eq!(a.value(2, 1), rat(5, 2));
    }

    #[test]
    fn decreasing_to_staged_pure_fallback_row() {
        let b = StagedDecreasing::from_fn(|_, _| None, true);
        let a = decreasing_to_staged(&b, 4).unwrap();
        let expect = [rat_int(4), rat_int(3), rat(5, 2), rat(9, 4)];
        for (j, e) in expect.iter().enumerate() {
            assert_eq!(&a.value(j, 3), e);
        }
        let direct = StagedApproximation::pure_fallback(4);
        for j in 0..6 {
            assert_eq!(a.value(j, 2), direct.value(j, 2));
        }
    }

    #[test]
    fn decreasing_to_staged_always_validates() {
        let b = StagedDecreasing::from_stable(vec![rat(7, 2), rat_int(3), rat(8, 3)]);
        let a = decreasing_to_staged(&b, 4).unwrap();
        let report = validate_staged(&a, 8, 6);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn validate_staged_detects_violations() {
        let bad = StagedApproximation::from_fn(BigInt::from(4), |j, s| {
            if j == 1 && s > 0 {
                rat_int(4) // not strictly below a(0,s)
            } else if j == 3 && s == 0 {
                rat_int(3) // stage-0 row must equal the ceiling
            } else {
                rat_int(4) - rat(j as i64, 2)
            }
        });
        let report = validate_staged(&bad, 4, 3);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, StagedViolation::RowNotStrictlyDecreasing { j: 1, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, StagedViolation::StageZeroNotCeiling { j: 3 })));
    }

    #[test]
    fn limsup_to_decreasing_oscillating() {
        let osc = SeqGen::oscillate(rat_int(3), rat_int(1));
        let b = limsup_to_decreasing(&osc, 100).unwrap();
        assert_eq!(b.value(0, 1), rat_int(5));
        let mut prev = b.value(0, 1);
        for n in 1..60 {
            let v = b.value(n, 1);
            assert!(v < prev, "b must be strictly decreasing");
            assert!(v > rat_int(3), "b_{n} = {v} dipped to the limsup");
            prev = v;
        }
    }

    #[test]
    fn limsup_to_decreasing_constant_three() {
        let c = SeqGen::constant(rat_int(3));
        let b = limsup_to_decreasing(&c, 50).unwrap();
        let mut min = b.value(0, 1);
        for n in 1..20 {
            let v = b.value(n, 1);
            assert!(v > rat_int(3));
            if v < min {
                min = v;
            }
        }
        assert!(&min - rat_int(3) <= rat(1, 4), "min over 20 steps was {min}");
    }

    #[test]
    fn limsup_to_decreasing_tiny_horizon() {
        let c = SeqGen::constant(rat_int(3));
        let b = limsup_to_decreasing(&c, 1).unwrap();
        assert_eq!(b.value(0, 1), rat_int(4));
        let next = b.value(1, 1);
        assert!(next > rat_int(3) && next < rat_int(4));
    }

    #[test]
    fn limsup_to_decreasing_respects_generator_horizon() {
        let t = SeqGen::from_table(vec![rat_int(1), rat_int(2)]);
        assert!(matches!(
            limsup_to_decreasing(&t, 5),
            Err(Error::HorizonExhausted { .. })
        ));
    }

    #[test]
    fn rational_variant_is_strictly_decreasing_to_limit() {
        let b = limsup_to_decreasing_rational(&rat(5, 2));
        assert_eq!(b.value(0, 1), rat(7, 2));
        assert_eq!(b.value(3, 1), rat(5, 2) + rat(1, 8));
        assert!(b.value(10, 1) > rat(5, 2));
    }

    #[test]
    fn csv_round_trip() {
        let b = StagedDecreasing::from_stable(vec![rat(7, 2), rat_int(3)]);
        let a = decreasing_to_staged(&b, 4).unwrap();
        let csv = staged_to_csv(&a, 4, 3);
        let back = staged_from_csv(&csv).unwrap();
        for j in 0..=4 {
            for s in 0..=3 {
                assert_eq!(a.value(j, s), back.value(j, s));
            }
        }
        let report = validate_staged(&back, 4, 3);
        assert!(report.passed());
    }

    #[test]
    fn seq_csv_round_trip() {
        let a = SeqGen::oscillate(rat_int(3), rat(1, 2));
        let csv = seq_to_csv(&a, 10).unwrap();
        let back = seq_from_csv(&csv).unwrap();
        for j in 0..10 {
            assert_eq!(a.eval(j).unwrap(), back.eval(j).unwrap());
        }
        assert!(back.eval(10).is_err());
    }

    #[test]
    fn round_trip_limsup_recovered() {
        // Oscillating target with limsup 3 through all three representations.
        let osc = SeqGen::oscillate(rat_int(3), rat_int(1));
        let b = limsup_to_decreasing(&osc, 200).unwrap();
        let a = decreasing_to_staged(&b, 6).unwrap();
        let back = staged_to_limsup(&a);
        let est = limsup_window_estimate(&back, 100, 190).unwrap();
        let err = (est - rat_int(3)).abs();
        assert!(err < rat(1, 20), "window estimate off by {err}");
    }
}
