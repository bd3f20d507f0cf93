//! Nested interval levels E_0 ⊇ E_1 ⊇ … with equal child counts per
//! parent, and the exact mass distribution ν assigning 1/(m_1·…·m_k) to
//! each k-level interval.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cantor::bands::{length_within_power_bound, level_union};
use crate::error::{Error, Result};
use crate::logs::log2_bounds_uint;
use crate::rational::{format_rat, rat, rat_int, Interval, Rat};
use crate::seq::StagedApproximation;

/// Where the per-level exponent b_k comes from.
#[derive(Clone)]
pub enum BSource {
    /// b_k = the same rational at every level.
    Constant(Rat),
    /// b_k read off a staged table by the change-detection rule
    /// (`compute_bk`).
    Staged(StagedApproximation),
}

impl BSource {
    pub fn describe(&self) -> String {
        match self {
            BSource::Constant(b) => format!("const {b}"),
            BSource::Staged(_) => "staged table".into(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScheduleMode {
    /// Strict construction: M_k = M_{k−1}^k, no pruning, the per-parent
    /// child-count lower bound is asserted.
    Strict,
    /// Small-M schedules: arbitrary increasing M, childless parents are
    /// pruned bottom-up, every geometric invariant verified rather than
    /// guaranteed.
    DeskScale,
}

/// The parameters of a level tree: the M-schedule, the b-exponent source,
/// the uniform lower bound beta > 2, and the construction mode.
#[derive(Clone)]
pub struct FractalSchedule {
    m: Vec<u64>,
    b_source: BSource,
    beta: Rat,
    mode: ScheduleMode,
}

impl FractalSchedule {
    pub fn new(m: Vec<u64>, b_source: BSource, beta: Rat, mode: ScheduleMode) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Domain("schedule needs at least one M".into()));
        }
        if m[0] < 3 {
            return Err(Error::Domain("M_1 must be at least 3".into()));
        }
        if m.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("M schedule must be strictly increasing".into()));
        }
        if beta <= rat_int(2) {
            return Err(Error::Domain(format!("beta must exceed 2, got {beta}")));
        }
        if mode == ScheduleMode::Strict {
            for k in 1..m.len() {
                let expect = (m[k - 1] as u128).checked_pow((k + 1) as u32);
                if expect != Some(m[k] as u128) {
                    return Err(Error::Domain(format!(
                        "strict schedule requires M_{} = M_{}^{}, got {}",
                        k + 1,
                        k,
                        k + 1,
                        m[k]
                    )));
                }
            }
        }
        Ok(FractalSchedule { m, b_source, beta, mode })
    }

    pub fn m(&self) -> &[u64] {
        &self.m
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn mode(&self) -> ScheduleMode {
        self.mode
    }

    pub fn depth_limit(&self) -> usize {
        self.m.len()
    }

    /// b_k for level k ≥ 1, range-checked against beta (and against the
    /// table ceiling when staged).
    pub fn b_k(&self, k: usize) -> Result<Rat> {
        let b = match &self.b_source {
            BSource::Constant(b) => b.clone(),
            BSource::Staged(a) => compute_bk(a, k)?,
        };
        if b <= self.beta {
            return Err(Error::Domain(format!(
                "b_{k} = {b} does not exceed the lower bound beta = {}",
                self.beta
            )));
        }
        if let BSource::Staged(a) = &self.b_source {
            if &b > &Rat::from_integer(a.ceiling().clone()) {
                return Err(Error::Domain(format!("b_{k} = {b} exceeds the table ceiling")));
            }
        }
        Ok(b)
    }
}

/// The change-detection rule for b_k: take the least j < k where row j+1
/// of the staged table differs between stages k−1 and k (j = k−1 when no
/// row changed), then b_k = a(j, k).
pub fn compute_bk(a: &StagedApproximation, k: usize) -> Result<Rat> {
    if k < 1 {
        return Err(Error::Domain("compute_bk needs k >= 1".into()));
    }
    let mut j = k - 1;
    for cand in 0..k {
        if a.value(cand + 1, k) != a.value(cand + 1, k - 1) {
            j = cand;
            break;
        }
    }
    Ok(a.value(j, k))
}

/// One level of the tree.
#[derive(Clone, Debug)]
pub struct CantorLevel {
    pub k: usize,
    pub intervals: Vec<Interval>,
    /// Children per parent at this level (m_1 counts children of [0,1]).
    pub m_k: u64,
    /// Gap lower bound 1/(8 M_k²); 1 for the root.
    pub g_k: Rat,
    pub b_k: Rat,
    /// M_k; 0 for the root.
    pub m_big: u64,
}

impl CantorLevel {
    pub fn root() -> Self {
        CantorLevel {
            k: 0,
            intervals: vec![Interval::new(Rat::zero(), Rat::one()).unwrap()],
            m_k: 1,
            g_k: Rat::one(),
            b_k: Rat::zero(),
            m_big: 0,
        }
    }
}

fn gap_bound(m: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(8 * m * m))
}

/// Upper bound on ln M via the certified log2 and ln 2 < 6932/10000.
fn ln_upper(m: u64) -> Result<Rat> {
    let (_, hi) = log2_bounds_uint(&BigUint::from(m), 24)?;
    Ok(hi * rat(6932, 10_000))
}

/// Children of `parent` drawn from the sorted candidate list: the
/// candidates fully contained in it.
fn contained_children(candidates: &[Interval], parent: &Interval) -> Vec<Interval> {
    candidates.iter().filter(|c| parent.contains(c)).cloned().collect()
}

/// Splits every parent into children from H_{M_next}(b_next) and equalizes
/// to the minimum per-parent count, keeping the leftmost children.
///
/// Strict mode additionally requires 3/|I| < M_next for every parent
/// and asserts the child-count lower bound M_next²|I|/(6 ln M_next); a
/// childless parent is an error.  Desk-scale pruning of childless parents
/// happens one tree level up, in [`build_levels`].
pub fn refine_level(
    parent: &CantorLevel,
    m_next: u64,
    b_next: &Rat,
    mode: ScheduleMode,
) -> Result<CantorLevel> {
    let candidates = level_union(m_next, b_next)?;
    if mode == ScheduleMode::Strict {
        for iv in &parent.intervals {
            // 3/|I| < M_next  ⟺  3 < M_next · |I|
            if rat_int(3) >= iv.width() * rat_int(m_next as i64) {
                return Err(Error::RefinementFailed(format!(
                    "parent {} too short for M = {m_next} (needs 3/|I| < M)",
                    iv.to_text()
                )));
            }
        }
    }
    let mut per_parent: Vec<Vec<Interval>> = Vec::with_capacity(parent.intervals.len());
    for iv in &parent.intervals {
        let children = contained_children(&candidates, iv);
        if children.is_empty() {
            return Err(Error::RefinementFailed(format!(
                "parent {} received no level-{} children",
                iv.to_text(),
                parent.k + 1
            )));
        }
        per_parent.push(children);
    }
    let m = per_parent.iter().map(|c| c.len()).min().unwrap() as u64;
    if mode == ScheduleMode::Strict {
        let ln_hi = ln_upper(m_next)?;
        for (iv, children) in parent.intervals.iter().zip(&per_parent) {
            // count ≥ M² |I| / (6 ln M), checked with ln from above so the
            // required count is never understated.
            let bound = rat_int((m_next * m_next) as i64) * iv.width() / (rat_int(6) * &ln_hi);
            if rat_int(children.len() as i64) < bound {
                return Err(Error::RefinementFailed(format!(
                    "parent {} has {} children, below the bound {}",
                    iv.to_text(),
                    children.len(),
                    format_rat(&bound)
                )));
            }
        }
    }
    let mut intervals = Vec::new();
    for mut children in per_parent {
        children.truncate(m as usize);
        intervals.extend(children);
    }
    Ok(CantorLevel {
        k: parent.k + 1,
        intervals,
        m_k: m,
        g_k: gap_bound(m_next),
        b_k: b_next.clone(),
        m_big: m_next,
    })
}

/// The built tree with its exact mass distribution.
pub struct MassDistribution {
    levels: Vec<CantorLevel>,
}

/// Index of the parent of `child` within the sorted `parents`, if any.
fn parent_index(parents: &[Interval], child: &Interval) -> Option<usize> {
    parents.iter().position(|p| p.contains(child))
}

/// Builds the tree to `depth` levels.  In desk-scale mode, parents that
/// end up childless are pruned and the equal-count property is restored
/// bottom-up (dropping rightmost siblings first, keeping leftmost).
pub fn build_levels(schedule: &FractalSchedule, depth: usize) -> Result<MassDistribution> {
    if depth > schedule.depth_limit() {
        return Err(Error::Domain(format!(
            "schedule provides {} levels, requested {depth}",
            schedule.depth_limit()
        )));
    }
    let mut levels = vec![CantorLevel::root()];
    for k in 1..=depth {
        let b_k = schedule.b_k(k)?;
        let m_big = schedule.m()[k - 1];
        match refine_level(levels.last().unwrap(), m_big, &b_k, schedule.mode()) {
            Ok(level) => levels.push(level),
            Err(Error::RefinementFailed(msg)) if schedule.mode() == ScheduleMode::DeskScale => {
                // Prune childless parents, then rebuild the child level.
                let candidates = level_union(m_big, &b_k)?;
                let keep: Vec<Interval> = levels
                    .last()
                    .unwrap()
                    .intervals
                    .iter()
                    .filter(|iv| !contained_children(&candidates, iv).is_empty())
                    .cloned()
                    .collect();
                if keep.is_empty() {
                    return Err(Error::RefinementFailed(format!(
                        "every level-{} parent is childless at M = {m_big}: {msg}",
                        k - 1
                    )));
                }
                let last = levels.last_mut().unwrap();
                last.intervals = keep;
                reequalize(&mut levels)?;
                let level = refine_level(levels.last().unwrap(), m_big, &b_k, schedule.mode())?;
                levels.push(level);
            }
            Err(e) => return Err(e),
        }
    }
    let dist = MassDistribution { levels };
    dist.verify()?;
    Ok(dist)
}

/// Restores the equal-child-count property after pruning, from the leaves
/// upward: each pass recomputes per-parent counts, drops parents that lost
/// all children, and truncates to the leftmost minimum.
fn reequalize(levels: &mut Vec<CantorLevel>) -> Result<()> {
    loop {
        let mut changed = false;
        for k in (1..levels.len()).rev() {
            let (upper, lower) = levels.split_at_mut(k);
            let parents = &mut upper[k - 1];
            let level = &mut lower[0];
            let mut groups: Vec<Vec<Interval>> = vec![Vec::new(); parents.intervals.len()];
            for child in &level.intervals {
                match parent_index(&parents.intervals, child) {
                    Some(i) => groups[i].push(child.clone()),
                    None => changed = true, // orphan: its parent was pruned
                }
            }
            let survivors: Vec<usize> =
                (0..groups.len()).filter(|i| !groups[*i].is_empty()).collect();
            if survivors.is_empty() {
                return Err(Error::RefinementFailed(format!(
                    "pruning emptied level {}",
                    k - 1
                )));
            }
            if survivors.len() != parents.intervals.len() {
                parents.intervals =
                    survivors.iter().map(|&i| parents.intervals[i].clone()).collect();
                changed = true;
            }
            let m = survivors.iter().map(|&i| groups[i].len()).min().unwrap() as u64;
            let mut rebuilt = Vec::new();
            for &i in &survivors {
                let mut g = std::mem::take(&mut groups[i]);
                g.truncate(m as usize);
                rebuilt.extend(g);
            }
            if rebuilt.len() != level.intervals.len() || m != level.m_k {
                changed = true;
            }
            level.intervals = rebuilt;
            level.m_k = m;
        }
        if !changed {
            return Ok(());
        }
    }
}

impl MassDistribution {
    pub fn levels(&self) -> &[CantorLevel] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Mass of a single k-level interval: 1/(m_1 · … · m_k).
    pub fn level_mass(&self, k: usize) -> Result<Rat> {
        if k >= self.levels.len() {
            return Err(Error::Domain(format!("level {k} not built (depth {})", self.depth())));
        }
        let mut prod = BigInt::one();
        for level in &self.levels[1..=k] {
            prod *= BigInt::from(level.m_k);
        }
        Ok(Rat::new(BigInt::one(), prod))
    }

    /// Verifies every structural invariant exactly: sorted disjoint
    /// intervals, nesting, gap and length bounds, equal child counts, and
    /// mass conservation at every level.
    pub fn verify(&self) -> Result<()> {
        for (k, level) in self.levels.iter().enumerate().skip(1) {
            for w in level.intervals.windows(2) {
                let gap = w[1].lo() - w[0].hi();
                if gap < level.g_k {
                    return Err(Error::RefinementFailed(format!(
                        "level {k} gap {} below g = {}",
                        format_rat(&gap),
                        format_rat(&level.g_k)
                    )));
                }
            }
            for iv in &level.intervals {
                if !length_within_power_bound(&iv.width(), level.m_big, &level.b_k)? {
                    return Err(Error::RefinementFailed(format!(
                        "level {k} interval {} exceeds 2/M^b",
                        iv.to_text()
                    )));
                }
            }
            let parents = &self.levels[k - 1].intervals;
            let mut counts = vec![0u64; parents.len()];
            for child in &level.intervals {
                match parent_index(parents, child) {
                    Some(i) => counts[i] += 1,
                    None => {
                        return Err(Error::RefinementFailed(format!(
                            "level {k} interval {} has no parent",
                            child.to_text()
                        )))
                    }
                }
            }
            if counts.iter().any(|&c| c != level.m_k) {
                return Err(Error::RefinementFailed(format!(
                    "level {k} child counts {counts:?} are not uniformly {}",
                    level.m_k
                )));
            }
            // Mass conservation: (#intervals) · level_mass = 1 exactly.
            let total = rat_int(level.intervals.len() as i64) * self.level_mass(k)?;
            if total != Rat::one() {
                return Err(Error::RefinementFailed(format!(
                    "level {k} total mass {} is not 1",
                    format_rat(&total)
                )));
            }
        }
        Ok(())
    }

    /// Exact ν-mass of S under the desk-scale convention: deepest-level
    /// intervals fully inside S contribute their whole mass, intervals
    /// straddling a boundary contribute proportionally to the overlap.
    pub fn nu_measure(&self, s: &Interval) -> Result<Rat> {
        let deepest = self.levels.last().unwrap();
        let w = self.level_mass(self.depth())?;
        let mut total = Rat::zero();
        for iv in &deepest.intervals {
            if s.contains(iv) {
                total += &w;
            } else if s.overlaps(iv) {
                total += &w * s.overlap_len(iv) / iv.width();
            }
        }
        Ok(total)
    }

    /// ν-mass of a disjoint sorted union of intervals.
    pub fn nu_measure_union(&self, parts: &[Interval]) -> Result<Rat> {
        let mut total = Rat::zero();
        for p in parts {
            total += self.nu_measure(p)?;
        }
        Ok(total)
    }

    /// A tree truncated to `depth` levels, sharing the same prefix; used
    /// for stabilization checks.
    pub fn truncated(&self, depth: usize) -> Result<MassDistribution> {
        if depth >= self.levels.len() {
            return Err(Error::Domain("truncation depth exceeds built depth".into()));
        }
        Ok(MassDistribution { levels: self.levels[..=depth].to_vec() })
    }

    /// JSON export: levels[k] = {M, b, m, g, intervals: [[lo, hi], …]},
    /// rationals as "num/den" strings.
    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .skip(1)
            .map(|level| {
                json!({
                    "M": level.m_big,
                    "b": format_rat(&level.b_k),
                    "m": level.m_k,
                    "g": format_rat(&level.g_k),
                    "intervals": level
                        .intervals
                        .iter()
                        .map(|iv| json!([format_rat(iv.lo()), format_rat(iv.hi())]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "depth": self.depth(), "levels": levels })
    }
}

/// Exact check of the derived gap inequality 1/(4M²) − 2/M^b ≥ 1/(8M²)
/// whenever M^{b−2} ≥ 16 (cross-multiplied, no irrational powers).
pub fn gap_inequality_holds(m: u64, b: &Rat) -> Result<bool> {
    // M^{b−2} ≥ 16 ⟺ M^{u−2v} ≥ 16^v with b = u/v.
    let u: u32 = b.numer().to_u32().ok_or_else(|| Error::Overflow("exponent".into()))?;
    let v: u32 = b.denom().to_u32().ok_or_else(|| Error::Overflow("exponent".into()))?;
    if u <= 2 * v {
        return Ok(false);
    }
    let lhs = BigUint::from(m).pow(u - 2 * v);
    let rhs = BigUint::from(16u32).pow(v);
    if lhs < rhs {
        return Ok(false);
    }
    // Then 2/M^b ≤ 1/(8M²), so 1/(4M²) − 2/M^b ≥ 1/(8M²).
    Ok(true)
}
