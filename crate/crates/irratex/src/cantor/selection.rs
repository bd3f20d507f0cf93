//! The nested-interval selection loop: at each step s it picks the
//! leftmost level-s interval whose overlap with the currently constrained
//! well-approximable sets is certifiably small, producing a rational
//! enclosure sequence for a point of the fractal with the prescribed
//! approximation behavior.
//!
//! Every infinite band union is truncated: bands with denominators up to
//! the configured cap are intersected explicitly, everything beyond is
//! bounded by an analytic tail certificate added on the measured side, so
//! each "< threshold" comparison is accepted only conservatively.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};

use crate::cantor::bands::approximation_band;
use crate::cantor::holder::holder_check;
use crate::cantor::levels::{build_levels, FractalSchedule, MassDistribution};
use crate::cantor::vsets::{choose_h, merge_sorted, v_tail_bound};
use crate::error::{Error, Result};
use crate::rational::{format_rat, rat_int, Interval, Rat};
use crate::seq::{validate_staged, StagedApproximation};

#[derive(Debug, Clone)]
pub struct SelectionConfig {
    /// Denominator cap for explicit band enumeration; larger denominators
    /// are covered by tail certificates.
    pub qcap: u64,
    /// Consecutive fallback steps after which the trace is marked stalled.
    pub stall_limit: usize,
    /// Sampling parameters for the empirical Hölder constants.
    pub holder_samples: u64,
    pub seed: u64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig { qcap: 512, stall_limit: 8, holder_samples: 200, seed: 7 }
    }
}

/// One tested candidate at a step.
#[derive(Debug, Clone)]
pub struct MeasureRecord {
    pub candidate: Interval,
    /// ν of the explicitly enumerated truncated union inside the candidate.
    pub measured: Rat,
    /// Sum of tail certificates for the non-enumerated parts.
    pub slack: Rat,
    pub threshold: Rat,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct SelectionStep {
    pub s: usize,
    pub ell: usize,
    pub h: Option<BigUint>,
    /// q(j, s) for j < ell.
    pub q_table: Vec<BigUint>,
    pub interval: Interval,
    pub changed: bool,
    pub measures: Vec<MeasureRecord>,
}

/// The finite restatement of the per-step induction bound, with the
/// truncation slack written out.
#[derive(Debug, Clone)]
pub struct InvariantRecord {
    pub s: usize,
    pub ell_min: usize,
    pub measured: Rat,
    pub slack: Rat,
    /// ν(I(s)) · (1 − 2^{−s}).
    pub bound: Rat,
    pub holds: bool,
}

#[derive(Debug)]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    pub invariant: Vec<InvariantRecord>,
    pub stalled: bool,
    /// The Hölder constants used, keyed by exponent.
    pub c_values: Vec<(Rat, Rat)>,
}

fn pow2_rat(s: usize) -> Rat {
    Rat::from_integer(num_bigint::BigInt::one() << s)
}

struct CCache<'a> {
    dist: &'a MassDistribution,
    config: &'a SelectionConfig,
    cache: BTreeMap<Rat, Rat>,
}

impl<'a> CCache<'a> {
    fn get(&mut self, d: &Rat) -> Result<Rat> {
        if let Some(c) = self.cache.get(d) {
            return Ok(c.clone());
        }
        let c = holder_check(self.dist, d, self.config.holder_samples, self.config.seed)?.c_hi;
        self.cache.insert(d.clone(), c.clone());
        Ok(c)
    }
}

/// ν of (⋃ bands for q in [q_lo, q_hi]) ∩ window, enumerated explicitly.
fn measure_bands_in(
    dist: &MassDistribution,
    window: &Interval,
    q_lo: u64,
    q_hi: u64,
    b: &Rat,
) -> Result<Rat> {
    let mut pieces = Vec::new();
    for q in q_lo..=q_hi {
        for band in approximation_band(q, b)? {
            if let Some(piece) = band.intersection(window) {
                pieces.push(piece);
            }
        }
    }
    dist.nu_measure_union(&merge_sorted(pieces))
}

/// Explicit-plus-certified measure of V(q_from, b1) ∩ window, where the
/// upper denominator limit is `q_to` (None = unbounded).  Returns
/// (measured, slack).
#[allow(clippy::too_many_arguments)]
fn measure_v_piece(
    dist: &MassDistribution,
    window: &Interval,
    q_from: &BigUint,
    q_to: Option<&BigUint>,
    b1: &Rat,
    b2: &Rat,
    c_val: &Rat,
    qcap: u64,
) -> Result<(Rat, Rat)> {
    use num_traits::ToPrimitive;
    if let Some(hi) = q_to {
        if q_from >= hi {
            return Ok((Rat::from_integer(0.into()), Rat::from_integer(0.into())));
        }
    }
    let mut measured = Rat::from_integer(0.into());
    let mut slack = Rat::from_integer(0.into());
    match q_from.to_u64() {
        Some(lo) if lo <= qcap => {
            // Explicit up to the cap (or the upper limit, if smaller).
            let explicit_hi = match q_to.and_then(|h| h.to_u64()) {
                Some(h) if h - 1 <= qcap => Some(h - 1),
                _ => None,
            };
            let hi = explicit_hi.unwrap_or(qcap);
            if hi >= lo {
                measured = measure_bands_in(dist, window, lo, hi, b1)?;
            }
            if explicit_hi.is_none() {
                // Tail beyond the cap (conservatively ignoring q_to).
                slack = v_tail_bound(&BigUint::from(qcap + 1), b1, b2, c_val)?;
            }
        }
        _ => {
            // Entirely beyond the cap: certificate for all of V(q_from, b1).
            slack = v_tail_bound(q_from, b1, b2, c_val)?;
        }
    }
    Ok((measured, slack))
}

/// Runs the selection loop for `steps` steps over a tree built from
/// `schedule`.  The staged table must satisfy the decreasing-table
/// invariants and have rows 0 and 1 constant across stages.
pub fn run_selection(
    a: &StagedApproximation,
    schedule: &FractalSchedule,
    steps: usize,
    config: &SelectionConfig,
) -> Result<SelectionTrace> {
    let report = validate_staged(a, steps + 2, steps + 2);
    if !report.passed() {
        return Err(Error::Domain(format!(
            "staged table violates the decreasing-table invariants: {:?}",
            report.violations
        )));
    }
    // Stage 0 is the all-ceiling row, so "row 1 never changes" means
    // constant from stage 1 onward.
    for s in 1..=steps + 1 {
        if a.value(1, s) != a.value(1, 1) {
            return Err(Error::Domain("row 1 of the staged table must be stage-constant".into()));
        }
    }
    let dist = build_levels(schedule, steps)?;
    let mut c_cache = CCache { dist: &dist, config, cache: BTreeMap::new() };

    let unit = Interval::new(rat_int(0), rat_int(1))?;
    let mut steps_out = vec![SelectionStep {
        s: 0,
        ell: 0,
        h: None,
        q_table: Vec::new(),
        interval: unit.clone(),
        changed: false,
        measures: Vec::new(),
    }];
    let mut q_table: Vec<Option<BigUint>> = Vec::new();

    for s in 1..=steps {
        // ℓ(s): least j ≤ s where row j+1 changed between stages s−1 and s
        // (the companion constant table is stage-independent here, so its
        // change clause never fires); s when nothing changed.  Stage 0 is
        // the all-ceiling row, so the first comparison is stage 1 against
        // itself.
        let mut ell = s;
        for j in 0..=s {
            if a.value(j + 1, (s - 1).max(1)) != a.value(j + 1, s) {
                ell = j;
                break;
            }
        }

        let m_s = dist.level_mass(s)?;
        let budget = &m_s / (rat_int(s as i64) * pow2_rat(s));
        // h(s): the largest of the per-j minimal cutoffs, so the tail
        // condition holds for every j < ℓ(s).
        let mut h_s = BigUint::from(2u32);
        for j in 0..ell {
            let b1 = a.value(j, s);
            let b2 = a.value(j + 1, s);
            let d = rat_int(2) / &b2;
            let c = c_cache.get(&d)?;
            let h_j = choose_h(&c, &b1, &b2, &budget)?;
            if h_j > h_s {
                h_s = h_j;
            }
        }
        if q_table.len() < ell {
            q_table.resize(ell, None);
        }
        for slot in q_table.iter_mut().take(ell) {
            if slot.is_none() {
                *slot = Some(h_s.clone());
            }
        }
        let q_now: Vec<BigUint> = q_table[..ell].iter().map(|q| q.clone().unwrap()).collect();

        // threshold m(s) − 2m(s)/2^s; zero at s = 1, so step 1 always
        // falls back to I(0).
        let threshold = &m_s - rat_int(2) * &m_s / pow2_rat(s);
        let prev = steps_out.last().unwrap().interval.clone();
        let mut measures = Vec::new();
        let mut chosen: Option<Interval> = None;
        for candidate in &dist.levels()[s].intervals {
            if !prev.contains(candidate) {
                continue;
            }
            let mut measured = Rat::from_integer(0.into());
            let mut slack = Rat::from_integer(0.into());
            for (j, qj) in q_now.iter().enumerate() {
                // V(q(j,s), a(j,s)) \ V(h(s), a(j,s)): denominators in
                // [q(j,s), h(s)); empty when the two cutoffs coincide.
                let b1 = a.value(j, s);
                let b2 = a.value(j + 1, s);
                let c = c_cache.get(&(rat_int(2) / &b2))?;
                let (m, sl) = measure_v_piece(
                    &dist,
                    candidate,
                    qj,
                    Some(&h_s),
                    &b1,
                    &b2,
                    &c,
                    config.qcap,
                )?;
                measured += m;
                slack += sl;
            }
            let accepted = &measured + &slack < threshold;
            measures.push(MeasureRecord {
                candidate: candidate.clone(),
                measured,
                slack,
                threshold: threshold.clone(),
                accepted,
            });
            if accepted {
                chosen = Some(candidate.clone());
                break;
            }
        }
        let (interval, changed) = match chosen {
            Some(iv) => (iv, true),
            None => (prev, false),
        };
        steps_out.push(SelectionStep {
            s,
            ell,
            h: Some(h_s),
            q_table: q_now,
            interval,
            changed,
            measures,
        });
    }

    let trailing_stall = steps_out.iter().rev().take_while(|st| st.s > 0 && !st.changed).count();
    let stalled = trailing_stall >= config.stall_limit;

    let invariant = verify_invariant(a, &dist, &steps_out, &mut c_cache)?;
    let c_values = c_cache.cache.into_iter().collect();
    Ok(SelectionTrace { steps: steps_out, invariant, stalled, c_values })
}

/// Checks, for each step s, the finite induction bound
/// ν(I(s) ∩ ⋃_{j<ℓ_min(s)} V_trunc(q(j,s), a(j,s))) ≤ ν(I(s))(1 − 2^{−s})
/// plus the truncation certificates, where ℓ_min(s) = min_{s≤t} ℓ(t) over
/// the trace.
fn verify_invariant(
    a: &StagedApproximation,
    dist: &MassDistribution,
    steps_out: &[SelectionStep],
    c_cache: &mut CCache,
) -> Result<Vec<InvariantRecord>> {
    let qcap = c_cache.config.qcap;
    let mut out = Vec::new();
    for step in steps_out {
        let s = step.s;
        let ell_min =
            steps_out[s..].iter().map(|t| t.ell).min().expect("trace contains step s");
        let mut measured = Rat::from_integer(0.into());
        let mut slack = Rat::from_integer(0.into());
        for j in 0..ell_min.min(step.q_table.len()) {
            let b1 = a.value(j, s);
            let b2 = a.value(j + 1, s);
            let c = c_cache.get(&(rat_int(2) / &b2))?;
            let (m, sl) = measure_v_piece(
                dist,
                &step.interval,
                &step.q_table[j],
                None,
                &b1,
                &b2,
                &c,
                qcap,
            )?;
            measured += m;
            slack += sl;
        }
        let nu_i = dist.nu_measure(&step.interval)?;
        let bound = &nu_i - nu_i.clone() / pow2_rat(s);
        let holds = measured <= &bound + &slack;
        out.push(InvariantRecord { s, ell_min, measured, slack, bound, holds });
    }
    Ok(out)
}

impl SelectionTrace {
    /// The rational enclosure defined by the last trace interval.
    pub fn final_interval(&self) -> &Interval {
        &self.steps.last().expect("trace has step 0").interval
    }

    /// JSON export: steps = {s, ell, h, q_table, interval, measures},
    /// rationals as "num/den" strings.  Deterministic field order.
    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|st| {
                json!({
                    "s": st.s,
                    "ell": st.ell,
                    "h": st.h.as_ref().map(|h| h.to_string()),
                    "q_table": st.q_table.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "interval": [format_rat(st.interval.lo()), format_rat(st.interval.hi())],
                    "changed": st.changed,
                    "measures": st
                        .measures
                        .iter()
                        .map(|m| {
                            json!({
                                "candidate": [format_rat(m.candidate.lo()), format_rat(m.candidate.hi())],
                                "measured": format_rat(&m.measured),
                                "slack": format_rat(&m.slack),
                                "threshold": format_rat(&m.threshold),
                                "accepted": m.accepted,
                            })
                        })
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let invariant: Vec<Value> = self
            .invariant
            .iter()
            .map(|r| {
                json!({
                    "s": r.s,
                    "ell_min": r.ell_min,
                    "measured": format_rat(&r.measured),
                    "slack": format_rat(&r.slack),
                    "bound": format_rat(&r.bound),
                    "holds": r.holds,
                })
            })
            .collect();
        let c_values: Vec<Value> = self
            .c_values
            .iter()
            .map(|(d, c)| json!([format_rat(d), format_rat(c)]))
            .collect();
        json!({
            "steps": steps,
            "invariant": invariant,
            "stalled": self.stalled,
            "c_values": c_values,
        })
    }
}
