//! Runs the nested-interval selection loop: at each step s it reads the
//! staged exponent table, picks a persistence threshold q(j, s), bounds
//! the ν-mass of the well-approximable bands inside each candidate
//! interval (explicitly up to a cap, analytically past it), and descends
//! into the leftmost interval whose measured mass stays under budget.

use irratex::cantor::{run_selection, BSource, FractalSchedule, ScheduleMode, SelectionConfig};
use irratex::rational::{rat, rat_int};
use irratex::seq::StagedApproximation;
use irratex::Result;

fn main() -> Result<()> {
    // a(j, s) = 2 + 1/(j+1): strictly decreasing rows with limsup 2.
    let table = StagedApproximation::stage_constant(|j| rat_int(2) + rat(1, j as i64 + 1))?;
    let schedule = FractalSchedule::new(
        vec![20, 80],
        BSource::Constant(rat(5, 2)),
        rat(9, 4),
        ScheduleMode::DeskScale,
    )?;
    let config = SelectionConfig::default();

    let trace = run_selection(&table, &schedule, 2, &config)?;
    for step in &trace.steps {
        println!(
            "step {}: ell={} changed={} interval={} candidates considered={}",
            step.s,
            step.ell,
            step.changed,
            step.interval.to_text(),
            step.measures.len()
        );
        if let Some(h) = &step.h {
            println!("  persistence threshold h(s) = {h}");
        }
    }
    for inv in &trace.invariant {
        println!(
            "invariant at s={}: ell_min={} holds={}",
            inv.s, inv.ell_min, inv.holds
        );
    }
    println!("stalled: {}", trace.stalled);
    println!("final interval: {}", trace.final_interval().to_text());
    Ok(())
}
