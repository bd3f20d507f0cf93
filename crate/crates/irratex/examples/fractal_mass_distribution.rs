//! Builds the two-level Cantor-like interval tree from prime-indexed
//! approximation bands (M = 20 then 80, exponent 5/2), verifies its gap,
//! length, and nesting invariants exactly, puts the uniform mass
//! distribution ν on it, and certifies an empirical Hölder constant for
//! ν(I) ≤ C·|I|^d at d = 7/10.

use irratex::cantor::{build_levels, holder_check, BSource, FractalSchedule, ScheduleMode};
use irratex::rational::{format_rat, rat, Interval};
use irratex::Result;
use num_traits::ToPrimitive;

fn main() -> Result<()> {
    let schedule =
        FractalSchedule::new(vec![20, 80], BSource::Constant(rat(5, 2)), rat(9, 4), ScheduleMode::DeskScale)?;
    let dist = build_levels(&schedule, 2)?;
    dist.verify()?;

    for level in dist.levels() {
        println!(
            "level {}: M={} children-per-parent m={} intervals={} gap >= {}",
            level.k,
            level.m_big,
            level.m_k,
            level.intervals.len(),
            format_rat(&level.g_k)
        );
    }
    println!("level masses: {} and {}",
        format_rat(&dist.level_mass(1)?), format_rat(&dist.level_mass(2)?));

    let window = Interval::new(rat(1, 4), rat(3, 4))?;
    let mass = dist.nu_measure(&window)?;
    println!("nu([1/4, 3/4]) = {}", format_rat(&mass));

    let report = holder_check(&dist, &rat(7, 10), 1000, 7)?;
    println!(
        "holder d=7/10: C in [{:.6}, {:.6}], witness width {}, stabilized: {}",
        report.c_lo.to_f64().unwrap(),
        report.c_hi.to_f64().unwrap(),
        format_rat(&report.witness.width()),
        report.stabilized
    );
    Ok(())
}
