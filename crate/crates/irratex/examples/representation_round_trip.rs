//! Round-trips an exponent target through its three equivalent forms:
//! a limsup sequence, a strictly decreasing majorant, and a staged table
//! a(j, s) that is row-wise strictly decreasing for s ≥ 1 — recovering
//! the original limit at the end.

use irratex::rational::{format_rat, rat, rat_int};
use irratex::seq::{
    decreasing_to_staged, limsup_to_decreasing, staged_to_limsup, validate_staged, SeqGen,
};
use irratex::Result;

fn main() -> Result<()> {
    // limsup a_n = 3 reached through the oscillation 3 + (-1)^n/(n+1).
    let limsup = SeqGen::oscillate(rat_int(3), rat(1, 1));
    let horizon = 200;

    let decreasing = limsup_to_decreasing(&limsup, horizon)?;
    println!("decreasing majorant b_j (first 6):");
    for j in 0..6 {
        println!("  b_{j} = {}", format_rat(&decreasing.value(j, 1)));
    }

    // The ceiling must lie strictly above b_0 = 5 for the chain to survive.
    let staged = decreasing_to_staged(&decreasing, 6)?;
    let report = validate_staged(&staged, 12, 12);
    println!("staged table valid: {}", report.passed());
    println!("a(0,0) ceiling row value: {}", format_rat(&staged.value(0, 0)));
    println!("a(3,1) = {}", format_rat(&staged.value(3, 1)));
    println!("a(4,1) = {}  (columns decrease in j toward the limit)", format_rat(&staged.value(4, 1)));

    let recovered = staged_to_limsup(&staged);
    println!("recovered sequence near the horizon:");
    for j in [100usize, 150, 199] {
        println!("  a_{j} = {}", format_rat(&recovered.eval(j)?));
    }
    Ok(())
}
