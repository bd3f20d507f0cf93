//! Builds the power sum ξ = Σ 2^{-n_j} whose gap sequence n_{j+1} =
//! ⌈a_{j+1}·n_j⌉ tracks a target exponent sequence, prints its binary
//! digits and exact truncations, and shows the truncation-based exponent
//! records converging to the target.

use irratex::bugeaud::{build_gap_sequence, xi_digits, xi_tail_bounds, xi_truncation};
use irratex::estimator::truncation_exponents;
use irratex::rational::{format_rat, rat_int};
use irratex::seq::SeqGen;
use irratex::Result;
use num_traits::ToPrimitive;

fn main() -> Result<()> {
    let target = SeqGen::constant(rat_int(3));
    let gaps = build_gap_sequence(&target, 9)?;
    println!("gap positions n_j: {:?}", (1..=8).map(|j| gaps.term(j).unwrap()).collect::<Vec<_>>());
    println!("first binary digits: {}", xi_digits(&gaps, 60)?);

    for j in 1..=4 {
        let t = xi_truncation(&gaps, 2, j)?;
        let (lo, hi) = xi_tail_bounds(&gaps, 2, j)?;
        println!(
            "xi_{j} = {}/{}   tail in ({}, {})",
            t.numer(),
            t.denom(),
            format_rat(&lo),
            format_rat(&hi)
        );
    }

    println!("\ntruncation exponent records (target 3):");
    for row in truncation_exponents(&gaps, 2, 8)? {
        let mid = (row.e_lo.to_f64().unwrap() + row.e_hi.to_f64().unwrap()) / 2.0;
        println!("  j={} n_j={}: e in [{}, {}] ~ {mid:.5}",
            row.j, row.n, format_rat(&row.e_lo), format_rat(&row.e_hi));
    }
    Ok(())
}
