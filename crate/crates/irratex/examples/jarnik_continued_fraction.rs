//! Builds continued fractions whose quotients grow like q_n^{a-2}, which
//! forces the irrationality exponent of the value toward the target a,
//! then prints the quotients, convergents, and the measured exponent
//! profile along the way.

use irratex::estimator::exponent_profile;
use irratex::jarnik::build_cf;
use irratex::logs::default_log_precision;
use irratex::rational::{format_rat, rat, rat_int};
use irratex::Result;
use num_traits::ToPrimitive;

fn main() -> Result<()> {
    for target in [rat_int(3), rat(5, 2)] {
        let cf = build_cf(&target, 10)?;
        println!("target a = {}", format_rat(&target));
        println!("  {}", cf.to_text());
        let convergents = cf.convergents_upto(cf.len())?;
        for (k, (p, q)) in convergents.iter().enumerate().take(6) {
            println!("  convergent {k}: {p}/{q}");
        }
        let profile = exponent_profile(&convergents, &default_log_precision())?;
        for entry in profile.entries.iter().rev().take(3).rev() {
            let mid = (entry.e.0.to_f64().unwrap() + entry.e.1.to_f64().unwrap()) / 2.0;
            println!(
                "  e_{} in [{}, {}] ~ {mid:.4}",
                entry.k,
                format_rat(&entry.e.0),
                format_rat(&entry.e.1)
            );
        }
        println!();
    }
    Ok(())
}
