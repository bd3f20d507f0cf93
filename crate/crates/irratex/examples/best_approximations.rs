//! Finds every best rational approximation of the second kind up to a
//! denominator cap by exhaustive exact search, and checks the list
//! against the continued-fraction convergents of the same number.

use irratex::estimator::{best_approximations_brute, cf_expand};
use irratex::rational::{format_rat, pow2_inv, rat};
use irratex::real::RealSpec;
use irratex::Result;

fn main() -> Result<()> {
    for x in [RealSpec::rational(rat(17, 64)), RealSpec::sqrt_int(2)?] {
        println!("x = {}", x.describe());
        let records = best_approximations_brute(&x, 1000)?;
        for r in &records {
            println!(
                "  {}/{}  |x - p/q| in [{}, {}]",
                r.p,
                r.q,
                format_rat(&r.err_lo),
                format_rat(&r.err_hi)
            );
        }
        let expansion = cf_expand(&x, 20, &pow2_inv(4096))?;
        let convergent_qs: Vec<String> = expansion
            .cf
            .convergents_upto(expansion.cf.len())?
            .iter()
            .map(|(p, q)| format!("{p}/{q}"))
            .collect();
        println!("  convergents: {}", convergent_qs.join(", "));
        println!();
    }
    Ok(())
}
