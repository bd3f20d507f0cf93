//! Expands √2 − 1 into a continued fraction through certified interval
//! enclosures alone (no closed form used), then estimates its
//! irrationality exponent: the profile's tail trend settles at 2, the
//! value for every badly-approximable quadratic irrational.

use irratex::estimator::{cf_expand, exponent_estimate, exponent_profile};
use irratex::logs::default_log_precision;
use irratex::rational::{format_rat, pow2_inv};
use irratex::real::RealSpec;
use irratex::Result;
use num_traits::ToPrimitive;

fn main() -> Result<()> {
    let x = RealSpec::sqrt_int(2)?;
    let expansion = cf_expand(&x, 20, &pow2_inv(4096))?;
    println!("spec: {}", x.describe());
    println!("cf:   {}", expansion.cf.to_text());

    let profile =
        exponent_profile(&expansion.cf.convergents_upto(expansion.cf.len())?, &default_log_precision())?;
    let report = exponent_estimate(&profile, 10)?;
    let show = |name: &str, pair: &(irratex::Rat, irratex::Rat)| {
        let mid = (pair.0.to_f64().unwrap() + pair.1.to_f64().unwrap()) / 2.0;
        println!("{name}: [{}, {}] ~ {mid:.6}", format_rat(&pair.0), format_rat(&pair.1));
    };
    show("proxy limsup", &report.proxy_limsup);
    show("last entry  ", &report.last);
    show("tail trend  ", &report.trend);
    Ok(())
}
