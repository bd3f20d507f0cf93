//! Command-line front end: construct numbers, emit digits and
//! convergents, estimate exponents, convert sequence representations,
//! build fractal levels, and run selection traces.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.  All runs are
//! reproducible given identical flags (seeds are explicit).

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::bugeaud::{
    build_gap_sequence, xi_digits, xi_tail_bounds, xi_truncation, GapSequence,
};
use crate::cantor::{
    build_levels, holder_check, run_selection, BSource, FractalSchedule, ScheduleMode,
    SelectionConfig,
};
use crate::error::{Error, Result};
use crate::estimator::{
    cf_expand, exponent_estimate, exponent_profile, profile_to_csv, records_to_csv,
    best_approximations_brute, truncation_exponents,
};
use crate::jarnik::build_cf;
use crate::logs::default_log_precision;
use crate::rational::{ceil_rat, format_rat, parse_rat, pow2_inv, Rat};
use crate::real::{QuotientSource, RealSpec};
use crate::seq::{
    decreasing_to_staged, limsup_to_decreasing, limsup_to_decreasing_rational, seq_from_csv,
    seq_to_csv, staged_from_csv, staged_to_csv, staged_to_limsup, validate_staged, SeqGen,
    StagedApproximation, StagedDecreasing,
};

#[derive(Parser)]
#[command(
    name = "irratex",
    version,
    about = "Exact-arithmetic toolkit for irrationality exponents: power sums, continued fractions, sequence representations, and Cantor-like mass distributions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["csv", "json", "text"])]
    format: String,
    /// Enclosure width for certified logarithms (rational, e.g. 1/1000000).
    #[arg(long)]
    precision: Option<String>,
    /// Seed for all randomized sampling.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the power sum ξ = Σ base^{-n_j} from an exponent-target sequence.
    ConstructSum {
        /// Target sequence: const:r, oscillate:c,amp, or file:path (CSV).
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        base: u64,
        /// Number of gap-sequence terms J.
        #[arg(long, default_value_t = 8)]
        terms: usize,
        /// Comma list from: digits, convergents, tails, exponents.
        #[arg(long, default_value = "digits,convergents")]
        emit: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build the continued fraction with quotient rule a_{n+1} = ⌊q_n^{a-2}⌋.
    ConstructCf {
        /// Exponent target a > 2 (rational, e.g. 5/2).
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        quotients: usize,
        /// Comma list from: cf, csv, profile.
        #[arg(long, default_value = "cf")]
        emit: String,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the irrationality exponent of an enclosure-backed real.
    Estimate {
        /// Real spec: sqrt:d, rat:p/q, sum:base:n1,n2,..., or cf:a1,a2,...
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 20)]
        convergents: usize,
        /// First profile index of the tail (default: half the profile).
        #[arg(long)]
        tail_from: Option<usize>,
        /// Also run the exhaustive best-approximation scan up to this q.
        #[arg(long)]
        qmax: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Convert between limsup, decreasing, and staged sequence forms.
    ConvertSeq {
        #[arg(long, value_parser = ["limsup", "decreasing", "staged"])]
        from: String,
        #[arg(long, value_parser = ["limsup", "decreasing", "staged"])]
        to: String,
        #[arg(long, default_value_t = 1000)]
        horizon: usize,
        /// Input CSV (sequence or staged grid) when --target is not given.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Inline source sequence: const:r, oscillate:c,amp.
        #[arg(long)]
        target: Option<String>,
        /// Rational limsup shortcut: emits the strictly decreasing
        /// sequence limit + 2^{-j} without a horizon scan.
        #[arg(long)]
        rational_target: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Build fractal levels and optionally verify a Hölder exponent.
    Fractal {
        /// M schedule, comma-separated (e.g. 20,80).
        #[arg(long = "M", value_delimiter = ',', required = true)]
        m: Vec<u64>,
        /// Exponent source: const:r or staged:path.
        #[arg(long, default_value = "const:5/2")]
        b: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Hölder check, written d=7/10.
        #[arg(long)]
        verify: Option<String>,
        #[arg(long, default_value = "desk", value_parser = ["desk", "strict"])]
        mode: String,
        #[arg(long, default_value = "9/4")]
        beta: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run the nested-interval selection loop and emit its trace.
    Select {
        #[arg(long = "M", value_delimiter = ',', required = true)]
        m: Vec<u64>,
        #[arg(long, default_value = "const:5/2")]
        b: String,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// Staged table: "harmonic" (a(j,s) = 2 + 1/(j+1)) or file:path.
        #[arg(long, default_value = "harmonic")]
        table: String,
        #[arg(long, default_value_t = 512)]
        qcap: u64,
        #[arg(long, default_value_t = 8)]
        stall_limit: usize,
        #[arg(long, default_value = "9/4")]
        beta: String,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a staged table or a fractal schedule.
    Verify {
        /// Staged grid CSV to validate.
        #[arg(long)]
        staged: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        jmax: usize,
        #[arg(long, default_value_t = 16)]
        smax: usize,
        /// M schedule for a fractal verification.
        #[arg(long = "M", value_delimiter = ',')]
        m: Option<Vec<u64>>,
        #[arg(long, default_value = "const:5/2")]
        b: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value = "desk", value_parser = ["desk", "strict"])]
        mode: String,
        #[arg(long, default_value = "9/4")]
        beta: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let (output, common) = match cli.cmd {
        Cmd::ConstructSum { target, base, terms, emit, common } => {
            (construct_sum(&target, base, terms, &emit, &common)?, common)
        }
        Cmd::ConstructCf { target, quotients, emit, common } => {
            (construct_cf(&target, quotients, &emit, &common)?, common)
        }
        Cmd::Estimate { spec, convergents, tail_from, qmax, common } => {
            (estimate(&spec, convergents, tail_from, qmax, &common)?, common)
        }
        Cmd::ConvertSeq { from, to, horizon, input, target, rational_target, common } => (
            convert_seq(
                &from,
                &to,
                horizon,
                input.as_deref(),
                target.as_deref(),
                rational_target.as_deref(),
            )?,
            common,
        ),
        Cmd::Fractal { m, b, depth, verify, mode, beta, samples, common } => {
            (fractal(&m, &b, depth, verify.as_deref(), &mode, &beta, samples, &common)?, common)
        }
        Cmd::Select { m, b, steps, table, qcap, stall_limit, beta, samples, common } => (
            select(&m, &b, steps, &table, qcap, stall_limit, &beta, samples, &common)?,
            common,
        ),
        Cmd::Verify { staged, jmax, smax, m, b, depth, mode, beta, common } => (
            verify_cmd(staged.as_deref(), jmax, smax, m.as_deref(), &b, depth, &mode, &beta)?,
            common,
        ),
    };
    match &common.out {
        Some(path) => std::fs::write(path, output.as_bytes())?,
        None => {
            use std::io::Write;
            // A closed pipe (e.g. piping into head) is not an error.
            if let Err(e) = std::io::stdout().write_all(output.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- parsing

fn parse_seq_descriptor(s: &str) -> Result<SeqGen> {
    if let Some(r) = s.strip_prefix("const:") {
        return Ok(SeqGen::constant(parse_rat(r)?));
    }
    if let Some(rest) = s.strip_prefix("oscillate:") {
        let (c, amp) = rest
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("oscillate needs c,amp: {s}")))?;
        return Ok(SeqGen::oscillate(parse_rat(c)?, parse_rat(amp)?));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return seq_from_csv(&std::fs::read_to_string(path)?);
    }
    Err(Error::Parse(format!(
        "unknown sequence descriptor {s} (expected const:r, oscillate:c,amp, or file:path)"
    )))
}

fn parse_real_spec(s: &str) -> Result<RealSpec> {
    if let Some(d) = s.strip_prefix("sqrt:") {
        let d: u64 = d.parse().map_err(|_| Error::Parse(format!("bad sqrt argument {d}")))?;
        return RealSpec::sqrt_int(d);
    }
    if let Some(r) = s.strip_prefix("rat:") {
        return Ok(RealSpec::rational(parse_rat(r)?));
    }
    if let Some(rest) = s.strip_prefix("sum:") {
        let (base, positions) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("sum needs base:positions, got {rest}")))?;
        let base: u64 =
            base.parse().map_err(|_| Error::Parse(format!("bad base {base}")))?;
        let positions: Vec<u64> = positions
            .split(',')
            .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad position {p}"))))
            .collect::<Result<_>>()?;
        let gaps = Arc::new(GapSequence::from_positions(positions)?);
        return RealSpec::sum_of_powers(base, gaps);
    }
    if let Some(quots) = s.strip_prefix("cf:") {
        let quotients: Vec<BigUint> = quots
            .split(',')
            .map(|a| a.parse().map_err(|_| Error::Parse(format!("bad quotient {a}"))))
            .collect::<std::result::Result<_, _>>()?;
        return RealSpec::cf_number(QuotientSource::Finite(quotients));
    }
    Err(Error::Parse(format!(
        "unknown real spec {s} (expected sqrt:d, rat:p/q, sum:base:n1,n2,..., or cf:a1,a2,...)"
    )))
}

fn parse_b_source(s: &str) -> Result<BSource> {
    if let Some(r) = s.strip_prefix("const:") {
        return Ok(BSource::Constant(parse_rat(r)?));
    }
    if let Some(path) = s.strip_prefix("staged:") {
        return Ok(BSource::Staged(staged_from_csv(&std::fs::read_to_string(path)?)?));
    }
    Err(Error::Parse(format!("unknown b source {s} (expected const:r or staged:path)")))
}

fn parse_mode(s: &str) -> ScheduleMode {
    if s == "strict" {
        ScheduleMode::Strict
    } else {
        ScheduleMode::DeskScale
    }
}

fn parse_table(s: &str) -> Result<StagedApproximation> {
    if s == "harmonic" {
        return StagedApproximation::stage_constant(|j| {
            crate::rational::rat_int(2) + crate::rational::rat(1, j as i64 + 1)
        });
    }
    if let Some(path) = s.strip_prefix("file:") {
        return staged_from_csv(&std::fs::read_to_string(path)?);
    }
    Err(Error::Parse(format!("unknown table {s} (expected harmonic or file:path)")))
}

fn precision_of(common: &Common) -> Result<Rat> {
    match &common.precision {
        Some(p) => parse_rat(p),
        None => Ok(default_log_precision()),
    }
}

fn schedule_of(m: &[u64], b: &str, beta: &str, mode: &str) -> Result<FractalSchedule> {
    FractalSchedule::new(m.to_vec(), parse_b_source(b)?, parse_rat(beta)?, parse_mode(mode))
}

// ------------------------------------------------------------ subcommands

fn construct_sum(target: &str, base: u64, terms: usize, emit: &str, common: &Common) -> Result<String> {
    let gen = parse_seq_descriptor(target)?;
    // One spare term so tail brackets and exponent records are available.
    let gaps = build_gap_sequence(&gen, terms + 1)?;
    let digit_count = gaps.term(terms)? + 2;
    let mut sections: Vec<(String, serde_json::Value, String)> = Vec::new();
    for what in emit.split(',') {
        match what.trim() {
            "digits" => {
                let d = xi_digits(&gaps, digit_count)?;
                sections.push(("digits".into(), json!(d), format!("digits (base {base}): {d}\n")));
            }
            "convergents" => {
                let mut csv = String::from("j,n_j,p,q\n");
                for j in 1..=terms {
                    let t = xi_truncation(&gaps, base, j)?;
                    csv.push_str(&format!("{j},{},{},{}\n", gaps.term(j)?, t.numer(), t.denom()));
                }
                sections.push(("convergents".into(), json!(csv), csv.clone()));
            }
            "tails" => {
                let mut csv = String::from("j,tail_lo,tail_hi\n");
                for j in 1..=terms {
                    let (lo, hi) = xi_tail_bounds(&gaps, base, j)?;
                    csv.push_str(&format!("{j},{},{}\n", format_rat(&lo), format_rat(&hi)));
                }
                sections.push(("tails".into(), json!(csv), csv.clone()));
            }
            "exponents" => {
                let rows = truncation_exponents(&gaps, base, terms)?;
                let mut csv = String::from("j,n_j,e_lo,e_hi\n");
                for r in &rows {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        r.j,
                        r.n,
                        format_rat(&r.e_lo),
                        format_rat(&r.e_hi)
                    ));
                }
                sections.push(("exponents".into(), json!(csv), csv.clone()));
            }
            other => return Err(Error::Parse(format!("unknown emit item {other}"))),
        }
    }
    render_sections(&sections, common)
}

fn construct_cf(target: &str, quotients: usize, emit: &str, common: &Common) -> Result<String> {
    let a = parse_rat(target)?;
    let cf = build_cf(&a, quotients)?;
    let mut sections: Vec<(String, serde_json::Value, String)> = Vec::new();
    for what in emit.split(',') {
        match what.trim() {
            "cf" => {
                let t = cf.to_text();
                sections.push(("cf".into(), json!(t), format!("{t}\n")));
            }
            "csv" => {
                let csv = cf.to_csv();
                sections.push(("csv".into(), json!(csv), csv.clone()));
            }
            "profile" => {
                let profile =
                    exponent_profile(&cf.convergents_upto(cf.len())?, &precision_of(common)?)?;
                let csv = profile_to_csv(&profile);
                sections.push(("profile".into(), json!(csv), csv.clone()));
            }
            other => return Err(Error::Parse(format!("unknown emit item {other}"))),
        }
    }
    render_sections(&sections, common)
}

fn estimate(
    spec: &str,
    convergents: usize,
    tail_from: Option<usize>,
    qmax: Option<u64>,
    common: &Common,
) -> Result<String> {
    let x = parse_real_spec(spec)?;
    let budget = pow2_inv(4096);
    let expansion = cf_expand(&x, convergents, &budget)?;
    let upto = expansion.cf.len();
    let profile = exponent_profile(&expansion.cf.convergents_upto(upto)?, &precision_of(common)?)?;
    let tail_from = tail_from.unwrap_or_else(|| (upto / 2).max(1));
    let report = exponent_estimate(&profile, tail_from)?;
    let approx = |pair: &(Rat, Rat)| {
        let lo = pair.0.to_f64().unwrap_or(f64::NAN);
        let hi = pair.1.to_f64().unwrap_or(f64::NAN);
        (lo + hi) / 2.0
    };
    let mut text = format!(
        "spec: {}\nquotients: {} ({})\nprofile tail from k = {tail_from}\n\
         proxy limsup: [{}, {}] ~ {:.6}\nlast: [{}, {}] ~ {:.6}\ntrend: [{}, {}] ~ {:.6}\n",
        x.describe(),
        upto,
        if expansion.exact { "exact rational" } else { "certified" },
        format_rat(&report.proxy_limsup.0),
        format_rat(&report.proxy_limsup.1),
        approx(&report.proxy_limsup),
        format_rat(&report.last.0),
        format_rat(&report.last.1),
        approx(&report.last),
        format_rat(&report.trend.0),
        format_rat(&report.trend.1),
        approx(&report.trend),
    );
    let profile_csv = profile_to_csv(&profile);
    let mut sections = vec![
        ("estimate".into(), json!({
            "spec": x.describe(),
            "quotients": upto,
            "exact": expansion.exact,
            "tail_from": tail_from,
            "proxy_limsup": [format_rat(&report.proxy_limsup.0), format_rat(&report.proxy_limsup.1)],
            "last": [format_rat(&report.last.0), format_rat(&report.last.1)],
            "trend": [format_rat(&report.trend.0), format_rat(&report.trend.1)],
        }), text.clone()),
        ("profile".into(), json!(profile_csv), profile_csv.clone()),
    ];
    if let Some(q) = qmax {
        let records = best_approximations_brute(&x, q)?;
        let csv = records_to_csv(&records);
        text.push_str(&csv);
        sections.push(("best_approximations".into(), json!(csv), csv.clone()));
    }
    render_sections(&sections, common)
}

fn read_input_seq(input: Option<&std::path::Path>, target: Option<&str>) -> Result<SeqGen> {
    match (input, target) {
        (_, Some(t)) => parse_seq_descriptor(t),
        (Some(path), None) => seq_from_csv(&std::fs::read_to_string(path)?),
        (None, None) => {
            Err(Error::Parse("convert-seq needs --input or --target".into()))
        }
    }
}

fn decreasing_as_csv(dec: &StagedDecreasing, horizon: usize) -> Result<String> {
    let mut out = String::from("j,value\n");
    for j in 0..horizon {
        out.push_str(&format!("{j},{}\n", format_rat(&dec.value(j, 1))));
    }
    Ok(out)
}

fn convert_seq(
    from: &str,
    to: &str,
    horizon: usize,
    input: Option<&std::path::Path>,
    target: Option<&str>,
    rational_target: Option<&str>,
) -> Result<String> {
    if let Some(limit) = rational_target {
        let dec = limsup_to_decreasing_rational(&parse_rat(limit)?);
        return match to {
            "decreasing" => decreasing_as_csv(&dec, horizon.min(200)),
            "staged" => {
                let m = rational_ceiling(&dec)?;
                let a = decreasing_to_staged(&dec, m)?;
                Ok(staged_to_csv(&a, grid_side(horizon), grid_side(horizon)))
            }
            other => Err(Error::Parse(format!("rational-target cannot produce {other}"))),
        };
    }
    match (from, to) {
        ("limsup", "decreasing") => {
            let gen = read_input_seq(input, target)?;
            let dec = limsup_to_decreasing(&gen, horizon)?;
            decreasing_as_csv(&dec, horizon.min(200))
        }
        ("limsup", "staged") => {
            let gen = read_input_seq(input, target)?;
            let dec = limsup_to_decreasing(&gen, horizon)?;
            let m = rational_ceiling(&dec)?;
            let a = decreasing_to_staged(&dec, m)?;
            Ok(staged_to_csv(&a, grid_side(horizon), grid_side(horizon)))
        }
        ("decreasing", "staged") => {
            let gen = read_input_seq(input, target)?;
            let horizon_eff = gen.horizon().unwrap_or(horizon);
            let values: Vec<Rat> =
                (0..horizon_eff).map(|j| gen.eval(j)).collect::<Result<_>>()?;
            let dec = StagedDecreasing::from_stable(values);
            let m = rational_ceiling(&dec)?;
            let a = decreasing_to_staged(&dec, m)?;
            Ok(staged_to_csv(&a, grid_side(horizon), grid_side(horizon)))
        }
        ("staged", "limsup") => {
            let path = input
                .ok_or_else(|| Error::Parse("staged input must come from --input".into()))?;
            let a = staged_from_csv(&std::fs::read_to_string(path)?)?;
            let gen = staged_to_limsup(&a);
            seq_to_csv(&gen, horizon.min(200))
        }
        (f, t) => Err(Error::Parse(format!("unsupported conversion {f} -> {t}"))),
    }
}

fn grid_side(horizon: usize) -> usize {
    horizon.clamp(4, 100)
}

/// Integer ceiling for the staged table: one above the largest (first)
/// value of the decreasing sequence.
fn rational_ceiling(dec: &StagedDecreasing) -> Result<i64> {
    let top = ceil_rat(&dec.value(0, 1));
    top.to_integer()
        .to_i64()
        .map(|m| m + 1)
        .ok_or_else(|| Error::Overflow("staged ceiling out of i64 range".into()))
}

#[allow(clippy::too_many_arguments)]
fn fractal(
    m: &[u64],
    b: &str,
    depth: usize,
    verify: Option<&str>,
    mode: &str,
    beta: &str,
    samples: u64,
    common: &Common,
) -> Result<String> {
    let schedule = schedule_of(m, b, beta, mode)?;
    let dist = build_levels(&schedule, depth)?;
    let mut value = dist.to_json();
    let mut text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
    if let Some(v) = verify {
        let d = v
            .strip_prefix("d=")
            .ok_or_else(|| Error::Parse(format!("verify wants d=<rational>, got {v}")))?;
        let report = holder_check(&dist, &parse_rat(d)?, samples, common.seed)?;
        value["holder"] = json!({
            "d": format_rat(&report.d),
            "samples": report.samples,
            "seed": report.seed,
            "c_lo": format_rat(&report.c_lo),
            "c_hi": format_rat(&report.c_hi),
            "witness": [format_rat(report.witness.lo()), format_rat(report.witness.hi())],
            "stabilized": report.stabilized,
        });
        text.push_str(&report.to_text());
        text.push('\n');
    }
    Ok(match common.format.as_str() {
        "json" => serde_json::to_string(&value).expect("serializable") + "\n",
        _ => text,
    })
}

#[allow(clippy::too_many_arguments)]
fn select(
    m: &[u64],
    b: &str,
    steps: usize,
    table: &str,
    qcap: u64,
    stall_limit: usize,
    beta: &str,
    samples: u64,
    common: &Common,
) -> Result<String> {
    let schedule = schedule_of(m, b, beta, "desk")?;
    let a = parse_table(table)?;
    let config = SelectionConfig { qcap, stall_limit, holder_samples: samples, seed: common.seed };
    let trace = run_selection(&a, &schedule, steps, &config)?;
    let value = trace.to_json();
    Ok(match common.format.as_str() {
        "json" => serde_json::to_string(&value).expect("serializable") + "\n",
        _ => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    staged: Option<&std::path::Path>,
    jmax: usize,
    smax: usize,
    m: Option<&[u64]>,
    b: &str,
    depth: usize,
    mode: &str,
    beta: &str,
) -> Result<String> {
    if let Some(path) = staged {
        let a = staged_from_csv(&std::fs::read_to_string(path)?)?;
        let report = validate_staged(&a, jmax, smax);
        if report.passed() {
            return Ok(format!("staged table ok (jmax={jmax}, smax={smax})\n"));
        }
        return Err(Error::Domain(format!(
            "staged table violates invariants: {:?}",
            report.violations
        )));
    }
    if let Some(m) = m {
        let schedule = schedule_of(m, b, beta, mode)?;
        let dist = build_levels(&schedule, depth)?;
        dist.verify()?;
        let mut out = format!("fractal schedule ok to depth {depth}\n");
        for level in dist.levels().iter().skip(1) {
            out.push_str(&format!(
                "level {}: M={} m={} intervals={} gap>={}\n",
                level.k,
                level.m_big,
                level.m_k,
                level.intervals.len(),
                format_rat(&level.g_k)
            ));
        }
        return Ok(out);
    }
    Err(Error::Parse("verify needs --staged or --M".into()))
}

// -------------------------------------------------------------- rendering

/// Renders emit sections in the requested format: text concatenates with
/// headers, csv requires a single tabular section, json wraps all.
fn render_sections(
    sections: &[(String, serde_json::Value, String)],
    common: &Common,
) -> Result<String> {
    match common.format.as_str() {
        "json" => {
            let mut obj = serde_json::Map::new();
            for (name, value, _) in sections {
                obj.insert(name.clone(), value.clone());
            }
            Ok(serde_json::to_string(&serde_json::Value::Object(obj)).expect("serializable") + "\n")
        }
        "csv" => {
            let tabular: Vec<&(String, serde_json::Value, String)> =
                sections.iter().filter(|(_, _, t)| t.contains(',')).collect();
            match tabular.as_slice() {
                [one] => Ok(one.2.clone()),
                [] => Err(Error::Parse("no tabular section for csv format".into())),
                _ => Err(Error::Parse(
                    "csv format needs exactly one tabular emit item (use json or text for several)"
                        .into(),
                )),
            }
        }
        _ => {
            let mut out = String::new();
            for (name, _, text) in sections {
                if sections.len() > 1 {
                    out.push_str(&format!("# {name}\n"));
                }
                out.push_str(text);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_parsing() {
        assert!(parse_seq_descriptor("const:5/2").is_ok());
        assert!(parse_seq_descriptor("oscillate:3,1").is_ok());
        assert!(parse_seq_descriptor("bogus").is_err());
        assert!(parse_real_spec("sqrt:2").is_ok());
        assert!(parse_real_spec("rat:17/64").is_ok());
        assert!(parse_real_spec("sum:2:2,6,18,54").is_ok());
        assert!(parse_real_spec("cf:2,2,2").is_ok());
        assert!(parse_real_spec("nope:1").is_err());
        assert!(parse_b_source("const:5/2").is_ok());
        assert!(parse_table("harmonic").is_ok());
    }

    #[test]
    fn construct_sum_text() {
        let common = Common { out: None, format: "text".into(), precision: None, seed: 7 };
        let out = construct_sum("const:3", 2, 4, "digits,convergents", &common).unwrap();
        assert!(out.contains("digits"));
        assert!(out.contains("j,n_j,p,q"));
    }

    #[test]
    fn estimate_sqrt2_text() {
        let common = Common { out: None, format: "text".into(), precision: None, seed: 7 };
        let out = estimate("sqrt:2", 12, None, None, &common).unwrap();
        assert!(out.contains("trend"));
    }

    #[test]
    fn convert_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let staged_path = dir.path().join("staged.csv");
        let csv = convert_seq("limsup", "staged", 60, None, Some("const:3"), None).unwrap();
        std::fs::write(&staged_path, &csv).unwrap();
        let back =
            convert_seq("staged", "limsup", 40, Some(&staged_path), None, None).unwrap();
        assert!(back.starts_with("j,value\n"));
    }

    #[test]
    fn verify_fractal_schedule() {
        let out =
            verify_cmd(None, 8, 8, Some(&[20, 80]), "const:5/2", 2, "desk", "9/4").unwrap();
        assert!(out.contains("fractal schedule ok"));
    }
}
