//! The `topofilt` command line.
//!
//! Topology arguments take a JSON file (`{"n":..,"opens":[..]}`) or one of the
//! names `indiscrete:N`, `discrete:N`, `sierpinski`. Partition arguments take
//! a JSON file (`{"n":..,"blocks":[..]}`) or `identity:N`, `one-block:N`.
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumeration::{cache_load, enumerate_topologies};
use crate::equiv::{approx_chain, relation_meet, Partition};
use crate::error::{Error, Result};
use crate::filtration::{distance, slowest, FiltrationSeq, Ordinal, SetCalculus};
use crate::topology::{borel_report, BorelConvention, Regularity, SubsetMask, Topology};
use crate::verify::explore::{explore, Query};
use crate::verify::{self, CheckConfig, Counterexample, InstanceOutcome, PropertyId, VerificationReport};

pub const CACHE_ENV: &str = "TOPOFILT_CACHE";

#[derive(Parser, Debug)]
#[command(name = "topofilt", version, about = "Filtrations of finite topologies")]
struct Cli {
    /// Convention for the second level of the Borel hierarchy.
    #[arg(long, global = true, default_value = "difference")]
    borel_convention: BorelConvention,
    /// Require T1 in addition to regularity.
    #[arg(long, global = true)]
    regular_t1: bool,
    /// Worker threads for enumeration and verification.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (or list) the topologies on n labeled points.
    Enum {
        #[arg(long)]
        n: usize,
        /// Cache directory (overrides $TOPOFILT_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Print every topology as a JSON line after the count.
        #[arg(long)]
        list: bool,
    },
    /// Least ξ with (σ,τ)_ξ = τ, or `unreachable`.
    Distance {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
    },
    /// The slowest filtration from σ to τ.
    Filtrate {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        max_stages: Option<usize>,
    },
    /// Tame sets and slight cover at stage α; with --set, also slight/solid for that set.
    Tame {
        #[arg(long)]
        filtration: PathBuf,
        #[arg(long)]
        alpha: usize,
        /// Subset as a bitmask (`5`, `0b101`) or a point list (`{0,2}`).
        #[arg(long)]
        set: Option<String>,
    },
    /// The approximations E_ξ of a partition along a chain, and their meet.
    Approx {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        filtration: PathBuf,
    },
    /// Borel classification of a subset under both conventions.
    Classify {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        set: String,
    },
    /// Exhaustive property checks.
    Verify {
        #[arg(long, conflicts_with_all = ["all", "replay"])]
        property: Option<String>,
        #[arg(long, conflicts_with = "replay")]
        all: bool,
        #[arg(long, required_unless_present = "replay")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Longest chain (stages) in chain-based universes.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Include wall-clock times in the output.
        #[arg(long)]
        timing: bool,
        /// Re-run a saved counterexample (or a report containing one).
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Witness searches: UNREACHED_PAIRS, WEAK_NOT_FULL, SOLID_GAP.
    Explore {
        #[arg(long)]
        query: String,
        #[arg(long)]
        n: usize,
    },
}

/// Runs the CLI, writing to the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let pool = match cli.jobs.map(|j| rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build()).transpose() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: --jobs: {e}");
            return 2;
        }
    };
    match dispatch(&cli, pool.as_ref(), out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Runs `f` on the `--jobs` pool when one was requested.
fn in_pool<R: Send>(pool: Option<&rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn dispatch(cli: &Cli, pool: Option<&rayon::ThreadPool>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let regularity = if cli.regular_t1 { Regularity::WithT1 } else { Regularity::Pure };
    match &cli.command {
        Command::Enum { n, cache, list } => {
            let dir = cache.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
            let cat = in_pool(pool, || match dir {
                Some(d) => cache_load(&d, *n),
                None => enumerate_topologies(*n),
            })?;
            writeln!(out, "{}", cat.len())?;
            if *list {
                for t in cat.entries() {
                    writeln!(out, "{}", serde_json::to_string(t)?)?;
                }
            }
        }
        Command::Distance { sigma, tau } => {
            let (s, t) = (load_topology(sigma)?, load_topology(tau)?);
            writeln!(out, "{}", distance(&s, &t)?)?;
        }
        Command::Filtrate { sigma, tau, max_stages } => {
            let (s, t) = (load_topology(sigma)?, load_topology(tau)?);
            let run = slowest(&s, &t, max_stages.unwrap_or(usize::MAX))?;
            let record = json!({ "filtration": run.seq, "status": run.status, "distance": distance(&s, &t)? });
            write_json(out, &record)?;
        }
        Command::Tame { filtration, alpha, set } => {
            let seq: FiltrationSeq = read_json(filtration)?;
            let calc = SetCalculus::new(&seq, Ordinal(*alpha))?;
            let mut record = json!({
                "alpha": alpha,
                "tame": calc.tame(),
                "slight_cover": calc.slight_cover(),
            });
            if let Some(s) = set {
                let a = parse_mask(s, seq.n())?;
                record["set"] = json!(a);
                record["slight"] = json!(calc.is_slight(a));
                record["solid"] = json!(calc.is_solid(a));
            }
            write_json(out, &record)?;
        }
        Command::Approx { partition, filtration } => {
            let e = load_partition(partition)?;
            let seq: FiltrationSeq = read_json(filtration)?;
            let chain = approx_chain(&e, &seq)?;
            let meet = relation_meet(&chain)?;
            write_json(out, &json!({ "partition": e, "chain": chain, "meet": meet }))?;
        }
        Command::Classify { sigma, set } => {
            let s = load_topology(sigma)?;
            let a = parse_mask(set, s.n())?;
            write_json(out, &borel_report(&s, a))?;
        }
        Command::Verify { property, all, n, format, max_len, timing, replay } => {
            let config = CheckConfig { max_len: *max_len, convention: cli.borel_convention, regularity };
            if let Some(path) = replay {
                return replay_file(path, out);
            }
            let n = n.expect("clap enforces --n");
            let reports = if *all {
                for p in PropertyId::ALL.iter().filter(|p| n > p.cap()) {
                    writeln!(err, "note: skipping {p} (runs up to n = {})", p.cap())?;
                }
                in_pool(pool, || verify::check_all(n, &config))?
            } else {
                let id = property.as_deref().ok_or_else(|| Error::UnknownProperty("(none given)".into()))?;
                let id: PropertyId = id.parse()?;
                vec![in_pool(pool, || verify::check(id, n, &config))?]
            };
            write_reports(out, &reports, *format, *timing, *all)?;
            return Ok(if reports.iter().any(|r| r.outcome.is_fail()) { 1 } else { 0 });
        }
        Command::Explore { query, n } => {
            let q: Query = query.parse()?;
            write_json(out, &in_pool(pool, || explore(q, *n))?)?;
        }
    }
    Ok(0)
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn report_value(r: &VerificationReport, timing: bool) -> Result<Value> {
    let mut v = serde_json::to_value(r)?;
    if timing {
        v["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1e3);
    }
    Ok(v)
}

fn write_reports(
    out: &mut dyn Write,
    reports: &[VerificationReport],
    format: Format,
    timing: bool,
    all: bool,
) -> Result<()> {
    match format {
        Format::Json => {
            let values = reports.iter().map(|r| report_value(r, timing)).collect::<Result<Vec<_>>>()?;
            if all {
                write_json(out, &values)?;
            } else {
                write_json(out, &values[0])?;
            }
        }
        Format::Text => {
            for r in reports {
                let mut line = r.text_line();
                if !timing {
                    // drop the trailing elapsed time
                    line.truncate(line.rfind(" (").unwrap_or(line.len()));
                }
                writeln!(out, "{line}")?;
                for note in &r.notes {
                    writeln!(out, "    note: {note}")?;
                }
                match &r.outcome {
                    verify::Outcome::Fail { counterexample, note } => {
                        writeln!(out, "    {note}")?;
                        writeln!(out, "    counterexample: {}", serde_json::to_string(counterexample)?)?;
                    }
                    verify::Outcome::Trivialized { note } => writeln!(out, "    {note}")?,
                    verify::Outcome::Pass => {}
                }
            }
        }
    }
    Ok(())
}

fn replay_file(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let value: Value = read_json(path)?;
    let cx: Counterexample = match serde_json::from_value::<Counterexample>(value.clone()) {
        Ok(cx) => cx,
        Err(direct) => {
            let nested = value.pointer("/outcome/counterexample").cloned().ok_or(Error::Json(direct))?;
            serde_json::from_value(nested)?
        }
    };
    let outcome = verify::replay(&cx)?;
    let (status, detail, code) = match outcome {
        InstanceOutcome::Pass => ("pass", Value::Null, 0),
        InstanceOutcome::Vacuous => ("vacuous", Value::Null, 0),
        InstanceOutcome::Fail(d) => ("fail", d, 1),
    };
    let reproduced = code == 1 && detail == cx.detail;
    write_json(out, &json!({ "property": cx.property, "status": status, "detail": detail, "reproduced": reproduced }))?;
    Ok(code)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn named_size(arg: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = arg.strip_prefix(prefix)?;
    Some(rest.parse::<usize>().map_err(|_| Error::InvalidInstance {
        property: prefix.trim_end_matches(':').into(),
        reason: format!("`{rest}` is not a ground size"),
    }))
}

fn check_size(n: usize) -> Result<usize> {
    if n > crate::topology::MAX_GROUND {
        Err(Error::GroundSizeTooLarge { n, cap: crate::topology::MAX_GROUND })
    } else {
        Ok(n)
    }
}

/// A named topology or a JSON file.
pub fn load_topology(arg: &str) -> Result<Topology> {
    if arg == "sierpinski" {
        return Ok(Topology::sierpinski());
    }
    if let Some(n) = named_size(arg, "indiscrete:") {
        return Ok(Topology::indiscrete(check_size(n?)?));
    }
    if let Some(n) = named_size(arg, "discrete:") {
        return Ok(Topology::discrete(check_size(n?)?));
    }
    read_json(Path::new(arg))
}

/// A named partition or a JSON file.
pub fn load_partition(arg: &str) -> Result<Partition> {
    if let Some(n) = named_size(arg, "identity:") {
        return Ok(Partition::identity(check_size(n?)?));
    }
    if let Some(n) = named_size(arg, "one-block:") {
        return Ok(Partition::one_block(check_size(n?)?));
    }
    read_json(Path::new(arg))
}

/// `5`, `0b101`, or `{0,2}`.
pub fn parse_mask(s: &str, n: usize) -> Result<SubsetMask> {
    let bad = || Error::InvalidInstance { property: "--set".into(), reason: format!("cannot parse subset `{s}`") };
    let t = s.trim();
    let mask = if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let mut m = 0u32;
        for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let x: u32 = p.parse().map_err(|_| bad())?;
            m |= 1u32.checked_shl(x).ok_or_else(bad)?;
        }
        SubsetMask(m)
    } else if let Some(bin) = t.strip_prefix("0b") {
        SubsetMask(u32::from_str_radix(bin, 2).map_err(|_| bad())?)
    } else {
        SubsetMask(t.parse().map_err(|_| bad())?)
    };
    mask.check_fits(n)?;
    Ok(mask)
}
