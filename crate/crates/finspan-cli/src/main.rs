//! Batch checker for finite span categories and their extension data.
//!
//! Every command reads a category (a builtin generator or a description
//! file), runs an exhaustive verification, prints a human-readable report,
//! and optionally writes the byte-exact machine form and DOT diagrams.
//! Exit status: 0 all checks pass, 1 some check fails, 2 usage or parse
//! error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use finspan::driver::{resolve_family, resolve_input, run, DriverError, InputRef, RunConfig};
use finspan::Guards;

#[derive(Parser, Debug)]
#[command(
    name = "finspan",
    about = "exhaustive checkers for finite span categories, Beck-Chevalley conditions, and extension data"
)]
struct Cli {
    /// check-decomposition | build-span | build-span2 | check-biadjointable |
    /// extend | verify-extension | factorization-category | segal-compare |
    /// check-projection | recheck
    command: String,

    /// builtin:NAME (finset1..finset4, divlat6, divlat12, c2sets2) or a
    /// description file path
    #[arg(long)]
    input: String,

    /// comma-separated family assignments, e.g. I=inj,P=inj,E=inj
    /// (builtins: all, iso, ids, inj/mono, surj/epi; or [family] names from
    /// the input file)
    #[arg(long)]
    family: Option<String>,

    /// indexing: builtin:subsets | builtin:downsets | builtin:free:OBJ | an
    /// [indexing] name from the input file
    #[arg(long)]
    indexing: Option<String>,

    /// write the machine-readable report here
    #[arg(long)]
    out: Option<PathBuf>,

    /// write a DOT rendering of the main object here
    #[arg(long)]
    dot: Option<PathBuf>,

    /// fiber/hom category object guard
    #[arg(long, default_value_t = 64)]
    guard_objects: usize,

    /// enumeration guard for searches and sweeps
    #[arg(long, default_value_t = 1_000_000)]
    guard_enum: u64,

    /// exploration-order seed; never affects verdicts
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// chain length for segal-compare (default: runs 0..=3)
    #[arg(long)]
    segal_n: Option<usize>,

    /// designated morphism for factorization-category
    #[arg(long)]
    morphism: Option<String>,

    /// witness JSON file for recheck
    #[arg(long)]
    witness_file: Option<PathBuf>,
}

fn parse_families(s: &Option<String>) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    if let Some(s) = s {
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("bad family assignment `{part}`"))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(out)
}

fn write_dot(cli: &Cli, cfg: &RunConfig) -> Result<(), DriverError> {
    let Some(path) = &cli.dot else { return Ok(()) };
    let resolved = resolve_input(&cfg.input)?;
    let text = match cli.command.as_str() {
        "segal-compare" => finspan::dot::export_tw(&finspan::spancat::tw(cli.segal_n.unwrap_or(2))),
        "build-span" => {
            let b = cfg
                .families
                .get("B")
                .map(|s| resolve_family(&resolved, s))
                .transpose()?
                .unwrap_or_else(|| finspan::classes::MorphismFamily::all(&resolved.cat, "all"));
            let f = cfg
                .families
                .get("F")
                .map(|s| resolve_family(&resolved, s))
                .transpose()?
                .unwrap_or_else(|| finspan::classes::MorphismFamily::all(&resolved.cat, "all"));
            match finspan::spancat::check_adequate(&resolved.cat, &b, &f) {
                Ok(t) => match finspan::spancat::build_span_category(&t, &cfg.guards) {
                    Ok(span) => finspan::dot::export_span_category(&span),
                    Err(_) => finspan::dot::export_category(&resolved.cat),
                },
                Err(_) => finspan::dot::export_category(&resolved.cat),
            }
        }
        _ => finspan::dot::export_category(&resolved.cat),
    };
    debug_assert!(finspan::dot::validate_dot(&text));
    std::fs::write(path, text).map_err(|e| DriverError::Other(e.to_string()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let families = match parse_families(&cli.family) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let input = if let Some(name) = cli.input.strip_prefix("builtin:") {
        InputRef::Builtin(name.to_string())
    } else {
        InputRef::File(PathBuf::from(&cli.input))
    };
    let witness = match &cli.witness_file {
        None => None,
        Some(path) => match std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
        {
            Ok(v) => Some(v),
            Err(e) => {
                eprintln!("error reading witness file: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let mut cfg = RunConfig::new(&cli.command, input);
    cfg.families = families;
    cfg.indexing = cli.indexing.clone();
    cfg.guards = Guards::new(cli.guard_objects, cli.guard_enum);
    cfg.seed = cli.seed;
    cfg.segal_n = cli.segal_n;
    cfg.morphism = cli.morphism.clone();
    cfg.witness = witness;

    let started = Instant::now();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(DriverError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            return ExitCode::from(2);
        }
        Err(DriverError::Parse(e)) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(2);
        }
        Err(DriverError::Invalid(v)) => {
            eprintln!("invalid category: {v:?}");
            return ExitCode::from(2);
        }
        Err(DriverError::Other(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let elapsed = started.elapsed().as_millis() as u64;
    print!("{}", report.human_text(elapsed));
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.machine_json()) {
            eprintln!("error writing report: {e}");
            return ExitCode::from(1);
        }
    }
    if let Err(e) = write_dot(&cli, &cfg) {
        eprintln!("error writing dot: {e}");
        return ExitCode::from(1);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
