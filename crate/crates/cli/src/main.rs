//! `bbs`: box-ball system toolkit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bbs_core::measures::ParamSpec;
use bbs_core::stat::run_windows;
use bbs_core::{
    eliminate_k, estimate_functional, evolution_report, evolve_n, parse_config,
    reconstruct_from_zeta, run_suite, skip, ts_decompose, zeta_of, BallConfig, BbsError, Boundary,
    Capacity, Observable, SampleSpec, SeatProfile, SuiteOptions, ZetaMatrix, SUITES,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_ERROR: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "bbs",
    version,
    about = "Box-ball system: dynamics, seat numbers, skip maps and invariant measures"
)]
struct Cli {
    /// Boundary mode for configuration input.
    #[arg(long, global = true, default_value = "whole", value_parser = ["whole", "half"])]
    boundary: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Configuration file; stdin when omitted or "-".
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    /// Parameter file, or inline JSON such as '{"ab": {"a": 0.2, "b": 0.1}}'.
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply T_ℓ and print the new configuration.
    Evolve {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "inf")]
        capacity: Capacity,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Print offsets and ζ tables as JSON instead.
        #[arg(long, value_parser = ["json"])]
        report: Option<String>,
    },
    /// Seat events and carrier loads per site as JSON.
    Seats {
        #[command(flatten)]
        input: Input,
    },
    /// The slot decomposition ζ as JSON [[k, i, count], …].
    Zeta {
        #[command(flatten)]
        input: Input,
        /// Read a ζ table and print the configuration it encodes.
        #[arg(long)]
        inverse: bool,
    },
    /// Apply the k-skip map.
    Skip {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'k', long)]
        k: u32,
    },
    /// Apply the 10-elimination k times.
    Eliminate {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'k', long)]
        k: u32,
        /// Print {schema, phi, rigging} as JSON instead of the configuration.
        #[arg(long, value_parser = ["json"])]
        rigging: Option<String>,
    },
    /// Takahashi–Satsuma soliton decomposition as JSON.
    Ts {
        #[command(flatten)]
        input: Input,
    },
    /// Draw one whole-line window from the invariant measure.
    Sample {
        #[command(flatten)]
        sampling: Sampling,
        /// Sites in the measured interior.
        #[arg(long, default_value_t = 100)]
        sites: usize,
    },
    /// Estimate the mean of an observable, e.g. "wseat:2" or "skip:1:eta:0*eta:1".
    Expect {
        observable: String,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 100)]
        windows: usize,
        #[arg(long, default_value_t = 10_000)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Closed-form value to compare against.
        #[arg(long)]
        target: Option<f64>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// One of the suite names, or "all".
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Support length for exhaustive sweeps.
        #[arg(long)]
        max_len: Option<usize>,
        /// Scale factor for Monte Carlo sample sizes.
        #[arg(long, default_value_t = 1.0)]
        samples: f64,
    },
}

fn read_input(input: &Input) -> Result<String, BbsError> {
    let mut text = String::new();
    match input.input.as_deref() {
        None => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) if p.as_os_str() == "-" => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => fs::read_to_string(p).map(|t| text = t),
    }
    .map_err(|e| BbsError::Parse(format!("reading input: {e}")))?;
    Ok(text)
}

fn read_config(input: &Input, boundary: Boundary) -> Result<BallConfig, BbsError> {
    parse_config(&read_input(input)?, boundary)
}

fn read_params(arg: &str) -> Result<ParamSpec, BbsError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| BbsError::Parse(format!("reading {arg}: {e}")))?
    };
    ParamSpec::parse(&text)
}

fn spec_for(params: &ParamSpec, size: usize, seed: u64) -> Result<SampleSpec, BbsError> {
    Ok(match params.ab() {
        Some(ab) => SampleSpec::markov(ab, size, seed),
        None => SampleSpec::for_alpha(&params.alpha()?, size, seed),
    })
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("schema".into(), json!(1));
        out.append(m);
        return Value::Object(out);
    }
    v
}

fn parse_zeta(text: &str) -> Result<ZetaMatrix, BbsError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| BbsError::Parse(format!("ζ table: {e}")))?;
    let rows = v.get("zeta").cloned().unwrap_or(v);
    let rows: Vec<(u32, i64, u32)> = serde_json::from_value(rows)
        .map_err(|e| BbsError::Parse(format!("ζ table must be [[k, i, count], …]: {e}")))?;
    ZetaMatrix::from_entries(rows.into_iter().map(|(k, i, c)| ((k, i), c)))
}

fn seats_json(cfg: &BallConfig) -> Value {
    let prof = SeatProfile::new(cfg);
    let sites: Vec<Value> = prof
        .sites()
        .map(
            |x| json!({ "x": x, "eta": prof.eta(x), "event": prof.event(x), "load": prof.load(x) }),
        )
        .collect();
    json!({ "schema": 1, "lo": prof.lo(), "hi": prof.hi(), "records": prof.records(), "sites": sites })
}

/// Canonical text; half-line output starts at site 0 so it reads back without a header.
fn show(cfg: &BallConfig) -> String {
    let c = cfg.canonical();
    match (c.boundary(), c.last_one()) {
        (Boundary::HalfLine, Some(b)) => c.rewindow(0, b).unwrap_or(c).render(),
        _ => c.render(),
    }
}

/// Output text and exit code of a successful command.
fn run(cli: Cli) -> Result<(String, u8), BbsError> {
    let boundary: Boundary = cli.boundary.parse()?;
    Ok(match cli.cmd {
        Cmd::Evolve {
            input,
            capacity,
            steps,
            report,
        } => {
            let cfg = read_config(&input, boundary)?;
            if report.is_some() {
                if steps != 1 {
                    return Err(BbsError::Config("--report describes a single step".into()));
                }
                (to_json(&evolution_report(&cfg, capacity)), 0)
            } else {
                (show(&evolve_n(&cfg, capacity, steps)), 0)
            }
        }
        Cmd::Seats { input } => (to_json(&seats_json(&read_config(&input, boundary)?)), 0),
        Cmd::Zeta { input, inverse } => {
            if inverse {
                let z = parse_zeta(&read_input(&input)?)?;
                (show(&reconstruct_from_zeta(&z, boundary)?), 0)
            } else {
                let z = zeta_of(&read_config(&input, boundary)?);
                (to_json(&json!({ "schema": 1, "zeta": z })), 0)
            }
        }
        Cmd::Skip { input, k } => (skip(&read_config(&input, boundary)?, k)?.render(), 0),
        Cmd::Eliminate { input, k, rigging } => {
            let (phi, rig) = eliminate_k(&read_config(&input, boundary)?, k)?;
            match rigging {
                Some(_) => (
                    to_json(&json!({ "schema": 1, "phi": phi.bit_string(), "rigging": rig })),
                    0,
                ),
                None => (phi.render(), 0),
            }
        }
        Cmd::Ts { input } => {
            let set = ts_decompose(&read_config(&input, boundary)?);
            let sizes = set.sizes();
            (
                to_json(&with_schema(
                    json!({ "sizes": sizes, "solitons": set.solitons, "records": set.records }),
                )),
                0,
            )
        }
        Cmd::Sample { sampling, sites } => {
            let spec = spec_for(&read_params(&sampling.params)?, sites, sampling.seed)?;
            let w = run_windows(&spec, 1, 1, |w| Ok(w.clone()))?.remove(0);
            let interior = BallConfig::new(w.lo, w.cfg.values(w.lo, w.hi), Boundary::WholeLine)?;
            (interior.render(), 0)
        }
        Cmd::Expect {
            observable,
            sampling,
            windows,
            size,
            workers,
            target,
        } => {
            let obs: Observable = observable.parse()?;
            let spec = spec_for(&read_params(&sampling.params)?, size, sampling.seed)?;
            let mut r = estimate_functional(&spec, &obs, windows, workers)?;
            if let Some(t) = target {
                r = r.with_target(t);
            }
            let v = serde_json::to_value(&r).expect("reports serialize");
            (
                to_json(&with_schema(
                    json!({ "observable": obs.to_string(), "seed": sampling.seed, "report": v }),
                )),
                0,
            )
        }
        Cmd::Verify {
            suite,
            seed,
            workers,
            max_len,
            samples,
        } => {
            let opts = SuiteOptions {
                seed,
                workers,
                max_len,
                scale: samples,
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut out = String::new();
            let mut passed = true;
            for name in names {
                let r = run_suite(name, &opts)?;
                passed &= r.passed;
                out.push_str(&to_json(&r));
            }
            (out, if passed { 0 } else { EXIT_VERIFY_FAILED })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            let mut out = io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_ERROR);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("bbs: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
