//! `badapprox`: play the games, verify outcomes, and estimate dimensions.
//!
//! Everything written to stdout is one JSON record per line, starting with a
//! `config` record. Exit codes: 0 clean, 1 usage or input error, 2 a forfeit
//! or illegal move (an off-field opening included) ended the game, 3 a
//! verification failed.

use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use badapprox::analysis::{
    box_dimension, cantor_samples, dimension_of_ba_digits, power_law_check, CantorMeasure, CantorOracle, DimensionEstimate, LebesgueMeasure,
    MeasureOracle, DEFAULT_STABILITY_TOLERANCE,
};
use badapprox::games::{transcript_records, Concentric, CuspSeeking, GameError, GreedyLeft, RandomBob, Strategy};
use badapprox::horoballs::{generate_ford, load_family, rescale_family, HoroballFamily};
use badapprox::metric::{certify_diffuse, diffuse_bound_from_perfectness, measure_perfectness, Ball, LineSet, SpaceDescriptor, HALF_PLANE_DELTA};
use badapprox::par::Execution;
use badapprox::rational::{self, from_ratio};
use badapprox::records::{config_record, diffuseness_records, write_record, write_records};
use badapprox::strategy::{continued_fraction, run_ba_experiment, verify_ba_ford, ExperimentConfig, ExperimentError, RealNumber};
use badapprox::BigRational;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

const EXIT_GAME: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "badapprox", version, about = "Schmidt and absolute games against horoball families")]
struct Cli {
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play the horoball-avoidance strategy against a Bob and verify the outcome.
    Play(PlayArgs),
    /// Check q²|x − p/q| > s for every reduced p/q with q ≤ Qmax.
    VerifyBa(VerifyArgs),
    /// Box-counting dimension of the numbers with partial quotients ≤ N.
    Dimension(DimensionArgs),
    /// Measure uniform perfectness of a line space and certify diffuseness below the derived bound.
    CheckDiffuse(DiffuseArgs),
    /// Compare μ(B(x, ρ)) with ρ^δ on an exact self-similar measure.
    PowerLaw(PowerLawArgs),
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Ford circles with denominators up to Q.
    #[arg(long, value_name = "Q", conflicts_with = "family")]
    ford: Option<u64>,
    /// Family file with `base=p/q diameter=r/s` lines.
    #[arg(long, value_name = "FILE")]
    family: Option<PathBuf>,
    /// Replace every horoball by its scaled copy sH.
    #[arg(long, value_name = "s")]
    rescale: Option<f64>,
}

impl FamilyArgs {
    fn load(&self) -> Result<HoroballFamily> {
        let base = match (&self.ford, &self.family) {
            (_, Some(path)) => load_family(path)?,
            (Some(q), None) => generate_ford(*q)?,
            (None, None) => generate_ford(200)?,
        };
        Ok(match self.rescale {
            Some(s) => rescale_family(&base, s)?,
            None => base,
        })
    }
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value = "1/10")]
    beta: String,
    #[arg(long, default_value_t = 60)]
    rounds: usize,
    /// random:SEED, cusp:P/Q, concentric or greedy-left.
    #[arg(long, default_value = "random:0")]
    bob: String,
    /// Bob's opening ball as CENTER:RADIUS.
    #[arg(long, default_value = "1/2:1/4")]
    open: String,
    /// Playing window as LO:HI.
    #[arg(long, default_value = "0:1")]
    window: String,
    /// Visual-metric base a.
    #[arg(long, default_value_t = std::f64::consts::E)]
    a: f64,
    /// Hyperbolicity constant δ.
    #[arg(long, default_value_t = HALF_PLANE_DELTA)]
    delta: f64,
    /// Visual-metric comparability constant C.
    #[arg(long = "visual-c", default_value_t = 2.0)]
    visual_c: f64,
    /// Omit the per-move transcript records.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// p/q, a decimal, golden, sqrt2-1, pi-3 or surd:P:D:Q.
    x: String,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    qmax: u64,
    /// Partial quotients to report.
    #[arg(long, default_value_t = 20)]
    digits: usize,
}

#[derive(Args)]
struct DimensionArgs {
    /// Bound N on the partial quotients.
    #[arg(long, required_unless_present = "cantor")]
    digits: Option<u32>,
    /// Grid depths as a..b.
    #[arg(long, default_value = "6..14", value_parser = parse_range)]
    depths: RangeInclusive<u32>,
    /// Run the middle-thirds Cantor control on the triadic grid instead.
    #[arg(long)]
    cantor: bool,
    /// Also write the (depth, scale, count) table to this CSV file.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct DiffuseArgs {
    /// TOML space descriptor; defaults to the middle-thirds Cantor set at depth 10.
    #[arg(long, value_name = "FILE")]
    space: Option<PathBuf>,
    /// β to certify; defaults to 999/1000 of the bound derived from the measured ν.
    #[arg(long)]
    beta: Option<String>,
    /// Scales 3^-a ..= 3^-b.
    #[arg(long, default_value = "2..8", value_parser = parse_range)]
    scales: RangeInclusive<u32>,
    /// Only print the summary record.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct PowerLawArgs {
    /// cantor or lebesgue.
    #[arg(long, default_value = "cantor")]
    measure: String,
    /// Exponent δ; defaults to log 2 / log 3 for cantor and 1 for lebesgue.
    #[arg(long)]
    delta: Option<f64>,
    /// Scales 3^-a ..= 3^-b.
    #[arg(long, default_value = "1..10", value_parser = parse_range)]
    scales: RangeInclusive<u32>,
    /// Sample centers: endpoints of the cylinders of this level.
    #[arg(long, default_value_t = 10)]
    sample_level: u32,
    #[arg(long, default_value_t = DEFAULT_STABILITY_TOLERANCE)]
    tolerance: f64,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    rational::parse(s).map_err(|e| anyhow!(e))
}

fn parse_pair(s: &str, what: &str) -> Result<(BigRational, BigRational)> {
    let (a, b) = s.split_once(':').ok_or_else(|| anyhow!("{what}: expected A:B, got `{s}`"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn triadic(k: u32) -> BigRational {
    from_ratio(1, 3i64.pow(k))
}

fn make_bob(choice: &str, opening: Ball<BigRational, BigRational>) -> Result<Box<dyn Strategy<LineSet>>> {
    let (kind, arg) = choice.split_once(':').unwrap_or((choice, ""));
    Ok(match kind {
        "random" => Box::new(RandomBob::bob(opening, arg.parse().with_context(|| format!("seed in `{choice}`"))?)),
        "cusp" => Box::new(CuspSeeking::new(parse_rational(arg)?, opening)),
        "concentric" => Box::new(Concentric::bob(opening)),
        "greedy-left" => Box::new(GreedyLeft::new(opening)),
        _ => bail!("unknown bob `{choice}`; expected random:SEED, cusp:P/Q, concentric or greedy-left"),
    })
}

fn play(out: &mut dyn Write, args: &PlayArgs) -> Result<u8> {
    let family = Arc::new(args.family.load()?);
    let (center, radius) = parse_pair(&args.open, "--open")?;
    let config = ExperimentConfig {
        beta: parse_rational(&args.beta)?,
        rounds: args.rounds,
        visual_a: args.a,
        delta: args.delta,
        visual_c: args.visual_c,
        window: parse_pair(&args.window, "--window")?,
    };
    let bob = make_bob(&args.bob, Ball::new(center, radius))?;
    let mut echo = config.echo();
    echo["family"] = json!(family.generation.to_string());
    echo["members"] = json!(family.len());
    echo["bob"] = json!(args.bob);
    echo["open"] = json!(args.open);
    write_record(out, &config_record("play", echo))?;
    let outcome = run_ba_experiment(family, &config, bob.as_ref())?;
    if !args.quiet {
        let space = LineSet::Window {
            lo: config.window.0.clone(),
            hi: config.window.1.clone(),
        };
        write_records(out, &transcript_records(&space, &outcome.transcript))?;
    }
    write_record(out, &outcome.record())?;
    Ok(if outcome.transcript.forfeit().is_some() {
        EXIT_GAME
    } else if outcome.passed() {
        0
    } else {
        EXIT_VERIFY
    })
}

fn verify_ba(out: &mut dyn Write, args: &VerifyArgs) -> Result<u8> {
    let x = RealNumber::parse(&args.x).map_err(|e| anyhow!(e))?;
    write_record(out, &config_record("verify-ba", json!({"x": args.x, "s": args.s, "qmax": args.qmax})))?;
    let cf = continued_fraction(&x, args.digits);
    write_record(out, &json!({"record": "continued_fraction", "x": x.label(), "expansion": cf}))?;
    let w = verify_ba_ford(&x, args.s, args.qmax);
    write_record(out, &w.record())?;
    Ok(if w.passed() { 0 } else { EXIT_VERIFY })
}

fn dimension(out: &mut dyn Write, args: &DimensionArgs, exec: Execution) -> Result<u8> {
    let depths: Vec<u32> = args.depths.clone().collect();
    let config = json!({
        "digits": args.digits,
        "cantor": args.cantor,
        "depths": [args.depths.start(), args.depths.end()],
        "csv": args.csv,
    });
    write_record(out, &config_record("dimension", config))?;
    let est: DimensionEstimate = match (args.cantor, args.digits) {
        (true, _) => box_dimension(&CantorOracle, 3, &depths, exec)?,
        (false, Some(n)) => dimension_of_ba_digits(n, &depths, exec)?,
        (false, None) => bail!("--digits is required without --cantor"),
    };
    for ((d, s), n) in est.depths.iter().zip(&est.scales).zip(&est.counts) {
        write_record(out, &json!({"record": "box", "depth": d, "scale": s, "count": n}))?;
    }
    if let Some(path) = &args.csv {
        fs::write(path, est.csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut rec = serde_json::to_value(&est)?;
    rec["record"] = json!("dimension");
    write_record(out, &rec)?;
    Ok(0)
}

fn check_diffuse(out: &mut dyn Write, args: &DiffuseArgs, exec: Execution) -> Result<u8> {
    let desc = match &args.space {
        Some(path) => SpaceDescriptor::from_toml(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?,
        None => SpaceDescriptor::cantor(from_ratio(1, 3), 10),
    };
    desc.validate()?;
    let set = desc.line_set().ok_or_else(|| anyhow!("check-diffuse needs a space on the real line"))?;
    let scales: Vec<BigRational> = args.scales.clone().map(triadic).collect();
    let samples: Vec<BigRational> = match &set {
        LineSet::Cantor(c) => c.endpoints().to_vec(),
        LineSet::Finite(points) => points.clone(),
        LineSet::Window { lo, hi } => (0..=16).map(|k| lo + (hi - lo) * from_ratio(k, 16)).collect(),
    };
    let mut config = json!({"space": desc.echo(), "scales": [args.scales.start(), args.scales.end()], "samples": samples.len()});
    let nu = measure_perfectness(&set, &scales, &samples);
    let beta = match (&args.beta, &nu) {
        (Some(b), _) => parse_rational(b)?,
        (None, Some(nu)) => diffuse_bound_from_perfectness(nu)? * from_ratio(999, 1000),
        (None, None) => bail!("no sample escapes its ball; pass --beta"),
    };
    config["nu"] = json!(nu.as_ref().map(rational::format));
    config["beta"] = json!(rational::format(&beta));
    write_record(out, &config_record("check-diffuse", config))?;
    let cert = certify_diffuse(&set, &beta, &scales, &samples, exec);
    if !args.quiet {
        write_records(out, &diffuseness_records(&cert))?;
    }
    let failures = cert.counterexamples().count();
    write_record(
        out,
        &json!({"record": "diffuse_summary", "beta": rational::format(&beta), "trials": cert.trials.len(), "failures": failures, "passed": cert.passed()}),
    )?;
    Ok(if cert.passed() { 0 } else { EXIT_VERIFY })
}

fn power_law(out: &mut dyn Write, args: &PowerLawArgs, exec: Execution) -> Result<u8> {
    let (measure, default_delta, samples): (&dyn MeasureOracle, f64, Vec<BigRational>) = match args.measure.as_str() {
        "cantor" => (&CantorMeasure, 2f64.ln() / 3f64.ln(), cantor_samples(args.sample_level)),
        "lebesgue" => {
            let m = 1i64 << args.sample_level.min(20);
            (&LebesgueMeasure, 1.0, (1..m).map(|k| from_ratio(k, m)).collect())
        }
        other => bail!("unknown measure `{other}`; expected cantor or lebesgue"),
    };
    let delta = args.delta.unwrap_or(default_delta);
    let scales: Vec<BigRational> = args.scales.clone().map(triadic).collect();
    let config = json!({
        "measure": args.measure,
        "delta": delta,
        "scales": [args.scales.start(), args.scales.end()],
        "sample_level": args.sample_level,
        "samples": samples.len(),
        "tolerance": args.tolerance,
    });
    write_record(out, &config_record("power-law", config))?;
    let report = power_law_check(measure, delta, &scales, &samples, args.tolerance, exec)?;
    let mut rec = serde_json::to_value(&report)?;
    rec["record"] = json!("power_law");
    write_record(out, &rec)?;
    Ok(if report.passed { 0 } else { EXIT_VERIFY })
}

fn run(cli: &Cli) -> Result<u8> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Play(a) => play(&mut out, a)?,
        Command::VerifyBa(a) => verify_ba(&mut out, a)?,
        Command::Dimension(a) => dimension(&mut out, a, exec)?,
        Command::CheckDiffuse(a) => check_diffuse(&mut out, a, exec)?,
        Command::PowerLaw(a) => power_law(&mut out, a, exec)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            // Bob's opening is his first move, so an illegal one is a game event
            let illegal = matches!(e.downcast_ref::<ExperimentError>(), Some(ExperimentError::Game(GameError::Opening(_))));
            ExitCode::from(if illegal { EXIT_GAME } else { 1 })
        }
    }
}
