//! Command-line front end for the phase-incoherent network library: parse
//! flags and an optional JSON config file, dispatch to the region, condition,
//! minimax, simulation, and schedule entry points, and emit machine-readable
//! results.
//!
//! One command runs per process. `--config` values override flags, flags
//! override documented defaults, and every output embeds the full effective
//! configuration so a run is reproducible from its output alone. Exit codes:
//! 0 on success, 2 on validation errors (the message names the offending
//! field), 3 when a search-budget limit is exceeded.

mod config;
mod render;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use pinc_core::{
    build_schedule, check_gain_conditions_with, compute_region, entropy_triple, ergodic_avg_mi,
    ergodic_avg_mi_mc, is_feasible, min_theta_mi, simulate_mac_e2e, simulate_marc_df,
    verify_independence_optimal, Boundary, ChannelSpec, DfOptions, Error, GaussianInputSpec,
    MarcConditionVariant, MinimaxOptions, Result, Topology,
};

pub use config::{
    parse_f64_list, parse_phase_mode, phase_mode_string, ChannelConfig, CheckConfig, Format,
    LemmaConfig, OutputConfig, RunConfig, ScheduleConfig, SimConfig, SourceSpec,
    DEFAULT_GRID_POINTS, DEFAULT_RHO_SAMPLES, DEFAULT_SEED, DEFAULT_TRIALS,
};
pub use render::{render, Payload, SIMULATE_COLUMNS};

/// Parses argv, runs the selected command, and returns the process exit code.
///
/// Results go to stdout or `--output`; errors go to stderr. Exit codes are 0
/// (success), 2 (usage or validation error), and 3 (search budget exceeded).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Budget(_) => 3,
                _ => 2,
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pinc",
    version,
    about = "Reliable-communication regions, gain conditions, adversarial-phase minimax \
             values, block-Markov schedules, and Monte-Carlo simulations for \
             phase-incoherent Gaussian networks",
    long_about = None,
    after_help = "All quantities are plain reals: gains are amplitudes, powers and noise are \
                  watts, phases are radians, rates are bits per symbol. A JSON file passed \
                  via --config overrides flags; every output embeds the effective config."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the entropy-triple region a channel supports.
    Region(RegionArgs),
    /// Evaluate gain conditions and, with a source, region feasibility.
    Check(CheckArgs),
    /// Minimize Gaussian mutual information over adversarial phases.
    Lemma(LemmaArgs),
    /// Run the end-to-end Monte-Carlo achievability simulation.
    Simulate(SimulateArgs),
    /// Print a block-Markov transmission schedule.
    Schedule(ScheduleArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// JSON config file; its values override flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format: json, csv, or text (text is schedule-only).
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Worker threads for parallel search and simulation (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

/// Channel parameters; the topology decides which gains and powers apply.
#[derive(Args, Debug, Default)]
struct ChannelArgs {
    /// Topology: mac, uncc_mac, ucc_mac, marc, uncc_marc, ucc_marc, ic, irc.
    #[arg(long)]
    topology: Option<String>,
    /// Gain from encoder 1 to the (primary) receiver.
    #[arg(long, allow_negative_numbers = true)]
    g1: Option<f64>,
    /// Gain from encoder 2 to the (primary) receiver.
    #[arg(long, allow_negative_numbers = true)]
    g2: Option<f64>,
    /// Cooperation-link gain from encoder 2 to encoder 1 (causal topologies)
    /// or cross gain from encoder 2 to receiver 1 (interference channels).
    #[arg(long, allow_negative_numbers = true)]
    g21: Option<f64>,
    /// Gain from the relay to the destination.
    #[arg(long, allow_negative_numbers = true)]
    gr: Option<f64>,
    /// Gain from encoder 1 to the relay.
    #[arg(long, allow_negative_numbers = true)]
    g1r: Option<f64>,
    /// Gain from encoder 2 to the relay.
    #[arg(long, allow_negative_numbers = true)]
    g2r: Option<f64>,
    /// Direct gain from encoder 1 to receiver 1 (interference channels).
    #[arg(long, allow_negative_numbers = true)]
    g11: Option<f64>,
    /// Cross gain from encoder 1 to receiver 2 (interference channels).
    #[arg(long, allow_negative_numbers = true)]
    g12: Option<f64>,
    /// Direct gain from encoder 2 to receiver 2 (interference channels).
    #[arg(long, allow_negative_numbers = true)]
    g22: Option<f64>,
    /// Gain from the relay to receiver 1 (relay-assisted interference).
    #[arg(long, allow_negative_numbers = true)]
    gr1: Option<f64>,
    /// Gain from the relay to receiver 2 (relay-assisted interference).
    #[arg(long, allow_negative_numbers = true)]
    gr2: Option<f64>,
    /// Transmit power of encoder 1, watts.
    #[arg(long, allow_negative_numbers = true)]
    p1: Option<f64>,
    /// Transmit power of encoder 2, watts.
    #[arg(long, allow_negative_numbers = true)]
    p2: Option<f64>,
    /// Transmit power of the relay, watts.
    #[arg(long, allow_negative_numbers = true)]
    pr: Option<f64>,
    /// Receiver noise power, watts.
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
}

const GAIN_FLAGS: [&str; 11] = [
    "g1", "g2", "g21", "gr", "g1r", "g2r", "g11", "g12", "g22", "gr1", "gr2",
];
const POWER_FLAGS: [&str; 3] = ["p1", "p2", "pr"];

impl ChannelArgs {
    fn gain_flag(&self, name: &str) -> Option<f64> {
        match name {
            "g1" => self.g1,
            "g2" => self.g2,
            "g21" => self.g21,
            "gr" => self.gr,
            "g1r" => self.g1r,
            "g2r" => self.g2r,
            "g11" => self.g11,
            "g12" => self.g12,
            "g22" => self.g22,
            "gr1" => self.gr1,
            "gr2" => self.gr2,
            _ => None,
        }
    }

    fn power_flag(&self, name: &str) -> Option<f64> {
        match name {
            "p1" => self.p1,
            "p2" => self.p2,
            "pr" => self.pr,
            _ => None,
        }
    }
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    channel: ChannelArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Joint source: `dsbs:p` or PMF rows `a,b;c,d`; enables feasibility and
    /// the cooperation-link conditions that depend on H(U|V).
    #[arg(long)]
    source: Option<String>,
    /// Feasibility boundary: closed (<=) or open (<). Default closed.
    #[arg(long)]
    boundary: Option<String>,
    /// Relay gain-condition reading: literal or symmetric. Default literal.
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Args, Debug)]
struct LemmaArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Path gains, comma-separated amplitudes (one per transmit branch).
    #[arg(long)]
    gains: Option<String>,
    /// Transmit powers, comma-separated watts (same length as --gains).
    #[arg(long)]
    powers: Option<String>,
    /// Receiver noise power, watts.
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Uniform real off-diagonal input correlation; omit for independent inputs.
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// Random correlation matrices for the independence report (0 skips it).
    #[arg(long)]
    samples: Option<usize>,
    /// Grid points per free phase dimension for the minimizer.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Node/sample count for the ergodic-average estimates (0 skips them).
    #[arg(long)]
    ergodic_samples: Option<usize>,
    /// RNG seed; 0 is reserved and rejected.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Joint source: `dsbs:p` or PMF rows `a,b;c,d`.
    #[arg(long)]
    source: Option<String>,
    /// Binning rate of encoder 1, bits per symbol.
    #[arg(long, allow_negative_numbers = true)]
    rate1: Option<f64>,
    /// Binning rate of encoder 2, bits per symbol.
    #[arg(long, allow_negative_numbers = true)]
    rate2: Option<f64>,
    /// Channel symbols per block.
    #[arg(long)]
    n: Option<usize>,
    /// Message blocks B for block-Markov relaying (relay topologies only).
    #[arg(long)]
    blocks: Option<usize>,
    /// Monte-Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed; must be explicit and nonzero for simulate.
    #[arg(long)]
    seed: Option<u64>,
    /// Phases: held, held:a;b;.. (radians), ergodic, random_held,
    /// worst_grid[:points].
    #[arg(long)]
    phase_mode: Option<String>,
    /// Noise standard-deviation multiplier; 0 gives a noiseless channel.
    #[arg(long, allow_negative_numbers = true)]
    noise_scale: Option<f64>,
}

#[derive(Args, Debug)]
struct ScheduleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Topology with a relay schedule: marc, uncc_marc, ucc_marc, irc.
    #[arg(long)]
    topology: Option<String>,
    /// Message blocks B; the schedule spans B+1 transmission blocks.
    #[arg(long)]
    blocks: Option<usize>,
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Region(args) => run_region(args),
        Command::Check(args) => run_check(args),
        Command::Lemma(args) => run_lemma(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Schedule(args) => run_schedule(args),
    }
}

/// Everything shared by command handlers after the config overlay resolves.
struct Effective {
    file: RunConfig,
    format: Format,
    path: Option<PathBuf>,
    workers: Option<usize>,
}

fn common_setup(common: &CommonArgs, command: &str, default_format: Format) -> Result<Effective> {
    let file = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &file.command {
        if name != command {
            return Err(Error::Validation(format!(
                "command: config file selects '{name}' but '{command}' was invoked"
            )));
        }
    }
    let format = match file.output.format.clone().or_else(|| common.format.clone()) {
        Some(name) => Format::parse(&name)?,
        None => default_format,
    };
    if format == Format::Text && command != "schedule" {
        return Err(Error::Validation(
            "format: text output is only available for schedule".into(),
        ));
    }
    let path = file.output.path.clone().or_else(|| common.output.clone());
    let workers = file.workers.or(common.workers);
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Validation("workers: must be at least 1".into()));
        }
        // The global pool can only be sized once per process; a repeat
        // request (library callers running several commands) keeps the
        // first size, which never changes results.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    Ok(Effective {
        file,
        format,
        path,
        workers,
    })
}

/// Resolves the channel from config-file values overriding flags, rejecting
/// parameters the topology does not define.
fn build_channel(args: &ChannelArgs, file: Option<&ChannelConfig>) -> Result<ChannelSpec> {
    let topology_name = file
        .and_then(|c| c.topology.clone())
        .or_else(|| args.topology.clone())
        .ok_or_else(|| Error::Validation("topology: required".into()))?;
    let topology = Topology::parse(&topology_name)?;
    let gain_names = topology.gain_names();
    let power_names = topology.power_names();
    for name in GAIN_FLAGS {
        if args.gain_flag(name).is_some() && !gain_names.contains(&name) {
            return Err(Error::Validation(format!(
                "{name}: {topology} has no such path gain"
            )));
        }
    }
    for name in POWER_FLAGS {
        if args.power_flag(name).is_some() && !power_names.contains(&name) {
            return Err(Error::Validation(format!(
                "{name}: {topology} has no such transmitter"
            )));
        }
    }
    if let Some(cfg) = file {
        for key in cfg.gains.keys() {
            if !gain_names.contains(&key.as_str()) {
                return Err(Error::Validation(format!(
                    "{key}: {topology} has no such path gain"
                )));
            }
        }
        for key in cfg.powers.keys() {
            if !power_names.contains(&key.as_str()) {
                return Err(Error::Validation(format!(
                    "{key}: {topology} has no such transmitter"
                )));
            }
        }
    }
    let gains = gain_names
        .iter()
        .map(|name| {
            file.and_then(|c| c.gains.get(*name).copied())
                .or_else(|| args.gain_flag(name))
                .ok_or_else(|| Error::Validation(format!("{name}: required for {topology}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let powers = power_names
        .iter()
        .map(|name| {
            file.and_then(|c| c.powers.get(*name).copied())
                .or_else(|| args.power_flag(name))
                .ok_or_else(|| Error::Validation(format!("{name}: required for {topology}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let noise = file
        .and_then(|c| c.noise)
        .or(args.noise)
        .ok_or_else(|| Error::Validation("noise: required".into()))?;
    ChannelSpec::new(topology, &gains, &powers, noise)
}

fn echo_channel(spec: &ChannelSpec) -> ChannelConfig {
    ChannelConfig {
        topology: Some(spec.topology.to_string()),
        gains: spec.gains.clone(),
        powers: spec.powers.clone(),
        noise: Some(spec.noise),
    }
}

fn effective_source(file: Option<SourceSpec>, flag: Option<&str>) -> Result<Option<SourceSpec>> {
    match (file, flag) {
        (Some(spec), _) => Ok(Some(spec)),
        (None, Some(text)) => SourceSpec::parse(text).map(Some),
        (None, None) => Ok(None),
    }
}

fn reject_zero_seed(seed: u64, command: &str) -> Result<u64> {
    if seed == 0 {
        return Err(Error::Validation(format!(
            "seed: 0 is reserved; pass a nonzero seed to {command}"
        )));
    }
    Ok(seed)
}

fn finish(
    payload: &Payload,
    config: &RunConfig,
    format: Format,
    path: Option<&Path>,
) -> Result<()> {
    let bytes = render(payload, config, format)?;
    write_output(&bytes, path)
}

fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::Validation(format!("output: {e}"))),
        Some(p) => fs::write(p, bytes)
            .map_err(|e| Error::Validation(format!("output: cannot write '{}': {e}", p.display()))),
    }
}

fn run_region(args: RegionArgs) -> Result<()> {
    let eff = common_setup(&args.common, "region", Format::Json)?;
    let spec = build_channel(&args.channel, eff.file.channel.as_ref())?;
    let bounds = compute_region(&spec)?;
    let config = RunConfig {
        command: Some("region".into()),
        channel: Some(echo_channel(&spec)),
        output: OutputConfig {
            format: Some(eff.format.name().into()),
            path: eff.path.clone(),
        },
        workers: eff.workers,
        ..RunConfig::default()
    };
    finish(
        &Payload::Region(bounds),
        &config,
        eff.format,
        eff.path.as_deref(),
    )
}

fn run_check(args: CheckArgs) -> Result<()> {
    let eff = common_setup(&args.common, "check", Format::Json)?;
    let spec = build_channel(&args.channel, eff.file.channel.as_ref())?;
    let check_file = eff.file.check.clone().unwrap_or_default();
    let boundary_name = check_file
        .boundary
        .or(args.boundary)
        .unwrap_or_else(|| "closed".into());
    let boundary = match boundary_name.as_str() {
        "closed" => Boundary::Closed,
        "open" => Boundary::Open,
        other => {
            return Err(Error::Validation(format!(
                "boundary: '{other}' is not recognized (expected closed or open)"
            )))
        }
    };
    let variant_name = check_file
        .variant
        .or(args.variant)
        .unwrap_or_else(|| "literal".into());
    let variant = match variant_name.as_str() {
        "literal" => MarcConditionVariant::Literal,
        "symmetric" => MarcConditionVariant::Symmetric,
        other => {
            return Err(Error::Validation(format!(
                "variant: '{other}' is not recognized (expected literal or symmetric)"
            )))
        }
    };
    let source = effective_source(eff.file.source.clone(), args.source.as_deref())?;
    let triple = match &source {
        Some(spec) => Some(entropy_triple(&spec.pmf()?)?),
        None => None,
    };
    let report = check_gain_conditions_with(&spec, triple.as_ref(), variant)?;
    let feasibility = match &triple {
        Some(t) => Some(is_feasible(t, &compute_region(&spec)?, boundary)),
        None => None,
    };
    let config = RunConfig {
        command: Some("check".into()),
        channel: Some(echo_channel(&spec)),
        source,
        check: Some(CheckConfig {
            boundary: Some(boundary_name),
            variant: Some(variant_name),
        }),
        output: OutputConfig {
            format: Some(eff.format.name().into()),
            path: eff.path.clone(),
        },
        workers: eff.workers,
        ..RunConfig::default()
    };
    let payload = Payload::Check {
        report,
        entropy: triple,
        feasibility,
    };
    finish(&payload, &config, eff.format, eff.path.as_deref())
}

fn run_lemma(args: LemmaArgs) -> Result<()> {
    let eff = common_setup(&args.common, "lemma", Format::Json)?;
    let lemma_file = eff.file.lemma.clone().unwrap_or_default();
    let gains = match (lemma_file.gains, &args.gains) {
        (Some(list), _) => list,
        (None, Some(text)) => parse_f64_list(text, ',', "gains")?,
        (None, None) => return Err(Error::Validation("gains: required for lemma".into())),
    };
    let powers = match (lemma_file.powers, &args.powers) {
        (Some(list), _) => list,
        (None, Some(text)) => parse_f64_list(text, ',', "powers")?,
        (None, None) => return Err(Error::Validation("powers: required for lemma".into())),
    };
    let noise = lemma_file
        .noise
        .or(args.noise)
        .ok_or_else(|| Error::Validation("noise: required for lemma".into()))?;
    let rho = lemma_file.rho.or(args.rho);
    let samples = lemma_file
        .samples
        .or(args.samples)
        .unwrap_or(DEFAULT_RHO_SAMPLES);
    let grid_points = lemma_file
        .grid_points
        .or(args.grid_points)
        .unwrap_or(DEFAULT_GRID_POINTS);
    let ergodic_samples = lemma_file
        .ergodic_samples
        .or(args.ergodic_samples)
        .unwrap_or(0);
    let seed = reject_zero_seed(
        lemma_file.seed.or(args.seed).unwrap_or(DEFAULT_SEED),
        "lemma",
    )?;
    let input = match rho {
        None => GaussianInputSpec::independent(gains.clone(), powers.clone(), noise)?,
        Some(r) => {
            let m = gains.len();
            let mut matrix = vec![Complex64::new(r, 0.0); m * m];
            for i in 0..m {
                matrix[i * m + i] = Complex64::new(1.0, 0.0);
            }
            GaussianInputSpec::with_rho(gains.clone(), powers.clone(), noise, matrix)?
        }
    };
    let options = MinimaxOptions {
        grid_points,
        refine: true,
    };
    let minimax = min_theta_mi(&input, &options)?;
    let independence = if samples > 0 {
        Some(verify_independence_optimal(
            &gains, &powers, noise, samples, seed,
        )?)
    } else {
        None
    };
    let (ergodic_quadrature, ergodic_mc) = if ergodic_samples > 0 {
        (
            Some(ergodic_avg_mi(&input, ergodic_samples, seed)?),
            Some(ergodic_avg_mi_mc(&input, ergodic_samples, seed)?),
        )
    } else {
        (None, None)
    };
    let config = RunConfig {
        command: Some("lemma".into()),
        lemma: Some(LemmaConfig {
            gains: Some(gains),
            powers: Some(powers),
            noise: Some(noise),
            rho,
            samples: Some(samples),
            grid_points: Some(grid_points),
            ergodic_samples: Some(ergodic_samples),
            seed: Some(seed),
        }),
        output: OutputConfig {
            format: Some(eff.format.name().into()),
            path: eff.path.clone(),
        },
        workers: eff.workers,
        ..RunConfig::default()
    };
    let payload = Payload::Lemma {
        minimax,
        independence,
        ergodic_quadrature,
        ergodic_mc,
    };
    finish(&payload, &config, eff.format, eff.path.as_deref())
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let eff = common_setup(&args.common, "simulate", Format::Json)?;
    let spec = build_channel(&args.channel, eff.file.channel.as_ref())?;
    let sim_file = eff.file.sim.clone().unwrap_or_default();
    let source = effective_source(eff.file.source.clone(), args.source.as_deref())?
        .ok_or_else(|| Error::Validation("source: required for simulate".into()))?;
    let pmf = source.pmf()?;
    let rate1 = sim_file
        .rate1
        .or(args.rate1)
        .ok_or_else(|| Error::Validation("rate1: required for simulate".into()))?;
    let rate2 = sim_file
        .rate2
        .or(args.rate2)
        .ok_or_else(|| Error::Validation("rate2: required for simulate".into()))?;
    let n = sim_file
        .n
        .or(args.n)
        .ok_or_else(|| Error::Validation("n: required for simulate".into()))?;
    let trials = sim_file.trials.or(args.trials).unwrap_or(DEFAULT_TRIALS);
    let blocks = sim_file.blocks.or(args.blocks).unwrap_or(1);
    let seed = sim_file.seed.or(args.seed).unwrap_or(0);
    if seed == 0 {
        return Err(Error::Validation(
            "seed: simulate requires an explicit nonzero seed (0 is reserved)".into(),
        ));
    }
    let noise_scale = sim_file.noise_scale.or(args.noise_scale).unwrap_or(1.0);
    let phase_text = sim_file
        .phase_mode
        .clone()
        .or(args.phase_mode)
        .unwrap_or_else(|| "held".into());
    let phases = parse_phase_mode(&phase_text, spec.topology)?;
    let power_fractions = sim_file.power_fractions.clone();
    let outcome = match spec.topology {
        Topology::Mac => {
            if blocks != 1 {
                return Err(Error::Validation(
                    "blocks: the two-sender channel encodes a single block; use --blocks 1".into(),
                ));
            }
            if power_fractions.is_some() {
                return Err(Error::Validation(
                    "power_fractions: only the relay simulation splits power across layers".into(),
                ));
            }
            simulate_mac_e2e(
                &pmf,
                &spec,
                (rate1, rate2),
                n,
                trials,
                &phases,
                noise_scale,
                seed,
            )?
        }
        Topology::Marc | Topology::UnccMarc | Topology::UccMarc => {
            let options = DfOptions {
                noise_scale,
                power_fractions: power_fractions.clone(),
            };
            simulate_marc_df(
                &pmf,
                &spec,
                (rate1, rate2),
                n,
                blocks,
                trials,
                &phases,
                seed,
                &options,
            )?
        }
        other => {
            return Err(Error::Validation(format!(
                "topology: simulation covers mac, marc, uncc_marc, ucc_marc; \
                 '{other}' has no end-to-end simulator"
            )))
        }
    };
    let config = RunConfig {
        command: Some("simulate".into()),
        channel: Some(echo_channel(&spec)),
        source: Some(source),
        sim: Some(SimConfig {
            n: Some(n),
            blocks: Some(blocks),
            trials: Some(trials),
            rate1: Some(rate1),
            rate2: Some(rate2),
            seed: Some(seed),
            phase_mode: Some(phase_mode_string(&phases)),
            noise_scale: Some(noise_scale),
            power_fractions,
        }),
        output: OutputConfig {
            format: Some(eff.format.name().into()),
            path: eff.path.clone(),
        },
        workers: eff.workers,
        ..RunConfig::default()
    };
    finish(
        &Payload::Simulate(outcome),
        &config,
        eff.format,
        eff.path.as_deref(),
    )
}

fn run_schedule(args: ScheduleArgs) -> Result<()> {
    let eff = common_setup(&args.common, "schedule", Format::Text)?;
    let schedule_file = eff.file.schedule.clone().unwrap_or_default();
    let topology_name = schedule_file
        .topology
        .or(args.topology)
        .ok_or_else(|| Error::Validation("topology: required".into()))?;
    let topology = Topology::parse(&topology_name)?;
    let blocks = schedule_file.blocks.or(args.blocks).unwrap_or(1);
    let schedule = build_schedule(topology, blocks)?;
    let config = RunConfig {
        command: Some("schedule".into()),
        schedule: Some(ScheduleConfig {
            topology: Some(topology.to_string()),
            blocks: Some(blocks),
        }),
        output: OutputConfig {
            format: Some(eff.format.name().into()),
            path: eff.path.clone(),
        },
        workers: eff.workers,
        ..RunConfig::default()
    };
    finish(
        &Payload::Schedule(schedule),
        &config,
        eff.format,
        eff.path.as_deref(),
    )
}
