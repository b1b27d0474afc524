//! Effective run configuration: flag parsing helpers, the JSON config-file
//! overlay, and the echo block embedded in every output.
//!
//! Precedence is config file over flags over documented defaults. The echoed
//! [`RunConfig`] uses the same schema the `--config` file accepts, so any
//! emitted result can be reproduced by feeding its embedded config back in.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use pinc_core::{make_dsbs, Error, JointSourcePMF, PhaseVector, Result, Topology, TrialPhases};
use serde::{Deserialize, Deserializer, Serialize};

/// Default random-correlation sample count for the independence report.
pub const DEFAULT_RHO_SAMPLES: usize = 200;
/// Default grid points per free phase dimension.
pub const DEFAULT_GRID_POINTS: usize = 64;
/// Default Monte-Carlo trial count for `simulate`.
pub const DEFAULT_TRIALS: u64 = 100;
/// Default seed for commands where the seed may stay implicit.
pub const DEFAULT_SEED: u64 = 1;

/// Full effective configuration of one command invocation.
///
/// Sections that do not apply to the invoked command stay `None`. The same
/// struct deserializes `--config` files, where every field is optional and
/// unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<String>,
    pub channel: Option<ChannelConfig>,
    pub source: Option<SourceSpec>,
    pub sim: Option<SimConfig>,
    pub lemma: Option<LemmaConfig>,
    pub check: Option<CheckConfig>,
    pub schedule: Option<ScheduleConfig>,
    pub output: OutputConfig,
    pub workers: Option<usize>,
}

impl RunConfig {
    /// Loads and validates a JSON config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Validation(format!("config: cannot read '{}': {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            Error::Validation(format!("config: '{}' is not valid: {e}", path.display()))
        })
    }
}

/// Channel section: topology, named gains and powers, noise power.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    pub topology: Option<String>,
    pub gains: BTreeMap<String, f64>,
    pub powers: BTreeMap<String, f64>,
    pub noise: Option<f64>,
}

/// Simulation section of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub n: Option<usize>,
    pub blocks: Option<usize>,
    pub trials: Option<u64>,
    pub rate1: Option<f64>,
    pub rate2: Option<f64>,
    pub seed: Option<u64>,
    pub phase_mode: Option<String>,
    pub noise_scale: Option<f64>,
    /// Per-encoder superposition power fractions, one row per transmitter
    /// (encoder 1, encoder 2, relay); config-file only.
    pub power_fractions: Option<[Vec<f64>; 3]>,
}

/// Phase-minimax section of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    pub gains: Option<Vec<f64>>,
    pub powers: Option<Vec<f64>>,
    pub noise: Option<f64>,
    /// Uniform real off-diagonal input correlation; absent means independent.
    pub rho: Option<f64>,
    pub samples: Option<usize>,
    pub grid_points: Option<usize>,
    pub ergodic_samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Gain-condition section of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub boundary: Option<String>,
    pub variant: Option<String>,
}

/// Schedule section of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    pub topology: Option<String>,
    pub blocks: Option<usize>,
}

/// Output section: format name and destination path (stdout when absent).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Option<String>,
    pub path: Option<PathBuf>,
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    /// Parses a format name; `text` is accepted only by `schedule`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Validation(format!(
                "format: '{other}' is not recognized (expected json, csv, or text)"
            ))),
        }
    }

    /// Canonical name, as accepted by [`Format::parse`].
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// Joint source selection: a doubly symmetric binary source by crossover
/// probability, or an explicit joint PMF over (U, V).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    Dsbs { crossover: f64 },
    Pmf { probs: Vec<Vec<f64>> },
}

impl SourceSpec {
    /// Parses flag syntax: `dsbs:p`, or joint-PMF rows `a,b;c,d`.
    pub fn parse(text: &str) -> Result<Self> {
        if let Some(p) = text.strip_prefix("dsbs:") {
            let crossover = p.trim().parse().map_err(|_| {
                Error::Validation(format!("source: '{p}' is not a crossover probability"))
            })?;
            return Ok(SourceSpec::Dsbs { crossover });
        }
        let probs = text
            .split(';')
            .map(|row| parse_f64_list(row, ',', "source"))
            .collect::<Result<Vec<_>>>()?;
        Ok(SourceSpec::Pmf { probs })
    }

    /// Materializes the joint PMF, validating it.
    pub fn pmf(&self) -> Result<JointSourcePMF> {
        match self {
            SourceSpec::Dsbs { crossover } => make_dsbs(*crossover),
            SourceSpec::Pmf { probs } => JointSourcePMF::new(probs.clone()),
        }
    }
}

// Config files may give the source either as the flag string ("dsbs:0.11")
// or as the structured object the echo emits.
impl<'de> Deserialize<'de> for SourceSpec {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Tagged(Tagged),
        }
        #[derive(Deserialize)]
        #[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
        enum Tagged {
            Dsbs { crossover: f64 },
            Pmf { probs: Vec<Vec<f64>> },
        }
        match Repr::deserialize(de)? {
            Repr::Text(s) => SourceSpec::parse(&s).map_err(serde::de::Error::custom),
            Repr::Tagged(Tagged::Dsbs { crossover }) => Ok(SourceSpec::Dsbs { crossover }),
            Repr::Tagged(Tagged::Pmf { probs }) => Ok(SourceSpec::Pmf { probs }),
        }
    }
}

/// Parses a separated list of reals, naming the offending field on failure.
pub fn parse_f64_list(text: &str, sep: char, field: &str) -> Result<Vec<f64>> {
    text.split(sep)
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| Error::Validation(format!("{field}: '{tok}' is not a number")))
        })
        .collect()
}

/// Parses a phase-mode string into trial phases for the given topology.
///
/// Accepted forms: `held` (all phases zero), `held:a;b;..` (radians, one per
/// path), `ergodic`, `random_held`, and `worst_grid` / `worst_grid:points`.
pub fn parse_phase_mode(text: &str, topology: Topology) -> Result<TrialPhases> {
    let (head, tail) = match text.split_once(':') {
        Some((h, t)) => (h, Some(t)),
        None => (text, None),
    };
    match (head, tail) {
        ("held", None) => Ok(TrialPhases::Held {
            theta: PhaseVector::zeros(topology),
        }),
        ("held", Some(list)) => {
            let theta = PhaseVector::new(parse_f64_list(list, ';', "phase_mode")?)?;
            theta.ensure_matches(topology)?;
            Ok(TrialPhases::Held { theta })
        }
        ("ergodic", None) => Ok(TrialPhases::PerSymbol),
        ("random_held", None) => Ok(TrialPhases::RandomHeld),
        ("worst_grid", None) => Ok(TrialPhases::WorstGrid {
            points: DEFAULT_GRID_POINTS,
        }),
        ("worst_grid", Some(points)) => {
            let points = points.parse().map_err(|_| {
                Error::Validation(format!("phase_mode: '{points}' is not a point count"))
            })?;
            Ok(TrialPhases::WorstGrid { points })
        }
        _ => Err(Error::Validation(format!(
            "phase_mode: '{text}' is not recognized (expected held, held:a;b;.., ergodic, \
             random_held, or worst_grid[:points])"
        ))),
    }
}

/// Canonical string form of trial phases; parsing it back reproduces them.
pub fn phase_mode_string(phases: &TrialPhases) -> String {
    match phases {
        TrialPhases::Held { theta } => {
            let list: Vec<String> = theta.phases.iter().map(|p| p.to_string()).collect();
            format!("held:{}", list.join(";"))
        }
        TrialPhases::PerSymbol => "ergodic".into(),
        TrialPhases::RandomHeld => "random_held".into(),
        TrialPhases::WorstGrid { points } => format!("worst_grid:{points}"),
    }
}
