//! Physical-channel sampling. Every receiver observes the gain-and-phase
//! weighted sum of its incoming paths plus circularly symmetric complex
//! Gaussian noise; phases are either drawn once and held for the whole block
//! or redrawn uniformly at every symbol. All randomness comes from seeded,
//! purpose-separated streams so identical configurations reproduce
//! bit-identical blocks.

use crate::channel::{ChannelSpec, PhaseVector, Topology};
use crate::error::{Error, Result};
use crate::rng::{complex_gaussian, purpose, stream_id, stream_rng, uniform_angle};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Phase behaviour over a block: one fixed draw, or fresh i.i.d. uniform
/// phases every symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseMode {
    /// Phases held fixed over the block; length must match the topology.
    NonErgodic { theta: PhaseVector },
    /// Phases redrawn uniformly on [0, 2*pi) at every symbol.
    ErgodicUniform,
}

/// One sampled channel use: inputs per transmitter, outputs per receiver (in
/// the topology's receiver order), and the realized phases, one row per
/// symbol. In fixed-phase mode all rows are identical.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelUse {
    pub inputs: Vec<Vec<Complex64>>,
    pub outputs: Vec<Vec<Complex64>>,
    pub phases_used: Vec<Vec<f64>>,
}

/// Draws the n-by-paths phase matrix for one block.
pub fn sample_phases(
    topology: Topology,
    mode: &PhaseMode,
    n: usize,
    rng_seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::Argument("block length must be at least 1".into()));
    }
    match mode {
        PhaseMode::NonErgodic { theta } => {
            theta.ensure_matches(topology)?;
            Ok(vec![theta.phases.clone(); n])
        }
        PhaseMode::ErgodicUniform => {
            let paths = topology.path_count();
            let mut rng = stream_rng(rng_seed, stream_id(0, purpose::PHASES, 0));
            Ok((0..n)
                .map(|_| (0..paths).map(|_| uniform_angle(&mut rng)).collect())
                .collect())
        }
    }
}

/// One uniform draw per path, packaged as a fixed phase vector; handy for
/// "random but held" blocks.
pub fn random_phase_vector(topology: Topology, rng_seed: u64) -> PhaseVector {
    let mut rng = stream_rng(rng_seed, stream_id(0, purpose::PHASES, 1));
    PhaseVector {
        phases: (0..topology.path_count())
            .map(|_| uniform_angle(&mut rng))
            .collect(),
    }
}

/// Passes per-transmitter input sequences through the channel.
///
/// Each receiver gets independent noise of variance noise_scale times the
/// spec's N per symbol, from its own stream; noise_scale = 0 yields an exact
/// noise-free pass while consuming the same number of draws.
pub fn transmit(
    spec: &ChannelSpec,
    inputs: &[Vec<Complex64>],
    mode: &PhaseMode,
    noise_scale: f64,
    rng_seed: u64,
) -> Result<ChannelUse> {
    spec.ensure_valid()?;
    let topology = spec.topology;
    if inputs.len() != topology.transmitter_count() {
        return Err(Error::Dimension(format!(
            "{topology} has {} transmitters, got {} input sequences",
            topology.transmitter_count(),
            inputs.len()
        )));
    }
    let n = inputs[0].len();
    if n == 0 {
        return Err(Error::Argument(
            "inputs must contain at least one symbol".into(),
        ));
    }
    if inputs.iter().any(|x| x.len() != n) {
        return Err(Error::Dimension(
            "all input sequences must share one length".into(),
        ));
    }
    if noise_scale < 0.0 || !noise_scale.is_finite() {
        return Err(Error::Validation(format!(
            "noise_scale must be nonnegative and finite, got {noise_scale}"
        )));
    }
    let phases = sample_phases(topology, mode, n, rng_seed)?;
    let gains: Vec<f64> = topology
        .gain_names()
        .iter()
        .map(|name| spec.gain(name))
        .collect();
    let noise_var = noise_scale * spec.noise;
    let mut outputs = Vec::with_capacity(topology.receiver_names().len());
    for (r, paths) in topology.receiver_paths().iter().enumerate() {
        let mut rng = stream_rng(rng_seed, stream_id(0, purpose::NOISE, r as u64));
        let mut out = Vec::with_capacity(n);
        for t in 0..n {
            let mut y = Complex64::new(0.0, 0.0);
            for &(path, tx) in *paths {
                y += Complex64::from_polar(gains[path], phases[t][path]) * inputs[tx][t];
            }
            out.push(y + complex_gaussian(&mut rng, noise_var));
        }
        outputs.push(out);
    }
    Ok(ChannelUse {
        inputs: inputs.to_vec(),
        outputs,
        phases_used: phases,
    })
}
