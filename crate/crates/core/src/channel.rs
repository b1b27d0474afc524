//! Channel parameter model: topologies, named gains/powers, and phase
//! vectors.
//!
//! Each topology fixes an ordered list of paths (transmitter-to-receiver
//! links); gains, phases, and receiver wiring all follow that order. Path i
//! carries gain `gain_names()[i]` and phase `theta[i]`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

/// Network topologies supported by the region, condition, and simulation
/// operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Two-transmitter multiple access channel.
    Mac,
    /// MAC with encoder 1 knowing the second source non-causally.
    UnccMac,
    /// MAC with a causal cooperation link to encoder 1.
    UccMac,
    /// Multiple access relay channel.
    Marc,
    /// MARC with non-causal cooperation at encoder 1.
    UnccMarc,
    /// MARC with a causal cooperation link to encoder 1.
    UccMarc,
    /// Two-pair interference channel.
    Ic,
    /// Interference channel with a shared relay.
    Irc,
}

pub const ALL_TOPOLOGIES: [Topology; 8] = [
    Topology::Mac,
    Topology::UnccMac,
    Topology::UccMac,
    Topology::Marc,
    Topology::UnccMarc,
    Topology::UccMarc,
    Topology::Ic,
    Topology::Irc,
];

impl Topology {
    /// Gain names in path order.
    pub fn gain_names(self) -> &'static [&'static str] {
        match self {
            Topology::Mac | Topology::UnccMac => &["g1", "g2"],
            Topology::UccMac => &["g1", "g2", "g21"],
            Topology::Marc | Topology::UnccMarc => &["g1", "g2", "gr", "g1r", "g2r"],
            Topology::UccMarc => &["g1", "g2", "gr", "g1r", "g2r", "g21"],
            Topology::Ic => &["g11", "g12", "g21", "g22"],
            Topology::Irc => &["g11", "g12", "g21", "g22", "gr1", "gr2", "g1r", "g2r"],
        }
    }

    /// Power names: p1 and p2 always, plus pr where a relay exists.
    pub fn power_names(self) -> &'static [&'static str] {
        if self.has_relay() {
            &["p1", "p2", "pr"]
        } else {
            &["p1", "p2"]
        }
    }

    pub fn has_relay(self) -> bool {
        matches!(
            self,
            Topology::Marc | Topology::UnccMarc | Topology::UccMarc | Topology::Irc
        )
    }

    /// Number of channel paths; equals the phase-vector length.
    pub fn path_count(self) -> usize {
        self.gain_names().len()
    }

    /// Transmitters in input order: encoder 1, encoder 2, then the relay
    /// where present.
    pub fn transmitter_count(self) -> usize {
        if self.has_relay() {
            3
        } else {
            2
        }
    }

    /// Receiver names in output order.
    pub fn receiver_names(self) -> &'static [&'static str] {
        match self {
            Topology::Mac | Topology::UnccMac => &["y"],
            Topology::UccMac => &["y", "y1"],
            Topology::Marc | Topology::UnccMarc => &["y", "yr"],
            Topology::UccMarc => &["y", "yr", "y1"],
            Topology::Ic => &["y1", "y2"],
            Topology::Irc => &["y1", "y2", "yr"],
        }
    }

    /// For each receiver (in `receiver_names` order), the incoming paths as
    /// (path index, transmitter index) pairs.
    pub fn receiver_paths(self) -> &'static [&'static [(usize, usize)]] {
        match self {
            Topology::Mac | Topology::UnccMac => &[&[(0, 0), (1, 1)]],
            Topology::UccMac => &[&[(0, 0), (1, 1)], &[(2, 1)]],
            Topology::Marc | Topology::UnccMarc => &[&[(0, 0), (1, 1), (2, 2)], &[(3, 0), (4, 1)]],
            Topology::UccMarc => &[&[(0, 0), (1, 1), (2, 2)], &[(3, 0), (4, 1)], &[(5, 1)]],
            Topology::Ic => &[&[(0, 0), (2, 1)], &[(1, 0), (3, 1)]],
            Topology::Irc => &[
                &[(0, 0), (2, 1), (4, 2)],
                &[(1, 0), (3, 1), (5, 2)],
                &[(6, 0), (7, 1)],
            ],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mac" => Ok(Topology::Mac),
            "uncc_mac" => Ok(Topology::UnccMac),
            "ucc_mac" => Ok(Topology::UccMac),
            "marc" => Ok(Topology::Marc),
            "uncc_marc" => Ok(Topology::UnccMarc),
            "ucc_marc" => Ok(Topology::UccMarc),
            "ic" => Ok(Topology::Ic),
            "irc" => Ok(Topology::Irc),
            other => Err(Error::Validation(format!(
                "unknown topology '{other}' (expected one of mac, uncc_mac, ucc_mac, marc, uncc_marc, ucc_marc, ic, irc)"
            ))),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Topology::Mac => "mac",
            Topology::UnccMac => "uncc_mac",
            Topology::UccMac => "ucc_mac",
            Topology::Marc => "marc",
            Topology::UnccMarc => "uncc_marc",
            Topology::UccMarc => "ucc_marc",
            Topology::Ic => "ic",
            Topology::Irc => "irc",
        };
        f.write_str(s)
    }
}

/// Gains, powers, and noise power for one topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub topology: Topology,
    /// Named path gains; the topology fixes exactly which names are present.
    pub gains: BTreeMap<String, f64>,
    /// Named transmit powers (p1, p2, and pr where a relay exists), watts.
    pub powers: BTreeMap<String, f64>,
    /// Receiver noise power N, watts; must be positive.
    pub noise: f64,
}

impl ChannelSpec {
    /// Builds a spec from gains/powers in the topology's declared order.
    pub fn new(topology: Topology, gains: &[f64], powers: &[f64], noise: f64) -> Result<Self> {
        if gains.len() != topology.gain_names().len() {
            return Err(Error::Dimension(format!(
                "{topology} takes {} gains, got {}",
                topology.gain_names().len(),
                gains.len()
            )));
        }
        if powers.len() != topology.power_names().len() {
            return Err(Error::Dimension(format!(
                "{topology} takes {} powers, got {}",
                topology.power_names().len(),
                powers.len()
            )));
        }
        let spec = Self {
            topology,
            gains: topology
                .gain_names()
                .iter()
                .map(|n| n.to_string())
                .zip(gains.iter().copied())
                .collect(),
            powers: topology
                .power_names()
                .iter()
                .map(|n| n.to_string())
                .zip(powers.iter().copied())
                .collect(),
            noise,
        };
        let report = validate_channel(&spec);
        if let Some(first) = report.first() {
            return Err(Error::Validation(first.clone()));
        }
        Ok(spec)
    }

    /// Gain by name; panics if called on a spec that failed validation.
    pub fn gain(&self, name: &str) -> f64 {
        *self
            .gains
            .get(name)
            .unwrap_or_else(|| panic!("gain {name} missing; spec not validated"))
    }

    /// Power by name; panics if called on a spec that failed validation.
    pub fn power(&self, name: &str) -> f64 {
        *self
            .powers
            .get(name)
            .unwrap_or_else(|| panic!("power {name} missing; spec not validated"))
    }

    /// Errors unless `validate_channel` reports no violations.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_channel(self);
        if report.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(report.join("; ")))
        }
    }
}

/// Checks every channel invariant and lists each violation; an empty report
/// means the spec is usable by all downstream operations.
pub fn validate_channel(spec: &ChannelSpec) -> Vec<String> {
    let mut violations = Vec::new();
    if spec.noise <= 0.0 || !spec.noise.is_finite() {
        violations.push(format!(
            "noise power must be positive and finite, got {}",
            spec.noise
        ));
    }
    for &name in spec.topology.gain_names() {
        match spec.gains.get(name) {
            None => violations.push(format!("missing gain for topology: {name}")),
            Some(&g) if g < 0.0 || !g.is_finite() => {
                violations.push(format!(
                    "gain {name} must be nonnegative and finite, got {g}"
                ));
            }
            Some(_) => {}
        }
    }
    for name in spec.gains.keys() {
        if !spec.topology.gain_names().contains(&name.as_str()) {
            violations.push(format!("unexpected gain for topology: {name}"));
        }
    }
    for &name in spec.topology.power_names() {
        match spec.powers.get(name) {
            None => violations.push(format!("missing power for topology: {name}")),
            Some(&p) if p < 0.0 || !p.is_finite() => {
                violations.push(format!(
                    "power {name} must be nonnegative and finite, got {p}"
                ));
            }
            Some(_) => {}
        }
    }
    for name in spec.powers.keys() {
        if !spec.topology.power_names().contains(&name.as_str()) {
            violations.push(format!("unexpected power for topology: {name}"));
        }
    }
    violations
}

/// Channel phases, one angle in [0, 2*pi) per path, in the topology's path
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    pub phases: Vec<f64>,
}

impl PhaseVector {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        for (i, &t) in phases.iter().enumerate() {
            if !t.is_finite() || !(0.0..TAU).contains(&t) {
                return Err(Error::Validation(format!(
                    "phase {i} must lie in [0, 2*pi), got {t}"
                )));
            }
        }
        Ok(Self { phases })
    }

    /// All-zero phases of the topology's path count.
    pub fn zeros(topology: Topology) -> Self {
        Self {
            phases: vec![0.0; topology.path_count()],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Errors unless the length matches the topology's path count.
    pub fn ensure_matches(&self, topology: Topology) -> Result<()> {
        if self.len() != topology.path_count() {
            return Err(Error::Dimension(format!(
                "phase vector has {} entries, {topology} has {} paths",
                self.len(),
                topology.path_count()
            )));
        }
        Ok(())
    }
}

/// Wraps an angle into [0, 2*pi).
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}
