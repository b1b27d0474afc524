//! Block-Markov transmission schedules for the relay topologies. Each encoder
//! superimposes codewords for a fixed tuple of message slots per block; slots
//! referencing blocks outside 1..=B carry a known filler codeword so the
//! chain can start and drain.

use crate::channel::Topology;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One superposition layer in a block: either message `W{owner}{block}` or
/// the known filler codeword transmitted outside the message window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Slot {
    Message { encoder: usize, block: usize },
    Filler,
}

impl Slot {
    /// Label used in schedule tables: `W{encoder}{block}`, or `1` for filler.
    pub fn label(&self) -> String {
        match self {
            Slot::Message { encoder, block } => format!("W{encoder}{block}"),
            Slot::Filler => "1".to_string(),
        }
    }
}

/// Per-encoder slot templates as (owner, block offset) pairs; offset is
/// relative to the current block index. Row order: encoder 1, encoder 2,
/// relay.
type Template = &'static [&'static [(usize, i64)]];

const UNCC_MARC: Template = &[
    &[(1, -1), (1, 0), (2, 0), (2, -1)],
    &[(2, -1), (2, 0)],
    &[(1, -1), (2, -1)],
];

const UCC_MARC: Template = &[
    &[(1, -1), (1, 0), (2, -1)],
    &[(2, -1), (2, 0)],
    &[(1, -1), (2, -1)],
];

const IRC: Template = &[&[(1, -1), (1, 0)], &[(2, -1), (2, 0)], &[(1, -1), (2, -1)]];

/// A full transmission schedule: `rows[encoder][t - 1]` lists the slots sent
/// by that encoder in block `t`, for `t` in `1..=blocks + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub topology: Topology,
    pub blocks: usize,
    pub rows: Vec<Vec<Vec<Slot>>>,
}

pub(crate) fn from_template(
    template: Template,
    topology: Topology,
    blocks: usize,
) -> Result<Schedule> {
    if blocks == 0 {
        return Err(Error::Argument("schedule needs at least one block".into()));
    }
    let rows = template
        .iter()
        .map(|slots| {
            (1..=blocks as i64 + 1)
                .map(|t| {
                    slots
                        .iter()
                        .map(|&(owner, off)| {
                            let b = t + off;
                            if (1..=blocks as i64).contains(&b) {
                                Slot::Message {
                                    encoder: owner,
                                    block: b as usize,
                                }
                            } else {
                                Slot::Filler
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(Schedule {
        topology,
        blocks,
        rows,
    })
}

/// The plain relay channel reuses the two-layer template: each encoder
/// superimposes its previous and current message, the relay repeats both
/// previous ones.
pub(crate) fn relay_df_schedule(topology: Topology, blocks: usize) -> Result<Schedule> {
    match topology {
        Topology::Marc => from_template(IRC, topology, blocks),
        _ => build_schedule(topology, blocks),
    }
}

/// Builds the block-Markov schedule for a relay topology over `blocks`
/// message blocks (`blocks + 1` transmission blocks in total).
pub fn build_schedule(topology: Topology, blocks: usize) -> Result<Schedule> {
    let template = match topology {
        Topology::UnccMarc => UNCC_MARC,
        Topology::UccMarc => UCC_MARC,
        Topology::Irc => IRC,
        other => {
            return Err(Error::Argument(format!(
                "no block-Markov schedule is defined for topology {other}"
            )))
        }
    };
    from_template(template, topology, blocks)
}

impl Schedule {
    /// The tuple sent by `encoder` (0-based row) in transmission block `t`
    /// (1-based), e.g. `(1, W11, 1)`.
    pub fn tuple_label(&self, encoder: usize, t: usize) -> String {
        let slots = &self.rows[encoder][t - 1];
        let parts: Vec<String> = slots.iter().map(Slot::label).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let headers = ["block", "encoder 1", "encoder 2", "relay"];
        let mut cells: Vec<Vec<String>> = vec![headers.iter().map(|s| s.to_string()).collect()];
        for t in 1..=self.blocks + 1 {
            let mut row = vec![t.to_string()];
            for encoder in 0..self.rows.len() {
                row.push(self.tuple_label(encoder, t));
            }
            cells.push(row);
        }
        let widths: Vec<usize> = (0..headers.len())
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", line.join("  ").trim_end())?;
        }
        Ok(())
    }
}
