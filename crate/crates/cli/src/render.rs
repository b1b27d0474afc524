//! Serialization of command results to JSON, CSV, or schedule-table text.
//!
//! Output is deterministic byte-for-byte for a fixed configuration: floats
//! print in shortest round-trip form, object keys have a fixed order, and no
//! timestamps or environment details appear. Every rendering embeds the full
//! effective [`RunConfig`]: JSON as a `config` field, CSV as a trailing
//! `config` column holding the compact config JSON in every data row, and
//! schedule text as a trailing `# config` comment line.

use pinc_core::{
    ConditionReport, EntropyTriple, Error, Estimate, Feasibility, IndependenceReport,
    MinimaxResult, RegionBounds, Result, Schedule, SimOutcome, Slot,
};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

/// CSV column order for `simulate`; the ten leading columns are fixed and the
/// trailing `config` column carries the full effective configuration.
pub const SIMULATE_COLUMNS: [&str; 11] = [
    "trial_count",
    "errors",
    "error_rate",
    "stage",
    "n",
    "B",
    "rate1",
    "rate2",
    "seed",
    "theta_mode",
    "config",
];

/// One command's structured result, ready for rendering.
#[derive(Debug, Clone)]
pub enum Payload {
    Region(RegionBounds),
    Check {
        report: ConditionReport,
        entropy: Option<EntropyTriple>,
        feasibility: Option<Feasibility>,
    },
    Lemma {
        minimax: MinimaxResult,
        independence: Option<IndependenceReport>,
        ergodic_quadrature: Option<Estimate>,
        ergodic_mc: Option<Estimate>,
    },
    Simulate(SimOutcome),
    Schedule(Schedule),
}

/// Renders a payload in the requested format with the config embedded.
pub fn render(payload: &Payload, config: &RunConfig, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => render_json(payload, config),
        Format::Csv => render_csv(payload, config),
        Format::Text => render_text(payload, config),
    }
}

fn to_json(value: &impl serde::Serialize) -> Value {
    serde_json::to_value(value).expect("result serialization cannot fail")
}

fn render_json(payload: &Payload, config: &RunConfig) -> Result<Vec<u8>> {
    let mut value = match payload {
        Payload::Region(bounds) => json!({
            "h_u_given_v": bounds.bound_h_u_given_v,
            "h_v_given_u": bounds.bound_h_v_given_u,
            "h_uv": bounds.bound_h_uv,
            "topology": bounds.topology.to_string(),
            "provenance": bounds.provenance,
        }),
        Payload::Check {
            report,
            entropy,
            feasibility,
        } => json!({
            "conditions": report.conditions,
            "all_satisfied": report.all_satisfied(),
            "entropy": entropy,
            "feasibility": feasibility,
        }),
        Payload::Lemma {
            minimax,
            independence,
            ergodic_quadrature,
            ergodic_mc,
        } => json!({
            "minimax": minimax,
            "independence": independence,
            "ergodic_quadrature": ergodic_quadrature,
            "ergodic_mc": ergodic_mc,
        }),
        Payload::Simulate(outcome) => json!({ "rows": simulate_row_values(outcome) }),
        Payload::Schedule(schedule) => to_json(schedule),
    };
    let map = value.as_object_mut().expect("payloads render as objects");
    map.insert("config".into(), to_json(config));
    let mut bytes =
        serde_json::to_vec_pretty(&value).map_err(|e| Error::Argument(format!("output: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// The per-stage rows of a simulation outcome: (stage, errors, error_rate).
/// The worst-grid supremum appears as a final row without an error count.
fn simulate_rows(outcome: &SimOutcome) -> Vec<(&'static str, Option<u64>, f64)> {
    let trials = outcome.trials as f64;
    let mut rows = vec![
        ("final", Some(outcome.errors), outcome.error_rate),
        (
            "relay",
            Some(outcome.relay_errors),
            outcome.relay_errors as f64 / trials,
        ),
        (
            "destination",
            Some(outcome.destination_errors),
            outcome.destination_errors as f64 / trials,
        ),
        (
            "source",
            Some(outcome.source_errors),
            outcome.source_errors as f64 / trials,
        ),
    ];
    if let Some(sup) = outcome.sup_error_estimate {
        rows.push(("sup_estimate", None, sup));
    }
    rows
}

fn simulate_row_values(outcome: &SimOutcome) -> Vec<Value> {
    let echo = &outcome.config;
    simulate_rows(outcome)
        .into_iter()
        .map(|(stage, errors, error_rate)| {
            json!({
                "trial_count": outcome.trials,
                "errors": errors,
                "error_rate": error_rate,
                "stage": stage,
                "n": echo.n,
                "B": echo.blocks,
                "rate1": echo.rate1,
                "rate2": echo.rate2,
                "seed": echo.seed,
                "theta_mode": echo.theta_mode,
            })
        })
        .collect()
}

fn render_csv(payload: &Payload, config: &RunConfig) -> Result<Vec<u8>> {
    let config_cell =
        serde_json::to_string(config).map_err(|e| Error::Argument(format!("output: {e}")))?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Argument(format!("output: {e}"));
    match payload {
        Payload::Region(bounds) => {
            writer
                .write_record(["bound", "value", "config"])
                .map_err(fail)?;
            let rows = [
                ("h_u_given_v", bounds.bound_h_u_given_v),
                ("h_v_given_u", bounds.bound_h_v_given_u),
                ("h_uv", Some(bounds.bound_h_uv)),
            ];
            for (bound, value) in rows {
                writer
                    .write_record([
                        bound.to_string(),
                        value.map(|v| v.to_string()).unwrap_or_default(),
                        config_cell.clone(),
                    ])
                    .map_err(fail)?;
            }
        }
        Payload::Check {
            report,
            feasibility,
            ..
        } => {
            writer
                .write_record(["kind", "name", "lhs", "rhs", "satisfied", "slack", "config"])
                .map_err(fail)?;
            for c in &report.conditions {
                writer
                    .write_record([
                        "condition".to_string(),
                        c.name.clone(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        c.satisfied.to_string(),
                        c.slack.to_string(),
                        config_cell.clone(),
                    ])
                    .map_err(fail)?;
            }
            if let Some(f) = feasibility {
                for b in &f.violations {
                    writer
                        .write_record([
                            "bound".to_string(),
                            b.bound.clone(),
                            b.value.to_string(),
                            b.limit.to_string(),
                            b.satisfied.to_string(),
                            b.slack.to_string(),
                            config_cell.clone(),
                        ])
                        .map_err(fail)?;
                }
            }
        }
        Payload::Lemma {
            minimax,
            independence,
            ergodic_quadrature,
            ergodic_mc,
        } => {
            writer
                .write_record(["quantity", "value", "config"])
                .map_err(fail)?;
            let mut rows: Vec<(String, String)> = vec![
                ("min_mi".into(), minimax.value.to_string()),
                (
                    "method".into(),
                    to_json(&minimax.method).as_str().unwrap_or_default().into(),
                ),
                (
                    "grid_resolution".into(),
                    minimax.grid_resolution.to_string(),
                ),
            ];
            for (i, phase) in minimax.argmin_phases.phases.iter().enumerate() {
                rows.push((format!("argmin_theta_{i}"), phase.to_string()));
            }
            if let Some(report) = independence {
                rows.push((
                    "independent_value".into(),
                    report.independent_value.to_string(),
                ));
                rows.push((
                    "max_over_rho_of_min".into(),
                    report.max_over_rho_of_min.to_string(),
                ));
                rows.push((
                    "max_at_independent".into(),
                    report.max_at_independent.to_string(),
                ));
                rows.push(("witness_index".into(), report.witness_index.to_string()));
            }
            for (name, estimate) in [
                ("ergodic_quadrature", ergodic_quadrature),
                ("ergodic_mc", ergodic_mc),
            ] {
                if let Some(e) = estimate {
                    rows.push((format!("{name}_value"), e.value.to_string()));
                    rows.push((
                        format!("{name}_stderr"),
                        e.stderr.map(|s| s.to_string()).unwrap_or_default(),
                    ));
                    rows.push((format!("{name}_samples"), e.samples.to_string()));
                }
            }
            for (quantity, value) in rows {
                writer
                    .write_record([quantity, value, config_cell.clone()])
                    .map_err(fail)?;
            }
        }
        Payload::Simulate(outcome) => {
            writer.write_record(SIMULATE_COLUMNS).map_err(fail)?;
            let echo = &outcome.config;
            for (stage, errors, error_rate) in simulate_rows(outcome) {
                writer
                    .write_record([
                        outcome.trials.to_string(),
                        errors.map(|e| e.to_string()).unwrap_or_default(),
                        error_rate.to_string(),
                        stage.to_string(),
                        echo.n.to_string(),
                        echo.blocks.to_string(),
                        echo.rate1.to_string(),
                        echo.rate2.to_string(),
                        echo.seed.to_string(),
                        echo.theta_mode.clone(),
                        config_cell.clone(),
                    ])
                    .map_err(fail)?;
            }
        }
        Payload::Schedule(schedule) => {
            writer
                .write_record(["encoder", "block", "slot", "kind", "label", "config"])
                .map_err(fail)?;
            for (e, row) in schedule.rows.iter().enumerate() {
                for (t, slots) in row.iter().enumerate() {
                    for (s, slot) in slots.iter().enumerate() {
                        let kind = match slot {
                            Slot::Message { .. } => "message",
                            Slot::Filler => "filler",
                        };
                        writer
                            .write_record([
                                (e + 1).to_string(),
                                (t + 1).to_string(),
                                (s + 1).to_string(),
                                kind.to_string(),
                                slot.label(),
                                config_cell.clone(),
                            ])
                            .map_err(fail)?;
                    }
                }
            }
        }
    }
    writer
        .into_inner()
        .map_err(|e| Error::Argument(format!("output: {e}")))
}

fn render_text(payload: &Payload, config: &RunConfig) -> Result<Vec<u8>> {
    let Payload::Schedule(schedule) = payload else {
        return Err(Error::Validation(
            "format: text output is only available for schedule".into(),
        ));
    };
    let config_line =
        serde_json::to_string(config).map_err(|e| Error::Argument(format!("output: {e}")))?;
    Ok(format!("{schedule}\n\n# config {config_line}\n").into_bytes())
}
