//! Entropy-triple regions, gain conditions, and feasibility queries.
//!
//! For each topology, reliable delivery of a correlated source pair is
//! characterized by upper bounds on (H(U|V), H(V|U), H(U,V)) of the form
//! log2(1 + received_power / N), valid when the topology's gain conditions
//! hold. Closed-boundary comparisons answer the converse side (necessity),
//! open-boundary ones the achievability side (strict inequalities).

use crate::channel::{ChannelSpec, Topology};
use crate::error::{Error, Result};
use crate::source::EntropyTriple;
use serde::{Deserialize, Serialize};

/// Relative tolerance for gain-condition and feasibility comparisons.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor for the comparison tolerance near zero.
pub const ABS_TOL: f64 = 1e-12;

/// Effective comparison tolerance for a pair of operands.
fn tolerance(lhs: f64, rhs: f64) -> f64 {
    (REL_TOL * lhs.abs().max(rhs.abs())).max(ABS_TOL)
}

/// Upper bounds on the entropy triple for one topology, in bits.
///
/// A bound the governing result does not impose is `None` (unconstrained),
/// never zero; `bound_h_uv` is always present and already takes any min over
/// alternative sum expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBounds {
    /// Upper bound on H(U|V), if constrained.
    pub bound_h_u_given_v: Option<f64>,
    /// Upper bound on H(V|U), if constrained.
    pub bound_h_v_given_u: Option<f64>,
    /// Upper bound on H(U,V).
    pub bound_h_uv: f64,
    /// Topology the bounds apply to.
    pub topology: Topology,
    /// Identifier of the capacity result the bounds come from.
    pub provenance: String,
}

/// One gain-condition inequality evaluated on a channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    /// Descriptive, stable name of the inequality.
    pub name: String,
    /// Left-hand side as evaluated.
    pub lhs: f64,
    /// Right-hand side as evaluated.
    pub rhs: f64,
    /// Whether the inequality holds within tolerance.
    pub satisfied: bool,
    /// Signed slack, oriented so that nonnegative means satisfied.
    pub slack: f64,
}

impl Condition {
    // satisfied ⇔ slack ≥ −tolerance, uniformly for every orientation.
    fn at_least(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::from_slack(name, lhs, rhs, lhs - rhs)
    }

    fn at_most(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::from_slack(name, lhs, rhs, rhs - lhs)
    }

    fn equal(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::from_slack(name, lhs, rhs, -(lhs - rhs).abs())
    }

    fn from_slack(name: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            satisfied: slack >= -tolerance(lhs, rhs),
            slack,
        }
    }
}

/// Outcome of evaluating every gain condition a topology's result assumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
}

impl ConditionReport {
    /// True when every condition is satisfied (vacuously true when none).
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }

    /// Looks a condition up by name.
    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Which reading of the relay topology's second gain condition to evaluate.
///
/// The literal form compares against the first user's power on both sides;
/// the symmetric form uses the second user's power throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarcConditionVariant {
    #[default]
    Literal,
    Symmetric,
}

/// Boundary semantics for feasibility queries: closed compares with ≤
/// (necessity side), open with < (achievability side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Closed,
    Open,
}

/// Slack of one entropy component against its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSlack {
    /// Which bound: "h_u_given_v", "h_v_given_u", or "h_uv".
    pub bound: String,
    /// The triple's component value.
    pub value: f64,
    /// The region's bound.
    pub limit: f64,
    /// limit − value; nonnegative means inside (closed boundary).
    pub slack: f64,
    pub satisfied: bool,
}

/// Feasibility verdict for an entropy triple against a region.
///
/// `violations` carries one entry per present bound (absent bounds are
/// ignored); `feasible` is true when every entry is satisfied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub violations: Vec<BoundSlack>,
}

impl Feasibility {
    /// The entries that actually fail their bound.
    pub fn violated(&self) -> impl Iterator<Item = &BoundSlack> {
        self.violations.iter().filter(|b| !b.satisfied)
    }
}

/// Computes the reliable-communication region for the channel's topology.
pub fn compute_region(spec: &ChannelSpec) -> Result<RegionBounds> {
    spec.ensure_valid()?;
    let noise = spec.noise;
    // log2(1 + x/N); relay terms are added last inside x so a silent relay
    // (Pr = 0) reproduces the relay-free region bit for bit.
    let b = |received: f64| (1.0 + received / noise).log2();
    let g = |name: &str| spec.gain(name);
    let p = |name: &str| spec.power(name);
    let (h_u_given_v, h_v_given_u, h_uv, provenance) = match spec.topology {
        Topology::Mac => {
            let (g1, g2) = (g("g1"), g("g2"));
            let (p1, p2) = (p("p1"), p("p2"));
            (
                Some(b(g1 * g1 * p1)),
                Some(b(g2 * g2 * p2)),
                b(g1 * g1 * p1 + g2 * g2 * p2),
                "mac",
            )
        }
        Topology::UnccMac => {
            let (g1, g2) = (g("g1"), g("g2"));
            let (p1, p2) = (p("p1"), p("p2"));
            (
                Some(b(g1 * g1 * p1)),
                None,
                b(g1 * g1 * p1 + g2 * g2 * p2),
                "uncc_mac",
            )
        }
        Topology::UccMac => {
            let (g1, g2) = (g("g1"), g("g2"));
            let (p1, p2) = (p("p1"), p("p2"));
            (
                Some(b(g1 * g1 * p1)),
                None,
                b(g1 * g1 * p1 + g2 * g2 * p2),
                "ucc_mac",
            )
        }
        Topology::Marc => {
            let (g1, g2, gr) = (g("g1"), g("g2"), g("gr"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            (
                Some(b(g1 * g1 * p1 + gr * gr * pr)),
                Some(b(g2 * g2 * p2 + gr * gr * pr)),
                b(g1 * g1 * p1 + g2 * g2 * p2 + gr * gr * pr),
                "marc_df",
            )
        }
        Topology::UnccMarc | Topology::UccMarc => {
            let (g1, g2, gr) = (g("g1"), g("g2"), g("gr"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            let provenance = if spec.topology == Topology::UnccMarc {
                "uncc_marc_df"
            } else {
                "ucc_marc_df"
            };
            (
                Some(b(g1 * g1 * p1 + gr * gr * pr)),
                None,
                b(g1 * g1 * p1 + g2 * g2 * p2 + gr * gr * pr),
                provenance,
            )
        }
        Topology::Ic => {
            let (g11, g12, g21, g22) = (g("g11"), g("g12"), g("g21"), g("g22"));
            let (p1, p2) = (p("p1"), p("p2"));
            let sum_rx1 = b(g11 * g11 * p1 + g21 * g21 * p2);
            let sum_rx2 = b(g12 * g12 * p1 + g22 * g22 * p2);
            (
                Some(b(g11 * g11 * p1)),
                Some(b(g22 * g22 * p2)),
                sum_rx1.min(sum_rx2),
                "ic_strong_interference",
            )
        }
        Topology::Irc => {
            let (g12, g22, gr1, gr2) = (g("g12"), g("g22"), g("gr1"), g("gr2"));
            let g11 = g("g11");
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            (
                Some(b(g11 * g11 * p1 + gr1 * gr1 * pr)),
                Some(b(g22 * g22 * p2 + gr2 * gr2 * pr)),
                b(g12 * g12 * p1 + g22 * g22 * p2 + gr2 * gr2 * pr),
                "irc_df",
            )
        }
    };
    Ok(RegionBounds {
        bound_h_u_given_v: h_u_given_v,
        bound_h_v_given_u: h_v_given_u,
        bound_h_uv: h_uv,
        topology: spec.topology,
        provenance: provenance.to_string(),
    })
}

/// Evaluates the topology's gain conditions with the literal variant.
///
/// The entropy triple is required for the causal-cooperation topologies,
/// whose link-rate condition depends on 2^(−H(U|V)); it is ignored elsewhere.
pub fn check_gain_conditions(
    spec: &ChannelSpec,
    triple: Option<&EntropyTriple>,
) -> Result<ConditionReport> {
    check_gain_conditions_with(spec, triple, MarcConditionVariant::default())
}

/// Evaluates the topology's gain conditions with an explicit variant choice.
pub fn check_gain_conditions_with(
    spec: &ChannelSpec,
    triple: Option<&EntropyTriple>,
    variant: MarcConditionVariant,
) -> Result<ConditionReport> {
    spec.ensure_valid()?;
    let g = |name: &str| spec.gain(name);
    let p = |name: &str| spec.power(name);
    let noise = spec.noise;
    let conditions = match spec.topology {
        Topology::Mac | Topology::UnccMac | Topology::Ic => match spec.topology {
            Topology::Ic => {
                vec![
                    Condition::at_least("direct_dominates_cross_tx1", g("g11"), g("g12")),
                    Condition::at_least("direct_dominates_cross_tx2", g("g22"), g("g21")),
                ]
            }
            _ => Vec::new(),
        },
        Topology::Marc => {
            let (g1, g2, gr, g1r, g2r) = (g("g1"), g("g2"), g("gr"), g("g1r"), g("g2r"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            let second = match variant {
                MarcConditionVariant::Literal => Condition::at_least(
                    "relay_gain_user2",
                    g2r * g2r * p1,
                    g2 * g2 * p1 + gr * gr * pr,
                ),
                MarcConditionVariant::Symmetric => Condition::at_least(
                    "relay_gain_user2",
                    g2r * g2r * p2,
                    g2 * g2 * p2 + gr * gr * pr,
                ),
            };
            vec![
                Condition::at_least(
                    "relay_gain_user1",
                    g1r * g1r * p1,
                    g1 * g1 * p1 + gr * gr * pr,
                ),
                second,
            ]
        }
        Topology::UnccMarc => {
            let (g1, g2, gr, g1r, g2r) = (g("g1"), g("g2"), g("gr"), g("g1r"), g("g2r"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            vec![
                Condition::at_least(
                    "relay_gain_user1",
                    g1r * g1r * p1,
                    g1 * g1 * p1 + gr * gr * pr,
                ),
                Condition::at_least(
                    "relay_gain_sum",
                    g1r * g1r * p1 + g2r * g2r * p2,
                    g1 * g1 * p1 + g2 * g2 * p2 + gr * gr * pr,
                ),
            ]
        }
        Topology::UccMarc => {
            let t = required_triple(triple, spec.topology)?;
            let (g1, g2, gr, g1r, g2r, g21) =
                (g("g1"), g("g2"), g("gr"), g("g1r"), g("g2r"), g("g21"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            vec![
                Condition::at_least(
                    "relay_gain_user1",
                    g1r * g1r * p1,
                    g1 * g1 * p1 + gr * gr * pr,
                ),
                Condition::at_least(
                    "relay_gain_user2",
                    g2r * g2r * p1,
                    g1 * g1 * p1 + g2 * g2 * p1 + gr * gr * pr,
                ),
                Condition::at_least(
                    "cooperative_link_rate",
                    1.0 + g21 * g21 * p2 / noise,
                    (-t.h_u_given_v).exp2()
                        * (1.0 + (g1 * g1 * p1 + g2 * g2 * p2 + gr * gr * pr) / noise),
                ),
            ]
        }
        Topology::UccMac => {
            let t = required_triple(triple, spec.topology)?;
            let (g1, g2, g21) = (g("g1"), g("g2"), g("g21"));
            let (p1, p2) = (p("p1"), p("p2"));
            vec![Condition::at_least(
                "cooperative_link_rate",
                1.0 + g21 * g21 * p2 / noise,
                (-t.h_u_given_v).exp2() * (1.0 + (g1 * g1 * p1 + g2 * g2 * p2) / noise),
            )]
        }
        Topology::Irc => {
            let (g11, g12, g21, g22) = (g("g11"), g("g12"), g("g21"), g("g22"));
            let (gr1, gr2, g1r, g2r) = (g("gr1"), g("gr2"), g("g1r"), g("g2r"));
            let (p1, p2, pr) = (p("p1"), p("p2"), p("pr"));
            let alpha = g11 / g12;
            let off = 1.0 - alpha * alpha;
            vec![
                Condition::equal("gain_ratio_equality", g11 * gr2, g12 * gr1),
                Condition::at_most("gain_ratio_below_one", alpha, 1.0),
                Condition::at_most(
                    "relay_link_user1",
                    g11 * g11 * p1 + gr1 * gr1 * pr,
                    g1r * g1r * p1,
                ),
                Condition::at_most(
                    "relay_link_user2",
                    g22 * g22 * p2 + gr2 * gr2 * pr,
                    g2r * g2r * p2,
                ),
                Condition::at_most(
                    "relay_power_balance",
                    off * (g12 * g12) * p1,
                    (alpha * alpha) * (gr2 * gr2) * pr,
                ),
                Condition::at_most(
                    "strong_interference_tx2",
                    off * (g12 * g12) * p1 / p2 + off * (gr2 * gr2) * pr / p2 + g22 * g22,
                    g21 * g21,
                ),
            ]
        }
    };
    Ok(ConditionReport { conditions })
}

fn required_triple(triple: Option<&EntropyTriple>, topology: Topology) -> Result<&EntropyTriple> {
    triple.ok_or_else(|| {
        Error::Argument(format!(
            "{topology} gain conditions depend on the source's H(U|V); pass an entropy triple"
        ))
    })
}

/// Tests an entropy triple against a region's present bounds.
pub fn is_feasible(
    triple: &EntropyTriple,
    region: &RegionBounds,
    boundary: Boundary,
) -> Feasibility {
    let mut entries = Vec::new();
    let mut push = |bound: &str, value: f64, limit: Option<f64>| {
        let Some(limit) = limit else { return };
        let slack = limit - value;
        let tol = tolerance(value, limit);
        let satisfied = match boundary {
            Boundary::Closed => slack >= -tol,
            Boundary::Open => slack > tol,
        };
        entries.push(BoundSlack {
            bound: bound.to_string(),
            value,
            limit,
            slack,
            satisfied,
        });
    };
    push("h_u_given_v", triple.h_u_given_v, region.bound_h_u_given_v);
    push("h_v_given_u", triple.h_v_given_u, region.bound_h_v_given_u);
    push("h_uv", triple.h_uv, Some(region.bound_h_uv));
    Feasibility {
        feasible: entries.iter().all(|e| e.satisfied),
        violations: entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ALL_TOPOLOGIES;
    use proptest::prelude::*;

    fn spec(topology: Topology, gains: &[f64], powers: &[f64], noise: f64) -> ChannelSpec {
        ChannelSpec::new(topology, gains, powers, noise).unwrap()
    }

    fn triple(h_u_given_v: f64, h_v_given_u: f64, h_uv: f64) -> EntropyTriple {
        EntropyTriple {
            h_u_given_v,
            h_v_given_u,
            h_uv,
            h_u: h_uv - h_v_given_u,
            h_v: h_uv - h_u_given_v,
        }
    }

    #[test]
    fn unit_mac_region() {
        let region = compute_region(&spec(Topology::Mac, &[1.0, 1.0], &[1.0, 1.0], 1.0)).unwrap();
        assert_eq!(region.bound_h_u_given_v, Some(1.0));
        assert_eq!(region.bound_h_v_given_u, Some(1.0));
        assert!((region.bound_h_uv - 3f64.log2()).abs() < 1e-15);
        assert!((region.bound_h_uv - 1.584_962_500_721_156).abs() < 1e-12);
        assert_eq!(region.topology, Topology::Mac);
        assert_eq!(region.provenance, "mac");
    }

    #[test]
    fn silent_relay_matches_relay_free_region() {
        let marc = compute_region(&spec(
            Topology::Marc,
            &[1.3, 0.7, 2.0, 1.1, 0.9],
            &[1.5, 2.5, 0.0],
            0.8,
        ))
        .unwrap();
        let mac = compute_region(&spec(Topology::Mac, &[1.3, 0.7], &[1.5, 2.5], 0.8)).unwrap();
        assert_eq!(marc.bound_h_u_given_v, mac.bound_h_u_given_v);
        assert_eq!(marc.bound_h_v_given_u, mac.bound_h_v_given_u);
        assert_eq!(marc.bound_h_uv, mac.bound_h_uv);
    }

    #[test]
    fn relay_interference_example_region() {
        // g11 = gr1 = g22 = 1, g12 = gr2 = 2, unit powers and noise.
        let region = compute_region(&spec(
            Topology::Irc,
            &[1.0, 2.0, 1.0, 1.0, 1.0, 2.0, 3.0, 3.0],
            &[1.0, 1.0, 1.0],
            1.0,
        ))
        .unwrap();
        assert!((region.bound_h_u_given_v.unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!((region.bound_h_v_given_u.unwrap() - 6f64.log2()).abs() < 1e-12);
        assert!((region.bound_h_uv - 10f64.log2()).abs() < 1e-12);
        assert_eq!(region.provenance, "irc_df");
    }

    #[test]
    fn cooperative_region_omits_second_conditional_bound() {
        for topology in [
            Topology::UnccMac,
            Topology::UccMac,
            Topology::UnccMarc,
            Topology::UccMarc,
        ] {
            let gains = vec![1.0; topology.path_count()];
            let powers = vec![1.0; topology.power_names().len()];
            let region = compute_region(&spec(topology, &gains, &powers, 1.0)).unwrap();
            assert!(region.bound_h_u_given_v.is_some());
            assert!(region.bound_h_v_given_u.is_none());
        }
    }

    #[test]
    fn relay_boundary_condition_has_zero_slack() {
        // g1r² P1 = 2 exactly balances g1² P1 + gr² Pr = 1 + 1.
        let report = check_gain_conditions(
            &spec(
                Topology::UnccMarc,
                &[1.0, 1.0, 1.0, 2f64.sqrt(), 1.0],
                &[1.0, 1.0, 1.0],
                1.0,
            ),
            None,
        )
        .unwrap();
        let c = report.get("relay_gain_user1").unwrap();
        assert!(c.satisfied);
        assert!(c.slack.abs() < 1e-12, "slack {}", c.slack);
    }

    #[test]
    fn cooperative_link_condition_balances_at_one_bit() {
        // All-unit channel: 1 + 1 vs 2^{-1} (1 + 3), slack exactly zero.
        let report = check_gain_conditions(
            &spec(Topology::UccMarc, &[1.0; 6], &[1.0; 3], 1.0),
            Some(&triple(1.0, 1.0, 2.0)),
        )
        .unwrap();
        let c = report.get("cooperative_link_rate").unwrap();
        assert!(c.satisfied);
        assert_eq!(c.slack, 0.0);
        assert_eq!(c.lhs, 2.0);
        assert_eq!(c.rhs, 2.0);
    }

    #[test]
    fn mismatched_gain_ratios_fail_equality() {
        // 1/2 vs 1/3 cross products: 1·3 ≠ 2·1.
        let report = check_gain_conditions(
            &spec(
                Topology::Irc,
                &[1.0, 2.0, 1.0, 1.0, 1.0, 3.0, 2.0, 2.0],
                &[1.0, 1.0, 1.0],
                1.0,
            ),
            None,
        )
        .unwrap();
        let c = report.get("gain_ratio_equality").unwrap();
        assert!(!c.satisfied);
        assert_eq!(c.lhs, 3.0);
        assert_eq!(c.rhs, 2.0);
        assert!(c.slack < 0.0);
    }

    #[test]
    fn second_relay_condition_variants_differ_when_powers_do() {
        let channel = spec(
            Topology::Marc,
            &[1.0, 1.0, 0.5, 2.0, 1.2],
            &[10.0, 0.1, 1.0],
            1.0,
        );
        let literal =
            check_gain_conditions_with(&channel, None, MarcConditionVariant::Literal).unwrap();
        let symmetric =
            check_gain_conditions_with(&channel, None, MarcConditionVariant::Symmetric).unwrap();
        assert!(literal.get("relay_gain_user2").unwrap().satisfied);
        assert!(!symmetric.get("relay_gain_user2").unwrap().satisfied);
    }

    #[test]
    fn causal_cooperation_requires_entropy_triple() {
        let channel = spec(Topology::UccMac, &[1.0, 1.0, 1.0], &[1.0, 1.0], 1.0);
        let err = check_gain_conditions(&channel, None).unwrap_err();
        assert!(matches!(err, Error::Argument(_)), "{err}");
        assert!(check_gain_conditions(&channel, Some(&triple(0.5, 0.5, 1.0))).is_ok());
    }

    #[test]
    fn feasibility_boundary_semantics() {
        let region = compute_region(&spec(Topology::Mac, &[1.0, 1.0], &[1.0, 1.0], 1.0)).unwrap();
        assert!(is_feasible(&triple(0.9, 0.9, 1.5), &region, Boundary::Closed).feasible);
        let edge = triple(1.0, 1.0, region.bound_h_uv);
        assert!(is_feasible(&edge, &region, Boundary::Closed).feasible);
        assert!(!is_feasible(&edge, &region, Boundary::Open).feasible);
        let out = is_feasible(&triple(0.9, 0.9, 1.7), &region, Boundary::Closed);
        assert!(!out.feasible);
        let v = out.violated().next().unwrap();
        assert_eq!(v.bound, "h_uv");
        assert!((v.slack - (3f64.log2() - 1.7)).abs() < 1e-12);
        assert!((v.slack + 0.115).abs() < 1e-3);
    }

    #[test]
    fn absent_bounds_are_ignored() {
        let region =
            compute_region(&spec(Topology::UnccMac, &[1.0, 1.0], &[1.0, 1.0], 1.0)).unwrap();
        let verdict = is_feasible(&triple(0.9, 99.0, 1.5), &region, Boundary::Closed);
        assert!(verdict.feasible);
        let names: Vec<&str> = verdict
            .violations
            .iter()
            .map(|b| b.bound.as_str())
            .collect();
        assert_eq!(names, ["h_u_given_v", "h_uv"]);
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let mut bad = spec(Topology::Mac, &[1.0, 1.0], &[1.0, 1.0], 1.0);
        bad.noise = 0.0;
        assert!(matches!(compute_region(&bad), Err(Error::Validation(_))));
        assert!(matches!(
            check_gain_conditions(&bad, None),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn condition_names_are_stable() {
        let cases: [(Topology, &[&str]); 8] = [
            (Topology::Mac, &[]),
            (Topology::UnccMac, &[]),
            (Topology::UccMac, &["cooperative_link_rate"]),
            (Topology::Marc, &["relay_gain_user1", "relay_gain_user2"]),
            (Topology::UnccMarc, &["relay_gain_user1", "relay_gain_sum"]),
            (
                Topology::UccMarc,
                &[
                    "relay_gain_user1",
                    "relay_gain_user2",
                    "cooperative_link_rate",
                ],
            ),
            (
                Topology::Ic,
                &["direct_dominates_cross_tx1", "direct_dominates_cross_tx2"],
            ),
            (
                Topology::Irc,
                &[
                    "gain_ratio_equality",
                    "gain_ratio_below_one",
                    "relay_link_user1",
                    "relay_link_user2",
                    "relay_power_balance",
                    "strong_interference_tx2",
                ],
            ),
        ];
        let t = triple(0.5, 0.5, 1.0);
        for (topology, expected) in cases {
            let gains = vec![1.0; topology.path_count()];
            let powers = vec![1.0; topology.power_names().len()];
            let report =
                check_gain_conditions(&spec(topology, &gains, &powers, 1.0), Some(&t)).unwrap();
            let names: Vec<&str> = report.conditions.iter().map(|c| c.name.as_str()).collect();
            assert_eq!(names, expected, "{topology}");
        }
    }

    fn arb_spec() -> impl Strategy<Value = ChannelSpec> {
        (
            0..ALL_TOPOLOGIES.len(),
            proptest::collection::vec(0.1f64..4.0, 8),
            proptest::collection::vec(0.1f64..4.0, 3),
            0.1f64..4.0,
        )
            .prop_map(|(ti, gains, powers, noise)| {
                let topology = ALL_TOPOLOGIES[ti];
                ChannelSpec::new(
                    topology,
                    &gains[..topology.path_count()],
                    &powers[..topology.power_names().len()],
                    noise,
                )
                .unwrap()
            })
    }

    fn present_bounds(region: &RegionBounds) -> Vec<f64> {
        let mut v = Vec::new();
        v.extend(region.bound_h_u_given_v);
        v.extend(region.bound_h_v_given_u);
        v.push(region.bound_h_uv);
        v
    }

    proptest! {
        #[test]
        fn bounds_monotone_in_gains_and_powers(
            channel in arb_spec(),
            which in 0usize..11,
            factor in 1.0f64..4.0,
        ) {
            let before = compute_region(&channel).unwrap();
            let mut bumped = channel.clone();
            let gain_count = channel.topology.gain_names().len();
            let power_count = channel.topology.power_names().len();
            let which = which % (gain_count + power_count);
            if which < gain_count {
                let name = channel.topology.gain_names()[which];
                *bumped.gains.get_mut(name).unwrap() *= factor;
            } else {
                let name = channel.topology.power_names()[which - gain_count];
                *bumped.powers.get_mut(name).unwrap() *= factor;
            }
            let after = compute_region(&bumped).unwrap();
            for (b, a) in present_bounds(&before).iter().zip(present_bounds(&after).iter()) {
                prop_assert!(a + 1e-12 >= *b, "bound decreased: {b} -> {a}");
            }
        }

        #[test]
        fn zero_relay_power_reduction_is_exact(
            kind in 0usize..3,
            gains in proptest::collection::vec(0.1f64..4.0, 6),
            p1 in 0.1f64..4.0,
            p2 in 0.1f64..4.0,
            noise in 0.1f64..4.0,
        ) {
            let (relayed, plain, plain_gains): (Topology, Topology, Vec<f64>) = match kind {
                0 => (Topology::Marc, Topology::Mac, vec![gains[0], gains[1]]),
                1 => (Topology::UnccMarc, Topology::UnccMac, vec![gains[0], gains[1]]),
                _ => (Topology::UccMarc, Topology::UccMac, vec![gains[0], gains[1], gains[5]]),
            };
            let with_relay = compute_region(&ChannelSpec::new(
                relayed,
                &gains[..relayed.path_count()],
                &[p1, p2, 0.0],
                noise,
            ).unwrap()).unwrap();
            let without = compute_region(&ChannelSpec::new(
                plain,
                &plain_gains,
                &[p1, p2],
                noise,
            ).unwrap()).unwrap();
            prop_assert_eq!(with_relay.bound_h_u_given_v, without.bound_h_u_given_v);
            prop_assert_eq!(with_relay.bound_h_v_given_u, without.bound_h_v_given_u);
            prop_assert_eq!(with_relay.bound_h_uv, without.bound_h_uv);
        }

        #[test]
        fn interference_sum_bound_is_min_of_alternatives(
            a in 0.1f64..4.0, b in 0.1f64..4.0, c in 0.1f64..4.0, d in 0.1f64..4.0,
            p1 in 0.1f64..4.0, p2 in 0.1f64..4.0, noise in 0.1f64..4.0,
        ) {
            let (g11, g12) = (a.max(b), a.min(b));
            let (g22, g21) = (c.max(d), c.min(d));
            let channel = ChannelSpec::new(
                Topology::Ic, &[g11, g12, g21, g22], &[p1, p2], noise,
            ).unwrap();
            prop_assert!(check_gain_conditions(&channel, None).unwrap().all_satisfied());
            let region = compute_region(&channel).unwrap();
            let s1 = (1.0 + (g11 * g11 * p1 + g21 * g21 * p2) / noise).log2();
            let s2 = (1.0 + (g12 * g12 * p1 + g22 * g22 * p2) / noise).log2();
            prop_assert_eq!(region.bound_h_uv, s1.min(s2));
            prop_assert!(region.bound_h_uv <= s1 && region.bound_h_uv <= s2);
        }

        #[test]
        fn feasibility_is_monotone(
            channel in arb_spec(),
            values in proptest::collection::vec(0.0f64..3.0, 3),
            shrink in proptest::collection::vec(0.0f64..1.0, 3),
        ) {
            let region = compute_region(&channel).unwrap();
            let larger = triple(values[0], values[1], values[2]);
            let smaller = triple(
                values[0] * shrink[0],
                values[1] * shrink[1],
                values[2] * shrink[2],
            );
            for boundary in [Boundary::Closed, Boundary::Open] {
                if is_feasible(&larger, &region, boundary).feasible {
                    prop_assert!(is_feasible(&smaller, &region, boundary).feasible);
                }
            }
        }

        #[test]
        fn condition_verdicts_are_scale_invariant(
            channel in arb_spec(),
            scale in 1e-3f64..1e3,
        ) {
            let t = triple(0.7, 0.7, 1.4);
            let base = check_gain_conditions(&channel, Some(&t)).unwrap();
            let mut scaled = channel.clone();
            for p in scaled.powers.values_mut() {
                *p *= scale;
            }
            scaled.noise *= scale;
            let rescaled = check_gain_conditions(&scaled, Some(&t)).unwrap();
            prop_assert_eq!(base.conditions.len(), rescaled.conditions.len());
            for (x, y) in base.conditions.iter().zip(rescaled.conditions.iter()) {
                prop_assert_eq!(&x.name, &y.name);
                // Skip verdicts that sit within widened rounding distance of
                // the boundary; scaling cannot be bitwise there.
                let margin = 1e-6 * (1.0 + x.lhs.abs().max(x.rhs.abs()));
                prop_assume!(x.slack.abs() > margin);
                prop_assert_eq!(x.satisfied, y.satisfied, "{}", x.name);
            }
        }
    }
}
