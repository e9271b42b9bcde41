use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::profile_doc::{write_profile, ProfileDocument};
use crate::apportion::SeatAllocation;
use crate::axioms::search::{SearchBounds, SearchOutcome};
use crate::axioms::table::{CellCheck, CellReport};
use crate::axioms::{AxiomId, Violation, Witness};
use crate::experiments::{ExperimentReport, StrategicCategory, StrategicReport, SweepKind, TauPoint};
use crate::party_set::{PartyId, PartySet};
use crate::profile::{Profile, Roster, Threshold};
use crate::rules::RuleResult;
use crate::weight::Weight;

pub const SCHEMA_VERSION: u32 = 1;

/// An exact value next to its decimal approximation.
pub fn exact(w: &Weight) -> Value {
    json!({ "exact": w.to_exact_string(), "approx": w.to_f64() })
}

fn set(roster: &Roster, s: PartySet) -> Value {
    json!(roster.names_of(s))
}

fn ranking(roster: &Roster, r: &[PartyId]) -> Value {
    json!(r.iter().map(|&p| roster.name(p)).collect::<Vec<_>>())
}

fn envelope(kind: &str, meta: Value, results: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "meta": meta,
        "results": results,
    })
}

/// Pretty JSON with a trailing newline. Object keys come out sorted, so
/// equal reports give identical text.
pub fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn tau_value(t: &TauPoint) -> Value {
    match t {
        TauPoint::Absolute(w) => json!({ "absolute": exact(w) }),
        TauPoint::Relative(f) => json!({ "relative": exact(f) }),
    }
}

pub fn compute_report(
    profile: &Profile,
    tau: &Threshold,
    result: &RuleResult,
    seats: Option<&SeatAllocation<PartyId>>,
    universes: Option<&[PartySet]>,
) -> Value {
    let roster = profile.roster();
    let a = &result.assignment;
    let per_party = |m: &std::collections::BTreeMap<PartyId, Weight>| {
        Value::Object(m.iter().map(|(p, w)| (roster.name(*p).to_string(), exact(w))).collect())
    };
    let trace: Vec<Value> = result
        .trace
        .iter()
        .map(|e| {
            json!({
                "step": e.step,
                "party": roster.name(e.party),
                "action": e.action,
                "score": exact(&e.score),
            })
        })
        .collect();
    let mut results = Map::new();
    results.insert("outcome".into(), set(roster, result.outcome));
    results.insert("scores".into(), per_party(&a.scores));
    results.insert("shares".into(), per_party(&a.shares));
    results.insert(
        "unrepresented".into(),
        exact(&a.unrepresented_weight(profile)),
    );
    results.insert("trace".into(), Value::Array(trace));
    if let Some(aug) = &result.augmentation {
        let steps: Vec<Value> = aug
            .steps
            .iter()
            .map(|s| {
                json!({
                    "added": roster.name(s.added),
                    "unrepresented_support": exact(&s.unrepresented_support),
                    "removed": set(roster, s.removed),
                    "outcome": set(roster, s.outcome),
                })
            })
            .collect();
        results.insert(
            "augmentation".into(),
            json!({ "start": set(roster, aug.start), "steps": steps }),
        );
    }
    if let Some(s) = seats {
        let seats: Map<String, Value> = s.seats.iter().map(|(p, n)| (roster.name(*p).to_string(), json!(n))).collect();
        results.insert("seats".into(), Value::Object(seats));
    }
    if let Some(u) = universes {
        results.insert(
            "parallel_universe".into(),
            json!(u.iter().map(|s| set(roster, *s)).collect::<Vec<_>>()),
        );
    }
    let meta = json!({
        "rule": result.rule.as_str(),
        "tau": exact(tau.value()),
        "parties": roster.names_of(roster.all()),
        "total_weight": exact(profile.total_weight()),
        "house_size": seats.map(|s| s.house_size),
    });
    envelope("compute", meta, Value::Object(results))
}

fn witness(w: &Witness) -> Value {
    let doc = |p: &Profile| {
        write_profile(&ProfileDocument {
            profile: p.clone(),
            tau: None,
        })
    };
    match w {
        Witness::Outcome { profile, tau, outcome, culprit } => {
            let r = profile.roster();
            json!({
                "type": "outcome",
                "profile": doc(profile),
                "tau": exact(tau.value()),
                "outcome": set(r, *outcome),
                "culprit": set(r, *culprit),
            })
        }
        Witness::ThresholdPair { profile, tau, tau_prime, outcome, outcome_prime } => {
            let r = profile.roster();
            json!({
                "type": "threshold_pair",
                "profile": doc(profile),
                "tau": exact(tau.value()),
                "tau_prime": exact(tau_prime.value()),
                "outcome": set(r, *outcome),
                "outcome_prime": set(r, *outcome_prime),
            })
        }
        Witness::Clones { profile, tau, pair, outcome, outcome_without } => {
            let r = profile.roster();
            json!({
                "type": "clones",
                "profile": doc(profile),
                "tau": exact(tau.value()),
                "clones": [r.name(pair.0), r.name(pair.1)],
                "outcome": set(r, *outcome),
                "outcome_without": set(r, *outcome_without),
            })
        }
        Witness::Reinforcement { p1, tau1, p2, tau2, party } => json!({
            "type": "reinforcement",
            "profile": doc(p1),
            "tau": exact(tau1.value()),
            "profile_2": doc(p2),
            "tau_2": exact(tau2.value()),
            "party": p1.roster().name(*party),
        }),
        Witness::Lift { profile, tau, ballot, party, lifted } => {
            let r = profile.roster();
            json!({
                "type": "lift",
                "profile": doc(profile),
                "tau": exact(tau.value()),
                "ballot": ballot,
                "party": r.name(*party),
                "lifted": ranking(r, lifted),
            })
        }
        Witness::Misreport { profile, tau, ballot, misreport, restriction, outcome, outcome_misreport } => {
            let r = profile.roster();
            json!({
                "type": "misreport",
                "profile": doc(profile),
                "tau": exact(tau.value()),
                "ballot": ballot,
                "truthful": ranking(r, &profile.ballots()[*ballot].ranking),
                "misreport": ranking(r, misreport),
                "restriction": restriction,
                "outcome": set(r, *outcome),
                "outcome_misreport": set(r, *outcome_misreport),
            })
        }
    }
}

pub fn violation_value(v: &Violation) -> Value {
    json!({
        "axiom": v.axiom.as_str(),
        "rule": v.rule,
        "narrative": v.narrative,
        "witness": witness(&v.witness),
    })
}

/// Report of a single axiom check; `violation` is `None` when it passed.
pub fn check_report(axiom: AxiomId, rule: &str, tau: &Threshold, violation: Option<&Violation>) -> Value {
    let meta = json!({ "axiom": axiom.as_str(), "rule": rule, "tau": exact(tau.value()) });
    let results = json!({
        "satisfied": violation.is_none(),
        "violation": violation.map(violation_value),
    });
    envelope("axiom_check", meta, results)
}

fn search_value(out: &SearchOutcome) -> Value {
    match out {
        SearchOutcome::Violation { trial, violation } => json!({
            "passed": false,
            "trial": trial,
            "violation": violation_value(violation),
        }),
        SearchOutcome::Pass { trials, checked, skipped } => json!({
            "passed": true,
            "trials": trials,
            "checked": checked,
            "skipped": skipped,
        }),
    }
}

fn bounds_value(b: &SearchBounds) -> Value {
    json!({
        "max_parties": b.max_parties,
        "max_voters": b.max_voters,
        "tau_range": b.tau_range,
    })
}

pub fn search_report(
    axiom: AxiomId,
    rule: &str,
    trials: u64,
    bounds: &SearchBounds,
    seed: u64,
    out: &SearchOutcome,
) -> Value {
    let meta = json!({
        "axiom": axiom.as_str(),
        "rule": rule,
        "trials": trials,
        "seed": seed,
        "bounds": bounds_value(bounds),
    });
    envelope("axiom_search", meta, search_value(out))
}

pub fn table_report(reports: &[CellReport], trials: u64, bounds: &SearchBounds, seed: u64) -> Value {
    let cells: Vec<Value> = reports
        .iter()
        .map(|r| {
            let check = match &r.check {
                CellCheck::Flagged(v) => json!({ "flagged": true, "violation": violation_value(v) }),
                CellCheck::Unflagged => json!({ "flagged": false }),
                CellCheck::Searched(out) => search_value(out),
            };
            json!({
                "axiom": r.cell.axiom.as_str(),
                "rule": r.cell.rule.as_str(),
                "expected": r.cell.satisfied,
                "generic_only": r.cell.generic_only,
                "agrees": r.agrees(),
                "check": check,
            })
        })
        .collect();
    let meta = json!({ "trials": trials, "seed": seed, "bounds": bounds_value(bounds) });
    let results = json!({
        "agreeing": reports.iter().filter(|r| r.agrees()).count(),
        "cells": cells,
    });
    envelope("axiom_table", meta, results)
}

fn kind_meta(kind: &SweepKind) -> Value {
    match kind {
        SweepKind::Threshold => json!({ "sweep": "threshold" }),
        SweepKind::Truncation => json!({ "sweep": "truncation" }),
        SweepKind::Noise { samples, sigma, seed } => {
            json!({ "sweep": "noise", "samples": samples, "sigma": sigma, "seed": seed })
        }
    }
}

pub fn experiment_report(report: &ExperimentReport, roster: &Roster) -> Value {
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| {
            let ranks: Map<String, Value> = p.ranks.iter().map(|(k, w)| (k.to_string(), exact(w))).collect();
            let mut v = json!({
                "tau": tau_value(&p.tau),
                "tau_weight": exact(&p.tau_weight),
                "k": p.k,
                "outcome": set(roster, p.outcome),
                "parties_selected": p.parties_selected(),
                "unrepresented_share": exact(&p.unrepresented),
                "ranks": ranks,
            });
            if let Some(n) = &p.noise {
                v["noise"] = json!({
                    "p20": exact(&n.p20),
                    "median": exact(&n.median),
                    "p80": exact(&n.p80),
                    "samples": n.samples.iter().map(exact).collect::<Vec<_>>(),
                });
            }
            v
        })
        .collect();
    let mut meta = kind_meta(&report.kind);
    meta["rule"] = json!(report.rule.as_str());
    meta["parties"] = json!(roster.names_of(roster.all()));
    envelope("experiment", meta, json!({ "points": points }))
}

/// One row per point with columns `tau`, `unrepresented_share` and
/// `parties_selected` (plus `k` for truncation sweeps and the percentiles
/// for noise sweeps), as decimals.
pub fn flat_table(report: &ExperimentReport) -> String {
    let truncation = report.kind == SweepKind::Truncation;
    let noise = matches!(report.kind, SweepKind::Noise { .. });
    let mut s = String::new();
    if truncation {
        s.push_str("k,");
    }
    s.push_str("tau,unrepresented_share,parties_selected");
    if noise {
        s.push_str(",p20,median,p80");
    }
    s.push('\n');
    for p in &report.points {
        if truncation {
            write!(s, "{},", p.k.unwrap_or(0)).unwrap();
        }
        let tau = match &p.tau {
            TauPoint::Absolute(w) | TauPoint::Relative(w) => w.to_f64(),
        };
        write!(s, "{},{},{}", tau, p.unrepresented.to_f64(), p.parties_selected()).unwrap();
        if let Some(n) = &p.noise {
            write!(s, ",{},{},{}", n.p20.to_f64(), n.median.to_f64(), n.p80.to_f64()).unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn strategic_report(r: &StrategicReport, flagged: &[String]) -> Value {
    let cat = |c: StrategicCategory| serde_json::to_value(c).expect("unit enum").as_str().unwrap_or("").to_string();
    let fractions: Map<String, Value> = r.fractions.iter().map(|(c, w)| (cat(*c), exact(w))).collect();
    let weights: Map<String, Value> = r.weights.iter().map(|(c, w)| (cat(*c), exact(w))).collect();
    let meta = json!({ "source": r.source, "gap_parties": flagged });
    let results = json!({
        "fractions": fractions,
        "weights": weights,
        "strategic_down": exact(&r.down()),
        "strategic_up": exact(&r.up()),
        "excluded_rows": r.excluded,
    });
    envelope("strategic", meta, results)
}
