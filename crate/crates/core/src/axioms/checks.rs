//! Checkers for the efficiency, representation, threshold, clone,
//! consistency and monotonicity axioms.

use std::collections::BTreeSet;

use super::{AxiomId, Violation, Witness};
use crate::error::{Error, Result};
use crate::party_set::{PartyId, PartySet};
use crate::profile::{Ballot, Profile, Threshold};
use crate::rules::SelectionRule;
use crate::weight::Weight;

fn weight_where<'a>(ballots: impl Iterator<Item = &'a Ballot>, mut pred: impl FnMut(&Ballot) -> bool) -> Weight {
    let mut total = Weight::zero();
    for b in ballots {
        if pred(b) {
            total += &b.weight;
        }
    }
    total
}

fn outcome_violation(
    axiom: AxiomId,
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    outcome: PartySet,
    culprit: PartySet,
    narrative: String,
) -> Violation {
    Violation {
        axiom,
        rule: rule.name(),
        witness: Witness::Outcome {
            profile: profile.clone(),
            tau: tau.clone(),
            outcome,
            culprit,
        },
        narrative,
    }
}

/// No feasible strict superset of the outcome exists.
pub fn check_set_maximality(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    // Feasibility is closed under subsets, so a feasible strict superset
    // exists exactly when some single-party extension is feasible.
    for c in profile.roster().ids().filter(|c| !s.contains(*c)) {
        let grown = s.with(c);
        if profile.is_feasible(grown, tau)? {
            let r = profile.roster();
            return Ok(Some(outcome_violation(
                AxiomId::SetMaximality,
                rule,
                profile,
                tau,
                s,
                PartySet::singleton(c),
                format!("outcome {} but {} is feasible", r.format_set(s), r.format_set(grown)),
            )));
        }
    }
    Ok(None)
}

/// The outcome is empty only if no non-empty set is feasible.
pub fn check_weak_efficiency(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    if !s.is_empty() {
        return Ok(None);
    }
    for c in profile.roster().ids() {
        if profile.is_feasible(PartySet::singleton(c), tau)? {
            return Ok(Some(outcome_violation(
                AxiomId::WeakEfficiency,
                rule,
                profile,
                tau,
                s,
                PartySet::singleton(c),
                format!("outcome is empty but {{{}}} is feasible", profile.roster().name(c)),
            )));
        }
    }
    Ok(None)
}

/// Parties ranked first by weight at least `tau`.
pub fn direct_winners(profile: &Profile, tau: &Threshold) -> PartySet {
    profile
        .plurality_scores()
        .iter()
        .enumerate()
        .filter(|(_, s)| *s >= tau.value())
        .map(|(i, _)| PartyId(i))
        .collect()
}

/// Every direct winner is selected.
pub fn check_direct_winners(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    let missing = direct_winners(profile, tau).difference(s);
    if missing.is_empty() {
        return Ok(None);
    }
    let r = profile.roster();
    Ok(Some(outcome_violation(
        AxiomId::DirectWinners,
        rule,
        profile,
        tau,
        s,
        missing,
        format!("direct winners {} missing from outcome {}", r.format_set(missing), r.format_set(s)),
    )))
}

/// Coalitions `T` with positive support: every set of parties that some
/// ballot ranks, in some order, strictly above all other parties. With
/// `tau = 0` every singleton is added, since then any set is a coalition.
pub fn solid_coalition_candidates(profile: &Profile, tau: &Threshold) -> BTreeSet<PartySet> {
    let mut out = BTreeSet::new();
    for b in profile.ballots() {
        let mut prefix = PartySet::empty();
        for &p in &b.ranking {
            prefix.insert(p);
            out.insert(prefix);
        }
    }
    if tau.value().is_zero() {
        out.extend(profile.roster().ids().map(PartySet::singleton));
    }
    out
}

/// Weight of voters ranking all of `coalition` above every other party: the
/// ballot's top-`|T|` entries are exactly `T`.
pub fn solid_support(profile: &Profile, coalition: PartySet) -> Weight {
    let k = coalition.len();
    weight_where(profile.ballots().iter(), |b| {
        b.ranking.len() >= k && b.ranking[..k].iter().copied().collect::<PartySet>() == coalition
    })
}

/// Every coalition with solid support at least `tau` has a selected member.
pub fn check_solid_coalitions(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    for t in solid_coalition_candidates(profile, tau) {
        if !t.intersection(s).is_empty() {
            continue;
        }
        let support = solid_support(profile, t);
        if &support >= tau.value() {
            let r = profile.roster();
            return Ok(Some(outcome_violation(
                AxiomId::SolidCoalitions,
                rule,
                profile,
                tau,
                s,
                t,
                format!(
                    "coalition {} has solid support {} but outcome is {}",
                    r.format_set(t),
                    support,
                    r.format_set(s)
                ),
            )));
        }
    }
    Ok(None)
}

/// No unselected party is preferred to the whole outcome by weight `tau`.
pub fn check_local_stability(profile: &Profile, tau: &Threshold, outcome: PartySet) -> Result<Option<Violation>> {
    profile.roster().check_set(outcome)?;
    for c in profile.roster().ids().filter(|c| !outcome.contains(*c)) {
        let w = weight_where(profile.ballots().iter(), |b| b.prefers_to_set(c, outcome));
        if &w >= tau.value() {
            let r = profile.roster();
            return Ok(Some(Violation {
                axiom: AxiomId::LocalStability,
                rule: "outcome".into(),
                witness: Witness::Outcome {
                    profile: profile.clone(),
                    tau: tau.clone(),
                    outcome,
                    culprit: PartySet::singleton(c),
                },
                narrative: format!("weight {} prefers {} to every party of {}", w, r.name(c), r.format_set(outcome)),
            }));
        }
    }
    Ok(None)
}

/// No unselected party is ranked by weight `tau` of unrepresented voters.
pub fn check_unrepresented(profile: &Profile, tau: &Threshold, outcome: PartySet) -> Result<Option<Violation>> {
    profile.roster().check_set(outcome)?;
    for c in profile.roster().ids().filter(|c| !outcome.contains(*c)) {
        let w = weight_where(profile.ballots().iter(), |b| {
            b.best_in(outcome).is_none() && b.position(c).is_some()
        });
        if &w >= tau.value() {
            let r = profile.roster();
            return Ok(Some(Violation {
                axiom: AxiomId::Unrepresented,
                rule: "outcome".into(),
                witness: Witness::Outcome {
                    profile: profile.clone(),
                    tau: tau.clone(),
                    outcome,
                    culprit: PartySet::singleton(c),
                },
                narrative: format!(
                    "unrepresented weight {} ranks {} outside outcome {}",
                    w,
                    r.name(c),
                    r.format_set(outcome)
                ),
            }));
        }
    }
    Ok(None)
}

/// [`check_local_stability`] applied to the rule's outcome.
pub fn check_local_stability_of(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    Ok(check_local_stability(profile, tau, s)?.map(|mut v| {
        v.rule = rule.name();
        v
    }))
}

/// [`check_unrepresented`] applied to the rule's outcome.
pub fn check_unrepresented_of(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<Option<Violation>> {
    let s = rule.select(profile, tau)?;
    Ok(check_unrepresented(profile, tau, s)?.map(|mut v| {
        v.rule = rule.name();
        v
    }))
}

fn ordered<'a>(a: &'a Threshold, b: &'a Threshold) -> (&'a Threshold, &'a Threshold) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `f(P, tau) ⊇ f(P, tau')` for `tau <= tau'`. The thresholds may be given
/// in either order.
pub fn check_threshold_monotonicity(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    tau_prime: &Threshold,
) -> Result<Option<Violation>> {
    let (lo, hi) = ordered(tau, tau_prime);
    let s = rule.select(profile, lo)?;
    let s_prime = rule.select(profile, hi)?;
    if s_prime.is_subset(s) {
        return Ok(None);
    }
    let r = profile.roster();
    Ok(Some(Violation {
        axiom: AxiomId::ThresholdMonotonicity,
        rule: rule.name(),
        witness: Witness::ThresholdPair {
            profile: profile.clone(),
            tau: lo.clone(),
            tau_prime: hi.clone(),
            outcome: s,
            outcome_prime: s_prime,
        },
        narrative: format!("{} at tau={} but {} at tau={}", r.format_set(s), lo, r.format_set(s_prime), hi),
    }))
}

/// `f(P, tau') = f(P|S, tau')` where `S = f(P, tau)` and `tau <= tau'`.
pub fn check_idlp(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, tau_prime: &Threshold) -> Result<Option<Violation>> {
    let (lo, hi) = ordered(tau, tau_prime);
    let s = rule.select(profile, lo)?;
    let direct = rule.select(profile, hi)?;
    let restricted = rule.select(&profile.restrict(s)?, hi)?.expand_from(s);
    if direct == restricted {
        return Ok(None);
    }
    let r = profile.roster();
    Ok(Some(Violation {
        axiom: AxiomId::Idlp,
        rule: rule.name(),
        witness: Witness::ThresholdPair {
            profile: profile.clone(),
            tau: lo.clone(),
            tau_prime: hi.clone(),
            outcome: s,
            outcome_prime: direct,
        },
        narrative: format!(
            "outcome {} at tau={}; at tau={} the rule gives {} on the full profile but {} on the profile restricted to it",
            r.format_set(s),
            lo,
            hi,
            r.format_set(direct),
            r.format_set(restricted)
        ),
    }))
}

/// Whether every voter treats `c` and `d` identically relative to every
/// other party.
pub fn are_clones(profile: &Profile, c: PartyId, d: PartyId) -> bool {
    if c == d {
        return false;
    }
    let others: Vec<PartyId> = profile.roster().ids().filter(|x| *x != c && *x != d).collect();
    profile.ballots().iter().all(|b| {
        others.iter().all(|&x| b.prefers(c, x) == b.prefers(d, x) && b.prefers(x, c) == b.prefers(x, d))
    })
}

/// All clone pairs `(c, d)` with `c < d`.
pub fn find_clones(profile: &Profile) -> Vec<(PartyId, PartyId)> {
    let ids: Vec<PartyId> = profile.roster().ids().collect();
    let mut out = Vec::new();
    for (i, &c) in ids.iter().enumerate() {
        for &d in &ids[i + 1..] {
            if are_clones(profile, c, d) {
                out.push((c, d));
            }
        }
    }
    out
}

/// Removing the clone `pair.1` keeps every other party's status, and keeps
/// `pair.0` selected exactly when one of the pair was.
pub fn check_clone_independence(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    pair: (PartyId, PartyId),
) -> Result<Option<Violation>> {
    let (c, d) = pair;
    profile.roster().check_set(PartySet::singleton(c).with(d))?;
    if !are_clones(profile, c, d) {
        return Err(Error::InvalidArgument(format!(
            "{} and {} are not clones",
            profile.roster().name(c),
            profile.roster().name(d)
        )));
    }
    let s = rule.select(profile, tau)?;
    let keep = profile.roster().all().without(d);
    let s_without = rule.select(&profile.restrict(keep)?, tau)?.expand_from(keep);
    let pair_set = PartySet::singleton(c).with(d);
    let first = !s.intersection(pair_set).is_empty() == s_without.contains(c);
    let second = s.difference(pair_set) == s_without.difference(pair_set);
    if first && second {
        return Ok(None);
    }
    let r = profile.roster();
    Ok(Some(Violation {
        axiom: AxiomId::CloneIndependence,
        rule: rule.name(),
        witness: Witness::Clones {
            profile: profile.clone(),
            tau: tau.clone(),
            pair,
            outcome: s,
            outcome_without: s_without,
        },
        narrative: format!(
            "outcome {} with clones {} and {}, {} after removing {}",
            r.format_set(s),
            r.name(c),
            r.name(d),
            r.format_set(s_without),
            r.name(d)
        ),
    }))
}

/// A party selected for `(p1, tau1)` and `(p2, tau2)` is selected for
/// `(p1 + p2, tau1 + tau2)`.
pub fn check_reinforcement(
    rule: &dyn SelectionRule,
    p1: &Profile,
    tau1: &Threshold,
    p2: &Profile,
    tau2: &Threshold,
) -> Result<Option<Violation>> {
    let joint = p1.concat(p2)?;
    let tau = Threshold::new(tau1.value() + tau2.value())?;
    let both = rule.select(p1, tau1)?.intersection(rule.select(p2, tau2)?);
    if both.is_empty() {
        return Ok(None);
    }
    let s = rule.select(&joint, &tau)?;
    let Some(c) = both.difference(s).iter().next() else {
        return Ok(None);
    };
    Ok(Some(Violation {
        axiom: AxiomId::Reinforcement,
        rule: rule.name(),
        witness: Witness::Reinforcement {
            p1: p1.clone(),
            tau1: tau1.clone(),
            p2: p2.clone(),
            tau2: tau2.clone(),
            party: c,
        },
        narrative: format!(
            "{} wins both parts but the joint outcome at tau={} is {}",
            p1.roster().name(c),
            tau,
            p1.roster().format_set(s)
        ),
    }))
}

/// Every ranking obtained from `ranking` by moving `c` to a better position,
/// keeping the order of the other parties. An unranked `c` may be inserted
/// anywhere.
pub fn lifts(ranking: &[PartyId], c: PartyId) -> Vec<Vec<PartyId>> {
    let (rest, limit) = match ranking.iter().position(|&p| p == c) {
        Some(k) => {
            let mut rest = ranking.to_vec();
            rest.remove(k);
            (rest, k)
        }
        None => (ranking.to_vec(), ranking.len() + 1),
    };
    (0..limit)
        .map(|pos| {
            let mut r = rest.clone();
            r.insert(pos, c);
            r
        })
        .collect()
}

/// If `c` is selected, it stays selected whenever one voter of ballot
/// `ballot` moves it up.
pub fn check_monotonicity(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    ballot: usize,
    c: PartyId,
) -> Result<Option<Violation>> {
    profile.roster().check_set(PartySet::singleton(c))?;
    let (base, voter) = profile.isolate_voter(ballot)?;
    if !rule.select(&base, tau)?.contains(c) {
        return Ok(None);
    }
    let truthful = base.ballots()[voter].ranking.clone();
    let mut work = base.clone();
    for lifted in lifts(&truthful, c) {
        work.set_ranking(voter, lifted.clone())?;
        let s = rule.select(&work, tau)?;
        if !s.contains(c) {
            let r = profile.roster();
            let narrative = format!(
                "{} drops out of the outcome ({}) when a voter changes {} to {}",
                r.name(c),
                r.format_set(s),
                r.format_ranking(&truthful),
                r.format_ranking(&lifted)
            );
            return Ok(Some(Violation {
                axiom: AxiomId::Monotonicity,
                rule: rule.name(),
                witness: Witness::Lift {
                    profile: base,
                    tau: tau.clone(),
                    ballot: voter,
                    party: c,
                    lifted,
                },
                narrative,
            }));
        }
    }
    Ok(None)
}
