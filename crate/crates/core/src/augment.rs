//! Local search that repairs an outcome until no party outside it is ranked
//! by `tau` unrepresented voters.
//!
//! Starting from a feasible outcome `S`, each step adds the party `c` ranked
//! by the most unrepresented voters (at least `tau` of them) and drops every
//! selected party that keeps fewer than `tau` of its supporters once `c` is
//! available, that is, supporters who rank it above `c`. DO+, STV+ and GP+
//! start from the outcomes of DO, STV and GP.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::party_set::{PartyId, PartySet};
use crate::profile::{feasible_with, Ballot, Profile, Threshold};
use crate::rules::{self, priorities, RuleId, RuleResult};
use crate::tally::{with_tally, Tally};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentStep {
    pub added: PartyId,
    /// Weight of unrepresented voters ranking `added` when it was added.
    pub unrepresented_support: Weight,
    pub removed: PartySet,
    pub outcome: PartySet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugmentTrace {
    pub start: PartySet,
    pub steps: Vec<AugmentStep>,
}

struct RawStep<T> {
    added: PartyId,
    support: T,
    removed: PartySet,
    outcome: PartySet,
}

fn augment_core<T: Tally>(
    ballots: &[Ballot],
    w: &[T],
    t: &T,
    m: usize,
    priority: &[usize],
    start: PartySet,
    name: impl Fn(PartySet) -> String,
) -> Result<(PartySet, Vec<RawStep<T>>)> {
    if !feasible_with(ballots, w, t, start, m) {
        return Err(Error::InfeasibleStart);
    }
    let mut current = start;
    let mut visited = HashSet::from([start]);
    let mut steps = Vec::new();
    loop {
        let rep: Vec<Option<PartyId>> = ballots.iter().map(|b| b.best_in(current)).collect();
        let mut unrep = vec![T::zero(); m];
        for ((b, r), wi) in ballots.iter().zip(&rep).zip(w) {
            if r.is_none() {
                for p in &b.ranking {
                    unrep[p.0].add_ref(wi);
                }
            }
        }
        let mut pick: Option<PartyId> = None;
        for i in 0..m {
            let c = PartyId(i);
            if current.contains(c) || &unrep[i] < t {
                continue;
            }
            pick = match pick {
                Some(q) if unrep[q.0] > unrep[i] || (unrep[q.0] == unrep[i] && priority[q.0] < priority[i]) => Some(q),
                _ => Some(c),
            };
        }
        let Some(c) = pick else { break };

        let mut kept = vec![T::zero(); m];
        for ((b, r), wi) in ballots.iter().zip(&rep).zip(w) {
            if let Some(r) = r {
                if b.prefers(*r, c) {
                    kept[r.0].add_ref(wi);
                }
            }
        }
        let removed: PartySet = current.iter().filter(|p| &kept[p.0] < t).collect();
        let next = current.with(c).difference(removed);
        debug_assert!(feasible_with(ballots, w, t, next, m));
        if !visited.insert(next) {
            return Err(Error::AugmentCycle(name(next)));
        }
        steps.push(RawStep {
            added: c,
            support: unrep[c.0].clone(),
            removed,
            outcome: next,
        });
        current = next;
    }
    Ok((current, steps))
}

/// Augments a feasible `start` outcome and returns the trace.
pub fn augment(profile: &Profile, tau: &Threshold, start: PartySet) -> Result<(PartySet, AugmentTrace)> {
    tau.validate_for(profile)?;
    profile.roster().check_set(start)?;
    let m = profile.num_parties();
    let prio = priorities(profile);
    with_tally!(profile.scaled(), tau.value(), |w, t| {
        let (outcome, raw) = augment_core(profile.ballots(), w, &t, m, &prio, start, |s| profile.format_set(s))?;
        let steps = raw
            .into_iter()
            .map(|s| AugmentStep {
                added: s.added,
                unrepresented_support: profile.scaled().to_weight(&s.support),
                removed: s.removed,
                outcome: s.outcome,
            })
            .collect();
        Ok((outcome, AugmentTrace { start, steps }))
    })
}

pub(crate) fn augment_select(profile: &Profile, tau: &Threshold, start: PartySet) -> Result<PartySet> {
    let m = profile.num_parties();
    let prio = priorities(profile);
    with_tally!(profile.scaled(), tau.value(), |w, t| {
        augment_core(profile.ballots(), w, &t, m, &prio, start, |s| profile.format_set(s)).map(|(s, _)| s)
    })
}

/// Full result of augmenting `start`, as if produced by `rule`.
pub fn augment_result(rule: RuleId, profile: &Profile, tau: &Threshold, start: PartySet) -> Result<RuleResult> {
    let (outcome, trace) = augment(profile, tau, start)?;
    let mut result = rules::finish(rule, profile, outcome, Vec::new())?;
    result.augmentation = Some(trace);
    Ok(result)
}

/// DO+, STV+ or GP+.
pub fn run_augmented(rule: RuleId, profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    let base = rule
        .base()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not an augmented rule", rule)))?;
    let base_result = rules::run(base, profile, tau)?;
    let mut result = augment_result(rule, profile, tau, base_result.outcome)?;
    result.trace = base_result.trace;
    Ok(result)
}
