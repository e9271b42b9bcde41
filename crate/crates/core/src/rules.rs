//! The greedy party selection rules, the uninominal baseline and
//! parallel-universe tie-breaking.
//!
//! * DO selects the direct winners, parties ranked first by at least `tau`.
//! * STV repeatedly eliminates the plurality loser among the remaining
//!   parties until the remaining set is feasible. Ballots of an eliminated
//!   party move to their next remaining party.
//! * GP scans the parties once by decreasing plurality score and keeps each
//!   one whose addition leaves the selection feasible.
//!
//! Ties are broken by the roster's priority order: STV eliminates the tied
//! party with the lowest priority, GP considers the tied party with the
//! highest priority first.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::augment::{self, AugmentTrace};
use crate::error::{Error, Result};
use crate::optrules;
use crate::party_set::{PartyId, PartySet};
use crate::profile::{feasible_with, scores_with, Assignment, Ballot, Profile, Threshold};
use crate::tally::{with_tally, Tally};
use crate::weight::Weight;

/// Roster-size guard for [`run_parallel_universe`].
pub const PARALLEL_UNIVERSE_GUARD: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "do")]
    Do,
    #[serde(rename = "stv")]
    Stv,
    #[serde(rename = "gp")]
    Gp,
    #[serde(rename = "uninominal")]
    Uninominal,
    #[serde(rename = "maxp")]
    MaxP,
    #[serde(rename = "maxr")]
    MaxR,
    #[serde(rename = "do+")]
    DoPlus,
    #[serde(rename = "stv+")]
    StvPlus,
    #[serde(rename = "gp+")]
    GpPlus,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::Do,
        RuleId::Stv,
        RuleId::Gp,
        RuleId::Uninominal,
        RuleId::MaxP,
        RuleId::MaxR,
        RuleId::DoPlus,
        RuleId::StvPlus,
        RuleId::GpPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Do => "do",
            RuleId::Stv => "stv",
            RuleId::Gp => "gp",
            RuleId::Uninominal => "uninominal",
            RuleId::MaxP => "maxp",
            RuleId::MaxR => "maxr",
            RuleId::DoPlus => "do+",
            RuleId::StvPlus => "stv+",
            RuleId::GpPlus => "gp+",
        }
    }

    /// The rule an augmented rule starts from.
    pub fn base(self) -> Option<RuleId> {
        match self {
            RuleId::DoPlus => Some(RuleId::Do),
            RuleId::StvPlus => Some(RuleId::Stv),
            RuleId::GpPlus => Some(RuleId::Gp),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let canonical = match lower.as_str() {
            "do_plus" => "do+",
            "stv_plus" => "stv+",
            "gp_plus" => "gp+",
            other => other,
        };
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == canonical)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown rule `{}`", s)))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Selected,
    Eliminated,
    Skipped,
}

/// One decision of a rule, with the plurality score it was based on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub party: PartyId,
    pub action: Action,
    pub score: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleResult {
    pub rule: RuleId,
    pub outcome: PartySet,
    pub assignment: Assignment,
    pub trace: Vec<TraceEvent>,
    /// Present for the augmented rules.
    pub augmentation: Option<AugmentTrace>,
}

/// Anything that maps a profile and threshold to an outcome.
///
/// Axiom checkers are written against this trait, so they accept the
/// built-in rules as well as user-supplied ones.
pub trait SelectionRule: Sync {
    fn name(&self) -> String;
    fn select(&self, profile: &Profile, tau: &Threshold) -> Result<PartySet>;
}

impl SelectionRule for RuleId {
    fn name(&self) -> String {
        self.as_str().to_string()
    }

    fn select(&self, profile: &Profile, tau: &Threshold) -> Result<PartySet> {
        select(*self, profile, tau)
    }
}

/// A named closure usable as a [`SelectionRule`].
pub struct FnRule<F> {
    name: String,
    f: F,
}

impl<F> FnRule<F>
where
    F: Fn(&Profile, &Threshold) -> Result<PartySet> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnRule { name: name.into(), f }
    }
}

impl<F> SelectionRule for FnRule<F>
where
    F: Fn(&Profile, &Threshold) -> Result<PartySet> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn select(&self, profile: &Profile, tau: &Threshold) -> Result<PartySet> {
        (self.f)(profile, tau)
    }
}

/// Outcome of `rule`, without building an assignment or trace.
pub fn select(rule: RuleId, profile: &Profile, tau: &Threshold) -> Result<PartySet> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    let ballots = profile.ballots();
    Ok(match rule {
        RuleId::Do | RuleId::Uninominal => {
            with_tally!(profile.scaled(), tau.value(), |w, t| do_core(ballots, w, &t, m).0)
        }
        RuleId::Stv => {
            let prio = priorities(profile);
            with_tally!(profile.scaled(), tau.value(), |w, t| stv_core(ballots, w, &t, m, &prio).0)
        }
        RuleId::Gp => {
            let prio = priorities(profile);
            with_tally!(profile.scaled(), tau.value(), |w, t| gp_core(ballots, w, &t, m, &prio).0)
        }
        RuleId::MaxP => optrules::maxp_select(profile, tau)?,
        RuleId::MaxR => optrules::maxr_select(profile, tau)?,
        RuleId::DoPlus | RuleId::StvPlus | RuleId::GpPlus => {
            let start = select(rule.base().unwrap(), profile, tau)?;
            augment::augment_select(profile, tau, start)?
        }
    })
}

/// Runs `rule` and returns its outcome with assignment and trace.
pub fn run(rule: RuleId, profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    tau.validate_for(profile)?;
    match rule {
        RuleId::Do => run_do(profile, tau),
        RuleId::Stv => run_stv(profile, tau),
        RuleId::Gp => run_gp(profile, tau),
        RuleId::Uninominal => run_uninominal(profile, tau),
        RuleId::MaxP => optrules::run_maxp(profile, tau),
        RuleId::MaxR => optrules::run_maxr(profile, tau),
        RuleId::DoPlus | RuleId::StvPlus | RuleId::GpPlus => augment::run_augmented(rule, profile, tau),
    }
}

pub(crate) fn priorities(profile: &Profile) -> Vec<usize> {
    profile.roster().ids().map(|p| profile.roster().priority(p)).collect()
}

fn to_events<T: Tally>(profile: &Profile, raw: Vec<(PartyId, Action, T)>) -> Vec<TraceEvent> {
    raw.into_iter()
        .enumerate()
        .map(|(step, (party, action, score))| TraceEvent {
            step,
            party,
            action,
            score: profile.scaled().to_weight(&score),
        })
        .collect()
}

pub(crate) fn finish(rule: RuleId, profile: &Profile, outcome: PartySet, trace: Vec<TraceEvent>) -> Result<RuleResult> {
    Ok(RuleResult {
        rule,
        outcome,
        assignment: profile.best_assignment(outcome)?,
        trace,
        augmentation: None,
    })
}

pub fn run_do(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    let (outcome, trace) = with_tally!(profile.scaled(), tau.value(), |w, t| {
        let (outcome, raw) = do_core(profile.ballots(), w, &t, m);
        (outcome, to_events(profile, raw))
    });
    finish(RuleId::Do, profile, outcome, trace)
}

pub fn run_stv(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    let prio = priorities(profile);
    let (outcome, trace) = with_tally!(profile.scaled(), tau.value(), |w, t| {
        let (outcome, raw) = stv_core(profile.ballots(), w, &t, m, &prio);
        (outcome, to_events(profile, raw))
    });
    finish(RuleId::Stv, profile, outcome, trace)
}

pub fn run_gp(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    let prio = priorities(profile);
    let (outcome, trace) = with_tally!(profile.scaled(), tau.value(), |w, t| {
        let (outcome, raw) = gp_core(profile.ballots(), w, &t, m, &prio);
        (outcome, to_events(profile, raw))
    });
    finish(RuleId::Gp, profile, outcome, trace)
}

/// DO's selection with the representation of plurality voting: a voter counts
/// only for her first-ranked party, and only if it is selected.
pub fn run_uninominal(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    let base = run_do(profile, tau)?;
    let outcome = base.outcome;
    let representative = profile
        .ballots()
        .iter()
        .map(|b| b.ranking.first().copied().filter(|p| outcome.contains(*p)))
        .collect();
    Ok(RuleResult {
        rule: RuleId::Uninominal,
        outcome,
        assignment: Assignment::from_representatives(profile, outcome, representative),
        trace: base.trace,
        augmentation: None,
    })
}

type RawTrace<T> = Vec<(PartyId, Action, T)>;

pub(crate) fn do_core<T: Tally>(ballots: &[Ballot], w: &[T], t: &T, m: usize) -> (PartySet, RawTrace<T>) {
    let scores = scores_with(ballots, w, PartySet::full(m), m);
    let mut outcome = PartySet::empty();
    let mut trace = Vec::with_capacity(m);
    for (i, s) in scores.into_iter().enumerate() {
        let p = PartyId(i);
        if &s >= t {
            outcome.insert(p);
            trace.push((p, Action::Selected, s));
        } else {
            trace.push((p, Action::Skipped, s));
        }
    }
    (outcome, trace)
}

pub(crate) fn stv_core<T: Tally>(
    ballots: &[Ballot],
    w: &[T],
    t: &T,
    m: usize,
    priority: &[usize],
) -> (PartySet, RawTrace<T>) {
    let mut active = PartySet::full(m);
    let mut scores = vec![T::zero(); m];
    let mut supporters: Vec<Vec<usize>> = vec![Vec::new(); m];
    // Position in the ranking of each ballot's current party.
    let mut cursor = vec![0usize; ballots.len()];
    for (i, b) in ballots.iter().enumerate() {
        if let Some(&p) = b.ranking.first() {
            scores[p.0].add_ref(&w[i]);
            supporters[p.0].push(i);
        }
    }
    let mut trace = Vec::new();
    loop {
        // Plurality loser; on ties the lowest-priority party.
        let mut loser: Option<PartyId> = None;
        for p in active.iter() {
            loser = match loser {
                None => Some(p),
                Some(q) => {
                    let (sp, sq) = (&scores[p.0], &scores[q.0]);
                    if sp < sq || (sp == sq && priority[p.0] > priority[q.0]) {
                        Some(p)
                    } else {
                        Some(q)
                    }
                }
            };
        }
        let Some(loser) = loser else { break };
        if &scores[loser.0] >= t {
            break;
        }
        active.remove(loser);
        trace.push((loser, Action::Eliminated, scores[loser.0].clone()));
        for i in std::mem::take(&mut supporters[loser.0]) {
            let ranking = &ballots[i].ranking;
            let mut k = cursor[i] + 1;
            while k < ranking.len() && !active.contains(ranking[k]) {
                k += 1;
            }
            cursor[i] = k;
            if let Some(&next) = ranking.get(k) {
                scores[next.0].add_ref(&w[i]);
                supporters[next.0].push(i);
            }
        }
    }
    for p in active.iter() {
        trace.push((p, Action::Selected, scores[p.0].clone()));
    }
    (active, trace)
}

/// Parties by decreasing plurality score, ties by priority.
pub(crate) fn gp_order<T: Tally>(scores: &[T], priority: &[usize]) -> Vec<PartyId> {
    let mut order: Vec<PartyId> = (0..scores.len()).map(PartyId).collect();
    order.sort_by(|a, b| {
        scores[b.0]
            .cmp(&scores[a.0])
            .then(priority[a.0].cmp(&priority[b.0]))
    });
    order
}

pub(crate) fn gp_core<T: Tally>(
    ballots: &[Ballot],
    w: &[T],
    t: &T,
    m: usize,
    priority: &[usize],
) -> (PartySet, RawTrace<T>) {
    let scores = scores_with(ballots, w, PartySet::full(m), m);
    let order = gp_order(&scores, priority);
    let mut outcome = PartySet::empty();
    let mut trace = Vec::with_capacity(m);
    for p in order {
        let grown = outcome.with(p);
        if feasible_with(ballots, w, t, grown, m) {
            outcome = grown;
            trace.push((p, Action::Selected, scores[p.0].clone()));
        } else {
            trace.push((p, Action::Skipped, scores[p.0].clone()));
        }
    }
    (outcome, trace)
}

/// Every outcome reachable by some resolution of the score ties met by STV
/// or GP, sorted.
pub fn run_parallel_universe(rule: RuleId, profile: &Profile, tau: &Threshold) -> Result<Vec<PartySet>> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    if m > PARALLEL_UNIVERSE_GUARD {
        return Err(Error::GuardExceeded {
            what: "roster size for parallel-universe tie-breaking",
            limit: PARALLEL_UNIVERSE_GUARD,
            actual: m,
        });
    }
    let ballots = profile.ballots();
    let outcomes = match rule {
        RuleId::Stv => with_tally!(profile.scaled(), tau.value(), |w, t| {
            let mut seen = HashSet::new();
            let mut out = BTreeSet::new();
            stv_universes(ballots, w, &t, m, PartySet::full(m), &mut seen, &mut out);
            out
        }),
        RuleId::Gp => with_tally!(profile.scaled(), tau.value(), |w, t| {
            let scores = scores_with(ballots, w, PartySet::full(m), m);
            let mut seen = HashSet::new();
            let mut out = BTreeSet::new();
            gp_universes(ballots, w, &t, m, &scores, PartySet::empty(), PartySet::full(m), &mut seen, &mut out);
            out
        }),
        other => {
            return Err(Error::InvalidArgument(format!(
                "parallel-universe tie-breaking applies to stv and gp, not {}",
                other
            )))
        }
    };
    Ok(outcomes.into_iter().collect())
}

fn stv_universes<T: Tally>(
    ballots: &[Ballot],
    w: &[T],
    t: &T,
    m: usize,
    active: PartySet,
    seen: &mut HashSet<PartySet>,
    out: &mut BTreeSet<PartySet>,
) {
    if !seen.insert(active) {
        return;
    }
    if feasible_with(ballots, w, t, active, m) {
        out.insert(active);
        return;
    }
    let scores = scores_with(ballots, w, active, m);
    let min = active.iter().map(|p| &scores[p.0]).min().unwrap();
    for p in active.iter().filter(|p| &scores[p.0] == min) {
        stv_universes(ballots, w, t, m, active.without(p), seen, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn gp_universes<T: Tally>(
    ballots: &[Ballot],
    w: &[T],
    t: &T,
    m: usize,
    scores: &[T],
    selected: PartySet,
    pending: PartySet,
    seen: &mut HashSet<(PartySet, PartySet)>,
    out: &mut BTreeSet<PartySet>,
) {
    if !seen.insert((selected, pending)) {
        return;
    }
    let Some(max) = pending.iter().map(|p| &scores[p.0]).max() else {
        out.insert(selected);
        return;
    };
    for p in pending.iter().filter(|p| &scores[p.0] == max) {
        let grown = selected.with(p);
        let next = if feasible_with(ballots, w, t, grown, m) { grown } else { selected };
        gp_universes(ballots, w, t, m, scores, next, pending.without(p), seen, out);
    }
}

/// Parties in the order GP considers them.
pub fn gp_consideration_order(profile: &Profile) -> Vec<PartyId> {
    let prio = priorities(profile);
    let m = profile.num_parties();
    with_tally!(profile.scaled(), &Weight::zero(), |w, _t| {
        let scores = scores_with(profile.ballots(), w, PartySet::full(m), m);
        gp_order(&scores, &prio)
    })
}
