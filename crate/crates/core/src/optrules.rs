//! Optimisation rules over the feasible outcomes.
//!
//! MaxP maximises the weight of voters whose top choice is selected, then the
//! weight of voters with a selected party among their top two, and so on.
//! MaxR maximises the weight of voters ranking any selected party. Remaining
//! ties go to the lexicographically largest set in the priority order.
//!
//! Both problems are NP-hard; the solver is an exact depth-first
//! branch-and-bound and refuses rosters above [`SOLVER_GUARD`].

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::party_set::PartySet;
use crate::profile::{feasible_with, scores_with, Ballot, Profile, Threshold};
use crate::rules::{self, gp_order, priorities, Action, RuleId, RuleResult, TraceEvent};
use crate::tally::{with_tally, Tally};
use crate::weight::Weight;

/// Roster-size guard for [`run_maxp`] and [`run_maxr`].
pub const SOLVER_GUARD: usize = 16;
/// Roster-size guard for [`enumerate_feasible`].
pub const ENUMERATION_GUARD: usize = 12;

/// Entry `k` is the weight of voters whose representative sits at rank
/// `k + 1` or better.
pub type ObjectiveVector = Vec<Weight>;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Objective {
    Positional,
    Coverage,
}

fn guard(m: usize, limit: usize, what: &'static str) -> Result<()> {
    if m > limit {
        Err(Error::GuardExceeded { what, limit, actual: m })
    } else {
        Ok(())
    }
}

/// MaxP's objective vector of `outcome`.
pub fn objective_vector(profile: &Profile, outcome: PartySet) -> ObjectiveVector {
    let len = profile.max_ranking_len();
    with_tally!(profile.scaled(), &Weight::zero(), |w, _t| {
        positional(profile.ballots(), w, outcome, len)
            .iter()
            .map(|v| profile.scaled().to_weight(v))
            .collect()
    })
}

/// Weight of voters who rank at least one member of `outcome`.
pub fn coverage(profile: &Profile, outcome: PartySet) -> Weight {
    profile
        .ballots()
        .iter()
        .filter(|b| b.best_in(outcome).is_some())
        .map(|b| &b.weight)
        .sum()
}

fn positional<T: Tally>(ballots: &[Ballot], w: &[T], set: PartySet, len: usize) -> Vec<T> {
    let mut at = vec![T::zero(); len];
    for (b, wi) in ballots.iter().zip(w) {
        if let Some(k) = b.best_position_in(set) {
            at[k].add_ref(wi);
        }
    }
    for k in 1..len {
        let prev = at[k - 1].clone();
        at[k].add_ref(&prev);
    }
    at
}

fn covered<T: Tally>(ballots: &[Ballot], w: &[T], set: PartySet) -> Vec<T> {
    let mut total = T::zero();
    for (b, wi) in ballots.iter().zip(w) {
        if b.best_in(set).is_some() {
            total.add_ref(wi);
        }
    }
    vec![total]
}

struct Search<'a, T> {
    ballots: &'a [Ballot],
    w: &'a [T],
    t: &'a T,
    m: usize,
    len: usize,
    objective: Objective,
    order: Vec<crate::party_set::PartyId>,
    key: Vec<u64>,
    best: Option<(Vec<T>, u64, PartySet)>,
}

impl<T: Tally> Search<'_, T> {
    fn value(&self, set: PartySet) -> Vec<T> {
        match self.objective {
            Objective::Positional => positional(self.ballots, self.w, set, self.len),
            Objective::Coverage => covered(self.ballots, self.w, set),
        }
    }

    fn lex_key(&self, set: PartySet) -> u64 {
        set.iter().map(|p| self.key[p.0]).fold(0, |a, b| a | b)
    }

    /// Whether `(value, key)` beats the incumbent.
    fn beats(&self, value: &[T], key: u64) -> bool {
        match &self.best {
            None => true,
            Some((bv, bk, _)) => match value.cmp(bv.as_slice()) {
                Ordering::Greater => true,
                Ordering::Equal => key > *bk,
                Ordering::Less => false,
            },
        }
    }

    fn dfs(&mut self, idx: usize, included: PartySet) {
        let value = self.value(included);
        let key = self.lex_key(included);
        if self.beats(&value, key) {
            self.best = Some((value, key, included));
        }
        if idx == self.order.len() {
            return;
        }
        let optimistic: PartySet = included.union(self.order[idx..].iter().copied().collect());
        let bound = self.value(optimistic);
        if !self.beats(&bound, self.lex_key(optimistic)) {
            return;
        }
        let p = self.order[idx];
        let grown = included.with(p);
        // Supersets of an infeasible set are infeasible, so only feasible
        // sets are extended.
        if feasible_with(self.ballots, self.w, self.t, grown, self.m) {
            self.dfs(idx + 1, grown);
        }
        self.dfs(idx + 1, included);
    }
}

fn solve(profile: &Profile, tau: &Threshold, objective: Objective) -> Result<PartySet> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    guard(m, SOLVER_GUARD, "roster size for the exact optimiser")?;
    let prio = priorities(profile);
    let key: Vec<u64> = profile.roster().ids().map(|p| profile.roster().lex_key(PartySet::singleton(p))).collect();
    Ok(with_tally!(profile.scaled(), tau.value(), |w, t| {
        let scores = scores_with(profile.ballots(), w, PartySet::full(m), m);
        let mut search = Search {
            ballots: profile.ballots(),
            w,
            t: &t,
            m,
            len: profile.max_ranking_len(),
            objective,
            order: gp_order(&scores, &prio),
            key,
            best: None,
        };
        search.dfs(0, PartySet::empty());
        search.best.map(|(_, _, s)| s).unwrap_or_default()
    }))
}

pub(crate) fn maxp_select(profile: &Profile, tau: &Threshold) -> Result<PartySet> {
    solve(profile, tau, Objective::Positional)
}

pub(crate) fn maxr_select(profile: &Profile, tau: &Threshold) -> Result<PartySet> {
    solve(profile, tau, Objective::Coverage)
}

fn result(rule: RuleId, profile: &Profile, outcome: PartySet) -> Result<RuleResult> {
    let assignment = profile.best_assignment(outcome)?;
    let trace = outcome
        .iter()
        .enumerate()
        .map(|(step, p)| TraceEvent {
            step,
            party: p,
            action: Action::Selected,
            score: assignment.scores[&p].clone(),
        })
        .collect();
    let mut r = rules::finish(rule, profile, outcome, trace)?;
    r.assignment = assignment;
    Ok(r)
}

pub fn run_maxp(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    let outcome = maxp_select(profile, tau)?;
    result(RuleId::MaxP, profile, outcome)
}

pub fn run_maxr(profile: &Profile, tau: &Threshold) -> Result<RuleResult> {
    let outcome = maxr_select(profile, tau)?;
    result(RuleId::MaxR, profile, outcome)
}

/// Every feasible outcome, in increasing bit order.
pub fn enumerate_feasible(profile: &Profile, tau: &Threshold) -> Result<Vec<PartySet>> {
    tau.validate_for(profile)?;
    let m = profile.num_parties();
    guard(m, ENUMERATION_GUARD, "roster size for feasible-set enumeration")?;
    let mut out = with_tally!(profile.scaled(), tau.value(), |w, t| {
        let mut out = vec![PartySet::empty()];
        let mut frontier = vec![(PartySet::empty(), 0usize)];
        while let Some((set, next)) = frontier.pop() {
            for i in next..m {
                let grown = set.with(crate::party_set::PartyId(i));
                if feasible_with(profile.ballots(), w, &t, grown, m) {
                    out.push(grown);
                    frontier.push((grown, i + 1));
                }
            }
        }
        out
    });
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rules::select;

    #[test]
    fn example_one() {
        let p = fixtures::example_one();
        let tau = Threshold::from(5);
        let maxp = run_maxp(&p, &tau).unwrap();
        assert_eq!(maxp.outcome, p.set_of(&["d", "a"]).unwrap());
        assert_eq!(objective_vector(&p, maxp.outcome)[0], Weight::from(10u64));
        assert_eq!(select(RuleId::MaxR, &p, &tau).unwrap(), p.set_of(&["d", "b"]).unwrap());
    }

    #[test]
    fn direct_winner_fixture() {
        let p = Profile::from_rankings(&["a", "b", "c"], &[(2, "a>b"), (2, "a>c"), (3, "c"), (3, "b")]).unwrap();
        let tau = Threshold::from(4);
        let bc = p.set_of(&["b", "c"]).unwrap();
        assert_eq!(select(RuleId::MaxP, &p, &tau).unwrap(), bc);
        assert_eq!(select(RuleId::MaxR, &p, &tau).unwrap(), bc);
    }

    #[test]
    fn degenerate_profiles() {
        let empty = Profile::new(crate::profile::Roster::from_names::<&str>(&[]).unwrap(), vec![]).unwrap();
        assert!(select(RuleId::MaxP, &empty, &Threshold::from(0)).unwrap().is_empty());
        let p = Profile::from_rankings(&["a"], &[(1, "a")]).unwrap();
        assert_eq!(select(RuleId::MaxR, &p, &Threshold::from(1)).unwrap(), p.roster().all());
    }

    #[test]
    fn enumeration() {
        let p = Profile::from_rankings(&["a", "b", "c"], &[(2, "b>c"), (1, "c")]).unwrap();
        let sets = enumerate_feasible(&p, &Threshold::from(3)).unwrap();
        assert_eq!(sets, vec![PartySet::empty(), p.set_of(&["c"]).unwrap()]);
        let e = fixtures::example_one();
        assert_eq!(enumerate_feasible(&e, &Threshold::from(0)).unwrap().len(), 16);
        let sets = enumerate_feasible(&e, &Threshold::from(5)).unwrap();
        for ok in [&["d"][..], &["d", "a"], &["d", "b"]] {
            assert!(sets.contains(&e.set_of(ok).unwrap()));
        }
        assert!(!sets.contains(&e.set_of(&["d", "a", "b"]).unwrap()));
    }

    #[test]
    fn guards() {
        let names: Vec<String> = (0..17).map(|i| format!("p{}", i)).collect();
        let p = Profile::new(crate::profile::Roster::from_names(&names).unwrap(), vec![]).unwrap();
        assert!(run_maxp(&p, &Threshold::from(0)).unwrap_err().is_guard());
        assert!(enumerate_feasible(&p, &Threshold::from(0)).unwrap_err().is_guard());
    }
}
