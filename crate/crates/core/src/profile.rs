//! Profiles of weighted truncated rankings, outcomes and the induced
//! voter-to-representative assignment.
//!
//! A voter ranks a subset of the roster. Unranked parties sit strictly below
//! every ranked party and are incomparable to one another. Given an outcome
//! `S`, each voter is represented by the first party of her ranking that lies
//! in `S`, or by nobody.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::party_set::{PartyId, PartySet, MAX_PARTIES};
use crate::tally::{with_tally, Scaled, Tally};
use crate::weight::Weight;

/// Guard for exhaustive subset enumeration in [`Profile::is_generic`].
pub const GENERIC_GUARD: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    pub name: String,
    /// Position in the fixed tie-breaking order, 0 being the highest priority.
    pub priority: usize,
}

/// The parties standing in an election together with their tie-breaking order.
#[derive(Clone, Debug)]
pub struct Roster {
    parties: Vec<Party>,
    index: HashMap<String, PartyId>,
    by_priority: Vec<PartyId>,
}

impl PartialEq for Roster {
    fn eq(&self, other: &Self) -> bool {
        self.parties == other.parties
    }
}

impl Eq for Roster {}

impl Roster {
    /// Roster whose priority order is the order of `names`.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let parties = names
            .iter()
            .enumerate()
            .map(|(i, n)| Party {
                name: n.as_ref().to_string(),
                priority: i,
            })
            .collect();
        Roster::new(parties)
    }

    pub fn new(parties: Vec<Party>) -> Result<Self> {
        if parties.len() > MAX_PARTIES {
            return Err(Error::GuardExceeded {
                what: "roster size",
                limit: MAX_PARTIES,
                actual: parties.len(),
            });
        }
        let mut index = HashMap::with_capacity(parties.len());
        for (i, p) in parties.iter().enumerate() {
            if p.name.is_empty() {
                return Err(Error::InvalidArgument("empty party name".into()));
            }
            if index.insert(p.name.clone(), PartyId(i)).is_some() {
                return Err(Error::DuplicateParty(p.name.clone()));
            }
        }
        let mut by_priority = vec![None; parties.len()];
        for (i, p) in parties.iter().enumerate() {
            match by_priority.get_mut(p.priority) {
                Some(slot @ None) => *slot = Some(PartyId(i)),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "priorities must be a permutation of 0..{}",
                        parties.len()
                    )))
                }
            }
        }
        let by_priority = by_priority.into_iter().map(Option::unwrap).collect();
        Ok(Roster {
            parties,
            index,
            by_priority,
        })
    }

    pub fn len(&self) -> usize {
        self.parties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn ids(&self) -> impl Iterator<Item = PartyId> {
        (0..self.parties.len()).map(PartyId)
    }

    pub fn all(&self) -> PartySet {
        PartySet::full(self.parties.len())
    }

    pub fn id(&self, name: &str) -> Option<PartyId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, p: PartyId) -> &str {
        &self.parties[p.0].name
    }

    pub fn priority(&self, p: PartyId) -> usize {
        self.parties[p.0].priority
    }

    /// Parties from highest to lowest priority.
    pub fn by_priority(&self) -> &[PartyId] {
        &self.by_priority
    }

    /// Key under which larger values are lexicographically larger sets in the
    /// priority order (membership of the highest-priority party decides first).
    pub fn lex_key(&self, set: PartySet) -> u64 {
        let m = self.parties.len();
        set.iter()
            .map(|p| 1u64 << (m - 1 - self.priority(p)))
            .fold(0, |a, b| a | b)
    }

    /// Looks up every name of `names`.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PartySet> {
        names
            .iter()
            .map(|n| {
                self.id(n.as_ref())
                    .ok_or_else(|| Error::UnknownParty(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Names of the members of `set`, in priority order.
    pub fn names_of(&self, set: PartySet) -> Vec<String> {
        self.by_priority
            .iter()
            .filter(|p| set.contains(**p))
            .map(|p| self.name(*p).to_string())
            .collect()
    }

    pub fn format_set(&self, set: PartySet) -> String {
        format!("{{{}}}", self.names_of(set).join(","))
    }

    pub fn format_ranking(&self, ranking: &[PartyId]) -> String {
        ranking
            .iter()
            .map(|p| self.name(*p))
            .collect::<Vec<_>>()
            .join(">")
    }

    pub(crate) fn check_set(&self, set: PartySet) -> Result<()> {
        if set.is_subset(self.all()) {
            Ok(())
        } else {
            let bad = set.difference(self.all()).iter().next().unwrap();
            Err(Error::PartyOutOfRange(bad.0))
        }
    }
}

/// One truncated ranking with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ballot {
    pub ranking: Vec<PartyId>,
    pub weight: Weight,
}

impl Ballot {
    pub fn new(ranking: Vec<PartyId>, weight: Weight) -> Self {
        Ballot { ranking, weight }
    }

    pub fn unit(ranking: Vec<PartyId>) -> Self {
        Ballot::new(ranking, Weight::one())
    }

    pub fn position(&self, p: PartyId) -> Option<usize> {
        self.ranking.iter().position(|&q| q == p)
    }

    /// First ranked party that belongs to `set`.
    #[inline]
    pub fn best_in(&self, set: PartySet) -> Option<PartyId> {
        self.ranking.iter().copied().find(|&p| set.contains(p))
    }

    /// Rank (0-based) of the first ranked party that belongs to `set`.
    #[inline]
    pub fn best_position_in(&self, set: PartySet) -> Option<usize> {
        self.ranking.iter().position(|&p| set.contains(p))
    }

    /// `c ≻ x`: `c` is ranked, and `x` is unranked or ranked below `c`.
    pub fn prefers(&self, c: PartyId, x: PartyId) -> bool {
        match (self.position(c), self.position(x)) {
            (Some(pc), Some(px)) => pc < px,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }

    /// `c ≻ S`: `c` is ranked and above every ranked member of `set`.
    pub fn prefers_to_set(&self, c: PartyId, set: PartySet) -> bool {
        for &p in &self.ranking {
            if p == c {
                return true;
            }
            if set.contains(p) {
                return false;
            }
        }
        false
    }
}

/// A collection of weighted truncated rankings over a roster.
#[derive(Clone)]
pub struct Profile {
    roster: Arc<Roster>,
    ballots: Vec<Ballot>,
    total_weight: Weight,
    scaled: Scaled,
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.roster == other.roster && self.ballots == other.ballots
    }
}

impl Eq for Profile {}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile {{ parties: {:?}, ballots: [", self.roster.names_of(self.roster.all()))?;
        for (i, b) in self.ballots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", b.weight, self.roster.format_ranking(&b.ranking))?;
        }
        write!(f, "] }}")
    }
}

impl Profile {
    pub fn new(roster: Roster, ballots: Vec<Ballot>) -> Result<Self> {
        Profile::with_shared_roster(Arc::new(roster), ballots)
    }

    pub fn with_shared_roster(roster: Arc<Roster>, ballots: Vec<Ballot>) -> Result<Self> {
        let m = roster.len();
        for b in &ballots {
            if b.weight.is_negative() {
                return Err(Error::NegativeWeight(b.weight.to_string()));
            }
            let mut seen = PartySet::empty();
            for &p in &b.ranking {
                if p.0 >= m {
                    return Err(Error::PartyOutOfRange(p.0));
                }
                if seen.contains(p) {
                    return Err(Error::DuplicateParty(roster.name(p).to_string()));
                }
                seen.insert(p);
            }
        }
        let total_weight = ballots.iter().map(|b| &b.weight).sum();
        let scaled = Scaled::new(ballots.iter().map(|b| &b.weight));
        Ok(Profile {
            roster,
            ballots,
            total_weight,
            scaled,
        })
    }

    /// Builds a profile from party names and `(weight, ranking)` pairs, where
    /// rankings are written `a>b>c`.
    pub fn from_rankings(parties: &[&str], ballots: &[(u64, &str)]) -> Result<Self> {
        let roster = Roster::from_names(parties)?;
        let mut out = Vec::with_capacity(ballots.len());
        for (w, r) in ballots {
            let ranking = r
                .split('>')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|n| roster.id(n).ok_or_else(|| Error::UnknownParty(n.to_string())))
                .collect::<Result<Vec<_>>>()?;
            out.push(Ballot::new(ranking, Weight::from(*w)));
        }
        Profile::new(roster, out)
    }

    pub fn roster(&self) -> &Roster {
        &self.roster
    }

    pub(crate) fn shared_roster(&self) -> Arc<Roster> {
        Arc::clone(&self.roster)
    }

    pub fn num_parties(&self) -> usize {
        self.roster.len()
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn total_weight(&self) -> &Weight {
        &self.total_weight
    }

    pub(crate) fn scaled(&self) -> &Scaled {
        &self.scaled
    }

    /// Weight of ballots ranking nobody.
    pub fn empty_ballot_weight(&self) -> Weight {
        self.ballots
            .iter()
            .filter(|b| b.ranking.is_empty())
            .map(|b| &b.weight)
            .sum()
    }

    /// Longest ranking in the profile.
    pub fn max_ranking_len(&self) -> usize {
        self.ballots.iter().map(|b| b.ranking.len()).max().unwrap_or(0)
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PartySet> {
        self.roster.set_of(names)
    }

    pub fn format_set(&self, set: PartySet) -> String {
        self.roster.format_set(set)
    }

    /// Replaces the ranking of one ballot, keeping its weight.
    pub fn set_ranking(&mut self, ballot: usize, ranking: Vec<PartyId>) -> Result<()> {
        let m = self.roster.len();
        let mut seen = PartySet::empty();
        for &p in &ranking {
            if p.0 >= m {
                return Err(Error::PartyOutOfRange(p.0));
            }
            if seen.contains(p) {
                return Err(Error::DuplicateParty(self.roster.name(p).to_string()));
            }
            seen.insert(p);
        }
        let slot = self
            .ballots
            .get_mut(ballot)
            .ok_or_else(|| Error::InvalidArgument(format!("no ballot {}", ballot)))?;
        slot.ranking = ranking;
        Ok(())
    }

    /// Splits a single voter off ballot `ballot`.
    ///
    /// A ballot of weight above 1 stands for several voters; the returned
    /// profile keeps weight `w - 1` in place and appends a unit-weight copy,
    /// whose index is returned. Ballots of weight at most 1 are the voter.
    pub fn isolate_voter(&self, ballot: usize) -> Result<(Profile, usize)> {
        let b = self
            .ballots
            .get(ballot)
            .ok_or_else(|| Error::InvalidArgument(format!("no ballot {}", ballot)))?;
        if b.weight <= Weight::one() {
            return Ok((self.clone(), ballot));
        }
        let mut ballots = self.ballots.clone();
        ballots[ballot].weight = &b.weight - &Weight::one();
        ballots.push(Ballot::unit(b.ranking.clone()));
        let idx = ballots.len() - 1;
        Ok((Profile::with_shared_roster(self.shared_roster(), ballots)?, idx))
    }

    /// Same rankings with new weights.
    pub fn reweighted(&self, weights: Vec<Weight>) -> Result<Profile> {
        if weights.len() != self.ballots.len() {
            return Err(Error::InvalidArgument("weight vector length differs from ballot count".into()));
        }
        let ballots = self
            .ballots
            .iter()
            .zip(weights)
            .map(|(b, w)| Ballot::new(b.ranking.clone(), w))
            .collect();
        Profile::with_shared_roster(self.shared_roster(), ballots)
    }

    /// Representative of every ballot together with per-party scores and shares.
    pub fn best_assignment(&self, outcome: PartySet) -> Result<Assignment> {
        self.roster.check_set(outcome)?;
        let representative: Vec<Option<PartyId>> =
            self.ballots.iter().map(|b| b.best_in(outcome)).collect();
        Ok(Assignment::from_representatives(self, outcome, representative))
    }

    /// Whether every member of `outcome` has at least `tau` supporters.
    pub fn is_feasible(&self, outcome: PartySet, tau: &Threshold) -> Result<bool> {
        self.roster.check_set(outcome)?;
        Ok(with_tally!(self.scaled(), tau.value(), |w, t| {
            feasible_with(&self.ballots, w, &t, outcome, self.num_parties())
        }))
    }

    /// Deletes every party outside `keep`. The new roster lists the kept
    /// parties in their original index order, with priorities re-ranked
    /// preserving their relative order; use [`PartySet::expand_from`] to map
    /// outcomes back.
    pub fn restrict(&self, keep: PartySet) -> Result<Profile> {
        self.roster.check_set(keep)?;
        if keep == self.roster.all() {
            return Ok(self.clone());
        }
        let kept: Vec<PartyId> = keep.iter().collect();
        let mut new_index = vec![None; self.roster.len()];
        for (j, p) in kept.iter().enumerate() {
            new_index[p.0] = Some(PartyId(j));
        }
        let mut order: Vec<usize> = (0..kept.len()).collect();
        order.sort_by_key(|&j| self.roster.priority(kept[j]));
        let mut priority = vec![0; kept.len()];
        for (rank, j) in order.into_iter().enumerate() {
            priority[j] = rank;
        }
        let parties = kept
            .iter()
            .enumerate()
            .map(|(j, p)| Party {
                name: self.roster.name(*p).to_string(),
                priority: priority[j],
            })
            .collect();
        let roster = Roster::new(parties)?;
        let ballots = self
            .ballots
            .iter()
            .map(|b| {
                Ballot::new(
                    b.ranking.iter().filter_map(|p| new_index[p.0]).collect(),
                    b.weight.clone(),
                )
            })
            .collect();
        Profile::new(roster, ballots)
    }

    /// Cuts every ranking to its first `k` entries.
    pub fn truncate(&self, k: usize) -> Result<Profile> {
        if k == 0 {
            return Err(Error::InvalidArgument("truncation length must be positive".into()));
        }
        let ballots = self
            .ballots
            .iter()
            .map(|b| Ballot::new(b.ranking.iter().take(k).copied().collect(), b.weight.clone()))
            .collect();
        Profile::with_shared_roster(self.shared_roster(), ballots)
    }

    /// Ballots of `self` followed by those of `other`.
    pub fn concat(&self, other: &Profile) -> Result<Profile> {
        if self.roster != other.roster {
            return Err(Error::RosterMismatch);
        }
        let mut ballots = self.ballots.clone();
        ballots.extend(other.ballots.iter().cloned());
        Profile::with_shared_roster(self.shared_roster(), ballots)
    }

    /// Whether every restriction of the profile has a unique plurality loser.
    pub fn is_generic(&self) -> Result<bool> {
        let m = self.num_parties();
        if m > GENERIC_GUARD {
            return Err(Error::GuardExceeded {
                what: "roster size for genericity check",
                limit: GENERIC_GUARD,
                actual: m,
            });
        }
        Ok(with_tally!(self.scaled(), &Weight::zero(), |w, _t| {
            generic_with(&self.ballots, w, m)
        }))
    }

    /// First-place weight of every party.
    pub fn plurality_scores(&self) -> Vec<Weight> {
        let all = self.roster.all();
        with_tally!(self.scaled(), &Weight::zero(), |w, _t| {
            scores_with(&self.ballots, w, all, self.num_parties())
                .iter()
                .map(|s| self.scaled.to_weight(s))
                .collect()
        })
    }
}

/// Per-party score of `set` (indexed by party; zero outside the set).
#[inline]
pub(crate) fn scores_with<T: Tally>(ballots: &[Ballot], w: &[T], set: PartySet, m: usize) -> Vec<T> {
    let mut scores = vec![T::zero(); m];
    for (b, wi) in ballots.iter().zip(w) {
        if let Some(p) = b.best_in(set) {
            scores[p.0].add_ref(wi);
        }
    }
    scores
}

#[inline]
pub(crate) fn feasible_with<T: Tally>(ballots: &[Ballot], w: &[T], tau: &T, set: PartySet, m: usize) -> bool {
    if set.is_empty() {
        return true;
    }
    let scores = scores_with(ballots, w, set, m);
    set.iter().all(|p| &scores[p.0] >= tau)
}

fn generic_with<T: Tally>(ballots: &[Ballot], w: &[T], m: usize) -> bool {
    for bits in 1u64..(1u64 << m) {
        let set = PartySet::from_bits(bits);
        if set.len() == 1 {
            continue;
        }
        let scores = scores_with(ballots, w, set, m);
        let mut min: Option<&T> = None;
        let mut count = 0;
        for p in set.iter() {
            let s = &scores[p.0];
            match min {
                None => {
                    min = Some(s);
                    count = 1;
                }
                Some(cur) if s < cur => {
                    min = Some(s);
                    count = 1;
                }
                Some(cur) if s == cur => count += 1,
                _ => {}
            }
        }
        if count > 1 {
            return false;
        }
    }
    true
}

/// An electoral threshold, in units of ballot weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Threshold(Weight);

impl Threshold {
    pub fn new(value: Weight) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidThreshold(format!("{} is negative", value)));
        }
        Ok(Threshold(value))
    }

    /// `fraction` of the profile's total weight, resolved once.
    pub fn relative(fraction: &Weight, profile: &Profile) -> Result<Self> {
        if fraction.is_negative() || *fraction > Weight::one() {
            return Err(Error::InvalidThreshold(format!("fraction {} outside [0, 1]", fraction)));
        }
        Ok(Threshold(fraction * profile.total_weight()))
    }

    pub fn value(&self) -> &Weight {
        &self.0
    }

    /// Checks `0 <= tau <= total weight`.
    pub fn validate_for(&self, profile: &Profile) -> Result<()> {
        if &self.0 > profile.total_weight() {
            return Err(Error::InvalidThreshold(format!(
                "{} exceeds the total weight {}",
                self.0,
                profile.total_weight()
            )));
        }
        Ok(())
    }
}

impl From<u64> for Threshold {
    fn from(n: u64) -> Self {
        Threshold(Weight::from(n))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// How the ballots of a profile are represented by an outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub outcome: PartySet,
    /// Representative of each ballot, by ballot index.
    pub representative: Vec<Option<PartyId>>,
    /// Supporter weight of every selected party.
    pub scores: BTreeMap<PartyId, Weight>,
    /// Score divided by the total represented weight; all zero when nobody
    /// is represented.
    pub shares: BTreeMap<PartyId, Weight>,
}

impl Assignment {
    pub(crate) fn from_representatives(
        profile: &Profile,
        outcome: PartySet,
        representative: Vec<Option<PartyId>>,
    ) -> Self {
        let mut scores: BTreeMap<PartyId, Weight> =
            outcome.iter().map(|p| (p, Weight::zero())).collect();
        for (b, rep) in profile.ballots().iter().zip(&representative) {
            if let Some(p) = rep {
                *scores.get_mut(p).expect("representative outside outcome") += &b.weight;
            }
        }
        let represented: Weight = scores.values().sum();
        let shares = scores
            .iter()
            .map(|(p, s)| {
                let share = if represented.is_zero() {
                    Weight::zero()
                } else {
                    s / &represented
                };
                (*p, share)
            })
            .collect();
        Assignment {
            outcome,
            representative,
            scores,
            shares,
        }
    }

    pub fn score(&self, p: PartyId) -> Option<&Weight> {
        self.scores.get(&p)
    }

    pub fn share(&self, p: PartyId) -> Weight {
        self.shares.get(&p).cloned().unwrap_or_default()
    }

    pub fn represented_weight(&self) -> Weight {
        self.scores.values().sum()
    }

    pub fn unrepresented_weight(&self, profile: &Profile) -> Weight {
        profile
            .ballots()
            .iter()
            .zip(&self.representative)
            .filter(|(_, r)| r.is_none())
            .map(|(b, _)| &b.weight)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn w(n: i64) -> Weight {
        Weight::from_integer(n)
    }

    #[test]
    fn example_one_assignment() {
        let p = fixtures::example_one();
        let s = p.set_of(&["d", "b"]).unwrap();
        let a = p.best_assignment(s).unwrap();
        let b = p.roster().id("b").unwrap();
        let d = p.roster().id("d").unwrap();
        // The two c>b>a voters land on b.
        assert_eq!(a.representative[2], Some(b));
        assert_eq!(a.scores[&b], w(9));
        assert_eq!(a.scores[&d], w(6));
        assert_eq!(a.shares[&b], Weight::from_ratio(9, 15));
    }

    #[test]
    fn empty_outcome_represents_nobody() {
        let p = fixtures::example_one();
        let a = p.best_assignment(PartySet::empty()).unwrap();
        assert!(a.representative.iter().all(Option::is_none));
        assert!(a.scores.is_empty());
        assert_eq!(a.unrepresented_weight(&p), w(15));
    }

    #[test]
    fn appendix_d_scores_under_ranked_assignment() {
        let p = Profile::from_rankings(&["a", "b", "c"], &[(100, "a"), (100, "b"), (99, "c>b")]).unwrap();
        let a = p.best_assignment(p.set_of(&["a", "b"]).unwrap()).unwrap();
        assert_eq!(a.scores[&PartyId(0)], w(100));
        assert_eq!(a.scores[&PartyId(1)], w(199));
    }

    #[test]
    fn unknown_party_in_outcome_is_rejected() {
        let p = fixtures::example_one();
        assert_eq!(
            p.best_assignment(PartySet::singleton(PartyId(7))),
            Err(Error::PartyOutOfRange(7))
        );
    }

    #[test]
    fn feasibility_examples() {
        let p = fixtures::example_one();
        let tau = Threshold::from(5);
        assert!(!p.is_feasible(p.set_of(&["d", "a", "b"]).unwrap(), &tau).unwrap());
        assert!(p.is_feasible(p.set_of(&["d", "a"]).unwrap(), &tau).unwrap());
        assert!(p.is_feasible(PartySet::empty(), &tau).unwrap());
    }

    #[test]
    fn restrict_preserves_order() {
        let p = Profile::from_rankings(&["a", "b", "c"], &[(1, "a>b>c")]).unwrap();
        let r = p.restrict(p.set_of(&["a", "c"]).unwrap()).unwrap();
        assert_eq!(r, Profile::from_rankings(&["a", "c"], &[(1, "a>c")]).unwrap());
        assert_eq!(p.restrict(p.roster().all()).unwrap(), p);

        let e = fixtures::example_one();
        let r = e.restrict(e.set_of(&["d", "b"]).unwrap()).unwrap();
        let expected = Profile::from_rankings(
            &["b", "d"],
            &[(4, "b"), (3, "b"), (2, "b"), (2, "d"), (4, "d>b")],
        )
        .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn restrict_reranks_priorities() {
        let roster = Roster::new(vec![
            Party { name: "a".into(), priority: 2 },
            Party { name: "b".into(), priority: 0 },
            Party { name: "c".into(), priority: 1 },
        ])
        .unwrap();
        let p = Profile::new(roster, vec![]).unwrap();
        let r = p.restrict(p.set_of(&["a", "c"]).unwrap()).unwrap();
        assert_eq!(r.roster().priority(r.roster().id("a").unwrap()), 1);
        assert_eq!(r.roster().priority(r.roster().id("c").unwrap()), 0);
    }

    #[test]
    fn truncate_examples() {
        let p = Profile::from_rankings(&["a", "b", "c"], &[(1, "a>b>c")]).unwrap();
        assert_eq!(
            p.truncate(2).unwrap(),
            Profile::from_rankings(&["a", "b", "c"], &[(1, "a>b")]).unwrap()
        );
        assert_eq!(p.truncate(3).unwrap(), p);
        assert!(p.truncate(0).is_err());

        let e = fixtures::example_one();
        let expected = Profile::from_rankings(
            &["a", "b", "c", "d"],
            &[(4, "a"), (3, "b"), (2, "c"), (2, "d"), (4, "d")],
        )
        .unwrap();
        assert_eq!(e.truncate(1).unwrap(), expected);
    }

    #[test]
    fn concat_examples() {
        let p1 = Profile::from_rankings(&["a", "b"], &[(1, "a")]).unwrap();
        let p2 = Profile::from_rankings(&["a", "b"], &[(2, "b")]).unwrap();
        let empty = Profile::from_rankings(&["a", "b"], &[]).unwrap();
        let c = p1.concat(&p2).unwrap();
        assert_eq!(c, Profile::from_rankings(&["a", "b"], &[(1, "a"), (2, "b")]).unwrap());
        assert_eq!(c.total_weight(), &w(3));
        assert_eq!(p1.concat(&empty).unwrap(), p1);
        let other = Profile::from_rankings(&["a", "c"], &[]).unwrap();
        assert_eq!(p1.concat(&other), Err(Error::RosterMismatch));
    }

    #[test]
    fn genericity_examples() {
        let p = Profile::from_rankings(&["a", "b"], &[(1, "a"), (2, "b")]).unwrap();
        assert!(p.is_generic().unwrap());
        let p = Profile::from_rankings(&["a", "b"], &[(1, "a"), (1, "b")]).unwrap();
        assert!(!p.is_generic().unwrap());
        // Restricted to {a, d}, both parties have 6 supporters.
        assert!(!fixtures::example_one().is_generic().unwrap());
    }

    #[test]
    fn genericity_guard() {
        let names: Vec<String> = (0..21).map(|i| format!("p{}", i)).collect();
        let p = Profile::new(Roster::from_names(&names).unwrap(), vec![]).unwrap();
        assert!(p.is_generic().unwrap_err().is_guard());
    }

    #[test]
    fn ballot_validation() {
        let roster = Roster::from_names(&["a", "b"]).unwrap();
        let dup = Ballot::unit(vec![PartyId(0), PartyId(0)]);
        assert!(matches!(Profile::new(roster.clone(), vec![dup]), Err(Error::DuplicateParty(_))));
        let neg = Ballot::new(vec![PartyId(0)], w(-1));
        assert!(matches!(Profile::new(roster, vec![neg]), Err(Error::NegativeWeight(_))));
    }

    #[test]
    fn truncation_preference_semantics() {
        let b = Ballot::unit(vec![PartyId(1), PartyId(0)]);
        assert!(b.prefers(PartyId(1), PartyId(0)));
        assert!(b.prefers(PartyId(0), PartyId(2)));
        assert!(!b.prefers(PartyId(2), PartyId(3)));
        assert!(!b.prefers(PartyId(2), PartyId(0)));
        assert!(b.prefers_to_set(PartyId(0), PartySet::singleton(PartyId(2))));
        assert!(!b.prefers_to_set(PartyId(0), PartySet::singleton(PartyId(1))));
    }

    #[test]
    fn isolate_voter_splits_heavy_ballots() {
        let p = Profile::from_rankings(&["a", "b"], &[(3, "a>b"), (1, "b")]).unwrap();
        let (q, i) = p.isolate_voter(0).unwrap();
        assert_eq!(i, 2);
        assert_eq!(q.ballots()[0].weight, w(2));
        assert_eq!(q.ballots()[2].weight, w(1));
        assert_eq!(q.total_weight(), p.total_weight());
        let (q, i) = p.isolate_voter(1).unwrap();
        assert_eq!((i, q), (1, p));
    }

    fn arb_profile() -> impl Strategy<Value = Profile> {
        (1usize..=5).prop_flat_map(|m| {
            let ballot = (Just(m), proptest::sample::subsequence((0..m).collect::<Vec<_>>(), 0..=m), 1u64..4)
                .prop_shuffle_ranking();
            proptest::collection::vec(ballot, 0..8).prop_map(move |bs| {
                let names: Vec<String> = (0..m).map(|i| format!("p{}", i)).collect();
                let roster = Roster::from_names(&names).unwrap();
                Profile::new(roster, bs).unwrap()
            })
        })
    }

    trait ShuffleRanking {
        fn prop_shuffle_ranking(self) -> BoxedStrategy<Ballot>;
    }

    impl<S: Strategy<Value = (usize, Vec<usize>, u64)> + 'static> ShuffleRanking for S {
        fn prop_shuffle_ranking(self) -> BoxedStrategy<Ballot> {
            self.prop_flat_map(|(_, parties, weight)| {
                Just(parties).prop_shuffle().prop_map(move |order| {
                    Ballot::new(order.into_iter().map(PartyId).collect(), Weight::from(weight))
                })
            })
            .boxed()
        }
    }

    proptest! {
        #[test]
        fn subsets_of_feasible_sets_are_feasible(p in arb_profile(), bits in any::<u64>(), sub in any::<u64>(), tau in 0u64..10) {
            let all = p.roster().all().bits();
            let s = PartySet::from_bits(bits & all);
            let t = PartySet::from_bits(bits & sub & all);
            let tau = Threshold::from(tau);
            if p.is_feasible(s, &tau).unwrap() {
                prop_assert!(p.is_feasible(t, &tau).unwrap());
            }
        }

        #[test]
        fn zero_threshold_makes_everything_feasible(p in arb_profile(), bits in any::<u64>()) {
            let s = PartySet::from_bits(bits & p.roster().all().bits());
            prop_assert!(p.is_feasible(s, &Threshold::from(0)).unwrap());
        }

        #[test]
        fn growing_the_outcome_never_worsens_representatives(p in arb_profile(), bits in any::<u64>(), extra in any::<u64>()) {
            let all = p.roster().all().bits();
            let s = PartySet::from_bits(bits & all);
            let big = PartySet::from_bits((bits | extra) & all);
            for b in p.ballots() {
                match (b.best_position_in(s), b.best_position_in(big)) {
                    (Some(small), Some(large)) => prop_assert!(large <= small),
                    (Some(_), None) => prop_assert!(false),
                    _ => {}
                }
            }
        }

        #[test]
        fn shares_sum_to_one(p in arb_profile(), bits in any::<u64>()) {
            let s = PartySet::from_bits(bits & p.roster().all().bits());
            let a = p.best_assignment(s).unwrap();
            let total: Weight = a.shares.values().sum();
            if a.represented_weight().is_zero() {
                prop_assert!(total.is_zero());
            } else {
                prop_assert_eq!(total, Weight::one());
            }
        }

        #[test]
        fn full_profiles_make_singletons_feasible(m in 1usize..5, n in 1u64..8) {
            let names: Vec<String> = (0..m).map(|i| format!("p{}", i)).collect();
            let roster = Roster::from_names(&names).unwrap();
            let ballots = (0..n).map(|k| {
                let mut r: Vec<PartyId> = (0..m).map(PartyId).collect();
                r.rotate_left(k as usize % m);
                Ballot::unit(r)
            }).collect();
            let p = Profile::new(roster, ballots).unwrap();
            for c in p.roster().ids() {
                prop_assert!(p.is_feasible(PartySet::singleton(c), &Threshold::from(n)).unwrap());
            }
        }
    }
}
