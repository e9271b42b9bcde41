use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::party_set::PartyId;
use crate::profile::{Ballot, Profile, Roster};
use crate::weight::Weight;

/// One survey respondent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub respondent: String,
    /// The party the respondent intends to vote for (or voted for).
    pub intention: Option<PartyId>,
    /// Ranking given with at most two votes.
    pub two_vote: Vec<PartyId>,
    pub full_ranking: Vec<PartyId>,
    pub completed_at: Option<NaiveDate>,
    pub weight: Weight,
}

impl SurveyRow {
    pub fn ranking(&self, source: RankingSource) -> &[PartyId] {
        match source {
            RankingSource::TwoVote => &self.two_vote,
            RankingSource::Full => &self.full_ranking,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingSource {
    TwoVote,
    Full,
}

/// Official result of every party, as a fraction of valid votes.
pub type OfficialShares = BTreeMap<PartyId, Weight>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weighting {
    pub weights: BTreeMap<String, Weight>,
    /// Official share of parties with no respondent intending to vote for
    /// them.
    pub uncovered: Weight,
}

/// Post-stratification on the intention.
///
/// A respondent intending `c` gets `official(c) / sample(c)`, where
/// `sample(c)` is the fraction of respondents with an intention who intend
/// `c`, rescaled so the weights of respondents with an intention sum to
/// their number. Respondents without an intention, or intending a party
/// with no official share, get weight 0.
pub fn compute_weights(rows: &[SurveyRow], official: &OfficialShares) -> Result<Weighting> {
    if let Some((_, w)) = official.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::NegativeWeight(w.to_string()));
    }
    let total: Weight = official.values().sum();
    if total > Weight::one() {
        return Err(Error::InvalidArgument(format!("official shares sum to {}", total)));
    }
    let mut counts: BTreeMap<PartyId, u64> = BTreeMap::new();
    for r in rows {
        if let Some(c) = r.intention {
            *counts.entry(c).or_default() += 1;
        }
    }
    let with_intention: u64 = counts.values().sum();
    let covered: Weight = counts.keys().filter_map(|c| official.get(c)).sum();
    let uncovered = official
        .iter()
        .filter(|(c, w)| !w.is_zero() && !counts.contains_key(c))
        .map(|(_, w)| w)
        .sum();
    let n = Weight::from(with_intention);
    let weights = rows
        .iter()
        .map(|r| {
            let w = match r.intention {
                Some(c) if !covered.is_zero() => {
                    let share = official.get(&c).cloned().unwrap_or_default();
                    share * &n / (Weight::from(counts[&c]) * &covered)
                }
                _ => Weight::zero(),
            };
            (r.respondent.clone(), w)
        })
        .collect();
    Ok(Weighting { weights, uncovered })
}

/// Copies the weights onto the rows. Rows missing from `weighting` get 0.
pub fn apply_weights(rows: &mut [SurveyRow], weighting: &Weighting) {
    for r in rows {
        r.weight = weighting.weights.get(&r.respondent).cloned().unwrap_or_default();
    }
}

/// The weighted profile of one of the rankings. Rows of weight 0 are left
/// out.
pub fn survey_profile(rows: &[SurveyRow], roster: Arc<Roster>, source: RankingSource) -> Result<Profile> {
    let ballots = rows
        .iter()
        .filter(|r| !r.weight.is_zero())
        .map(|r| Ballot::new(r.ranking(source).to_vec(), r.weight.clone()))
        .collect();
    Profile::with_shared_roster(roster, ballots)
}

/// The profile in which everyone ranks only her intention, as under a
/// single vote.
pub fn intention_profile(rows: &[SurveyRow], roster: Arc<Roster>) -> Result<Profile> {
    let ballots = rows
        .iter()
        .filter(|r| !r.weight.is_zero())
        .map(|r| Ballot::new(r.intention.into_iter().collect(), r.weight.clone()))
        .collect();
    Profile::with_shared_roster(roster, ballots)
}

/// The intention of every row that [`survey_profile`] keeps, in the same
/// order; used to group ballots in the noise model.
pub fn intention_groups(rows: &[SurveyRow]) -> Vec<Option<PartyId>> {
    rows.iter().filter(|r| !r.weight.is_zero()).map(|r| r.intention).collect()
}
