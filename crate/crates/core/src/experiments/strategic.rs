use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::survey::{OfficialShares, RankingSource, SurveyRow};
use crate::axioms::PartyStatus;
use crate::error::{Error, Result};
use crate::party_set::PartyId;
use crate::weight::Weight;

/// Cut points, as fractions of the vote, splitting parties into safe, risky
/// and out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketCuts {
    /// Safe at or above this share.
    pub safe_min: Weight,
    /// Risky between these two shares, inclusive.
    pub risky_min: Weight,
    pub risky_max: Weight,
    /// Out strictly below this share.
    pub out_below: Weight,
}

impl Default for BucketCuts {
    fn default() -> Self {
        BucketCuts {
            safe_min: Weight::from_ratio(7, 100),
            risky_min: Weight::from_ratio(5, 100),
            risky_max: Weight::from_ratio(6, 100),
            out_below: Weight::from_ratio(3, 100),
        }
    }
}

impl BucketCuts {
    /// From percentages in the order safe, risky low, risky high, out.
    pub fn from_percentages(p: [Weight; 4]) -> Result<Self> {
        let hundred = Weight::from(100u64);
        let [safe_min, risky_min, risky_max, out_below] = p.map(|x| x / &hundred);
        if !(out_below <= risky_min && risky_min <= risky_max && risky_max <= safe_min) {
            return Err(Error::InvalidArgument(
                "bucket cuts must satisfy out <= risky low <= risky high <= safe".into(),
            ));
        }
        if out_below.is_negative() || safe_min > Weight::one() {
            return Err(Error::InvalidArgument("bucket cuts must lie in [0, 100]".into()));
        }
        Ok(BucketCuts {
            safe_min,
            risky_min,
            risky_max,
            out_below,
        })
    }

    /// The bucket of a share, and whether it fell in a gap between buckets
    /// and was assigned to the nearest one. Equidistant gap shares go to
    /// risky.
    pub fn classify(&self, share: &Weight) -> (PartyStatus, bool) {
        if *share >= self.safe_min {
            (PartyStatus::Safe, false)
        } else if *share >= self.risky_min && *share <= self.risky_max {
            (PartyStatus::Risky, false)
        } else if *share < self.out_below {
            (PartyStatus::Out, false)
        } else if *share > self.risky_max {
            let to_safe = &self.safe_min - share;
            let to_risky = share - &self.risky_max;
            (if to_safe < to_risky { PartyStatus::Safe } else { PartyStatus::Risky }, true)
        } else {
            let to_out = share - &self.out_below;
            let to_risky = &self.risky_min - share;
            (if to_out < to_risky { PartyStatus::Out } else { PartyStatus::Risky }, true)
        }
    }
}

/// Official shares and buckets of every party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyBuckets {
    pub shares: OfficialShares,
    pub status: BTreeMap<PartyId, PartyStatus>,
    /// Parties whose share fell in a gap.
    pub flagged: Vec<PartyId>,
}

impl PartyBuckets {
    /// Buckets for parties `0..m`. Parties without an official share count
    /// as share 0.
    pub fn new(m: usize, shares: &OfficialShares, cuts: &BucketCuts) -> Self {
        let mut status = BTreeMap::new();
        let mut flagged = Vec::new();
        let mut all = OfficialShares::new();
        for p in (0..m).map(PartyId) {
            let s = shares.get(&p).cloned().unwrap_or_default();
            let (b, gap) = cuts.classify(&s);
            status.insert(p, b);
            if gap {
                flagged.push(p);
            }
            all.insert(p, s);
        }
        PartyBuckets {
            shares: all,
            status,
            flagged,
        }
    }

    pub fn status(&self, p: PartyId) -> PartyStatus {
        self.status.get(&p).copied().unwrap_or(PartyStatus::Out)
    }

    pub fn share(&self, p: PartyId) -> Weight {
        self.shares.get(&p).cloned().unwrap_or_default()
    }
}

/// How a respondent's first-ranked party `c` relates to her intention `c*`.
///
/// The `Down*` categories rank first a party with a lower official score
/// than the intention, named first-ranked bucket → intention bucket.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategicCategory {
    Inconsistent,
    Sincere,
    DownOutSafe,
    DownOutRisky,
    DownRiskySafe,
    DownOther,
    /// Higher score, safe party first and risky intention.
    UpSafeRisky,
    UpOther,
}

impl StrategicCategory {
    pub const ALL: [StrategicCategory; 8] = [
        StrategicCategory::Inconsistent,
        StrategicCategory::Sincere,
        StrategicCategory::DownOutSafe,
        StrategicCategory::DownOutRisky,
        StrategicCategory::DownRiskySafe,
        StrategicCategory::DownOther,
        StrategicCategory::UpSafeRisky,
        StrategicCategory::UpOther,
    ];

    pub fn is_down(self) -> bool {
        matches!(
            self,
            StrategicCategory::DownOutSafe
                | StrategicCategory::DownOutRisky
                | StrategicCategory::DownRiskySafe
                | StrategicCategory::DownOther
        )
    }

    pub fn is_up(self) -> bool {
        matches!(self, StrategicCategory::UpSafeRisky | StrategicCategory::UpOther)
    }
}

/// Category of one row, or `None` if the row has no intention.
///
/// Ties in official score between `c` and `c*` count as strategic-up.
pub fn categorize(row: &SurveyRow, buckets: &PartyBuckets, source: RankingSource) -> Option<StrategicCategory> {
    use PartyStatus::*;
    use StrategicCategory::*;
    let target = row.intention?;
    let ranking = row.ranking(source);
    if !ranking.contains(&target) {
        return Some(Inconsistent);
    }
    let first = ranking[0];
    if first == target {
        return Some(Sincere);
    }
    let (sc, st) = (buckets.status(first), buckets.status(target));
    Some(if buckets.share(first) < buckets.share(target) {
        match (sc, st) {
            (Out, Safe) => DownOutSafe,
            (Out, Risky) => DownOutRisky,
            (Risky, Safe) => DownRiskySafe,
            _ => DownOther,
        }
    } else {
        match (sc, st) {
            (Safe, Risky) => UpSafeRisky,
            _ => UpOther,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategicReport {
    pub source: RankingSource,
    /// Weight of each category.
    pub weights: BTreeMap<StrategicCategory, Weight>,
    /// Rows left out for having no intention.
    pub excluded: usize,
    /// Weight of each category over the total classified weight; sums to 1
    /// unless nothing was classified.
    pub fractions: BTreeMap<StrategicCategory, Weight>,
}

impl StrategicReport {
    pub fn fraction(&self, c: StrategicCategory) -> Weight {
        self.fractions.get(&c).cloned().unwrap_or_default()
    }

    pub fn down(&self) -> Weight {
        self.fractions.iter().filter(|(c, _)| c.is_down()).map(|(_, w)| w).sum()
    }

    pub fn up(&self) -> Weight {
        self.fractions.iter().filter(|(c, _)| c.is_up()).map(|(_, w)| w).sum()
    }
}

/// Weighted strategic classification of the rows, using their attached
/// weights.
pub fn classify_strategic(rows: &[SurveyRow], buckets: &PartyBuckets, source: RankingSource) -> StrategicReport {
    let mut weights: BTreeMap<StrategicCategory, Weight> =
        StrategicCategory::ALL.iter().map(|c| (*c, Weight::zero())).collect();
    let mut excluded = 0;
    for r in rows {
        match categorize(r, buckets, source) {
            Some(c) => *weights.get_mut(&c).expect("all categories present") += &r.weight,
            None => excluded += 1,
        }
    }
    let total: Weight = weights.values().sum();
    let fractions = weights
        .iter()
        .map(|(c, w)| (*c, if total.is_zero() { Weight::zero() } else { w / &total }))
        .collect();
    StrategicReport {
        source,
        weights,
        excluded,
        fractions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use StrategicCategory::*;

    fn pct(x: i64) -> Weight {
        Weight::from_ratio(x, 100)
    }

    fn buckets() -> PartyBuckets {
        // 0 safe (30%), 1 safe (8%), 2 risky (5%), 3 out (1%), 4 out (2%).
        let shares = [(0, 30), (1, 8), (2, 5), (3, 1), (4, 2)].iter().map(|&(p, s)| (PartyId(p), pct(s))).collect();
        PartyBuckets::new(5, &shares, &BucketCuts::default())
    }

    fn row(intention: Option<usize>, ranking: &[usize]) -> SurveyRow {
        let r: Vec<PartyId> = ranking.iter().map(|&p| PartyId(p)).collect();
        SurveyRow {
            respondent: String::new(),
            intention: intention.map(PartyId),
            two_vote: r.iter().take(2).copied().collect(),
            full_ranking: r,
            completed_at: None,
            weight: Weight::one(),
        }
    }

    #[test]
    fn cut_points() {
        let cuts = BucketCuts::default();
        assert_eq!(cuts.classify(&pct(7)), (PartyStatus::Safe, false));
        assert_eq!(cuts.classify(&pct(6)), (PartyStatus::Risky, false));
        assert_eq!(cuts.classify(&Weight::from_ratio(299, 10000)), (PartyStatus::Out, false));
        assert_eq!(cuts.classify(&Weight::from_ratio(68, 1000)), (PartyStatus::Safe, true));
        assert_eq!(cuts.classify(&Weight::from_ratio(65, 1000)), (PartyStatus::Risky, true));
        assert_eq!(cuts.classify(&Weight::from_ratio(35, 1000)), (PartyStatus::Out, true));
        assert_eq!(cuts.classify(&pct(4)), (PartyStatus::Risky, true));
        let p = |x: u64| Weight::from(x);
        assert!(BucketCuts::from_percentages([p(3), p(5), p(6), p(7)]).is_err());
        assert_eq!(BucketCuts::from_percentages([p(7), p(5), p(6), p(3)]).unwrap(), cuts);
    }

    #[test]
    fn categories() {
        let b = buckets();
        let src = RankingSource::Full;
        assert_eq!(categorize(&row(Some(0), &[0, 1]), &b, src), Some(Sincere));
        assert_eq!(categorize(&row(Some(0), &[1, 2]), &b, src), Some(Inconsistent));
        assert_eq!(categorize(&row(Some(0), &[3, 0]), &b, src), Some(DownOutSafe));
        assert_eq!(categorize(&row(Some(2), &[4, 2]), &b, src), Some(DownOutRisky));
        assert_eq!(categorize(&row(Some(1), &[2, 1]), &b, src), Some(DownRiskySafe));
        assert_eq!(categorize(&row(Some(0), &[1, 0]), &b, src), Some(DownOther));
        assert_eq!(categorize(&row(Some(2), &[1, 2]), &b, src), Some(UpSafeRisky));
        assert_eq!(categorize(&row(Some(3), &[0, 3]), &b, src), Some(UpOther));
        assert_eq!(categorize(&row(None, &[0]), &b, src), None);
        // The two-vote ranking may drop the intention.
        assert_eq!(categorize(&row(Some(0), &[3, 4, 0]), &b, RankingSource::TwoVote), Some(Inconsistent));
    }

    #[test]
    fn weighted_fractions_sum_to_one() {
        let mut rows = vec![row(Some(0), &[0]), row(Some(0), &[3, 0]), row(None, &[]), row(Some(1), &[2])];
        rows[1].weight = Weight::from(2u64);
        let r = classify_strategic(&rows, &buckets(), RankingSource::Full);
        assert_eq!(r.excluded, 1);
        assert_eq!(r.fraction(Sincere), Weight::from_ratio(1, 4));
        assert_eq!(r.fraction(DownOutSafe), Weight::from_ratio(1, 2));
        assert_eq!(r.fraction(Inconsistent), Weight::from_ratio(1, 4));
        assert_eq!(r.down(), Weight::from_ratio(1, 2));
        assert_eq!(r.fractions.values().sum::<Weight>(), Weight::one());
    }
}
