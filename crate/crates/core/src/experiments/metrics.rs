use std::borrow::Cow;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::party_set::PartySet;
use crate::profile::{Profile, Threshold};
use crate::rules::{self, RuleId};
use crate::weight::Weight;

/// A threshold given either as a weight or as a fraction of the total
/// weight of the profile it is applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauPoint {
    Absolute(Weight),
    Relative(Weight),
}

impl TauPoint {
    pub fn resolve(&self, profile: &Profile) -> Result<Threshold> {
        match self {
            TauPoint::Absolute(w) => Threshold::new(w.clone()),
            TauPoint::Relative(f) => Threshold::relative(f, profile),
        }
    }

    /// `steps` evenly spaced thresholds from `from` to `to`, which must be
    /// of the same kind.
    pub fn grid(from: &TauPoint, to: &TauPoint, steps: usize) -> Result<Vec<TauPoint>> {
        match (from, to) {
            (TauPoint::Relative(a), TauPoint::Relative(b)) => TauPoint::relative_grid(a, b, steps),
            (TauPoint::Absolute(a), TauPoint::Absolute(b)) => Ok(TauPoint::relative_grid(a, b, steps)?
                .into_iter()
                .map(|t| match t {
                    TauPoint::Relative(w) | TauPoint::Absolute(w) => TauPoint::Absolute(w),
                })
                .collect()),
            _ => Err(Error::InvalidArgument("grid ends must both be absolute or both relative".into())),
        }
    }

    /// `steps` evenly spaced relative thresholds from `from` to `to`,
    /// both included.
    pub fn relative_grid(from: &Weight, to: &Weight, steps: usize) -> Result<Vec<TauPoint>> {
        if steps == 0 {
            return Err(Error::InvalidArgument("a grid needs at least one step".into()));
        }
        if steps == 1 {
            return Ok(vec![TauPoint::Relative(from.clone())]);
        }
        let span = to - from;
        let last = Weight::from(steps - 1);
        Ok((0..steps)
            .map(|i| TauPoint::Relative(from + &(&span * &Weight::from(i) / &last)))
            .collect())
    }
}

/// Weight of voters ranking no party of `outcome`, over the total weight.
/// Zero on a profile without weight.
pub fn unrepresented_share_of(profile: &Profile, outcome: PartySet) -> Result<Weight> {
    let total = profile.total_weight();
    if total.is_zero() {
        return Ok(Weight::zero());
    }
    let a = profile.best_assignment(outcome)?;
    Ok(a.unrepresented_weight(profile) / total)
}

/// The ballots as `rule` reads them: the uninominal rule only sees first
/// choices.
pub fn effective_profile(profile: &Profile, rule: RuleId) -> Result<Cow<'_, Profile>> {
    if rule == RuleId::Uninominal && profile.max_ranking_len() > 1 {
        Ok(Cow::Owned(profile.truncate(1)?))
    } else {
        Ok(Cow::Borrowed(profile))
    }
}

pub fn unrepresented_share(profile: &Profile, rule: RuleId, tau: &Threshold) -> Result<Weight> {
    let p = effective_profile(profile, rule)?;
    unrepresented_share_of(&p, rules::select(rule, &p, tau)?)
}

/// Share of the total weight whose representative in `outcome` sits at
/// each (1-based) rank of the ballot. Unrepresented weight is not in the
/// histogram.
pub fn rank_distribution_of(profile: &Profile, outcome: PartySet) -> BTreeMap<usize, Weight> {
    let total = profile.total_weight();
    let mut hist = BTreeMap::new();
    if total.is_zero() {
        return hist;
    }
    for b in profile.ballots() {
        if let Some(pos) = b.best_position_in(outcome) {
            *hist.entry(pos + 1).or_insert_with(Weight::zero) += &(&b.weight / total);
        }
    }
    hist
}

pub fn rank_distribution(profile: &Profile, rule: RuleId, tau: &Threshold) -> Result<BTreeMap<usize, Weight>> {
    let p = effective_profile(profile, rule)?;
    Ok(rank_distribution_of(&p, rules::select(rule, &p, tau)?))
}

/// Percentiles of the noisy unrepresented share at one grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoiseBand {
    pub p20: Weight,
    pub median: Weight,
    pub p80: Weight,
    /// Per-sample values, in sample order.
    pub samples: Vec<Weight>,
}

/// One point of a series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoint {
    pub tau: TauPoint,
    /// Threshold as a weight, after resolving a relative one.
    pub tau_weight: Weight,
    /// Truncation length, for truncation sweeps.
    pub k: Option<usize>,
    pub outcome: PartySet,
    pub unrepresented: Weight,
    pub ranks: BTreeMap<usize, Weight>,
    pub noise: Option<NoiseBand>,
}

impl SeriesPoint {
    pub fn parties_selected(&self) -> usize {
        self.outcome.len()
    }

    pub(crate) fn evaluate(profile: &Profile, rule: RuleId, tau: TauPoint, k: Option<usize>) -> Result<Self> {
        let t = tau.resolve(profile)?;
        let profile = &*effective_profile(profile, rule)?;
        let outcome = rules::select(rule, profile, &t)?;
        Ok(SeriesPoint {
            tau_weight: t.value().clone(),
            tau,
            k,
            outcome,
            unrepresented: unrepresented_share_of(profile, outcome)?,
            ranks: rank_distribution_of(profile, outcome),
            noise: None,
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SweepKind {
    Threshold,
    Truncation,
    Noise { samples: usize, sigma: f64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub rule: RuleId,
    pub kind: SweepKind,
    pub points: Vec<SeriesPoint>,
}

/// Runs `rule` at every threshold of `taus`.
pub fn sweep_threshold(profile: &Profile, rule: RuleId, taus: &[TauPoint]) -> Result<ExperimentReport> {
    let points = taus
        .par_iter()
        .map(|t| SeriesPoint::evaluate(profile, rule, t.clone(), None))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        rule,
        kind: SweepKind::Threshold,
        points,
    })
}

/// Runs `rule` at `tau` on the profile truncated to each length of `ks`.
/// A relative `tau` resolves against the (unchanged) total weight.
pub fn sweep_truncation(profile: &Profile, rule: RuleId, tau: &TauPoint, ks: &[usize]) -> Result<ExperimentReport> {
    let points = ks
        .par_iter()
        .map(|&k| {
            let p = profile.truncate(k)?;
            SeriesPoint::evaluate(&p, rule, tau.clone(), Some(k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        rule,
        kind: SweepKind::Truncation,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::profile::Profile;

    fn w(n: i64, d: i64) -> Weight {
        Weight::from_ratio(n, d)
    }

    #[test]
    fn lost_votes_under_uninominal() {
        let p = fixtures::lost_votes_example();
        let tau = Threshold::from(100);
        assert_eq!(unrepresented_share(&p, RuleId::Uninominal, &tau).unwrap(), w(99, 299));
        assert!(unrepresented_share(&p, RuleId::Stv, &tau).unwrap().is_zero());
    }

    #[test]
    fn full_outcome_leaves_only_empty_ballots() {
        let p = Profile::from_rankings(&["a", "b"], &[(2, "a"), (1, ""), (1, "b>a")]).unwrap();
        let all = p.roster().all();
        assert_eq!(unrepresented_share_of(&p, all).unwrap(), w(1, 4));
        assert_eq!(unrepresented_share_of(&p, PartySet::default()).unwrap(), Weight::one());
        assert!(rank_distribution_of(&p, PartySet::default()).is_empty());
    }

    #[test]
    fn example_one_ranks() {
        let p = fixtures::example_one();
        let h = rank_distribution(&p, RuleId::Stv, &Threshold::from(5)).unwrap();
        assert_eq!(h, BTreeMap::from([(1, w(9, 15)), (2, w(6, 15))]));
        let u = fixtures::lost_votes_example().truncate(1).unwrap();
        let h = rank_distribution(&u, RuleId::Gp, &Threshold::from(100)).unwrap();
        assert_eq!(h.keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn grid() {
        let g = TauPoint::relative_grid(&w(1, 100), &w(10, 100), 10).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(g[9], TauPoint::Relative(w(1, 10)));
        assert_eq!(g[4], TauPoint::Relative(w(5, 100)));
        let a = TauPoint::grid(&TauPoint::Absolute(w(0, 1)), &TauPoint::Absolute(w(10, 1)), 3).unwrap();
        assert_eq!(a[1], TauPoint::Absolute(w(5, 1)));
        assert!(TauPoint::grid(&TauPoint::Absolute(w(0, 1)), &TauPoint::Relative(w(1, 2)), 3).is_err());
    }

    #[test]
    fn threshold_sweep_is_monotone_for_do_and_stv() {
        let p = fixtures::five_party_spectrum();
        let taus: Vec<TauPoint> = (0..=40).map(|t| TauPoint::Absolute(Weight::from(t as u64))).collect();
        for rule in [RuleId::Do, RuleId::Stv] {
            let r = sweep_threshold(&p, rule, &taus).unwrap();
            assert!(r.points[0].unrepresented.is_zero());
            for pair in r.points.windows(2) {
                assert!(pair[0].unrepresented <= pair[1].unrepresented);
                assert!(pair[0].parties_selected() >= pair[1].parties_selected());
            }
            for pt in &r.points {
                assert_eq!(pt.ranks.values().sum::<Weight>() + &pt.unrepresented, Weight::one());
            }
        }
    }

    #[test]
    fn truncation_sweep() {
        let p = fixtures::five_party_spectrum();
        let tau = TauPoint::Relative(w(15, 100));
        let r = sweep_truncation(&p, RuleId::Do, &tau, &[1, 2, 3, 4]).unwrap();
        let full = SeriesPoint::evaluate(&p, RuleId::Do, tau.clone(), None).unwrap();
        assert_eq!(r.points[2].outcome, full.outcome);
        assert_eq!(r.points[3].unrepresented, full.unrepresented);
        for pair in r.points.windows(2) {
            assert!(pair[0].unrepresented >= pair[1].unrepresented);
        }
        let k1 = p.truncate(1).unwrap();
        assert_eq!(r.points[0].outcome, rules::select(RuleId::Do, &k1, &Threshold::from(15)).unwrap());
    }
}
