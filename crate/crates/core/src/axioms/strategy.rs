//! Safe, risky and out parties, and the strategyproofness checkers.

use super::{AxiomId, PartyStatus, ShareRestriction, Violation, Witness};
use crate::error::{Error, Result};
use crate::party_set::{PartyId, PartySet};
use crate::profile::{Ballot, Profile, Threshold};
use crate::rules::SelectionRule;
use crate::weight::Weight;

/// Largest roster for which every report of a voter is enumerated.
pub const MISREPORT_GUARD: usize = 6;

/// Every truncated ranking over `m` parties, the empty one included, shortest
/// first and lexicographic within a length.
pub fn misreports(m: usize) -> Result<Vec<Vec<PartyId>>> {
    if m > MISREPORT_GUARD {
        return Err(Error::GuardExceeded {
            what: "misreport enumeration parties",
            limit: MISREPORT_GUARD,
            actual: m,
        });
    }
    let mut layer: Vec<Vec<PartyId>> = vec![Vec::new()];
    let mut out = layer.clone();
    for _ in 0..m {
        let mut next = Vec::new();
        for r in &layer {
            for p in (0..m).map(PartyId) {
                if !r.contains(&p) {
                    let mut longer = r.clone();
                    longer.push(p);
                    next.push(longer);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

/// The outcomes a single voter can bring about.
///
/// The voter is isolated from ballot `ballot` (see [`Profile::isolate_voter`])
/// and every report from [`misreports`] is evaluated once.
#[derive(Clone, Debug)]
pub struct VoterAnalysis {
    /// Profile with the voter as a ballot of its own.
    pub profile: Profile,
    pub voter: usize,
    pub tau: Threshold,
    pub rule: String,
    pub truthful: Vec<PartyId>,
    pub outcome: PartySet,
    pub reports: Vec<Vec<PartyId>>,
    pub outcomes: Vec<PartySet>,
}

impl VoterAnalysis {
    pub fn new(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, ballot: usize) -> Result<Self> {
        Self::build(rule, profile, tau, ballot, false)
    }

    /// Like [`VoterAnalysis::new`], but only evaluates the reports that rank
    /// the truthful representative first (none if the voter is
    /// unrepresented). Statuses computed from such an analysis only reflect
    /// those reports.
    pub fn new_promoting(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, ballot: usize) -> Result<Self> {
        Self::build(rule, profile, tau, ballot, true)
    }

    fn build(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, ballot: usize, promoting: bool) -> Result<Self> {
        let mut reports = misreports(profile.num_parties())?;
        let (base, voter) = profile.isolate_voter(ballot)?;
        let truthful = base.ballots()[voter].ranking.clone();
        let outcome = rule.select(&base, tau)?;
        if promoting {
            let rep = base.ballots()[voter].best_in(outcome);
            reports.retain(|r| rep.is_some() && r.first() == rep.as_ref());
        }
        let mut work = base.clone();
        let mut outcomes = Vec::with_capacity(reports.len());
        for r in &reports {
            if *r == truthful {
                outcomes.push(outcome);
                continue;
            }
            work.set_ranking(voter, r.clone())?;
            outcomes.push(rule.select(&work, tau)?);
        }
        Ok(VoterAnalysis {
            profile: base,
            voter,
            tau: tau.clone(),
            rule: rule.name(),
            truthful,
            outcome,
            reports,
            outcomes,
        })
    }

    /// Parties selected whatever the voter reports.
    pub fn safe(&self) -> PartySet {
        self.outcomes.iter().fold(self.profile.roster().all(), |acc, s| acc.intersection(*s))
    }

    /// Parties selected under some reports but not all.
    pub fn risky(&self) -> PartySet {
        let any = self.outcomes.iter().fold(PartySet::empty(), |acc, s| acc.union(*s));
        any.difference(self.safe())
    }

    pub fn status(&self, party: PartyId) -> PartyStatus {
        if self.safe().contains(party) {
            PartyStatus::Safe
        } else if self.risky().contains(party) {
            PartyStatus::Risky
        } else {
            PartyStatus::Out
        }
    }

    fn ballot(&self) -> &Ballot {
        &self.profile.ballots()[self.voter]
    }

    /// Truthful representative under `outcome`.
    pub fn representative(&self, outcome: PartySet) -> Option<PartyId> {
        self.ballot().best_in(outcome)
    }

    /// At most one party is risky for this voter.
    pub fn one_risky(&self) -> bool {
        self.risky().len() <= 1
    }

    /// The voter's first or second choice is safe.
    pub fn safe_top2(&self) -> bool {
        let safe = self.safe();
        self.truthful.iter().take(2).any(|p| safe.contains(*p))
    }

    fn improves(&self, outcome: PartySet) -> bool {
        match (self.representative(self.outcome), self.representative(outcome)) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(old), Some(new)) => self.ballot().prefers(new, old) && new != old,
        }
    }

    fn admissible(&self, report: &[PartyId], restriction: ShareRestriction) -> bool {
        match restriction {
            ShareRestriction::PromoteRepresentative => match self.representative(self.outcome) {
                Some(c) => report.first() == Some(&c),
                None => false,
            },
            ShareRestriction::None | ShareRestriction::SafeTop2 => true,
        }
    }

    fn violation(&self, axiom: AxiomId, k: usize, restriction: Option<ShareRestriction>, narrative: String) -> Violation {
        Violation {
            axiom,
            rule: self.rule.clone(),
            witness: Witness::Misreport {
                profile: self.profile.clone(),
                tau: self.tau.clone(),
                ballot: self.voter,
                misreport: self.reports[k].clone(),
                restriction,
                outcome: self.outcome,
                outcome_misreport: self.outcomes[k],
            },
            narrative,
        }
    }

    fn improvement_narrative(&self, k: usize) -> String {
        let r = self.profile.roster();
        let name = |p: Option<PartyId>| p.map_or("nobody".to_string(), |p| r.name(p).to_string());
        format!(
            "voter {} ({}) reporting {} moves the outcome from {} to {}, representative {} becomes {}",
            self.voter,
            r.format_ranking(&self.truthful),
            r.format_ranking(&self.reports[k]),
            r.format_set(self.outcome),
            r.format_set(self.outcomes[k]),
            name(self.representative(self.outcome)),
            name(self.representative(self.outcomes[k]))
        )
    }

    /// First report giving the voter a better representative.
    pub fn representative_violation(&self) -> Option<Violation> {
        let k = (0..self.reports.len()).find(|&k| self.improves(self.outcomes[k]))?;
        Some(self.violation(AxiomId::RepSpOneRisky, k, None, self.improvement_narrative(k)))
    }

    /// Share of the truthful representative `c` when the voter reports
    /// report `k`, measured on the profile with that report.
    fn share_under(&self, k: usize, c: PartyId) -> Result<Weight> {
        if !self.outcomes[k].contains(c) {
            return Ok(Weight::zero());
        }
        let mut work = self.profile.clone();
        work.set_ranking(self.voter, self.reports[k].clone())?;
        Ok(work.best_assignment(self.outcomes[k])?.share(c))
    }

    /// First admissible report that improves the representative or raises
    /// the truthful representative's share.
    pub fn share_violation(&self, restriction: ShareRestriction) -> Result<Option<Violation>> {
        let axiom = match restriction {
            ShareRestriction::PromoteRepresentative => AxiomId::ShareSpPromote,
            ShareRestriction::None | ShareRestriction::SafeTop2 => AxiomId::ShareSpSafeTop2,
        };
        let rep = self.representative(self.outcome);
        let base_share = match rep {
            Some(c) => self.profile.best_assignment(self.outcome)?.share(c),
            None => Weight::zero(),
        };
        for k in 0..self.reports.len() {
            if !self.admissible(&self.reports[k], restriction) {
                continue;
            }
            if self.improves(self.outcomes[k]) {
                return Ok(Some(self.violation(axiom, k, Some(restriction), self.improvement_narrative(k))));
            }
            let Some(c) = rep else { continue };
            if self.representative(self.outcomes[k]) != Some(c) {
                continue;
            }
            let share = self.share_under(k, c)?;
            if share > base_share {
                let r = self.profile.roster();
                let narrative = format!(
                    "voter {} ({}) reporting {} raises the share of {} from {} to {}",
                    self.voter,
                    r.format_ranking(&self.truthful),
                    r.format_ranking(&self.reports[k]),
                    r.name(c),
                    base_share,
                    share
                );
                return Ok(Some(self.violation(axiom, k, Some(restriction), narrative)));
            }
        }
        Ok(None)
    }

    /// Index of `report` in [`VoterAnalysis::reports`].
    pub fn report_index(&self, report: &[PartyId]) -> Option<usize> {
        self.reports.iter().position(|r| r == report)
    }
}

/// Status of `party` for the voter of ballot `ballot`.
pub fn classify_party(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    ballot: usize,
    party: PartyId,
) -> Result<PartyStatus> {
    profile.roster().check_set(PartySet::singleton(party))?;
    Ok(VoterAnalysis::new(rule, profile, tau, ballot)?.status(party))
}

/// Whether at most one party is risky for the voter of ballot `ballot`.
pub fn one_risky(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, ballot: usize) -> Result<bool> {
    Ok(VoterAnalysis::new(rule, profile, tau, ballot)?.one_risky())
}

/// Whether the first or second choice of the voter of ballot `ballot` is
/// safe.
pub fn safe_top2(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold, ballot: usize) -> Result<bool> {
    Ok(VoterAnalysis::new(rule, profile, tau, ballot)?.safe_top2())
}

/// Whether every voter has at most one risky party.
pub fn every_voter_one_risky(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<bool> {
    every_voter(profile, |b| one_risky(rule, profile, tau, b))
}

/// Whether every voter has a safe first or second choice.
pub fn every_voter_safe_top2(rule: &dyn SelectionRule, profile: &Profile, tau: &Threshold) -> Result<bool> {
    every_voter(profile, |b| safe_top2(rule, profile, tau, b))
}

fn every_voter(profile: &Profile, mut test: impl FnMut(usize) -> Result<bool>) -> Result<bool> {
    for b in 0..profile.ballots().len() {
        if !test(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No report gives the voter of ballot `ballot` a representative she
/// prefers. The precondition of the one-risky proposition is not checked
/// here; see [`every_voter_one_risky`].
pub fn check_representative_sp(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    ballot: usize,
) -> Result<Option<Violation>> {
    Ok(VoterAnalysis::new(rule, profile, tau, ballot)?.representative_violation())
}

/// No admissible report improves the voter's representative or raises the
/// share of the truthful representative.
pub fn check_share_sp(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    ballot: usize,
    restriction: ShareRestriction,
) -> Result<Option<Violation>> {
    let analysis = match restriction {
        ShareRestriction::PromoteRepresentative => VoterAnalysis::new_promoting(rule, profile, tau, ballot)?,
        ShareRestriction::None | ShareRestriction::SafeTop2 => VoterAnalysis::new(rule, profile, tau, ballot)?,
    };
    analysis.share_violation(restriction)
}

/// Checks one given report rather than all of them. With a restriction the
/// report is also tested for a share increase, provided it is admissible.
pub fn check_misreport(
    rule: &dyn SelectionRule,
    profile: &Profile,
    tau: &Threshold,
    ballot: usize,
    report: &[PartyId],
    restriction: Option<ShareRestriction>,
) -> Result<Option<Violation>> {
    let (base, voter) = profile.isolate_voter(ballot)?;
    let mut work = base.clone();
    work.set_ranking(voter, report.to_vec())?;
    let truthful = base.ballots()[voter].ranking.clone();
    let analysis = VoterAnalysis {
        outcome: rule.select(&base, tau)?,
        outcomes: vec![rule.select(&work, tau)?],
        reports: vec![report.to_vec()],
        profile: base,
        voter,
        tau: tau.clone(),
        rule: rule.name(),
        truthful,
    };
    match restriction {
        None => Ok(analysis.representative_violation()),
        Some(r) => analysis.share_violation(r),
    }
}

/// A voter of a safe party moving an allied party to the top of her ballot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionInsurance {
    pub before: Profile,
    pub after: Profile,
    pub tau: Threshold,
    pub outcome_before: PartySet,
    pub outcome_after: PartySet,
    /// The parties the switching voter likes.
    pub liked: PartySet,
    pub liked_share_before: Weight,
    pub liked_share_after: Weight,
}

/// `{3:a, 3:b, 4:c, 2:d, 1:c≻d}` at `tau = 3`, and the same profile with the
/// last voter reporting `d≻c`, evaluated under `rule`.
pub fn coalition_insurance_fixture(rule: &dyn SelectionRule) -> Result<CoalitionInsurance> {
    let parties = ["a", "b", "c", "d"];
    let before = Profile::from_rankings(&parties, &[(3, "a"), (3, "b"), (4, "c"), (2, "d"), (1, "c>d")])?;
    let after = Profile::from_rankings(&parties, &[(3, "a"), (3, "b"), (4, "c"), (2, "d"), (1, "d>c")])?;
    let tau = Threshold::from(3);
    let liked = before.set_of(&["c", "d"])?;
    let outcome_before = rule.select(&before, &tau)?;
    let outcome_after = rule.select(&after, &tau)?;
    let liked_share = |p: &Profile, s: PartySet| -> Result<Weight> {
        let a = p.best_assignment(s)?;
        Ok(liked.iter().map(|c| a.share(c)).sum())
    };
    Ok(CoalitionInsurance {
        liked_share_before: liked_share(&before, outcome_before)?,
        liked_share_after: liked_share(&after, outcome_after)?,
        before,
        after,
        tau,
        outcome_before,
        outcome_after,
        liked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::RuleId;

    fn prof(parties: &[&str], ballots: &[(u64, &str)]) -> Profile {
        Profile::from_rankings(parties, ballots).unwrap()
    }

    fn ranking(p: &Profile, s: &str) -> Vec<PartyId> {
        s.split('>').map(|n| p.roster().id(n).unwrap()).collect()
    }

    #[test]
    fn misreport_counts() {
        let counts: Vec<usize> = (0..=6).map(|m| misreports(m).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 5, 16, 65, 326, 1957]);
        assert!(misreports(7).unwrap_err().is_guard());
    }

    #[test]
    fn statuses() {
        // The first voter can also report c first, which selects {c}.
        let p = prof(&["a", "b", "c"], &[(1, "b>a"), (1, "c>a")]);
        let tau = Threshold::from(2);
        let a = VoterAnalysis::new(&RuleId::Stv, &p, &tau, 0).unwrap();
        assert_eq!(a.status(PartyId(0)), PartyStatus::Risky);
        assert_eq!(a.status(PartyId(1)), PartyStatus::Out);
        assert_eq!(a.status(PartyId(2)), PartyStatus::Risky);
        assert!(!a.one_risky());
        let p = prof(&["a", "b", "c"], &[(1, "b>c"), (1, "a>b")]);
        let a = VoterAnalysis::new(&RuleId::Stv, &p, &tau, 1).unwrap();
        assert_eq!(a.risky(), p.set_of(&["b"]).unwrap());
        let p = prof(&["a", "b"], &[(3, "a"), (1, "b")]);
        assert_eq!(classify_party(&RuleId::Gp, &p, &Threshold::from(2), 1, PartyId(0)).unwrap(), PartyStatus::Safe);
        let p = prof(&["a"], &[(1, "a")]);
        assert_eq!(classify_party(&RuleId::Do, &p, &Threshold::from(1), 0, PartyId(0)).unwrap(), PartyStatus::Risky);
    }

    #[test]
    fn do_representative_manipulation() {
        let p = prof(&["a", "b", "c"], &[(1, "b>a"), (1, "a>c")]);
        let tau = Threshold::from(2);
        let v = check_misreport(&RuleId::Do, &p, &tau, 0, &ranking(&p, "a>b"), None).unwrap().unwrap();
        assert!(matches!(v.witness, Witness::Misreport { outcome_misreport, .. } if outcome_misreport == p.set_of(&["a"]).unwrap()));
        assert!(check_representative_sp(&RuleId::Do, &p, &tau, 0).unwrap().is_some());
    }

    #[test]
    fn gp_two_risky_manipulation() {
        let p = prof(&["a", "b", "c"], &[(3, "a"), (2, "b>c"), (1, "c>b>a")]);
        let tau = Threshold::from(3);
        assert!(!one_risky(&RuleId::Gp, &p, &tau, 2).unwrap());
        let r = ranking(&p, "c>a>b");
        assert!(check_misreport(&RuleId::Gp, &p, &tau, 2, &r, None).unwrap().is_some());
        let v = check_representative_sp(&RuleId::Gp, &p, &tau, 2).unwrap().unwrap();
        assert_eq!(v.replay(&RuleId::Gp).unwrap(), Some(v.clone()));
    }

    #[test]
    fn gp_share_manipulation_with_safe_top2() {
        let p = prof(&["a", "c", "b"], &[(1, "a>b"), (5, "a"), (3, "b>c"), (3, "c>a")]);
        let tau = Threshold::from(4);
        assert!(safe_top2(&RuleId::Gp, &p, &tau, 0).unwrap());
        let r = ranking(&p, "b");
        let v = check_misreport(&RuleId::Gp, &p, &tau, 0, &r, Some(ShareRestriction::SafeTop2)).unwrap().unwrap();
        assert!(v.narrative.contains("from 0.5 to 2/3"), "{}", v.narrative);
        assert!(check_share_sp(&RuleId::Gp, &p, &tau, 0, ShareRestriction::SafeTop2).unwrap().is_some());
        assert!(check_share_sp(&RuleId::Stv, &p, &tau, 0, ShareRestriction::SafeTop2).unwrap().is_some());
    }

    #[test]
    fn stv_share_manipulation_promoting_representative() {
        let p = prof(
            &["a", "b", "c", "d"],
            &[(10, "b"), (4, "c>d"), (3, "d>c"), (2, "d>b"), (3, "a>c>d"), (1, "a>b>c>d")],
        );
        let tau = Threshold::from(10);
        let r = ranking(&p, "b>a>c>d");
        let v = check_misreport(&RuleId::Stv, &p, &tau, 5, &r, Some(ShareRestriction::PromoteRepresentative))
            .unwrap()
            .unwrap();
        assert!(v.narrative.contains("from 11/23 to 13/23"), "{}", v.narrative);
        assert!(check_share_sp(&RuleId::Do, &p, &tau, 5, ShareRestriction::PromoteRepresentative).unwrap().is_none());
    }

    #[test]
    fn promote_admits_nothing_for_unrepresented_voter() {
        let p = prof(&["a", "b"], &[(1, "b"), (3, "a")]);
        let tau = Threshold::from(2);
        let a = VoterAnalysis::new(&RuleId::Do, &p, &tau, 0).unwrap();
        assert_eq!(a.representative(a.outcome), None);
        assert!(a.share_violation(ShareRestriction::PromoteRepresentative).unwrap().is_none());
    }

    #[test]
    fn coalition_insurance() {
        for rule in [RuleId::Do, RuleId::Stv, RuleId::Gp] {
            let f = coalition_insurance_fixture(&rule).unwrap();
            assert_eq!(f.outcome_before, f.before.set_of(&["a", "b", "c"]).unwrap());
            assert_eq!(f.outcome_after, f.before.roster().all());
            assert_eq!(f.liked_share_before, Weight::from_ratio(5, 11));
            assert_eq!(f.liked_share_after, Weight::from_ratio(7, 13));
        }
    }
}
