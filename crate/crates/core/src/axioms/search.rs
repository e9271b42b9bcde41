//! Seeded random search for axiom violations.
//!
//! Trial `k` draws everything from its own generator, seeded from the search
//! seed and `k`, so results do not depend on how trials are spread over
//! threads. The reported violation is the one with the smallest trial index.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_clone_independence, check_direct_winners, check_idlp, find_clones, check_local_stability_of, check_monotonicity,
    check_reinforcement, check_set_maximality, check_solid_coalitions, check_threshold_monotonicity,
    check_unrepresented_of, check_weak_efficiency, AxiomId, ShareRestriction, Violation, VoterAnalysis,
    MISREPORT_GUARD,
};
use crate::error::{Error, Result};
use crate::party_set::PartyId;
use crate::profile::{Ballot, Party, Profile, Roster, Threshold};
use crate::rules::SelectionRule;

/// Size of the sampled instances.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_parties: usize,
    pub max_voters: usize,
    /// Inclusive range the threshold is drawn from, clipped to `0..=n`. The
    /// full range when absent.
    pub tau_range: Option<(u64, u64)>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_parties: 5,
            max_voters: 10,
            tau_range: None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Only sample generic profiles.
    pub generic_only: bool,
    /// Draws per trial before a trial that keeps failing the profile filter
    /// is skipped.
    pub max_resamples: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            generic_only: false,
            max_resamples: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Violation { trial: u64, violation: Box<Violation> },
    /// `checked` counts trials that met the axiom's precondition and were
    /// actually tested; `skipped` those for which no acceptable profile was
    /// drawn.
    Pass { trials: u64, checked: u64, skipped: u64 },
}

impl SearchOutcome {
    pub fn violation(&self) -> Option<&Violation> {
        match self {
            SearchOutcome::Violation { violation, .. } => Some(violation),
            SearchOutcome::Pass { .. } => None,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, SearchOutcome::Pass { .. })
    }
}

enum Trial {
    Skipped,
    Unchecked,
    Checked,
    Violated(Violation),
}

/// Generator for trial `trial` of a search seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    // splitmix64 of the pair, so neighbouring trials get unrelated streams.
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

fn party_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{}", i)
    }
}

/// Roster of `m` parties named `a`, `b`, ... with a random priority order.
pub fn random_roster<R: Rng>(rng: &mut R, m: usize) -> Arc<Roster> {
    let mut prio: Vec<usize> = (0..m).collect();
    prio.shuffle(rng);
    let parties = prio
        .into_iter()
        .enumerate()
        .map(|(i, priority)| Party {
            name: party_name(i),
            priority,
        })
        .collect();
    Arc::new(Roster::new(parties).expect("valid roster"))
}

/// A ranking of uniform length over a uniformly shuffled roster.
pub fn random_ranking<R: Rng>(rng: &mut R, m: usize) -> Vec<PartyId> {
    let len = rng.random_range(0..=m);
    let mut all: Vec<PartyId> = (0..m).map(PartyId).collect();
    all.shuffle(rng);
    all.truncate(len);
    all
}

/// `n` unit-weight ballots over `roster`.
pub fn random_profile<R: Rng>(rng: &mut R, roster: Arc<Roster>, n: usize) -> Profile {
    let m = roster.len();
    let ballots = (0..n).map(|_| Ballot::unit(random_ranking(rng, m))).collect();
    Profile::with_shared_roster(roster, ballots).expect("valid profile")
}

fn draw_tau<R: Rng>(rng: &mut R, n: usize, bounds: &SearchBounds) -> Threshold {
    let n = n as u64;
    let (lo, hi) = bounds.tau_range.map_or((0, n), |(lo, hi)| (lo.min(n), hi.min(n)));
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    Threshold::from(rng.random_range(lo..=hi))
}

/// A random instance within `bounds`: at least one party and one voter.
pub fn random_instance<R: Rng>(rng: &mut R, bounds: &SearchBounds) -> (Profile, Threshold) {
    let m = rng.random_range(1..=bounds.max_parties.max(1));
    let n = rng.random_range(1..=bounds.max_voters.max(1));
    let roster = random_roster(rng, m);
    let profile = random_profile(rng, roster, n);
    let tau = draw_tau(rng, n, bounds);
    (profile, tau)
}

/// A random profile in which the last party is a clone of party `c`: each
/// ballot ranking `c` gets the copy placed directly above or below it.
pub fn random_clone_instance<R: Rng>(rng: &mut R, bounds: &SearchBounds) -> (Profile, Threshold, (PartyId, PartyId)) {
    let m = rng.random_range(2..=bounds.max_parties.max(2));
    let n = rng.random_range(1..=bounds.max_voters.max(1));
    let roster = random_roster(rng, m);
    let c = PartyId(rng.random_range(0..m - 1));
    let copy = PartyId(m - 1);
    let ballots = (0..n)
        .map(|_| {
            let mut r = random_ranking(rng, m - 1);
            if let Some(k) = r.iter().position(|&p| p == c) {
                let at = if rng.random_bool(0.5) { k } else { k + 1 };
                r.insert(at, copy);
            }
            Ballot::unit(r)
        })
        .collect();
    let profile = Profile::with_shared_roster(roster, ballots).expect("valid profile");
    let tau = draw_tau(rng, n, bounds);
    (profile, tau, (c, copy))
}

fn acceptable(profile: &Profile, options: &SearchOptions) -> Result<bool> {
    if options.generic_only {
        profile.is_generic()
    } else {
        Ok(true)
    }
}

fn draw<R: Rng, T>(
    rng: &mut R,
    options: &SearchOptions,
    mut sample: impl FnMut(&mut R) -> T,
    profile_of: impl Fn(&T) -> &Profile,
) -> Result<Option<T>> {
    for _ in 0..options.max_resamples.max(1) {
        let x = sample(rng);
        if acceptable(profile_of(&x), options)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn from_check(v: Option<Violation>) -> Trial {
    v.map_or(Trial::Checked, Trial::Violated)
}

fn run_trial(
    axiom: AxiomId,
    rule: &dyn SelectionRule,
    bounds: &SearchBounds,
    options: &SearchOptions,
    seed: u64,
    trial: u64,
) -> Result<Trial> {
    let mut rng = trial_rng(seed, trial);
    let rng = &mut rng;

    if axiom == AxiomId::CloneIndependence {
        let Some((p, tau, pair)) = draw(rng, options, |r| random_clone_instance(r, bounds), |x| &x.0)? else {
            return Ok(Trial::Skipped);
        };
        return Ok(from_check(check_clone_independence(rule, &p, &tau, pair)?));
    }
    if axiom == AxiomId::Reinforcement {
        let sample = |r: &mut ChaCha8Rng| {
            let m = r.random_range(1..=bounds.max_parties.max(1));
            let roster = random_roster(r, m);
            let n1 = r.random_range(1..=bounds.max_voters.max(1));
            let n2 = r.random_range(1..=bounds.max_voters.max(1));
            let p1 = random_profile(r, roster.clone(), n1);
            let p2 = random_profile(r, roster, n2);
            let t1 = draw_tau(r, n1, bounds);
            let t2 = draw_tau(r, n2, bounds);
            (p1, t1, p2, t2)
        };
        let Some((p1, t1, p2, t2)) = draw(rng, options, sample, |x| &x.0)? else {
            return Ok(Trial::Skipped);
        };
        if options.generic_only && !p2.is_generic()? {
            return Ok(Trial::Skipped);
        }
        return Ok(from_check(check_reinforcement(rule, &p1, &t1, &p2, &t2)?));
    }

    let Some((p, tau)) = draw(rng, options, |r| random_instance(r, bounds), |x| &x.0)? else {
        return Ok(Trial::Skipped);
    };
    Ok(match check_instance(axiom, rule, &p, &tau)? {
        InstanceCheck::Violated(v) => Trial::Violated(v),
        InstanceCheck::Checked => Trial::Checked,
        InstanceCheck::Unchecked => Trial::Unchecked,
    })
}

/// Result of checking one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceCheck {
    Violated(Violation),
    Checked,
    /// Nothing met the axiom's precondition.
    Unchecked,
}

impl From<Option<Violation>> for InstanceCheck {
    fn from(v: Option<Violation>) -> Self {
        v.map_or(InstanceCheck::Checked, InstanceCheck::Violated)
    }
}

/// Ballots with distinct (ranking, weight); splitting a voter off either of
/// two equal ballots gives the same profile.
fn distinct_ballots(profile: &Profile) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    (0..profile.ballots().len())
        .filter(|&i| {
            let b = &profile.ballots()[i];
            seen.insert((b.ranking.clone(), b.weight.clone()))
        })
        .collect()
}

/// Checks `axiom` on one profile and threshold, over every free parameter:
/// every integer `tau' >= tau` up to the total weight for the threshold
/// axioms, every pair of clones, every ballot and selected party for
/// monotonicity, and every ballot meeting the precondition for the
/// strategyproofness axioms. Reinforcement needs two profiles; see
/// [`check_reinforcement`].
pub fn check_instance(axiom: AxiomId, rule: &dyn SelectionRule, p: &Profile, tau: &Threshold) -> Result<InstanceCheck> {
    let check = match axiom {
        AxiomId::SetMaximality => check_set_maximality(rule, p, tau)?.into(),
        AxiomId::WeakEfficiency => check_weak_efficiency(rule, p, tau)?.into(),
        AxiomId::DirectWinners => check_direct_winners(rule, p, tau)?.into(),
        AxiomId::SolidCoalitions => check_solid_coalitions(rule, p, tau)?.into(),
        AxiomId::LocalStability => check_local_stability_of(rule, p, tau)?.into(),
        AxiomId::Unrepresented => check_unrepresented_of(rule, p, tau)?.into(),
        AxiomId::ThresholdMonotonicity | AxiomId::Idlp => {
            let lo: u64 = tau.value().ceil_integer().try_into().unwrap_or(0);
            let n: u64 = p.total_weight().ceil_integer().try_into().unwrap_or(u64::MAX);
            for t in lo..=n {
                let tp = Threshold::from(t);
                let v = if axiom == AxiomId::Idlp {
                    check_idlp(rule, p, tau, &tp)?
                } else {
                    check_threshold_monotonicity(rule, p, tau, &tp)?
                };
                if let Some(v) = v {
                    return Ok(InstanceCheck::Violated(v));
                }
            }
            InstanceCheck::Checked
        }
        AxiomId::CloneIndependence => {
            let pairs = find_clones(p);
            for &pair in &pairs {
                if let Some(v) = check_clone_independence(rule, p, tau, pair)? {
                    return Ok(InstanceCheck::Violated(v));
                }
            }
            if pairs.is_empty() {
                InstanceCheck::Unchecked
            } else {
                InstanceCheck::Checked
            }
        }
        AxiomId::Reinforcement => {
            return Err(Error::InvalidArgument("reinforcement is checked on two profiles".into()));
        }
        AxiomId::Monotonicity => {
            let s = rule.select(p, tau)?;
            for ballot in distinct_ballots(p) {
                for c in s.iter() {
                    if let Some(v) = check_monotonicity(rule, p, tau, ballot, c)? {
                        return Ok(InstanceCheck::Violated(v));
                    }
                }
            }
            InstanceCheck::Checked
        }
        AxiomId::RepSpOneRisky | AxiomId::ShareSpSafeTop2 | AxiomId::ShareSpPromote => {
            if p.num_parties() > MISREPORT_GUARD {
                return Err(Error::GuardExceeded {
                    what: "misreport enumeration parties",
                    limit: MISREPORT_GUARD,
                    actual: p.num_parties(),
                });
            }
            if axiom == AxiomId::ShareSpPromote {
                let mut checked = false;
                for ballot in distinct_ballots(p) {
                    let a = VoterAnalysis::new_promoting(rule, p, tau, ballot)?;
                    if a.reports.is_empty() {
                        continue;
                    }
                    checked = true;
                    if let Some(v) = a.share_violation(ShareRestriction::PromoteRepresentative)? {
                        return Ok(InstanceCheck::Violated(v));
                    }
                }
                return Ok(if checked { InstanceCheck::Checked } else { InstanceCheck::Unchecked });
            }
            // The precondition is on the profile: it must hold for every voter.
            let analyses = distinct_ballots(p)
                .into_iter()
                .map(|b| VoterAnalysis::new(rule, p, tau, b))
                .collect::<Result<Vec<_>>>()?;
            let holds = |a: &VoterAnalysis| match axiom {
                AxiomId::RepSpOneRisky => a.one_risky(),
                _ => a.safe_top2(),
            };
            if !analyses.iter().all(holds) {
                return Ok(InstanceCheck::Unchecked);
            }
            for a in &analyses {
                let v = match axiom {
                    AxiomId::RepSpOneRisky => a.representative_violation(),
                    _ => a.share_violation(ShareRestriction::SafeTop2)?,
                };
                if let Some(v) = v {
                    return Ok(InstanceCheck::Violated(v));
                }
            }
            InstanceCheck::Checked
        }
    };
    Ok(check)
}

const CHUNK: u64 = 256;

/// [`random_search_with`] with default options.
pub fn random_search(
    axiom: AxiomId,
    rule: &dyn SelectionRule,
    trials: u64,
    bounds: SearchBounds,
    seed: u64,
) -> Result<SearchOutcome> {
    random_search_with(axiom, rule, trials, bounds, seed, SearchOptions::default())
}

/// Runs `trials` seeded trials and returns the violation with the smallest
/// trial index, or a pass report.
///
/// Threshold axioms compare the drawn `tau` against every integer threshold
/// up to the number of voters. The one-risky and safe-top-2 axioms count a
/// trial only if every voter meets the precondition, and then check every
/// voter; the promote variant checks every represented voter. Other trials
/// count as unchecked.
pub fn random_search_with(
    axiom: AxiomId,
    rule: &dyn SelectionRule,
    trials: u64,
    bounds: SearchBounds,
    seed: u64,
    options: SearchOptions,
) -> Result<SearchOutcome> {
    if bounds.max_parties == 0 || bounds.max_voters == 0 {
        return Err(Error::InvalidArgument("search bounds must be positive".into()));
    }
    if bounds.max_parties > crate::rules::PARALLEL_UNIVERSE_GUARD {
        return Err(Error::GuardExceeded {
            what: "search parties",
            limit: crate::rules::PARALLEL_UNIVERSE_GUARD,
            actual: bounds.max_parties,
        });
    }
    let (mut checked, mut skipped) = (0u64, 0u64);
    let mut start = 0;
    while start < trials {
        let end = (start + CHUNK).min(trials);
        let results: Vec<Result<Trial>> = (start..end)
            .into_par_iter()
            .map(|k| run_trial(axiom, rule, &bounds, &options, seed, k))
            .collect();
        for (k, r) in (start..end).zip(results) {
            match r? {
                Trial::Violated(v) => {
                    return Ok(SearchOutcome::Violation {
                        trial: k,
                        violation: Box::new(v),
                    })
                }
                Trial::Checked => checked += 1,
                Trial::Unchecked => {}
                Trial::Skipped => skipped += 1,
            }
        }
        start = end;
    }
    Ok(SearchOutcome::Pass {
        trials,
        checked,
        skipped,
    })
}
